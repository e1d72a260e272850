"""Convergence-group actions, crossratio quasimetrics, and random walks.

Two concrete models (the rank-2 free group on its tree boundary, and
the modular group on the projective circle) drive a common toolkit:
annulus-chain crossratios and the quasimetric they induce on distinct
triples, empirical hyperbolicity and displacement profiles, random
walks converging to the boundary, hitting/stationary measures, and the
measure-level probes built on top of them.
"""

__version__ = "0.1.0"

from .group_models import (  # noqa: F401
    F2,
    PSL2Z,
    BoundaryPoint,
    ClosedSet,
    GroupElement,
    act,
    act_set,
    circle_point,
    convergence_subsequence,
    f2_element,
    f2_point,
    identity,
    inverse,
    multiply,
    power,
    psl2z_element,
    rational_point,
    word_ball,
)
from .annuli import (  # noqa: F401
    Annulus,
    AnnulusSystem,
    annulus_less,
    annulus_less_set,
    build_system,
    default_generator_annulus,
    set_less,
)
from .triple_space import (  # noqa: F401
    Triple,
    TukiaNeighborhood,
    act_triple,
    arc_neighborhood,
    basepoint,
    cylinder_neighborhood,
    disk_projection,
    in_G_neighborhood,
    in_tukia_neighborhood,
    neighborhood_basis,
    triple_converges_to,
)
from .quasimetric import (  # noqa: F401
    BoundaryBallIndicator,
    QuasiDistance,
    estimate_hyperbolicity,
    gromov_product,
    in_boundary_ball_necessary,
    loxodromic_displacement,
    pair_crossratio_to_point,
    rho,
    rho_value,
)
from .walks import (  # noqa: F401
    BinFunction,
    EmpiricalMeasure,
    SamplePath,
    StepDistribution,
    cesaro_proximality,
    check_stationarity,
    cylinder_indicator,
    dirichlet_extension,
    estimate_finite_boundary_mass,
    estimate_hitting_measure,
    exact_hitting_measure_f2,
    point_mass,
    sample_path,
    sat_probe,
    uniform_f2,
    uniform_psl2z,
    walk_boundary_limit,
)
