"""The crossratio quasimetric on distinct triples and derived geometry.

The distance between two triples is the maximum, over the nine ways of
picking an unordered pair from each, of the chain-length crossratio of
the two pairs.  With a symmetric annulus system this is symmetric and
vanishes on the diagonal; the triangle inequality only holds up to an
additive constant, which is estimated empirically together with the
four-point hyperbolicity defect.

Also here: displacement profiles of group elements acting on triples,
crossratio growth profiles of a single boundary point (the computable
probe separating finite from infinite boundary points), and the
necessary-condition indicator for membership in a boundary ball.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .annuli import AnnulusSystem, build_system
from .group_models import (
    F2,
    PSL2Z,
    BoundaryPoint,
    GroupElement,
    power,
)
from .triple_space import Triple, act_triple, random_triple


@dataclass(frozen=True)
class QuasiDistance:
    """A truncated quasimetric value together with its truncation radius."""

    value: int
    ball_radius: int

    def __int__(self):
        return self.value


def _pair_masks(sys: AnnulusSystem, x: Triple):
    masks = [sys.point_masks(p) for p in x.points()]
    out = []
    for i, j in ((0, 1), (0, 2), (1, 2)):
        out.append((masks[i][0] & masks[j][0], masks[i][1] & masks[j][1]))
    return out


def rho_value(x: Triple, y: Triple, sys: AnnulusSystem) -> int:
    """max over component pairs of the pair-to-pair crossratio."""
    if x.model != sys.model or y.model != sys.model:
        raise ValueError("triple/system model mismatch")
    xm = _pair_masks(sys, x)
    ym = _pair_masks(sys, y)
    best = 0
    for xsrc, _ in xm:
        for _, ysnk in ym:
            v = sys.chain_length(xsrc, ysnk)
            if v > best:
                best = v
    return best


def rho(x: Triple, y: Triple, sys: AnnulusSystem) -> QuasiDistance:
    return QuasiDistance(rho_value(x, y, sys), sys.ball_radius)


def gromov_product(x: Triple, y: Triple, p: Triple, sys: AnnulusSystem) -> Fraction:
    """(x . y)_p = (rho(p,x) + rho(p,y) - rho(x,y)) / 2, kept exact.

    May be negative; the defect witnesses how far rho is from a true
    metric and is deliberately not clamped.
    """
    return Fraction(rho_value(p, x, sys) + rho_value(p, y, sys) - rho_value(x, y, sys), 2)


@dataclass(frozen=True)
class HyperbolicityReport:
    delta_estimate: Fraction
    triangle_defect: int
    samples: int
    seed: int


def estimate_hyperbolicity(samples: int, sys: AnnulusSystem, seed: int,
                           point_kw: dict | None = None) -> HyperbolicityReport:
    """Empirical additive triangle defect and four-point delta.

    Over random triples (x, y, z) the triangle defect is
    max(rho(x,y) - rho(x,z) - rho(z,y), 0); over random 4-point
    configurations the delta estimate is the worst failure of the
    reverse triangle inequality min{(x.z)_p, (y.z)_p} - (x.y)_p.
    """
    if samples < 100:
        raise ValueError("need at least 100 samples")
    rng = np.random.default_rng(seed)
    kw = point_kw or {}
    tri_defect = 0
    delta = Fraction(0)
    for _ in range(samples):
        x = random_triple(sys.model, rng, **kw)
        y = random_triple(sys.model, rng, **kw)
        z = random_triple(sys.model, rng, **kw)
        p = random_triple(sys.model, rng, **kw)
        d = rho_value(x, y, sys) - rho_value(x, z, sys) - rho_value(z, y, sys)
        if d > tri_defect:
            tri_defect = d
        gxy = gromov_product(x, y, p, sys)
        gxz = gromov_product(x, z, p, sys)
        gyz = gromov_product(y, z, p, sys)
        defect = min(gxz, gyz) - gxy
        if defect > delta:
            delta = defect
    return HyperbolicityReport(delta, tri_defect, samples, seed)


@dataclass(frozen=True)
class DisplacementProfile:
    element: GroupElement
    entries: tuple  # (n, rho(x, g^n x))
    flagged: bool   # PSL2Z: element is not hyperbolic (elliptic/parabolic)


def loxodromic_displacement(g: GroupElement, x: Triple, n_max: int,
                            sys: AnnulusSystem) -> DisplacementProfile:
    """Displacement profile n -> rho(x, g^n x) for n = 0..n_max."""
    flagged = False
    if g.model == F2:
        if not g.word:
            raise ValueError("needs a nontrivial element")
    else:
        p, _, _, s = g.mat
        if abs(p + s) <= 2:
            flagged = True
    entries = []
    gn = power(g, 0)
    for n in range(n_max + 1):
        entries.append((n, rho_value(x, act_triple(gn, x), sys)))
        gn = None if n == n_max else _mul(gn, g)
    return DisplacementProfile(g, tuple(entries), flagged)


def _mul(a, b):
    from .group_models import multiply

    return multiply(a, b)


def pair_crossratio_to_point(a: BoundaryPoint, b: BoundaryPoint, p: BoundaryPoint,
                             radii, generator=None,
                             systems: dict | None = None) -> list[tuple[int, int]]:
    """Profile of ({a, b} | {p}) over truncation radii.

    A plateauing profile is evidence that p is a finite boundary point;
    unbounded growth is evidence of an infinite boundary point.
    """
    if p == a or p == b:
        raise ValueError("the probed point must differ from the pair")
    out = []
    for r in radii:
        sys = systems.get(r) if systems else None
        if sys is None:
            sys = build_system(a.model, r, generator)
            if systems is not None:
                systems[r] = sys
        out.append((r, sys.crossratio([a, b], [p])))
    return out


@dataclass(frozen=True)
class BoundaryBallIndicator:
    """Parameters of the computable surrogate for a boundary ball."""

    center: Triple
    radius: int

    def __post_init__(self):
        if self.radius < 0:
            raise ValueError("radius must be nonnegative")


def in_boundary_ball_necessary(p: BoundaryPoint, ind: BoundaryBallIndicator,
                               sys: AnnulusSystem) -> bool:
    """Necessary condition for p to lie in the boundary ball around the center.

    True iff every component pair of the center has pair crossratio to
    {p} at most the radius, at the system's truncation.
    """
    _, psnk = sys.point_masks(p)
    for src, _ in _pair_masks(sys, ind.center):
        if sys.chain_length(src, psnk) > ind.radius:
            return False
    return True
