import cmath
import math

import numpy as np
import pytest

from convwalk import group_models as gm
from convwalk import triple_space as ts


def rng_():
    return np.random.default_rng(77)


# ---------------------------------------------------------------------------
# Tukia membership
# ---------------------------------------------------------------------------

def test_membership_counts_components():
    U = ts.cylinder_neighborhood("a")
    all_in = ts.Triple(gm.f2_point("a", "b"), gm.f2_point("ab", "a"), gm.f2_point("aB", "a"))
    one_in = ts.Triple(gm.f2_point("a", "b"), gm.f2_point("b", "a"), gm.f2_point("B", "a"))
    assert ts.in_tukia_neighborhood(all_in, U)
    assert not ts.in_tukia_neighborhood(one_in, U)
    # two components in C(a) out of three mixed
    x = ts.Triple(gm.f2_point("a", "b"), gm.f2_point("abb", "a"), gm.f2_point("B", "a"))
    assert ts.in_tukia_neighborhood(x, U)


def test_triple_invariant_rejects_coincident_components():
    p = gm.f2_point("", "a")
    with pytest.raises(ValueError):
        ts.Triple(p, p, gm.f2_point("", "b"))
    with pytest.raises(ValueError):
        ts.Triple(gm.circle_point(angle=0.1), gm.circle_point(angle=0.1 + 1e-12),
                  gm.circle_point(angle=2.0))


# ---------------------------------------------------------------------------
# Sequential convergence
# ---------------------------------------------------------------------------

def test_pinned_pair_converges():
    p = gm.f2_point("", "a")
    schedule = ts.neighborhood_basis(p, [1, 2, 3])
    alpha = gm.f2_point("", "b")
    seq = [ts.Triple(alpha, gm.f2_point("a" * n, "b"), p) for n in range(1, 25)]
    assert ts.triple_converges_to(seq, p, schedule)


def test_component_pinned_away_blocks_convergence():
    p = gm.f2_point("", "a")
    schedule = ts.neighborhood_basis(p, [1, 2])
    seq = [ts.Triple(gm.f2_point("", "b"), gm.f2_point("B", "a"),
                     gm.f2_point("a" * n, "b")) for n in range(1, 25)]
    assert not ts.triple_converges_to(seq, p, schedule)


def test_growing_prefix_triples_converge():
    p = gm.f2_point("", "a")
    schedule = ts.neighborhood_basis(p, [1, 2, 3, 4])
    seq = [ts.Triple(gm.f2_point("", "b"), gm.f2_point("a" * n, "b"), p)
           for n in range(1, 41)]
    assert ts.triple_converges_to(seq, p, schedule)


def test_schedule_must_be_nested():
    p = gm.f2_point("", "a")
    basis = ts.neighborhood_basis(p, [2, 1])  # built shallower-first after sort? no: as given
    with pytest.raises(ValueError):
        ts.triple_converges_to([ts.basepoint(gm.F2)], p, basis)


def test_circle_convergence():
    p = gm.circle_point(angle=1.0)
    schedule = ts.neighborhood_basis(p, [2, 3, 4])
    seq = [ts.Triple(gm.circle_point(angle=1.0 + 2.0 / n), p,
                     gm.circle_point(angle=4.0)) for n in range(1, 60)]
    assert ts.triple_converges_to(seq, p, schedule)


# ---------------------------------------------------------------------------
# The group compactification
# ---------------------------------------------------------------------------

def test_in_G_neighborhood_examples():
    U = ts.cylinder_neighborhood("a")
    base = ts.basepoint(gm.F2)
    x2 = ts.Triple(gm.f2_point("a", "b"), gm.f2_point("ab", "a"), gm.f2_point("B", "a"))
    assert ts.in_G_neighborhood(gm.identity(gm.F2), U, x2)
    assert ts.in_G_neighborhood(gm.f2_element("a" * 20), U, base)
    assert not ts.in_G_neighborhood(gm.f2_element("b" * 20), U, base)


def test_G_neighborhood_equivariance():
    rng = rng_()
    base = ts.basepoint(gm.F2)
    U = ts.cylinder_neighborhood("a")
    for _ in range(50):
        g = gm.random_group_element(gm.F2, rng, int(rng.integers(0, 5)))
        h = gm.random_group_element(gm.F2, rng, int(rng.integers(1, 4)))
        lhs = ts.in_G_neighborhood(gm.multiply(h, g), ts.translate_neighborhood(h, U), base)
        rhs = ts.in_G_neighborhood(g, U, base)
        assert lhs == rhs


def test_boundary_convergence_is_basepoint_independent():
    # sequences g_n = a^n h, random h: the verdict g_n -> a^inf must not
    # depend on the base triple
    rng = rng_()
    p = gm.f2_point("", "a")
    schedule = ts.neighborhood_basis(p, [1, 2, 3])
    for _ in range(20):
        h = gm.random_group_element(gm.F2, rng, int(rng.integers(0, 3)))
        seq = [gm.multiply(gm.f2_element("a" * n), h) for n in range(4, 24)]
        verdicts = []
        for _ in range(3):
            base = ts.random_triple(gm.F2, rng)
            orbit = [ts.act_triple(g, base) for g in seq]
            verdicts.append(ts.triple_converges_to(orbit, p, schedule))
        assert verdicts[0] and all(v == verdicts[0] for v in verdicts)


# ---------------------------------------------------------------------------
# Disk projection (circle model)
# ---------------------------------------------------------------------------

def test_disk_projection_symmetric_case_is_center():
    x = ts.Triple(gm.circle_point(angle=0.0), gm.circle_point(angle=math.pi),
                  gm.circle_point(angle=math.pi / 2))
    assert abs(ts.disk_projection(x)) < 1e-9


def test_disk_projection_rejects_tree_model():
    with pytest.raises(gm.ModelMismatch):
        ts.disk_projection(ts.basepoint(gm.F2))


def _busemann_foot(ta, tb, tc, steps=4001):
    """Independent oracle: minimize the Busemann cocycle of the ideal
    point c along the geodesic, parametrized through the half-plane."""
    a, b, c = (cmath.exp(1j * t) for t in (ta, tb, tc))
    ah, bh = ts._to_halfplane(a).real, ts._to_halfplane(b).real
    m, r = (ah + bh) / 2.0, abs(bh - ah) / 2.0
    best = None
    for s in np.linspace(-10, 10, steps):
        w = complex(m + r * math.tanh(s), r / math.cosh(s))
        z = ts._to_disk(w)
        busemann = math.log(abs(c - z) ** 2 / (1 - abs(z) ** 2))
        if best is None or busemann < best[0]:
            best = (busemann, z)
    return best[1]


def test_disk_projection_matches_busemann_oracle():
    # fixed worked example a=0, b=pi/2, c=pi (shifted off the map pole)
    sh = 0.3
    angles = (0.0 + sh, math.pi / 2 + sh, math.pi + sh)
    z = ts.disk_projection(ts.Triple(*(gm.circle_point(angle=t) for t in angles)))
    oracle = _busemann_foot(*angles)
    assert ts.disk_distance(z, oracle) < 5e-3  # oracle grid resolution
    rng = rng_()
    for _ in range(25):
        t = rng.uniform(0.02, 2 * math.pi - 0.02, 3)
        if min(abs(t[0] - t[1]), abs(t[1] - t[2]), abs(t[0] - t[2])) < 0.1:
            continue
        z = ts.disk_projection(ts.Triple(*(gm.circle_point(angle=u) for u in t)))
        assert abs(z) < 1.0
        assert ts.disk_distance(z, _busemann_foot(*t)) < 5e-3


def test_cyclic_permutation_feet_stay_close():
    rng = rng_()
    for _ in range(40):
        t = sorted(rng.uniform(0, 2 * math.pi, 3))
        if min(t[1] - t[0], t[2] - t[1], 2 * math.pi - (t[2] - t[0])) < 0.05:
            continue
        x1 = ts.Triple(*(gm.circle_point(angle=u) for u in t))
        x2 = ts.Triple(*(gm.circle_point(angle=u) for u in (t[1], t[2], t[0])))
        d = ts.disk_distance(ts.disk_projection(x1), ts.disk_projection(x2))
        assert d < 2.0


def test_disk_convergence_matches_boundary_convergence():
    # triples whose projections converge to a boundary direction are
    # eventually inside every arc neighborhood of it, and conversely
    rng = rng_()
    for _ in range(50):
        lam = float(rng.uniform(0, 2 * math.pi))
        c = float(rng.uniform(0, 2 * math.pi))
        if ts.circle.circ_dist(lam, c) < 0.3:
            continue
        seq = []
        projections = []
        for n in range(1, 41):
            an = (lam - 1.5 / n) % (2 * math.pi)
            bn = (lam + 1.5 / n) % (2 * math.pi)
            if min(ts.circle.circ_dist(an, c), ts.circle.circ_dist(bn, c)) < 1e-3:
                continue
            x = ts.Triple(gm.circle_point(angle=an), gm.circle_point(angle=bn),
                          gm.circle_point(angle=c))
            seq.append(x)
            projections.append(ts.disk_projection(x))
        # disk points approach the boundary direction lam
        euclid_target = cmath.exp(1j * lam)
        assert abs(projections[-1] - euclid_target) < abs(projections[0] - euclid_target)
        assert abs(projections[-1]) > 0.8
        p = gm.circle_point(angle=lam)
        schedule = ts.neighborhood_basis(p, [2, 3])
        assert ts.triple_converges_to(seq, p, schedule)


def test_neighborhood_complement_constructor():
    S = gm.f2_set(["a", "b"])
    U = ts.complement_neighborhood(S)
    assert U.contains(gm.f2_point("B", "a"))
    assert not U.contains(gm.f2_point("a", "b"))
    Sc = gm.circle_set([(0.0, 1.0)])
    Uc = ts.complement_neighborhood(Sc)
    assert Uc.contains(gm.circle_point(angle=2.0))
    assert not Uc.contains(gm.circle_point(angle=0.5))
