import math

import numpy as np
import pytest

from convwalk import circle, f2
from convwalk import group_models as gm


def rng_():
    return np.random.default_rng(1234)


# ---------------------------------------------------------------------------
# act
# ---------------------------------------------------------------------------

def test_act_identity_fixes_points():
    p = gm.f2_point("ab", "a")
    assert gm.act(gm.identity(gm.F2), p) == p
    q = gm.circle_point(angle=1.3)
    assert gm.points_equal(gm.act(gm.identity(gm.PSL2Z), q), q)


def test_act_forced_cancellation():
    # a . (a^-1 b^inf) = b^inf
    out = gm.act(gm.f2_element("a"), gm.f2_point("A", "b"))
    assert (out.prefix, out.block) == ("", "b")


def test_parabolic_fixes_infinity():
    T = gm.psl2z_element(1, 1, 0, 1)
    inf = gm.rational_point(1, 0)
    assert gm.points_equal(gm.act(T, inf), inf)


def test_act_rejects_model_mismatch():
    with pytest.raises(gm.ModelMismatch):
        gm.act(gm.f2_element("a"), gm.circle_point(angle=0.5))


def test_act_is_a_group_action():
    rng = rng_()
    for _ in range(1000):
        g = gm.random_group_element(gm.F2, rng, int(rng.integers(0, 5)))
        h = gm.random_group_element(gm.F2, rng, int(rng.integers(0, 5)))
        p = gm.random_boundary_point(gm.F2, rng)
        assert gm.act(g, gm.act(h, p)) == gm.act(gm.multiply(g, h), p)
    for _ in range(1000):
        g = gm.random_group_element(gm.PSL2Z, rng, int(rng.integers(0, 5)))
        h = gm.random_group_element(gm.PSL2Z, rng, int(rng.integers(0, 5)))
        p = gm.random_boundary_point(gm.PSL2Z, rng)
        d = gm.distance(gm.act(g, gm.act(h, p)), gm.act(gm.multiply(g, h), p))
        assert d <= 1e-9


# ---------------------------------------------------------------------------
# act_set
# ---------------------------------------------------------------------------

def test_act_set_identity():
    S = gm.f2_set(["ab", "B"])
    assert gm.act_set(gm.identity(gm.F2), S) == S


def test_act_set_worked_examples():
    # a^-1 . C(a^-1) = C(a^-2)
    S = gm.act_set(gm.f2_element("A"), gm.f2_set(["A"]))
    assert S.cylinders == ("AA",)
    # a^-1 . C(a) = complement of C(a^-1)
    S = gm.act_set(gm.f2_element("A"), gm.f2_set(["a"]))
    assert S.cylinders == ("B", "a", "b")


def test_act_set_membership_commutes_exhaustively():
    # p in S  <=>  g.p in g.S, over all cylinders of depth <= 4
    elements = [gm.f2_element(w) for w in ("a", "A", "ba", "Ab", "BB", "aBa")]
    for depth in (1, 2, 3, 4):
        for w in f2.words_of_length(depth):
            S = gm.f2_set([w])
            gS = {g.word: gm.act_set(g, S) for g in elements}
            for head in (w, w[:-1] + ("b" if w[-1] not in "bB" else "a")):
                if not f2.is_reduced(head):
                    continue
                p = gm.f2_point(head, head[-1])
                for g in elements:
                    assert gm.set_contains(S, p) == gm.set_contains(gS[g.word], gm.act(g, p))


def test_act_set_membership_commutes_circle():
    rng = rng_()
    for _ in range(1000):
        g = gm.random_group_element(gm.PSL2Z, rng, 3)
        S = gm.circle_set([(float(rng.uniform(0, circle.TAU)),
                            float(rng.uniform(0.1, 2.0)))])
        p = gm.random_boundary_point(gm.PSL2Z, rng)
        if min(circle.circ_dist(p.angle(), s % circle.TAU)
               for s0, l in S.arcs for s in (s0, s0 + l)) < 1e-6:
            continue
        assert gm.set_contains(S, p) == gm.set_contains(gm.act_set(g, S), gm.act(g, p))


def test_north_south_images_enter_cylinders_with_explicit_threshold():
    # images of any probe avoiding a^-inf enter C(a^k) once n > k + probe depth
    rng = rng_()
    probe = []
    while len(probe) < 8:
        p = gm.random_boundary_point(gm.PSL2Z if False else gm.F2, rng)
        if p.head(1) != "A":
            probe.append(p)
    for k in (1, 2, 3, 4):
        n = k + 4  # probes above never cancel more than 3 letters of a^n
        g = gm.f2_element("a" * n)
        for p in probe:
            assert gm.act(g, p).head(k) == "a" * k


# ---------------------------------------------------------------------------
# convergence_subsequence
# ---------------------------------------------------------------------------

def _probe_f2(rng, avoid="A"):
    probe = []
    while len(probe) < 10:
        p = gm.random_boundary_point(gm.F2, rng)
        if p.head(1) != avoid:
            probe.append(p)
    return probe


def test_convergence_subsequence_powers_of_a():
    rng = rng_()
    seq = [gm.f2_element("a" * n) for n in range(4, 16)]
    rep = gm.convergence_subsequence(seq, _probe_f2(rng))
    assert rep.conclusive
    assert rep.attracting.head(4) == "aaaa"
    assert rep.repelling.head(4) == "AAAA"


def test_convergence_subsequence_identity_powers_inconclusive():
    rng = rng_()
    seq = [gm.identity(gm.F2)] * 5
    rep = gm.convergence_subsequence(seq, _probe_f2(rng))
    assert not rep.conclusive
    assert "distinct" in rep.reason


def test_convergence_subsequence_hyperbolic_eigendirections():
    # oracle: the eigenvectors of the matrix, computed independently
    H = np.array([[2.0, 1.0], [1.0, 1.0]])
    evals, evecs = np.linalg.eig(H)
    order = np.argsort(-np.abs(evals))
    v_att = evecs[:, order[0]]
    v_rep = evecs[:, order[1]]
    att = circle.angle_of(circle.normalize_vec(*v_att))
    rep_angle = circle.angle_of(circle.normalize_vec(*v_rep))

    rng = rng_()
    probe = [gm.random_boundary_point(gm.PSL2Z, rng) for _ in range(10)]
    seq = [gm.power(gm.psl2z_element(2, 1, 1, 1), n) for n in range(3, 12)]
    report = gm.convergence_subsequence(seq, probe)
    assert report.conclusive
    assert circle.circ_dist(report.attracting.angle(), att) < 1e-6
    assert circle.circ_dist(report.repelling.angle(), rep_angle) < 1e-6


# ---------------------------------------------------------------------------
# type invariants
# ---------------------------------------------------------------------------

def test_group_element_validation():
    with pytest.raises(ValueError):
        gm.f2_element("aA")
    with pytest.raises(ValueError):
        gm.psl2z_element(1, 2, 3, 4)
    # sign normalization: first nonzero entry positive
    g = gm.psl2z_element(-2, -1, -1, -1)
    assert g.mat == (2, 1, 1, 1)


def test_boundary_point_validation():
    with pytest.raises(ValueError):
        gm.f2_point("a", "")
    with pytest.raises(ValueError):
        gm.f2_point("a", "Ab")  # junction aA is not reduced
    with pytest.raises(ValueError):
        gm.f2_point("", "aA")  # block does not repeat reduced
    p = gm.BoundaryPoint(gm.PSL2Z, vec=(3.0, 4.0))
    assert abs(math.hypot(*p.vec) - 1.0) < 1e-12


def test_closed_set_validation():
    with pytest.raises(ValueError):
        gm.f2_set([])
    with pytest.raises(ValueError):
        gm.f2_set(["a", "A", "b", "B"])  # whole boundary is not proper
    S = gm.f2_set(["aa", "ab", "aB"])
    assert S.cylinders == ("a",)  # irredundant normal form
