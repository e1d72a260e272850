import itertools
import math

import numpy as np
import pytest

from convwalk import annuli, f2
from convwalk import group_models as gm


def rng_():
    return np.random.default_rng(11)


def test_annulus_invariants():
    with pytest.raises(ValueError):
        annuli.Annulus(gm.f2_set(["a"]), gm.f2_set(["ab"]))  # sides not disjoint
    with pytest.raises(ValueError):
        annuli.Annulus(gm.f2_set(["a", "b"]), gm.f2_set(["A", "B"]))  # nothing left over
    A = annuli.default_generator_annulus(gm.F2)
    assert A.negate().minus == A.plus


def test_annulus_less_basics():
    A = annuli.default_generator_annulus(gm.F2)
    assert not annuli.annulus_less(A, A)
    aiA = annuli.translate_annulus(gm.f2_element("A"), A)
    assert annuli.annulus_less(aiA, A)
    assert not annuli.annulus_less(A, aiA)


def test_annulus_less_arc_gap():
    A = annuli.Annulus(gm.ClosedSet(gm.PSL2Z, arcs=((4.0, 1.0),)),
                       gm.ClosedSet(gm.PSL2Z, arcs=((0.0, math.pi),)))
    B = annuli.Annulus(gm.ClosedSet(gm.PSL2Z, arcs=((math.pi - 0.1, math.pi),)),
                       gm.ClosedSet(gm.PSL2Z, arcs=((0.5, 0.3),)))
    # int A.plus u int B.minus misses points near 2*pi - 0.05
    assert not annuli.annulus_less(A, B)


def test_set_less_examples():
    A = annuli.default_generator_annulus(gm.F2)
    aiA = annuli.translate_annulus(gm.f2_element("A"), A)
    p_in = gm.f2_point("AA", "b")
    assert annuli.set_less([p_in], A)
    assert not annuli.set_less([gm.f2_point("a", "b")], A)
    # {a^-2 b^inf, a^-3 b^inf} < a^-1 A (both in C(a^-2))
    K = [gm.f2_point("AA", "b"), gm.f2_point("AAA", "b")]
    assert annuli.set_less(K, aiA)
    # a point on the plus side is never < A
    assert not annuli.set_less([gm.f2_point("a", "b")], aiA)
    # closed-set version
    assert annuli.set_less(gm.f2_set(["AA"]), aiA)
    assert annuli.annulus_less_set(aiA, gm.f2_set(["b"]))


def test_crossratio_worked_examples():
    sys0 = annuli.build_system(gm.F2, 0)
    K = [gm.f2_point("A", "b"), gm.f2_point("AA", "b")]
    L = [gm.f2_point("a", "b"), gm.f2_point("aa", "b")]
    assert sys0.crossratio(K, L) == 1

    sys1 = annuli.build_system(gm.F2, 1)
    K = [gm.f2_point("AA", "b"), gm.f2_point("AAA", "b")]
    L = [gm.f2_point("aa", "b"), gm.f2_point("aaa", "b")]
    assert sys1.crossratio(K, L) == 3

    # K intersecting L gives 0
    p = gm.f2_point("", "a")
    assert sys1.crossratio([p, gm.f2_point("", "b")], [p, gm.f2_point("", "B")]) == 0


def brute_crossratio(sysm, K, L):
    """Exhaustive longest-chain search, independent of the DP."""
    n = len(sysm.annuli)
    srcs = [i for i in range(n) if annuli.set_less(K, sysm.annuli[i])]
    snks = {i for i in range(n) if annuli.annulus_less_set(sysm.annuli[i], L)}
    best = 0

    def dfs(i, depth):
        nonlocal best
        if i in snks and depth > best:
            best = depth
        for j in sysm.succ[i]:
            dfs(j, depth + 1)

    for i in srcs:
        dfs(i, 1)
    return best


def test_crossratio_agrees_with_exhaustive_search():
    rng = rng_()
    sys1 = annuli.build_system(gm.F2, 1)
    sys2 = annuli.build_system(gm.F2, 2)
    for _ in range(60):
        K = [gm.random_boundary_point(gm.F2, rng) for _ in range(2)]
        L = [gm.random_boundary_point(gm.F2, rng) for _ in range(2)]
        for sysm in (sys1, sys2):
            assert sysm.crossratio(K, L) == brute_crossratio(sysm, K, L)


def test_crossratio_monotone_in_ball_radius():
    rng = rng_()
    systems = [annuli.build_system(gm.F2, r) for r in (0, 1, 2, 3)]
    for _ in range(50):
        K = [gm.random_boundary_point(gm.F2, rng) for _ in range(2)]
        L = [gm.random_boundary_point(gm.F2, rng) for _ in range(2)]
        vals = [s.crossratio(K, L) for s in systems]
        assert all(a <= b for a, b in zip(vals, vals[1:]))


def test_system_symmetry():
    for model in (gm.F2, gm.PSL2Z):
        sysm = annuli.build_system(model, 2)
        keys = {A.key() for A in sysm.annuli}
        for A in sysm.annuli:
            assert A.negate().key() in keys


def test_crossratio_equivariance_at_matched_truncation():
    rng = rng_()
    sys2 = annuli.build_system(gm.F2, 2)
    for _ in range(25):
        g = gm.random_group_element(gm.F2, rng, int(rng.integers(1, 4)))
        moved = annuli.translate_system(g, sys2)
        K = [gm.random_boundary_point(gm.F2, rng) for _ in range(2)]
        L = [gm.random_boundary_point(gm.F2, rng) for _ in range(2)]
        gK = [gm.act(g, p) for p in K]
        gL = [gm.act(g, p) for p in L]
        assert moved.crossratio(gK, gL) == sys2.crossratio(K, L)


def test_translate_system_matches_rebuilt_adjacency():
    # the copied order relation is the genuine one for the translated annuli
    sys1 = annuli.build_system(gm.F2, 1)
    g = gm.f2_element("ba")
    moved = annuli.translate_system(g, sys1)
    for i, A in enumerate(moved.annuli):
        for j, B in enumerate(moved.annuli):
            if i != j:
                assert (j in moved.succ[i]) == annuli.annulus_less(A, B)


def test_persistence_roundtrip(tmp_path):
    for model in (gm.F2, gm.PSL2Z):
        sysm = annuli.build_system(model, 2)
        path = tmp_path / f"{model}.json"
        annuli.save_system(sysm, path)
        loaded = annuli.load_system(path)
        assert len(loaded) == len(sysm)
        assert loaded.succ == sysm.succ
        rng = rng_()
        for _ in range(10):
            K = [gm.random_boundary_point(model, rng) for _ in range(2)]
            L = [gm.random_boundary_point(model, rng) for _ in range(2)]
            assert loaded.crossratio(K, L) == sysm.crossratio(K, L)


def test_ball_zero_contains_generator_pair():
    sys0 = annuli.build_system(gm.F2, 0)
    assert len(sys0) == 2  # the generator annulus and its negation
