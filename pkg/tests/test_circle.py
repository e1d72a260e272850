import math

import numpy as np
import pytest

from convwalk import circle

TAU = circle.TAU


def test_normalize_vec_canonical_sign():
    x, y = circle.normalize_vec(-2.0, -2.0)
    assert y > 0 and abs(math.hypot(x, y) - 1) < 1e-12
    x, y = circle.normalize_vec(-3.0, 0.0)
    assert x > 0 and y == 0


def test_angle_roundtrip():
    for theta in np.linspace(0.01, TAU - 0.01, 37):
        assert circle.circ_dist(circle.angle_of(circle.vec_from_angle(theta)), theta) < 1e-12


def test_matrix_normalization_and_inverse():
    m = circle.normalize_mat((-1, 0, 0, -1))
    assert m == (1, 0, 0, 1)
    g = circle.normalize_mat((2, 1, 1, 1))
    assert circle.mat_mul(g, circle.mat_inv(g)) == (1, 0, 0, 1)
    with pytest.raises(ValueError):
        circle.normalize_mat((1, 1, 1, 1))


def test_mat_ball_growth():
    sizes = [len(circle.mat_ball(r)) for r in range(4)]
    assert sizes[0] == 1
    assert all(a < b for a, b in zip(sizes, sizes[1:]))


def test_hyperbolic_fixed_angles_are_fixed():
    m = (2, 1, 1, 1)
    att, rep = circle.hyperbolic_fixed_angles(m)
    for theta in (att, rep):
        img = circle.angle_of(circle.mat_apply(m, circle.vec_from_angle(theta)))
        assert circle.circ_dist(img, theta) < 1e-9
    # attracting really attracts
    probe = circle.vec_from_angle(att + 0.5)
    for _ in range(40):
        probe = circle.mat_apply(m, probe)
    assert circle.circ_dist(circle.angle_of(probe), att) < 1e-6


def test_arc_membership_interior_vs_closed():
    arc = (1.0, 2.0)
    assert circle.arc_contains(arc, 1.0)
    assert circle.arc_contains(arc, 1.0 + 1e-6)
    assert not circle.arc_contains(arc, 1.0, interior=True)
    assert circle.arc_contains(arc, 2.0, interior=True)
    assert not circle.arc_contains(arc, 3.0 + 1e-6)


def test_merge_arcs_wraparound():
    merged = circle.merge_arcs([(6.0, 0.5), (0.16, 1.0)])
    assert len(merged) == 1
    s, l = merged[0]
    assert abs(s - 6.0) < 1e-12 and abs(l - (TAU - 6.0 + 1.16)) < 1e-9
    with pytest.raises(ValueError):
        circle.merge_arcs([(0.0, 4.0), (3.5, 3.5)])


def test_cover_requires_overlap_not_touching():
    # interiors that merely touch leave the touch point uncovered
    assert not circle.arcs_cover_circle([(0.0, math.pi), (math.pi, math.pi)])
    assert circle.arcs_cover_circle([(0.0, math.pi + 0.01), (math.pi, math.pi + 0.01)])
    # spec-style gap example
    assert not circle.arcs_cover_circle([(0.0, math.pi), (math.pi - 0.1, math.pi)])


def test_arc_subset():
    assert circle.arc_subset((1.0, 0.5), [(0.5, 2.0)])
    assert circle.arc_subset((6.0, 1.0), [(5.5, 2.0)])  # wraps
    assert not circle.arc_subset((1.0, 2.0), [(1.5, 0.2)])
    assert circle.arc_subset((1.0, 2.0), [(0.9, 1.0), (1.8, 1.5)])
    assert not circle.arc_subset((1.0, 2.0), [(0.9, 1.0), (2.2, 1.5)])


def test_arc_image_preserves_membership():
    rng = np.random.default_rng(0)
    mats = circle.mat_ball(3)
    for _ in range(200):
        m = mats[int(rng.integers(len(mats)))]
        arc = (float(rng.uniform(0, TAU)), float(rng.uniform(0.2, 2.5)))
        theta = float(rng.uniform(0, TAU))
        if min(circle.circ_dist(theta, arc[0]),
               circle.circ_dist(theta, (arc[0] + arc[1]) % TAU)) < 1e-6:
            continue
        inside = circle.arc_contains(arc, theta)
        img = circle.arc_image(m, arc)
        img_theta = circle.angle_of(circle.mat_apply(m, circle.vec_from_angle(theta)))
        assert circle.arc_contains(img, img_theta) == inside
