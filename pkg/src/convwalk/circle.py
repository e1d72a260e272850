"""Boundary-circle geometry for the modular group model.

Points of the projective line are stored as canonical unit vectors
(x, y) with y > 0, or x > 0 when y = 0.  The circle coordinate of a
projective point is the doubled direction angle, which identifies the
projective line with a circle of circumference 2*pi; integer matrices
of determinant one then act by orientation-preserving circle
homeomorphisms, so the image of an arc is the arc between the images of
its endpoints.

Closed subsets are finite unions of closed arcs, each stored as
(start, length) with start in [0, 2*pi) and 0 < length < 2*pi.  All
comparisons use the angular tolerance ANGLE_TOL.
"""

from __future__ import annotations

import math

TAU = 2.0 * math.pi
ANGLE_TOL = 1e-9

# PSL(2, Z) generators: the inversion and the unit translations.
GEN_S = (0, -1, 1, 0)
GEN_T = (1, 1, 0, 1)
GEN_T_INV = (1, -1, 0, 1)


# ---------------------------------------------------------------------------
# Projective points
# ---------------------------------------------------------------------------

def normalize_vec(x: float, y: float) -> tuple[float, float]:
    n = math.hypot(x, y)
    if n == 0.0:
        raise ValueError("projective point needs a nonzero vector")
    x, y = x / n, y / n
    if y < 0.0 or (y == 0.0 and x < 0.0):
        x, y = -x, -y
    return (x, y)


def angle_of(vec: tuple[float, float]) -> float:
    """Circle coordinate of a projective point, in [0, 2*pi)."""
    return (2.0 * math.atan2(vec[1], vec[0])) % TAU


def vec_from_angle(theta: float) -> tuple[float, float]:
    phi = (theta % TAU) / 2.0
    return normalize_vec(math.cos(phi), math.sin(phi))


def circ_dist(t1: float, t2: float) -> float:
    d = abs(t1 - t2) % TAU
    return min(d, TAU - d)


def rational_vec(p: int, q: int) -> tuple[float, float]:
    """Projective point of the rational p/q (q = 0 gives the point at infinity)."""
    return normalize_vec(float(p), float(q))


# ---------------------------------------------------------------------------
# Integer matrices, normalized up to sign
# ---------------------------------------------------------------------------

def normalize_mat(m) -> tuple[int, int, int, int]:
    p, q, r, s = (int(v) for v in m)
    if p * s - q * r != 1:
        raise ValueError(f"matrix {m} does not have determinant 1")
    for v in (p, q, r, s):
        if v != 0:
            if v < 0:
                p, q, r, s = -p, -q, -r, -s
            break
    return (p, q, r, s)


def mat_mul(m1, m2) -> tuple[int, int, int, int]:
    a, b, c, d = m1
    e, f, g, h = m2
    return normalize_mat((a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h))


def mat_inv(m) -> tuple[int, int, int, int]:
    p, q, r, s = m
    return normalize_mat((s, -q, -r, p))


def mat_apply(m, vec: tuple[float, float]) -> tuple[float, float]:
    p, q, r, s = m
    x, y = vec
    return normalize_vec(p * x + q * y, r * x + s * y)


def mat_trace_abs(m) -> int:
    p, _, _, s = m
    return abs(p + s)


def mat_ball(radius: int) -> list[tuple[int, int, int, int]]:
    """Word ball of PSL(2, Z) for the generators {S, T, T^-1}, BFS order."""
    gens = [GEN_S, GEN_T, GEN_T_INV]
    identity = normalize_mat((1, 0, 0, 1))
    seen = {identity}
    frontier = [identity]
    out = [identity]
    for _ in range(radius):
        nxt = []
        for m in frontier:
            for g in gens:
                mg = mat_mul(m, g)
                if mg not in seen:
                    seen.add(mg)
                    nxt.append(mg)
                    out.append(mg)
        frontier = nxt
    return out


def hyperbolic_fixed_angles(m) -> tuple[float, float]:
    """(attracting, repelling) circle coordinates of a hyperbolic matrix."""
    p, q, r, s = m
    if mat_trace_abs(m) <= 2:
        raise ValueError("matrix is not hyperbolic")
    # Fixed directions solve r t^2 + (s - p) t - q = 0 for t = x/y.
    if r == 0:
        raise ValueError("fixed point at infinity; use a conjugate")
    disc = math.sqrt((s - p) ** 2 + 4.0 * q * r)
    t1 = ((p - s) + disc) / (2.0 * r)
    t2 = ((p - s) - disc) / (2.0 * r)
    lam1 = r * t1 + s  # eigenvalue of the eigenvector (t1, 1)
    lam2 = r * t2 + s
    att, rep = (t1, t2) if abs(lam1) > abs(lam2) else (t2, t1)
    return angle_of(normalize_vec(att, 1.0)), angle_of(normalize_vec(rep, 1.0))


# ---------------------------------------------------------------------------
# Arc unions
# ---------------------------------------------------------------------------

def normalize_arc(start: float, length: float) -> tuple[float, float]:
    if not (0.0 < length < TAU):
        raise ValueError(f"arc length {length} out of range (0, 2*pi)")
    return (start % TAU, length)


def arc_contains(arc, theta: float, interior: bool = False, tol: float = ANGLE_TOL) -> bool:
    start, length = arc
    t = (theta - start) % TAU
    if interior:
        return tol < t < length - tol
    return t <= length + tol or t >= TAU - tol


def merge_arcs(arcs, tol: float = ANGLE_TOL) -> tuple[tuple[float, float], ...]:
    """Union of closed arcs, merged into disjoint closed arcs.

    Raises if the union is the whole circle (a closed set here must be a
    proper subset).
    """
    work = [normalize_arc(s, l) for s, l in arcs]
    if not work:
        return ()
    changed = True
    while changed:
        changed = False
        work.sort()
        merged: list[list[float]] = []
        for s, l in work:
            if merged and s <= merged[-1][0] + merged[-1][1] + tol:
                end = max(merged[-1][0] + merged[-1][1], s + l)
                if end - merged[-1][0] != merged[-1][1]:
                    changed = True
                merged[-1][1] = end - merged[-1][0]
                if len(work) != len(merged):
                    changed = True
            else:
                merged.append([s, l])
        if len(merged) < len(work):
            changed = True
        # wrap-around join of the last arc into the first
        if len(merged) > 1 and merged[-1][0] + merged[-1][1] >= merged[0][0] + TAU - tol:
            s0 = merged[-1][0]
            end = max(merged[-1][0] + merged[-1][1], merged[0][0] + merged[0][1] + TAU)
            merged = merged[1:-1] + [[s0, end - s0]]
            changed = True
        if any(l >= TAU - tol for _, l in merged):
            raise ValueError("arc union covers the whole circle")
        work = [normalize_arc(s, l) for s, l in merged]
    return tuple(sorted(work))


def arcs_contain(arcs, theta: float, interior: bool = False, tol: float = ANGLE_TOL) -> bool:
    return any(arc_contains(a, theta, interior=interior, tol=tol) for a in arcs)


def arcs_cover_circle(arcs, tol: float = ANGLE_TOL) -> bool:
    """True iff the union of the open interiors covers the circle.

    Interiors are open, so consecutive arcs must genuinely overlap (by
    more than tol); touching endpoints leave the endpoint uncovered.
    """
    arcs = sorted(normalize_arc(s, l) for s, l in arcs)
    if not arcs:
        return False
    s0, l0 = arcs[0]
    end = s0 + l0
    rest = [(s + TAU, l) for s, l in arcs] + [(s0 + TAU, l0)]
    for s, l in arcs[1:] + rest:
        if s >= end - tol:
            return False
        end = max(end, s + l)
        if end >= s0 + TAU + tol:
            return True
    return False


def arc_subset(inner, outers, tol: float = ANGLE_TOL) -> bool:
    """True iff the closed arc inner is contained in the closed union outers."""
    s, l = normalize_arc(*inner)
    # Cover the interval [s, s+l] on the line by unwrapped outer arcs.
    segs = []
    for so, lo in outers:
        for shift in (-TAU, 0.0, TAU):
            a = (so % TAU) + shift
            segs.append((a, a + lo))
    segs.sort()
    pos = s
    target = s + l
    for a, b in segs:
        if pos >= target - tol:
            return True
        if a > pos + tol:
            return False  # segments are sorted; the gap at pos stays open
        pos = max(pos, b)
    return pos >= target - tol


def arcs_subset(inners, outers, tol: float = ANGLE_TOL) -> bool:
    return all(arc_subset(a, outers, tol=tol) for a in inners)


def arcs_disjoint(arcs1, arcs2, tol: float = ANGLE_TOL) -> bool:
    for s1, l1 in arcs1:
        for s2, l2 in arcs2:
            d = (s2 - s1) % TAU
            if d < l1 + tol or d > TAU - l2 - tol:
                return False
    return True


def arc_image(m, arc) -> tuple[float, float]:
    """Image of a closed arc under a determinant-one matrix."""
    s, l = arc
    ta = angle_of(mat_apply(m, vec_from_angle(s)))
    tb = angle_of(mat_apply(m, vec_from_angle(s + l)))
    length = (tb - ta) % TAU
    if length == 0.0:
        raise ValueError("degenerate arc image")
    return (ta, length)


def arcs_image(m, arcs) -> tuple[tuple[float, float], ...]:
    return merge_arcs([arc_image(m, a) for a in arcs])
