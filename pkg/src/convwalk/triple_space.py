"""The space of distinct boundary triples and its boundary topology.

A triple of pairwise-distinct boundary points plays the role of an
interior point of the hyperbolic space.  A boundary neighborhood U
(an open subset of the boundary) extends to the triple space as the set
of triples with at least two components in U; sequential convergence of
triples to a boundary point is decided against a nested family of such
neighborhoods.  The same recipe, applied to orbits g . x of a base
triple, topologizes the group together with its boundary.

For the circle model the triple space also projects into the hyperbolic
disk: a triple (a, b, c) maps to the foot of the perpendicular from the
ideal point c onto the geodesic with endpoints a and b.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from . import circle, f2
from .group_models import (
    F2,
    PSL2Z,
    BoundaryPoint,
    ClosedSet,
    GroupElement,
    ModelMismatch,
    _check_same,
    act,
    circle_point,
    distance,
    f2_point,
    points_equal,
)

DISTINCT_TOL = 1e-9


@dataclass(frozen=True)
class Triple:
    """An ordered triple of pairwise-distinct boundary points."""

    p1: BoundaryPoint
    p2: BoundaryPoint
    p3: BoundaryPoint

    def __post_init__(self):
        _check_same(self.p1, self.p2, self.p3)
        pts = self.points()
        for i in range(3):
            for j in range(i + 1, 3):
                if self.model == F2:
                    same = pts[i] == pts[j]
                else:
                    same = circle.circ_dist(pts[i].angle(), pts[j].angle()) <= DISTINCT_TOL
                if same:
                    raise ValueError(f"triple components {i + 1} and {j + 1} coincide")

    @property
    def model(self) -> str:
        return self.p1.model

    def points(self) -> tuple[BoundaryPoint, BoundaryPoint, BoundaryPoint]:
        return (self.p1, self.p2, self.p3)

    def pairs(self):
        p = self.points()
        return ((p[0], p[1]), (p[0], p[2]), (p[1], p[2]))


def triple(p1: BoundaryPoint, p2: BoundaryPoint, p3: BoundaryPoint) -> Triple:
    return Triple(p1, p2, p3)


def act_triple(g: GroupElement, x: Triple) -> Triple:
    return Triple(act(g, x.p1), act(g, x.p2), act(g, x.p3))


def random_triple(model: str, rng, **kw) -> Triple:
    from .group_models import random_boundary_point

    while True:
        pts = [random_boundary_point(model, rng, **kw) for _ in range(3)]
        try:
            return Triple(*pts)
        except ValueError:
            continue


def basepoint(model: str) -> Triple:
    """A fixed generic triple used as the default orbit basepoint."""
    if model == F2:
        return Triple(f2_point("", "a"), f2_point("", "b"), f2_point("", "B"))
    return Triple(circle_point(vec=(1.0, 0.0)), circle_point(vec=(0.0, 1.0)),
                  circle_point(vec=(1.0, 1.0)))


# ---------------------------------------------------------------------------
# Boundary neighborhoods and the extended topology
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TukiaNeighborhood:
    """An open boundary set U, extended to triples by 'two components in U'.

    The underlying region is stored like a closed set (cylinders or
    arcs) but membership is interior membership, which matters only on
    the circle where arcs have endpoints.
    """

    region: ClosedSet

    @property
    def model(self) -> str:
        return self.region.model

    def contains(self, p: BoundaryPoint) -> bool:
        _check_same(self.region, p)
        if self.model == F2:
            return f2.point_in_cylinders(self.region.cylinders, p.prefix, p.block)
        return circle.arcs_contain(self.region.arcs, p.angle(), interior=True)


def cylinder_neighborhood(*words: str) -> TukiaNeighborhood:
    return TukiaNeighborhood(ClosedSet(F2, cylinders=tuple(words)))


def arc_neighborhood(center_angle: float, radius: float) -> TukiaNeighborhood:
    region = ClosedSet(PSL2Z, arcs=(((center_angle - radius) % circle.TAU, 2.0 * radius),))
    return TukiaNeighborhood(region)


def complement_neighborhood(S: ClosedSet) -> TukiaNeighborhood:
    """The open complement of a closed set, as a neighborhood."""
    if S.model == F2:
        return TukiaNeighborhood(ClosedSet(F2, cylinders=f2.complement_cylinders(S.cylinders)))
    comp = []
    arcs = sorted(S.arcs)
    for (s, l), (s2, _) in zip(arcs, arcs[1:] + arcs[:1]):
        gap = (s2 - (s + l)) % circle.TAU
        comp.append(((s + l) % circle.TAU, gap))
    return TukiaNeighborhood(ClosedSet(PSL2Z, arcs=tuple(comp)))


def translate_neighborhood(g: GroupElement, U: TukiaNeighborhood) -> TukiaNeighborhood:
    from .group_models import act_set

    return TukiaNeighborhood(act_set(g, U.region))


def neighborhood_subset(U: TukiaNeighborhood, V: TukiaNeighborhood) -> bool:
    """True iff U is contained in V (up to the model tolerance)."""
    _check_same(U.region, V.region)
    if U.model == F2:
        return f2.cylinders_subset(U.region.cylinders, V.region.cylinders)
    return circle.arcs_subset(U.region.arcs, V.region.arcs)


def neighborhood_basis(p: BoundaryPoint, depths) -> list[TukiaNeighborhood]:
    """Nested neighborhoods of p: cylinders of growing depth or halving arcs."""
    out = []
    if p.model == F2:
        for d in depths:
            if d < 1:
                raise ValueError("cylinder depth must be >= 1")
            out.append(cylinder_neighborhood(p.head(d)))
    else:
        theta = p.angle()
        for d in depths:
            out.append(arc_neighborhood(theta, math.pi / 2.0 ** d))
    return out


def in_tukia_neighborhood(x: Triple, U: TukiaNeighborhood) -> bool:
    """True iff at least two components of the triple lie in U."""
    return sum(U.contains(p) for p in x.points()) >= 2


def triple_converges_to(seq, p: BoundaryPoint, depth_schedule, tail: float = 0.8) -> bool:
    """Decide convergence of a triple sequence to a boundary point.

    The schedule must be a nested decreasing family of neighborhoods of
    p.  'Eventually inside' on finite data means: inside for every index
    past the given fraction of the sequence length.
    """
    seq = list(seq)
    schedule = list(depth_schedule)
    if not seq or not schedule:
        raise ValueError("need a nonempty sequence and schedule")
    for U, V in zip(schedule[1:], schedule):
        if not neighborhood_subset(U, V):
            raise ValueError("neighborhood schedule is not nested")
    for U in schedule:
        if not U.contains(p):
            raise ValueError("schedule neighborhood does not contain the target point")
    start = int(tail * len(seq))
    window = seq[start:] if start < len(seq) else seq[-1:]
    return all(in_tukia_neighborhood(x, U) for U in schedule for x in window)


def in_G_neighborhood(g: GroupElement, U: TukiaNeighborhood, base: Triple) -> bool:
    """Membership of a group element in the boundary neighborhood of G u M."""
    return in_tukia_neighborhood(act_triple(g, base), U)


# ---------------------------------------------------------------------------
# Disk projection (circle model)
# ---------------------------------------------------------------------------

def _to_halfplane(z: complex) -> complex:
    return 1j * (1.0 + z) / (1.0 - z)


def _to_disk(w: complex) -> complex:
    return (w - 1j) / (w + 1j)


def disk_projection(x: Triple) -> complex:
    """Foot of the perpendicular from the third ideal point onto the
    geodesic spanned by the first two, in the unit-disk model.

    Only defined for the circle model; the tree boundary has no disk.
    """
    if x.model != PSL2Z:
        raise ModelMismatch("disk projection needs the circle model")
    angles = [p.angle() for p in x.points()]
    # rotate so no point sits at the half-plane map's pole z = 1
    rot = 0.0
    while any(circle.circ_dist(t - rot, 0.0) < 1e-6 for t in angles):
        rot += 0.37
    a, b, c = (cmath.exp(1j * (t - rot)) for t in angles)
    ah, bh, ch = (_to_halfplane(z).real for z in (a, b, c))
    # u = image of c under the map sending the geodesic (a, b) to (0, inf);
    # that map preserves the upper half-plane only when ah > bh, otherwise
    # the foot lives on the negative imaginary axis.
    u = (ch - ah) / (ch - bh)
    v = 1j * abs(u) if ah > bh else -1j * abs(u)
    w = (ah - bh * v) / (1.0 - v)
    z = _to_disk(w)
    return z * cmath.exp(1j * rot)


def disk_distance(z: complex, w: complex) -> float:
    """Hyperbolic distance in the unit disk."""
    num = 2.0 * abs(z - w) ** 2
    den = (1.0 - abs(z) ** 2) * (1.0 - abs(w) ** 2)
    return math.acosh(1.0 + num / den)
