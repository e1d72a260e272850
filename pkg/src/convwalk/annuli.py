"""Annuli, the nesting order, and chain-length crossratios.

An annulus is an ordered pair (minus, plus) of disjoint closed boundary
sets whose union misses at least one point.  Annuli are ordered by
A < B iff the interiors of A.plus and B.minus cover the whole boundary;
this is a strict partial order.  Given a finite symmetric system of
annuli (here: the translates of one generator annulus over a word-metric
ball), the crossratio (K | L) of two point sets is the maximal length of
a chain K < A_1 < ... < A_n < L inside the system.

Because the system is truncated to a finite ball the computed value is
a certified lower bound of the untruncated crossratio, monotone
nondecreasing in the ball radius.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from . import circle, f2
from .group_models import (
    F2,
    PSL2Z,
    BoundaryPoint,
    ClosedSet,
    GroupElement,
    _check_same,
    act_set,
    f2_element,
    f2_set,
    psl2z_element,
    set_key,
    word_ball,
)


@dataclass(frozen=True)
class Annulus:
    minus: ClosedSet
    plus: ClosedSet

    def __post_init__(self):
        model = _check_same(self.minus, self.plus)
        if model == F2:
            if not f2.cylinders_disjoint(self.minus.cylinders, self.plus.cylinders):
                raise ValueError("annulus sides must be disjoint")
            if f2.covers_boundary(self.minus.cylinders + self.plus.cylinders):
                raise ValueError("annulus sides must miss at least one point")
        else:
            if not circle.arcs_disjoint(self.minus.arcs, self.plus.arcs):
                raise ValueError("annulus sides must be disjoint")
            try:
                circle.merge_arcs(self.minus.arcs + self.plus.arcs)
            except ValueError:
                raise ValueError("annulus sides must miss at least one point") from None

    @property
    def model(self) -> str:
        return self.minus.model

    def negate(self) -> "Annulus":
        return Annulus(self.plus, self.minus)

    def key(self):
        return (set_key(self.minus), set_key(self.plus))


def translate_annulus(g: GroupElement, A: Annulus) -> Annulus:
    return Annulus(act_set(g, A.minus), act_set(g, A.plus))


# ---------------------------------------------------------------------------
# The order relation
# ---------------------------------------------------------------------------

def annulus_less(A: Annulus, B: Annulus) -> bool:
    """A < B iff the interiors of A.plus and B.minus cover the boundary."""
    model = _check_same(A.minus, B.minus)
    if model == F2:
        return f2.covers_boundary(A.plus.cylinders + B.minus.cylinders)
    return circle.arcs_cover_circle(A.plus.arcs + B.minus.arcs)


def _points_in_interior(points, side: ClosedSet) -> bool:
    if side.model == F2:
        return all(f2.point_in_cylinders(side.cylinders, p.prefix, p.block) for p in points)
    return all(circle.arcs_contain(side.arcs, p.angle(), interior=True) for p in points)


def _set_in_interior(K: ClosedSet, side: ClosedSet) -> bool:
    if side.model == F2:
        return f2.cylinders_subset(K.cylinders, side.cylinders)
    # closed arcs inside the open interior: containment with a strict margin
    return circle.arcs_subset(K.arcs, side.arcs, tol=-circle.ANGLE_TOL)


def set_less(K, A: Annulus) -> bool:
    """K < A iff K is contained in the interior of A.minus."""
    if isinstance(K, ClosedSet):
        return _set_in_interior(K, A.minus)
    return _points_in_interior(list(K), A.minus)


def annulus_less_set(A: Annulus, L) -> bool:
    """A < L iff L is contained in the interior of A.plus."""
    if isinstance(L, ClosedSet):
        return _set_in_interior(L, A.plus)
    return _points_in_interior(list(L), A.plus)


# ---------------------------------------------------------------------------
# Truncated annulus systems
# ---------------------------------------------------------------------------

def default_generator_annulus(model: str) -> Annulus:
    """The generator annulus used throughout.

    F2: (C(a^-1), C(a)), whose defining element a has its fixed points
    a^-inf and a^inf in the respective interiors.  PSL2Z: closed arcs
    around the two fixed points of the hyperbolic element (2,1;1,1),
    with radius 5/11 of their angular distance; narrower arcs leave the
    small word balls with too few nested pairs to resolve chains at all.
    """
    if model == F2:
        return Annulus(f2_set(["A"]), f2_set(["a"]))
    att, rep = circle.hyperbolic_fixed_angles((2, 1, 1, 1))
    radius = circle.circ_dist(att, rep) * 5.0 / 11.0
    minus = ClosedSet(PSL2Z, arcs=(((rep - radius) % circle.TAU, 2 * radius),))
    plus = ClosedSet(PSL2Z, arcs=(((att - radius) % circle.TAU, 2 * radius),))
    return Annulus(minus, plus)


class AnnulusSystem:
    """All distinct translates g(+-A) over a word ball, with the order cached.

    The cache is built once; afterwards every query is pure, so
    concurrent readers need no coordination.
    """

    def __init__(self, model: str, generator: Annulus, ball_radius: int):
        if generator.model != model:
            raise ValueError("generator annulus model mismatch")
        if ball_radius < 0:
            raise ValueError("ball radius must be nonnegative")
        self.model = model
        self.generator = generator
        self.ball_radius = ball_radius
        self.annuli: list[Annulus] = []
        seen = {}
        for g in word_ball(model, ball_radius):
            for A in (translate_annulus(g, generator), translate_annulus(g, generator.negate())):
                k = A.key()
                if k not in seen:
                    seen[k] = len(self.annuli)
                    self.annuli.append(A)
        n = len(self.annuli)
        self.succ: list[list[int]] = [[] for _ in range(n)]
        self.pred_mask = [0] * n
        for i, A in enumerate(self.annuli):
            for j, B in enumerate(self.annuli):
                if i != j and annulus_less(A, B):
                    self.succ[i].append(j)
                    self.pred_mask[j] |= 1 << i
        self.topo = self._topo_order()
        self._side_depth = 1
        if model == F2:
            self._side_depth = max((len(w) for A in self.annuli
                                    for w in A.minus.cylinders + A.plus.cylinders),
                                   default=1)
        self._chain_memo: dict[tuple[int, int], int] = {}
        self._point_masks: dict = {}

    def __len__(self):
        return len(self.annuli)

    def _topo_order(self) -> list[int]:
        n = len(self.annuli)
        indeg = [0] * n
        for i in range(n):
            for j in self.succ[i]:
                indeg[j] += 1
        order = [i for i in range(n) if indeg[i] == 0]
        head = 0
        while head < len(order):
            i = order[head]
            head += 1
            for j in self.succ[i]:
                indeg[j] -= 1
                if indeg[j] == 0:
                    order.append(j)
        if len(order) != n:
            raise RuntimeError("annulus order has a cycle; not a partial order")
        return order

    # -- membership masks ---------------------------------------------------

    def point_masks(self, p: BoundaryPoint) -> tuple[int, int]:
        """(minus_mask, plus_mask): bit i set iff p lies in that interior."""
        key = p
        cached = self._point_masks.get(key)
        if cached is not None:
            return cached
        minus = plus = 0
        if self.model == F2:
            head = f2.point_prefix(p.prefix, p.block, self._side_depth)
            for i, A in enumerate(self.annuli):
                if any(head.startswith(w) for w in A.minus.cylinders):
                    minus |= 1 << i
                if any(head.startswith(w) for w in A.plus.cylinders):
                    plus |= 1 << i
        else:
            theta = p.angle()
            for i, A in enumerate(self.annuli):
                if circle.arcs_contain(A.minus.arcs, theta, interior=True):
                    minus |= 1 << i
                if circle.arcs_contain(A.plus.arcs, theta, interior=True):
                    plus |= 1 << i
        self._point_masks[key] = (minus, plus)
        return (minus, plus)

    def source_mask(self, K) -> int:
        """Mask of annuli A with K < A."""
        if isinstance(K, ClosedSet):
            m = 0
            for i, A in enumerate(self.annuli):
                if set_less(K, A):
                    m |= 1 << i
            return m
        m = ~0
        for p in K:
            m &= self.point_masks(p)[0]
        return m & ((1 << len(self.annuli)) - 1)

    def sink_mask(self, L) -> int:
        """Mask of annuli A with A < L."""
        if isinstance(L, ClosedSet):
            m = 0
            for i, A in enumerate(self.annuli):
                if annulus_less_set(A, L):
                    m |= 1 << i
            return m
        m = ~0
        for p in L:
            m &= self.point_masks(p)[1]
        return m & ((1 << len(self.annuli)) - 1)

    # -- longest chains -----------------------------------------------------

    def chain_length(self, src_mask: int, snk_mask: int) -> int:
        """Longest chain source < A_1 < ... < A_n < sink, by DP in topo order."""
        if src_mask == 0 or snk_mask == 0:
            return 0
        key = (src_mask, snk_mask)
        hit = self._chain_memo.get(key)
        if hit is not None:
            return hit
        dp = [0] * len(self.annuli)
        best = 0
        for i in self.topo:
            d = 1 if (src_mask >> i) & 1 else 0
            j_mask = self.pred_mask[i]
            while j_mask:
                low = j_mask & -j_mask
                j = low.bit_length() - 1
                if dp[j] and dp[j] + 1 > d:
                    d = dp[j] + 1
                j_mask ^= low
            dp[i] = d
            if d and (snk_mask >> i) & 1 and d > best:
                best = d
        self._chain_memo[key] = best
        return best

    def crossratio(self, K, L) -> int:
        """Truncated crossratio (K | L): the longest annulus chain from K to L."""
        return self.chain_length(self.source_mask(K), self.sink_mask(L))


def _side_depth_of(model: str, annuli) -> int:
    if model != F2:
        return 1
    return max((len(w) for A in annuli for w in A.minus.cylinders + A.plus.cylinders),
               default=1)


def build_system(model: str, ball_radius: int, generator: Annulus | None = None) -> AnnulusSystem:
    if generator is None:
        generator = default_generator_annulus(model)
    return AnnulusSystem(model, generator, ball_radius)


def translate_system(g: GroupElement, sys: AnnulusSystem) -> AnnulusSystem:
    """The system whose cache is the g-translate of the given cache."""
    out = AnnulusSystem.__new__(AnnulusSystem)
    out.model = sys.model
    out.generator = translate_annulus(g, sys.generator)
    out.ball_radius = sys.ball_radius
    out.annuli = [translate_annulus(g, A) for A in sys.annuli]
    # the order relation is equivariant, so the adjacency carries over
    out.succ = [list(s) for s in sys.succ]
    out.pred_mask = list(sys.pred_mask)
    out.topo = list(sys.topo)
    out._side_depth = _side_depth_of(out.model, out.annuli)
    out._chain_memo = {}
    out._point_masks = {}
    return out


# ---------------------------------------------------------------------------
# Persistence of the truncated cache
# ---------------------------------------------------------------------------

def system_to_json(sys: AnnulusSystem) -> dict:
    def side(S: ClosedSet):
        return list(S.cylinders) if sys.model == F2 else [list(a) for a in S.arcs]

    return {
        "model": sys.model,
        "ball_radius": sys.ball_radius,
        "generator": {"minus": side(sys.generator.minus), "plus": side(sys.generator.plus)},
        "annuli": [{"minus": side(A.minus), "plus": side(A.plus)} for A in sys.annuli],
        "succ": sys.succ,
    }


def system_from_json(data: dict) -> AnnulusSystem:
    model = data["model"]

    def closed(side):
        if model == F2:
            return ClosedSet(F2, cylinders=tuple(side))
        return ClosedSet(PSL2Z, arcs=tuple(tuple(a) for a in side))

    out = AnnulusSystem.__new__(AnnulusSystem)
    out.model = model
    out.ball_radius = data["ball_radius"]
    out.generator = Annulus(closed(data["generator"]["minus"]), closed(data["generator"]["plus"]))
    out.annuli = [Annulus(closed(d["minus"]), closed(d["plus"])) for d in data["annuli"]]
    out.succ = [list(s) for s in data["succ"]]
    out.pred_mask = [0] * len(out.annuli)
    for i, js in enumerate(out.succ):
        for j in js:
            out.pred_mask[j] |= 1 << i
    out.topo = AnnulusSystem._topo_order(out)
    out._side_depth = _side_depth_of(model, out.annuli)
    out._chain_memo = {}
    out._point_masks = {}
    return out


def save_system(sys: AnnulusSystem, path) -> None:
    with open(path, "w") as fh:
        json.dump(system_to_json(sys), fh)


def load_system(path) -> AnnulusSystem:
    with open(path) as fh:
        return system_from_json(json.load(fh))
