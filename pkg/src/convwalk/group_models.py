"""The two concrete convergence-group actions.

Model ``F2``: the rank-2 free group acting on its tree boundary, the
space of infinite reduced words.  Everything is exact string
arithmetic; boundary points are eventually-periodic words.

Model ``PSL2Z``: the modular group acting on the boundary circle of the
hyperbolic plane (the projective line), with double precision and a
1e-9 angular tolerance.

Both models expose the same vocabulary: group elements, boundary
points, closed subsets of the boundary, the action on points and on
closed sets, and empirical detection of attracting/repelling points of
a sequence of group elements.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import circle, f2

F2 = "F2"
PSL2Z = "PSL2Z"

MODELS = (F2, PSL2Z)


class ModelMismatch(ValueError):
    """Raised when operands live in different models."""


def _check_same(*objs) -> str:
    models = {o.model for o in objs}
    if len(models) != 1:
        raise ModelMismatch(f"mixed models: {sorted(models)}")
    return objs[0].model


# ---------------------------------------------------------------------------
# Domain types
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GroupElement:
    """A group element: reduced word (F2) or integer matrix up to sign (PSL2Z)."""

    model: str
    word: str = ""
    mat: tuple = ()

    def __post_init__(self):
        if self.model == F2:
            if not f2.is_reduced(self.word):
                raise ValueError(f"word {self.word!r} is not reduced")
        elif self.model == PSL2Z:
            object.__setattr__(self, "mat", circle.normalize_mat(self.mat))
        else:
            raise ValueError(f"unknown model {self.model!r}")

    def __repr__(self):
        if self.model == F2:
            return f"GroupElement(F2, {self.word or 'e'!r})"
        return f"GroupElement(PSL2Z, {self.mat})"


@dataclass(frozen=True)
class BoundaryPoint:
    """A boundary point: eventually periodic word (F2) or projective point (PSL2Z)."""

    model: str
    prefix: str = ""
    block: str = ""
    vec: tuple = ()

    def __post_init__(self):
        if self.model == F2:
            f2.check_point(self.prefix, self.block)
            pre, blk = f2.canonical_point(self.prefix, self.block)
            object.__setattr__(self, "prefix", pre)
            object.__setattr__(self, "block", blk)
        elif self.model == PSL2Z:
            object.__setattr__(self, "vec", circle.normalize_vec(*self.vec))
        else:
            raise ValueError(f"unknown model {self.model!r}")

    def angle(self) -> float:
        if self.model != PSL2Z:
            raise ModelMismatch("angle is only defined on the circle model")
        return circle.angle_of(self.vec)

    def head(self, k: int) -> str:
        if self.model != F2:
            raise ModelMismatch("head is only defined on the tree boundary")
        return f2.point_prefix(self.prefix, self.block, k)

    def __repr__(self):
        if self.model == F2:
            return f"BoundaryPoint(F2, {self.prefix!r}+{self.block!r}^inf)"
        return f"BoundaryPoint(PSL2Z, angle={self.angle():.6f})"


@dataclass(frozen=True)
class ClosedSet:
    """A proper nonempty closed subset of the boundary.

    F2: an irredundant finite union of cylinders; PSL2Z: a finite union
    of pairwise disjoint closed arcs.
    """

    model: str
    cylinders: tuple = ()
    arcs: tuple = ()

    def __post_init__(self):
        if self.model == F2:
            object.__setattr__(self, "cylinders", f2.normalize_cylinders(self.cylinders))
            if not self.cylinders:
                raise ValueError("closed set must be nonempty")
        elif self.model == PSL2Z:
            object.__setattr__(self, "arcs", circle.merge_arcs(self.arcs))
            if not self.arcs:
                raise ValueError("closed set must be nonempty")
        else:
            raise ValueError(f"unknown model {self.model!r}")

    def __repr__(self):
        if self.model == F2:
            return f"ClosedSet(F2, {'|'.join(self.cylinders)})"
        return f"ClosedSet(PSL2Z, {len(self.arcs)} arcs)"


# ---------------------------------------------------------------------------
# Constructors
# ---------------------------------------------------------------------------

def f2_element(word: str) -> GroupElement:
    return GroupElement(F2, word=word)


def psl2z_element(p: int, q: int, r: int, s: int) -> GroupElement:
    return GroupElement(PSL2Z, mat=(p, q, r, s))


def identity(model: str) -> GroupElement:
    if model == F2:
        return GroupElement(F2, word="")
    return GroupElement(PSL2Z, mat=(1, 0, 0, 1))


def f2_point(prefix: str, block: str) -> BoundaryPoint:
    return BoundaryPoint(F2, prefix=prefix, block=block)


def circle_point(angle: float | None = None, vec=None) -> BoundaryPoint:
    if vec is None:
        vec = circle.vec_from_angle(angle)
    return BoundaryPoint(PSL2Z, vec=tuple(vec))


def rational_point(p: int, q: int) -> BoundaryPoint:
    """Boundary point of the rational p/q; (1, 0) is the cusp at infinity."""
    return BoundaryPoint(PSL2Z, vec=circle.rational_vec(p, q))


def f2_set(words) -> ClosedSet:
    return ClosedSet(F2, cylinders=tuple(words))


def circle_set(arcs) -> ClosedSet:
    return ClosedSet(PSL2Z, arcs=tuple(arcs))


def arc_around(center_angle: float, radius: float) -> ClosedSet:
    return circle_set([((center_angle - radius) % circle.TAU, 2.0 * radius)])


# ---------------------------------------------------------------------------
# Group operations and the action
# ---------------------------------------------------------------------------

def multiply(g: GroupElement, h: GroupElement) -> GroupElement:
    model = _check_same(g, h)
    if model == F2:
        return GroupElement(F2, word=f2.concat(g.word, h.word))
    return GroupElement(PSL2Z, mat=circle.mat_mul(g.mat, h.mat))


def inverse(g: GroupElement) -> GroupElement:
    if g.model == F2:
        return GroupElement(F2, word=f2.invert(g.word))
    return GroupElement(PSL2Z, mat=circle.mat_inv(g.mat))


def power(g: GroupElement, n: int) -> GroupElement:
    out = identity(g.model)
    base = g if n >= 0 else inverse(g)
    for _ in range(abs(n)):
        out = multiply(out, base)
    return out


def act(g: GroupElement, p: BoundaryPoint) -> BoundaryPoint:
    """The boundary action g . p."""
    _check_same(g, p)
    if g.model == F2:
        pre, blk = f2.act_word(g.word, p.prefix, p.block)
        return BoundaryPoint(F2, prefix=pre, block=blk)
    return BoundaryPoint(PSL2Z, vec=circle.mat_apply(g.mat, p.vec))


def act_set(g: GroupElement, S: ClosedSet) -> ClosedSet:
    """Exact image g . S of a closed set."""
    _check_same(g, S)
    if g.model == F2:
        image = f2.cylinders_image(g.word, S.cylinders)
        assert image, "image of a nonempty set cannot be empty"
        return ClosedSet(F2, cylinders=image)
    image = circle.arcs_image(g.mat, S.arcs)
    assert image, "image of a nonempty set cannot be empty"
    return ClosedSet(PSL2Z, arcs=image)


def set_contains(S: ClosedSet, p: BoundaryPoint, interior: bool = False) -> bool:
    _check_same(S, p)
    if S.model == F2:
        # cylinders are clopen, so interior membership is plain membership
        return f2.point_in_cylinders(S.cylinders, p.prefix, p.block)
    return circle.arcs_contain(S.arcs, p.angle(), interior=interior)


def sets_equal(S: ClosedSet, T: ClosedSet, tol: float = circle.ANGLE_TOL) -> bool:
    _check_same(S, T)
    if S.model == F2:
        return S.cylinders == T.cylinders
    if len(S.arcs) != len(T.arcs):
        return False
    return all(
        circle.circ_dist(a[0], b[0]) <= tol and abs(a[1] - b[1]) <= tol
        for a, b in zip(S.arcs, T.arcs)
    )


def set_key(S: ClosedSet, tol: float = circle.ANGLE_TOL):
    """Hashable key identifying a closed set up to the model tolerance."""
    if S.model == F2:
        return (F2, S.cylinders)
    return (PSL2Z, tuple((round(s / tol), round(l / tol)) for s, l in S.arcs))


def points_equal(p: BoundaryPoint, q: BoundaryPoint, tol: float = circle.ANGLE_TOL) -> bool:
    _check_same(p, q)
    if p.model == F2:
        return (p.prefix, p.block) == (q.prefix, q.block)
    return circle.circ_dist(p.angle(), q.angle()) <= tol


def distance(p: BoundaryPoint, q: BoundaryPoint) -> float:
    """Visual metric on the boundary: 2^-(shared prefix) or angular distance."""
    _check_same(p, q)
    if p.model == F2:
        if (p.prefix, p.block) == (q.prefix, q.block):
            return 0.0
        return 2.0 ** -f2.common_prefix_len((p.prefix, p.block), (q.prefix, q.block))
    return circle.circ_dist(p.angle(), q.angle())


def word_ball(model: str, radius: int) -> list[GroupElement]:
    """The word-metric ball of the standard generators, identity first."""
    if model == F2:
        return [GroupElement(F2, word=w) for w in f2.ball(radius)]
    return [GroupElement(PSL2Z, mat=m) for m in circle.mat_ball(radius)]


def generators(model: str) -> list[GroupElement]:
    """A symmetric generating set (the standard one)."""
    if model == F2:
        return [f2_element(w) for w in ("a", "A", "b", "B")]
    return [
        GroupElement(PSL2Z, mat=circle.GEN_S),
        GroupElement(PSL2Z, mat=circle.GEN_T),
        GroupElement(PSL2Z, mat=circle.GEN_T_INV),
    ]


# ---------------------------------------------------------------------------
# Random sampling
# ---------------------------------------------------------------------------

def random_boundary_point(model: str, rng, max_prefix: int = 3, max_block: int = 3) -> BoundaryPoint:
    if model == F2:
        pre, blk = f2.random_point(rng, max_prefix=max_prefix, max_block=max_block)
        return BoundaryPoint(F2, prefix=pre, block=blk)
    return circle_point(angle=float(rng.uniform(0.0, circle.TAU)))


def random_group_element(model: str, rng, length: int) -> GroupElement:
    if model == F2:
        return GroupElement(F2, word=f2.random_reduced_word(rng, length))
    g = identity(PSL2Z)
    gens = generators(PSL2Z)
    for _ in range(length):
        g = multiply(g, gens[int(rng.integers(len(gens)))])
    return g


# ---------------------------------------------------------------------------
# Convergence-property probes
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ConvergenceReport:
    """Empirical attracting/repelling estimate for a sequence of elements."""

    conclusive: bool
    attracting: BoundaryPoint | None = None
    repelling: BoundaryPoint | None = None
    tightness: float = float("inf")
    reason: str = ""


def _cluster(points: list[BoundaryPoint], tol: float):
    """Smallest all-but-one cluster: (medoid, radius) or None."""
    n = len(points)
    best = None
    for i, c in enumerate(points):
        dists = sorted(distance(c, p) for p in points)
        radius = dists[n - 2]  # all but the single farthest point
        if best is None or radius < best[1]:
            best = (c, radius)
    if best is None or best[1] > tol:
        return None
    return best


def convergence_subsequence(seq, probe, cluster_tol: float | None = None) -> ConvergenceReport:
    """Estimate attracting and repelling points of a sequence of elements.

    Applies the final elements of the sequence to the probe set and
    looks for a tight cluster of all but at most one image; the
    repelling estimate comes from the inverse elements.  A failed
    cluster search is reported as inconclusive, never raised.
    """
    seq = list(seq)
    probe = list(probe)
    if len(probe) < 8:
        raise ValueError("need at least 8 probe points")
    model = _check_same(*seq, *probe)
    if len({(g.word, g.mat) for g in seq}) != len(seq):
        return ConvergenceReport(False, reason="sequence elements are not distinct")
    if cluster_tol is None:
        cluster_tol = 0.25 if model == F2 else 0.15
    g = seq[-1]
    fwd = _cluster([act(g, p) for p in probe], cluster_tol)
    bwd = _cluster([act(inverse(g), p) for p in probe], cluster_tol)
    if fwd is None or bwd is None:
        return ConvergenceReport(False, reason="no cluster within tolerance")
    return ConvergenceReport(True, attracting=fwd[0], repelling=bwd[0],
                             tightness=max(fwd[1], bwd[1]))
