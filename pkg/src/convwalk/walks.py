"""Random walks to the boundary and the measures they induce.

A walk is the sequence of partial products of i.i.d. increments drawn
from a finitely supported step distribution whose support generates the
group.  Applied to a base triple, almost every path converges to a
boundary point in the two-components-in-a-neighborhood sense; the limit
is detected as the deepest cylinder (or dyadic arc bin) that stably
holds at least two components of the moving triple over the final
stretch of the path.

On top of the limit detector: empirical hitting measures on a bin
algebra, an exact stationarity defect (total variation against the
averaged translates), the indicator-passing fraction that bounds the
mass of a boundary ball from above, Poisson-type harmonic extensions of
bin functions, Cesaro contraction profiles of point pairs, and a ball
search for elements blowing a positive-mass bin set up to almost full
measure.

Randomness is a counter-based Philox generator keyed by (seed, stream),
one independent stream per path, so results are reproducible and
independent of worker scheduling.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import circle, f2
from .annuli import AnnulusSystem
from .group_models import (
    F2,
    PSL2Z,
    BoundaryPoint,
    GroupElement,
    act,
    f2_element,
    f2_point,
    generators,
    identity,
    multiply,
    word_ball,
)
from .quasimetric import BoundaryBallIndicator, in_boundary_ball_necessary
from .triple_space import Triple, basepoint

_INV = f2._INVERSE


# ---------------------------------------------------------------------------
# Step distributions and paths
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class StepDistribution:
    """Finitely supported step law; the support must generate the group."""

    support: tuple  # of (GroupElement, float)
    assume_generating: bool = False

    def __post_init__(self):
        if not self.support:
            raise ValueError("empty support")
        models = {g.model for g, _ in self.support}
        if len(models) != 1:
            raise ValueError("mixed models in support")
        probs = [p for _, p in self.support]
        if any(p <= 0 for p in probs):
            raise ValueError("probabilities must be positive")
        if abs(sum(probs) - 1.0) > 1e-9:
            raise ValueError(f"probabilities sum to {sum(probs)}, not 1")
        if not self.assume_generating:
            have = {g for g, _ in self.support}
            needed = set(generators(self.model))
            if not needed <= have:
                raise ValueError(
                    "support does not contain the standard symmetric generators; "
                    "pass assume_generating=True if it generates anyway")

    @property
    def model(self) -> str:
        return self.support[0][0].model

    def max_word_length(self) -> int:
        if self.model == F2:
            return max(len(g.word) for g, _ in self.support)
        return max(1, *(abs(v) for g, _ in self.support for v in g.mat))

    def cumulative(self):
        cum = []
        acc = 0.0
        for g, p in self.support:
            acc += p
            cum.append((acc, g))
        cum[-1] = (1.0 + 1e-12, cum[-1][1])
        return cum


def uniform_f2() -> StepDistribution:
    return StepDistribution(tuple((f2_element(w), 0.25) for w in ("a", "A", "b", "B")))


def uniform_psl2z() -> StepDistribution:
    gens = generators(PSL2Z)
    return StepDistribution(tuple((g, 1.0 / len(gens)) for g in gens))


def point_mass(g: GroupElement) -> StepDistribution:
    return StepDistribution(((g, 1.0),), assume_generating=True)


def philox_stream(seed: int, stream: int = 0) -> np.random.Generator:
    """Independent counter-based stream keyed by (seed, stream)."""
    key = np.array([seed % 2**64, stream % 2**64], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def _draw(cum, u: float) -> GroupElement:
    for edge, g in cum:
        if u < edge:
            return g
    return cum[-1][1]


@dataclass(frozen=True)
class SamplePath:
    """Increments g_1..g_n of one walk; partial products are derived."""

    model: str
    increments: tuple
    seed: int
    stream: int = 0

    def __len__(self):
        return len(self.increments)

    def products(self):
        """Yields w_0 = e, w_1, ..., w_n."""
        w = identity(self.model)
        yield w
        for g in self.increments:
            w = multiply(w, g)
            yield w

    def final(self) -> GroupElement:
        w = identity(self.model)
        for g in self.increments:
            w = multiply(w, g)
        return w


def sample_path(mu: StepDistribution, n: int, seed: int, stream: int = 0) -> SamplePath:
    if n < 0:
        raise ValueError("path length must be nonnegative")
    rng = philox_stream(seed, stream)
    cum = mu.cumulative()
    incs = tuple(_draw(cum, float(u)) for u in rng.random(n))
    return SamplePath(mu.model, incs, seed, stream)


# ---------------------------------------------------------------------------
# Boundary limit detection
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LimitEstimate:
    """The deepest stable target of a walk, or an inconclusive verdict."""

    model: str
    conclusive: bool
    word: str = ""       # F2: stable cylinder word
    level: int = 0       # PSL2Z: stable dyadic level
    bin_index: int = 0   # PSL2Z: bin at that level

    def representative(self) -> BoundaryPoint:
        """A boundary point inside the stable target."""
        if not self.conclusive:
            raise ValueError("inconclusive estimate has no representative")
        if self.model == F2:
            return f2_point(self.word, self.word[-1])
        width = circle.TAU / (1 << self.level)
        return BoundaryPoint(PSL2Z, vec=circle.vec_from_angle((self.bin_index + 0.5) * width))


def _comp_letter(comp, j: int) -> str:
    prefix, block = comp
    if j < len(prefix):
        return prefix[j]
    return block[(j - len(prefix)) % len(block)]


def _image_head(w: list, comp, k: int) -> str:
    """First k letters of the image of an infinite word under the word w."""
    lw = len(w)
    c = 0
    while c < lw and w[lw - 1 - c] == _INV[_comp_letter(comp, c)]:
        c += 1
    head = w[:min(k, lw - c)]
    j = c
    while len(head) < k:
        head.append(_comp_letter(comp, j))
        j += 1
    return "".join(head)


def _pair_words_f2(w: list, comps, d_max: int) -> list[str]:
    heads = [_image_head(w, comp, d_max) for comp in comps]
    out = []
    for i, j in ((0, 1), (0, 2), (1, 2)):
        a, b = heads[i], heads[j]
        n = 0
        while n < d_max and a[n] == b[n]:
            n += 1
        if n:
            out.append(a[:n])
    return out


def _stable_word(step_words: list[list[str]]) -> str:
    """Deepest word extended by some pair word at every step."""
    if not step_words or not step_words[-1]:
        return ""
    best = ""
    for cand in step_words[-1]:
        d = len(cand)
        while d > len(best):
            root = cand[:d]
            if all(any(pw.startswith(root) for pw in words) for words in step_words):
                best = root
                break
            d -= 1
    return best


def _pair_bins_circle(mat, comps, level_max: int) -> list[tuple[int, int]]:
    width = circle.TAU / (1 << level_max)
    bins = []
    for vec in comps:
        img = circle.mat_apply(mat, vec)
        bins.append(int(circle.angle_of(img) / width) % (1 << level_max))
    out = []
    for i, j in ((0, 1), (0, 2), (1, 2)):
        diff = (bins[i] ^ bins[j]).bit_length()
        lvl = level_max - diff
        if lvl > 0:
            out.append((lvl, bins[i] >> diff))
    return out


def _stable_bin(step_bins: list[list[tuple[int, int]]], level_max: int) -> tuple[int, int]:
    if not step_bins or not step_bins[-1]:
        return (0, 0)
    best = (0, 0)
    for lvl_c, bin_c in step_bins[-1]:
        d = lvl_c
        while d > best[0]:
            root = bin_c >> (lvl_c - d)
            ok = all(
                any(lvl >= d and (b >> (lvl - d)) == root for lvl, b in bins)
                for bins in step_bins)
            if ok:
                best = (d, root)
                break
            d -= 1
    return best


def walk_limit(increments, model: str, x: Triple, d_max: int,
               tail: float = 0.2) -> LimitEstimate:
    """Limit detection from raw increments (words or matrices)."""
    n = len(increments)
    tail_start = max(0, n - max(1, int(math.ceil(tail * n))))
    if model == F2:
        comps = [(p.prefix, p.block) for p in x.points()]
        w: list[str] = []
        step_words = []
        for i, ginc in enumerate(increments):
            for ch in ginc:
                if w and w[-1] == _INV[ch]:
                    w.pop()
                else:
                    w.append(ch)
            if i >= tail_start:
                step_words.append(_pair_words_f2(w, comps, d_max))
        word = _stable_word(step_words)
        return LimitEstimate(F2, bool(word), word=word)
    comps = [p.vec for p in x.points()]
    m = (1, 0, 0, 1)
    step_bins = []
    for i, ginc in enumerate(increments):
        m = circle.mat_mul(m, ginc)
        if i >= tail_start:
            step_bins.append(_pair_bins_circle(m, comps, d_max))
    lvl, b = _stable_bin(step_bins, d_max)
    return LimitEstimate(PSL2Z, lvl > 0, level=lvl, bin_index=b)


def walk_boundary_limit(path: SamplePath, x: Triple, depth_schedule,
                        tail: float = 0.2) -> LimitEstimate:
    """The Tukia limit of a sample path applied to a base triple.

    Returns the deepest cylinder (or dyadic arc bin, levels taken from
    the schedule) that holds at least two components of w_n . x for
    every n in the final stretch; inconclusive when not even the
    shallowest level is stable.
    """
    depths = sorted(depth_schedule)
    if not depths or depths[0] < 1:
        raise ValueError("depth schedule must contain positive depths")
    if path.model == F2:
        incs = [g.word for g in path.increments]
    else:
        incs = [g.mat for g in path.increments]
    return walk_limit(incs, path.model, x, depths[-1], tail=tail)


# ---------------------------------------------------------------------------
# Hitting measures
# ---------------------------------------------------------------------------

@dataclass
class EmpiricalMeasure:
    """Binned boundary measure: depth-d cylinders (F2) or 2^level arcs."""

    model: str
    depth: int                  # cylinder depth, or dyadic level for arcs
    masses: dict
    trials: int = 0
    inconclusive_fraction: float = 0.0

    def total(self) -> float:
        return sum(self.masses.values())

    def bin_count(self) -> int:
        if self.model == F2:
            return 4 * 3 ** (self.depth - 1)
        return 1 << self.depth

    def mass(self, key) -> float:
        """Mass of a cylinder word no deeper than the bins (F2) or a bin."""
        if self.model == F2:
            if len(key) > self.depth:
                raise ValueError("word deeper than the bin algebra")
            if len(key) == self.depth:
                return self.masses.get(key, 0.0)
            return sum(m for w, m in self.masses.items() if w.startswith(key))
        return self.masses.get(key, 0.0)

    def cylinder_union_mass(self, words) -> float:
        return sum(self.mass(w) for w in words)


def all_bin_words(depth: int):
    return list(f2.words_of_length(depth))


def exact_hitting_measure_f2(depth: int) -> EmpiricalMeasure:
    """The hitting measure of the uniform nearest-neighbor walk.

    First-step analysis on the 4-regular tree: each first letter is
    equally likely, and each further non-backtracking letter splits the
    remaining mass evenly three ways.
    """
    mass = 0.25 * (1.0 / 3.0) ** (depth - 1)
    return EmpiricalMeasure(F2, depth, {w: mass for w in f2.words_of_length(depth)})


def _limit_bin(mu: StepDistribution, n: int, seed: int, stream: int, x: Triple,
               d_max: int, cum) -> LimitEstimate:
    rng = philox_stream(seed, stream)
    us = rng.random(n)
    if mu.model == F2:
        incs = [_draw(cum, float(u)).word for u in us]
    else:
        incs = [_draw(cum, float(u)).mat for u in us]
    return walk_limit(incs, mu.model, x, d_max)


def _hitting_chunk(args):
    (mu, n, seed, lo, hi, x, depth) = args
    cum = mu.cumulative()
    counts: dict = {}
    inconclusive = 0
    for stream in range(lo, hi):
        est = _limit_bin(mu, n, seed, stream, x, depth, cum)
        if not est.conclusive:
            inconclusive += 1
            continue
        if mu.model == F2:
            if len(est.word) < depth:
                inconclusive += 1
                continue
            key = est.word[:depth]
        else:
            if est.level < depth:
                inconclusive += 1
                continue
            key = est.bin_index >> (est.level - depth)
        counts[key] = counts.get(key, 0) + 1
    return counts, inconclusive


class InconclusiveWalks(RuntimeError):
    """Too many walks failed to settle; use longer paths."""


def estimate_hitting_measure(mu: StepDistribution, trials: int, n: int,
                             depth: int | None = None, bins: int | None = None,
                             seed: int = 0, x: Triple | None = None,
                             workers: int = 1,
                             max_inconclusive: float = 0.10) -> EmpiricalMeasure:
    """Empirical law of the walk limit over independent paths.

    The bin algebra is depth-d cylinders (F2, default d=6) or 2^10
    uniform arc bins (circle); paths whose limit does not stabilize to
    bin resolution are excluded and counted.
    """
    if trials < 100:
        raise ValueError("need at least 100 trials")
    if mu.model == F2:
        depth = 6 if depth is None else depth
    else:
        if bins is not None:
            depth = int(round(math.log2(bins)))
            if 1 << depth != bins:
                raise ValueError("bin count must be a power of two")
        depth = 10 if depth is None else depth
    if x is None:
        x = basepoint(mu.model)
    chunks = _split(trials, workers)
    args = [(mu, n, seed, lo, hi, x, depth) for lo, hi in chunks]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_hitting_chunk, args))
    else:
        results = [_hitting_chunk(a) for a in args]
    counts: dict = {}
    inconclusive = 0
    for c, bad in results:
        inconclusive += bad
        for k, v in c.items():
            counts[k] = counts.get(k, 0) + v
    frac_bad = inconclusive / trials
    if frac_bad > max_inconclusive:
        raise InconclusiveWalks(
            f"{frac_bad:.1%} of walks inconclusive at n={n}; increase the path length")
    good = trials - inconclusive
    masses = {k: v / good for k, v in sorted(counts.items())}
    return EmpiricalMeasure(mu.model, depth, masses, trials=trials,
                            inconclusive_fraction=frac_bad)


def _split(total: int, workers: int):
    workers = max(1, workers)
    step = (total + workers - 1) // workers
    return [(lo, min(lo + step, total)) for lo in range(0, total, step)]


# ---------------------------------------------------------------------------
# Stationarity
# ---------------------------------------------------------------------------

def check_stationarity(nu: EmpiricalMeasure, mu: StepDistribution) -> float:
    """Total-variation defect of nu against the mu-average of its translates.

    Evaluated on the deepest sub-algebra where every pushforward is an
    exact union of stored bins: depth minus the longest support word.
    """
    if nu.model != mu.model:
        raise ValueError("measure/distribution model mismatch")
    if nu.model == F2:
        lmax = mu.max_word_length()
        d_eval = nu.depth - lmax
        if d_eval < 1:
            raise ValueError(
                f"bin depth {nu.depth} too shallow for exact pushforward; need > {lmax}")
        tv = 0.0
        for w in f2.words_of_length(d_eval):
            pushed = 0.0
            for g, p in mu.support:
                pre = f2.cylinder_image(f2.invert(g.word), w)
                pushed += p * nu.cylinder_union_mass(pre)
            tv += abs(nu.mass(w) - pushed)
        return 0.5 * tv
    # circle bins: approximate pushforward by arc overlap fractions
    nbins = 1 << nu.depth
    width = circle.TAU / nbins
    tv = 0.0
    for b in range(nbins):
        target = nu.masses.get(b, 0.0)
        pushed = 0.0
        for g, p in mu.support:
            lo = circle.angle_of(circle.mat_apply(circle.mat_inv(g.mat),
                                                  circle.vec_from_angle(b * width)))
            hi = circle.angle_of(circle.mat_apply(circle.mat_inv(g.mat),
                                                  circle.vec_from_angle((b + 1) * width)))
            length = (hi - lo) % circle.TAU
            pushed += p * _arc_mass(nu, lo, length, width)
        tv += abs(target - pushed)
    return 0.5 * tv


def _arc_mass(nu: EmpiricalMeasure, start: float, length: float, width: float) -> float:
    nbins = 1 << nu.depth
    total = 0.0
    b0 = int(start // width)
    pos = start
    remaining = length
    b = b0
    while remaining > 1e-15:
        edge = (b + 1) * width
        step = min(edge - pos, remaining)
        frac = step / width
        total += frac * nu.masses.get(b % nbins, 0.0)
        pos = edge
        remaining -= step
        b += 1
    return total


# ---------------------------------------------------------------------------
# Finite-boundary mass surrogate
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FiniteBoundaryReport:
    fraction: float
    conclusive: int
    trials: int
    saturated: bool
    max_observed: int


def estimate_finite_boundary_mass(mu: StepDistribution, sys: AnnulusSystem,
                                  x: Triple, R: int, trials: int, n: int,
                                  seed: int = 0) -> FiniteBoundaryReport:
    """Fraction of walk limits passing the boundary-ball necessary condition.

    An upper-bound surrogate for the hitting mass of the ball around x
    of radius R at the system's truncation.  When R reaches the largest
    crossratio seen in the sample the surrogate saturates and is flagged.
    """
    ind = BoundaryBallIndicator(x, R)
    cum = mu.cumulative()
    need = sys._side_depth + 1 if mu.model == F2 else 12
    passing = 0
    conclusive = 0
    max_obs = 0
    for stream in range(trials):
        est = _limit_bin(mu, n, seed, stream, x, need, cum)
        if not est.conclusive:
            continue
        if mu.model == F2 and len(est.word) < need:
            continue
        if mu.model == PSL2Z and est.level < need:
            continue
        conclusive += 1
        p = est.representative()
        _, psnk = sys.point_masks(p)
        worst = 0
        from .quasimetric import _pair_masks

        for src, _ in _pair_masks(sys, x):
            worst = max(worst, sys.chain_length(src, psnk))
        max_obs = max(max_obs, worst)
        if worst <= R:
            passing += 1
    frac = passing / conclusive if conclusive else float("nan")
    return FiniteBoundaryReport(frac, conclusive, trials, R >= max_obs, max_obs)


# ---------------------------------------------------------------------------
# Harmonic extension of bin functions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BinFunction:
    """A bounded function on the bin algebra of the boundary."""

    model: str
    depth: int
    values: tuple  # of (bin key, value)
    default: float = 0.0

    def __call__(self, p: BoundaryPoint) -> float:
        table = dict(self.values)
        if self.model == F2:
            return table.get(p.head(self.depth), self.default)
        width = circle.TAU / (1 << self.depth)
        return table.get(int(p.angle() / width) % (1 << self.depth), self.default)


def cylinder_indicator(word: str) -> BinFunction:
    return BinFunction(F2, len(word), ((word, 1.0),))


def dirichlet_extension(f: BinFunction, g: GroupElement, mu: StepDistribution,
                        trials: int, n: int, seed: int = 0,
                        x: Triple | None = None) -> tuple[float, float]:
    """Monte Carlo harmonic extension h(g) = E[f(g . limit)], with std error."""
    if x is None:
        x = basepoint(mu.model)
    cum = mu.cumulative()
    need = (f.depth + (len(g.word) if g.model == F2 else 0)) + 1
    vals = []
    for stream in range(trials):
        est = _limit_bin(mu, n, seed, stream, x, need, cum)
        if not est.conclusive:
            continue
        if mu.model == F2 and len(est.word) < need:
            continue
        if mu.model == PSL2Z and est.level < need:
            continue
        vals.append(f(act(g, est.representative())))
    if not vals:
        raise InconclusiveWalks("no conclusive walks for the harmonic extension")
    arr = np.asarray(vals, dtype=float)
    return float(arr.mean()), float(arr.std(ddof=1) / math.sqrt(len(arr)))


# ---------------------------------------------------------------------------
# Cesaro contraction of point pairs
# ---------------------------------------------------------------------------

def cesaro_proximality(x: BoundaryPoint, y: BoundaryPoint, eps: float,
                       mu: StepDistribution, n_list, trials: int,
                       seed: int = 0) -> list[tuple[int, float]]:
    """For each n, the Cesaro-averaged probability that the images of x
    and y under a walk of uniformly random length 1..n stay eps-apart."""
    from .group_models import distance

    if x == y or (x.model == PSL2Z and distance(x, y) <= circle.ANGLE_TOL):
        raise ValueError("the two points must differ")
    if x.model != mu.model:
        raise ValueError("point/distribution model mismatch")
    cum = mu.cumulative()
    out = []
    for idx_n, n in enumerate(n_list):
        far = 0
        for t in range(trials):
            rng = philox_stream(seed, (idx_n << 32) | t)
            k = int(rng.integers(1, n + 1))
            w = identity(mu.model)
            for u in rng.random(k):
                w = multiply(w, _draw(cum, float(u)))
            if distance(act(w, x), act(w, y)) > eps:
                far += 1
        out.append((n, far / trials))
    return out


# ---------------------------------------------------------------------------
# Strongly-almost-transitive probe
# ---------------------------------------------------------------------------

def sat_probe(bin_words, eps: float, ball_radius: int,
              nu: EmpiricalMeasure) -> GroupElement | None:
    """Search the word ball for g with nu(g . A) > 1 - eps.

    A is a union of cylinders; the pushforward is computed exactly on
    the bin algebra, which requires the bins deep enough to resolve
    every translated cylinder.
    """
    if nu.model != F2:
        raise ValueError("the probe is implemented for the tree model")
    bin_words = tuple(bin_words)
    if not bin_words:
        raise ValueError("empty bin set")
    if f2.covers_boundary(bin_words):
        return identity(F2)  # the whole boundary: every translate has full mass
    base_mass = nu.cylinder_union_mass(bin_words)
    if base_mass <= 0:
        raise ValueError("the probed set must have positive mass")
    deepest = max(len(w) for w in bin_words)
    if deepest + ball_radius > nu.depth:
        raise ValueError(
            f"bin depth {nu.depth} cannot resolve radius-{ball_radius} translates "
            f"of depth-{deepest} sets exactly")
    for g in word_ball(F2, ball_radius):
        image = f2.cylinders_image(g.word, bin_words)
        if any(len(u) > nu.depth for u in image):
            raise ValueError("translated set leaves the bin algebra")
        if nu.cylinder_union_mass(image) > 1.0 - eps:
            return g
    return None
