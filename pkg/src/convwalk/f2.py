"""Reduced words and boundary cylinders for the rank-2 free group.

Group elements are reduced words over the alphabet ``a A b B`` (upper
case letters are the inverses of the lower case ones).  The boundary at
infinity is the space of infinite reduced words.  We work with its
eventually-periodic elements, stored as ``prefix + block^inf`` pairs in
a canonical form; this countable dense family is exactly closed under
the group action, so every computation here is exact integer/string
arithmetic.

Closed (equivalently clopen) subsets of the boundary are finite unions
of cylinders ``C(w)``, where ``C(w)`` is the set of infinite reduced
words starting with the reduced word ``w``.  The image of a cylinder
under a group element is again a finite union of cylinders, which keeps
the whole set algebra closed under the action.
"""

from __future__ import annotations

LETTERS = "aAbB"

_INVERSE = {"a": "A", "A": "a", "b": "B", "B": "b"}


def inv_letter(c: str) -> str:
    return _INVERSE[c]


def invert(word: str) -> str:
    """Inverse of a reduced word (reversal with letters inverted)."""
    return "".join(_INVERSE[c] for c in reversed(word))


def is_reduced(word: str) -> bool:
    return all(word[i + 1] != _INVERSE[word[i]] for i in range(len(word) - 1))


def concat(u: str, v: str) -> str:
    """Reduced product of two reduced words."""
    buf = list(u)
    for c in v:
        if buf and buf[-1] == _INVERSE[c]:
            buf.pop()
        else:
            buf.append(c)
    return "".join(buf)


def words_of_length(n: int):
    """All reduced words of length exactly n."""
    if n == 0:
        yield ""
        return
    stack = [c for c in LETTERS]
    for w in stack:
        yield from _extend(w, n - 1)


def _extend(w: str, remaining: int):
    if remaining == 0:
        yield w
        return
    for c in LETTERS:
        if c != _INVERSE[w[-1]]:
            yield from _extend(w + c, remaining - 1)


def ball(radius: int):
    """All reduced words of length <= radius, shortest first."""
    out = [""]
    for n in range(1, radius + 1):
        out.extend(words_of_length(n))
    return out


def valid_continuations(w: str) -> str:
    """Letters that can extend the reduced word w."""
    if not w:
        return LETTERS
    return "".join(c for c in LETTERS if c != _INVERSE[w[-1]])


# ---------------------------------------------------------------------------
# Eventually periodic boundary points
# ---------------------------------------------------------------------------

def canonical_point(prefix: str, block: str) -> tuple[str, str]:
    """Canonical (prefix, block) representation of prefix + block^inf.

    The block is made primitive (not a proper power) and the prefix is
    shortened by rotating the block, so that equal infinite words get
    equal representations.
    """
    if not block:
        raise ValueError("periodic block must be nonempty")
    for p in range(1, len(block) + 1):
        if len(block) % p == 0 and block == block[:p] * (len(block) // p):
            block = block[:p]
            break
    while prefix and prefix[-1] == block[-1]:
        prefix = prefix[:-1]
        block = block[-1] + block[:-1]
    return prefix, block


def check_point(prefix: str, block: str) -> None:
    """Raise if prefix + block^inf is not an infinite reduced word."""
    if not block:
        raise ValueError("periodic block must be nonempty")
    if not is_reduced(prefix + block):
        raise ValueError(f"word {prefix!r}+{block!r}^inf is not reduced")
    if block[-1] == _INVERSE[block[0]]:
        raise ValueError(f"block {block!r} does not repeat reduced")


def point_prefix(prefix: str, block: str, k: int) -> str:
    """First k letters of the infinite word prefix + block^inf."""
    if k <= len(prefix):
        return prefix[:k]
    need = k - len(prefix)
    reps = need // len(block) + 1
    return prefix + (block * reps)[:need]


def act_word(g: str, prefix: str, block: str) -> tuple[str, str]:
    """Canonical image of the boundary point prefix + block^inf under g.

    Letters of g are prepended one at a time; a letter either cancels
    the current first letter of the infinite word or becomes the new
    first letter, so cancellation into the periodic part is handled by
    rotating the block.
    """
    pre = list(prefix)
    blk = block
    for c in reversed(g):
        first = pre[0] if pre else blk[0]
        if first == _INVERSE[c]:
            if pre:
                pre.pop(0)
            else:
                blk = blk[1:] + blk[0]
        else:
            pre.insert(0, c)
    return canonical_point("".join(pre), blk)


def common_prefix_len(p: tuple[str, str], q: tuple[str, str], cap: int = 64) -> int:
    """Length of the common prefix of two boundary points, capped."""
    a = point_prefix(p[0], p[1], cap)
    b = point_prefix(q[0], q[1], cap)
    n = 0
    for x, y in zip(a, b):
        if x != y:
            break
        n += 1
    return n


# ---------------------------------------------------------------------------
# Cylinder unions
# ---------------------------------------------------------------------------

def normalize_cylinders(words) -> tuple[str, ...]:
    """Canonical minimal form of a union of cylinders.

    Cylinders nested inside coarser ones are dropped, and complete
    sibling families are coalesced into their parent, to a fixed point.
    Raises if the union is the whole boundary, which is not a valid
    proper subset.
    """
    ws = set(words)
    if any(not w or not is_reduced(w) for w in ws):
        raise ValueError("cylinder words must be nonempty reduced words")
    changed = True
    while changed:
        changed = False
        drop = {w for w in ws if any(w != v and w.startswith(v) for v in ws)}
        if drop:
            ws -= drop
            changed = True
        by_parent: dict[str, set[str]] = {}
        for w in ws:
            by_parent.setdefault(w[:-1], set()).add(w[-1])
        for parent, letters in by_parent.items():
            if parent == "":
                if letters == set(LETTERS):
                    raise ValueError("cylinder union covers the whole boundary")
                continue
            if parent in ws:
                continue
            if letters == set(valid_continuations(parent)):
                ws -= {parent + x for x in letters}
                ws.add(parent)
                changed = True
    return tuple(sorted(ws))


def cylinder_image(g: str, w: str) -> tuple[str, ...]:
    """g * C(w) as a canonical union of cylinders.

    If reducing g*w does not consume all of w the image is the single
    cylinder C(reduce(g*w)); otherwise it is the set of words h*x with
    x ranging over the letters allowed after w, which recurses on the
    leftover h of g.
    """
    if not w:
        raise ValueError("cylinder word must be nonempty")
    out: list[str] = []
    _image(g, w, out)
    return normalize_cylinders(out)


def _image(g: str, w: str, out: list[str]) -> None:
    k = 0
    while k < len(w) and k < len(g) and g[-1 - k] == _INVERSE[w[k]]:
        k += 1
    if k < len(w):
        out.append(g[: len(g) - k] + w[k:])
        return
    h = g[: len(g) - len(w)]
    forbidden = _INVERSE[w[-1]]
    for x in LETTERS:
        if x != forbidden:
            _image(h, x, out)


def cylinders_image(g: str, words) -> tuple[str, ...]:
    out: list[str] = []
    for w in words:
        out.extend(cylinder_image(g, w))
    return normalize_cylinders(out)


def point_in_cylinders(words, prefix: str, block: str) -> bool:
    if not words:
        return False
    k = max(len(w) for w in words)
    head = point_prefix(prefix, block, k)
    return any(head.startswith(w) for w in words)


def covers_boundary(words, root: str = "") -> bool:
    """True iff the union of C(w) contains every infinite word extending root."""
    if any(root.startswith(w) for w in words):
        return True
    if not any(w.startswith(root) for w in words):
        return False
    return all(covers_boundary(words, root + x) for x in valid_continuations(root))


def complement_cylinders(words) -> tuple[str, ...]:
    """Complement of a nonempty cylinder union, as a cylinder union."""
    if not words:
        raise ValueError("complement of the empty union is the whole boundary")
    out: list[str] = []

    def walk(root: str) -> None:
        if any(root.startswith(w) for w in words):
            return
        if not any(w.startswith(root) and w != root for w in words):
            out.append(root)
            return
        for x in valid_continuations(root):
            walk(root + x)

    walk("")
    if not out:
        raise ValueError("union covers the whole boundary")
    return normalize_cylinders(out)


def cylinders_disjoint(ws1, ws2) -> bool:
    """True iff the two cylinder unions are disjoint."""
    for u in ws1:
        for v in ws2:
            if u.startswith(v) or v.startswith(u):
                return False
    return True


def cylinders_subset(inner, outer) -> bool:
    """True iff the union of inner cylinders is contained in the outer union."""
    return all(covers_boundary(outer, root=w) for w in inner)


# ---------------------------------------------------------------------------
# Random sampling
# ---------------------------------------------------------------------------

def random_reduced_word(rng, length: int) -> str:
    w: list[str] = []
    for _ in range(length):
        choices = valid_continuations("".join(w[-1:]))
        w.append(choices[int(rng.integers(len(choices)))])
    return "".join(w)


def random_point(rng, max_prefix: int = 3, max_block: int = 3) -> tuple[str, str]:
    """Random eventually-periodic boundary point in canonical form."""
    while True:
        prefix = random_reduced_word(rng, int(rng.integers(0, max_prefix + 1)))
        blen = int(rng.integers(1, max_block + 1))
        word = prefix
        for _ in range(blen):
            choices = valid_continuations(word)
            word += choices[int(rng.integers(len(choices)))]
        block = word[len(prefix):]
        if block and block[-1] != _INVERSE[block[0]]:
            return canonical_point(prefix, block)
