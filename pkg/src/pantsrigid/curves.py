"""Curves on the n-punctured sphere as reduced cut sequences.

Model: finite punctures q_1..q_{n-1} sit at (k, 0); puncture p_n is at
infinity.  The cut system is the family of downward vertical rays g_k from
q_k.  A closed curve transverse to the rays is recorded by the cyclic
sequence of rays it crosses, each with a sign (+1 = crossing towards
increasing x).  Internally a symbol (k, s) is stored as the signed integer
s*k.

Reading the sequence as a word in the free group on the loops x_k (x_k
crosses g_k once, positively, and encircles q_k counterclockwise), reduced
cut sequences are cyclically reduced words and curve classes are
conjugacy classes up to inversion.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence


class CurveError(ValueError):
    pass


class NotEssential(CurveError):
    pass


class InvalidBlock(CurveError):
    pass


def letter_key(x: int) -> int:
    # ray index first, then +1 before -1
    return 2 * (abs(x) - 1) + (0 if x > 0 else 1)


def invert(seq: Sequence[int]) -> tuple[int, ...]:
    """Reverse the sequence and flip all signs."""
    return tuple(-x for x in reversed(seq))


def reduce(seq: Iterable) -> tuple[int, ...]:
    """Cancel cyclically adjacent (k,+1)(k,-1) pairs until none remain.

    Accepts signed integers or (k, s) pairs.  Free cyclic reduction is
    confluent, so the result does not depend on cancellation order.
    """
    stack: list[int] = []
    for x in seq:
        if not isinstance(x, int):
            k, s = x
            x = k * s
        if x == 0:
            raise CurveError("ray index must be positive")
        if stack and stack[-1] == -x:
            stack.pop()
        else:
            stack.append(x)
    lo, hi = 0, len(stack)
    while hi - lo >= 2 and stack[lo] == -stack[hi - 1]:
        lo += 1
        hi -= 1
    return tuple(stack[lo:hi])


def is_reduced(seq: Sequence[int]) -> bool:
    m = len(seq)
    return all(seq[i] != -seq[(i + 1) % m] for i in range(m)) if m > 1 else True


def _min_rotation(seq: tuple[int, ...]) -> tuple[int, ...]:
    if not seq:
        return seq
    keys = [letter_key(x) for x in seq]
    m = len(seq)
    doubled = keys + keys
    best = min(range(m), key=lambda i: doubled[i:i + m])
    return seq[best:] + seq[:best]


def canonical_seq(seq: Sequence[int]) -> tuple[int, ...]:
    """Lexicographic minimum over rotations of seq and of its inverse."""
    seq = tuple(seq)
    a = _min_rotation(seq)
    b = _min_rotation(invert(seq))
    ka = [letter_key(x) for x in a]
    kb = [letter_key(x) for x in b]
    return a if ka <= kb else b


def _sort_key(seq: tuple[int, ...]) -> tuple:
    return (len(seq), tuple(letter_key(x) for x in seq))


@dataclass(frozen=True)
class SphereModel:
    """Collinear model of S_{0,n}; see module docstring."""

    n: int

    def __post_init__(self):
        if self.n < 4:
            raise CurveError(f"need n >= 4 punctures, got {self.n}")

    @property
    def finite(self) -> int:
        return self.n - 1

    @property
    def complexity(self) -> int:
        return self.n - 3

    def puncture_position(self, k: int):
        from fractions import Fraction
        if not 1 <= k <= self.n - 1:
            raise CurveError(f"p{k} is not a finite puncture")
        return (Fraction(k), Fraction(0))


@dataclass(frozen=True, order=False)
class CurveClass:
    """Isotopy class of an essential simple closed curve on S_{0,n}.

    `seq` is the canonical reduced cut sequence; construct through
    :func:`canonicalize` (or :meth:`from_seq`) rather than directly.
    """

    n: int
    seq: tuple[int, ...]

    @classmethod
    def from_seq(cls, seq, n: int) -> "CurveClass":
        return canonicalize(reduce(seq), n)

    def __lt__(self, other: "CurveClass") -> bool:
        return self.sort_key < other.sort_key

    @property
    def sort_key(self) -> tuple:
        return _sort_key(self.seq)

    def __len__(self) -> int:
        return len(self.seq)

    def crossings(self) -> dict[int, int]:
        """Number of crossings with each ray (reduced = minimal)."""
        out = {k: 0 for k in range(1, self.n)}
        for x in self.seq:
            out[abs(x)] += 1
        return out

    def to_json(self) -> dict:
        return {"n": self.n, "seq": [[abs(x), 1 if x > 0 else -1] for x in self.seq]}

    @classmethod
    def from_json(cls, data) -> "CurveClass":
        if isinstance(data, str):
            data = json.loads(data)
        return canonicalize([k * s for k, s in data["seq"]], data["n"])

    def __repr__(self) -> str:
        body = " ".join(f"{abs(x)}{'+' if x > 0 else '-'}" for x in self.seq)
        return f"Curve(n={self.n}: {body})"


def enclosed_from_seq(seq: Sequence[int], n: int) -> frozenset[int]:
    counts = [0] * n
    for x in seq:
        counts[abs(x)] += 1
    return frozenset(k for k in range(1, n) if counts[k] % 2)


def is_essential(c, n: int | None = None) -> bool:
    """Both complementary sides carry at least two punctures."""
    if isinstance(c, CurveClass):
        seq, n = c.seq, c.n
    else:
        seq = reduce(c)
    if not seq:
        return False
    k = len(enclosed_from_seq(seq, n))
    return 2 <= k <= n - 2


def canonicalize(seq: Sequence[int], n: int) -> CurveClass:
    seq = tuple(seq)
    if not is_reduced(seq):
        raise CurveError("sequence is not reduced; call reduce() first")
    for x in seq:
        if not 1 <= abs(x) <= n - 1:
            raise CurveError(f"ray index {abs(x)} out of range for n={n}")
    if not is_essential(seq, n):
        raise NotEssential(f"curve {seq} bounds a disk or once-punctured disk")
    return CurveClass(n, canonical_seq(seq))


def enclosed_punctures(c: CurveClass) -> frozenset[int]:
    """Finite punctures on the side of c away from p_n (parity rule)."""
    return enclosed_from_seq(c.seq, c.n)


def sides(c: CurveClass) -> tuple[frozenset[int], frozenset[int]]:
    inside = enclosed_punctures(c)
    return inside, frozenset(range(1, c.n + 1)) - inside


def normalize_block(block: Iterable[int], n: int) -> tuple[int, ...]:
    """Return the block as the cyclic interval it forms, in cyclic order.

    Raises InvalidBlock unless the set is cyclically consecutive in 1..n.
    """
    b = sorted(set(block))
    if not b or any(not 1 <= p <= n for p in b):
        raise InvalidBlock(f"bad block {block}")
    if len(b) == n:
        return tuple(b)
    members = set(b)
    starts = [p for p in b if (p - 2) % n + 1 not in members]
    if len(starts) != 1:
        raise InvalidBlock(f"{block} is not cyclically consecutive in 1..{n}")
    s = starts[0]
    return tuple((s - 1 + i) % n + 1 for i in range(len(b)))


def finite_side(block: Iterable[int], n: int) -> tuple[int, ...]:
    """The side of a block curve not containing p_n, as increasing integers."""
    b = normalize_block(block, n)
    if n in b:
        b = tuple(sorted(set(range(1, n + 1)) - set(b)))
        b = normalize_block(b, n)
    return tuple(sorted(b))


def round_curve(block: Iterable[int], n: int | SphereModel) -> CurveClass:
    """The standard curve around a cyclically consecutive block of punctures."""
    if isinstance(n, SphereModel):
        n = n.n
    b = normalize_block(block, n)
    if not 2 <= len(b) <= n - 2:
        raise InvalidBlock(f"block {block} must have between 2 and n-2 punctures")
    fin = finite_side(b, n)
    return CurveClass(n, canonical_seq(tuple(fin)))


# ---------------------------------------------------------------------------
# geometric intersection number
#
# The rose formed by the loops x_k is a ribbon graph with one vertex whose
# half-edges, counterclockwise, are x_1, x_1^-1, x_2, x_2^-1, ...  Lifts of
# two closed geodesics cross iff their axes in the universal cover (a tree
# with cyclic orders at vertices) have interleaved endpoints.  Each crossing
# is counted once, at the start of the maximal common segment of the axes.

def _half_edge(x: int) -> int:
    return letter_key(x)


def _left(x: int, a_in: int, b_out: int, size: int) -> bool:
    # x lies strictly counterclockwise between the outgoing and incoming half-edge
    px, pa, pb = _half_edge(x), _half_edge(a_in), _half_edge(b_out)
    return (px - pb) % size < (pa - pb) % size


def _linked_pairs(w: tuple[int, ...], v: tuple[int, ...], n: int, limit: int | None) -> int:
    size = 2 * (n - 1)
    m, l = len(w), len(v)
    cap = m + l
    total = 0
    for V, allow_vertex in ((v, True), (invert(v), False)):
        for i in range(m):
            w_in = -w[i - 1]
            w_out = w[i]
            for j in range(l):
                v_in = -V[j - 1]
                if w_in == v_in:
                    continue
                L = 0
                while L < cap and w[(i + L) % m] == V[(j + L) % l]:
                    L += 1
                if L >= cap:
                    return 0
                if L == 0:
                    if not allow_vertex:
                        continue
                    v_out = V[j]
                    if w_in == v_out or w_out == v_in:
                        continue
                    linked = _left(v_in, w_in, w_out, size) != _left(v_out, w_in, w_out, size)
                else:
                    s1 = _left(v_in, w_in, w_out, size)
                    c_in = -w[(i + L - 1) % m]
                    s2 = _left(V[(j + L) % l], c_in, w[(i + L) % m], size)
                    linked = s1 != s2
                if linked:
                    total += 1
                    if limit is not None and total > limit:
                        return total
    return total


@lru_cache(maxsize=1 << 18)
def _intersection_cached(w, v, n):
    return _linked_pairs(w, v, n, None)


def geometric_intersection(a: CurveClass, b: CurveClass) -> int:
    """Minimal number of transverse intersections of the two classes."""
    if a.n != b.n:
        raise CurveError("curves live on different spheres")
    if a.seq == b.seq:
        return 0
    w, v = (a.seq, b.seq) if a.sort_key <= b.sort_key else (b.seq, a.seq)
    return _intersection_cached(w, v, a.n)


def intersection_at_most(a: CurveClass, b: CurveClass, bound: int) -> bool:
    if a.seq == b.seq:
        return True
    return _linked_pairs(a.seq, b.seq, a.n, bound) <= bound


def are_disjoint(a: CurveClass, b: CurveClass) -> bool:
    return geometric_intersection(a, b) == 0
