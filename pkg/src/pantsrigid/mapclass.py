"""Mapping classes of S_{0,n} as words in elementary generators.

Generators
  sigma(i, s)      half-twist exchanging q_i and q_{i+1}; s=+1 is the
                   counterclockwise one.  Acts on cut words by the Artin
                   substitution x_i -> x_i x_{i+1} x_i^-1, x_{i+1} -> x_i.
  reflect          complex conjugation (the involution exchanging the two
                   halves of the doubled polygon); orientation reversing.
  recoordinate(k)  rotation of the doubled polygon taking p_k to p_n, i.e.
                   p_j -> p_{j-k}.  recoordinate(n) is the identity.

reflect and recoordinate act geometrically: realize, move or re-cut, extract.
Words act left to right.
"""
from __future__ import annotations

import heapq
import json
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from .curves import (
    CurveClass, CurveError, InvalidBlock, canonicalize, enclosed_punctures, finite_side, invert,
    normalize_block, reduce, round_curve,
)
from .geometry import Arc, extract_perturbing, realize


@dataclass(frozen=True)
class Generator:
    kind: str            # "sigma" | "reflect" | "recoordinate"
    i: int = 0
    sign: int = 1

    def __post_init__(self):
        if self.kind not in ("sigma", "reflect", "recoordinate"):
            raise ValueError(f"unknown generator kind {self.kind!r}")
        if self.kind == "sigma" and self.sign not in (1, -1):
            raise ValueError("sigma sign must be +1 or -1")

    def check(self, n: int):
        if self.kind == "sigma" and not 1 <= self.i <= n - 2:
            raise ValueError(f"sigma index {self.i} out of range for n={n}")
        if self.kind == "recoordinate" and not 1 <= self.i <= n:
            raise ValueError(f"recoordinate target {self.i} out of range for n={n}")

    def inverse(self, n: int) -> "Generator":
        if self.kind == "sigma":
            return Generator("sigma", self.i, -self.sign)
        if self.kind == "recoordinate":
            return Generator("recoordinate", (n - self.i) % n or n)
        return self

    def to_json(self) -> list:
        if self.kind == "sigma":
            return ["sigma", self.i, self.sign]
        if self.kind == "recoordinate":
            return ["recoordinate", self.i]
        return ["reflect"]

    @classmethod
    def from_json(cls, data) -> "Generator":
        if data[0] == "sigma":
            return cls("sigma", int(data[1]), int(data[2]))
        if data[0] == "recoordinate":
            return cls("recoordinate", int(data[1]))
        if data[0] == "reflect":
            return cls("reflect")
        raise ValueError(f"bad generator {data!r}")

    def __repr__(self):
        if self.kind == "sigma":
            return f"s{self.i}{'+' if self.sign > 0 else '-'}"
        if self.kind == "recoordinate":
            return f"r{self.i}"
        return "e"


def sigma(i: int, sign: int = 1) -> Generator:
    return Generator("sigma", i, sign)


REFLECT = Generator("reflect")


def recoordinate(k: int) -> Generator:
    return Generator("recoordinate", k)


@dataclass(frozen=True)
class MCWord:
    n: int
    word: tuple[Generator, ...] = ()

    def __post_init__(self):
        for g in self.word:
            g.check(self.n)

    def __len__(self):
        return len(self.word)

    def __add__(self, other: "MCWord") -> "MCWord":
        if other.n != self.n:
            raise ValueError("words on different spheres")
        return MCWord(self.n, self.word + other.word)

    def __pow__(self, k: int) -> "MCWord":
        base = self if k >= 0 else self.inverse()
        return MCWord(self.n, base.word * abs(k))

    def inverse(self) -> "MCWord":
        return MCWord(self.n, tuple(g.inverse(self.n) for g in reversed(self.word)))

    @property
    def orientation(self) -> int:
        return -1 if sum(g.kind == "reflect" for g in self.word) % 2 else 1

    def to_json(self) -> dict:
        return {"n": self.n, "word": [g.to_json() for g in self.word]}

    @classmethod
    def from_json(cls, data) -> "MCWord":
        if isinstance(data, str):
            data = json.loads(data)
        return cls(int(data["n"]), tuple(Generator.from_json(g) for g in data["word"]))

    def __repr__(self):
        return f"MCWord(n={self.n}: {' '.join(map(repr, self.word)) or 'id'})"


# ---------------------------------------------------------------------------
# generator actions

def _artin_image(i: int, s: int, k: int) -> tuple[int, ...]:
    if s > 0:
        if k == i:
            return (i, i + 1, -i)
        if k == i + 1:
            return (i,)
    else:
        if k == i:
            return (i + 1,)
        if k == i + 1:
            return (-(i + 1), i, i + 1)
    return (k,)


def substitute(seq: Sequence[int], images: dict[int, tuple[int, ...]]) -> tuple[int, ...]:
    """Apply a free-group endomorphism given on positive letters, then reduce."""
    out: list[int] = []
    for x in seq:
        img = images.get(abs(x), (abs(x),))
        out.extend(img if x > 0 else invert(img))
    return reduce(out)


def _sigma_seq(seq, i, s):
    return substitute(seq, {i: _artin_image(i, s, i), i + 1: _artin_image(i, s, i + 1)})


def _reflect_seq(c: CurveClass) -> tuple[int, ...]:
    poly = realize(c).map(lambda p: (p[0], -p[1]))
    return extract_perturbing(poly, c.n)


def recoordinate_arcs(n: int, k: int, poly, floor: Fraction | None = None) -> list[Arc]:
    """Cut system of the model in which p_k sits at infinity, drawn in the old one.

    Every other finite puncture gets an arc through the lower half plane
    ending at q_k; the arc for the old point at infinity is the old ray
    below q_k, traversed upwards.  Arcs farther from q_k pass below nearer ones.
    """
    qk = (Fraction(k), Fraction(0))
    lo = poly.bounds()[2]
    bottom = min(lo, Fraction(0), floor if floor is not None else Fraction(0)) - 1
    arcs = []
    for j in range(1, n + 1):
        if j == k:
            continue
        idx = (j - k) % n
        if j == n:
            arcs.append(Arc(idx, ((Fraction(k), bottom), qk)))
            continue
        t = abs(j - k)
        h = Fraction(t * t) + Fraction(1, 3)
        if -h <= bottom:
            raise CurveError("arc system does not clear the polygon")
        arcs.append(Arc(idx, ((Fraction(j), Fraction(0)), (Fraction(j), -h), qk)))
    return arcs


def _recoordinate_seq(c: CurveClass, k: int) -> tuple[int, ...]:
    n = c.n
    floor = -Fraction(max((j - k) ** 2 for j in range(1, n)) + 2)
    punct = [(Fraction(j), Fraction(0)) for j in range(1, n)]
    return extract_perturbing(realize(c), n,
                              arcs_fn=lambda p: recoordinate_arcs(n, k, p, floor),
                              punctures=punct)


@lru_cache(maxsize=1 << 17)
def _apply_cached(g: Generator, c: CurveClass) -> CurveClass:
    if g.kind == "sigma":
        seq = _sigma_seq(c.seq, g.i, g.sign)
    elif g.kind == "reflect":
        seq = _reflect_seq(c)
    else:
        if g.i == c.n:
            return c
        seq = _recoordinate_seq(c, g.i)
    return canonicalize(seq, c.n)


def apply_generator(g: Generator, c: CurveClass) -> CurveClass:
    g.check(c.n)
    return _apply_cached(g, c)


def apply_word(w: MCWord | Iterable[Generator], c: CurveClass) -> CurveClass:
    word = w.word if isinstance(w, MCWord) else tuple(w)
    if isinstance(w, MCWord) and w.n != c.n:
        raise ValueError("word and curve live on different spheres")
    for g in word:
        c = apply_generator(g, c)
    return c


def apply_word_all(w: MCWord, curves: Iterable[CurveClass]) -> list[CurveClass]:
    return [apply_word(w, c) for c in curves]


def puncture_permutation(w: MCWord) -> dict[int, int]:
    """Where each puncture label is carried by w (p_n included)."""
    n = w.n
    perm = {j: j for j in range(1, n + 1)}
    for g in w.word:
        if g.kind == "sigma":
            step = {g.i: g.i + 1, g.i + 1: g.i}
        elif g.kind == "recoordinate":
            step = {j: (j - g.i - 1) % n + 1 for j in range(1, n + 1)}
        else:
            step = {}
        perm = {j: step.get(p, p) for j, p in perm.items()}
    return perm


# ---------------------------------------------------------------------------
# block machinery

def _split_adjacent(b1, b2, n):
    b1 = normalize_block(b1, n)
    b2 = normalize_block(b2, n)
    if set(b1) & set(b2):
        raise InvalidBlock("blocks overlap")
    union = normalize_block(set(b1) | set(b2), n)
    if len(union) > n - 2:
        raise InvalidBlock("union of blocks too large for a half-twist")
    # order the two blocks along the union
    first, second = (b1, b2) if union[0] == b1[0] else (b2, b1)
    if union[0] not in (b1[0], b2[0]):
        raise InvalidBlock("blocks are not adjacent")
    return first, second, union


def _cable_word(left: Sequence[int], t: int) -> list[Generator]:
    # every strand of `left`, rightmost first, passes all t strands to its right
    out = []
    for i in reversed(left):
        out.extend(sigma(j, 1) for j in range(i, i + t))
    return out


def block_transposition(b1, b2, n: int) -> MCWord:
    """Counterclockwise half-twist exchanging two adjacent blocks as bundles.

    When the union contains p_n the twist is conjugated by a change of
    infinity so that the union becomes a finite block.
    """
    first, second, union = _split_adjacent(b1, b2, n)
    if n not in union:
        return MCWord(n, tuple(_cable_word(first, len(second))))
    k = (union[0] - 2) % n + 1
    shift = lambda b: [(p - k - 1) % n + 1 for p in b]
    f2 = shift(first)
    inner = _cable_word(f2, len(second))
    r = recoordinate(k)
    return MCWord(n, (r, *inner, r.inverse(n)))


def dehn_twist(block, n: int) -> MCWord:
    """Full counterclockwise twist about the round curve of a block."""
    fin = finite_side(block, n)
    a, b = fin[0], fin[-1]
    cyc = [sigma(j, 1) for j in range(a, b)]
    return MCWord(n, tuple(cyc * len(fin)))


def half_twist(b1, b2, sign: int, x: CurveClass) -> CurveClass:
    """T_c^{sign/2}(x) for the curve c around two adjacent blocks."""
    w = block_transposition(b1, b2, x.n)
    return apply_word(w if sign > 0 else w.inverse(), x)


# ---------------------------------------------------------------------------
# subsurfaces bounded by round curves

@dataclass(frozen=True)
class BlockSystem:
    """Partition of the punctures into cyclic blocks, in cyclic order.

    The last block contains p_n.  Collapsing each block to a single
    puncture identifies the subsurface they bound with S_{0,m}, m = #blocks.
    """
    n: int
    blocks: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        flat = [p for b in self.blocks for p in b]
        if sorted(flat) != list(range(1, self.n + 1)):
            raise InvalidBlock("blocks must partition the punctures")
        if self.n not in self.blocks[-1]:
            raise InvalidBlock("last block must contain p_n")
        fin = [p for b in self.blocks[:-1] for p in b]
        if fin and fin != list(range(fin[0], fin[0] + len(fin))):
            raise InvalidBlock("finite blocks must be consecutive and increasing")

    @property
    def m(self) -> int:
        return len(self.blocks)

    def inflate(self, c: CurveClass) -> CurveClass:
        """Image of a curve of S_{0,m} under the block identification."""
        if c.n != self.m:
            raise ValueError(f"expected a curve on S_0,{self.m}")
        images = {j + 1: tuple(b) for j, b in enumerate(self.blocks[:-1])}
        return canonicalize(substitute(c.seq, images), self.n)

    def collapse(self, c: CurveClass) -> CurveClass:
        """Inverse of inflate; raises CurveError if c leaves the subsurface."""
        starts = {}
        for j, b in enumerate(self.blocks[:-1]):
            starts[b[0]] = (j + 1, tuple(b))
            starts[-b[-1]] = (-(j + 1), invert(b))
        w = c.seq
        m = len(w)
        for s in range(m):
            if w[s] not in starts:
                continue
            out = []
            p = 0
            ok = True
            while p < m:
                x = w[(s + p) % m]
                if x not in starts:
                    ok = False
                    break
                sym, body = starts[x]
                if any(w[(s + p + q) % m] != body[q] for q in range(len(body))):
                    ok = False
                    break
                out.append(sym)
                p += len(body)
            if ok and p == m:
                return canonicalize(reduce(out), self.m)
        raise CurveError(f"{c} does not live in the subsurface {self.blocks}")

    def object_of(self, p: int) -> int:
        for j, b in enumerate(self.blocks):
            if p in b:
                return j + 1
        raise KeyError(p)


def round_components(blocks_of_curves: Iterable[Sequence[int]], n: int) -> list[BlockSystem]:
    """Complementary components of a multicurve of round curves.

    Curves are given by any of their two sides.  Each component is returned
    as the block system of its boundary objects.
    """
    fins = sorted({tuple(finite_side(b, n)) for b in blocks_of_curves},
                  key=lambda f: (len(f), f))
    comps = []
    # components: one inside each curve (finite side), plus the outer one
    for host in [None] + fins:
        inside = set(host) if host else set(range(1, n))
        children = [f for f in fins if set(f) < inside]
        maximal = [f for f in children if not any(set(f) < set(g) for g in children)]
        covered = set().union(*map(set, maximal)) if maximal else set()
        objs = [tuple(f) for f in maximal] + [(p,) for p in sorted(inside - covered)]
        objs.sort(key=lambda b: b[0])
        outer = tuple(normalize_block(set(range(1, n + 1)) - inside, n)) if host else (n,)
        comps.append(BlockSystem(n, tuple(objs) + (outer,)))
    return comps


def component_with(curves: Iterable[Sequence[int]], n: int, size: int) -> BlockSystem:
    """The unique complementary component with `size` objects."""
    found = [c for c in round_components(curves, n) if c.m == size]
    if len(found) != 1:
        raise InvalidBlock(f"expected one {size}-object component, found {len(found)}")
    return found[0]


def block_of_round(c: CurveClass) -> tuple[int, ...]:
    """Finite side of a round curve, or raise if c is not round."""
    fin = tuple(sorted(p for p in range(1, c.n) if p in enclosed_punctures(c)))
    if not fin or round_curve(fin, c.n) != c:
        raise InvalidBlock(f"{c} is not a round curve")
    return fin


def is_round(c: CurveClass) -> bool:
    try:
        block_of_round(c)
        return True
    except (InvalidBlock, CurveError):
        return False


# ---------------------------------------------------------------------------
# word search

def _default_generators(n: int, with_reflect: bool = True) -> list[Generator]:
    gens = [sigma(i, s) for i in range(1, n - 1) for s in (1, -1)]
    gens += [recoordinate(k) for k in range(1, n)]
    if with_reflect:
        gens.append(REFLECT)
    return gens


def _gen_key(g: Generator):
    return ({"sigma": 0, "recoordinate": 1, "reflect": 2}[g.kind], g.i, -g.sign)


def word_search(pairs: Sequence[tuple[CurveClass, CurveClass]], max_len: int,
                generators: Sequence[Generator] | None = None,
                max_nodes: int = 200000) -> MCWord | None:
    """A word w with w(a) = b for every pair, or None if none within max_len.

    Best-first search on the total cut length of the images that still
    differ from their targets, breaking ties by word length and then
    lexicographically, so the result is deterministic.  The search is
    exhaustive up to `max_nodes` expansions.
    """
    if not pairs:
        raise ValueError("need at least one pair")
    n = pairs[0][0].n
    gens = sorted(generators or _default_generators(n), key=_gen_key)
    sources = tuple(a for a, _ in pairs)
    targets = tuple(b for _, b in pairs)

    def score(state):
        return sum(abs(len(c) - len(t)) + (0 if c == t else 1) for c, t in zip(state, targets))

    start = sources
    if start == targets:
        return MCWord(n)
    heap = [(score(start), 0, (), (), start)]
    seen = {start: 0}
    expanded = 0
    while heap and expanded < max_nodes:
        _, ln, _, word, state = heapq.heappop(heap)
        expanded += 1
        if ln >= max_len:
            continue
        for g in gens:
            if word and g == word[-1].inverse(n):
                continue
            nxt = tuple(apply_generator(g, c) for c in state)
            w2 = word + (g,)
            if nxt == targets:
                return MCWord(n, w2)
            if seen.get(nxt, max_len + 1) <= ln + 1:
                continue
            seen[nxt] = ln + 1
            heapq.heappush(heap, (score(nxt), ln + 1, tuple(map(_gen_key, w2)), w2, nxt))
    return None
