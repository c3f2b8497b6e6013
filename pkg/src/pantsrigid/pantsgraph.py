"""Pants decompositions, elementary moves and finite windows of the pants graph."""
from __future__ import annotations

import heapq
import json
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .curves import (
    CurveClass, NotEssential, canonicalize, geometric_intersection,
    is_essential, reduce, round_curve,
)
from .mapclass import (
    BlockSystem, MCWord, apply_generator, apply_word,
    block_of_round, block_transposition, component_with, is_round,
    recoordinate, sigma,
)

MODEL = "collinear-v1"


class PantsError(ValueError):
    pass


class WrongCount(PantsError):
    pass


class NotDisjoint(PantsError):
    pass


class Duplicate(PantsError):
    pass


class NotAnEdge(PantsError):
    pass


class NotACycle(PantsError):
    pass


class ResourceLimit(PantsError):
    def __init__(self, message, partial: int):
        super().__init__(f"{message} (partial count {partial})")
        self.partial = partial


# ---------------------------------------------------------------------------
# vertices

@dataclass(frozen=True)
class PantsVertex:
    n: int
    curves: tuple[CurveClass, ...]

    @property
    def sort_key(self):
        return tuple(c.sort_key for c in self.curves)

    def __lt__(self, other):
        return self.sort_key < other.sort_key

    def __contains__(self, c):
        return c in self.curves

    def __iter__(self):
        return iter(self.curves)

    def __len__(self):
        return len(self.curves)

    def without(self, c: CurveClass) -> tuple[CurveClass, ...]:
        return tuple(x for x in self.curves if x != c)

    def replace(self, old: CurveClass, new: CurveClass) -> "PantsVertex":
        return make_vertex(self.without(old) + (new,), self.n)

    def to_json(self) -> list:
        return [c.to_json()["seq"] for c in self.curves]

    def __repr__(self):
        return "{" + ", ".join(map(repr, self.curves)) + "}"


def make_vertex(curves: Iterable[CurveClass], n: int) -> PantsVertex:
    """Sort without validation; for curves already known to form a vertex."""
    return PantsVertex(n, tuple(sorted(curves)))


def _as_curve(c, n):
    if isinstance(c, CurveClass):
        return c
    if isinstance(c, dict):
        return CurveClass.from_json(c)
    seq = [x if isinstance(x, int) else x[0] * x[1] for x in c]
    red = reduce(seq)
    if not is_essential(red, n):
        raise NotEssential(f"{seq} is not essential")
    return canonicalize(red, n)


def validate_vertex(curves, n: int | None = None) -> PantsVertex:
    """Canonical pants vertex from curve data, or raise."""
    curves = list(curves)
    if n is None:
        if not curves or not isinstance(curves[0], CurveClass):
            raise PantsError("n is required for raw curve data")
        n = curves[0].n
    cs = [_as_curve(c, n) for c in curves]
    if any(c.n != n for c in cs):
        raise PantsError("curves live on different spheres")
    if len(set(cs)) != len(cs):
        raise Duplicate("repeated curve")
    if len(cs) != n - 3:
        raise WrongCount(f"need {n - 3} curves, got {len(cs)}")
    for i in range(len(cs)):
        for j in range(i + 1, len(cs)):
            if geometric_intersection(cs[i], cs[j]):
                raise NotDisjoint(f"{cs[i]} meets {cs[j]}")
    return make_vertex(cs, n)


def is_elementary_move(p: PantsVertex, q: PantsVertex) -> bool:
    if p.n != q.n or p == q:
        return False
    a = set(p.curves) - set(q.curves)
    b = set(q.curves) - set(p.curves)
    if len(a) != 1 or len(b) != 1:
        return False
    return geometric_intersection(a.pop(), b.pop()) == 2


FareyId = tuple  # sorted tuple of n-4 curves


def farey_id(p: PantsVertex, q: PantsVertex) -> FareyId:
    if not is_elementary_move(p, q):
        raise NotAnEdge(f"{p} and {q} do not differ by an elementary move")
    return tuple(sorted(set(p.curves) & set(q.curves)))


def moved_curves(p: PantsVertex, q: PantsVertex) -> tuple[CurveClass, CurveClass]:
    a = set(p.curves) - set(q.curves)
    b = set(q.curves) - set(p.curves)
    if len(a) != 1 or len(b) != 1:
        raise NotAnEdge("vertices do not differ in exactly one curve")
    return a.pop(), b.pop()


# ---------------------------------------------------------------------------
# frames: P = g(R) with every curve of R round

@dataclass(frozen=True)
class Frame:
    word: MCWord
    base: PantsVertex

    def image(self) -> PantsVertex:
        return make_vertex((apply_word(self.word, c) for c in self.base), self.base.n)

    def to_json(self):
        return {"word": self.word.to_json()["word"], "base": self.base.to_json()}


def round_frame(p: PantsVertex) -> Frame | None:
    return Frame(MCWord(p.n), p) if all(map(is_round, p.curves)) else None


def _frame_score(state):
    return sum(0 if is_round(c) else len(c) for c in state)


def find_frame(p: PantsVertex, max_nodes: int = 20000) -> Frame:
    """Best-first search for a word carrying p to an all-round vertex."""
    fr = round_frame(p)
    if fr:
        return fr
    n = p.n
    gens = [sigma(i, s) for i in range(1, n - 1) for s in (1, -1)]
    gens += [recoordinate(k) for k in range(1, n)]
    start = tuple(p.curves)
    heap = [(_frame_score(start), 0, (), start)]
    seen = {start}
    count = 0
    while heap and count < max_nodes:
        _, ln, word, state = heapq.heappop(heap)
        count += 1
        for gi, g in enumerate(gens):
            nxt = tuple(apply_generator(g, c) for c in state)
            if nxt in seen:
                continue
            seen.add(nxt)
            w2 = word + (gi,)
            if all(map(is_round, nxt)):
                h = MCWord(n, tuple(gens[i] for i in w2))
                return Frame(h.inverse(), make_vertex(nxt, n))
            heapq.heappush(heap, (_frame_score(nxt), ln + 1, w2, nxt))
    raise ResourceLimit("no frame found", count)


def _slot_setup(frame: Frame, alpha: CurveClass):
    """Locate alpha in the frame and the 4-object component around it."""
    g, base = frame.word, frame.base
    alpha0 = None
    for c in base:
        if apply_word(g, c) == alpha:
            alpha0 = c
            break
    if alpha0 is None:
        raise PantsError(f"{alpha} is not a curve of the framed vertex")
    rest = [block_of_round(c) for c in base if c != alpha0]
    bs = component_with(rest, base.n, 4)
    a = bs.collapse(alpha0)
    j = {(1, 2): 1, (2, 3): 2}.get(a.seq)
    if j is None:
        raise PantsError(f"collapsed curve {a} is not a round chord")
    return alpha0, bs, j


def _dual_chord(j: int) -> CurveClass:
    return round_curve((2, 3) if j == 1 else (1, 2), 4)


def twist_in_slot(frame: Frame, alpha: CurveClass, x: CurveClass, k: int) -> CurveClass:
    """T_alpha^{k/2}(x), supported in the 4-holed component of P - alpha."""
    alpha0, bs, j = _slot_setup(frame, alpha)
    x0 = apply_word(frame.word.inverse(), x)
    y = bs.collapse(x0)
    y = apply_word([sigma(j, 1 if k > 0 else -1)] * abs(k), y)
    return apply_word(frame.word, bs.inflate(y))


def _lift_word(bs: BlockSystem, j: int, k: int, n: int) -> MCWord:
    """Word M in S_{0,n} with M(inflate'(y)) = inflate(sigma_j^k(y)).

    inflate' uses the block sizes reached after |k| swaps: bundles of
    different sizes trade places, so consecutive swaps alternate between
    the two size patterns.
    """
    b1, b2 = bs.blocks[j - 1], bs.blocks[j]
    union = b1 + b2
    here = (union[:len(b1)], union[len(b1):])
    swapped = (union[:len(b2)], union[len(b2):])
    w = MCWord(n)
    for t in range(abs(k), 0, -1):
        if k > 0:
            conf = swapped if t % 2 else here
            w = w + block_transposition(conf[0], conf[1], n)
        else:
            conf = here if t % 2 else swapped
            w = w + block_transposition(conf[0], conf[1], n).inverse()
    return w


def slot_neighbors(p: PantsVertex, alpha: CurveClass, K: int, frame: Frame | None = None):
    """[(k, vertex, frame)] for T_alpha^{k/2}(beta0), k = -K..K."""
    frame = frame or find_frame(p)
    alpha0, bs, j = _slot_setup(frame, alpha)
    rest0 = [c for c in frame.base if c != alpha0]
    beta = _dual_chord(j)
    out = []
    for k in range(-K, K + 1):
        y = apply_word([sigma(j, 1 if k > 0 else -1)] * abs(k), beta)
        gamma0 = bs.inflate(y)
        gamma = apply_word(frame.word, gamma0)
        v = p.replace(alpha, gamma)
        M = _lift_word(bs, j, k, p.n)
        base = make_vertex((apply_word(M.inverse(), c) for c in rest0 + [gamma0]), p.n)
        if not all(map(is_round, base)):
            raise PantsError("lifted twist did not return to round position")
        out.append((k, v, Frame(M + frame.word, base)))
    return out


def neighbors_bounded(p: PantsVertex, alpha: CurveClass, K: int, frame: Frame | None = None) -> list[PantsVertex]:
    if K < 1:
        raise PantsError("twist bound must be at least 1")
    return [v for _, v, _ in slot_neighbors(p, alpha, K, frame)]


def triangle_completions(p: PantsVertex, q: PantsVertex, frame: Frame | None = None) -> tuple[PantsVertex, PantsVertex]:
    """The two vertices forming Farey triangles with the edge (p, q).

    Returned as (T_a^{1/2}, T_a^{-1/2}) applied to the moved curve of q,
    where a is the moved curve of p.
    """
    a, b = moved_curves(p, q)
    if geometric_intersection(a, b) != 2:
        raise NotAnEdge(f"{p} and {q} do not differ by an elementary move")
    frame = frame or find_frame(p)
    out = tuple(p.replace(a, twist_in_slot(frame, a, b, s)) for s in (1, -1))
    for v in out:
        if not (is_elementary_move(v, p) and is_elementary_move(v, q)):
            raise PantsError("triangle completion failed to close up")
    return out


# ---------------------------------------------------------------------------
# subgraphs

@dataclass
class PantsSubgraph:
    n: int
    vertices: list[PantsVertex] = field(default_factory=list)
    edges: set = field(default_factory=set)
    vertex_labels: dict = field(default_factory=dict)
    edge_labels: dict = field(default_factory=dict)
    frames: dict = field(default_factory=dict)

    def __post_init__(self):
        self._index = {v: i for i, v in enumerate(self.vertices)}

    # construction
    def add_vertex(self, v: PantsVertex, frame: Frame | None = None) -> int:
        i = self._index.get(v)
        if i is None:
            i = len(self.vertices)
            self.vertices.append(v)
            self._index[v] = i
        if frame is not None and i not in self.frames:
            self.frames[i] = frame
        return i

    def add_edge(self, i: int, j: int, check: bool = True):
        if i == j:
            raise PantsError("self-loop")
        if check and not is_elementary_move(self.vertices[i], self.vertices[j]):
            raise NotAnEdge(f"{self.vertices[i]} -- {self.vertices[j]}")
        self.edges.add((min(i, j), max(i, j)))

    def index(self, v: PantsVertex) -> int:
        return self._index[v]

    def __contains__(self, v):
        return v in self._index

    def frame(self, i: int) -> Frame:
        if i not in self.frames:
            self.frames[i] = find_frame(self.vertices[i])
        return self.frames[i]

    # queries
    @property
    def order(self) -> int:
        return len(self.vertices)

    @property
    def size(self) -> int:
        return len(self.edges)

    def adjacency(self) -> dict[int, set[int]]:
        adj = {i: set() for i in range(len(self.vertices))}
        for i, j in self.edges:
            adj[i].add(j)
            adj[j].add(i)
        return adj

    def has_edge(self, i, j) -> bool:
        return (min(i, j), max(i, j)) in self.edges

    def degree(self, i) -> int:
        return sum(1 for e in self.edges if i in e)

    def is_connected(self) -> bool:
        if not self.vertices:
            return True
        adj = self.adjacency()
        seen = {0}
        todo = [0]
        while todo:
            for j in adj[todo.pop()]:
                if j not in seen:
                    seen.add(j)
                    todo.append(j)
        return len(seen) == len(self.vertices)

    def complete_edges(self):
        """Add every elementary move between present vertices."""
        for i, j in elementary_pairs(self.vertices):
            self.edges.add((i, j))

    def induced(self, keep: Iterable[int]) -> "PantsSubgraph":
        keep = sorted(set(keep))
        g = PantsSubgraph(self.n)
        remap = {}
        for i in keep:
            remap[i] = g.add_vertex(self.vertices[i], self.frames.get(i))
            if i in self.vertex_labels:
                g.vertex_labels[remap[i]] = self.vertex_labels[i]
        for i, j in self.edges:
            if i in remap and j in remap:
                g.add_edge(remap[i], remap[j], check=False)
                if (i, j) in self.edge_labels:
                    g.edge_labels[(min(remap[i], remap[j]), max(remap[i], remap[j]))] = self.edge_labels[(i, j)]
        return g

    def canonical(self) -> "PantsSubgraph":
        """Same graph with vertex ids in canonical vertex order."""
        order = sorted(range(len(self.vertices)), key=lambda i: self.vertices[i].sort_key)
        return self.induced(order) if order == sorted(order) else self._relabel(order)

    def _relabel(self, order):
        g = PantsSubgraph(self.n)
        remap = {}
        for i in order:
            remap[i] = g.add_vertex(self.vertices[i], self.frames.get(i))
            if i in self.vertex_labels:
                g.vertex_labels[remap[i]] = self.vertex_labels[i]
        for i, j in self.edges:
            a, b = sorted((remap[i], remap[j]))
            g.edges.add((a, b))
            if (i, j) in self.edge_labels:
                g.edge_labels[(a, b)] = self.edge_labels[(i, j)]
        return g

    # serialization
    def to_json(self) -> dict:
        labels = {}
        if self.vertex_labels:
            labels["vertex"] = {str(i): self.vertex_labels[i] for i in sorted(self.vertex_labels)}
        if self.edge_labels:
            labels["edge"] = {f"{i}-{j}": self.edge_labels[(i, j)] for i, j in sorted(self.edge_labels)}
        return {
            "n": self.n,
            "model": MODEL,
            "vertices": [{"id": i, "curves": v.to_json()} for i, v in enumerate(self.vertices)],
            "edges": [list(e) for e in sorted(self.edges)],
            "labels": labels,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, separators=(",", ":")) + "\n"

    @classmethod
    def from_json(cls, data, validate: bool = True) -> "PantsSubgraph":
        if isinstance(data, str):
            data = json.loads(data)
        if data.get("model") != MODEL:
            raise PantsError(f"unknown model {data.get('model')!r}")
        n = int(data["n"])
        g = cls(n)
        ids = [v["id"] for v in data["vertices"]]
        if ids != list(range(len(ids))):
            raise PantsError("vertex ids must be contiguous from 0")
        for v in data["vertices"]:
            if validate:
                pv = validate_vertex(v["curves"], n)
            else:
                pv = make_vertex((_as_curve(c, n) for c in v["curves"]), n)
            if pv in g:
                raise Duplicate(f"vertex {v['id']} repeats an earlier vertex")
            g.add_vertex(pv)
        for i, j in data["edges"]:
            if not (0 <= i < g.order and 0 <= j < g.order):
                raise PantsError(f"edge {i}-{j} out of range")
            g.add_edge(i, j, check=validate)
        labels = data.get("labels", {})
        for k, v in labels.get("vertex", {}).items():
            g.vertex_labels[int(k)] = v
        for k, v in labels.get("edge", {}).items():
            i, j = map(int, k.split("-"))
            g.edge_labels[(i, j)] = v
        return g

    def to_dot(self) -> str:
        lines = ["graph pants {"]
        for i, v in enumerate(self.vertices):
            attrs = [f'curves="{_curve_text(v)}"']
            if i in self.vertex_labels:
                attrs.append(f'label="{_dot_escape(self.vertex_labels[i])}"')
            lines.append(f"  v{i} [{', '.join(attrs)}];")
        for i, j in sorted(self.edges):
            attr = ""
            if (i, j) in self.edge_labels:
                attr = f' [label="{_dot_escape(self.edge_labels[(i, j)])}"]'
            lines.append(f"  v{i} -- v{j}{attr};")
        lines.append("}")
        return "\n".join(lines) + "\n"


def _curve_text(v: PantsVertex) -> str:
    return " | ".join(" ".join(f"{abs(x)}{'+' if x > 0 else '-'}" for x in c.seq) for c in v)


def _dot_escape(label) -> str:
    text = label if isinstance(label, str) else json.dumps(label, sort_keys=True)
    return text.replace("\\", "\\\\").replace('"', '\\"')


def elementary_pairs(vertices: Sequence[PantsVertex]) -> list[tuple[int, int]]:
    """All index pairs (i < j) differing by an elementary move."""
    groups = defaultdict(list)
    for i, v in enumerate(vertices):
        for c in v.curves:
            groups[v.without(c)].append((i, c))
    out = set()
    for members in groups.values():
        for x in range(len(members)):
            i, a = members[x]
            for y in range(x + 1, len(members)):
                j, b = members[y]
                if geometric_intersection(a, b) == 2:
                    out.add((min(i, j), max(i, j)))
    return sorted(out)


def edge_farey_label(g: PantsSubgraph, i: int, j: int) -> list:
    return [c.to_json()["seq"] for c in farey_id(g.vertices[i], g.vertices[j])]


# ---------------------------------------------------------------------------
# bounded generation

def ball(p0: PantsVertex | Sequence[PantsVertex], radius: int, K: int,
         max_vertices: int = 200000, frames: dict | None = None) -> PantsSubgraph:
    """Vertices reachable in `radius` bounded slot moves, with all their edges.

    Each layer is expanded in canonical vertex order; ids follow insertion.
    Accepts one seed or a list of seeds (all at distance 0).
    """
    if radius < 0:
        raise PantsError("radius must be non-negative")
    seeds = [p0] if isinstance(p0, PantsVertex) else sorted(set(p0))
    frames = frames or {}
    g = PantsSubgraph(seeds[0].n)
    for s in seeds:
        g.add_vertex(s, frames.get(s) or find_frame(s))
    layer = list(range(g.order))
    for _ in range(radius):
        fresh = {}
        for i in sorted(layer, key=lambda i: g.vertices[i].sort_key):
            v = g.vertices[i]
            fr = g.frame(i)
            for alpha in v.curves:
                for _, w, wf in slot_neighbors(v, alpha, K, fr):
                    if w not in g and w not in fresh:
                        fresh[w] = wf
        for w in sorted(fresh):
            if g.order >= max_vertices:
                raise ResourceLimit("ball exceeds vertex cap", g.order)
            g.add_vertex(w, fresh[w])
        layer = [g.index(w) for w in fresh]
    g.complete_edges()
    return g


# ---------------------------------------------------------------------------
# cycles, thick graphs, stars

def is_alternating_cycle(cycle: Sequence[PantsVertex]) -> bool:
    m = len(cycle)
    if m < 3 or len(set(cycle)) != m:
        raise NotACycle("need at least three distinct vertices")
    ids = []
    for t in range(m):
        a, b = cycle[t], cycle[(t + 1) % m]
        if not is_elementary_move(a, b):
            raise NotACycle(f"{a} and {b} are not adjacent")
        ids.append(farey_id(a, b))
    return all(ids[t] != ids[(t + 1) % m] for t in range(m))


def thick_graph(g: PantsSubgraph) -> PantsSubgraph:
    out = PantsSubgraph(g.n)
    for i, v in enumerate(g.vertices):
        out.add_vertex(v, g.frames.get(i))
    for i, j in sorted(g.edges):
        out.add_edge(i, j, check=False)
    for i, j in sorted(g.edges):
        p, q = g.vertices[i], g.vertices[j]
        for t in triangle_completions(p, q, g.frame(i)):
            k = out.add_vertex(t)
            out.add_edge(i, k, check=False)
            out.add_edge(j, k, check=False)
    return out


def thick_edge(p: PantsVertex, q: PantsVertex, frame: Frame | None = None) -> PantsSubgraph:
    g = PantsSubgraph(p.n)
    i = g.add_vertex(p, frame)
    j = g.add_vertex(q)
    g.add_edge(i, j)
    return thick_graph(g)


def star(v: int, g: PantsSubgraph) -> PantsSubgraph:
    """Closed star of vertex id v inside g (ids of g are not preserved)."""
    nbrs = sorted(g.adjacency()[v])
    s = PantsSubgraph(g.n)
    c = s.add_vertex(g.vertices[v], g.frames.get(v))
    for j in nbrs:
        s.add_edge(c, s.add_vertex(g.vertices[j], g.frames.get(j)), check=False)
    return s


def thick_star(v: int, g: PantsSubgraph) -> PantsSubgraph:
    return thick_graph(star(v, g))


def triangles(g: PantsSubgraph) -> list[tuple[int, int, int]]:
    adj = g.adjacency()
    out = []
    for i, j in sorted(g.edges):
        for k in sorted(adj[i] & adj[j]):
            if k > j:
                out.append((i, j, k))
    return out
