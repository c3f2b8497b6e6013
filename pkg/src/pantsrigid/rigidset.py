"""The chord system Gamma_n, the subgraphs Z_n, X_5 and X_n.

Sides of the n-gon are labelled 1..n; the chord alpha_{i,j} joining sides i
and j doubles to the round curve about the block p_i, ..., p_{j-1}.

Gamma_5 carries the names used for the core pentagon:

    alpha = round{1,2}   beta  = round{3,4}   delta = round{5,1}
    epsilon = round{2,3} gamma = round{4,5}

so that A={alpha,beta}, B={delta,beta}, C={delta,epsilon},
D={gamma,epsilon}, E={alpha,gamma} run around Z_5 in order.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .curves import CurveClass, InvalidBlock, geometric_intersection, round_curve
from .mapclass import (
    BlockSystem, MCWord, apply_word, block_of_round, block_transposition,
    round_components,
)
from .pantsgraph import (
    Frame, PantsError, PantsSubgraph, PantsVertex, make_vertex,
)


class WrongDeficiency(PantsError):
    pass


class WrongComponent(PantsError):
    pass


def chord_block(i: int, j: int, n: int) -> tuple[int, ...]:
    """Block {p_i, ..., p_{j-1}} of the chord alpha_{i,j} (labels mod n)."""
    i = (i - 1) % n + 1
    j = (j - 1) % n + 1
    if (j - i) % n in (0, 1, n - 1):
        raise InvalidBlock(f"sides {i} and {j} are adjacent or equal")
    return tuple((i - 1 + t) % n + 1 for t in range((j - i) % n))


def chord(i: int, j: int, n: int) -> CurveClass:
    return round_curve(chord_block(i, j, n), n)


@dataclass(frozen=True)
class GammaSystem:
    n: int
    chords: dict          # (i, j) with i < j -> CurveClass
    curves: tuple         # sorted, distinct
    chain: tuple          # chain[i-1] = alpha_{i,i+2}

    def __len__(self):
        return len(self.curves)

    def chain_curve(self, i: int) -> CurveClass:
        return self.chain[(i - 1) % self.n]

    def label(self, c: CurveClass) -> tuple[int, int]:
        for key, v in self.chords.items():
            if v == c:
                return key
        raise KeyError(c)


def gamma(n: int) -> GammaSystem:
    if n < 5:
        raise PantsError("Gamma_n needs n >= 5")
    chords = {}
    for i in range(1, n + 1):
        for j in range(i + 2, n + 1):
            if (i, j) == (1, n):
                continue
            chords[(i, j)] = chord(i, j, n)
    curves = tuple(sorted(set(chords.values())))
    chain = tuple(chord(i, i + 2, n) for i in range(1, n + 1))
    return GammaSystem(n, chords, curves, chain)


GREEK5 = {
    "alpha": (1, 2), "beta": (3, 4), "delta": (5, 1), "epsilon": (2, 3), "gamma": (4, 5),
}
PENTAGON5 = (("A", "alpha", "beta"), ("B", "delta", "beta"), ("C", "delta", "epsilon"),
             ("D", "gamma", "epsilon"), ("E", "alpha", "gamma"))


def greek5() -> dict[str, CurveClass]:
    return {k: round_curve(b, 5) for k, b in GREEK5.items()}


def core_pentagon() -> list[PantsVertex]:
    """A, B, C, D, E in cyclic order."""
    g = greek5()
    return [make_vertex((g[a], g[b]), 5) for _, a, b in PENTAGON5]


def _disjoint_cliques(curves, size):
    curves = list(curves)
    disjoint = {a: {b for b in curves if b != a and geometric_intersection(a, b) == 0} for a in curves}
    out = []

    def grow(chosen, cands):
        if len(chosen) == size:
            out.append(tuple(chosen))
            return
        for t, c in enumerate(cands):
            grow(chosen + [c], [d for d in cands[t + 1:] if d in disjoint[c]])
    grow([], curves)
    return out


def build_Z(n: int) -> PantsSubgraph:
    gs = gamma(n)
    g = PantsSubgraph(n)
    for vs in sorted(make_vertex(c, n) for c in _disjoint_cliques(gs.curves, n - 3)):
        g.add_vertex(vs, Frame(MCWord(n), vs))
    g.complete_edges()
    if n == 5:
        names = {v: name for v, (name, _, _) in zip(core_pentagon(), PENTAGON5)}
        for i, v in enumerate(g.vertices):
            g.vertex_labels[i] = {"name": names[v]}
    return g


# ---------------------------------------------------------------------------
# X_5

def twist_word(name: str, sign: int) -> MCWord:
    """T_c^{sign/2} for a Gamma_5 curve, supported on its two-puncture side."""
    a, b = GREEK5[name]
    w = block_transposition((a,), (b,), 5)
    return w if sign > 0 else w.inverse()


def build_X5() -> PantsSubgraph:
    """Z_5 together with its ten half-twist images; edges are pentagon edges."""
    core = core_pentagon()
    pentagons = [("core", MCWord(5), core)]
    for name in sorted(GREEK5):
        for sign in (1, -1):
            w = twist_word(name, sign)
            img = [make_vertex((apply_word(w, c) for c in v), 5) for v in core]
            pentagons.append((f"{name}{'+' if sign > 0 else '-'}", w, img))
    return _assemble(pentagons, 5)


def _assemble(pentagons, n, extra_label=None):
    g = PantsSubgraph(n)
    members: dict[PantsVertex, set] = {}
    frames = {}
    edges: dict[tuple, set] = {}
    for tag, w, cyc in pentagons:
        for t, v in enumerate(cyc):
            members.setdefault(v, set()).add(tag)
            frames.setdefault(v, (tag, w, t))
            a, b = sorted((v, cyc[(t + 1) % 5]))
            edges.setdefault((a, b), set()).add(tag)
    core = pentagons[0][2]
    for v in sorted(members):
        tag, w, t = frames[v]
        base = core[t]
        g.add_vertex(v, Frame(w, base))
        g.vertex_labels[g.index(v)] = {"pentagons": sorted(members[v])}
    for (a, b), tags in sorted(edges.items(), key=lambda e: (e[0][0].sort_key, e[0][1].sort_key)):
        i, j = g.index(a), g.index(b)
        g.add_edge(i, j)
        g.edge_labels[(min(i, j), max(i, j))] = {"pentagons": sorted(tags)}
    return g


def x5_pentagons(g: PantsSubgraph) -> dict[str, list[int]]:
    """Pentagon tag -> vertex ids in cyclic order, read off the labels."""
    core_ids = [g.index(v) for v in core_pentagon()]
    out = {}
    tags = sorted({t for lab in g.vertex_labels.values() for t in lab["pentagons"]})
    for tag in tags:
        ids = {i for i, lab in g.vertex_labels.items() if tag in lab["pentagons"]}
        out[tag] = _cycle_order(g, ids)
    out["core"] = core_ids
    return out


def _cycle_order(g, ids):
    ids = set(ids)
    adj = g.adjacency()
    start = min(ids)
    order = [start]
    prev = None
    while len(order) < len(ids):
        cur = order[-1]
        nxt = sorted(j for j in adj[cur] & ids if j != prev and j not in order)
        if not nxt:
            break
        prev = cur
        order.append(nxt[0])
    return order


# ---------------------------------------------------------------------------
# subsurfaces bounded by chords

@dataclass(frozen=True)
class SubsurfaceMap:
    """h: S_{0,m} -> (S_{0,n} - W)_0 collapsing each boundary block to a puncture."""
    n: int
    W: tuple
    blocks: BlockSystem

    @property
    def m(self) -> int:
        return self.blocks.m

    def curve(self, c: CurveClass) -> CurveClass:
        return self.blocks.inflate(c)

    def vertex(self, u: PantsVertex) -> PantsVertex:
        return make_vertex(tuple(self.curve(c) for c in u) + self.W, self.n)

    def to_json(self):
        return {"W": [c.to_json()["seq"] for c in self.W],
                "blocks": [list(b) for b in self.blocks.blocks]}


def subsurface_map(W, n: int, m: int | None = None) -> SubsurfaceMap:
    """Block correspondence for a multicurve of chords with an m-object component.

    m defaults to 5 (deficiency-2 multicurves).
    """
    m = 5 if m is None else m
    W = tuple(sorted(W))
    if len(W) != n - m:
        raise WrongDeficiency(f"need {n - m} curves, got {len(W)}")
    for a, b in combinations(W, 2):
        if geometric_intersection(a, b):
            raise WrongDeficiency("curves of W intersect")
    blocks = [block_of_round(c) for c in W]
    comps = [c for c in round_components(blocks, n) if c.m > 3]
    if len(comps) != 1 or comps[0].m != m:
        raise WrongComponent(f"complement has no unique {m}-object component")
    return SubsurfaceMap(n, W, comps[0])


def deficiency2_multicurves(n: int) -> list[tuple]:
    """Multicurves W in Gamma_n whose complement has a 5-object component."""
    gs = gamma(n)
    out = []
    for W in _disjoint_cliques(gs.curves, n - 5):
        try:
            subsurface_map(W, n)
        except WrongComponent:
            continue
        out.append(tuple(sorted(W)))
    return sorted(out, key=lambda W: [c.sort_key for c in W])


def build_X(n: int, drop: int | None = None) -> PantsSubgraph:
    """Z_n together with every piece h^W(X_5).

    Vertices and edges are merged by canonical curve sets; each vertex and
    edge is labelled with the pieces it comes from.  `drop` omits one piece
    (fault injection).
    """
    if n == 5:
        return build_X5()
    x5 = build_X5()
    z = build_Z(n)
    g = PantsSubgraph(n)
    prov: dict[PantsVertex, set] = {}
    eprov: dict[tuple, set] = {}
    for i, v in enumerate(z.vertices):
        g.add_vertex(v, z.frames.get(i))
        prov.setdefault(v, set()).add("Z")
    for i, j in z.edges:
        eprov.setdefault(_ekey(z.vertices[i], z.vertices[j]), set()).add("Z")
    for t, W in enumerate(deficiency2_multicurves(n)):
        if drop is not None and t == drop:
            continue
        h = subsurface_map(W, n)
        wtag = ",".join(_block_text(c) for c in W)
        image = [h.vertex(u) for u in x5.vertices]
        for u, v in zip(x5.vertices, image):
            prov.setdefault(v, set()).add(wtag)
        for i, j in x5.edges:
            eprov.setdefault(_ekey(image[i], image[j]), set()).add(wtag)
    out = PantsSubgraph(n)
    for v in sorted(prov):
        out.add_vertex(v, g.frames.get(g.index(v)) if v in g else None)
        out.vertex_labels[out.index(v)] = {"pieces": sorted(prov[v])}
    for (a, b), tags in sorted(eprov.items(), key=lambda e: (e[0][0].sort_key, e[0][1].sort_key)):
        i, j = out.index(a), out.index(b)
        out.add_edge(i, j, check=False)
        out.edge_labels[(min(i, j), max(i, j))] = {"pieces": sorted(tags)}
    return out


def _ekey(a, b):
    return (a, b) if a.sort_key <= b.sort_key else (b, a)


def _block_text(c: CurveClass) -> str:
    return "".join(str(p) for p in block_of_round(c))
