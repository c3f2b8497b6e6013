"""Structural checkers, small-graph isomorphism, and the rigidity experiment."""
from __future__ import annotations

import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations
from math import gcd
from typing import Callable, Iterable, Sequence

from .curves import CurveClass, enclosed_punctures, geometric_intersection
from .geometry import enclosed_by_polygon, extract, is_simple, realize
from .mapclass import (
    REFLECT, MCWord, apply_generator, apply_word, word_search,
)
from .pantsgraph import (
    Frame, PantsSubgraph, PantsVertex, ResourceLimit, ball, farey_id,
    find_frame, is_alternating_cycle, is_elementary_move, make_vertex,
    slot_neighbors, thick_graph, triangle_completions, twist_in_slot,
)
from .rigidset import (
    build_X, build_X5, build_Z, core_pentagon, gamma, greek5,
    subsurface_map, twist_word,
)

log = logging.getLogger(__name__)

VERIFIED, VIOLATED, SKIPPED = "verified", "violated", "skipped"


@dataclass
class CheckReport:
    check: str
    status: str
    details: dict = field(default_factory=dict)
    witness: object = None
    runtime: float = 0.0

    def to_json(self) -> dict:
        # runtime stays out of the serialized report so reruns are byte-identical
        out = {"check": self.check, "status": self.status, "details": self.details}
        if self.witness is not None:
            out["witness"] = self.witness
        return out


def _timed(fn):
    def run(*args, **kwargs):
        t0 = time.perf_counter()
        rep = fn(*args, **kwargs)
        rep.runtime = time.perf_counter() - t0
        log.info("%s: %s in %.2fs", rep.check, rep.status, rep.runtime)
        return rep
    run.__name__ = fn.__name__
    run.__doc__ = fn.__doc__
    return run


def _seq(c: CurveClass):
    return c.to_json()["seq"]


def _vjson(v: PantsVertex):
    return v.to_json()


# ---------------------------------------------------------------------------
# abstract graphs

def _adj_of(g) -> dict[int, set[int]]:
    if isinstance(g, PantsSubgraph):
        return g.adjacency()
    if isinstance(g, dict):
        return {k: set(v) for k, v in g.items()}
    nv, edges = g
    adj = {i: set() for i in range(nv)}
    for i, j in edges:
        adj[i].add(j)
        adj[j].add(i)
    return adj


def _search_order(adj):
    order = []
    seen = set()
    for root in sorted(adj, key=lambda v: (-len(adj[v]), v)):
        if root in seen:
            continue
        seen.add(root)
        queue = [root]
        while queue:
            v = queue.pop(0)
            order.append(v)
            for w in sorted(adj[v], key=lambda w: (-len(adj[w]), w)):
                if w not in seen:
                    seen.add(w)
                    queue.append(w)
    return order


def _isomorphisms(a, b, fixed=None, colors_a=None, colors_b=None, limit=None):
    if len(a) != len(b) or sum(map(len, a.values())) != sum(map(len, b.values())):
        return
    if len(a) > 200:
        raise ResourceLimit("graph too large for isomorphism search", len(a))
    fixed = dict(fixed or {})
    order = [v for v in _search_order(a) if v not in fixed]
    ca = colors_a or {}
    cb = colors_b or {}
    mapping = dict(fixed)
    used = set(fixed.values())
    for u, x in fixed.items():
        if len(a[u]) != len(b[x]) or ca.get(u) != cb.get(x):
            return
    for u, x in fixed.items():
        for w in a[u]:
            if w in fixed and fixed[w] not in b[x]:
                return
    found = 0

    def rec(t):
        nonlocal found
        if t == len(order):
            found += 1
            yield dict(mapping)
            return
        u = order[t]
        mapped_nbrs = [mapping[w] for w in a[u] if w in mapping]
        if mapped_nbrs:
            cands = set(b[mapped_nbrs[0]])
            for x in mapped_nbrs[1:]:
                cands &= b[x]
        else:
            cands = set(b)
        for x in sorted(cands):
            if x in used or len(b[x]) != len(a[u]) or cb.get(x) != ca.get(u):
                continue
            # mapped non-neighbours must stay non-neighbours
            if sum(1 for w in b[x] if w in used) != len(mapped_nbrs):
                continue
            mapping[u] = x
            used.add(x)
            yield from rec(t + 1)
            del mapping[u]
            used.discard(x)
            if limit is not None and found >= limit:
                return

    yield from rec(0)


def graph_iso(g, h, colors_g=None, colors_h=None) -> dict | None:
    """An isomorphism g -> h as a vertex dict, or None."""
    for m in _isomorphisms(_adj_of(g), _adj_of(h), None, colors_g, colors_h, limit=1):
        return m
    return None


def graph_automorphisms(g, fixed: Iterable[int] = ()) -> list[dict]:
    """All automorphisms fixing `fixed` pointwise, in deterministic order."""
    adj = _adj_of(g)
    return list(_isomorphisms(adj, adj, {v: v for v in fixed}))


def cycle_graph(m: int):
    return (m, [(i, (i + 1) % m) for i in range(m)])


# ---------------------------------------------------------------------------
# flip-graph oracle (polygon triangulations; no curve machinery)

def _diagonals(n):
    return [(a, b) for a in range(n) for b in range(a + 2, n) if not (a == 0 and b == n - 1)]


def _cross(d, e):
    a, b = d
    c, x = e
    if len({a, b, c, x}) < 4:
        return False
    return (a < c < b) != (a < x < b)


def flip_graph(n: int) -> tuple[list[frozenset], list[tuple[int, int]]]:
    """Triangulations of a convex n-gon and their diagonal flips."""
    diags = _diagonals(n)
    tris = []

    def grow(chosen, start):
        if len(chosen) == n - 3:
            tris.append(frozenset(chosen))
            return
        for t in range(start, len(diags)):
            d = diags[t]
            if all(not _cross(d, e) for e in chosen):
                grow(chosen + [d], t + 1)
    grow([], 0)
    tris.sort(key=sorted)
    edges = [(i, j) for i, j in combinations(range(len(tris)), 2)
             if len(tris[i] & tris[j]) == n - 4]
    return tris, edges


def chord_diagonal(i: int, j: int, n: int) -> tuple[int, int]:
    # chord between sides i and j <-> diagonal between dual vertices i-1, j-1
    a, b = sorted(((i - 1) % n, (j - 1) % n))
    return (a, b)


# ---------------------------------------------------------------------------
# Farey windows and slopes

@dataclass(frozen=True)
class FareySlope:
    p: int
    q: int

    def __post_init__(self):
        if gcd(abs(self.p), abs(self.q)) != 1:
            raise ValueError(f"{self.p}/{self.q} is not reduced")

    @classmethod
    def make(cls, p, q):
        if q < 0 or (q == 0 and p < 0):
            p, q = -p, -q
        return cls(p, q)

    def det(self, other) -> int:
        return abs(self.p * other.q - self.q * other.p)

    def __str__(self):
        return f"{self.p}/{self.q}"


def farey_window(seed: PantsVertex, slot: CurveClass, radius: int, K: int,
                 frame: Frame | None = None) -> PantsSubgraph:
    """Vertices of the Farey graph P_Q, Q = seed - slot, within radius moves."""
    g = PantsSubgraph(seed.n)
    g.add_vertex(seed, frame or find_frame(seed))
    Q = set(seed.without(slot))
    depth = {0: 0}
    layer = [0]
    for r in range(radius):
        fresh = {}
        for i in layer:
            v = g.vertices[i]
            (moving,) = [c for c in v if c not in Q]
            for _, w, wf in slot_neighbors(v, moving, K, g.frame(i)):
                if w not in g and w not in fresh:
                    fresh[w] = wf
        layer = []
        for w in sorted(fresh):
            k = g.add_vertex(w, fresh[w])
            depth[k] = r + 1
            layer.append(k)
    g.complete_edges()
    g.vertex_labels = {i: {"depth": d} for i, d in depth.items()}
    return g


def slope_chart(win: PantsSubgraph, a: int, b: int) -> dict[int, FareySlope]:
    """Slopes from intersection numbers with the seeds a=1/0, b=0/1 and c=1/1.

    c is the T^{1/2} completion of the seed edge.
    """
    Q = set(win.vertices[a]) & set(win.vertices[b])
    alpha = _moving(win.vertices[a], Q)
    beta = _moving(win.vertices[b], Q)
    plus, _ = triangle_completions(win.vertices[a], win.vertices[b], win.frame(a))
    gam = _moving(plus, Q)
    out = {}
    for i, v in enumerate(win.vertices):
        x = _moving(v, Q)
        q = geometric_intersection(x, alpha) // 2
        p = geometric_intersection(x, beta) // 2
        d = geometric_intersection(x, gam) // 2
        if p and q and d == p + q:
            p = -p
        out[i] = FareySlope.make(p, q)
    return out


def _moving(v, Q):
    (x,) = [c for c in v if c not in Q]
    return x


@_timed
def check_farey_local(seed: PantsVertex | None = None, slot: CurveClass | None = None,
                      radius: int = 2, K: int = 3) -> CheckReport:
    """Local Farey structure on a window of one stratum, plus the slope formula."""
    if seed is None:
        seed = core_pentagon()[0]
        slot = greek5()["alpha"]
    win = farey_window(seed, slot, radius, K)
    adj = win.adjacency()
    depth = {i: lab["depth"] for i, lab in win.vertex_labels.items()}
    interior = [i for i in range(win.order) if depth[i] < radius]
    problems = []
    # every edge: its two completions are the only common neighbours in the window
    for i, j in sorted(win.edges):
        comps = set(triangle_completions(win.vertices[i], win.vertices[j], win.frame(i)))
        common = {win.vertices[k] for k in adj[i] & adj[j]}
        if len(comps) != 2 or not common <= comps:
            problems.append({"edge": [i, j], "triangles": len(common)})
    # neighbour windows of the seed layer are fans (paths)
    for i in interior:
        if depth[i] > max(0, radius - 2):
            continue
        nb = adj[i]
        sub = {x: adj[x] & nb for x in nb}
        ends = [x for x in nb if len(sub[x]) == 1]
        if any(len(s) > 2 for s in sub.values()) or len(ends) != 2 or not _connected(sub):
            problems.append({"fan": i})
    # slope chart and the formula i = 2|ps - qr|
    b = min(j for j in adj[0])
    chart = slope_chart(win, 0, b)
    pairs = 0
    for i, j in combinations(range(win.order), 2):
        x = _moving(win.vertices[i], set(win.vertices[0]) & set(win.vertices[b]))
        y = _moving(win.vertices[j], set(win.vertices[0]) & set(win.vertices[b]))
        lhs = geometric_intersection(x, y)
        rhs = 2 * chart[i].det(chart[j])
        pairs += 1
        if lhs != rhs:
            problems.append({"pair": [i, j], "i": lhs, "slopes": [str(chart[i]), str(chart[j])]})
        if (lhs == 2) != win.has_edge(i, j):
            problems.append({"adjacency": [i, j]})
    if len(set(chart.values())) != win.order:
        problems.append({"chart": "not injective"})
    details = {"vertices": win.order, "edges": win.size, "slope_pairs": pairs,
               "radius": radius, "twist_bound": K}
    if problems:
        return CheckReport("farey-local", VIOLATED, details, problems[:10])
    return CheckReport("farey-local", VERIFIED, details)


def _connected(adj):
    if not adj:
        return True
    start = min(adj)
    seen = {start}
    todo = [start]
    while todo:
        for w in adj[todo.pop()]:
            if w not in seen:
                seen.add(w)
                todo.append(w)
    return len(seen) == len(adj)


def twist_growth(seed: PantsVertex | None = None, slot: CurveClass | None = None,
                 radius: int = 1, K: int = 3, max_k: int = 6) -> list[dict]:
    """i(a, T_b^{k/2}(a)) over Farey edges (a, b) of a window, k = 1..max_k."""
    if seed is None:
        seed = core_pentagon()[0]
        slot = greek5()["alpha"]
    win = farey_window(seed, slot, radius, K)
    out = []
    for i, j in sorted(win.edges):
        p, q = win.vertices[i], win.vertices[j]
        a = _moving(p, set(p) & set(q))
        bq = _moving(q, set(p) & set(q))
        fr = find_frame(q) if j not in win.frames else win.frames[j]
        for k in range(1, max_k + 1):
            for s in (1, -1):
                img = twist_in_slot(fr, bq, a, s * k)
                out.append({"edge": [i, j], "k": s * k, "i": geometric_intersection(a, img)})
    return out


# ---------------------------------------------------------------------------
# realize / extract round trip

def roundtrip_failures(curves: Iterable[CurveClass]) -> list[dict]:
    """Curves whose polygon is not simple, encloses the wrong punctures or reads back differently."""
    bad = []
    for c in sorted(set(curves)):
        poly = realize(c)
        if not is_simple(poly):
            bad.append({"curve": _seq(c), "problem": "not simple"})
        elif enclosed_by_polygon(poly, c.n) != enclosed_punctures(c):
            bad.append({"curve": _seq(c), "problem": "enclosed punctures"})
        elif extract(poly, c.n) != c:
            bad.append({"curve": _seq(c), "problem": "extract"})
    return bad


@_timed
def check_roundtrip(curves: Iterable[CurveClass], name: str = "roundtrip") -> CheckReport:
    curves = set(curves)
    bad = roundtrip_failures(curves)
    details = {"curves": len(curves)}
    if bad:
        return CheckReport(name, VIOLATED, details, bad[:10])
    return CheckReport(name, VERIFIED, details)


def graph_curves(*graphs: PantsSubgraph) -> set[CurveClass]:
    return {c for g in graphs for v in g.vertices for c in v}


# ---------------------------------------------------------------------------
# Z_n

@_timed
def check_Z(n: int, z: PantsSubgraph | None = None) -> CheckReport:
    """Degrees, distinct FareyIds, fan paths, and the flip-graph oracle."""
    z = z if z is not None else build_Z(n)
    adj = z.adjacency()
    problems = []
    details = {"n": n, "vertices": z.order, "edges": z.size}
    if not z.is_connected():
        problems.append({"connected": False})
    for i in range(z.order):
        if len(adj[i]) != n - 3:
            problems.append({"vertex": i, "degree": len(adj[i])})
            continue
        ids = [farey_id(z.vertices[i], z.vertices[j]) for j in sorted(adj[i])]
        if len(set(ids)) != n - 3:
            problems.append({"vertex": i, "farey_ids": len(set(ids))})
    # flip-graph oracle: vertex-by-vertex through the chord dictionary
    gs = gamma(n)
    tris, fedges = flip_graph(n)
    as_diag = {}
    for i, v in enumerate(z.vertices):
        try:
            as_diag[i] = frozenset(chord_diagonal(*gs.label(c), n) for c in v)
        except KeyError:
            problems.append({"vertex": i, "not_chord_curves": True})
    tindex = {t: k for k, t in enumerate(tris)}
    if len(as_diag) < z.order or sorted(map(sorted, as_diag.values())) != sorted(map(sorted, tris)):
        problems.append({"oracle": "vertex sets differ"})
    else:
        mapped = {tuple(sorted((tindex[as_diag[i]], tindex[as_diag[j]]))) for i, j in z.edges}
        if mapped != set(fedges):
            problems.append({"oracle": "edge sets differ",
                             "missing": sorted(set(fedges) - mapped)[:5],
                             "extra": sorted(mapped - set(fedges))[:5]})
    iso = graph_iso(z, (len(tris), fedges))
    details["flip_graph"] = {"vertices": len(tris), "edges": len(fedges), "isomorphic": iso is not None}
    if iso is None:
        problems.append({"oracle": "not isomorphic"})
    # fan vertices v_i: consecutive ones within distance n-3
    fans = []
    for i in range(1, n + 1):
        cs = [c for (a, b), c in gs.chords.items() if a == i or b == i]
        fans.append(z.index(make_vertex(cs, n)) if len(cs) == n - 3 else None)
    dist = []
    for t in range(n):
        a, b = fans[t], fans[(t + 1) % n]
        d = _distance(adj, a, b)
        dist.append(d)
        if d is None or d > n - 3:
            problems.append({"fan_path": [t + 1, (t + 1) % n + 1], "distance": d})
    details["fan_distances"] = dist
    if problems:
        return CheckReport("z-structure", VIOLATED, details, problems[:10])
    return CheckReport("z-structure", VERIFIED, details)


def _distance(adj, a, b):
    seen = {a: 0}
    todo = [a]
    for v in todo:
        if v == b:
            return seen[v]
        for w in sorted(adj[v]):
            if w not in seen:
                seen[w] = seen[v] + 1
                todo.append(w)
    return None


# ---------------------------------------------------------------------------
# thick pentagon

def pentagon_obstruction(sign: int = 1) -> int:
    """i(T_beta^{s/2}(gamma), T_epsilon^{s/2}(beta)) for handedness s."""
    g = greek5()
    x = apply_word(twist_word("beta", sign), g["gamma"])
    y = apply_word(twist_word("epsilon", sign), g["beta"])
    return geometric_intersection(x, y)


def triangle_identity_pairs() -> list[dict]:
    """T_b^{1/2}(a) against T_a^{-1/2}(b) for every Gamma_5 pair with i = 2."""
    g = greek5()
    out = []
    for na, nb in sorted((x, y) for x in g for y in g if x != y):
        a, b = g[na], g[nb]
        if geometric_intersection(a, b) != 2:
            continue
        lhs = apply_word(twist_word(nb, 1), a)
        rhs = apply_word(twist_word(na, -1), b)
        out.append({"a": na, "b": nb, "equal": lhs == rhs})
    return out


@_timed
def check_thick_pentagon(word: MCWord | None = None) -> CheckReport:
    """Pentagons through the thick pentagon of w(Z_5) are exactly the ten twist images.

    Pentagons through one core edge are enumerated directly: the two
    neighbours of the shared edge must be apexes on the adjacent core
    edges, and the fifth vertex must be adjacent to both.
    """
    word = word or MCWord(5)
    core = [make_vertex((apply_word(word, c) for c in v), 5) for v in core_pentagon()]
    if not is_alternating_cycle(core):
        return CheckReport("thick-pentagon", SKIPPED, {"reason": "pentagon is not alternating"})
    problems = []
    zg = PantsSubgraph(5)
    for v in core:
        zg.add_vertex(v, Frame(word, make_vertex((apply_word(word.inverse(), c) for c in v), 5)))
    for t in range(5):
        zg.add_edge(t, (t + 1) % 5)
    thick = thick_graph(zg)
    apex = {}
    for t in range(5):
        a, b = core[t], core[(t + 1) % 5]
        comps = triangle_completions(a, b, zg.frame(t))
        if len(set(comps)) != 2:
            problems.append({"edge": t, "completions": len(set(comps))})
        apex[t] = comps
    # candidate pentagons sharing exactly the edge (t, t+1) with the core
    found = []
    rejected = []
    for t in range(5):
        a, b = core[t], core[(t + 1) % 5]
        before = apex[(t - 1) % 5]   # on edge (t-1, t), adjacent to a
        after = apex[(t + 1) % 5]    # on edge (t+1, t+2), adjacent to b
        for ya in before:
            for yb in after:
                fs = _common_neighbours(ya, yb, exclude=set(core) | set(thick.vertices))
                if not fs:
                    (xa,) = set(ya) - set(a)
                    (xb,) = set(yb) - set(b)
                    rejected.append({"edge": t, "i": geometric_intersection(xa, xb)})
                for f in fs:
                    cyc = [a, b, yb, f, ya]
                    if is_alternating_cycle(cyc):
                        found.append(cyc)
    expected = set()
    for name in sorted(greek5()):
        for s in (1, -1):
            w = word.inverse() + twist_word(name, s) + word
            expected.add(frozenset(make_vertex((apply_word(w, c) for c in v), 5) for v in core))
    got = {frozenset(c) for c in found}
    details = {"thick_vertices": thick.order, "thick_edges": thick.size,
               "pentagons_found": len(got), "obstructions": sorted({r["i"] for r in rejected})}
    if thick.order != 15 or thick.size != 25:
        problems.append({"thick": [thick.order, thick.size]})
    if got != expected:
        problems.append({"pentagons": "candidate set differs from the ten half-twist images"})
    if not rejected or any(r["i"] == 0 for r in rejected):
        problems.append({"obstruction": rejected[:4]})
    if problems:
        return CheckReport("thick-pentagon", VIOLATED, details, problems[:10])
    x5 = build_X5()
    union = PantsSubgraph(5)
    for cyc in [core] + found:
        ids = [union.add_vertex(v) for v in cyc]
        for s in range(5):
            union.add_edge(ids[s], ids[(s + 1) % 5], check=False)
    details["x5_isomorphic"] = graph_iso(union, x5) is not None
    details["pentagon_obstruction"] = {"+": pentagon_obstruction(1), "-": pentagon_obstruction(-1)}
    if not details["x5_isomorphic"]:
        return CheckReport("thick-pentagon", VIOLATED, details, {"union": [union.order, union.size]})
    return CheckReport("thick-pentagon", VERIFIED, details)


def _common_neighbours(ya: PantsVertex, yb: PantsVertex, exclude) -> list[PantsVertex]:
    # any common neighbour takes one curve from each (ya and yb share none)
    if set(ya) & set(yb):
        raise ValueError("apexes share a curve; direct enumeration does not apply")
    out = []
    for x in ya:
        for z in yb:
            if geometric_intersection(x, z) == 0:
                f = make_vertex((x, z), ya.n)
                if f not in exclude and is_elementary_move(f, ya) and is_elementary_move(f, yb):
                    out.append(f)
    return sorted(set(out))


# ---------------------------------------------------------------------------
# symmetry of X_5

def x5_pentagon_count(x5: PantsSubgraph) -> tuple[int, int]:
    """(5-cycles, alternating 5-cycles) in the graph."""
    adj = x5.adjacency()
    cycles = set()
    for s in range(x5.order):
        def walk(path):
            if len(path) == 5:
                if s in adj[path[-1]]:
                    cycles.add(_cycle_key(path))
                return
            for w in adj[path[-1]]:
                if w > s and w not in path:
                    walk(path + [w])
        walk([s])
    alt = 0
    for key in cycles:
        if is_alternating_cycle([x5.vertices[i] for i in key]):
            alt += 1
    return len(cycles), alt


def _cycle_key(path):
    m = len(path)
    rots = [tuple(path[i:] + path[:i]) for i in range(m)]
    rev = path[::-1]
    rots += [tuple(rev[i:] + rev[:i]) for i in range(m)]
    return min(rots)


@_timed
def check_sym_X5(x5: PantsSubgraph | None = None) -> CheckReport:
    x5 = x5 if x5 is not None else build_X5()
    core = [x5.index(v) for v in core_pentagon()]
    autos = graph_automorphisms(x5, core)
    details = {"order": len(autos)}
    problems = []
    if len(autos) != 2:
        problems.append({"order": len(autos)})
    e_map = {}
    for i, v in enumerate(x5.vertices):
        ev = make_vertex((apply_generator(REFLECT, c) for c in v), 5)
        e_map[i] = x5.index(ev) if ev in x5 else None
    nontrivial = [a for a in autos if any(a[i] != i for i in a)]
    details["reflection_preserves_X5"] = None not in e_map.values()
    if nontrivial:
        details["equals_reflection"] = nontrivial[0] == e_map
        if nontrivial[0] != e_map:
            problems.append({"reflection": "nontrivial automorphism differs from e"})
    # apex pairs: apexes sharing an image pentagon
    core_set = set(core)
    adj = x5.adjacency()
    apexes = sorted(i for i in range(x5.order) if i not in core_set and adj[i] & core_set)
    labels = x5.vertex_labels
    pairs = sorted({(a, b) for a, b in combinations(apexes, 2)
                    if set(labels[a]["pentagons"]) & set(labels[b]["pentagons"]) - {"core"}})
    details["apexes"] = len(apexes)
    details["apex_pairs"] = len(pairs)
    if len(apexes) != 10 or len(pairs) != 10 or any(
            sum(a in p for p in pairs) != 2 for a in apexes):
        problems.append({"apex_pairs": pairs})
    if nontrivial:
        g = nontrivial[0]
        same_edge = all(g[a] != a and (adj[a] & core_set) == (adj[g[a]] & core_set) for a in apexes)
        details["swaps_apexes_on_each_edge"] = same_edge
        if not same_edge:
            problems.append({"apex_swap": False})
    if problems:
        return CheckReport("x5-symmetry", VIOLATED, details, problems)
    return CheckReport("x5-symmetry", VERIFIED, details)


# ---------------------------------------------------------------------------
# restriction to chain-curve strata

@_timed
def check_restriction(n: int = 6, xn: PantsSubgraph | None = None,
                      lower: dict | None = None) -> CheckReport:
    """X_n cut down to P_{alpha_i} against X_{n-1} through h, vertex by vertex."""
    xn = xn if xn is not None else build_X(n)
    lower = lower or {}
    xm = lower.get(n - 1) or build_X(n - 1)
    gs = gamma(n)
    problems = []
    details = {"n": n, "vertices": xn.order, "edges": xn.size, "connected": xn.is_connected()}
    if not details["connected"]:
        problems.append({"connected": False})
    per_chain = []
    for i in range(1, n + 1):
        a = gs.chain_curve(i)
        ok, info = _restriction_matches(xn, xm, [a], n - 1)
        per_chain.append(ok)
        if not ok:
            problems.append({"chain": i, **info})
    details["chains_verified"] = sum(per_chain)
    if n >= 7:
        xk = lower.get(n - 2) or build_X(n - 2)
        count = 0
        for i, j in combinations(range(1, n + 1), 2):
            a, b = gs.chain_curve(i), gs.chain_curve(j)
            if geometric_intersection(a, b):
                continue
            ok, info = _restriction_matches(xn, xk, [a, b], n - 2)
            count += 1
            if not ok:
                problems.append({"chains": [i, j], **info})
        details["chain_pairs_checked"] = count
    if problems:
        return CheckReport("restriction", VIOLATED, details, problems[:10])
    return CheckReport("restriction", VERIFIED, details)


def _restriction_matches(xn, xm, curves, m):
    h = subsurface_map(curves, xn.n, m)
    keep = [i for i, v in enumerate(xn.vertices) if all(c in v for c in curves)]
    image = [h.vertex(u) for u in xm.vertices]
    if len(set(image)) != len(image):
        return False, {"h": "not injective"}
    target = {xn.vertices[i] for i in keep}
    if set(image) != target:
        return False, {"missing": len(target - set(image)), "extra": len(set(image) - target)}
    idx = {v: k for k, v in enumerate(image)}
    mapped = {tuple(sorted((idx[xn.vertices[i]], idx[xn.vertices[j]])))
              for i, j in xn.edges if i in set(keep) and j in set(keep)}
    if mapped != set(xm.edges):
        return False, {"edges_missing": len(set(xm.edges) - mapped), "edges_extra": len(mapped - set(xm.edges))}
    return True, {}


# ---------------------------------------------------------------------------
# rigidity experiment

def source_order(src: PantsSubgraph, core: Sequence[int]) -> list[int]:
    """Core pentagon first, then thick-pentagon apexes, then the rest (BFS)."""
    adj = src.adjacency()
    order = list(core)
    placed = set(order)
    core_set = set(core)
    apex = sorted(i for i in range(src.order) if i not in placed and len(adj[i] & core_set) >= 2)
    for i in apex:
        order.append(i)
        placed.add(i)
    while len(order) < src.order:
        best = max((i for i in range(src.order) if i not in placed),
                   key=lambda i: (len(adj[i] & placed), -i))
        order.append(best)
        placed.add(best)
    return order


def enumerate_embeddings(src: PantsSubgraph, tgt: PantsSubgraph, order: Sequence[int],
                         anchor: tuple[int, int], limit: int | None = None) -> list[dict]:
    """All injective edge-preserving maps src -> tgt sending anchor[0] to anchor[1]."""
    sa, ta = src.adjacency(), tgt.adjacency()
    order = list(order)
    if order[0] != anchor[0]:
        raise ValueError("order must start at the anchor")
    earlier = {u: [w for w in sa[u] if order.index(w) < order.index(u)] for u in order}
    out = []
    phi = {anchor[0]: anchor[1]}
    used = {anchor[1]}

    def rec(t):
        if limit is not None and len(out) >= limit:
            return
        if t == len(order):
            out.append(dict(phi))
            return
        u = order[t]
        nb = earlier[u]
        if nb:
            cands = set(ta[phi[nb[0]]])
            for w in nb[1:]:
                cands &= ta[phi[w]]
        else:
            cands = set(range(tgt.order))
        for x in sorted(cands - used):
            phi[u] = x
            used.add(x)
            rec(t + 1)
            del phi[u]
            used.discard(x)
    rec(1)
    return out


def enumerate_embeddings_naive(src: PantsSubgraph, tgt: PantsSubgraph, anchor: tuple[int, int]) -> int:
    """Independent recount: vertex ids in plain order, every target tried."""
    sa = src.adjacency()
    ta = tgt.adjacency()
    order = [anchor[0]] + [i for i in range(src.order) if i != anchor[0]]
    count = 0
    phi = {anchor[0]: anchor[1]}

    def rec(t):
        nonlocal count
        if t == len(order):
            count += 1
            return
        u = order[t]
        for x in range(tgt.order):
            if x in phi.values():
                continue
            if all(phi[w] in ta[x] for w in sa[u] if w in phi):
                phi[u] = x
                rec(t + 1)
                del phi[u]
    rec(1)
    return count


@dataclass
class EmbeddingResult:
    mapping: dict
    status: str                 # geometric | uncertified | falsification
    word: MCWord | None = None
    Q: tuple = ()
    reason: str = ""

    def to_json(self, src, tgt) -> dict:
        out = {"status": self.status,
               "map": [[u, self.mapping[u]] for u in sorted(self.mapping)],
               "Q": [_seq(c) for c in self.Q]}
        if self.word is not None:
            out["word"] = self.word.to_json()["word"]
        if self.reason:
            out["reason"] = self.reason
        return out


def certify(src: PantsSubgraph, tgt: PantsSubgraph, phi: dict, core: Sequence[int],
            depth: int, max_nodes: int = 20000) -> EmbeddingResult:
    """Find f with f^Q(u) = phi(u) for every source vertex, or classify."""
    images = [tgt.vertices[phi[u]] for u in range(src.order)]
    Q = tuple(sorted(set.intersection(*(set(v) for v in images))))
    n_src, n_tgt = src.n, tgt.n
    if len(Q) != n_tgt - n_src:
        return EmbeddingResult(phi, "uncertified", Q=Q, reason="common multicurve has wrong size")
    cyc = [images[u] for u in core]
    try:
        alternating = is_alternating_cycle(cyc)
    except Exception:
        alternating = False
    if not alternating:
        return EmbeddingResult(phi, "falsification", Q=Q, reason="image of the core is not an alternating pentagon")
    # curves of the core read off consecutive pairs
    pairs = []
    for t in range(5):
        u, v = core[t], core[(t + 1) % 5]
        (c_src,) = set(src.vertices[u]) & set(src.vertices[v])
        shared = (set(images[u]) & set(images[v])) - set(Q)
        if len(shared) != 1:
            return EmbeddingResult(phi, "falsification", Q=Q, reason="core edge images share no curve")
        pairs.append((shared.pop(), c_src))
    if Q:
        return EmbeddingResult(phi, "uncertified", Q=Q, reason="targets with boundary are not certified here")
    back = word_search(pairs, depth, max_nodes=max_nodes)
    if back is None:
        return EmbeddingResult(phi, "uncertified", Q=Q, reason=f"no untangling word within length {depth}")
    f = back.inverse()
    for cand in (f, MCWord(n_src, (REFLECT,)) + f):
        if all(make_vertex((apply_word(cand, c) for c in src.vertices[u]), n_src) == images[u]
               for u in range(src.order)):
            return EmbeddingResult(phi, "geometric", cand, Q)
    return EmbeddingResult(phi, "falsification", f, Q,
                           reason="neither f nor f composed with e reproduces the map")


@dataclass
class SearchReport:
    params: dict
    window: dict
    results: list
    complete: bool = True

    def summary(self) -> dict:
        keys = ("geometric", "uncertified", "falsification")
        out = {k: sum(r.status == k for r in self.results) for k in keys}
        out["found"] = len(self.results)
        out["complete"] = self.complete
        return out

    def to_json(self, src, tgt) -> dict:
        return {"suite": "search", "params": self.params, "window": self.window,
                "summary": self.summary(),
                "embeddings": [r.to_json(src, tgt) for r in self.results]}


def _certify_chunk(args):
    src, tgt, maps, core, depth = args
    return [certify(src, tgt, m, core, depth) for m in maps]


def rigidity_search(n: int = 5, radius: int = 3, K: int = 3, certify_depth: int = 10,
                    max_vertices: int = 200000, limit: int | None = None,
                    source: PantsSubgraph | None = None,
                    workers: int = 1) -> tuple[SearchReport, PantsSubgraph, PantsSubgraph]:
    """Enumerate embeddings of X_5 into a ball around A and certify each.

    Certification runs in `workers` processes; results are sorted by the
    mapping, so the report does not depend on the worker count.
    """
    if n != 5:
        raise ValueError("only n = 5 targets are supported")
    src = source if source is not None else build_X5()
    core = [src.index(v) for v in core_pentagon()]
    seed = core_pentagon()[0]
    tgt = ball(seed, radius, K, max_vertices=max_vertices)
    order = source_order(src, core)
    maps = enumerate_embeddings(src, tgt, order, (core[0], tgt.index(seed)), limit)
    complete = limit is None or len(maps) < limit
    if workers > 1 and len(maps) > 1:
        chunks = [maps[t::workers] for t in range(workers)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = pool.map(_certify_chunk, [(src, tgt, c, core, certify_depth) for c in chunks if c])
            results = [r for part in parts for r in part]
    else:
        results = [certify(src, tgt, m, core, certify_depth) for m in maps]
    results.sort(key=lambda r: [r.mapping[u] for u in sorted(r.mapping)])
    params = {"n": n, "radius": radius, "twist_bound": K, "certify_depth": certify_depth}
    window = {"vertices": tgt.order, "edges": tgt.size}
    return SearchReport(params, window, results, complete), src, tgt


# ---------------------------------------------------------------------------
# suites

def report_json(suite: str, params: dict, reports: Sequence[CheckReport]) -> dict:
    summary = {k: sum(r.status == k for r in reports) for k in (VERIFIED, VIOLATED, SKIPPED)}
    return {"suite": suite, "params": params, "reports": [r.to_json() for r in reports],
            "summary": summary}


def run_suite(suite: str, n: int = 6, radius: int = 2, K: int = 3) -> list[CheckReport]:
    runs: dict[str, Callable[[], list[CheckReport]]] = {
        "farey": lambda: [check_farey_local(radius=radius, K=K)],
        "Z": lambda: [check_Z(n)],
        "thick": lambda: [check_thick_pentagon()],
        "sym": lambda: [check_sym_X5()],
        "restriction": lambda: [check_restriction(n)],
    }
    if suite == "all":
        out = []
        for name in ("farey", "Z", "thick", "sym", "restriction"):
            out.extend(runs[name]())
        return out
    if suite not in runs:
        raise ValueError(f"unknown suite {suite!r}")
    return runs[suite]()
