"""Explicit polygonal representatives with exact rational coordinates.

`realize` draws a curve class as a simple polygon crossing each ray
minimally; `extract` reads the crossing word back off any transverse
polygon.  Arbitrary arc systems (used for change of infinity) are read
with :func:`read_crossings`.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cmp_to_key
from typing import Sequence

from .curves import (
    CurveClass, CurveError, SphereModel, canonicalize, geometric_intersection,
    invert, reduce,
)

Point = tuple[Fraction, Fraction]


class Degenerate(CurveError):
    """Polygon is not transverse to the cut system (or touches a puncture)."""


@dataclass(frozen=True)
class PolyChain:
    points: tuple[Point, ...]

    def __len__(self):
        return len(self.points)

    def edges(self):
        pts = self.points
        return [(pts[i], pts[(i + 1) % len(pts)]) for i in range(len(pts))]

    def map(self, fn) -> "PolyChain":
        return PolyChain(tuple(fn(p) for p in self.points))

    def bounds(self):
        xs = [p[0] for p in self.points]
        ys = [p[1] for p in self.points]
        return min(xs), max(xs), min(ys), max(ys)


@dataclass(frozen=True)
class Arc:
    """Polyline from a finite puncture towards the point at infinity.

    `index` is the ray label used in the cut sequence; the first point is the
    puncture end.
    """
    index: int
    points: tuple[Point, ...]


def _sign(x) -> int:
    return (x > 0) - (x < 0)


def _cross(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _on_segment(p, a, b) -> bool:
    return (_cross(a, b, p) == 0
            and min(a[0], b[0]) <= p[0] <= max(a[0], b[0])
            and min(a[1], b[1]) <= p[1] <= max(a[1], b[1]))


def segments_cross(p1, p2, q1, q2) -> bool:
    """Closed segments share a point."""
    d1 = _sign(_cross(q1, q2, p1))
    d2 = _sign(_cross(q1, q2, p2))
    d3 = _sign(_cross(p1, p2, q1))
    d4 = _sign(_cross(p1, p2, q2))
    if d1 * d2 < 0 and d3 * d4 < 0:
        return True
    return (_on_segment(p1, q1, q2) or _on_segment(p2, q1, q2)
            or _on_segment(q1, p1, p2) or _on_segment(q2, p1, p2))


def is_simple(poly: PolyChain) -> bool:
    """No two non-adjacent edges meet; adjacent edges meet only at their vertex."""
    es = poly.edges()
    m = len(es)
    boxes = [(min(a[0], b[0]), max(a[0], b[0]), min(a[1], b[1]), max(a[1], b[1])) for a, b in es]
    # sweep in x: only pairs with overlapping x-ranges can meet
    by_left = sorted(range(m), key=lambda i: boxes[i][0])
    active: list[int] = []
    for j in by_left:
        bj = boxes[j]
        active = [i for i in active if boxes[i][1] >= bj[0]]
        for i in active:
            bi = boxes[i]
            if bi[3] < bj[2] or bj[3] < bi[2]:
                continue
            if not _edges_ok(es, min(i, j), max(i, j), m):
                return False
        active.append(j)
    return True


def _edges_ok(es, i, j, m) -> bool:
    a1, a2 = es[i]
    b1, b2 = es[j]
    if j == i + 1 or (i == 0 and j == m - 1):
        shared = a2 if j == i + 1 else a1
        other_a = a1 if j == i + 1 else a2
        other_b = b2 if j == i + 1 else b1
        return not (_cross(shared, other_a, other_b) == 0 and (
            _on_segment(other_b, a1, a2) or _on_segment(other_a, b1, b2)))
    return not segments_cross(a1, a2, b1, b2)


def point_in_polygon(pt: Point, poly: PolyChain) -> bool:
    """Even-odd rule, exact; pt must not lie on the polygon."""
    x, y = pt
    inside = False
    for (x1, y1), (x2, y2) in poly.edges():
        if (y1 > y) != (y2 > y):
            xi = x1 + (y - y1) * (x2 - x1) / (y2 - y1)
            if xi > x:
                inside = not inside
    return inside


# ---------------------------------------------------------------------------
# realization

def _exit_side(x: int) -> int:
    # boundary sides of the ray complement, counterclockwise: L1 R1 L2 R2 ...
    k = abs(x)
    return 2 * (k - 1) + (1 if x > 0 else 0)


def _entry_side(x: int) -> int:
    k = abs(x)
    return 2 * (k - 1) + (0 if x > 0 else 1)


def _part(a, b, nsides: int, forward: bool = True) -> tuple[int, int]:
    """Where two strands through one ray part, and their nesting there.

    Strands are (sequence, position, tag), both oriented to cross the ray
    positively.  Returns (steps to the parting, order) with order 1 when a
    lies deeper than b along the shared run.
    """
    sa, pa, _ = a
    sb, pb, _ = b
    ma, mb = len(sa), len(sb)
    step = 1 if forward else -1
    for j in range(1, 2 * (ma + mb) + 2):
        la = sa[(pa + step * j) % ma]
        lb = sb[(pb + step * j) % mb]
        if la != lb:
            if forward:
                x = _exit_side(sa[(pa + j - 1) % ma])
                da = (_entry_side(la) - x) % nsides
                db = (_entry_side(lb) - x) % nsides
            else:
                e = _entry_side(sa[(pa - j + 1) % ma])
                da = (e - _exit_side(la)) % nsides
                db = (e - _exit_side(lb)) % nsides
            return j, (1 if da < db else -1)
    raise CurveError("strands never part: proper power or parallel copies")


def _compare(a, b, nsides: int) -> int:
    """Order of two strands on a ray, crossing (if at all) mid-run.

    Strands that part the same way at both ends of their shared run do not
    cross.  Otherwise the crossing sits in the middle of the run, so each
    ray takes the order of the farther end; on the middle ray the run is
    read both ways and the smaller reading decides.  The rule depends only
    on the run, never on which way either curve is traversed.
    """
    f, fo = _part(a, b, nsides, True)
    g, bo = _part(a, b, nsides, False)
    if fo == bo or f < g:
        return fo
    if f > g:
        return bo
    sa, pa, _ = a
    ma = len(sa)
    run = tuple(sa[(pa + i) % ma] for i in range(1 - g, f))
    return bo if run < invert(run) else fo


def _strands(w: tuple[int, ...], tag) -> dict[int, list]:
    m = len(w)
    u = invert(w)
    by_ray: dict[int, list] = {}
    for t, x in enumerate(w):
        if x > 0:
            by_ray.setdefault(x, []).append((w, t, (tag, t)))
        else:
            by_ray.setdefault(-x, []).append((u, m - 1 - t, (tag, t)))
    return by_ray


def _strand_order(w: tuple[int, ...], n: int) -> dict[int, int]:
    """Depth rank (0 = shallowest) of every crossing of w along its ray."""
    nsides = 2 * (n - 1)

    def cmp(a, b):
        return _compare(a, b, nsides)

    rank: dict[int, int] = {}
    for ray, strands in _strands(w, 0).items():
        strands.sort(key=cmp_to_key(cmp))
        for r, (_, _, (_, t)) in enumerate(strands):
            rank[t] = r
    return rank


def realize(c: CurveClass) -> PolyChain:
    """A simple polygon in the class of c, crossing each ray minimally.

    Crossing points sit on the rays at integer depths; between consecutive
    crossings the curve runs up beside the ray, over the puncture line at a
    height given by the nesting of its arch, and back down.
    """
    w, n = c.seq, c.n
    m = len(w)
    rank = _strand_order(w, n)
    per_ray: dict[int, int] = {}
    for x in w:
        per_ray[abs(x)] = per_ray.get(abs(x), 0) + 1
    width = Fraction(1, 2 * (max(per_ray.values()) + 1))

    def depth(t):
        return rank[t] + 1

    def pos(side, t):
        # linear position along the boundary: side-major, then along the side
        d = depth(t)
        k = side // 2 + 1
        cnt = per_ray[k]
        return (side, d if side % 2 else cnt + 1 - d)

    def xcoord(side, t):
        k = side // 2 + 1
        off = depth(t) * width
        return Fraction(k) + off if side % 2 else Fraction(k) - off

    # endpoints of every arch, in linear boundary order, to get spans
    ends = []
    for t in range(m):
        ends.append((pos(_exit_side(w[t]), t), ("x", t)))
        t1 = (t + 1) % m
        ends.append((pos(_entry_side(w[t1]), t1), ("e", t1)))
    ends.sort()
    index = {tag: i for i, (_, tag) in enumerate(ends)}

    pts: list[Point] = []
    for t in range(m):
        x = w[t]
        t1 = (t + 1) % m
        y = Fraction(-depth(t))
        pts.append((xcoord(_entry_side(x), t), y))
        pts.append((xcoord(_exit_side(x), t), y))
        span = abs(index[("x", t)] - index[("e", t1)])
        h = Fraction(span)
        pts.append((xcoord(_exit_side(x), t), h))
        pts.append((xcoord(_entry_side(w[t1]), t1), h))
    return PolyChain(tuple(pts))


# ---------------------------------------------------------------------------
# extraction

def standard_arcs(n: int, poly: PolyChain) -> list[Arc]:
    lo = poly.bounds()[2]
    bottom = Fraction(min(lo, 0) - 1)
    return [Arc(k, ((Fraction(k), Fraction(0)), (Fraction(k), bottom))) for k in range(1, n)]


def read_crossings(poly: PolyChain, arcs: Sequence[Arc], punctures: Sequence[Point]) -> list[int]:
    """Signed crossing sequence of poly with an arc system.

    Sign +1 when cross(arc direction, polygon direction) > 0; for a downward
    ray that is a crossing towards increasing x.
    """
    for p in poly.points:
        if p in punctures:
            raise Degenerate("polygon vertex at a puncture")
    out: list[int] = []
    for p1, p2 in poly.edges():
        for q in punctures:
            if _on_segment(q, p1, p2):
                raise Degenerate("polygon passes through a puncture")
        hits = []
        for arc in arcs:
            for a1, a2 in zip(arc.points, arc.points[1:]):
                if not segments_cross(p1, p2, a1, a2):
                    continue
                den = _cross((0, 0), (p2[0] - p1[0], p2[1] - p1[1]), (a2[0] - a1[0], a2[1] - a1[1]))
                if den == 0:
                    raise Degenerate("polygon edge overlaps an arc")
                # parameters along the polygon edge and along the arc segment
                t = _cross((0, 0), (a1[0] - p1[0], a1[1] - p1[1]), (a2[0] - a1[0], a2[1] - a1[1])) / den
                s = _cross((0, 0), (a1[0] - p1[0], a1[1] - p1[1]), (p2[0] - p1[0], p2[1] - p1[1])) / den
                if t <= 0 or t >= 1 or s <= 0 or s >= 1:
                    if s == 0 and a1 == arc.points[0]:
                        raise Degenerate("polygon touches the puncture end of an arc")
                    raise Degenerate("polygon vertex on an arc or arc bend on polygon")
                d = (a2[0] - a1[0], a2[1] - a1[1])
                v = (p2[0] - p1[0], p2[1] - p1[1])
                sgn = _sign(d[0] * v[1] - d[1] * v[0])
                hits.append((t, arc.index * sgn))
        hits.sort()
        out.extend(h for _, h in hits)
    return out


def perturb(poly: PolyChain, attempt: int) -> PolyChain:
    """Deterministic small shear-and-shift, distinct for each attempt."""
    eps = Fraction(1, 997 * (attempt + 2) ** 2)

    def f(p):
        return (p[0] + eps * p[1] + eps / 7, p[1] + eps / 13)
    return poly.map(f)


def extract_raw(poly: PolyChain, model: SphereModel | int, arcs=None, punctures=None) -> tuple[int, ...]:
    n = model.n if isinstance(model, SphereModel) else model
    if arcs is None:
        arcs = standard_arcs(n, poly)
    if punctures is None:
        punctures = [(Fraction(k), Fraction(0)) for k in range(1, n)]
    return reduce(read_crossings(poly, arcs, punctures))


def extract(poly: PolyChain, model: SphereModel | int) -> CurveClass:
    """Curve class of a transverse polygon (raises Degenerate otherwise)."""
    n = model.n if isinstance(model, SphereModel) else model
    return canonicalize(extract_raw(poly, n), n)


def extract_perturbing(poly: PolyChain, n: int, arcs_fn=None, punctures=None, retries: int = 3) -> tuple[int, ...]:
    """Like extract_raw, shearing the polygon on degeneracy (bounded retries)."""
    last = None
    for attempt in range(retries + 1):
        p = poly if attempt == 0 else perturb(poly, attempt)
        arcs = arcs_fn(p) if arcs_fn else None
        try:
            return extract_raw(p, n, arcs, punctures)
        except Degenerate as exc:
            last = exc
    raise Degenerate(f"still degenerate after {retries} perturbations: {last}")


def enclosed_by_polygon(poly: PolyChain, n: int) -> frozenset[int]:
    """Finite punctures inside the polygon (exact point-in-polygon)."""
    return frozenset(k for k in range(1, n)
                     if point_in_polygon((Fraction(k), Fraction(0)), poly))


# ---------------------------------------------------------------------------
# overlaid curves

def _arrangement(curves: Sequence[CurveClass]):
    """Crossing points of several classes on each ray, in depth order."""
    n = curves[0].n
    nsides = 2 * (n - 1)
    by_ray: dict[int, list] = {}
    for i, c in enumerate(curves):
        for k, ss in _strands(c.seq, i).items():
            by_ray.setdefault(k, []).extend(ss)

    def cmp(a, b):
        return _compare(a, b, nsides)

    order = {}
    for k, ss in by_ray.items():
        ss.sort(key=cmp_to_key(cmp))
        order[k] = [s[2] for s in ss]
    return order


def _chord_crossings(curves, order, n):
    """Crossings between arcs in the disk cut open along the rays.

    Returns (boundary points in cyclic order, chords as index pairs with
    their curve, per-pair crossing counts).
    """
    rank = {tag: r for k, tags in order.items() for r, tag in enumerate(tags)}
    cnt = {k: len(v) for k, v in order.items()}

    def pos(side, tag):
        k = side // 2 + 1
        d = rank[tag] + 1
        return (side, d if side % 2 else cnt[k] + 1 - d)

    chords = []
    for i, c in enumerate(curves):
        w = c.seq
        m = len(w)
        for t in range(m):
            t1 = (t + 1) % m
            chords.append((i, pos(_exit_side(w[t]), (i, t)), pos(_entry_side(w[t1]), (i, t1))))
    keys = sorted({p for _, a, b in chords for p in (a, b)})
    index = {p: x for x, p in enumerate(keys)}
    arcs = [(i, *sorted((index[a], index[b]))) for i, a, b in chords]
    counts: dict[tuple[int, int], int] = {}
    for x in range(len(arcs)):
        i, a1, b1 = arcs[x]
        for y in range(x + 1, len(arcs)):
            j, a2, b2 = arcs[y]
            if (a1 < a2 < b1) != (a1 < b2 < b1):
                key = (min(i, j), max(i, j))
                counts[key] = counts.get(key, 0) + 1
    return keys, arcs, counts


def fills_check(curves: Sequence[CurveClass]) -> bool:
    """True iff overlaid taut representatives cut the sphere into disks
    holding at most one puncture each.

    The curves are drawn together in the disk obtained by cutting along the
    rays.  The drawing is certified minimal (each pair crosses exactly its
    geometric intersection number); then gaps of the disk boundary are
    glued into faces along the rays and punctures are counted per face.
    """
    curves = list(curves)
    if not curves:
        return False
    n = curves[0].n
    if any(c.n != n for c in curves):
        raise CurveError("curves live on different spheres")
    if len(set(curves)) != len(curves):
        return False
    order = _arrangement(curves)
    keys, arcs, counts = _chord_crossings(curves, order, n)
    inter = {}
    for i in range(len(curves)):
        for j in range(i + 1, len(curves)):
            inter[(i, j)] = geometric_intersection(curves[i], curves[j])
            if counts.get((i, j), 0) != inter[(i, j)]:
                raise CurveError("overlay is not in minimal position")
    if any(counts.get((i, i), 0) for i in range(len(curves))):
        raise CurveError("overlay has a self-crossing")

    # union connected: intersection graph connected
    seen, stack = {0}, [0]
    while stack:
        i = stack.pop()
        for j in range(len(curves)):
            if j not in seen and inter.get((min(i, j), max(i, j)), 0):
                seen.add(j)
                stack.append(j)
    if len(seen) != len(curves):
        return False

    # gap g lies between boundary points g and g+1 (cyclically)
    M = len(keys)
    parent = list(range(M))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(a, b):
        parent[find(a)] = find(b)

    for g in range(M):
        for h in range(g + 1, M):
            if find(g) == find(h):
                continue
            # a chord separates the gaps iff exactly one end lies in (g, h]
            if all((g < a <= h) == (g < b <= h) for _, a, b in arcs):
                union(g, h)

    index = {p: x for x, p in enumerate(keys)}

    def gap_before(key):
        # gap containing a boundary location just before `key`
        below = [x for x, p in enumerate(keys) if p < key]
        return below[-1] if below else M - 1

    big = 1 << 30
    for k in range(1, n):
        tags = order.get(k, [])
        c = len(tags)
        left, right = 2 * (k - 1), 2 * (k - 1) + 1
        L = [index[(left, c - r)] for r in range(c)]
        R = [index[(right, r + 1)] for r in range(c)]
        for r in range(c - 1):
            union(L[r + 1], R[r])
        if c:
            union((L[c - 1] - 1) % M, R[c - 1])

    faces: dict[int, set[int]] = {}
    for k in range(1, n):
        faces.setdefault(find(gap_before((2 * (k - 1), big))), set()).add(k)
        faces.setdefault(find(gap_before((2 * (k - 1) + 1, big))), set()).add(n)
    return all(len(p) <= 1 for p in faces.values())
