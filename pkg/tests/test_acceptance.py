"""Acceptance criteria 1-10, one PASS/FAIL line each.

Run with ``pytest tests/test_acceptance.py -v`` or as a script.
"""
import json
import random
import subprocess
import sys
import time
from itertools import combinations

import pytest

from pantsrigid import verify as V
from pantsrigid.curves import canonical_seq, geometric_intersection, reduce
from pantsrigid.mapclass import REFLECT, apply_generator
from pantsrigid.pantsgraph import ball, is_alternating_cycle, make_vertex
from pantsrigid.rigidset import (
    build_X, build_X5, build_Z, chord_block, core_pentagon, gamma, x5_pentagons,
)

RESULTS = {}


def report(num, ok, text, capsys=None):
    line = f"criterion {num:>2}: {'PASS' if ok else 'FAIL'}  {text}"
    RESULTS[num] = ok
    if capsys is not None:
        with capsys.disabled():
            print("\n" + line)
    else:
        print(line)
    assert ok, line


def timed(fn):
    t0 = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - t0


def _linked(n, a, b):
    a, b = set(a), set(b)
    comp = set(range(1, n + 1)) - a
    return bool(a & b) and not (a <= b or b <= a or comp <= b or b <= comp)


@pytest.fixture(scope="module")
def search_outputs(tmp_path_factory):
    """The rigidity search through the CLI, with one and with two workers."""
    d = tmp_path_factory.mktemp("search")
    outs = []
    for threads in (1, 2):
        path = d / f"search{threads}.json"
        t0 = time.perf_counter()
        proc = subprocess.run([sys.executable, "-m", "pantsrigid.cli", "search", "--n", "5",
                               "--radius", "3", "--twist-bound", "3", "--certify-depth", "10",
                               "--threads", str(threads), "--out", str(path)],
                              capture_output=True, text=True)
        outs.append((proc.returncode, path.read_bytes(), time.perf_counter() - t0))
    return outs


def test_criterion_01_gamma_counts(capsys):
    counts, dt = timed(lambda: [len(gamma(n)) for n in (5, 6, 7, 8)])
    ok = counts == [5, 9, 14, 20] == [n * (n - 3) // 2 for n in (5, 6, 7, 8)] and dt < 1
    report(1, ok, f"|Gamma_n| for n=5..8 = {counts}, {dt:.2f}s", capsys)


def test_criterion_02_Z_graphs(capsys):
    def run():
        z5, z6, z7 = build_Z(5), build_Z(6), build_Z(7)
        c5 = V.graph_iso(z5, V.cycle_graph(5)) is not None
        alt = is_alternating_cycle(core_pentagon())
        tris, fedges = V.flip_graph(6)
        iso6 = V.graph_iso(z6, (len(tris), fedges)) is not None
        reg6 = all(z6.degree(i) == 3 for i in range(z6.order))
        return c5, alt, (z6.order, z6.size), reg6, iso6, z7.order
    (c5, alt, s6, reg6, iso6, o7), dt = timed(run)
    ok = c5 and alt and s6 == (14, 21) and reg6 and iso6 and o7 == 42 and dt < 60
    report(2, ok, f"Z5 5-cycle={c5} alternating={alt}; Z6 {s6} 3-regular={reg6} "
                  f"flip-iso={iso6}; |Z7|={o7}; {dt:.2f}s", capsys)


def test_criterion_03_distinct_farey_ids(capsys):
    reps, dt = timed(lambda: [V.check_Z(n) for n in (5, 6, 7)])
    bad = [r.witness for r in reps if r.status != V.VERIFIED]
    report(3, not bad, f"n-3 edges with distinct FareyIds at every vertex, n=5,6,7; "
                       f"exceptions={len(bad)}; {dt:.2f}s", capsys)


def test_criterion_04_X5(capsys):
    def run():
        x5 = build_X5()
        cycles, alternating = V.x5_pentagon_count(x5)
        thick = V.check_thick_pentagon()
        core = {x5.index(v) for v in core_pentagon()}
        adj = x5.adjacency()
        apex = [i for i in range(x5.order) if i not in core and len(adj[i] & core) == 2]
        return x5, cycles, alternating, thick, len(apex)
    (x5, cycles, alternating, thick, apex), dt = timed(run)
    d = thick.details
    ok = (alternating == 11 and len(x5_pentagons(x5)) == 11 and (x5.order, x5.size) == (25, 45)
          and (d["thick_vertices"], d["thick_edges"]) == (15, 25) and apex == 10
          and thick.status == V.VERIFIED and dt < 60)
    report(4, ok, f"X5 has {alternating} alternating pentagons (of {cycles} 5-cycles), "
                  f"{x5.order} vertices, {x5.size} edges; thick pentagon "
                  f"{d['thick_vertices']}/{d['thick_edges']} with {apex} apexes; {dt:.2f}s", capsys)


def test_criterion_05_symmetry(capsys):
    rep, dt = timed(V.check_sym_X5)
    d = rep.details
    ok = rep.status == V.VERIFIED and d["order"] == 2 and d.get("equals_reflection") and dt < 60
    report(5, ok, f"Z5-fixing automorphism group order {d['order']}, "
                  f"nontrivial element is e: {d.get('equals_reflection')}; {dt:.2f}s", capsys)


def test_criterion_06_intersection_oracles(capsys):
    def run():
        chord_bad = chord_pairs = 0
        for n in range(5, 9):
            gs = gamma(n)
            for (k1, c1), (k2, c2) in combinations(sorted(gs.chords.items()), 2):
                chord_pairs += 1
                exp = 2 if _linked(n, chord_block(*k1, n), chord_block(*k2, n)) else 0
                chord_bad += geometric_intersection(c1, c2) != exp
        farey = V.check_farey_local(radius=2, K=3)
        value = {s: V.pentagon_obstruction(s) for s in (1, -1)}
        growth = V.twist_growth(max_k=6)
        big = [r for r in growth if abs(r["k"]) >= 3]
        return chord_pairs, chord_bad, farey, value, big
    (pairs, bad, farey, value, big), dt = timed(run)
    slope_pairs = farey.details["slope_pairs"]
    growth_ok = bool(big) and all(r["i"] > 2 for r in big)
    ok = (bad == 0 and farey.status == V.VERIFIED and slope_pairs >= 100
          and value[1] == 4 and growth_ok and dt < 600)
    report(6, ok, f"{pairs} chord pairs, {bad} mismatches; {slope_pairs} slope pairs exact; "
                  f"thick-pentagon obstruction {value[1]} (+), {value[-1]} (-); "
                  f"i(a,T_b^k a)>2 on {len(big)} samples with k>=3/2; {dt:.2f}s", capsys)


def test_criterion_07_triangle_identity(capsys):
    pairs, dt = timed(V.triangle_identity_pairs)
    ok = len(pairs) > 0 and all(p["equal"] for p in pairs) and dt < 60
    report(7, ok, f"T_b^(1/2)(a) = T_a^(-1/2)(b) for {sum(p['equal'] for p in pairs)}"
                  f"/{len(pairs)} Gamma_5 pairs; {dt:.2f}s", capsys)


def test_criterion_08_restriction(capsys):
    rep, dt = timed(lambda: V.check_restriction(6, build_X(6)))
    d = rep.details
    ok = rep.status == V.VERIFIED and d["chains_verified"] == 6 and d["connected"] and dt < 1800
    report(8, ok, f"X6 ({d['vertices']} vertices) cut to each chain stratum matches h(X5): "
                  f"{d['chains_verified']}/6; connected={d['connected']}; {dt:.2f}s", capsys)


@pytest.mark.slow
def test_criterion_09_rigidity_search(search_outputs, capsys):
    code, raw, dt = search_outputs[0]
    data = json.loads(raw)
    s = data["summary"]
    x5 = build_X5()
    maps = [dict(map(tuple, e["map"])) for e in data["embeddings"]]
    # identity and e-twist, located through the vertex curves of a rebuilt window
    tgt = ball(core_pentagon()[0], 3, 3)
    ident = {i: tgt.index(v) for i, v in enumerate(x5.vertices)}
    e_img = {i: tgt.index(make_vertex((apply_generator(REFLECT, c) for c in v), 5))
             for i, v in enumerate(x5.vertices)}
    has_id = any(m == ident for m in maps)
    has_e = any(m == e_img for m in maps)
    ok = (code == 0 and s["found"] >= 2 and s["geometric"] == s["found"]
          and s["falsification"] == 0 and has_id and has_e and dt < 3600)
    report(9, ok, f"{s['found']} embeddings into the radius-3 window "
                  f"({data['window']['vertices']} vertices), {s['geometric']} geometric, "
                  f"{s['uncertified']} uncertified, {s['falsification']} falsifications; "
                  f"identity={has_id} e-twist={has_e}; {dt:.1f}s", capsys)


@pytest.mark.slow
def test_criterion_10_infrastructure(search_outputs, capsys):
    # round trip on every curve any suite constructs
    graphs = [build_Z(n) for n in (5, 6, 7)] + [build_X5(), build_X(6), build_X(7),
                                               V.thick_graph(build_Z(5)),
                                               V.farey_window(core_pentagon()[0], core_pentagon()[0].curves[0], 2, 3),
                                               ball(core_pentagon()[0], 3, 3)]
    curves = V.graph_curves(*graphs) | {c for n in range(5, 9) for c in gamma(n).curves}
    rt = V.check_roundtrip(curves)
    # reduction confluence
    rng = random.Random(10)
    confluent = 0
    for _ in range(1000):
        seq = [rng.choice((1, -1)) * rng.randint(1, 5) for _ in range(rng.randint(0, 16))]
        k = rng.randint(0, max(len(seq) - 1, 0))
        i = rng.randint(0, len(seq))
        padded = seq[:i] + [3, -3] + seq[i:]
        confluent += (canonical_seq(reduce(seq[k:] + seq[:k])) == canonical_seq(reduce(seq))
                      == canonical_seq(reduce(padded)))
    # CLI determinism
    cmds = [["build", "--what", "gamma", "--n", "8"], ["build", "--what", "X", "--n", "7"],
            ["build", "--what", "Z", "--n", "6", "--format", "dot"],
            ["verify", "--suite", "all"]]
    same = 0
    for cmd in cmds:
        outs = [subprocess.run([sys.executable, "-m", "pantsrigid.cli", *cmd, *extra],
                               capture_output=True).stdout for extra in ([], [], ["--threads", "4"])]
        same += outs[0] == outs[1] == outs[2] and bool(outs[0])
    search_same = search_outputs[0][1] == search_outputs[1][1]
    ok = rt.status == V.VERIFIED and confluent == 1000 and same == len(cmds) and search_same
    report(10, ok, f"round trip {rt.details['curves']} curves ({rt.status}); "
                   f"confluence {confluent}/1000; CLI byte-identical {same}/{len(cmds)} "
                   f"+ search across threads={search_same}", capsys)


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v"]))
