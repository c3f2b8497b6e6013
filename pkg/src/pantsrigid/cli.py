"""Command line: build, verify, search, export.

Exit codes: 0 success, 1 violation or resource failure, 2 usage error.
A config file (--config) holds flat ``key = value`` lines; command-line
flags override it, and it overrides the built-in defaults.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .curves import CurveError
from .pantsgraph import (
    PantsError, PantsSubgraph, ResourceLimit, edge_farey_label,
    is_elementary_move, thick_graph, validate_vertex,
)
from .rigidset import build_X, build_X5, build_Z, gamma
from . import verify as V

log = logging.getLogger("pantsrigid")

DEFAULTS = {
    "n": 5,
    "radius": 3,
    "twist_bound": 3,
    "certify_depth": 10,
    "max_vertices": 200000,
    "threads": 1,
    "format": "json",
    "out": "-",
    "suite": "all",
    "what": "Z",
    "allow_large": False,
}
INT_KEYS = {"n", "radius", "twist_bound", "certify_depth", "max_vertices", "threads"}
MAX_DEFAULT_N = 7


class UsageError(Exception):
    pass


def read_config(path: str) -> dict:
    out = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in DEFAULTS:
            raise UsageError(f"{path}:{lineno}: unknown key {key!r}")
        if key in INT_KEYS:
            try:
                out[key] = int(value)
            except ValueError:
                raise UsageError(f"{path}:{lineno}: {key} must be an integer") from None
        elif key == "allow_large":
            out[key] = value.lower() in ("1", "true", "yes")
        else:
            out[key] = value
    return out


def resolve(args: argparse.Namespace) -> dict:
    cfg = dict(DEFAULTS)
    if args.config:
        cfg.update(read_config(args.config))
    for key in DEFAULTS:
        val = getattr(args, key, None)
        if val is not None and val is not False:
            cfg[key] = val
    for key in ("radius", "twist_bound", "certify_depth", "max_vertices", "threads"):
        if cfg[key] < (0 if key == "radius" else 1):
            raise UsageError(f"--{key.replace('_', '-')} must be positive")
    if cfg["n"] < 5:
        raise UsageError("--n must be at least 5")
    return cfg


def emit(text: str, out: str):
    if out == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=1) + "\n"


# ---------------------------------------------------------------------------

def gamma_json(n: int) -> dict:
    gs = gamma(n)
    chords = []
    for (i, j), c in sorted(gs.chords.items()):
        chords.append({"chord": [i, j], "seq": c.to_json()["seq"]})
    return {"n": n, "model": "collinear-v1", "count": len(gs),
            "chords": chords, "chain": [c.to_json()["seq"] for c in gs.chain]}


def label_farey(g: PantsSubgraph) -> PantsSubgraph:
    for i, j in sorted(g.edges):
        lab = dict(g.edge_labels.get((i, j), {}))
        lab["farey"] = edge_farey_label(g, i, j)
        g.edge_labels[(i, j)] = lab
    return g


def cmd_build(cfg) -> int:
    what, n = cfg["what"], cfg["n"]
    if n > MAX_DEFAULT_N and what in ("X", "Z", "thick") and not cfg["allow_large"]:
        raise UsageError(f"n > {MAX_DEFAULT_N} needs --allow-large")
    if what == "gamma":
        if cfg["format"] != "json":
            raise UsageError("gamma is only written as json")
        emit(dump(gamma_json(n)), cfg["out"])
        return 0
    if what == "Z":
        g = build_Z(n)
    elif what == "X5":
        g = build_X5()
    elif what == "X":
        g = build_X(n)
    elif what == "thick":
        g = thick_graph(build_Z(n))
    else:
        raise UsageError(f"unknown --what {what!r}")
    label_farey(g)
    emit(g.to_dot() if cfg["format"] == "dot" else g.dumps(), cfg["out"])
    return 0


def load_graph(path: str, strict: bool = False) -> PantsSubgraph:
    try:
        data = json.loads(Path(path).read_text())
        return PantsSubgraph.from_json(data, validate=strict)
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise UsageError(f"cannot read graph {path}: {exc}") from None


def input_report(g: PantsSubgraph) -> V.CheckReport:
    """Every vertex a pants decomposition, every edge an elementary move."""
    bad = []
    for i, v in enumerate(g.vertices):
        try:
            validate_vertex(v.curves, g.n)
        except (PantsError, CurveError) as exc:
            bad.append({"vertex": i, "error": type(exc).__name__})
    for i, j in sorted(g.edges):
        if not is_elementary_move(g.vertices[i], g.vertices[j]):
            bad.append({"edge": [i, j]})
    if bad:
        return V.CheckReport("input", V.VIOLATED, {"vertices": g.order, "edges": g.size}, bad[:10])
    return V.CheckReport("input", V.VERIFIED, {"vertices": g.order, "edges": g.size})


def cmd_verify(cfg, path: str | None) -> int:
    suite, n = cfg["suite"], cfg["n"]
    params = {"n": n, "radius": cfg["radius"], "twist_bound": cfg["twist_bound"]}
    if path:
        g = load_graph(path)
        # structural checks run only when asked for; "all" validates the input alone
        reports = [input_report(g)]
        if suite == "Z":
            reports.append(V.check_Z(g.n, g))
        if suite == "sym":
            reports.append(V.check_sym_X5(g))
        if suite == "restriction":
            reports.append(V.check_restriction(g.n, g))
        params["input"] = Path(path).name
    else:
        if suite == "restriction" and n not in (6, 7):
            raise UsageError("restriction runs for n = 6 or 7")
        if suite == "Z" and n > MAX_DEFAULT_N and not cfg["allow_large"]:
            raise UsageError(f"n > {MAX_DEFAULT_N} needs --allow-large")
        rn = n if suite != "all" else max(6, min(n, 7))
        # Farey windows past radius 2 are slow and add nothing local
        params["radius"] = min(cfg["radius"], 2)
        reports = V.run_suite(suite, rn, params["radius"], cfg["twist_bound"])
    out = V.report_json(suite, params, reports)
    emit(dump(out), cfg["out"])
    return 0 if out["summary"]["violated"] == 0 else 1


def cmd_search(cfg) -> int:
    if cfg["n"] != 5:
        raise UsageError("search supports n = 5")
    params = {"n": 5, "radius": cfg["radius"], "twist_bound": cfg["twist_bound"],
              "certify_depth": cfg["certify_depth"]}
    try:
        rep, src, tgt = V.rigidity_search(5, cfg["radius"], cfg["twist_bound"], cfg["certify_depth"],
                                          max_vertices=cfg["max_vertices"], workers=cfg["threads"])
    except ResourceLimit as exc:
        emit(dump({"suite": "search", "params": params, "partial": True,
                   "error": str(exc), "partial_count": exc.partial}), cfg["out"])
        return 1
    out = rep.to_json(src, tgt)
    emit(dump(out), cfg["out"])
    s = rep.summary()
    return 0 if s["falsification"] == 0 and s["complete"] else 1


def cmd_export(cfg, path: str) -> int:
    g = load_graph(path)
    if cfg["format"] == "dot":
        emit(g.to_dot(), cfg["out"])
    else:
        emit(g.dumps(), cfg["out"])
    return 0


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=int)
    common.add_argument("--out", help="output path, - for stdout")
    common.add_argument("--format", choices=("json", "dot"))
    common.add_argument("--config", help="flat key = value file")
    common.add_argument("--threads", type=int)
    common.add_argument("--max-vertices", dest="max_vertices", type=int)
    common.add_argument("--allow-large", dest="allow_large", action="store_true")
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="pantsrigid", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    b = sub.add_parser("build", parents=[common], help="write a graph or the chord system")
    b.add_argument("--what", choices=("gamma", "Z", "X5", "X", "thick"))
    v = sub.add_parser("verify", parents=[common], help="run structural checkers")
    v.add_argument("--suite", choices=("farey", "Z", "thick", "sym", "restriction", "all"))
    v.add_argument("--in", dest="infile", help="graph file to check instead of building")
    v.add_argument("--radius", type=int)
    v.add_argument("--twist-bound", dest="twist_bound", type=int)
    s = sub.add_parser("search", parents=[common], help="rigidity experiment")
    s.add_argument("--radius", type=int)
    s.add_argument("--twist-bound", dest="twist_bound", type=int)
    s.add_argument("--certify-depth", dest="certify_depth", type=int)
    e = sub.add_parser("export", parents=[common], help="convert a graph file")
    e.add_argument("--in", dest="infile", required=True)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    try:
        cfg = resolve(args)
        if args.command == "build":
            return cmd_build(cfg)
        if args.command == "verify":
            return cmd_verify(cfg, args.infile)
        if args.command == "search":
            return cmd_search(cfg)
        return cmd_export(cfg, args.infile)
    except UsageError as exc:
        print(f"pantsrigid: error: {exc}", file=sys.stderr)
        return 2
    except (ResourceLimit, MemoryError) as exc:
        print(f"pantsrigid: resource failure: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
