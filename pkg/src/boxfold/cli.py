"""Command line interface: ``boxfold <command> ...``."""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .campaign import (
    STORE_NAME,
    CampaignConfig,
    ResultStore,
    format_stats,
    oracle_census,
    run_campaign,
    sat_census,
    stats,
)
from .cnf import write_dimacs
from .decode import decode
from .encoder import BoardSpec, EncodeConfig, EncodeError, VarMap, encode
from .folding import FoldError, count_foldings
from .geometry import BoxSpec
from .polyomino import Polyomino, enumerate_polyominoes
from .render import FORMATS, render
from .solver import ERROR, SAT, SolverConfig, SolverError, bundled_solver_command, enumerate_models, solve

log = logging.getLogger("boxfold")

EXIT_OK, EXIT_USAGE, EXIT_SOLVER = 0, 1, 2

DEFAULTS = {
    "boxes": "1x2x4,1x2x4",
    "board": 15,
    "max_dist": 15,
    "timeout": 10_000.0,
    "jobs": 1,
    "out": "boxfold-out",
    "anchors": "all",
    "format": "ascii",
    "amo": "sequential",
    "prune": "reachable",
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def parse_boxes(text: str) -> list[BoxSpec]:
    try:
        return [BoxSpec.parse(t) for t in str(text).split(",") if t.strip()]
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def parse_anchors(text) -> list[tuple[int, ...]] | None:
    """``all`` or ``a,b;c,d`` (one tuple per instance)."""
    if text is None or text == "all":
        return None
    if isinstance(text, list):
        return [tuple(int(x) for x in t) for t in text]
    try:
        return [tuple(int(x) for x in chunk.split(",")) for chunk in str(text).split(";") if chunk.strip()]
    except ValueError:
        raise UsageError(f"bad anchor list {text!r}; expected e.g. '0,5;0,7'") from None


def _settings(args) -> dict:
    merged = dict(DEFAULTS)
    if getattr(args, "config", None):
        try:
            merged.update(json.loads(Path(args.config).read_text()))
        except (OSError, ValueError) as exc:
            raise UsageError(f"cannot read config {args.config}: {exc}") from None
    for k, v in vars(args).items():
        if v is not None and k not in ("func", "config"):
            merged[k] = v
    return merged


def _solver(s: dict, workdir) -> SolverConfig:
    cmd = s.get("solver_cmd") or bundled_solver_command()
    try:
        return SolverConfig(cmd, float(s["timeout"]), workdir)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _encode_config(s: dict, anchors=None) -> EncodeConfig:
    boxes = parse_boxes(s["boxes"])
    return EncodeConfig(
        boxes,
        BoardSpec(int(s["board"])),
        int(s["max_dist"]),
        list(anchors) if anchors else [None] * len(boxes),
        amo_encoding=s["amo"],
        emit_redundant=not s.get("no_redundant", False),
        prune=s["prune"],
    )


def _read_polyomino(text: str) -> Polyomino:
    p = Path(text)
    if p.exists():
        text = p.read_text()
    elif ":" in text:
        return Polyomino.from_key(text)
    return Polyomino.from_text(text)


def _write_docs(docs: list[str], out: str | None, stem: str, ext: str) -> None:
    if not out:
        sys.stdout.write("".join(docs))
        return
    d = Path(out)
    d.mkdir(parents=True, exist_ok=True)
    for i, doc in enumerate(docs):
        name = f"{stem}.{ext}" if len(docs) == 1 else f"{stem}_{i + 1}.{ext}"
        (d / name).write_text(doc)
        print(d / name)


# -- commands -------------------------------------------------------------


def cmd_encode(args) -> int:
    s = _settings(args)
    anchors = parse_anchors(s["anchors"])
    if anchors and len(anchors) != 1:
        raise UsageError("encode takes a single anchor tuple, e.g. --anchors 0,5")
    cfg = _encode_config(s, anchors[0] if anchors else None)
    formula, vm = encode(cfg)
    out = Path(s["out"])
    if out.suffix != ".cnf":
        out = out.with_suffix(".cnf")
    out.parent.mkdir(parents=True, exist_ok=True)
    with open(out, "wb") as fh:
        size = write_dimacs(formula, fh)
    sidecar = out.with_suffix(".map.json")
    sidecar.write_text(json.dumps({"config": cfg.to_json(), "varmap": vm.to_json()}))
    print(f"{out}: {formula.num_vars} variables, {len(formula)} clauses, {size} bytes")
    return EXIT_OK


def _report_model(model, vm: VarMap) -> None:
    for k, box in enumerate(decode(model, vm)):
        n = count_foldings(box.polyomino, box.folding.box)[0]
        print(f"box {box.folding.box}: folds {n} way(s)")
        if k == 0:
            print(box.polyomino.text())
            print(box.polyomino.canonical_form())


def cmd_solve(args) -> int:
    s = _settings(args)
    cnf = Path(args.cnf)
    solver = _solver(s, cnf.parent)
    sidecar = Path(args.map) if args.map else cnf.with_suffix(".map.json")
    if args.limit and args.limit > 1:
        if not sidecar.exists():
            raise UsageError("enumeration needs the variable map written by 'encode'")
        from .cnf import read_dimacs

        vm = VarMap.from_json(json.loads(sidecar.read_text())["varmap"])
        formula = read_dimacs(cnf.read_text())
        en = enumerate_models(formula, vm, solver, limit=args.limit, name=cnf.stem + "_enum")
        for i, (model, _) in enumerate(en, 1):
            print(f"-- model {i}")
            _report_model(model, vm)
        print(f"enumeration ended: {en.final_status}")
        return EXIT_OK
    verdict = solve(cnf, solver)
    print(f"{verdict.status} ({verdict.elapsed:.2f}s, log {verdict.log_path})")
    if verdict.status == ERROR:
        print(verdict.message, file=sys.stderr)
        return EXIT_SOLVER
    if verdict.status == SAT and sidecar.exists():
        vm = VarMap.from_json(json.loads(sidecar.read_text())["varmap"])
        _report_model(verdict.model, vm)
    return EXIT_OK


def cmd_campaign(args) -> int:
    s = _settings(args)
    enc = _encode_config(s)
    out = Path(s["out"])
    min_folds = s.get("min_folds")
    if isinstance(min_folds, str):
        min_folds = [int(x) for x in min_folds.split(",")]
    cfg = CampaignConfig(
        encode=enc,
        solver=_solver(s, out / "work"),
        out=out,
        anchors=parse_anchors(s["anchors"]),
        max_pairs=s.get("limit"),
        jobs=int(s["jobs"]),
        min_folds=min_folds,
        stop_at_folds=s.get("stop_at_folds"),
        keep_cnf=bool(s.get("keep_cnf", False)),
    )

    def progress(res):
        extra = f" folds={res['folds']} {res['key']}" if res.get("key") else ""
        print(f"{res['instance']}: {res['status']} {res['seconds']}s{extra}", flush=True)

    if not cfg.anchor_list():
        print("no admissible anchor choices: every pair is equivalent to a coincident one", file=sys.stderr)
    summary = run_campaign(cfg, progress)
    print(json.dumps(summary.to_json(), indent=2))
    if summary.jobs and summary.error == summary.jobs:
        return EXIT_SOLVER
    return EXIT_OK


def cmd_count(args) -> int:
    s = _settings(args)
    poly = _read_polyomino(args.polyomino)
    docs = []
    for box in parse_boxes(s["boxes"]):
        n, reps = count_foldings(poly, box)
        print(f"{box}: {n}")
        if s["format"] == "svg":
            docs += render(poly.cells, "svg", reps, title=f"{box}")
    if docs:
        _write_docs(docs, args.render_out, "folding", "svg")
    return EXIT_OK


def _store_path(out: str) -> Path:
    p = Path(out)
    return p / STORE_NAME if p.is_dir() else p


def cmd_stats(args) -> int:
    s = _settings(args)
    table = stats(ResultStore(_store_path(s["out"])))
    if s["format"] == "json":
        print(json.dumps(table, indent=2))
    else:
        sys.stdout.write(format_stats(table))
    return EXIT_OK


def cmd_render(args) -> int:
    s = _settings(args)
    fmt = s["format"]
    if fmt not in FORMATS:
        raise UsageError(f"unknown format {fmt!r}")
    if args.polyomino:
        poly = _read_polyomino(args.polyomino)
        boxes = parse_boxes(s["boxes"]) if args.boxes else []
        title = "development"
    else:
        recs, _ = ResultStore(_store_path(s["out"])).read()
        if args.key:
            recs = [r for r in recs if r.key == args.key]
        if not recs or args.index >= len(recs):
            raise UsageError("no such record")
        rec = recs[args.index]
        poly = Polyomino.from_text(rec.polyomino)
        boxes = [BoxSpec(*b) for b in rec.boxes]
        title = rec.key
    foldings = []
    for box in dict.fromkeys(boxes):
        foldings += count_foldings(poly, box)[1]
    docs = render(poly.cells, fmt, foldings, title=title)
    _write_docs(docs, args.render_out, "development", "txt" if fmt == "ascii" else "svg")
    return EXIT_OK


def cmd_enumerate(args) -> int:
    s = _settings(args)
    boxes = parse_boxes(args.boxes) if args.boxes else []
    if args.sat:
        if not boxes:
            raise UsageError("--sat needs --boxes")
        solver = _solver(s, Path(s["out"]) / "work")
        keys, info = sat_census(
            boxes, BoardSpec(int(s["board"])), int(s["max_dist"]), solver, anchors=parse_anchors(s["anchors"])
        )
        for k in sorted(keys):
            print(k)
        print(f"# {len(keys)} shapes, {info['solves']} solves, {info['timeouts']} timeouts", file=sys.stderr)
        return EXIT_OK
    if args.area is None:
        raise UsageError("--area is required without --sat")
    area = args.area
    if boxes:
        keys = sorted(oracle_census(boxes, area))
    else:
        keys = list(enumerate_polyominoes(area))
    for k in keys:
        print(k)
    print(f"# {len(keys)} polyominoes", file=sys.stderr)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="boxfold", description="Search for polyominoes that fold into boxes in several ways.")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, *names):
        p.add_argument("--config", help="JSON file with default option values")
        if "boxes" in names:
            p.add_argument("--boxes", help="comma separated AxBxC sizes")
        if "board" in names:
            p.add_argument("--board", type=int, help="board side length")
            p.add_argument("--max-dist", dest="max_dist", type=int, help="pruning radius d")
            p.add_argument("--amo", choices=("pairwise", "sequential"))
            p.add_argument("--prune", choices=("manhattan", "reachable"))
            p.add_argument("--no-redundant", dest="no_redundant", action="store_true", default=None,
                           help="omit the redundant occupancy hint clauses")
        if "solver" in names:
            p.add_argument("--solver-cmd", dest="solver_cmd", help="solver command with a {cnf} placeholder")
            p.add_argument("--timeout", type=float, help="seconds per solver call")
        if "anchors" in names:
            p.add_argument("--anchors", help="'all' or flag tuples such as '0,5;0,7'")
        if "out" in names:
            p.add_argument("--out", help="output file or directory")
        if "format" in names:
            p.add_argument("--format", choices=FORMATS + ("text", "json"))

    p = sub.add_parser("encode", help="write the CNF for one anchor choice")
    common(p, "boxes", "board", "anchors", "out")
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("solve", help="run the solver on a CNF file and decode it")
    common(p, "solver")
    p.add_argument("cnf")
    p.add_argument("--map", help="variable map sidecar (default: <cnf>.map.json)")
    p.add_argument("--limit", type=int, help="enumerate up to this many models")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("campaign", help="solve one instance per anchor choice")
    common(p, "boxes", "board", "solver", "anchors", "out")
    p.add_argument("--jobs", type=int)
    p.add_argument("--limit", type=int, help="dispatch at most this many anchor choices")
    p.add_argument("--min-folds", dest="min_folds", help="per-box fold thresholds for storing, e.g. 2,1")
    p.add_argument("--stop-at-folds", dest="stop_at_folds", type=int)
    p.add_argument("--keep-cnf", dest="keep_cnf", action="store_true", default=None)
    p.set_defaults(func=cmd_campaign)

    p = sub.add_parser("count", help="count the ways a polyomino folds into boxes")
    common(p, "boxes", "format")
    p.add_argument("polyomino", help="file, '#'/'.' text with '/' row breaks, or canonical key")
    p.add_argument("--render-out", dest="render_out")
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("stats", help="summarise a result store")
    common(p, "out", "format")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("render", help="draw a stored record or a polyomino")
    common(p, "boxes", "out", "format")
    p.add_argument("--polyomino")
    p.add_argument("--key")
    p.add_argument("--index", type=int, default=0)
    p.add_argument("--render-out", dest="render_out")
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("enumerate", help="list free polyominoes or developments")
    common(p, "board", "solver", "anchors", "out")
    p.add_argument("--area", type=int)
    p.add_argument("--boxes")
    p.add_argument("--sat", action="store_true", help="use the SAT encoding instead of brute force")
    p.set_defaults(func=cmd_enumerate)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:  # usage errors and --help
        return exc.code
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    del args.verbose
    cmd = args.command
    del args.command
    try:
        return args.func(args)
    except (UsageError, EncodeError, FoldError, ValueError) as exc:
        print(f"boxfold {cmd}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (SolverError, OSError) as exc:
        print(f"boxfold {cmd}: solver error: {exc}", file=sys.stderr)
        return EXIT_SOLVER


if __name__ == "__main__":
    sys.exit(main())
