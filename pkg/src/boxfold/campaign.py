"""Anchor-pair search campaigns, the JSONL result store and census runs."""
from __future__ import annotations

import json
import logging
import os
import uuid
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Callable, Iterable, Sequence

from .cnf import write_dimacs
from .decode import decode
from .encoder import (
    BoardSpec,
    EncodeConfig,
    anchor_pairs,
    blocking_clause,
    congruent_placements,
    encode,
)
from .folding import count_foldings
from .geometry import BoxSpec
from .polyomino import canonical_form, from_text, to_text
from .solver import ERROR, SAT, TIMEOUT, UNSAT, SolverConfig, SolverError, check_model, solve

log = logging.getLogger(__name__)

STORE_NAME = "results.jsonl"
JOBS_NAME = "jobs.jsonl"


@dataclass
class ResultRecord:
    key: str
    polyomino: str
    boxes: list[list[int]]
    folds: list[int]
    anchors: list[int]
    solver_seconds: float
    timestamp: str
    instance: str

    def to_line(self) -> str:
        return json.dumps(asdict(self), sort_keys=True)

    @classmethod
    def from_line(cls, line: str) -> "ResultRecord":
        d = json.loads(line)
        rec = cls(**d)
        rec.validate()
        return rec

    def validate(self) -> None:
        if canonical_form(from_text(self.polyomino)) != self.key:
            raise ValueError(f"record {self.instance}: key does not match polyomino text")
        if len(self.folds) != len(self.boxes):
            raise ValueError(f"record {self.instance}: one fold count per box expected")


class ResultStore:
    """Append-only JSONL file; one writer per store."""

    def __init__(self, path: Path | str):
        self.path = Path(path)
        self.path.parent.mkdir(parents=True, exist_ok=True)

    def append(self, rec: ResultRecord) -> None:
        with open(self.path, "a", encoding="utf-8") as fh:
            fh.write(rec.to_line() + "\n")
            fh.flush()
            os.fsync(fh.fileno())

    def read(self) -> tuple[list[ResultRecord], int]:
        """All well-formed records and the number of corrupt lines skipped."""
        if not self.path.exists():
            return [], 0
        recs, bad = [], 0
        with open(self.path, encoding="utf-8") as fh:
            for n, line in enumerate(fh, 1):
                if not line.strip():
                    continue
                try:
                    recs.append(ResultRecord.from_line(line))
                except (ValueError, TypeError, KeyError) as exc:
                    bad += 1
                    log.warning("%s:%d: skipping corrupt record (%s)", self.path, n, exc)
        return recs, bad

    def keys(self) -> set[str]:
        return {r.key for r in self.read()[0]}


@dataclass
class CampaignConfig:
    encode: EncodeConfig
    solver: SolverConfig
    out: Path
    anchors: list[tuple[int, ...]] | None = None  # None: all admissible pairs
    max_pairs: int | None = None
    jobs: int = 1
    min_folds: list[int] | None = None  # per box; records below are not stored
    stop_at_folds: int | None = None  # stop once any box reaches this many ways
    keep_cnf: bool = False

    def __post_init__(self):
        self.out = Path(self.out)
        if self.jobs < 1:
            raise ValueError("need at least one worker")
        self.encode.validate()
        if self.min_folds is None:
            self.min_folds = [1] * len(self.encode.boxes)
        if len(self.min_folds) != len(self.encode.boxes) or min(self.min_folds) < 1:
            raise ValueError("min_folds needs one threshold >= 1 per box")

    def anchor_list(self) -> list[tuple[int, ...]]:
        pairs = self.anchors if self.anchors is not None else anchor_pairs(self.encode.boxes)
        pairs = [tuple(p) for p in pairs]
        if self.max_pairs is not None:
            pairs = pairs[: self.max_pairs]
        return pairs


@dataclass
class CampaignSummary:
    jobs: int = 0
    sat: int = 0
    unsat: int = 0
    timeout: int = 0
    error: int = 0
    skipped: int = 0
    new_keys: int = 0
    best_folds: list[int] = field(default_factory=list)
    stopped_early: bool = False

    def to_json(self) -> dict:
        return asdict(self)


def _now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


def instance_id(boxes: Sequence[BoxSpec], anchors: Sequence[int]) -> str:
    return "_".join(str(b) for b in boxes) + "__" + "-".join(str(a) for a in anchors)


def run_instance(enc: EncodeConfig, anchors: Sequence[int], solver: SolverConfig, keep_cnf=False) -> dict:
    """Encode, solve and analyse one anchor choice.  Runs inside workers."""
    cfg = EncodeConfig(**{**enc.__dict__, "anchors": list(anchors)})
    iid = instance_id(cfg.boxes, anchors)
    wd = Path(solver.workdir or ".")
    wd.mkdir(parents=True, exist_ok=True)
    path = wd / f"{iid}.cnf"
    out = {"instance": iid, "anchors": list(anchors), "status": ERROR, "seconds": 0.0}
    try:
        formula, vm = encode(cfg)
        with open(path, "wb") as fh:
            write_dimacs(formula, fh)
        verdict = solve(path, solver)
        out.update(status=verdict.status, seconds=round(verdict.elapsed, 3), message=verdict.message)
        if verdict.status == SAT:
            check_model(formula, verdict.model)
            decoded = decode(verdict.model, vm)
            cells = decoded[0].polyomino.cells
            out["polyomino"] = to_text(cells)
            out["key"] = canonical_form(cells)
            out["folds"] = [count_foldings(cells, b)[0] for b in cfg.boxes]
    except Exception as exc:  # contained: one bad job never stops a campaign
        out.update(status=ERROR, message=f"{type(exc).__name__}: {exc}")
    finally:
        if not keep_cnf and path.exists():
            path.unlink()
    return out


def _done_instances(jobs_path: Path) -> dict[str, list[int] | None]:
    """Finished instance ids mapped to their fold counts (None unless SAT)."""
    done = {}
    if jobs_path.exists():
        for line in jobs_path.read_text().splitlines():
            try:
                entry = json.loads(line)
                done[entry["instance"]] = entry.get("folds")
            except (ValueError, KeyError, TypeError):
                continue
    return done


def run_campaign(cfg: CampaignConfig, progress: Callable[[dict], None] | None = None) -> CampaignSummary:
    """Dispatch one job per anchor choice; resumable via ``jobs.jsonl``."""
    cfg.out.mkdir(parents=True, exist_ok=True)
    store = ResultStore(cfg.out / STORE_NAME)
    jobs_path = cfg.out / JOBS_NAME
    known = store.keys()
    done = _done_instances(jobs_path)
    solver = SolverConfig(cfg.solver.command, cfg.solver.timeout, cfg.solver.workdir or cfg.out / "work")
    (cfg.out / "config.json").write_text(
        json.dumps({"encode": cfg.encode.to_json(), "solver": solver.command, "timeout": solver.timeout}, indent=2)
    )
    summary = CampaignSummary(best_folds=[0] * len(cfg.encode.boxes))
    todo = []
    for anchors in cfg.anchor_list():
        iid = instance_id(cfg.encode.boxes, anchors)
        if iid in done:
            summary.skipped += 1
            if done[iid]:
                summary.best_folds = [max(a, b) for a, b in zip(summary.best_folds, done[iid])]
        else:
            todo.append(anchors)
    if cfg.stop_at_folds is not None and max(summary.best_folds, default=0) >= cfg.stop_at_folds:
        summary.stopped_early = True
        return summary

    def handle(res: dict) -> bool:
        summary.jobs += 1
        st = res["status"]
        if st == SAT:
            summary.sat += 1
        elif st == UNSAT:
            summary.unsat += 1
        elif st == TIMEOUT:
            summary.timeout += 1
        else:
            summary.error += 1
            log.warning("instance %s failed: %s", res["instance"], res.get("message"))
        with open(jobs_path, "a") as fh:
            fh.write(json.dumps({k: res.get(k) for k in ("instance", "anchors", "status", "seconds", "key", "folds")}) + "\n")
        if progress:
            progress(res)
        if st != SAT:
            return False
        folds = res["folds"]
        summary.best_folds = [max(a, b) for a, b in zip(summary.best_folds, folds)]
        if all(f >= m for f, m in zip(folds, cfg.min_folds)):
            rec = ResultRecord(
                key=res["key"],
                polyomino=res["polyomino"],
                boxes=[list(b.dims) for b in cfg.encode.boxes],
                folds=folds,
                anchors=res["anchors"],
                solver_seconds=res["seconds"],
                timestamp=_now(),
                instance=res["instance"],
            )
            store.append(rec)
            if rec.key not in known:
                known.add(rec.key)
                summary.new_keys += 1
        return cfg.stop_at_folds is not None and max(folds) >= cfg.stop_at_folds

    if cfg.jobs == 1:
        for anchors in todo:
            if handle(run_instance(cfg.encode, anchors, solver, cfg.keep_cnf)):
                summary.stopped_early = True
                break
        return summary

    with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
        futures = [pool.submit(run_instance, cfg.encode, a, solver, cfg.keep_cnf) for a in todo]
        for fut in as_completed(futures):
            if handle(fut.result()):
                summary.stopped_early = True
                for other in futures:
                    other.cancel()
                break
    return summary


def stats(store: ResultStore) -> dict:
    """Group records by (boxes, fold signature): raw hits and distinct shapes."""
    recs, bad = store.read()
    groups: dict[tuple, dict] = {}
    for r in recs:
        boxes = tuple(tuple(b) for b in r.boxes)
        order = sorted(range(len(boxes)), key=lambda i: boxes[i])
        sig = (tuple(boxes[i] for i in order), tuple(r.folds[i] for i in order))
        g = groups.setdefault(sig, {"raw": 0, "keys": set()})
        g["raw"] += 1
        g["keys"].add(r.key)
    rows = [
        {
            "boxes": ["x".join(map(str, b)) for b in sig[0]],
            "folds": list(sig[1]),
            "raw": g["raw"],
            "distinct": len(g["keys"]),
        }
        for sig, g in sorted(groups.items())
    ]
    return {"rows": rows, "records": len(recs), "corrupt": bad}


def format_stats(table: dict) -> str:
    rows = table["rows"]
    if not rows:
        body = []
    else:
        labels = [
            " + ".join(f"{b} in {n} way{'s' if n != 1 else ''}" for b, n in zip(r["boxes"], r["folds"]))
            for r in rows
        ]
        w = max(len(s) for s in labels)
        body = [f"{lab:<{w}}  {r['raw']} ({r['distinct']})" for lab, r in zip(labels, rows)]
    footer = f"# records: {table['records']}, corrupt lines skipped: {table['corrupt']}"
    return "\n".join(body + [footer]) + "\n"


def sat_census(
    boxes: Sequence[BoxSpec],
    board: BoardSpec,
    max_distance: int,
    solver: SolverConfig,
    anchors: Iterable[tuple[int, ...]] | None = None,
    on_shape: Callable[[str, frozenset], None] | None = None,
    checkpoint: Path | str | None = None,
    **encode_opts,
) -> tuple[set[str], dict]:
    """Every shape the encoding admits, over all anchor choices.

    Each instance is enumerated to exhaustion; each found shape is blocked in
    all congruent placements, and blocks carry over to later instances.
    With ``checkpoint`` (JSONL), found shapes and finished anchors are
    appended as they happen and reloaded on the next call.
    Returns canonical keys and run info (per-status instance counts).
    """
    boxes = [b if isinstance(b, BoxSpec) else BoxSpec(*b) for b in boxes]
    anchors = [tuple(a) for a in anchors] if anchors is not None else anchor_pairs(boxes)
    found: dict[str, frozenset] = {}
    done: set[tuple[int, ...]] = set()
    ck = Path(checkpoint) if checkpoint else None
    if ck and ck.exists():
        for line in ck.read_text().splitlines():
            try:
                entry = json.loads(line)
            except ValueError:
                continue
            if "key" in entry:
                found[entry["key"]] = from_text(entry["polyomino"])
            elif "anchor_done" in entry:
                done.add(tuple(entry["anchor_done"]))

    def note(entry: dict) -> None:
        if ck:
            with open(ck, "a") as fh:
                fh.write(json.dumps(entry) + "\n")

    info = {"instances": 0, "solves": 0, "timeouts": 0, "seconds": 0.0}
    wd = Path(solver.workdir or ".")
    wd.mkdir(parents=True, exist_ok=True)
    for anchor in anchors:
        if anchor in done:
            continue
        cfg = EncodeConfig(list(boxes), board, max_distance, list(anchor), **encode_opts)
        formula, vm = encode(cfg)
        for cells in found.values():
            for placed in congruent_placements(vm, cells):
                formula.clauses.append(blocking_clause(vm, placed))
        info["instances"] += 1
        path = wd / f"census_{uuid.uuid4().hex[:8]}.cnf"
        complete = False
        try:
            while True:
                with open(path, "wb") as fh:
                    write_dimacs(formula, fh)
                verdict = solve(path, solver)
                info["solves"] += 1
                info["seconds"] += verdict.elapsed
                if verdict.status == ERROR:
                    raise SolverError(verdict.message)
                if verdict.status == TIMEOUT:
                    info["timeouts"] += 1
                    break
                if verdict.status == UNSAT:
                    complete = True
                    break
                check_model(formula, verdict.model)
                decoded = decode(verdict.model, vm)
                cells = decoded[0].polyomino.cells
                key = canonical_form(cells)
                found[key] = cells
                note({"key": key, "polyomino": to_text(cells), "anchor": list(anchor)})
                if on_shape:
                    on_shape(key, cells)
                for placed in congruent_placements(vm, cells):
                    formula.clauses.append(blocking_clause(vm, placed))
        finally:
            if path.exists():
                path.unlink()
        if complete:
            note({"anchor_done": list(anchor)})
    return set(found), info


def oracle_census(boxes: Sequence[BoxSpec], area: int) -> set[str]:
    """Free polyominoes of ``area`` folding onto every box (brute force)."""
    from .polyomino import enumerate_polyominoes, from_key

    out = set()
    for key in enumerate_polyominoes(area):
        cells = from_key(key)
        if all(count_foldings(cells, b)[0] for b in boxes):
            out.add(key)
    return out
