"""Run an external DIMACS SAT solver and read back its verdict."""
from __future__ import annotations

import logging
import os
import shlex
import signal
import subprocess
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator, Sequence

from .cnf import CnfFormula, write_dimacs
from .encoder import VarMap, blocking_clause, congruent_placements

log = logging.getLogger(__name__)

SAT, UNSAT, TIMEOUT, ERROR = "SAT", "UNSAT", "TIMEOUT", "ERROR"
PLACEHOLDER = "{cnf}"
DEFAULT_TIMEOUT = 10_000.0


class SolverError(RuntimeError):
    pass


def bundled_solver_command() -> list[str]:
    """Command for the python-sat backed solver shipped with this package."""
    return [sys.executable, "-m", "boxfold.satcli", PLACEHOLDER]


@dataclass
class SolverConfig:
    command: Sequence[str] | str
    timeout: float = DEFAULT_TIMEOUT
    workdir: Path | str | None = None

    def __post_init__(self):
        if isinstance(self.command, str):
            self.command = shlex.split(self.command)
        self.command = list(self.command)
        hits = sum(arg.count(PLACEHOLDER) for arg in self.command)
        if hits != 1:
            raise ValueError(f"solver command needs exactly one {PLACEHOLDER} placeholder, found {hits}")
        if not self.timeout > 0:
            raise ValueError("timeout must be positive")
        if self.workdir is not None:
            self.workdir = Path(self.workdir)

    def argv(self, cnf_path: Path | str) -> list[str]:
        return [a.replace(PLACEHOLDER, str(cnf_path)) for a in self.command]


@dataclass
class SolverVerdict:
    status: str
    model: list[bool] | None = None  # index 0 unused
    elapsed: float = 0.0
    log_path: Path | None = None
    message: str = ""

    @property
    def is_sat(self) -> bool:
        return self.status == SAT


def _header_vars(path: Path) -> int:
    with open(path, "rb") as fh:
        for raw in fh:
            line = raw.strip()
            if line.startswith(b"p"):
                return int(line.split()[2])
    raise SolverError(f"{path}: no DIMACS header")


def parse_output(text: str, num_vars: int) -> tuple[str, list[bool] | None, str]:
    """Parse solver stdout in either dialect.

    Competition style: ``s SATISFIABLE`` then ``v`` lines.  Bare style: a line
    ``SAT`` (or ``UNSAT``) followed by literal lines ending in ``0``.
    Returns ``(status, model, message)``.
    """
    status = None
    lits: list[int] = []
    in_bare_model = False
    for raw in text.splitlines():
        line = raw.strip()
        if not line:
            continue
        head = line.split()[0]
        if head == "s":
            word = line[1:].strip().upper()
            if word == "SATISFIABLE":
                status = SAT
            elif word == "UNSATISFIABLE":
                status = UNSAT
            else:
                status = status or "UNKNOWN"
        elif head == "v":
            lits.extend(int(t) for t in line.split()[1:])
        elif line.upper() in ("SAT", "SATISFIABLE"):
            status, in_bare_model = SAT, True
        elif line.upper() in ("UNSAT", "UNSATISFIABLE"):
            status = UNSAT
        elif in_bare_model and head.lstrip("-").isdigit():
            lits.extend(int(t) for t in line.split())
        elif head == "c":
            continue
    if status is None or status == "UNKNOWN":
        return ERROR, None, "no recognizable verdict in solver output"
    if status == UNSAT:
        return UNSAT, None, ""
    model: list[bool | None] = [None] * (num_vars + 1)
    model[0] = False
    for l in lits:
        if l == 0:
            continue
        v = abs(l)
        if v > num_vars:
            return ERROR, None, f"model mentions variable {v} beyond header count {num_vars}"
        if model[v] is not None and model[v] != (l > 0):
            return ERROR, None, f"variable {v} assigned both ways"
        model[v] = l > 0
    # variables the solver leaves out are unconstrained; pick false
    return SAT, [bool(x) for x in model], ""


def solve(cnf_path: Path | str, cfg: SolverConfig) -> SolverVerdict:
    cnf_path = Path(cnf_path)
    if not cnf_path.exists():
        raise FileNotFoundError(cnf_path)
    num_vars = _header_vars(cnf_path)
    workdir = Path(cfg.workdir) if cfg.workdir else cnf_path.parent
    workdir.mkdir(parents=True, exist_ok=True)
    log_path = workdir / (cnf_path.stem + ".log")
    argv = cfg.argv(cnf_path)
    start = time.monotonic()
    try:
        proc = subprocess.Popen(
            argv,
            stdout=subprocess.PIPE,
            stderr=subprocess.STDOUT,
            text=True,
            cwd=workdir,
            start_new_session=True,
        )
    except OSError as exc:
        return SolverVerdict(ERROR, elapsed=0.0, message=f"cannot start solver: {exc}")
    try:
        out, _ = proc.communicate(timeout=cfg.timeout)
    except subprocess.TimeoutExpired:
        try:
            os.killpg(proc.pid, signal.SIGKILL)
        except ProcessLookupError:
            pass
        out, _ = proc.communicate()
        elapsed = time.monotonic() - start
        log_path.write_text(out or "")
        return SolverVerdict(TIMEOUT, elapsed=elapsed, log_path=log_path, message="timed out")
    elapsed = time.monotonic() - start
    log_path.write_text(out)
    status, model, msg = parse_output(out, num_vars)
    if status == ERROR:
        msg = f"{msg} (exit code {proc.returncode})"
        log.warning("solver error on %s: %s", cnf_path, msg)
    return SolverVerdict(status, model, elapsed, log_path, msg)


@dataclass
class ModelEnumeration:
    """Solve, block, repeat.  Iterate for ``(model, verdict)`` pairs.

    After iteration ``final_status`` is UNSAT when the enumeration is
    complete, TIMEOUT when cut short by the solver budget, and SAT when the
    limit was reached.
    """

    cnf: CnfFormula
    varmap: VarMap
    cfg: SolverConfig
    limit: int | None = None
    # block every congruent placement of each found shape, not just the
    # exact occupancy; yields one model per shape per instance
    block_congruent: bool = False
    name: str = "enum"
    final_status: str | None = None
    elapsed: float = 0.0
    found: list[frozenset] = field(default_factory=list)

    def __iter__(self) -> Iterator[tuple[list[bool], SolverVerdict]]:
        if self.limit is not None and self.limit < 1:
            raise ValueError("limit must be >= 1")
        work = self.cnf.copy()
        wd = Path(self.cfg.workdir or ".")
        wd.mkdir(parents=True, exist_ok=True)
        path = wd / f"{self.name}.cnf"
        while True:
            with open(path, "wb") as fh:
                write_dimacs(work, fh)
            verdict = solve(path, self.cfg)
            self.elapsed += verdict.elapsed
            if verdict.status == ERROR:
                self.final_status = ERROR
                raise SolverError(verdict.message)
            if verdict.status != SAT:
                self.final_status = verdict.status
                return
            occ = self.varmap.occupied(verdict.model)
            self.found.append(occ)
            yield verdict.model, verdict
            if self.limit is not None and len(self.found) >= self.limit:
                self.final_status = SAT
                return
            blocked = congruent_placements(self.varmap, occ) if self.block_congruent else [occ]
            for cells in blocked:
                work.clauses.append(blocking_clause(self.varmap, cells))


def enumerate_models(cnf, varmap, cfg, limit=None, **kw) -> ModelEnumeration:
    return ModelEnumeration(cnf, varmap, cfg, limit, **kw)


def check_model(cnf: CnfFormula, model: Sequence[bool]) -> None:
    bad = cnf.first_violated(model)
    if bad is not None:
        raise SolverError(f"solver model violates clause {bad}")
