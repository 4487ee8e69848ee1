"""CNF clause store, DIMACS I/O and cardinality helpers."""
from __future__ import annotations

import io
from typing import IO, Iterable, Sequence


class CnfFormula:
    def __init__(self, num_vars: int = 0, clauses: Iterable[Sequence[int]] | None = None):
        self.num_vars = num_vars
        self.clauses: list[list[int]] = [list(c) for c in clauses] if clauses else []

    def new_var(self) -> int:
        self.num_vars += 1
        return self.num_vars

    def add(self, clause: Sequence[int]) -> None:
        if not clause:
            raise ValueError("refusing to add an empty clause")
        self.clauses.append(list(clause))

    def extend(self, clauses: Iterable[Sequence[int]]) -> None:
        for c in clauses:
            self.add(c)

    def __len__(self) -> int:
        return len(self.clauses)

    def copy(self) -> "CnfFormula":
        return CnfFormula(self.num_vars, self.clauses)

    def check(self) -> None:
        """Clause hygiene: literals in range, no repeated variable in one clause."""
        for c in self.clauses:
            if not c:
                raise ValueError("empty clause")
            vs = [abs(l) for l in c]
            if 0 in vs or max(vs) > self.num_vars:
                raise ValueError(f"literal out of range in clause {c}")
            if len(set(vs)) != len(vs):
                raise ValueError(f"repeated variable in clause {c}")

    def evaluate(self, model: Sequence[bool] | dict[int, bool]) -> bool:
        """True iff the model (indexed by variable) satisfies every clause."""
        return all(any(model[abs(l)] == (l > 0) for l in c) for c in self.clauses)

    def first_violated(self, model) -> list[int] | None:
        for c in self.clauses:
            if not any(model[abs(l)] == (l > 0) for l in c):
                return c
        return None

    def dimacs(self) -> str:
        buf = io.StringIO()
        write_dimacs(self, buf)
        return buf.getvalue()


def write_dimacs(f: CnfFormula, sink: IO) -> int:
    """Write ``f`` in DIMACS CNF; returns the number of bytes written.

    ``sink`` may be a text or binary stream.
    """
    lines = [f"p cnf {f.num_vars} {len(f.clauses)}\n"]
    lines.extend(" ".join(map(str, c)) + " 0\n" for c in f.clauses)
    text = "".join(lines)
    data = text.encode("ascii")
    if isinstance(sink, (io.RawIOBase, io.BufferedIOBase)) or "b" in getattr(sink, "mode", ""):
        sink.write(data)
    else:
        sink.write(text)
    return len(data)


def read_dimacs(source: str | IO) -> CnfFormula:
    text = source if isinstance(source, str) else source.read()
    if isinstance(text, bytes):
        text = text.decode("ascii")
    num_vars = num_clauses = None
    lits: list[int] = []
    clauses = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("c") or line.startswith("%"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise ValueError(f"bad DIMACS header: {line!r}")
            num_vars, num_clauses = int(parts[2]), int(parts[3])
            continue
        for tok in line.split():
            v = int(tok)
            if v == 0:
                clauses.append(lits)
                lits = []
            else:
                lits.append(v)
    if num_vars is None:
        raise ValueError("missing DIMACS header")
    if lits:
        clauses.append(lits)
    if len(clauses) != num_clauses:
        raise ValueError(f"header announces {num_clauses} clauses, found {len(clauses)}")
    return CnfFormula(num_vars, clauses)


def at_most_one(f: CnfFormula, lits: Sequence[int], method: str = "sequential", threshold: int = 30) -> None:
    """Add an at-most-one constraint.

    ``method`` is ``pairwise`` or ``sequential``; with ``sequential`` groups
    of at most ``threshold`` literals still use pairwise clauses.
    """
    n = len(lits)
    if n <= 1:
        return
    if method == "pairwise" or n <= threshold:
        for i in range(n):
            for j in range(i + 1, n):
                f.clauses.append([-lits[i], -lits[j]])
        return
    if method != "sequential":
        raise ValueError(f"unknown at-most-one encoding {method!r}")
    # Sinz sequential counter: s[i] <=> some of lits[0..i] is true
    s = [f.new_var() for _ in range(n - 1)]
    f.clauses.append([-lits[0], s[0]])
    for i in range(1, n - 1):
        f.clauses.append([-lits[i], s[i]])
        f.clauses.append([-s[i - 1], s[i]])
        f.clauses.append([-lits[i], -s[i - 1]])
    f.clauses.append([-lits[n - 1], -s[n - 2]])


def exactly_one(f: CnfFormula, lits: Sequence[int], method: str = "sequential", threshold: int = 30) -> None:
    f.add(list(lits))
    at_most_one(f, lits, method, threshold)
