"""Minimal command-line DIMACS solver backed by python-sat.

Usage: ``python -m boxfold.satcli [--solver NAME] [--dialect competition|bare] FILE``

Prints ``s SATISFIABLE`` / ``v ...`` lines (or the bare ``SAT`` / model
dialect) and exits 10 for SAT, 20 for UNSAT, as competition solvers do.
"""
from __future__ import annotations

import argparse
import sys


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(prog="boxfold-sat")
    ap.add_argument("cnf")
    ap.add_argument("--solver", default="cadical195")
    ap.add_argument("--dialect", choices=("competition", "bare"), default="competition")
    args = ap.parse_args(argv)

    from pysat.formula import CNF
    from pysat.solvers import Solver

    cnf = CNF(from_file=args.cnf)
    with Solver(name=args.solver, bootstrap_with=cnf.clauses) as s:
        sat = s.solve()
        model = s.get_model() if sat else None
    nv = cnf.nv
    out = sys.stdout
    if not sat:
        out.write("s UNSATISFIABLE\n" if args.dialect == "competition" else "UNSAT\n")
        return 20
    lits = {abs(l): l for l in model}
    full = [lits.get(v, -v) for v in range(1, nv + 1)]
    if args.dialect == "bare":
        out.write("SAT\n" + " ".join(map(str, full)) + " 0\n")
    else:
        out.write("s SATISFIABLE\n")
        for i in range(0, len(full), 20):
            out.write("v " + " ".join(map(str, full[i:i + 20])) + "\n")
        out.write("v 0\n")
    return 10


if __name__ == "__main__":
    sys.exit(main())
