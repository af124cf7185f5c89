"""polydiam-sat: DIMACS CNF solver, the bundled fallback backend.

Reads a DIMACS file (or stdin with "-"), prints the standard
"s SATISFIABLE"/"s UNSATISFIABLE" verdict line plus "v" model lines,
and exits 10/20/0 following solver-competition convention.
"""

from __future__ import annotations

import argparse
import sys
import time

from polydiam.encoder import read_dimacs
from polydiam.kernel import IMPL, CdclSolver


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(
        prog="polydiam-sat",
        description="CDCL solver for DIMACS CNF (bundled SAT backend).",
    )
    ap.add_argument("cnf", help="DIMACS CNF file, or - for stdin")
    ap.add_argument(
        "--conflict-budget",
        type=int,
        default=-1,
        help="give up after this many conflicts (-1 = unlimited)",
    )
    args = ap.parse_args(argv)

    t0 = time.time()
    if args.cnf == "-":
        nvars, clauses = read_dimacs(sys.stdin)
    else:
        with open(args.cnf, "rb") as f:
            nvars, clauses = read_dimacs(f)
    solver = CdclSolver(nvars, clauses)
    verdict = solver.solve(args.conflict_budget)
    print(
        f"c polydiam-sat kernel={IMPL} vars={nvars} clauses={len(clauses)} "
        f"conflicts={solver.conflicts} propagations={solver.propagations} "
        f"time={time.time() - t0:.3f}"
    )
    if verdict == "SAT":
        print("s SATISFIABLE")
        model = solver.model()
        for i in range(0, len(model), 20):
            print("v " + " ".join(map(str, model[i : i + 20])))
        print("v 0")
        return 10
    if verdict == "UNSAT":
        print("s UNSATISFIABLE")
        return 20
    print("s UNKNOWN")
    return 0


if __name__ == "__main__":
    sys.exit(main())
