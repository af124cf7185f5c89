"""Benchmark the compiled solver kernel against the pure-Python twin.

Usage: python benchmarks/bench_kernel.py [--quick]

Workloads: a real facet-path instance (structured UNSAT), a realized
positive control (structured SAT under assumptions), a pigeonhole
formula, and random 3-SAT near the phase transition.  Both kernels run
the same algorithm; the table shows what the C extension buys.
"""

import argparse
import random
import time

from polydiam.encoder import assume_chirotope, encode_instance
from polydiam.kernel import pykernel

try:
    from polydiam.kernel import _ckernel
except ImportError:
    _ckernel = None


def php(pigeons, holes):
    var = lambda i, j: i * holes + j + 1
    cl = [[var(i, j) for j in range(holes)] for i in range(pigeons)]
    for j in range(holes):
        for i1 in range(pigeons):
            for i2 in range(i1 + 1, pigeons):
                cl.append([-var(i1, j), -var(i2, j)])
    return pigeons * holes, cl


def random_3sat(nv, ratio, seed):
    rng = random.Random(seed)
    cl = []
    for _ in range(int(nv * ratio)):
        vs = rng.sample(range(1, nv + 1), 3)
        cl.append([v if rng.random() < 0.5 else -v for v in vs])
    return nv, cl


def control_instance():
    import sys

    sys.path.insert(0, "tests")
    from conftest import cyclic_control

    chi, path, t = cyclic_control(4, 10)
    cnf = encode_instance(path, 10)
    units = [[l] for l in assume_chirotope(cnf, chi)]
    return cnf.nvars, list(cnf.clauses) + units


def workloads(quick):
    from polydiam.paths import enumerate_all

    p = enumerate_all(4, 10, 6)[(1, 1)][0]
    cnf = encode_instance(p, 10)
    yield "(4,10,6) m=1 instance (UNSAT)", cnf.nvars, list(cnf.clauses)
    yield "(4,10) realized control (SAT)", *control_instance()
    yield "pigeonhole 7->6 (UNSAT)", *php(7, 6)
    if not quick:
        yield "random 3-SAT 140v r4.2", *random_3sat(140, 4.2, 11)


def run(cls, nvars, clauses):
    s = cls(nvars, clauses)
    t0 = time.time()
    verdict = s.solve()
    dt = time.time() - t0
    return verdict, dt, s.conflicts, s.propagations


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--quick", action="store_true", help="skip the slowest workload")
    args = ap.parse_args()

    impls = [("python", pykernel.CdclSolver)]
    if _ckernel is not None:
        impls.insert(0, ("c", _ckernel.CdclSolver))
    else:
        print("note: compiled kernel unavailable; benchmarking pure Python only")

    header = f"{'workload':<34} {'impl':<7} {'verdict':<8} {'time':>8} {'conflicts':>10} {'Mprops/s':>9}"
    print(header)
    print("-" * len(header))
    for name, nvars, clauses in workloads(args.quick):
        base = None
        for impl, cls in impls:
            verdict, dt, conflicts, props = run(cls, nvars, clauses)
            rate = props / dt / 1e6 if dt > 0 else float("inf")
            line = f"{name:<34} {impl:<7} {verdict:<8} {dt:>7.2f}s {conflicts:>10} {rate:>9.2f}"
            if base is None:
                base = dt
            else:
                line += f"   ({base and dt / base:.0f}x slower)" if base else ""
            print(line)


if __name__ == "__main__":
    main()
