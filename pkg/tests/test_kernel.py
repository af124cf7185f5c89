"""Kernel tests, parametrized over every available implementation."""

import itertools
import random

import pytest

import polydiam.kernel.pykernel as pyk

IMPLS = [("python", pyk.CdclSolver)]
try:
    from polydiam.kernel import _ckernel

    IMPLS.append(("c", _ckernel.CdclSolver))
except ImportError:
    pass


def brute_force(nv, clauses):
    for bits in itertools.product([False, True], repeat=nv):
        if all(any(bits[abs(l) - 1] == (l > 0) for l in c) for c in clauses):
            return "SAT"
    return "UNSAT"


def random_instance(rng):
    nv = rng.randint(3, 12)
    nc = rng.randint(2, int(nv * 4.5))
    return nv, [
        [rng.choice([1, -1]) * rng.randint(1, nv) for _ in range(rng.randint(1, 3))]
        for _ in range(nc)
    ]


def php(pigeons, holes):
    var = lambda i, j: i * holes + j + 1
    cl = [[var(i, j) for j in range(holes)] for i in range(pigeons)]
    for j in range(holes):
        for i1 in range(pigeons):
            for i2 in range(i1 + 1, pigeons):
                cl.append([-var(i1, j), -var(i2, j)])
    return pigeons * holes, cl


@pytest.mark.parametrize("name,solver_cls", IMPLS)
def test_random_instances_against_bruteforce(name, solver_cls):
    rng = random.Random(2024)
    for _ in range(200):
        nv, clauses = random_instance(rng)
        want = brute_force(nv, clauses)
        s = solver_cls(nv, clauses)
        got = s.solve()
        assert got == want, (nv, clauses)
        if got == "SAT":
            m = s.model()
            assert len(m) == nv
            assert all(any((m[abs(l) - 1] > 0) == (l > 0) for l in c) for c in clauses)


@pytest.mark.parametrize("name,solver_cls", IMPLS)
def test_pigeonhole_unsat(name, solver_cls):
    nv, cl = php(6, 5)
    assert solver_cls(nv, cl).solve() == "UNSAT"


@pytest.mark.parametrize("name,solver_cls", IMPLS)
def test_empty_and_trivial(name, solver_cls):
    assert solver_cls(0, []).solve() == "SAT"
    assert solver_cls(1, [[1], [-1]]).solve() == "UNSAT"
    s = solver_cls(2, [[1], [-1, 2]])
    assert s.solve() == "SAT"
    assert s.model() == [1, 2]


@pytest.mark.parametrize("name,solver_cls", IMPLS)
def test_conflict_budget_unknown(name, solver_cls):
    nv, cl = php(8, 7)
    s = solver_cls(nv, cl)
    assert s.solve(conflict_budget=10) == "UNKNOWN"
    # solvable when resumed without budget
    assert s.solve() == "UNSAT"


@pytest.mark.parametrize("name,solver_cls", IMPLS)
def test_propagate_under(name, solver_cls):
    s = solver_cls(4, [[1, 2], [-1, 3], [-2, -4]])
    ok, implied = s.propagate_under([-2])
    assert ok and sorted(implied) == [-2, 1, 3]
    ok, implied = s.propagate_under([2, 4])
    assert not ok
    # state restored: still solvable
    assert s.solve() == "SAT"


def naive_propagate(nv, clauses, lits):
    assign = {l: True for l in lits}
    for l in lits:
        if -l in assign:
            return False, []
    changed = True
    while changed:
        changed = False
        for c in clauses:
            if any(assign.get(l) for l in c):
                continue
            free = sorted({l for l in c if -l not in assign})
            if not free:
                return False, []
            if len(free) == 1:
                assign[free[0]] = True
                changed = True
    return True, sorted(assign)


@pytest.mark.parametrize("name,solver_cls", IMPLS)
def test_propagate_under_matches_naive(name, solver_cls):
    rng = random.Random(7)
    for _ in range(120):
        nv, clauses = random_instance(rng)
        # keep root-level units out so the naive version sees the same state
        clauses = [c for c in clauses if len(c) > 1]
        lits = [rng.choice([1, -1]) * rng.randint(1, nv)]
        ok1, imp1 = solver_cls(nv, clauses).propagate_under(lits)
        ok2, imp2 = naive_propagate(nv, clauses, lits)
        assert ok1 == ok2
        if ok1:
            assert sorted(imp1) == imp2


@pytest.mark.skipif(len(IMPLS) < 2, reason="compiled kernel unavailable")
def test_impls_agree_on_verdicts():
    rng = random.Random(99)
    for _ in range(100):
        nv, clauses = random_instance(rng)
        verdicts = {cls(nv, clauses).solve() for _, cls in IMPLS}
        assert len(verdicts) == 1
