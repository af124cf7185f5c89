"""External SAT backend harness, model verification, and cube splitting.

Every solve runs the backend as a child process on a DIMACS file with a
wall-clock timeout enforced by killing the process; verdicts are parsed
from output, never from exit codes.  A claimed SAT is only accepted
after independent model verification.
"""

from __future__ import annotations

import os
import shlex
import shutil
import subprocess
import sys
import tempfile
import time
import warnings
from dataclasses import dataclass, field
from typing import Sequence

from polydiam.chirotope import Chirotope, check_gp, facet_distance, facets_of
from polydiam.encoder import CnfFormula, write_dimacs
from polydiam.kernel import CdclSolver

__all__ = [
    "SolverConfig",
    "SolveResult",
    "SplitNode",
    "SplitStateError",
    "discover_backend",
    "solve",
    "verify_model",
    "split",
    "resplit",
]

_WELL_KNOWN_SOLVERS = ("minisat", "cadical", "kissat", "glucose", "cryptominisat5")


def discover_backend() -> list[str]:
    """POLYDIAM_SOLVER, then well-known solvers on PATH, then the bundled
    polydiam-sat backend."""
    env = os.environ.get("POLYDIAM_SOLVER")
    if env:
        return shlex.split(env)
    for name in _WELL_KNOWN_SOLVERS:
        path = shutil.which(name)
        if path:
            return [path]
    return [sys.executable, "-m", "polydiam.satbackend"]


@dataclass
class SolverConfig:
    backend: str | Sequence[str] | None = None
    flags: tuple[str, ...] = ()
    timeout: float = 3600.0
    memory_mb: int | None = None
    seed: int | None = None

    def __post_init__(self):
        if self.timeout <= 0:
            raise ValueError("timeout must be positive")

    def command(self) -> list[str]:
        if self.backend is None:
            base = discover_backend()
        elif isinstance(self.backend, str):
            base = [self.backend]
        else:
            base = list(self.backend)
        return base + list(self.flags)


@dataclass
class SolveResult:
    verdict: str  # SAT | UNSAT | TIMEOUT | ERROR
    model: list[int] | None
    wall_time: float
    backend: str
    instance_digest: str
    detail: str = ""

    def __post_init__(self):
        assert (self.model is not None) == (self.verdict == "SAT")


def _set_limits(memory_mb):
    if memory_mb is None:
        return None

    def preexec():
        import resource

        limit = memory_mb * 1024 * 1024
        resource.setrlimit(resource.RLIMIT_AS, (limit, limit))

    return preexec


def _parse_output(text: str):
    """(verdict word or None, model literals). Tolerates bare
    SATISFIABLE/UNSATISFIABLE lines (classic MiniSat)."""
    verdict = None
    model: list[int] = []
    for line in text.splitlines():
        line = line.strip()
        if not line:
            continue
        if line.startswith("s "):
            word = line[2:].strip()
            if word in ("SATISFIABLE", "UNSATISFIABLE", "UNKNOWN"):
                verdict = word
        elif line in ("SATISFIABLE", "UNSATISFIABLE", "UNKNOWN") and verdict is None:
            verdict = line
        elif line.startswith("v ") or line == "v":
            for tok in line[1:].split():
                lit = int(tok)
                if lit != 0:
                    model.append(lit)
    return verdict, model


def solve(
    cnf: CnfFormula,
    config: SolverConfig | None = None,
    assumptions: Sequence[int] = (),
) -> SolveResult:
    """Run the backend on cnf plus assumption unit clauses.

    TIMEOUT is enforced by killing the child at config.timeout seconds.
    A SAT claim is re-verified with verify_model before being accepted;
    verification failure or unparsable output yields ERROR.
    """
    config = config or SolverConfig()
    cmd = config.command()
    digest = cnf.digest()
    backend_id = " ".join(cmd)
    with tempfile.NamedTemporaryFile(
        mode="wb", suffix=".cnf", prefix="polydiam-", delete=False
    ) as f:
        path = f.name
        write_dimacs(cnf, f, extra_units=assumptions)
    t0 = time.time()
    try:
        proc = subprocess.Popen(
            cmd + [path],
            stdout=subprocess.PIPE,
            stderr=subprocess.STDOUT,
            text=True,
            preexec_fn=_set_limits(config.memory_mb),
        )
        try:
            out, _ = proc.communicate(timeout=config.timeout)
        except subprocess.TimeoutExpired:
            proc.kill()
            proc.communicate()
            return SolveResult("TIMEOUT", None, time.time() - t0, backend_id, digest)
        except BaseException:
            proc.kill()
            raise
    except OSError as e:
        return SolveResult(
            "ERROR", None, time.time() - t0, backend_id, digest, detail=str(e)
        )
    finally:
        try:
            os.unlink(path)
        except OSError:
            pass
    wall = time.time() - t0
    verdict, model = _parse_output(out)
    if verdict == "UNSATISFIABLE":
        return SolveResult("UNSAT", None, wall, backend_id, digest)
    if verdict == "SATISFIABLE":
        if not model:
            return SolveResult(
                "ERROR", None, wall, backend_id, digest, detail="SAT claim without v lines"
            )
        full = _complete_model(cnf.nvars, model)
        joint = list(cnf.clauses) + [(l,) for l in assumptions]
        shadow = CnfFormula(cnf.nvars, joint, cnf.varmap, meta=cnf.meta)
        if not verify_model(shadow, full):
            return SolveResult(
                "ERROR", None, wall, backend_id, digest,
                detail="backend model failed independent verification",
            )
        return SolveResult("SAT", full, wall, backend_id, digest)
    if verdict == "UNKNOWN":
        return SolveResult(
            "ERROR", None, wall, backend_id, digest, detail="backend gave up (UNKNOWN)"
        )
    tail = "\n".join(out.splitlines()[-5:])
    return SolveResult(
        "ERROR", None, wall, backend_id, digest,
        detail=f"no verdict in backend output; tail:\n{tail}",
    )


def _complete_model(nvars: int, lits: Sequence[int]) -> list[int]:
    seen = {}
    for l in lits:
        seen[abs(l)] = l
    return [seen.get(v, -v) for v in range(1, nvars + 1)]


def verify_model(cnf: CnfFormula, model: Sequence[int]) -> bool:
    """Independent acceptance check for a claimed model.

    Checks every clause, then (when the formula carries a variable map)
    that the decoded sign vector is a genuine chirotope, that the facet
    variables agree with the decoded chirotope's facet set, and that the
    decoded end facets sit at least the required distance apart.
    """
    truth = [False] * (cnf.nvars + 1)
    for l in model:
        v = abs(l)
        if v > cnf.nvars:
            return False
        truth[v] = l > 0
    for clause in cnf.clauses:
        if not any(truth[abs(l)] == (l > 0) for l in clause):
            return False
    vm = cnf.varmap
    if vm is None:
        return True
    signs = [1 if truth[vm.sign_var(b)] else -1 for b in range(vm.n_bases)]
    chi = Chirotope(vm.basis_ix, signs)
    if not check_gp(chi):
        return False
    true_facets = facets_of(chi)
    decoded = {
        vm.subset_ix.unrank(s)
        for s in range(vm.n_subsets)
        if truth[vm.facet_var(s)]
    }
    if decoded != true_facets:
        return False
    meta = cnf.meta or {}
    if meta.get("facets"):
        fa = tuple(meta["facets"][0])
        fb = tuple(meta["facets"][-1])
        if facet_distance(true_facets, fa, fb) < meta.get("min_distance", 0):
            return False
    return True


# ----------------------------------------------------------------- split


class SplitStateError(RuntimeError):
    """Raised when resplitting a node that is already resolved."""


@dataclass
class SplitNode:
    cube: tuple[int, ...]
    depth: int
    implied: tuple[int, ...]
    verdict: str | None = field(default=None, compare=False)


def _order_sign_vars(cnf: CnfFormula, order) -> list[int]:
    nb = cnf.varmap.n_bases if cnf.varmap is not None else cnf.nvars
    if callable(order):
        return list(order(cnf))
    if order == "index":
        return list(range(1, nb + 1))
    if order == "occurrence":
        counts = [0] * (nb + 1)
        for clause in cnf.clauses:
            for l in clause:
                v = abs(l)
                if v <= nb:
                    counts[v] += 1
        return sorted(range(1, nb + 1), key=lambda v: (-counts[v], v))
    raise ValueError(f"unknown order policy {order!r}")


def _split_tree(
    eng: CdclSolver,
    order_vars: list[int],
    base_cube: tuple[int, ...],
    base_depth: int,
    target_depth: int,
) -> list[SplitNode]:
    leaves: list[SplitNode] = []
    capped = False

    def rec(cube: tuple[int, ...], depth: int):
        nonlocal capped
        ok, implied = eng.propagate_under(list(cube))
        if not ok:
            return  # refuted by propagation: branch pruned
        if depth >= target_depth:
            leaves.append(SplitNode(cube, depth, tuple(implied)))
            return
        assigned = {abs(l) for l in implied}
        v = next((u for u in order_vars if u not in assigned), None)
        if v is None:
            if not capped:
                capped = True
                warnings.warn(
                    "split depth exceeds unfixed sign variables; capping",
                    stacklevel=3,
                )
            leaves.append(SplitNode(cube, depth, tuple(implied)))
            return
        rec(cube + (v,), depth + 1)
        rec(cube + (-v,), depth + 1)

    rec(base_cube, base_depth)
    return leaves


def split(cnf: CnfFormula, depth: int, order="occurrence") -> list[SplitNode]:
    """Leaves of a binary backtracking tree over the first `depth` sign
    decisions, with unit propagation pruning refuted branches.

    The default order fixes the most clause-occurring sign variables
    first; positive branch explored before negative.  Deterministic.
    """
    if depth < 1:
        raise ValueError("depth must be >= 1")
    eng = CdclSolver(cnf.nvars, cnf.clauses)
    return _split_tree(eng, _order_sign_vars(cnf, order), (), 0, depth)


def resplit(
    node: SplitNode, cnf: CnfFormula, additional_depth: int, order="occurrence"
) -> list[SplitNode]:
    """Partition an unresolved node's cube-extension space one or more
    levels deeper; the children replace the node in any work ledger."""
    if node.verdict in ("SAT", "UNSAT"):
        raise SplitStateError(f"node {node.cube} already resolved: {node.verdict}")
    if additional_depth < 1:
        raise ValueError("additional_depth must be >= 1")
    eng = CdclSolver(cnf.nvars, cnf.clauses)
    return _split_tree(
        eng,
        _order_sign_vars(cnf, order),
        node.cube,
        node.depth,
        node.depth + additional_depth,
    )
