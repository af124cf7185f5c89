"""CNF encoding: a facet-path plus (d, n) becomes a formula satisfiable
exactly when some uniform chirotope carries the path on its boundary as
a shortest facet-path.

Variable layout (dense, deterministic for fixed (d, n, layer count)):
  sign block   1 .. B               chi(basis) = +1      (B = C(n, d+1))
  facet block  B+1 .. B+F           "S is a facet"       (F = C(n, d))
  layer block  .. + k*F             "S reachable from F_0 within t steps"
  aux block    3 per sign-constraint triple, then 2 per facet subset
"""

from __future__ import annotations

import hashlib
import io
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

from polydiam.chirotope import BasisIndexer, Chirotope, gp_triples
from polydiam.paths import PathClass, PathType, classify

__all__ = [
    "VarMap",
    "CnfFormula",
    "encode_gp_axioms",
    "encode_facet_definitions",
    "encode_path",
    "encode_min_distance",
    "encode_instance",
    "assume_chirotope",
    "write_dimacs",
    "read_dimacs",
]


class VarMap:
    """Deterministic variable numbering for an instance family (d, n, k)."""

    def __init__(self, d: int, n: int, k: int):
        self.d = d
        self.n = n
        self.k = k
        self.basis_ix = BasisIndexer(n, d + 1)
        self.subset_ix = BasisIndexer(n, d)
        self.n_bases = len(self.basis_ix)
        self.n_subsets = len(self.subset_ix)
        self.n_triples = (
            math.comb(n, d + 3) * math.comb(d + 3, 4) if n >= d + 3 else 0
        )
        self._layer0 = self.n_bases + self.n_subsets
        self._aux0 = self._layer0 + k * self.n_subsets
        self._facet_aux0 = self._aux0 + 3 * self.n_triples
        self.nvars = self._facet_aux0 + 2 * self.n_subsets

    def sign_var(self, basis) -> int:
        b = basis if isinstance(basis, int) else self.basis_ix.rank(tuple(sorted(basis)))
        return 1 + b

    def facet_var(self, subset) -> int:
        s = subset if isinstance(subset, int) else self.subset_ix.rank(tuple(sorted(subset)))
        return self.n_bases + 1 + s

    def layer_var(self, subset, t: int) -> int:
        s = subset if isinstance(subset, int) else self.subset_ix.rank(tuple(sorted(subset)))
        return self._layer0 + t * self.n_subsets + s + 1

    def gp_aux(self, triple_idx: int, term: int) -> int:
        return self._aux0 + 3 * triple_idx + term + 1

    def side_aux(self, subset_idx: int, negative_side: int) -> int:
        return self._facet_aux0 + 2 * subset_idx + negative_side + 1

    def decode_kind(self, var: int):
        """(kind, payload) for a variable: sign/facet/layer/aux."""
        v = var - 1
        if v < self.n_bases:
            return "sign", self.basis_ix.unrank(v)
        v -= self.n_bases
        if v < self.n_subsets:
            return "facet", self.subset_ix.unrank(v)
        v -= self.n_subsets
        if v < self.k * self.n_subsets:
            return "layer", (self.subset_ix.unrank(v % self.n_subsets), v // self.n_subsets)
        return "aux", var


@dataclass
class CnfFormula:
    nvars: int
    clauses: list[tuple[int, ...]]
    varmap: VarMap | None = None
    groups: list[tuple[str, int, int]] = field(default_factory=list)
    meta: dict = field(default_factory=dict)

    def group(self, tag: str) -> list[tuple[int, ...]]:
        for t, a, b in self.groups:
            if t == tag:
                return self.clauses[a:b]
        raise KeyError(tag)

    def to_dimacs_bytes(self) -> bytes:
        buf = io.BytesIO()
        write_dimacs(self, buf)
        return buf.getvalue()

    def digest(self) -> str:
        return hashlib.sha256(self.to_dimacs_bytes()).hexdigest()


@lru_cache(maxsize=8)
def _gp_axiom_clauses(d: int, n: int, k: int) -> tuple[tuple[int, ...], ...]:
    vm = VarMap(d, n, k)
    out = []
    for ti, trip in enumerate(gp_triples(d, n, vm.basis_ix)):
        ps = []
        for term, (a, b, coeff) in enumerate(trip.terms):
            p = vm.gp_aux(ti, term)
            va = vm.sign_var(a)
            vb = vm.sign_var(b)
            if coeff > 0:  # p <-> (va <-> vb)
                out.append((-p, -va, vb))
                out.append((-p, va, -vb))
                out.append((p, va, vb))
                out.append((p, -va, -vb))
            else:  # p <-> (va xor vb)
                out.append((-p, va, vb))
                out.append((-p, -va, -vb))
                out.append((p, -va, vb))
                out.append((p, va, -vb))
            ps.append(p)
        out.append((-ps[0], -ps[1], -ps[2]))
        out.append((ps[0], ps[1], ps[2]))
    return tuple(out)


def encode_gp_axioms(d: int, n: int, varmap: VarMap) -> list[tuple[int, ...]]:
    """Constraints forcing the sign vector to be a uniform chirotope:
    among each triple's three products both signs must occur."""
    return list(_gp_axiom_clauses(d, n, varmap.k))


@lru_cache(maxsize=8)
def _facet_def_clauses(d: int, n: int, k: int) -> tuple[tuple[int, ...], ...]:
    vm = VarMap(d, n, k)
    out = []
    for si, S in enumerate(vm.subset_ix):
        sset = set(S)
        lits = []
        for w in range(1, n + 1):
            if w in sset:
                continue
            greater = sum(1 for s in S if s > w)
            sv = vm.sign_var(vm.basis_ix.rank(tuple(sorted((*S, w)))))
            lits.append(-sv if greater & 1 else sv)
        fv = vm.facet_var(si)
        pos = vm.side_aux(si, 0)
        neg = vm.side_aux(si, 1)
        for l in lits:
            out.append((-pos, l))
            out.append((-neg, -l))
        out.append((pos, *(-l for l in lits)))
        out.append((neg, *lits))
        out.append((-fv, pos, neg))
        out.append((-pos, fv))
        out.append((-neg, fv))
    return tuple(out)


def encode_facet_definitions(d: int, n: int, varmap: VarMap) -> list[tuple[int, ...]]:
    """facet(S) <-> all cofacet signs of S agree, via one indicator per
    side; both directions are encoded since facet variables appear in
    positive and negative positions downstream."""
    return list(_facet_def_clauses(d, n, varmap.k))


def encode_path(path: PathType, varmap: VarMap) -> list[tuple[int, ...]]:
    """Unit clauses pinning every path facet, plus the single global
    orientation unit: the basis completing F_0 with the smallest outside
    label is fixed positive."""
    out = [(varmap.facet_var(f),) for f in path.facets]
    f0 = set(path.facets[0])
    w = next(v for v in range(1, varmap.n + 1) if v not in f0)
    out.append((varmap.sign_var(tuple(sorted((*path.facets[0], w)))),))
    return out


@lru_cache(maxsize=8)
def _distance_skeleton(d: int, n: int, k: int) -> tuple[tuple[int, ...], ...]:
    """Monotonicity and ridge-propagation clauses, path-independent."""
    vm = VarMap(d, n, k)
    out = []
    nsub = vm.n_subsets
    layer0 = vm._layer0
    facet0 = vm.n_bases
    # precompute neighbor ranks per subset
    neighbors: list[list[int]] = []
    for S in vm.subset_ix:
        sset = set(S)
        ns = []
        for v in S:
            rest = sset - {v}
            for w in range(1, n + 1):
                if w not in sset:
                    ns.append(vm.subset_ix.rank(tuple(sorted((*rest, w)))))
        neighbors.append(ns)
    for t in range(1, k):
        prev0 = layer0 + (t - 1) * nsub
        cur0 = layer0 + t * nsub
        for s in range(nsub):
            out.append((-(prev0 + s + 1), cur0 + s + 1))
            fv = facet0 + s + 1
            cur = cur0 + s + 1
            for nb in neighbors[s]:
                out.append((-fv, -(prev0 + nb + 1), cur))
    return tuple(out)


def encode_min_distance(path: PathType, varmap: VarMap) -> list[tuple[int, ...]]:
    """Layered reachability forcing facet-graph distance(F_0, F_k) >= the
    layer count: F_0 seeds layer 0, a facet adjacent to anything reachable
    within t-1 is reachable within t, and F_k is excluded from every layer.

    In a simplicial boundary two facets sharing d-1 vertices are
    ridge-adjacent, so the layered graph is exactly the facet graph and
    any satisfying chirotope keeps the end facets at distance >= k.
    """
    k = varmap.k
    if k < 2:
        raise ValueError("distance constraints need layer count >= 2")
    out = [(varmap.layer_var(path.facets[0], 0),)]
    out.extend(_distance_skeleton(path.d, varmap.n, k))
    fk = varmap.subset_ix.rank(tuple(sorted(path.facets[-1])))
    for t in range(k):
        out.append((-varmap.layer_var(fk, t),))
    return out


def encode_instance(path: PathType, n: int, min_distance: int | None = None) -> CnfFormula:
    """Assemble the four clause groups into one formula.

    min_distance overrides the enforced minimum facet-graph distance
    (defaults to the path length); identical inputs give byte-identical
    DIMACS output.
    """
    cls: PathClass = classify(path, n)
    k_eff = min_distance if min_distance is not None else path.k
    vm = VarMap(path.d, n, k_eff)
    clauses: list[tuple[int, ...]] = []
    groups: list[tuple[str, int, int]] = []

    def add(tag: str, group: Sequence[tuple[int, ...]]):
        a = len(clauses)
        clauses.extend(group)
        groups.append((tag, a, len(clauses)))

    add("axiom", encode_gp_axioms(path.d, n, vm))
    add("facet-def", encode_facet_definitions(path.d, n, vm))
    path_group = encode_path(path, vm)
    add("path", path_group[:-1])
    add("symmetry", path_group[-1:])
    add("distance", encode_min_distance(path, vm))
    meta = {
        "d": path.d,
        "n": n,
        "k": path.k,
        "m": cls.m,
        "l": cls.l,
        "min_distance": k_eff,
        "facets": [list(f) for f in path.facets],
    }
    return CnfFormula(vm.nvars, clauses, vm, groups, meta)


def assume_chirotope(cnf: CnfFormula, chi: Chirotope) -> list[int]:
    """One literal per sign variable fixing it to the chirotope's sign."""
    vm = cnf.varmap
    if chi.n != vm.n or chi.d != vm.d:
        raise ValueError(
            f"chirotope is ({chi.d},{chi.n}), instance needs ({vm.d},{vm.n})"
        )
    return [
        vm.sign_var(b) if s > 0 else -vm.sign_var(b)
        for b, s in enumerate(chi.signs)
    ]


def write_dimacs(cnf: CnfFormula, sink, extra_units: Sequence[int] = ()) -> None:
    """Standard DIMACS with a stable comment-line variable map:
    'c s <var> <basis>' / 'c f <var> <subset>' / 'c l <var> <subset> <t>'.

    extra_units appends assumption literals as unit clauses (reflected in
    the header count); with none, output is bit-exact across runs.
    """
    vm = cnf.varmap
    w = sink.write
    if vm is not None:
        for b, basis in enumerate(vm.basis_ix):
            w(f"c s {vm.sign_var(b)} {' '.join(map(str, basis))}\n".encode())
        for s, subset in enumerate(vm.subset_ix):
            w(f"c f {vm.facet_var(s)} {' '.join(map(str, subset))}\n".encode())
        for t in range(vm.k):
            for s, subset in enumerate(vm.subset_ix):
                w(f"c l {vm.layer_var(s, t)} {' '.join(map(str, subset))} {t}\n".encode())
    w(f"p cnf {cnf.nvars} {len(cnf.clauses) + len(extra_units)}\n".encode())
    chunk = []
    for c in cnf.clauses:
        chunk.append(" ".join(map(str, c)) + " 0\n")
        if len(chunk) >= 4096:
            w("".join(chunk).encode())
            chunk.clear()
    for l in extra_units:
        chunk.append(f"{l} 0\n")
    if chunk:
        w("".join(chunk).encode())


def read_dimacs(source) -> tuple[int, list[tuple[int, ...]]]:
    """Parse (nvars, clauses); comments ignored."""
    nvars = 0
    clauses = []
    pending: list[int] = []
    for raw in source:
        line = raw.decode() if isinstance(raw, bytes) else raw
        line = line.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("p"):
            parts = line.split()
            nvars = int(parts[2])
            continue
        for tok in line.split():
            lit = int(tok)
            if lit == 0:
                clauses.append(tuple(pending))
                pending = []
            else:
                pending.append(lit)
    if pending:
        clauses.append(tuple(pending))
    return nvars, clauses
