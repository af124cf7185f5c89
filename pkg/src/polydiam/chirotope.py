"""Uniform chirotopes on n points in rank r = d+1.

Signs live on sorted (d+1)-subsets of {1..n} ("bases"); the alternating
extension to arbitrary tuples multiplies by the sorting permutation's
sign.  All sign computation is exact integer arithmetic: one wrong sign
would invalidate a nonexistence proof.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Iterator, Sequence

__all__ = [
    "BasisIndexer",
    "Chirotope",
    "GPTriple",
    "DegeneracyError",
    "gp_triples",
    "check_gp",
    "chirotope_from_points",
    "facets_of",
    "facet_distance",
    "interior_points",
    "int_det",
    "perm_parity",
    "moment_curve_points",
]


class DegeneracyError(ValueError):
    """A point configuration has a flat (zero-determinant) tuple."""

    def __init__(self, tup):
        self.tuple = tuple(tup)
        super().__init__(f"degenerate configuration: flat tuple {self.tuple}")


class BasisIndexer:
    """Bijection between sorted r-subsets of {1..n} and [0, C(n,r)),
    preserving lexicographic order."""

    def __init__(self, n: int, r: int):
        if not 0 < r <= n:
            raise ValueError(f"need 0 < r <= n, got r={r} n={n}")
        self.n = n
        self.r = r
        self._subsets = list(combinations(range(1, n + 1), r))
        self._index = {s: i for i, s in enumerate(self._subsets)}

    def __len__(self) -> int:
        return len(self._subsets)

    def rank(self, subset: Sequence[int]) -> int:
        return self._index[tuple(subset)]

    def unrank(self, i: int) -> tuple[int, ...]:
        return self._subsets[i]

    def __iter__(self) -> Iterator[tuple[int, ...]]:
        return iter(self._subsets)


def perm_parity(tup: Sequence[int]) -> int:
    """Sign of the permutation sorting tup; 0 if tup has repeats."""
    inv = 0
    n = len(tup)
    for i in range(n):
        for j in range(i + 1, n):
            if tup[i] > tup[j]:
                inv += 1
            elif tup[i] == tup[j]:
                return 0
    return -1 if inv & 1 else 1


def int_det(rows: Sequence[Sequence[int]]) -> int:
    """Exact determinant of an integer matrix (Bareiss elimination)."""
    m = [list(r) for r in rows]
    n = len(m)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k]:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            mik = m[i][k]
            mkk = m[k][k]
            row_i = m[i]
            row_k = m[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * mkk - mik * row_k[j]) // prev
            row_i[k] = 0
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


@dataclass(frozen=True)
class GPTriple:
    """One three-term sign constraint from a (d+3)-subset split into a
    (d-1)-set X and a 4-set Y.

    terms holds three (basis_a, basis_b, coeff) entries; the constraint
    is satisfied iff {coeff * chi[a] * chi[b]} takes both signs.
    """

    X: tuple[int, ...]
    Y: tuple[int, ...]
    terms: tuple[tuple[int, int, int], ...]

    def satisfied_by(self, signs: Sequence[int]) -> bool:
        vals = {c * signs[a] * signs[b] for a, b, c in self.terms}
        return vals == {-1, 1}


class Chirotope:
    """Sign vector over all sorted (d+1)-subsets, with the alternating
    extension to arbitrary tuples."""

    def __init__(self, indexer: BasisIndexer, signs: Sequence[int]):
        if len(signs) != len(indexer):
            raise ValueError("sign vector length does not match basis count")
        if any(s not in (-1, 1) for s in signs):
            raise ValueError("uniform chirotope requires signs in {-1, +1}")
        self.indexer = indexer
        self.signs = list(signs)

    @property
    def n(self) -> int:
        return self.indexer.n

    @property
    def d(self) -> int:
        return self.indexer.r - 1

    def sign(self, tup: Sequence[int]) -> int:
        """Sign of an arbitrary (d+1)-tuple; 0 on repeated entries."""
        p = perm_parity(tup)
        if p == 0:
            return 0
        return p * self.signs[self.indexer.rank(tuple(sorted(tup)))]

    def cofacet_sign(self, subset: Sequence[int], w: int) -> int:
        """chi(s_1..s_d, w) for sorted subset, i.e. with w appended last."""
        greater = sum(1 for s in subset if s > w)
        base = self.signs[self.indexer.rank(tuple(sorted((*subset, w))))]
        return -base if greater & 1 else base

    def negated(self) -> "Chirotope":
        return Chirotope(self.indexer, [-s for s in self.signs])

    def relabel(self, mapping: dict[int, int]) -> "Chirotope":
        """Chirotope of the relabeled points: new label mapping[v] plays
        the role old label v played."""
        inv = {w: v for v, w in mapping.items()}
        if sorted(inv) != list(range(1, self.n + 1)):
            raise ValueError("mapping must be a bijection on {1..n}")
        signs = []
        for subset in self.indexer:
            old = tuple(inv[v] for v in subset)
            signs.append(self.sign(old))
        return Chirotope(self.indexer, signs)

    # ------------------------------------------------------ text format

    def to_text(self) -> str:
        line = "".join("+" if s > 0 else "-" for s in self.signs)
        return f"chirotope {self.d} {self.n}\n{line}\n"

    @classmethod
    def from_text(cls, text: str) -> "Chirotope":
        lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
        head = lines[0].split()
        if len(head) != 3 or head[0] != "chirotope":
            raise ValueError("expected header 'chirotope d n'")
        d, n = int(head[1]), int(head[2])
        indexer = BasisIndexer(n, d + 1)
        body = lines[1]
        if len(body) != len(indexer) or set(body) - {"+", "-"}:
            raise ValueError("sign line must hold C(n, d+1) chars from {+,-}")
        return cls(indexer, [1 if ch == "+" else -1 for ch in body])


def gp_triples(d: int, n: int, indexer: BasisIndexer | None = None) -> Iterator[GPTriple]:
    """All three-term sign constraints for (d, n): one per (d+3)-subset
    and per 4-subset choice within it.  Empty for n < d+3."""
    if n < d + 3:
        return
    if indexer is None:
        indexer = BasisIndexer(n, d + 1)
    pairings = ((0, 1, 2, 3, 1), (0, 2, 1, 3, -1), (0, 3, 1, 2, 1))
    for Z in combinations(range(1, n + 1), d + 3):
        zset = set(Z)
        for Y in combinations(Z, 4):
            X = tuple(v for v in Z if v not in set(Y))
            terms = []
            for i1, i2, i3, i4, base in pairings:
                ta = (*X, Y[i1], Y[i2])
                tb = (*X, Y[i3], Y[i4])
                ea = perm_parity(ta)
                eb = perm_parity(tb)
                terms.append(
                    (
                        indexer.rank(tuple(sorted(ta))),
                        indexer.rank(tuple(sorted(tb))),
                        base * ea * eb,
                    )
                )
            yield GPTriple(X, tuple(Y), tuple(terms))


def check_gp(chi: Chirotope) -> bool:
    """True iff every three-term constraint is satisfied."""
    signs = chi.signs
    for t in gp_triples(chi.d, chi.n, chi.indexer):
        if not t.satisfied_by(signs):
            return False
    return True


def chirotope_from_points(points: Sequence[Sequence[int]]) -> Chirotope:
    """Chirotope of an integer point configuration given as n rows of
    homogeneous coordinates (length d+1).

    Exact integer determinants throughout; raises DegeneracyError naming
    the first flat (d+1)-tuple.
    """
    n = len(points)
    r = len(points[0])
    if any(len(p) != r for p in points):
        raise ValueError("all points need the same coordinate length")
    for p in points:
        for x in p:
            if not isinstance(x, int):
                raise TypeError("integer coordinates required for exact signs")
    indexer = BasisIndexer(n, r)
    signs = []
    for subset in indexer:
        det = int_det([points[v - 1] for v in subset])
        if det == 0:
            raise DegeneracyError(subset)
        signs.append(1 if det > 0 else -1)
    return Chirotope(indexer, signs)


def facets_of(chi: Chirotope) -> set[tuple[int, ...]]:
    """d-subsets whose cofacet signs all agree (boundary facets)."""
    out = set()
    labels = range(1, chi.n + 1)
    for S in combinations(labels, chi.d):
        sset = set(S)
        it = (chi.cofacet_sign(S, w) for w in labels if w not in sset)
        first = next(it)
        if all(s == first for s in it):
            out.add(S)
    return out


def facet_distance(chi_or_facets, F_a: Iterable[int], F_b: Iterable[int]) -> float:
    """BFS distance between two facets in the ridge-adjacency graph.

    Accepts a Chirotope or a precomputed facet set; returns math.inf when
    unreachable (cannot happen for boundary complexes of real polytopes,
    reported rather than asserted).
    """
    facets = (
        facets_of(chi_or_facets)
        if isinstance(chi_or_facets, Chirotope)
        else set(map(tuple, chi_or_facets))
    )
    fa = tuple(sorted(F_a))
    fb = tuple(sorted(F_b))
    if fa not in facets or fb not in facets:
        raise ValueError("endpoints must be facets")
    if fa == fb:
        return 0
    ridge_map: dict[tuple[int, ...], list[tuple[int, ...]]] = {}
    for f in facets:
        for ridge in combinations(f, len(f) - 1):
            ridge_map.setdefault(ridge, []).append(f)
    dist = {fa: 0}
    frontier = [fa]
    while frontier:
        nxt = []
        for f in frontier:
            for ridge in combinations(f, len(f) - 1):
                for g in ridge_map[ridge]:
                    if g not in dist:
                        dist[g] = dist[f] + 1
                        if g == fb:
                            return dist[g]
                        nxt.append(g)
        frontier = nxt
    return math.inf


def interior_points(chi: Chirotope) -> set[int]:
    """Labels appearing in no facet.  Reporting aid only; the SAT
    encoding never constrains points to be extreme."""
    on_boundary = set()
    for f in facets_of(chi):
        on_boundary.update(f)
    return set(range(1, chi.n + 1)) - on_boundary


def moment_curve_points(d: int, n: int) -> list[list[int]]:
    """n integer points on the moment curve in homogeneous coordinates;
    their hull is the cyclic polytope C(d, n) and every (d+1)x(d+1)
    minor is a nonzero Vandermonde determinant."""
    return [[t**i for i in range(d + 1)] for t in range(1, n + 1)]
