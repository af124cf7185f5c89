"""Shared test helpers: realized cyclic-polytope controls."""

from itertools import combinations

from polydiam.chirotope import (
    chirotope_from_points,
    facet_distance,
    facets_of,
    moment_curve_points,
)
from polydiam.paths import PathType


def shortest_facet_path(facets, fa, fb):
    ridge = {}
    for f in facets:
        for r in combinations(f, len(f) - 1):
            ridge.setdefault(r, []).append(f)
    parent = {fa: None}
    frontier = [fa]
    while fb not in parent and frontier:
        nxt = []
        for f in frontier:
            for r in combinations(f, len(f) - 1):
                for g in ridge[r]:
                    if g not in parent:
                        parent[g] = f
                        nxt.append(g)
        frontier = nxt
    path = []
    cur = fb
    while cur is not None:
        path.append(cur)
        cur = parent[cur]
    path.reverse()
    return path


def cyclic_control(d, n):
    """A realized control: the cyclic-polytope chirotope (oriented to the
    encoder's symmetry clause), a recorded shortest path between two
    disjoint facets at maximum distance, and that distance."""
    chi = chirotope_from_points(moment_curve_points(d, n))
    fs = sorted(facets_of(chi))
    best = None
    for a, b in combinations(fs, 2):
        if set(a) & set(b):
            continue
        t = facet_distance(chi, a, b)
        if best is None or t > best[0]:
            best = (t, a, b)
    t, fa, fb = best
    path = PathType(d, n, tuple(shortest_facet_path(fs, fa, fb)))
    w = next(v for v in range(1, n + 1) if v not in set(fa))
    if chi.signs[chi.indexer.rank(tuple(sorted((*fa, w))))] < 0:
        chi = chi.negated()
    return chi, path, int(t)
