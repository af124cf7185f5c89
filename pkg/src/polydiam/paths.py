"""Enumeration and classification of combinatorial facet-path types.

A facet-path of length k in dimension d is an ordered sequence
F_0..F_k of d-element vertex sets in which consecutive facets share a
ridge (d-1 common vertices).  We only ever deal with *end-disjoint*
paths (F_0 and F_k share no vertex) that admit no shortcut through
their own facets, since those are the only candidates for shortest
paths realizing the diameter.

Internally facets are bitmasks (bit v-1 set iff label v present);
the public PathType carries sorted label tuples.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from functools import lru_cache
from typing import Iterable, Sequence

__all__ = [
    "PathType",
    "PathClass",
    "PathDomainError",
    "PathInvariantError",
    "enumerate_nonrevisiting",
    "generate_revisits",
    "classify",
    "canonicalize",
    "canonical_key",
    "enumerate_all",
    "has_structural_shortcut",
    "validate_path",
    "write_paths",
    "read_paths",
    "KNOWN_CLASS_COUNTS",
]


class PathDomainError(ValueError):
    """Raised when (d, n, k) cannot admit end-disjoint facet-paths."""


class PathInvariantError(ValueError):
    """A path or class invariant is violated; `identity` names which one."""

    def __init__(self, identity: str, detail: str = ""):
        self.identity = identity
        super().__init__(f"violated invariant: {identity}" + (f" ({detail})" if detail else ""))


@dataclass(frozen=True)
class PathType:
    """A combinatorial facet-path: d, ambient label count n, facets F_0..F_k."""

    d: int
    n: int
    facets: tuple[tuple[int, ...], ...]

    @property
    def k(self) -> int:
        return len(self.facets) - 1

    def masks(self) -> list[int]:
        return [_mask(f) for f in self.facets]


@dataclass(frozen=True)
class PathClass:
    """The (d, n, k, m, l) classification of a path: m revisits, l drops."""

    d: int
    n: int
    k: int
    m: int
    l: int

    def __post_init__(self):
        for name in ("d", "n", "k", "m", "l"):
            if getattr(self, name) < 0:
                raise PathInvariantError(f"{name} >= 0")
        if self.m - self.l != self.k + self.d - self.n:
            raise PathInvariantError(
                "m - l = k + d - n",
                f"m={self.m} l={self.l} k={self.k} d={self.d} n={self.n}",
            )
        if self.m > self.k - self.d:
            raise PathInvariantError("m <= k - d", f"m={self.m} k={self.k} d={self.d}")
        if self.l > self.n - 2 * self.d:
            raise PathInvariantError("l <= n - 2d", f"l={self.l} n={self.n} d={self.d}")


def _mask(labels: Iterable[int]) -> int:
    m = 0
    for v in labels:
        m |= 1 << (v - 1)
    return m


def _labels(mask: int) -> tuple[int, ...]:
    out = []
    v = 1
    while mask:
        if mask & 1:
            out.append(v)
        mask >>= 1
        v += 1
    return tuple(out)


def _oriented_key(d: int, masks: Sequence[int]) -> tuple[int, ...]:
    """Serialize one orientation as (dep, ent) label pairs under forced labels.

    Start-facet vertices are labeled 1..d in first-departure order, new
    vertices d+1.. in entry order; for this serialization that labeling is
    the lexicographic minimum over every labeling that keeps the
    first-appearance property.
    """
    label: dict[int, int] = {}
    next_start = 1
    next_new = d + 1
    out: list[int] = []
    prev = masks[0]
    for cur in masks[1:]:
        dep_bit = (prev & ~cur).bit_length() - 1
        ent_bit = (cur & ~prev).bit_length() - 1
        dep = label.get(dep_bit)
        if dep is None:
            # first departure of a start-facet vertex
            label[dep_bit] = dep = next_start
            next_start += 1
        ent = label.get(ent_bit)
        if ent is None:
            label[ent_bit] = ent = next_new
            next_new += 1
        out.append(dep)
        out.append(ent)
        prev = cur
    return tuple(out)


def canonical_key(d: int, masks: Sequence[int]) -> tuple[int, ...]:
    """Canonical serialization: lexicographic min over the two orientations."""
    fwd = _oriented_key(d, masks)
    rev = _oriented_key(d, list(reversed(masks)))
    return fwd if fwd <= rev else rev


def _masks_from_key(d: int, key: Sequence[int]) -> list[int]:
    cur = (1 << d) - 1
    masks = [cur]
    for i in range(0, len(key), 2):
        dep, ent = key[i], key[i + 1]
        cur = (cur & ~(1 << (dep - 1))) | (1 << (ent - 1))
        masks.append(cur)
    return masks


def _revisit_count(masks: Sequence[int]) -> int:
    seen = masks[0]
    m = 0
    prev = masks[0]
    for cur in masks[1:]:
        ent = cur & ~prev
        if ent & seen:
            m += 1
        seen |= ent
        prev = cur
    return m


def _structurally_valid(d: int, masks: Sequence[int]) -> bool:
    """Facet sizes, consecutive ridges, and no non-consecutive ridge."""
    for f in masks:
        if f.bit_count() != d:
            return False
    for i, f in enumerate(masks):
        for j in range(i + 1, len(masks)):
            shared = (f & masks[j]).bit_count()
            if j == i + 1:
                if shared != d - 1:
                    return False
            elif shared >= d - 1:
                return False
    return True


def canonicalize(path: PathType) -> PathType:
    """Return the canonical representative of a path's isomorphism class.

    Idempotent; constant under label permutation and path reversal.
    """
    key = canonical_key(path.d, path.masks())
    masks = _masks_from_key(path.d, key)
    return PathType(path.d, path.n, tuple(_labels(f) for f in masks))


def has_structural_shortcut(path: PathType) -> bool:
    """True iff the ridge graph on the path's own facets connects F_0 to F_k
    by a walk shorter than k."""
    masks = path.masks()
    d = path.d
    k = len(masks) - 1
    adj: list[list[int]] = [[] for _ in masks]
    for i in range(len(masks)):
        for j in range(i + 1, len(masks)):
            if (masks[i] & masks[j]).bit_count() == d - 1:
                adj[i].append(j)
                adj[j].append(i)
    dist = [-1] * len(masks)
    dist[0] = 0
    frontier = [0]
    while frontier:
        nxt = []
        for u in frontier:
            for w in adj[u]:
                if dist[w] < 0:
                    dist[w] = dist[u] + 1
                    nxt.append(w)
        frontier = nxt
    return 0 <= dist[k] < k


def validate_path(path: PathType) -> None:
    """Check every PathType invariant, raising PathInvariantError on the
    first violation."""
    d, n = path.d, path.n
    masks = path.masks()
    k = len(masks) - 1
    used = 0
    for f in masks:
        used |= f
    if used >> n:
        raise PathInvariantError("labels within 1..n")
    for i, f in enumerate(masks):
        if f.bit_count() != d:
            raise PathInvariantError("|F_i| = d", f"i={i}")
    for i in range(k):
        if (masks[i] & masks[i + 1]).bit_count() != d - 1:
            raise PathInvariantError("|F_i ∩ F_{i+1}| = d-1", f"i={i}")
    for i in range(k + 1):
        for j in range(i + 2, k + 1):
            shared = (masks[i] & masks[j]).bit_count()
            if shared >= d:
                raise PathInvariantError("F_i ≠ F_j", f"i={i} j={j}")
            if shared == d - 1:
                raise PathInvariantError("no structural shortcut", f"ridge F_{i}~F_{j}")
    if masks[0] & masks[-1]:
        raise PathInvariantError("F_0 ∩ F_k = ∅")
    if masks[0] != (1 << d) - 1:
        raise PathInvariantError("canonical labeling", "F_0 != {1..d}")
    next_new = d + 1
    seen = masks[0]
    for i in range(1, k + 1):
        ent = masks[i] & ~masks[i - 1]
        if not ent & seen:
            if ent != 1 << (next_new - 1):
                raise PathInvariantError("canonical labeling", f"step {i} skips a label")
            next_new += 1
        seen |= ent


def enumerate_nonrevisiting(d: int, k: int) -> list[PathType]:
    """All canonical non-revisiting end-disjoint path types of length k.

    Each uses exactly d+k labels; deduplicated under relabeling and
    reversal; none has a structural shortcut.  Paths are returned in
    canonical-key order; two runs produce identical output.
    """
    if d < 2:
        raise PathDomainError(f"d must be >= 2, got {d}")
    if k < d:
        raise PathDomainError(f"end-disjoint paths need k >= d, got k={k} d={d}")
    return list(_nonrevisiting_cached(d, k))


@lru_cache(maxsize=None)
def _nonrevisiting_cached(d: int, k: int) -> tuple[PathType, ...]:
    start_mask = (1 << d) - 1
    results: list[tuple[tuple[int, ...], list[int]]] = []
    masks = [start_mask]

    def dfs(i: int, cur: int, start_left: int) -> None:
        # start_left: start-facet vertices that have not yet departed; by
        # symmetry the next one to depart is always its lowest bit.
        ent_bit = 1 << (d + i - 1)
        choices = []
        if start_left:
            choices.append(start_left & -start_left)
        inner = cur & ~start_mask
        while inner:
            b = inner & -inner
            choices.append(b)
            inner &= inner - 1
        for dep in choices:
            left = start_left & ~dep
            # end-disjointness needs every remaining start vertex gone in time
            if left.bit_count() > k - i:
                continue
            new = (cur & ~dep) | ent_bit
            ok = True
            for f in masks[:-1]:
                if (new & f).bit_count() >= d - 1:
                    ok = False
                    break
            if not ok:
                continue
            masks.append(new)
            if i == k:
                fwd = _oriented_key(d, masks)
                rev = _oriented_key(d, list(reversed(masks)))
                if fwd <= rev:
                    results.append((fwd, masks.copy()))
            else:
                dfs(i + 1, new, left)
            masks.pop()

    dfs(1, start_mask, start_mask)
    results.sort(key=lambda t: t[0])
    n = d + k
    return tuple(
        PathType(d, n, tuple(_labels(f) for f in ms)) for _, ms in results
    )


def _merge_events_masks(parents: Sequence[Sequence[int]], d: int, m_target: int) -> list[list[int]]:
    """Every valid single vertex-pair identification of every parent path.

    One output per (parent, pair) event: duplicates across parents (or
    across different pairs giving isomorphic results) are NOT removed.
    Published per-class counts are counts of these events, so the event
    stream is what campaigns enumerate.
    """
    out: list[list[int]] = []
    for masks in parents:
        k = len(masks) - 1
        used = 0
        for f in masks:
            used |= f
        bits = []
        t = used
        while t:
            bits.append(t & -t)
            t &= t - 1
        # facet-membership mask per vertex: co-occurring pairs can never merge
        occ = {b: 0 for b in bits}
        for fi, f in enumerate(masks):
            t = f
            while t:
                b = t & -t
                occ[b] |= 1 << fi
                t &= t - 1
        for xi in range(len(bits)):
            x = bits[xi]
            for yi in range(xi + 1, len(bits)):
                y = bits[yi]
                if occ[x] & occ[y]:
                    continue
                merged = [(f & ~y) | x if f & y else f for f in masks]
                if merged[0] & merged[-1]:
                    continue
                if not _merge_valid(d, merged):
                    continue
                if _revisit_count(merged) != m_target:
                    continue
                out.append(merged)
    return out


def _merge_valid(d: int, masks: Sequence[int]) -> bool:
    # facet sizes are preserved by construction (no co-occurrence), so only
    # the intersection pattern needs rechecking
    for i, f in enumerate(masks):
        for j in range(i + 1, len(masks)):
            shared = (f & masks[j]).bit_count()
            if j == i + 1:
                if shared != d - 1:
                    return False
            elif shared >= d - 1:
                return False
    return True


def generate_revisit_events(paths: Sequence[PathType], m_target: int) -> list[PathType]:
    """All identification events taking paths with m_target-1 revisits to
    m_target, in canonical form with duplicates retained.

    Identifications that shrink a facet, collapse consecutive facets,
    create a ridge between non-consecutive facets (a shortcut), intersect
    the end facets, or change the revisit count by more than one are
    discarded.
    """
    if not paths:
        return []
    d = paths[0].d
    for p in paths:
        assert _revisit_count(p.masks()) == m_target - 1, "input path has wrong revisit count"
    events = _merge_events_masks([p.masks() for p in paths], d, m_target)
    n = d + paths[0].k - m_target
    out = []
    for ms in events:
        canon = _masks_from_key(d, canonical_key(d, ms))
        out.append(PathType(d, n, tuple(_labels(f) for f in canon)))
    out.sort(key=lambda p: canonical_key(d, p.masks()))
    return out


def generate_revisits(paths: Sequence[PathType], m_target: int) -> list[PathType]:
    """Deduplicated canonical path types with m_target revisits derived
    from types with one fewer (the distinct isomorphism classes behind
    generate_revisit_events)."""
    seen: set[tuple[int, ...]] = set()
    out = []
    for p in generate_revisit_events(paths, m_target):
        key = canonical_key(p.d, p.masks())
        if key not in seen:
            seen.add(key)
            out.append(p)
    return out


def classify(path: PathType, n: int) -> PathClass:
    """Classify a path against ambient label count n.

    Raises PathInvariantError (naming the identity) if the resulting
    class is impossible or the path uses labels above n.
    """
    masks = path.masks()
    used = 0
    for f in masks:
        used |= f
    if used >> n:
        raise PathInvariantError("labels within 1..n", f"max label {used.bit_length()} > n={n}")
    k = len(masks) - 1
    m = _revisit_count(masks)
    l = n - used.bit_count()
    return PathClass(path.d, n, k, m, l)


def enumerate_all(d: int, n: int, k: int) -> dict[tuple[int, int], list[PathType]]:
    """Full grouped enumeration of solver instances for (d, n, k).

    Group (m, l) holds the identification-event stream with m revisits
    (the non-revisiting types themselves for m = 0); per-group lengths
    match the published instance counts, which retain duplicates arising
    from distinct identification routes.
    """
    if k < d:
        raise PathDomainError(f"end-disjoint paths need k >= d, got k={k} d={d}")
    if n < 2 * d:
        raise PathDomainError(f"end-disjoint paths need n >= 2d, got n={n} d={d}")
    m_min = max(0, k + d - n)
    m_max = k - d
    result: dict[tuple[int, int], list[PathType]] = {}
    for m in range(m_min, m_max + 1):
        paths = _event_chain(d, k, m)
        l = m - (k + d - n)
        result[(m, l)] = [replace(p, n=n) for p in paths]
    return result


@lru_cache(maxsize=None)
def _event_chain(d: int, k: int, m: int) -> tuple[PathType, ...]:
    if m == 0:
        return _nonrevisiting_cached(d, k)
    return tuple(generate_revisit_events(_event_chain(d, k, m - 1), m))


# Published path-type counts for small parameter sets, used as a regression
# guard before committing to a proof campaign: (d, n, k) -> {(m, l): count}.
KNOWN_CLASS_COUNTS: dict[tuple[int, int, int], dict[tuple[int, int], int]] = {
    (4, 10, 6): {(0, 0): 15, (1, 1): 24, (2, 2): 16},
    (4, 11, 7): {(0, 0): 50, (1, 1): 200, (2, 2): 354, (3, 3): 96},
    (4, 12, 8): {(0, 0): 160, (1, 1): 1258, (2, 2): 5172, (3, 3): 7398, (4, 4): 1512},
    (5, 11, 7): {(1, 0): 98, (2, 1): 98},
    (5, 12, 8): {(1, 0): 1079, (2, 1): 3184, (3, 2): 2904},
    (6, 12, 7): {(1, 0): 11},
    (6, 13, 8): {(1, 0): 293, (2, 1): 452},
}


def write_paths(paths_by_class: dict[tuple[int, int], list[PathType]], fp) -> int:
    """Write grouped paths as JSON lines, globally sorted by canonical form."""
    rows = []
    for (m, l), paths in paths_by_class.items():
        for p in paths:
            rows.append((canonical_key(p.d, p.masks()), m, l, p))
    rows.sort(key=lambda r: r[0])
    for _, m, l, p in rows:
        rec = {
            "d": p.d,
            "n": p.n,
            "k": p.k,
            "m": m,
            "l": l,
            "facets": [list(f) for f in p.facets],
        }
        fp.write(json.dumps(rec, separators=(",", ":")) + "\n")
    return len(rows)


def read_paths(fp) -> list[tuple[PathType, PathClass]]:
    out = []
    for line in fp:
        line = line.strip()
        if not line:
            continue
        rec = json.loads(line)
        p = PathType(rec["d"], rec["n"], tuple(tuple(f) for f in rec["facets"]))
        out.append((p, PathClass(rec["d"], rec["n"], rec["k"], rec["m"], rec["l"])))
    return out
