"""Path enumeration tests.

The brute-force oracles here are deliberately independent of the
production code: they enumerate raw facet sequences and deduplicate via
explicit label permutations, so agreement is meaningful.
"""

import itertools
import json
import io

import pytest
from hypothesis import given, settings, strategies as st

from polydiam.paths import (
    PathClass,
    PathDomainError,
    PathInvariantError,
    PathType,
    canonical_key,
    canonicalize,
    classify,
    enumerate_all,
    enumerate_nonrevisiting,
    generate_revisit_events,
    generate_revisits,
    has_structural_shortcut,
    read_paths,
    validate_path,
    write_paths,
)


# ---------------------------------------------------------------- oracles


def oracle_canonical(path: PathType) -> tuple:
    """Min serialization over ALL label bijections and both orientations."""
    labels = sorted({v for f in path.facets for v in f})
    best = None
    for facets in (path.facets, tuple(reversed(path.facets))):
        for perm in itertools.permutations(range(1, len(labels) + 1)):
            relab = dict(zip(labels, perm))
            ser = tuple(tuple(sorted(relab[v] for v in f)) for f in facets)
            if best is None or ser < best:
                best = ser
    return best


def oracle_enumerate(d, k, m_want, u_want):
    """All valid path types by raw DFS + full-permutation dedup."""
    start = frozenset(range(1, d + 1))
    found = {}

    def ok_new_facet(seq, new):
        # new facet may share a ridge only with its immediate predecessor
        for f in seq[:-2]:
            if len(f & new) >= d - 1:
                return False
        return True

    def revisits(seq):
        seen = set(seq[0])
        m = 0
        for prev, cur in zip(seq, seq[1:]):
            ent = cur - prev
            v = next(iter(ent))
            if v in seen:
                m += 1
            seen.add(v)
        return m

    def dfs(seq, used, next_new):
        i = len(seq) - 1
        cur = seq[-1]
        if i == k:
            if not (seq[0] & seq[-1]) and len(used) == u_want and revisits(seq) == m_want:
                p = PathType(d, u_want, tuple(tuple(sorted(f)) for f in seq))
                found[oracle_canonical(p)] = p
            return
        ents = [v for v in used - cur]
        if next_new <= u_want:
            ents.append(next_new)
        for ent in ents:
            for dep in cur:
                new = (cur - {dep}) | {ent}
                if len(new) != d or not ok_new_facet(seq + [new], new):
                    continue
                dfs(seq + [new], used | {ent}, next_new + (1 if ent == next_new else 0))

    dfs([start], set(start), d + 1)
    return list(found.values())


def oracle_shortcut(path: PathType) -> bool:
    """BFS on explicit adjacency sets (independent re-derivation)."""
    fs = [set(f) for f in path.facets]
    k = len(fs) - 1
    dist = {0: 0}
    frontier = [0]
    while frontier:
        nxt = []
        for u in frontier:
            for w in range(len(fs)):
                if w not in dist and len(fs[u] & fs[w]) == path.d - 1:
                    dist[w] = dist[u] + 1
                    nxt.append(w)
        frontier = nxt
    return dist.get(k, k + 1) < k


# ------------------------------------------------------- non-revisiting


def test_smallest_case_matches_oracle():
    got = enumerate_nonrevisiting(2, 2)
    assert len(got) == 1
    assert len(oracle_enumerate(2, 2, 0, 4)) == 1


@pytest.mark.parametrize("d,k", [(2, 3), (2, 4), (2, 5), (3, 4)])
def test_nonrevisiting_matches_oracle(d, k):
    got = {canonical_key(p.d, p.masks()) for p in enumerate_nonrevisiting(d, k)}
    want = {canonical_key(p.d, p.masks()) for p in oracle_enumerate(d, k, 0, d + k)}
    assert got == want


@pytest.mark.parametrize(
    "d,k,count", [(4, 6, 15), (4, 7, 50), (4, 8, 160), (2, 2, 1)]
)
def test_nonrevisiting_published_counts(d, k, count):
    assert len(enumerate_nonrevisiting(d, k)) == count


def test_nonrevisiting_rejects_small_k():
    with pytest.raises(PathDomainError):
        enumerate_nonrevisiting(4, 3)
    with pytest.raises(PathDomainError):
        enumerate_nonrevisiting(1, 5)


def test_emitted_paths_satisfy_all_invariants():
    for p in enumerate_nonrevisiting(4, 6):
        validate_path(p)
        assert not has_structural_shortcut(p)
    for p in generate_revisit_events(enumerate_nonrevisiting(4, 6), 1):
        validate_path(p)
        assert not has_structural_shortcut(p)


def test_enumeration_deterministic():
    a = enumerate_nonrevisiting(3, 5)
    b = enumerate_nonrevisiting(3, 5)
    assert a == b
    ev1 = generate_revisit_events(a, 1)
    ev2 = generate_revisit_events(b, 1)
    assert ev1 == ev2


# ------------------------------------------------------------- revisits


def test_revisit_events_match_oracle_types():
    # every event must be a valid type the oracle also finds, and every
    # oracle type must occur among the events
    parents = enumerate_nonrevisiting(3, 4)
    events = generate_revisit_events(parents, 1)
    got = {canonical_key(3, p.masks()) for p in events}
    want = {canonical_key(3, p.masks()) for p in oracle_enumerate(3, 4, 1, 6)}
    assert got == want


def test_revisit_dedup_is_subset_of_events():
    parents = enumerate_nonrevisiting(4, 6)
    events = generate_revisit_events(parents, 1)
    types = generate_revisits(parents, 1)
    assert len(types) <= len(events)
    assert {p.facets for p in types} == {p.facets for p in events}


@pytest.mark.parametrize(
    "d,n,k,rows",
    [
        (4, 10, 6, {(0, 0): 15, (1, 1): 24, (2, 2): 16}),
        (5, 11, 7, {(1, 0): 98, (2, 1): 98}),
        (6, 12, 7, {(1, 0): 11}),
    ],
)
def test_published_class_counts_small(d, n, k, rows):
    got = {c: len(v) for c, v in enumerate_all(d, n, k).items()}
    assert got == rows


def test_enumerate_all_rejects_bad_parameters():
    with pytest.raises(PathDomainError):
        enumerate_all(4, 10, 3)
    with pytest.raises(PathDomainError):
        enumerate_all(4, 7, 6)


# ------------------------------------------------------ classification


def test_classify_counts_revisits_and_drops():
    grouped = enumerate_all(4, 10, 6)
    for (m, l), paths in grouped.items():
        for p in paths:
            c = classify(p, 10)
            assert (c.m, c.l) == (m, l)
            assert c.m - c.l == c.k + c.d - c.n


def test_classify_rejects_labels_beyond_n():
    p = enumerate_nonrevisiting(2, 2)[0]  # uses labels 1..4
    with pytest.raises(PathInvariantError):
        classify(p, 3)


def test_class_invariants_enforced():
    with pytest.raises(PathInvariantError) as ei:
        PathClass(d=4, n=10, k=6, m=1, l=0)
    assert "m - l" in str(ei.value)
    with pytest.raises(PathInvariantError):
        PathClass(d=4, n=12, k=6, m=3, l=1)  # m > k - d
    with pytest.raises(PathInvariantError):
        PathClass(d=4, n=9, k=6, m=3, l=2)  # l > n - 2d


# ----------------------------------------------------- canonicalization


@st.composite
def random_path(draw):
    d = draw(st.integers(2, 4))
    k = draw(st.integers(d, d + 3))
    paths = enumerate_nonrevisiting(d, k)
    p = paths[draw(st.integers(0, len(paths) - 1))]
    if draw(st.booleans()):
        events = generate_revisit_events([p], 1)
        if events:
            p = events[draw(st.integers(0, len(events) - 1))]
    return p


@given(random_path(), st.randoms())
@settings(max_examples=60, deadline=None)
def test_canonicalize_constant_on_isomorphism_class(p, rng):
    labels = sorted({v for f in p.facets for v in f})
    perm = labels[:]
    rng.shuffle(perm)
    relab = dict(zip(labels, perm))
    facets = tuple(tuple(sorted(relab[v] for v in f)) for f in p.facets)
    if rng.random() < 0.5:
        facets = tuple(reversed(facets))
    q = PathType(p.d, p.n, facets)
    assert canonicalize(q) == canonicalize(p)


@given(random_path())
@settings(max_examples=30, deadline=None)
def test_canonicalize_idempotent(p):
    c = canonicalize(p)
    assert canonicalize(c) == c


def test_canonicalize_agrees_with_oracle_on_small_paths():
    for p in enumerate_nonrevisiting(2, 4) + enumerate_nonrevisiting(3, 4):
        c = canonicalize(p)
        assert oracle_canonical(c) == oracle_canonical(p)


# ------------------------------------------------------------ shortcuts


def test_shortcut_trivial_cases():
    p = enumerate_nonrevisiting(4, 6)[0]
    assert not has_structural_shortcut(p)
    # force a 2-step shortcut: fan around a common ridge
    fan = PathType(3, 6, ((1, 2, 3), (1, 2, 4), (1, 2, 5), (2, 5, 6)))
    assert has_structural_shortcut(fan)


def test_shortcut_agrees_with_bfs_oracle_on_random_sequences():
    # structurally valid sequences (consecutive ridges hold) that may
    # violate other invariants
    import random

    rng = random.Random(7)
    for _ in range(300):
        d = rng.choice([2, 3, 4])
        k = rng.randint(2, 6)
        cur = set(range(1, d + 1))
        seq = [frozenset(cur)]
        nxt = d + 1
        for _ in range(k):
            dep = rng.choice(sorted(cur))
            if rng.random() < 0.4:
                ent = nxt
                nxt += 1
            else:
                pool = sorted(set(range(1, nxt)) - cur)
                ent = rng.choice(pool) if pool else nxt
                if ent == nxt:
                    nxt += 1
            cur = (cur - {dep}) | {ent}
            seq.append(frozenset(cur))
        if len({f for f in seq}) != len(seq):
            continue
        p = PathType(d, max(max(f) for f in seq), tuple(tuple(sorted(f)) for f in seq))
        assert has_structural_shortcut(p) == oracle_shortcut(p)


# ------------------------------------------------------------ path files


def test_path_file_round_trip():
    grouped = enumerate_all(4, 10, 6)
    buf = io.StringIO()
    count = write_paths(grouped, buf)
    assert count == 55
    buf.seek(0)
    rows = read_paths(buf)
    assert len(rows) == 55
    for p, c in rows:
        assert classify(p, c.n) == c
    # sorted by canonical form
    keys = [canonical_key(p.d, p.masks()) for p, _ in rows]
    assert keys == sorted(keys)


def test_path_file_schema():
    grouped = enumerate_all(6, 12, 7)
    buf = io.StringIO()
    write_paths(grouped, buf)
    line = buf.getvalue().splitlines()[0]
    rec = json.loads(line)
    assert set(rec) == {"d", "n", "k", "m", "l", "facets"}
    assert all(isinstance(f, list) for f in rec["facets"])
