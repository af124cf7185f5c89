"""Bounds table tests: published-grid reproduction and rule semantics."""

import pytest

from polydiam.bounds import (
    BoundsTable,
    DeltaBound,
    apply_hypothesis,
    apply_klee_walkup,
    apply_nonexistence,
    render,
    seed_known,
)


def cells(text):
    rows = [r.split() for r in text.splitlines()[1:]]
    return {int(r[0]): r[1:] for r in rows}


PRIOR_GRID = {
    4: ["4", "5", "5", "6", "7+"],
    5: ["5", "6", "7-8", "7+", "8+"],
    6: ["6", "7-9", "8+", "9+", "9+"],
    7: ["7-10", "8+", "9+", "10+", "11+"],
    8: ["8+", "9+", "10+", "11+", "12+"],
}

UPDATED_GRID = {
    4: ["4", "5", "5", "6", "7"],
    5: ["5", "6", "7", "7-9", "8+"],
    6: ["6", "7", "8-11", "9+", "9+"],
    7: ["7-8", "8-12", "9+", "10+", "11+"],
    8: ["8-13", "9+", "10+", "11+", "12+"],
}


def test_seeds_render_prior_grid_exactly():
    table = apply_klee_walkup(seed_known())
    assert cells(render(table)) == PRIOR_GRID


def test_seed_values():
    t = seed_known()
    assert (t.get(4, 10).lower, t.get(4, 10).upper) == (5, 5)
    assert (t.get(5, 12).lower, t.get(5, 12).upper) == (7, 8)
    assert (t.get(3, 11).lower, t.get(3, 11).upper) == (6, 6)
    assert t.get(4, 12).upper is None and t.get(4, 12).lower == 7


def test_fact_412_gives_exact_7():
    t = seed_known()
    apply_nonexistence(t, 4, 12, 8, source="campaign")
    c = t.get(4, 12)
    assert (c.lower, c.upper) == (7, 7)
    assert not c.hypothetical
    steps = [p for p in c.provenance if p.get("rule") == "step-down"]
    assert steps and steps[0]["premise_cell"] == [3, 11]
    assert steps[0]["premise_upper"] == 6


def test_fact_512_would_give_7():
    t = seed_known()
    apply_nonexistence(t, 5, 12, 8)
    assert (t.get(5, 12).lower, t.get(5, 12).upper) == (7, 7)


def test_inert_fact_changes_nothing():
    t = seed_known()
    before = t.get(6, 14)
    apply_nonexistence(t, 6, 14, 9)  # premise Delta(5,13) has no upper bound
    assert t.get(6, 14).upper is None and t.get(6, 14) is before
    assert any("inert" in note for note in t.notes)


def test_full_updated_grid_reproduced():
    t = seed_known()
    apply_nonexistence(t, 4, 12, 8, source="campaign")
    apply_klee_walkup(t)
    apply_hypothesis(t, 5, 12, 7)
    # the step-up rule alone must give Delta(6,13) <= 8 from the hypothesis
    apply_klee_walkup(t)
    assert t.get(6, 13).upper == 8
    kw = [p for p in t.get(6, 13).provenance if p["rule"] == "klee-walkup"]
    assert kw and kw[-1]["premise_cell"] == [5, 12]
    apply_hypothesis(t, 6, 13, 7)
    apply_klee_walkup(t)
    assert cells(render(t)) == UPDATED_GRID
    # the five derived bounds, explicitly
    assert t.get(5, 13).upper == 9
    assert t.get(6, 14).upper == 11
    assert t.get(7, 14).upper == 8
    assert t.get(7, 15).upper == 12
    assert t.get(8, 16).upper == 13


def test_hypothesis_taint_propagates():
    t = seed_known()
    apply_hypothesis(t, 5, 12, 7)
    apply_klee_walkup(t)
    assert t.get(6, 13).hypothetical
    # chain continues upward once (6,13) tightened
    apply_hypothesis(t, 6, 13, 7)
    apply_klee_walkup(t)
    assert t.get(7, 14).hypothetical
    # but the proved (4,12) fact stays untainted
    apply_nonexistence(t, 4, 12, 8)
    assert not t.get(4, 12).hypothetical


def test_monotonicity_never_weakens():
    t = seed_known()
    c = t.get(4, 10)
    assert not t.set_upper(4, 10, 9, {"rule": "test"})
    assert not t.set_lower(4, 10, 3, {"rule": "test"})
    assert (c.lower, c.upper) == (5, 5)


def test_contradictions_rejected():
    t = seed_known()
    with pytest.raises(ValueError):
        t.set_upper(4, 10, 4, {"rule": "test"})
    with pytest.raises(ValueError):
        DeltaBound(4, 10, lower=6, upper=5)
    with pytest.raises(ValueError):
        DeltaBound(1, 5)


def test_provenance_chain_valid():
    t = seed_known()
    apply_nonexistence(t, 4, 12, 8)
    apply_hypothesis(t, 5, 12, 7)
    apply_klee_walkup(t)
    for (d, n), c in t.cells.items():
        for p in c.provenance:
            if p["rule"] == "step-down":
                pd, pn = p["premise_cell"]
                assert (pd, pn) == (d - 1, n - 1)
                assert p["premise_upper"] < p["fact"][2]
                assert t.get(pd, pn).upper <= p["premise_upper"]
            elif p["rule"] == "klee-walkup":
                pd, pn = p["premise_cell"]
                kk = p["k"]
                assert (pd, pn) == (d - 1, n - 1)
                assert n == 2 * d + kk and 0 <= kk <= 3
            else:
                assert p["rule"] in ("seed", "hypothesis")


def test_render_empty_and_open_cells():
    assert render(BoundsTable()) .splitlines()[1].split()[1:] == ["?"] * 5
    assert render(seed_known(), d_range=(5, 4)) == ""
