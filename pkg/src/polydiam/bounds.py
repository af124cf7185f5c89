"""Edge-diameter bound bookkeeping.

A BoundsTable maps (d, n) to lower/upper bounds on the maximum edge
diameter of d-polytopes with n facets, with full provenance per bound.
Two propagation rules tighten upper bounds:

  step-down  If no (d,n)-polytope has two facet-disjoint vertices at
             distance k (a completed ALL-UNSAT campaign) and the upper
             bound for (d-1, n-1) is below k, then the (d,n) diameter is
             below k.  (Walking k steps from one end of a longer geodesic
             reaches a vertex sharing a facet F with the start; F is a
             (d-1, n-1)-polytope of diameter >= k.)

  klee-walkup  Delta(d, 2d+k) <= Delta(d-1, 2d+k-1) + floor(k/2) + 1
               for 0 <= k <= 3.

Bounds derived from an unproven hypothesis carry a taint flag.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

__all__ = [
    "DeltaBound",
    "BoundsTable",
    "seed_known",
    "apply_nonexistence",
    "apply_hypothesis",
    "apply_klee_walkup",
    "render",
]


@dataclass
class DeltaBound:
    d: int
    n: int
    lower: int | None = None
    upper: int | None = None
    provenance: list = field(default_factory=list)
    hypothetical: bool = False

    def __post_init__(self):
        if self.d < 2 or self.n < self.d + 1:
            raise ValueError(f"no polytopes for (d={self.d}, n={self.n})")
        if self.lower is not None and self.upper is not None and self.lower > self.upper:
            raise ValueError(
                f"contradictory bound for ({self.d},{self.n}): "
                f"lower {self.lower} > upper {self.upper}"
            )

    def cell(self) -> str:
        if self.lower is not None and self.lower == self.upper:
            return str(self.lower)
        if self.lower is not None and self.upper is not None:
            return f"{self.lower}-{self.upper}"
        if self.lower is not None:
            return f"{self.lower}+"
        if self.upper is not None:
            return f"-{self.upper}"
        return "?"


class BoundsTable:
    def __init__(self):
        self.cells: dict[tuple[int, int], DeltaBound] = {}
        self.facts: list[dict] = []
        self.notes: list[str] = []

    def get(self, d: int, n: int) -> DeltaBound | None:
        return self.cells.get((d, n))

    def _cell(self, d: int, n: int) -> DeltaBound:
        return self.cells.setdefault((d, n), DeltaBound(d, n))

    def set_lower(self, d: int, n: int, value: int, prov: dict) -> bool:
        c = self._cell(d, n)
        if c.lower is None or value > c.lower:
            if c.upper is not None and value > c.upper:
                raise ValueError(
                    f"contradictory lower bound {value} > upper {c.upper} for ({d},{n})"
                )
            c.lower = value
            c.provenance.append(prov)
            return True
        return False

    def set_upper(self, d: int, n: int, value: int, prov: dict, hypothetical=False) -> bool:
        c = self._cell(d, n)
        if c.upper is None or value < c.upper:
            if c.lower is not None and value < c.lower:
                raise ValueError(
                    f"contradictory upper bound {value} < lower {c.lower} for ({d},{n})"
                )
            c.upper = value
            c.provenance.append(prov)
            c.hypothetical = c.hypothetical or hypothetical
            return True
        return False


# The previously published bound survey for d = 4..8, n-2d = 0..4, plus
# the d = 3 row where the diameter is exactly floor(2n/3) - 1.
_SEED_GRID = {
    4: ["4", "5", "5", "6", "7+"],
    5: ["5", "6", "7-8", "7+", "8+"],
    6: ["6", "7-9", "8+", "9+", "9+"],
    7: ["7-10", "8+", "9+", "10+", "11+"],
    8: ["8+", "9+", "10+", "11+", "12+"],
}


def seed_known() -> BoundsTable:
    table = BoundsTable()
    prov = {"rule": "seed", "source": "published survey"}
    for d, row in _SEED_GRID.items():
        for off, cell in enumerate(row):
            n = 2 * d + off
            if cell.endswith("+"):
                table.set_lower(d, n, int(cell[:-1]), prov)
            elif "-" in cell:
                lo, hi = cell.split("-")
                table.set_lower(d, n, int(lo), prov)
                table.set_upper(d, n, int(hi), prov)
            else:
                v = int(cell)
                table.set_lower(d, n, v, prov)
                table.set_upper(d, n, v, prov)
    d3 = {"rule": "seed", "source": "exact d=3 formula floor(2n/3)-1"}
    for n in range(4, 25):
        v = (2 * n) // 3 - 1
        table.set_lower(3, n, v, d3)
        table.set_upper(3, n, v, d3)
    return table


def apply_nonexistence(table: BoundsTable, d: int, n: int, k: int, source="fact") -> BoundsTable:
    """Record 'no (d,n)-polytope has facet-disjoint vertices at distance
    k' and fire the step-down rule if its premise holds."""
    table.facts.append({"d": d, "n": n, "k": k, "source": source})
    premise = table.get(d - 1, n - 1)
    if premise is None or premise.upper is None or premise.upper >= k:
        table.notes.append(
            f"fact ({d},{n},{k}) inert: no known upper bound below {k} "
            f"for ({d - 1},{n - 1})"
        )
        return table
    table.set_upper(
        d,
        n,
        k - 1,
        {
            "rule": "step-down",
            "fact": [d, n, k],
            "premise_cell": [d - 1, n - 1],
            "premise_upper": premise.upper,
            "source": source,
        },
        hypothetical=premise.hypothetical,
    )
    return table


def apply_hypothesis(table: BoundsTable, d: int, n: int, value: int) -> BoundsTable:
    prov = {"rule": "hypothesis", "value": value}
    table.set_lower(d, n, value, prov)
    table.set_upper(d, n, value, prov, hypothetical=True)
    return table


def apply_klee_walkup(table: BoundsTable) -> BoundsTable:
    """Tighten upper bounds with the step-up inequality, iterated to a
    fixpoint within the table's dimension range."""
    max_d = max((d for d, _ in table.cells), default=0)
    changed = True
    while changed:
        changed = False
        for d in range(3, max_d + 1):
            for kk in range(4):
                n = 2 * d + kk
                premise = table.get(d - 1, n - 1)
                if premise is None or premise.upper is None:
                    continue
                bound = premise.upper + kk // 2 + 1
                cur = table.get(d, n)
                if cur is None or cur.upper is None or bound < cur.upper:
                    table.set_upper(
                        d,
                        n,
                        bound,
                        {
                            "rule": "klee-walkup",
                            "premise_cell": [d - 1, n - 1],
                            "premise_upper": premise.upper,
                            "k": kk,
                        },
                        hypothetical=premise.hypothetical,
                    )
                    changed = True
    return table


def render(table: BoundsTable, d_range=(4, 8), offset_range=(0, 4)) -> str:
    """Grid indexed by d (rows) and n-2d (columns); cells use the survey
    notation: exact 'x', range 'a-b', lower-only 'a+'."""
    d_lo, d_hi = d_range
    o_lo, o_hi = offset_range
    if d_lo > d_hi or o_lo > o_hi:
        return ""
    offsets = list(range(o_lo, o_hi + 1))
    rows = [["d\\n-2d"] + [str(o) for o in offsets]]
    for d in range(d_lo, d_hi + 1):
        row = [str(d)]
        for o in offsets:
            c = table.get(d, 2 * d + o)
            row.append(c.cell() if c is not None else "?")
        rows.append(row)
    widths = [max(len(r[i]) for r in rows) for i in range(len(rows[0]))]
    return "\n".join(
        "  ".join(cell.rjust(widths[i]) for i, cell in enumerate(r)) for r in rows
    )


def load_facts(path: str) -> list[dict]:
    with open(path) as f:
        data = json.load(f)
    if not isinstance(data, list):
        raise ValueError("facts file must hold a JSON list")
    for rec in data:
        for key in ("d", "n", "k"):
            if key not in rec:
                raise ValueError(f"fact record missing {key!r}: {rec}")
    return data


def load_hypotheses(path: str) -> list[dict]:
    with open(path) as f:
        data = json.load(f)
    if not isinstance(data, list):
        raise ValueError("hypotheses file must hold a JSON list")
    for rec in data:
        for key in ("d", "n", "value"):
            if key not in rec:
                raise ValueError(f"hypothesis record missing {key!r}: {rec}")
    return data
