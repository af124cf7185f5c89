"""Pure-Python CDCL solver kernel.

Reference twin of the compiled kernel in _ckernel.pyx: same algorithm
(two-watched literals, first-UIP learning with recursive minimization,
VSIDS with phase saving, Luby restarts, activity-based learnt-clause
reduction) and same results, roughly two orders of magnitude slower.

Internal literal encoding: DIMACS literal l maps to 2*(|l|-1) + (l<0);
negation is lit^1.
"""

from __future__ import annotations

UNDEF = 2
IMPL = "python"

_LUBY_BASE = 100.0
_VAR_DECAY = 0.95
_CLA_DECAY = 0.999


def _luby(x: int) -> float:
    """x-th element (0-based) of the Luby restart sequence 1,1,2,1,1,2,4,..."""
    size, seq = 1, 0
    while size < x + 1:
        seq += 1
        size = 2 * size + 1
    while size - 1 != x:
        size = (size - 1) >> 1
        seq -= 1
        x %= size
    return float(1 << seq)


def to_internal(lit: int) -> int:
    v = lit if lit > 0 else -lit
    return 2 * (v - 1) + (1 if lit < 0 else 0)


def to_dimacs(ilit: int) -> int:
    v = (ilit >> 1) + 1
    return -v if ilit & 1 else v


class CdclSolver:
    def __init__(self, nvars: int, clauses):
        self.nvars = nvars
        self.ok = True
        self.clauses: list[list[int]] = []
        self.cla_act: list[float] = []
        self.lbd: list[int] = []
        self.watches: list[list[list[int]]] = [[] for _ in range(2 * nvars)]
        self.assign = bytearray([UNDEF] * (2 * nvars))
        self.level = [0] * nvars
        self.reason = [-1] * nvars
        self.trail: list[int] = []
        self.trail_lim: list[int] = []
        self.qhead = 0
        self.activity = [0.0] * nvars
        self.var_inc = 1.0
        self.cla_inc = 1.0
        self.polarity = bytearray(nvars)  # 1 = last assigned True
        self.heap: list[int] = []
        self.heap_pos = [-1] * nvars
        self.seen = bytearray(nvars)
        self.conflicts = 0
        self.propagations = 0
        self.n_live_learnts = 0
        self.max_learnts = 0.0
        for c in clauses:
            if not self.add_clause([to_internal(l) for l in c]):
                self.ok = False
                break
        self.learnt_from = len(self.clauses)
        for v in range(nvars):
            self._heap_insert(v)

    # ------------------------------------------------------------ heap

    def _heap_insert(self, v):
        if self.heap_pos[v] >= 0:
            return
        self.heap.append(v)
        self.heap_pos[v] = len(self.heap) - 1
        self._heap_up(len(self.heap) - 1)

    def _heap_up(self, i):
        h, pos, act = self.heap, self.heap_pos, self.activity
        x = h[i]
        ax = act[x]
        while i > 0:
            p = (i - 1) >> 1
            if ax > act[h[p]]:
                h[i] = h[p]
                pos[h[p]] = i
                i = p
            else:
                break
        h[i] = x
        pos[x] = i

    def _heap_down(self, i):
        h, pos, act = self.heap, self.heap_pos, self.activity
        n = len(h)
        x = h[i]
        ax = act[x]
        while True:
            l = 2 * i + 1
            if l >= n:
                break
            r = l + 1
            c = r if r < n and act[h[r]] > act[h[l]] else l
            if act[h[c]] > ax:
                h[i] = h[c]
                pos[h[c]] = i
                i = c
            else:
                break
        h[i] = x
        pos[x] = i

    def _heap_pop(self):
        h, pos = self.heap, self.heap_pos
        top = h[0]
        last = h.pop()
        pos[top] = -1
        if h:
            h[0] = last
            pos[last] = 0
            self._heap_down(0)
        return top

    # --------------------------------------------------------- clauses

    def add_clause(self, lits: list[int]) -> bool:
        """Add at decision level 0. Returns False on immediate conflict."""
        s = set(lits)
        if any(l ^ 1 in s for l in s):
            return True
        assign = self.assign
        out = []
        for l in sorted(s):
            v = assign[l]
            if v == 1:
                return True
            if v == UNDEF:
                out.append(l)
        if not out:
            return False
        if len(out) == 1:
            return self._enqueue(out[0], -1) and self.propagate() < 0
        ci = len(self.clauses)
        self.clauses.append(out)
        self.cla_act.append(0.0)
        self.lbd.append(0)
        self.watches[out[0] ^ 1].append([ci, out[1]])
        self.watches[out[1] ^ 1].append([ci, out[0]])
        return True

    def _attach_learnt(self, lits: list[int]) -> int:
        ci = len(self.clauses)
        self.clauses.append(lits)
        self.cla_act.append(self.cla_inc)
        self.lbd.append(len({self.level[l >> 1] for l in lits}))
        self.watches[lits[0] ^ 1].append([ci, lits[1]])
        self.watches[lits[1] ^ 1].append([ci, lits[0]])
        self.n_live_learnts += 1
        return ci

    # ----------------------------------------------------- assignments

    def _enqueue(self, lit: int, reason: int) -> bool:
        a = self.assign
        if a[lit] != UNDEF:
            return a[lit] == 1
        a[lit] = 1
        a[lit ^ 1] = 0
        v = lit >> 1
        self.level[v] = len(self.trail_lim)
        self.reason[v] = reason
        self.trail.append(lit)
        return True

    def _backtrack(self, lvl: int):
        if len(self.trail_lim) <= lvl:
            return
        bound = self.trail_lim[lvl]
        a = self.assign
        trail = self.trail
        for i in range(len(trail) - 1, bound - 1, -1):
            lit = trail[i]
            v = lit >> 1
            a[lit] = UNDEF
            a[lit ^ 1] = UNDEF
            self.polarity[v] = 1 - (lit & 1)
            self.reason[v] = -1
            if self.heap_pos[v] < 0:
                self._heap_insert(v)
        del trail[bound:]
        del self.trail_lim[lvl:]
        self.qhead = bound if self.qhead > bound else self.qhead

    # ----------------------------------------------------- propagation

    def propagate(self) -> int:
        """Exhaust the queue; return conflicting clause index or -1."""
        assign = self.assign
        watches = self.watches
        clauses = self.clauses
        trail = self.trail
        confl = -1
        while self.qhead < len(trail):
            p = trail[self.qhead]
            self.qhead += 1
            self.propagations += 1
            falsified = p ^ 1
            ws = watches[p]
            i = j = 0
            n = len(ws)
            while i < n:
                w = ws[i]
                i += 1
                if assign[w[1]] == 1:
                    ws[j] = w
                    j += 1
                    continue
                ci = w[0]
                lits = clauses[ci]
                if lits[0] == falsified:
                    lits[0] = lits[1]
                    lits[1] = falsified
                first = lits[0]
                if assign[first] == 1:
                    w[1] = first
                    ws[j] = w
                    j += 1
                    continue
                moved = False
                for kk in range(2, len(lits)):
                    lk = lits[kk]
                    if assign[lk] != 0:
                        lits[1] = lk
                        lits[kk] = falsified
                        watches[lk ^ 1].append([ci, first])
                        moved = True
                        break
                if moved:
                    continue
                w[1] = first
                ws[j] = w
                j += 1
                if assign[first] == 0:
                    # conflict: keep the remaining watchers untouched
                    while i < n:
                        ws[j] = ws[i]
                        j += 1
                        i += 1
                    self.qhead = len(trail)
                    confl = ci
                else:
                    self._enqueue(first, ci)
            del ws[j:]
            if confl >= 0:
                break
        return confl

    # -------------------------------------------------------- analysis

    def _bump_var(self, v):
        act = self.activity
        act[v] += self.var_inc
        if act[v] > 1e100:
            for u in range(self.nvars):
                act[u] *= 1e-100
            self.var_inc *= 1e-100
        if self.heap_pos[v] >= 0:
            self._heap_up(self.heap_pos[v])

    def _bump_cla(self, ci):
        if ci >= self.learnt_from:
            self.cla_act[ci] += self.cla_inc
            if self.cla_act[ci] > 1e20:
                for i in range(self.learnt_from, len(self.cla_act)):
                    self.cla_act[i] *= 1e-20
                self.cla_inc *= 1e-20

    def analyze(self, confl: int):
        """First-UIP conflict analysis; returns (learnt, backtrack level).

        learnt[0] is the asserting literal.
        """
        seen = self.seen
        level = self.level
        reason = self.reason
        trail = self.trail
        cur = len(self.trail_lim)
        learnt = [0]
        to_clear: list[int] = []
        path = 0
        p = -1
        idx = len(trail) - 1
        c = confl
        while True:
            self._bump_cla(c)
            lits = self.clauses[c]
            for q in lits if p < 0 else lits[1:]:
                v = q >> 1
                if not seen[v] and level[v] > 0:
                    seen[v] = 1
                    to_clear.append(v)
                    self._bump_var(v)
                    if level[v] >= cur:
                        path += 1
                    else:
                        learnt.append(q)
            while not seen[trail[idx] >> 1]:
                idx -= 1
            p = trail[idx]
            idx -= 1
            path -= 1
            if path <= 0:
                break
            c = reason[p >> 1]
        learnt[0] = p ^ 1
        keep = [learnt[0]]
        for q in learnt[1:]:
            if reason[q >> 1] < 0 or not self._redundant(q, to_clear):
                keep.append(q)
        learnt = keep
        for v in to_clear:
            seen[v] = 0
        if len(learnt) == 1:
            bt = 0
        else:
            mi = 1
            for i in range(2, len(learnt)):
                if level[learnt[i] >> 1] > level[learnt[mi] >> 1]:
                    mi = i
            learnt[1], learnt[mi] = learnt[mi], learnt[1]
            bt = level[learnt[1] >> 1]
        return learnt, bt

    def _redundant(self, lit: int, to_clear: list[int]) -> bool:
        """True iff lit is implied by currently-marked literals, marking
        the intermediates on success (memoized via seen)."""
        seen = self.seen
        level = self.level
        reason = self.reason
        stack = [lit]
        top = len(to_clear)
        while stack:
            l = stack.pop()
            for x in self.clauses[reason[l >> 1]][1:]:
                v = x >> 1
                if seen[v] or level[v] == 0:
                    continue
                if reason[v] < 0:
                    for u in to_clear[top:]:
                        seen[u] = 0
                    del to_clear[top:]
                    return False
                seen[v] = 1
                to_clear.append(v)
                stack.append(x)
        return True

    # ------------------------------------------------------- reduce DB

    def _reduce_db(self):
        clauses = self.clauses
        learnts = [ci for ci in range(self.learnt_from, len(clauses)) if clauses[ci]]
        if not learnts:
            return
        learnts.sort(key=self.cla_act.__getitem__)
        locked = {self.reason[l >> 1] for l in self.trail}
        removed = set()
        for ci in learnts[: len(learnts) // 2]:
            if ci in locked or len(clauses[ci]) <= 2:
                continue
            if self.lbd[ci] != 0 and self.lbd[ci] <= 2:
                continue  # glue clauses are kept forever
            removed.add(ci)
            clauses[ci] = []
        if removed:
            for lst in self.watches:
                lst[:] = [w for w in lst if w[0] not in removed]
            self.n_live_learnts = len(learnts) - len(removed)

    # ------------------------------------------------------------ main

    def solve(self, conflict_budget: int = -1) -> str:
        """Returns "SAT", "UNSAT", or "UNKNOWN" (budget exhausted)."""
        if not self.ok:
            return "UNSAT"
        if self.propagate() >= 0:
            self.ok = False
            return "UNSAT"
        self.max_learnts = max(3000.0, min(len(self.clauses) / 4.0, 30000.0))
        restart = 0
        used = 0
        while True:
            limit = _luby(restart) * _LUBY_BASE
            restart += 1
            local = 0
            while local < limit:
                confl = self.propagate()
                if confl >= 0:
                    self.conflicts += 1
                    used += 1
                    local += 1
                    if not self.trail_lim:
                        self.ok = False
                        return "UNSAT"
                    learnt, bt = self.analyze(confl)
                    self._backtrack(bt)
                    if len(learnt) == 1:
                        self._enqueue(learnt[0], -1)
                    else:
                        ci = self._attach_learnt(learnt)
                        self._enqueue(learnt[0], ci)
                    self.var_inc /= _VAR_DECAY
                    self.cla_inc /= _CLA_DECAY
                    if conflict_budget >= 0 and used >= conflict_budget:
                        self._backtrack(0)
                        return "UNKNOWN"
                    if self.n_live_learnts > self.max_learnts:
                        self._reduce_db()
                        self.max_learnts *= 1.1
                else:
                    v = -1
                    while self.heap:
                        u = self._heap_pop()
                        if self.assign[2 * u] == UNDEF:
                            v = u
                            break
                    if v < 0:
                        return "SAT"
                    self.trail_lim.append(len(self.trail))
                    self._enqueue(2 * v + 1 - self.polarity[v], -1)
            self._backtrack(0)

    def model(self) -> list[int]:
        """DIMACS literals for every variable (valid after SAT)."""
        return [
            v + 1 if self.assign[2 * v] == 1 else -(v + 1)
            for v in range(self.nvars)
        ]

    def propagate_under(self, dimacs_lits) -> tuple[bool, list[int]]:
        """Unit-propagate assumptions on a temporary decision level.

        Returns (consistent, implied DIMACS literals including the
        assumptions and root-level units); solver state is restored.
        """
        if not self.ok:
            return False, []
        if self.propagate() >= 0:
            self.ok = False
            return False, []
        base = len(self.trail_lim)
        self.trail_lim.append(len(self.trail))
        ok = True
        for l in dimacs_lits:
            if not self._enqueue(to_internal(l), -1):
                ok = False
                break
        if ok:
            ok = self.propagate() < 0
        implied = [to_dimacs(l) for l in self.trail] if ok else []
        self._backtrack(base)
        return ok, implied
