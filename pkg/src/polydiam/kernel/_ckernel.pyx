# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled CDCL solver kernel: typed twin of pykernel.CdclSolver.

Same algorithm and data layout (two-watched literals, first-UIP with
recursive minimization, VSIDS + phase saving, Luby restarts,
activity-based learnt reduction); C arrays instead of Python lists.
"""

from libc.stdlib cimport malloc, realloc, free
from libc.string cimport memset

IMPL = "c"

DEF UNDEF = 2

cdef struct IVec:
    int *data
    int size
    int cap

cdef inline void iv_init(IVec *v) nogil:
    v.data = NULL
    v.size = 0
    v.cap = 0

cdef inline void iv_push(IVec *v, int x) nogil:
    if v.size == v.cap:
        v.cap = 4 if v.cap == 0 else v.cap * 2
        v.data = <int *> realloc(v.data, v.cap * sizeof(int))
    v.data[v.size] = x
    v.size += 1

cdef inline void iv_free(IVec *v) nogil:
    if v.data != NULL:
        free(v.data)
    v.data = NULL
    v.size = 0
    v.cap = 0


cdef double luby(int x) nogil:
    cdef int size = 1, seq = 0
    while size < x + 1:
        seq += 1
        size = 2 * size + 1
    while size - 1 != x:
        size = (size - 1) >> 1
        seq -= 1
        x = x % size
    return <double> (1 << seq)


cdef class CdclSolver:
    cdef public int nvars
    cdef public bint ok
    cdef public long conflicts, propagations

    cdef IVec db            # flat clause literals
    cdef IVec coff          # clause offset into db
    cdef IVec clen          # clause length (0 = removed)
    cdef IVec lbd           # glue level count per clause (0 for originals)
    cdef IVec *watches      # per literal: flat (clause, blocker) pairs
    cdef unsigned char *assign
    cdef int *level
    cdef int *reason
    cdef int *trail
    cdef int trail_size
    cdef int *trail_lim
    cdef int trail_lim_size
    cdef int qhead
    cdef double *activity
    cdef double var_inc, cla_inc
    cdef unsigned char *polarity
    cdef int *heap
    cdef int heap_size
    cdef int *heap_pos
    cdef unsigned char *seen
    cdef double *cla_act
    cdef int cla_cap
    cdef int learnt_from
    cdef int n_live_learnts
    cdef double max_learnts
    cdef int _last_lbd
    cdef int *scratch        # clause staging / analyze buffers
    cdef int *to_clear
    cdef int *rstack

    def __cinit__(self, int nvars, clauses):
        cdef int v, nlits = 2 * nvars
        self.nvars = nvars
        self.ok = True
        self.conflicts = 0
        self.propagations = 0
        iv_init(&self.db)
        iv_init(&self.coff)
        iv_init(&self.clen)
        iv_init(&self.lbd)
        self.watches = <IVec *> malloc(nlits * sizeof(IVec))
        for v in range(nlits):
            iv_init(&self.watches[v])
        self.assign = <unsigned char *> malloc(nlits)
        memset(self.assign, UNDEF, nlits)
        self.level = <int *> malloc(nvars * sizeof(int))
        self.reason = <int *> malloc(nvars * sizeof(int))
        self.trail = <int *> malloc((nvars + 1) * sizeof(int))
        self.trail_size = 0
        self.trail_lim = <int *> malloc((nvars + 1) * sizeof(int))
        self.trail_lim_size = 0
        self.qhead = 0
        self.activity = <double *> malloc(nvars * sizeof(double))
        self.var_inc = 1.0
        self.cla_inc = 1.0
        self.polarity = <unsigned char *> malloc(nvars)
        self.heap = <int *> malloc(nvars * sizeof(int))
        self.heap_size = 0
        self.heap_pos = <int *> malloc(nvars * sizeof(int))
        self.seen = <unsigned char *> malloc(nvars)
        self.cla_act = NULL
        self.cla_cap = 0
        self.learnt_from = 0
        self.n_live_learnts = 0
        self.max_learnts = 0.0
        self.scratch = <int *> malloc((nvars + 1) * sizeof(int))
        self.to_clear = <int *> malloc((nvars + 1) * sizeof(int))
        self.rstack = <int *> malloc((nvars + 1) * sizeof(int))
        for v in range(nvars):
            self.level[v] = 0
            self.reason[v] = -1
            self.activity[v] = 0.0
            self.polarity[v] = 0
            self.heap_pos[v] = -1
            self.seen[v] = 0
        cdef list lits
        for c in clauses:
            lits = [2 * ((l if l > 0 else -l) - 1) + (1 if l < 0 else 0) for l in c]
            if not self._add_clause(lits):
                self.ok = False
                break
        self.learnt_from = self.clen.size
        for v in range(nvars):
            self._heap_insert(v)

    def __dealloc__(self):
        cdef int i
        iv_free(&self.db)
        iv_free(&self.coff)
        iv_free(&self.clen)
        iv_free(&self.lbd)
        if self.watches != NULL:
            for i in range(2 * self.nvars):
                iv_free(&self.watches[i])
            free(self.watches)
        free(self.assign)
        free(self.level)
        free(self.reason)
        free(self.trail)
        free(self.trail_lim)
        free(self.activity)
        free(self.polarity)
        free(self.heap)
        free(self.heap_pos)
        free(self.seen)
        if self.cla_act != NULL:
            free(self.cla_act)
        free(self.scratch)
        free(self.to_clear)
        free(self.rstack)

    # ------------------------------------------------------------ heap

    cdef void _heap_insert(self, int v):
        if self.heap_pos[v] >= 0:
            return
        self.heap[self.heap_size] = v
        self.heap_pos[v] = self.heap_size
        self.heap_size += 1
        self._heap_up(self.heap_size - 1)

    cdef void _heap_up(self, int i):
        cdef int *h = self.heap
        cdef int *pos = self.heap_pos
        cdef double *act = self.activity
        cdef int x = h[i], p
        cdef double ax = act[x]
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

    cdef void _heap_down(self, int i):
        cdef int *h = self.heap
        cdef int *pos = self.heap_pos
        cdef double *act = self.activity
        cdef int n = self.heap_size
        cdef int x = h[i], l, r, c
        cdef double ax = act[x]
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

    cdef int _heap_pop(self):
        cdef int top = self.heap[0]
        cdef int last
        self.heap_pos[top] = -1
        self.heap_size -= 1
        if self.heap_size > 0:
            last = self.heap[self.heap_size]
            self.heap[0] = last
            self.heap_pos[last] = 0
            self._heap_down(0)
        return top

    # --------------------------------------------------------- clauses

    cdef bint _add_clause(self, list lits):
        cdef int i, n = 0, l, prev
        cdef int *buf = self.scratch
        lits = sorted(set(lits))
        for i in range(len(lits) - 1):
            if (<int> lits[i]) == (<int> lits[i + 1]) ^ 1:
                return True  # tautology
        for l in lits:
            if self.assign[l] == 1:
                return True
            if self.assign[l] == UNDEF:
                buf[n] = l
                n += 1
        if n == 0:
            return False
        if n == 1:
            return self._enqueue(buf[0], -1) and self._propagate() < 0
        self._attach(buf, n, 0.0, 0)
        return True

    cdef int _attach(self, int *lits, int n, double act, int lbd):
        cdef int ci = self.clen.size
        cdef int i
        iv_push(&self.coff, self.db.size)
        iv_push(&self.clen, n)
        iv_push(&self.lbd, lbd)
        for i in range(n):
            iv_push(&self.db, lits[i])
        if ci >= self.cla_cap:
            self.cla_cap = 1024 if self.cla_cap == 0 else self.cla_cap * 2
            self.cla_act = <double *> realloc(self.cla_act, self.cla_cap * sizeof(double))
        self.cla_act[ci] = act
        iv_push(&self.watches[lits[0] ^ 1], ci)
        iv_push(&self.watches[lits[0] ^ 1], lits[1])
        iv_push(&self.watches[lits[1] ^ 1], ci)
        iv_push(&self.watches[lits[1] ^ 1], lits[0])
        return ci

    # ----------------------------------------------------- assignments

    cdef bint _enqueue(self, int lit, int reason):
        if self.assign[lit] != UNDEF:
            return self.assign[lit] == 1
        self.assign[lit] = 1
        self.assign[lit ^ 1] = 0
        cdef int v = lit >> 1
        self.level[v] = self.trail_lim_size
        self.reason[v] = reason
        self.trail[self.trail_size] = lit
        self.trail_size += 1
        return True

    cdef void _backtrack(self, int lvl):
        if self.trail_lim_size <= lvl:
            return
        cdef int bound = self.trail_lim[lvl]
        cdef int i, lit, v
        for i in range(self.trail_size - 1, bound - 1, -1):
            lit = self.trail[i]
            v = lit >> 1
            self.assign[lit] = UNDEF
            self.assign[lit ^ 1] = UNDEF
            self.polarity[v] = 1 - (lit & 1)
            self.reason[v] = -1
            if self.heap_pos[v] < 0:
                self._heap_insert(v)
        self.trail_size = bound
        self.trail_lim_size = lvl
        if self.qhead > bound:
            self.qhead = bound

    # ----------------------------------------------------- propagation

    cdef int _propagate(self):
        cdef unsigned char *assign = self.assign
        cdef int confl = -1
        cdef int p, falsified, i, j, n, ci, blocker, first, ln, kk, lk, off
        cdef IVec *ws
        cdef int *wd
        cdef int *lits
        while self.qhead < self.trail_size:
            p = self.trail[self.qhead]
            self.qhead += 1
            self.propagations += 1
            falsified = p ^ 1
            ws = &self.watches[p]
            wd = ws.data
            n = ws.size
            i = 0
            j = 0
            while i < n:
                ci = wd[i]
                blocker = wd[i + 1]
                i += 2
                if assign[blocker] == 1:
                    wd[j] = ci
                    wd[j + 1] = blocker
                    j += 2
                    continue
                off = self.coff.data[ci]
                ln = self.clen.data[ci]
                lits = self.db.data + off
                if lits[0] == falsified:
                    lits[0] = lits[1]
                    lits[1] = falsified
                first = lits[0]
                if assign[first] == 1:
                    wd[j] = ci
                    wd[j + 1] = first
                    j += 2
                    continue
                kk = 2
                while kk < ln:
                    lk = lits[kk]
                    if assign[lk] != 0:
                        lits[1] = lk
                        lits[kk] = falsified
                        iv_push(&self.watches[lk ^ 1], ci)
                        iv_push(&self.watches[lk ^ 1], first)
                        break
                    kk += 1
                if kk < ln:
                    continue
                wd[j] = ci
                wd[j + 1] = first
                j += 2
                if assign[first] == 0:
                    while i < n:
                        wd[j] = wd[i]
                        wd[j + 1] = wd[i + 1]
                        i += 2
                        j += 2
                    self.qhead = self.trail_size
                    confl = ci
                else:
                    self._enqueue(first, ci)
            ws.size = j
            if confl >= 0:
                break
        return confl

    # -------------------------------------------------------- analysis

    cdef void _bump_var(self, int v):
        cdef int u
        self.activity[v] += self.var_inc
        if self.activity[v] > 1e100:
            for u in range(self.nvars):
                self.activity[u] *= 1e-100
            self.var_inc *= 1e-100
        if self.heap_pos[v] >= 0:
            self._heap_up(self.heap_pos[v])

    cdef void _bump_cla(self, int ci):
        cdef int i
        if ci >= self.learnt_from:
            self.cla_act[ci] += self.cla_inc
            if self.cla_act[ci] > 1e20:
                for i in range(self.learnt_from, self.clen.size):
                    self.cla_act[i] *= 1e-20
                self.cla_inc *= 1e-20

    cdef int _analyze(self, int confl, int *out_bt):
        """First-UIP; learnt clause left in scratch; returns its length."""
        cdef unsigned char *seen = self.seen
        cdef int *level = self.level
        cdef int *learnt = self.scratch
        cdef int nlearnt = 1
        cdef int nclear = 0
        cdef int path = 0
        cdef int p = -1
        cdef int idx = self.trail_size - 1
        cdef int c = confl
        cdef int i, q, v, start, off, ln, mi, tmp
        cdef int *lits
        while True:
            self._bump_cla(c)
            off = self.coff.data[c]
            ln = self.clen.data[c]
            lits = self.db.data + off
            start = 0 if p < 0 else 1
            for i in range(start, ln):
                q = lits[i]
                v = q >> 1
                if seen[v] == 0 and level[v] > 0:
                    seen[v] = 1
                    self.to_clear[nclear] = v
                    nclear += 1
                    self._bump_var(v)
                    if level[v] >= self.trail_lim_size:
                        path += 1
                    else:
                        learnt[nlearnt] = q
                        nlearnt += 1
            while seen[self.trail[idx] >> 1] == 0:
                idx -= 1
            p = self.trail[idx]
            idx -= 1
            path -= 1
            if path <= 0:
                break
            c = self.reason[p >> 1]
        learnt[0] = p ^ 1
        # recursive minimization over marked literals
        cdef int keep = 1
        for i in range(1, nlearnt):
            q = learnt[i]
            if self.reason[q >> 1] < 0 or not self._redundant(q, &nclear):
                learnt[keep] = q
                keep += 1
        nlearnt = keep
        for i in range(nclear):
            seen[self.to_clear[i]] = 0
        if nlearnt == 1:
            out_bt[0] = 0
        else:
            mi = 1
            for i in range(2, nlearnt):
                if level[learnt[i] >> 1] > level[learnt[mi] >> 1]:
                    mi = i
            tmp = learnt[1]
            learnt[1] = learnt[mi]
            learnt[mi] = tmp
            out_bt[0] = level[learnt[1] >> 1]
        self._last_lbd = self._compute_lbd(learnt, nlearnt)
        return nlearnt

    cdef int _compute_lbd(self, int *lits, int n):
        """Glue value: distinct decision levels among the clause lits."""
        cdef int i, lvl, out = 0
        cdef set s = set()
        for i in range(n):
            lvl = self.level[lits[i] >> 1]
            if lvl not in s:
                s.add(lvl)
                out += 1
        return out

    cdef bint _redundant(self, int lit, int *nclear):
        cdef unsigned char *seen = self.seen
        cdef int top = nclear[0]
        cdef int nstack = 1
        cdef int l, c, off, ln, i, x, v
        cdef int *lits
        self.rstack[0] = lit
        while nstack > 0:
            nstack -= 1
            l = self.rstack[nstack]
            c = self.reason[l >> 1]
            off = self.coff.data[c]
            ln = self.clen.data[c]
            lits = self.db.data + off
            for i in range(1, ln):
                x = lits[i]
                v = x >> 1
                if seen[v] or self.level[v] == 0:
                    continue
                if self.reason[v] < 0:
                    for i in range(top, nclear[0]):
                        seen[self.to_clear[i]] = 0
                    nclear[0] = top
                    return False
                seen[v] = 1
                self.to_clear[nclear[0]] = v
                nclear[0] += 1
                self.rstack[nstack] = x
                nstack += 1
        return True

    # ------------------------------------------------------- reduce DB

    cdef void _reduce_db(self):
        cdef int ci, i, n_learnt = 0
        cdef list order = []
        for ci in range(self.learnt_from, self.clen.size):
            if self.clen.data[ci] > 0:
                order.append((self.cla_act[ci], ci))
                n_learnt += 1
        if n_learnt == 0:
            return
        order.sort()
        cdef unsigned char *dead = <unsigned char *> malloc(self.clen.size)
        memset(dead, 0, self.clen.size)
        for i in range(self.trail_size):
            ci = self.reason[self.trail[i] >> 1]
            if ci >= 0:
                dead[ci] = 2  # locked marker
        cdef int n_removed = 0
        cdef int limit = n_learnt // 2
        for i in range(limit):
            ci = <int> (<tuple> order[i])[1]
            if dead[ci] == 2 or self.clen.data[ci] <= 2 or (
                self.lbd.data[ci] != 0 and self.lbd.data[ci] <= 2
            ):
                continue
            dead[ci] = 1
            self.clen.data[ci] = 0
            n_removed += 1
        if n_removed == 0:
            free(dead)
            return
        cdef IVec *ws
        cdef int j, k
        for i in range(2 * self.nvars):
            ws = &self.watches[i]
            j = 0
            k = 0
            while k < ws.size:
                if dead[ws.data[k]] != 1:
                    ws.data[j] = ws.data[k]
                    ws.data[j + 1] = ws.data[k + 1]
                    j += 2
                k += 2
            ws.size = j
        free(dead)
        self.n_live_learnts = n_learnt - n_removed

    # ------------------------------------------------------------ main

    def solve(self, long conflict_budget=-1):
        """Returns "SAT", "UNSAT", or "UNKNOWN" (budget exhausted)."""
        if not self.ok:
            return "UNSAT"
        if self._propagate() >= 0:
            self.ok = False
            return "UNSAT"
        if self.max_learnts == 0.0:
            self.max_learnts = max(3000.0, min(self.clen.size / 4.0, 30000.0))
        cdef int restart = 0
        cdef long used = 0
        cdef double limit
        cdef int local, confl, nlearnt, bt, v, u, ci
        while True:
            limit = luby(restart) * 100.0
            restart += 1
            local = 0
            while local < limit:
                confl = self._propagate()
                if confl >= 0:
                    self.conflicts += 1
                    used += 1
                    local += 1
                    if self.trail_lim_size == 0:
                        self.ok = False
                        return "UNSAT"
                    nlearnt = self._analyze(confl, &bt)
                    self._backtrack(bt)
                    if nlearnt == 1:
                        self._enqueue(self.scratch[0], -1)
                    else:
                        ci = self._attach(self.scratch, nlearnt, self.cla_inc, self._last_lbd)
                        self.n_live_learnts += 1
                        self._enqueue(self.scratch[0], ci)
                    self.var_inc /= 0.95
                    self.cla_inc /= 0.999
                    if conflict_budget >= 0 and used >= conflict_budget:
                        self._backtrack(0)
                        return "UNKNOWN"
                    if self.n_live_learnts > self.max_learnts:
                        self._reduce_db()
                        self.max_learnts *= 1.1
                else:
                    v = -1
                    while self.heap_size > 0:
                        u = self._heap_pop()
                        if self.assign[2 * u] == UNDEF:
                            v = u
                            break
                    if v < 0:
                        return "SAT"
                    self.trail_lim[self.trail_lim_size] = self.trail_size
                    self.trail_lim_size += 1
                    self._enqueue(2 * v + 1 - self.polarity[v], -1)
            self._backtrack(0)

    def model(self):
        """DIMACS literals for every variable (valid after SAT)."""
        cdef int v
        return [
            v + 1 if self.assign[2 * v] == 1 else -(v + 1)
            for v in range(self.nvars)
        ]

    def propagate_under(self, dimacs_lits):
        """Unit-propagate assumptions on a temporary decision level.

        Returns (consistent, implied DIMACS literals); state restored.
        """
        if not self.ok:
            return False, []
        if self._propagate() >= 0:
            self.ok = False
            return False, []
        cdef int base = self.trail_lim_size
        self.trail_lim[self.trail_lim_size] = self.trail_size
        self.trail_lim_size += 1
        cdef bint ok = True
        cdef int l, il, i
        for l in dimacs_lits:
            il = 2 * ((l if l > 0 else -l) - 1) + (1 if l < 0 else 0)
            if not self._enqueue(il, -1):
                ok = False
                break
        if ok:
            ok = self._propagate() < 0
        implied = []
        if ok:
            for i in range(self.trail_size):
                l = self.trail[i]
                implied.append(-((l >> 1) + 1) if l & 1 else (l >> 1) + 1)
        self._backtrack(base)
        return ok, implied
