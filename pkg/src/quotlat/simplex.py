"""Exact rational simplex for LPs over free variables.

The feasibility search repeatedly maximizes a linear functional over a
polyhedron {y : A y >= b} whose constraint set grows between solves.  The
solver keeps every coefficient an exact rational: two-phase primal simplex
with Bland's rule for a cold start (no cycling), and dual simplex steps to
re-optimize after new constraints arrive, since the old optimal basis stays
dual feasible.

Free variables are split y = u - w with u, w >= 0; a slack turns each
constraint into an equality.  Artificial columns from phase 1 are kept but
barred from ever re-entering the basis.
"""

from __future__ import annotations

from dataclasses import dataclass

from .exact import QONE, QZERO, qify

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


@dataclass
class LPResult:
    status: str
    point: list | None
    value: object  # mpq when optimal


class ExactLP:
    """max objective . y subject to rows of (a . y >= b), y free."""

    def __init__(self, nvars, objective, constant=QZERO):
        self.nvars = nvars
        self.objective = [qify(c) for c in objective]
        self.constant = qify(constant)
        self.cons = []  # (coeffs, rhs) as given
        self._tab = None  # rows of coefficients, parallel to _basis
        self._rhs = []
        self._basis = []
        self._obj = []  # reduced-cost row (z_j - c_j); optimal when all >= 0
        self._objval = QZERO
        self._ncols = 2 * nvars
        self._frozen_rows = 0  # constraints already in the tableau
        self._banned = set()  # artificial columns
        self._state = "virgin"

    # -- construction -----------------------------------------------------

    def add_ge(self, coeffs, rhs):
        if len(coeffs) != self.nvars:
            raise ValueError("constraint arity mismatch")
        self.cons.append(([qify(c) for c in coeffs], qify(rhs)))
        if self._state == OPTIMAL:
            self._state = "stale"

    def clone_fresh(self) -> "ExactLP":
        lp = ExactLP(self.nvars, self.objective, self.constant)
        for coeffs, rhs in self.cons:
            lp.add_ge(coeffs, rhs)
        return lp

    # -- tableau plumbing --------------------------------------------------

    def _structural_row(self, coeffs, rhs):
        # a.y >= b  ->  -a.u + a.w + s = -b
        row = [QZERO] * self._ncols
        for j, c in enumerate(coeffs):
            if c:
                row[j] = -c
                row[self.nvars + j] = c
        return row, -rhs

    def _new_column(self):
        idx = self._ncols
        self._ncols += 1
        for row in self._tab:
            row.append(QZERO)
        self._obj.append(QZERO)
        return idx

    def _pivot(self, r, c):
        tab, rhs = self._tab, self._rhs
        prow = tab[r]
        piv = prow[c]
        if piv != QONE:
            inv = 1 / piv
            tab[r] = prow = [x * inv for x in prow]
            rhs[r] *= inv
        for i in range(len(tab)):
            if i == r:
                continue
            f = tab[i][c]
            if f:
                tab[i] = [x - f * y for x, y in zip(tab[i], prow)]
                rhs[i] -= f * rhs[r]
        f = self._obj[c]
        if f:
            self._obj[:] = [x - f * y for x, y in zip(self._obj, prow)]
            self._objval -= f * rhs[r]
        self._basis[r] = c

    def _primal_steps(self):
        tab, rhs = self._tab, self._rhs
        while True:
            obj = self._obj
            enter = next((j for j in range(self._ncols)
                          if obj[j] < 0 and j not in self._banned), None)
            if enter is None:
                return OPTIMAL
            leave = None
            best = None
            for i in range(len(tab)):
                a = tab[i][enter]
                if a > 0:
                    ratio = rhs[i] / a
                    if best is None or ratio < best or \
                            (ratio == best and self._basis[i] < self._basis[leave]):
                        best = ratio
                        leave = i
            if leave is None:
                return UNBOUNDED
            self._pivot(leave, enter)

    def _dual_steps(self):
        tab, rhs = self._tab, self._rhs
        while True:
            obj = self._obj
            leave = None
            for i in range(len(tab)):
                if rhs[i] < 0 and (leave is None or
                                   self._basis[i] < self._basis[leave]):
                    leave = i
            if leave is None:
                return OPTIMAL
            row = tab[leave]
            enter = None
            best = None
            for j in range(self._ncols):
                if j in self._banned:
                    continue
                a = row[j]
                if a < 0:
                    ratio = obj[j] / (-a)
                    if best is None or ratio < best or (ratio == best and j < enter):
                        best = ratio
                        enter = j
            if enter is None:
                return INFEASIBLE
            self._pivot(leave, enter)

    def _install_rows(self, fresh):
        """Append pending constraints; eliminate basic columns from them."""
        for coeffs, rhs in self.cons[self._frozen_rows:]:
            row, b = self._structural_row(coeffs, rhs)
            row.extend([QZERO] * (self._ncols - len(row)))
            self._tab.append(row)
            self._rhs.append(b)
            self._basis.append(None)
            scol = self._new_column()
            self._tab[-1][scol] = QONE
            self._basis[-1] = scol
            if not fresh:
                r = len(self._tab) - 1
                for i in range(r):
                    f = self._tab[r][self._basis[i]]
                    if f:
                        self._tab[r] = [x - f * y for x, y in
                                        zip(self._tab[r], self._tab[i])]
                        self._rhs[r] -= f * self._rhs[i]
        self._frozen_rows = len(self.cons)

    def _cold_start(self):
        self._tab = []
        self._rhs = []
        self._basis = []
        self._ncols = 2 * self.nvars
        self._banned = set()
        self._obj = [QZERO] * self._ncols
        self._objval = QZERO
        self._frozen_rows = 0
        self._install_rows(fresh=True)

        # phase 1: negate rows with negative rhs and give them artificials
        art_rows = []
        for i in range(len(self._tab)):
            if self._rhs[i] < 0:
                self._tab[i] = [-x for x in self._tab[i]]
                self._rhs[i] = -self._rhs[i]
                art_rows.append(i)
        if art_rows:
            first_art = self._ncols
            for i in art_rows:
                col = self._new_column()
                self._tab[i][col] = QONE
                self._basis[i] = col
            art_cols = set(range(first_art, self._ncols))
            # phase-1 objective: max -(sum of artificials), priced out over
            # the starting basis so that basic columns have zero reduced cost
            self._obj = [QONE if j in art_cols else QZERO
                         for j in range(self._ncols)]
            self._objval = QZERO
            for i in art_rows:
                self._obj[:] = [x - y for x, y in zip(self._obj, self._tab[i])]
                self._objval -= self._rhs[i]
            status = self._primal_steps()
            assert status == OPTIMAL  # phase-1 objective is bounded by 0
            if self._objval != 0:
                self._state = INFEASIBLE
                return INFEASIBLE
            for i in range(len(self._tab)):
                if self._basis[i] in art_cols:
                    j = next((j for j in range(first_art)
                              if self._tab[i][j]), None)
                    if j is None:
                        continue  # redundant row; stays parked at zero
                    self._pivot(i, j)
            self._banned = art_cols

        # express the real objective in the current basis
        cvec = [QZERO] * self._ncols
        for j, c in enumerate(self.objective):
            cvec[j] = -c
            cvec[self.nvars + j] = c
        self._obj = cvec
        self._objval = QZERO
        for i, b in enumerate(self._basis):
            f = self._obj[b]
            if f:
                self._obj[:] = [x - f * y for x, y in zip(self._obj, self._tab[i])]
                self._objval -= f * self._rhs[i]
        status = self._primal_steps()
        self._state = status
        return status

    # -- public solve ------------------------------------------------------

    def solve(self) -> LPResult:
        if self._state == OPTIMAL and self._frozen_rows == len(self.cons):
            return self._result()
        if self._state == "stale" and self._tab is not None:
            self._install_rows(fresh=False)
            status = self._dual_steps()
            if status == OPTIMAL:
                status = self._primal_steps()
            self._state = status
            return self._result()
        status = self._cold_start()
        return self._result()

    def _result(self) -> LPResult:
        if self._state == INFEASIBLE:
            return LPResult(INFEASIBLE, None, None)
        if self._state == UNBOUNDED:
            return LPResult(UNBOUNDED, None, None)
        vals = {}
        for i, b in enumerate(self._basis):
            vals[b] = self._rhs[i]
        y = []
        for j in range(self.nvars):
            y.append(vals.get(j, QZERO) - vals.get(self.nvars + j, QZERO))
        # objective row tracks -(value); report c.y + constant directly
        val = sum(c * v for c, v in zip(self.objective, y)) + self.constant
        return LPResult(OPTIMAL, y, val)
