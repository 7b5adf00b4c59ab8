"""Exact rational linear programming with dual and infeasibility certificates.

All problems are stated over rows in >=-form:

    maximize  c . y   subject to   g_i . y >= h_i  for every row i,

where some variables are declared non-negative and the rest are free.  The
solver is a dense two-phase tableau simplex over ``Fraction`` with a
Dantzig pivot rule that falls back to Bland's rule after a run of
degenerate pivots, so it terminates deterministically.  A solved state can
be forked and extended by rows, in which case feasibility is restored by a
dual simplex from the parent optimum (with a from-scratch fallback), which
is what makes the branch-and-prune searches affordable.

Certificate conventions (consumed by the obstruction validator).  Summing
rows with multipliers mu_i >= 0 yields the valid inequality
(sum mu_i g_i) . y >= sum mu_i h_i, so:

* at an optimum, ``duals`` maps row ids to multipliers mu >= 0 with

      sum_i mu_i g_i  =  -c   on free variables,
      sum_i mu_i g_i  <= -c   on non-negative variables,
      sum_i mu_i h_i  =  -(optimal value);

* when infeasible, ``farkas`` maps row ids to mu >= 0 with

      sum_i mu_i g_i  =  0   on free variables,
      sum_i mu_i g_i  <= 0   on non-negative variables,
      sum_i mu_i h_i  >  0.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

ZERO = Fraction(0)
ONE = Fraction(1)

_DUAL_BUDGET = 400


@dataclass(frozen=True)
class GeRow:
    """A single constraint  coeffs . y >= rhs."""
    id: str
    coeffs: dict
    rhs: Fraction


@dataclass
class LPResult:
    status: str                      # "optimal" | "unbounded" | "infeasible"
    x: dict = field(default_factory=dict)
    value: Fraction | None = None
    duals: dict = field(default_factory=dict)
    farkas: dict = field(default_factory=dict)


class Solver:
    """Tableau over fixed variables; rows can be appended after solving.

    Column layout: one column per non-negative variable, a (+,-) pair per
    free variable, then one slack column per row (grown as rows arrive).
    The right-hand sides live in a separate vector so appending a slack
    column is a cheap list append.
    """

    def __init__(self, variables, nonneg, objective):
        self.varnames = sorted(set(variables) | set(objective))
        self.nonneg = set(nonneg)
        self.col_of_pos = {}
        self.col_of_neg = {}
        cols = 0
        for v in self.varnames:
            self.col_of_pos[v] = cols
            cols += 1
            if v not in self.nonneg:
                self.col_of_neg[v] = cols
                cols += 1
        self.struct_cols = cols
        self.objective = dict(objective)
        self.costs = self._expand(objective)
        self.rows = []        # GeRow, in insertion order
        self.tab = []         # list of rows, each a list over current columns
        self.rhs = []
        self.basis = []
        self.cols = cols
        self.solved = False
        self.status = None

    # -- low-level ---------------------------------------------------------

    def _expand(self, coeffs, sign=1):
        row = [ZERO] * self.struct_cols
        for v, c in coeffs.items():
            c = sign * Fraction(c)
            row[self.col_of_pos[v]] += c
            if v in self.col_of_neg:
                row[self.col_of_neg[v]] -= c
        return row

    def fork(self) -> "Solver":
        child = Solver.__new__(Solver)
        child.varnames = self.varnames
        child.nonneg = self.nonneg
        child.col_of_pos = self.col_of_pos
        child.col_of_neg = self.col_of_neg
        child.struct_cols = self.struct_cols
        child.objective = self.objective
        child.costs = self.costs
        child.rows = list(self.rows)
        child.tab = [list(r) for r in self.tab]
        child.rhs = list(self.rhs)
        child.basis = list(self.basis)
        child.cols = self.cols
        child.solved = self.solved
        child.status = self.status
        return child

    def _pivot(self, r, c):
        row = self.tab[r]
        pv = row[c]
        inv = ONE / pv
        prow = [x * inv for x in row]
        self.tab[r] = prow
        prhs = self.rhs[r] * inv
        self.rhs[r] = prhs
        for i in range(len(self.tab)):
            if i == r:
                continue
            f = self.tab[i][c]
            if f:
                ri = self.tab[i]
                self.tab[i] = [x - f * y for x, y in zip(ri, prow)]
                self.rhs[i] -= f * prhs
        self.basis[r] = c

    def _zrow(self, costs):
        z = list(costs) + [ZERO] * (self.cols - len(costs))
        value = ZERO
        for i, bv in enumerate(self.basis):
            cb = costs[bv] if bv < len(costs) else ZERO
            if cb:
                ri = self.tab[i]
                z = [x - cb * y for x, y in zip(z, ri)]
                value += cb * self.rhs[i]
        return z, value

    def _primal_simplex(self, costs):
        stall = 0
        last_value = None
        while True:
            z, value = self._zrow(costs)
            if last_value is not None and value == last_value:
                stall += 1
            else:
                stall = 0
            last_value = value
            enter = None
            if stall > 24:
                for j in range(self.cols):
                    if z[j] > 0:
                        enter = j
                        break
            else:
                best = ZERO
                for j in range(self.cols):
                    if z[j] > best:
                        best = z[j]
                        enter = j
            if enter is None:
                return "optimal"
            leave = None
            best_ratio = None
            for i in range(len(self.tab)):
                aij = self.tab[i][enter]
                if aij > 0:
                    ratio = self.rhs[i] / aij
                    if (best_ratio is None or ratio < best_ratio
                            or (ratio == best_ratio and self.basis[i] < self.basis[leave])):
                        best_ratio = ratio
                        leave = i
            if leave is None:
                return "unbounded"
            self._pivot(leave, enter)

    # -- solving -----------------------------------------------------------

    def _append_row(self, row: GeRow):
        """Append one >=-row (converted to <=) with a fresh basic slack."""
        body = self._expand(row.coeffs, sign=-1)
        rhs = -Fraction(row.rhs)
        body += [ZERO] * (self.cols - self.struct_cols)
        # eliminate current basic variables from the new row
        for i, bv in enumerate(self.basis):
            f = body[bv] if bv < len(body) else ZERO
            if f:
                ri = self.tab[i]
                body = [x - f * y for x, y in zip(body, ri)]
                rhs -= f * self.rhs[i]
        for r in self.tab:
            r.append(ZERO)
        body.append(ONE)
        self.cols += 1
        self.tab.append(body)
        self.rhs.append(rhs)
        self.basis.append(self.cols - 1)
        self.rows.append(row)

    def _dual_simplex(self):
        steps = 0
        while True:
            leave = None
            worst = ZERO
            for i in range(len(self.tab)):
                if self.rhs[i] < worst:
                    worst = self.rhs[i]
                    leave = i
            if leave is None:
                return "optimal"
            steps += 1
            if steps > _DUAL_BUDGET:
                return "stuck"
            z, _ = self._zrow(self.costs)
            enter = None
            best = None
            row = self.tab[leave]
            for c in range(self.cols):
                if row[c] < 0:
                    theta = z[c] / row[c]
                    if best is None or theta < best or (theta == best and c < enter):
                        best = theta
                        enter = c
            if enter is None:
                return ("infeasible", leave)
            self._pivot(leave, enter)

    def solve_fresh(self, rows):
        """Solve from scratch against exactly these rows."""
        self.rows = []
        self.tab = []
        self.rhs = []
        self.basis = []
        self.cols = self.struct_cols
        for row in rows:
            body = self._expand(row.coeffs, sign=-1)
            body += [ZERO] * (self.cols - self.struct_cols)
            for r in self.tab:
                r.append(ZERO)
            body.append(ONE)
            self.cols += 1
            self.tab.append(body)
            self.rhs.append(-Fraction(row.rhs))
            self.basis.append(self.cols - 1)
            self.rows.append(row)
        if any(b < 0 for b in self.rhs):
            # the fresh all-slack basis is not dual feasible, so go through
            # the auxiliary-variable phase 1
            return self._phase1_then_primal()
        status = self._primal_simplex(self.costs)
        self.solved = True
        self.status = status
        return self._result_from_state(status)

    def _phase1_then_primal(self):
        """Classic auxiliary-variable phase 1; used if the dual start stalls."""
        aux = self.cols
        for r in self.tab:
            r.append(-ONE)
        self.cols += 1
        aux_costs = [ZERO] * aux + [-ONE]
        worst = min(range(len(self.tab)), key=lambda i: (self.rhs[i], i))
        self._pivot(worst, aux)
        self._primal_simplex(aux_costs)
        z, value = self._zrow(aux_costs)
        if value < 0:
            farkas = {}
            for i, r in enumerate(self.rows):
                mu = -z[self._slack_col(i)]
                if mu:
                    farkas[r.id] = mu
            self.solved = True
            self.status = "infeasible"
            return LPResult(status="infeasible", farkas=farkas)
        if aux in self.basis:
            i = self.basis.index(aux)
            for c in range(self.cols):
                if c != aux and self.tab[i][c] != 0:
                    self._pivot(i, c)
                    break
        if aux in self.basis:
            i = self.basis.index(aux)
            del self.tab[i]
            del self.rhs[i]
            del self.basis[i]
        for r in self.tab:
            del r[aux]
        self.cols -= 1
        self.basis = [b if b < aux else b - 1 for b in self.basis]
        status = self._primal_simplex(self.costs)
        self.solved = True
        self.status = status
        return self._result_from_state(status)

    def solve_more(self, extra_rows):
        """Fork-style resolve: the receiver must already be at an optimum."""
        if self.status != "optimal":
            return self.solve_fresh(self.rows + list(extra_rows))
        for row in extra_rows:
            self._append_row(row)
        status = self._dual_simplex()
        if status == "stuck":
            rows = list(self.rows)
            return self.solve_fresh(rows)
        if isinstance(status, tuple):
            self.solved = True
            self.status = "infeasible"
            return self._result_infeasible(status[1])
        status = self._primal_simplex(self.costs)
        self.solved = True
        self.status = status
        return self._result_from_state(status)

    # -- extraction ----------------------------------------------------------

    def _slack_col(self, i):
        return self.struct_cols + i

    def _result_infeasible(self, bad_row):
        farkas = {}
        row = self.tab[bad_row]
        for i, r in enumerate(self.rows):
            mu = row[self._slack_col(i)]
            if mu:
                farkas[r.id] = mu
        return LPResult(status="infeasible", farkas=farkas)

    def _result_from_state(self, status):
        xs = [ZERO] * self.struct_cols
        for i, bv in enumerate(self.basis):
            if bv < self.struct_cols:
                xs[bv] = self.rhs[i]
        x = {}
        for v in self.varnames:
            val = xs[self.col_of_pos[v]]
            if v in self.col_of_neg:
                val -= xs[self.col_of_neg[v]]
            x[v] = val
        if status == "unbounded":
            return LPResult(status="unbounded", x=x)
        z, value = self._zrow(self.costs)
        duals = {}
        for i, r in enumerate(self.rows):
            mu = -z[self._slack_col(i)]
            if mu:
                duals[r.id] = mu
        return LPResult(status="optimal", x=x, value=value, duals=duals)


def solve_max(objective, rows, nonneg=frozenset()):
    """One-shot solve; see the module docstring for conventions."""
    variables = {v for r in rows for v in r.coeffs} | set(objective)
    solver = Solver(variables, nonneg, objective)
    return solver.solve_fresh(list(rows))
