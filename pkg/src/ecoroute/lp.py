"""Dense bounded-variable simplex and best-first branch-and-bound.

The solver targets the small routing instances produced elsewhere in this
package: every structural variable carries finite bounds, constraint rows have
a sense in {<=, ==, >=}, and basic (vertex) optima are returned so that flow
relaxations with 0/1 bounds come back integral.
"""
from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np

LE, EQ, GE = "<=", "==", ">="
_SENSES = {LE, EQ, GE}

FEAS_TOL = 1e-7        # constraint satisfaction on reported optima
INT_TOL = 1e-6         # integrality of integer variables
PRUNE_TOL = 1e-9       # branch-and-bound pruning slack
PIVOT_TOL = 1e-9
MAX_PIVOTS = 10**6
MAX_BB_NODES = 10**6
BLAND_AFTER = 1000     # degenerate pivots before switching to Bland's rule

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
ITERATION_LIMIT = "iteration_limit"


@dataclass
class LinearProgram:
    """min objective . x  s.t.  a x (sense) rhs,  lower <= x <= upper."""

    objective: np.ndarray
    a: np.ndarray
    senses: list[str]
    rhs: np.ndarray
    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self) -> None:
        self.objective = np.asarray(self.objective, dtype=float)
        self.a = np.atleast_2d(np.asarray(self.a, dtype=float))
        self.rhs = np.asarray(self.rhs, dtype=float)
        self.lower = np.asarray(self.lower, dtype=float)
        self.upper = np.asarray(self.upper, dtype=float)
        self.senses = list(self.senses)
        m, n = self.a.shape
        if self.objective.shape != (n,):
            raise ValueError("objective length does not match constraint columns")
        if self.rhs.shape != (m,) or len(self.senses) != m:
            raise ValueError("rhs/senses length does not match constraint rows")
        if self.lower.shape != (n,) or self.upper.shape != (n,):
            raise ValueError("bound vectors must have one entry per variable")
        if any(s not in _SENSES for s in self.senses):
            raise ValueError(f"constraint senses must be one of {sorted(_SENSES)}")
        if not (np.all(np.isfinite(self.lower)) and np.all(np.isfinite(self.upper))):
            raise ValueError("all variable bounds must be finite")

    @property
    def n_vars(self) -> int:
        return self.a.shape[1]

    @property
    def n_rows(self) -> int:
        return self.a.shape[0]


@dataclass
class MilpProblem:
    lp: LinearProgram
    integer_vars: tuple[int, ...]

    def __post_init__(self) -> None:
        self.integer_vars = tuple(self.integer_vars)
        n = self.lp.n_vars
        if any(not 0 <= k < n for k in self.integer_vars):
            raise ValueError("integer variable index out of range")


@dataclass
class SolveResult:
    status: str
    x: np.ndarray | None = None
    objective: float | None = None


class _Budget:
    __slots__ = ("pivots",)

    def __init__(self) -> None:
        self.pivots = 0


def _iterate(
    T: np.ndarray,
    values: np.ndarray,
    u: np.ndarray,
    basis: list[int],
    at_upper: np.ndarray,
    cost: np.ndarray,
    allowed: np.ndarray,
    budget: _Budget,
) -> str:
    """Run bounded-variable simplex pivots to optimality for the given cost row.

    `values` holds the current basic-variable values; nonbasic variables sit at
    0 or at their upper bound per `at_upper`. The tableau T is the basis-inverse
    image of the extended constraint matrix.
    """
    m, n_ext = T.shape
    degen = 0
    while True:
        b = np.asarray(basis)
        red = cost - cost[b] @ T
        in_basis = np.zeros(n_ext, dtype=bool)
        in_basis[b] = True
        improving = np.where(at_upper, red > PIVOT_TOL, red < -PIVOT_TOL)
        elig = np.flatnonzero(allowed & ~in_basis & improving)
        if elig.size == 0:
            return OPTIMAL
        if budget.pivots >= MAX_PIVOTS:
            return ITERATION_LIMIT
        budget.pivots += 1
        if degen > BLAND_AFTER:
            j = int(elig[0])
        else:
            j = int(elig[np.argmax(np.abs(red[elig]))])
        s = -1.0 if at_upper[j] else 1.0
        d = s * T[:, j]

        # Ratio test: basic variables move by -d per unit step.
        ub = u[b]
        t = np.full(m, np.inf)
        pos = d > PIVOT_TOL
        t[pos] = values[pos] / d[pos]
        neg = (d < -PIVOT_TOL) & np.isfinite(ub)
        t[neg] = (ub[neg] - values[neg]) / (-d[neg])
        np.maximum(t, 0.0, out=t)
        finite = np.flatnonzero(np.isfinite(t))
        t_row = float(t[finite].min()) if finite.size else math.inf
        if not math.isfinite(min(t_row, u[j])):
            raise ArithmeticError("LP is unbounded")  # impossible with finite bounds

        if u[j] <= t_row:
            # Entering variable swings to its other bound; basis unchanged.
            values -= d * u[j]
            at_upper[j] = not at_upper[j]
            degen = degen + 1 if u[j] < PIVOT_TOL else 0
            continue

        ties = finite[t[finite] <= t_row + 1e-12]
        r = int(min(ties, key=lambda i: basis[i]))
        degen = degen + 1 if t_row < PIVOT_TOL else 0
        values -= d * t_row
        leaving = basis[r]
        at_upper[leaving] = d[r] < 0  # left at upper bound rather than at zero
        values[r] = t_row if s > 0 else u[j] - t_row
        at_upper[j] = False

        piv = T[r, j]
        T[r] /= piv
        col = T[:, j].copy()
        col[r] = 0.0
        T -= np.outer(col, T[r])
        basis[r] = j


def solve_lp(lp: LinearProgram) -> SolveResult:
    """Two-phase bounded-variable simplex; returns a basic optimal solution."""
    n, m = lp.n_vars, lp.n_rows
    if np.any(lp.lower > lp.upper + 1e-12):
        return SolveResult(INFEASIBLE)
    if m == 0:
        x = np.where(lp.objective > 0, lp.lower, lp.upper)
        return SolveResult(OPTIMAL, x, float(lp.objective @ x))

    # Shift to x' = x - lower so every structural variable lives in [0, u].
    u_struct = lp.upper - lp.lower
    b = lp.rhs - lp.a @ lp.lower

    n_slack = sum(1 for s in lp.senses if s != EQ)
    n_ext = n + n_slack + m
    A = np.zeros((m, n_ext))
    A[:, :n] = lp.a
    u = np.full(n_ext, np.inf)
    u[:n] = u_struct
    col = n
    for i, sense in enumerate(lp.senses):
        if sense == LE:
            A[i, col] = 1.0
            col += 1
        elif sense == GE:
            A[i, col] = -1.0
            col += 1
    rhs = b.copy()
    flip = rhs < 0
    A[flip] *= -1.0
    rhs[flip] *= -1.0
    art0 = n + n_slack
    A[:, art0:] = np.eye(m)

    T = A.copy()
    values = rhs.copy()
    basis = list(range(art0, art0 + m))
    at_upper = np.zeros(n_ext, dtype=bool)
    allowed = np.ones(n_ext, dtype=bool)
    budget = _Budget()

    phase1 = np.zeros(n_ext)
    phase1[art0:] = 1.0
    status = _iterate(T, values, u, basis, at_upper, phase1, allowed, budget)
    if status != OPTIMAL:
        return SolveResult(status)
    infeas = sum(values[i] for i, v in enumerate(basis) if v >= art0)
    if infeas > FEAS_TOL:
        return SolveResult(INFEASIBLE)

    # Pin artificials at zero; basic ones may linger on redundant rows.
    u[art0:] = 0.0
    allowed[art0:] = False

    phase2 = np.zeros(n_ext)
    phase2[:n] = lp.objective
    status = _iterate(T, values, u, basis, at_upper, phase2, allowed, budget)
    if status != OPTIMAL:
        return SolveResult(status)

    x_ext = np.zeros(n_ext)
    x_ext[at_upper] = u[at_upper]
    x_ext[np.asarray(basis)] = values
    x = x_ext[:n] + lp.lower
    return SolveResult(OPTIMAL, x, float(lp.objective @ x))


def constraint_violation(lp: LinearProgram, x: np.ndarray) -> float:
    """Largest absolute constraint/bound violation of x (0 means feasible)."""
    ax = lp.a @ x
    worst = 0.0
    for i, sense in enumerate(lp.senses):
        if sense == LE:
            worst = max(worst, ax[i] - lp.rhs[i])
        elif sense == GE:
            worst = max(worst, lp.rhs[i] - ax[i])
        else:
            worst = max(worst, abs(ax[i] - lp.rhs[i]))
    worst = max(worst, float(np.max(lp.lower - x, initial=0.0)))
    worst = max(worst, float(np.max(x - lp.upper, initial=0.0)))
    return worst


def solve_milp(problem: MilpProblem) -> SolveResult:
    """Exact optimum via best-first branch-and-bound on LP relaxations.

    Branches on the most fractional integer variable (ties: lowest index) and
    prunes nodes whose relaxation bound cannot beat the incumbent. Raises on
    node-limit exhaustion instead of returning a possibly suboptimal answer.
    """
    lp = problem.lp
    int_idx = np.asarray(problem.integer_vars, dtype=int)
    root = solve_lp(lp)
    if root.status != OPTIMAL:
        return root

    incumbent: np.ndarray | None = None
    inc_obj = math.inf
    tick = 0
    heap: list[tuple[float, int, np.ndarray, np.ndarray, np.ndarray]] = []
    heapq.heappush(heap, (root.objective, tick, lp.lower, lp.upper, root.x))
    nodes = 1

    while heap:
        bound, _, lower, upper, x = heapq.heappop(heap)
        if bound >= inc_obj - PRUNE_TOL:
            continue
        if int_idx.size:
            frac = np.abs(x[int_idx] - np.round(x[int_idx]))
            k = int(np.argmax(frac))
        else:
            frac = np.zeros(1)
            k = 0
        if not int_idx.size or frac[k] <= INT_TOL:
            if bound < inc_obj - PRUNE_TOL:
                incumbent, inc_obj = x, bound
            continue
        var = int(int_idx[k])
        v = x[var]
        for lo_v, hi_v in ((lower[var], math.floor(v)), (math.ceil(v), upper[var])):
            nodes += 1
            if nodes > MAX_BB_NODES:
                raise RuntimeError("branch-and-bound node limit exceeded")
            new_lower = lower.copy()
            new_upper = upper.copy()
            new_lower[var] = lo_v
            new_upper[var] = hi_v
            child = replace(lp, lower=new_lower, upper=new_upper)
            res = solve_lp(child)
            if res.status == ITERATION_LIMIT:
                return res
            if res.status == OPTIMAL and res.objective < inc_obj - PRUNE_TOL:
                tick += 1
                heapq.heappush(heap, (res.objective, tick, new_lower, new_upper, res.x))

    if incumbent is None:
        return SolveResult(INFEASIBLE)
    return SolveResult(OPTIMAL, incumbent, inc_obj)


def format_lp(lp: LinearProgram, integer_vars: Sequence[int] = ()) -> str:
    """Plain-text tableau dump of an LP/MILP instance for debugging."""
    lines = ["minimize"]
    lines.append("  " + "  ".join(f"{c:+.6g} x{k}" for k, c in enumerate(lp.objective) if c))
    lines.append("subject to")
    for i in range(lp.n_rows):
        terms = "  ".join(f"{lp.a[i, k]:+.6g} x{k}" for k in range(lp.n_vars) if lp.a[i, k])
        lines.append(f"  {terms} {lp.senses[i]} {lp.rhs[i]:.6g}")
    lines.append("bounds")
    for k in range(lp.n_vars):
        tag = " integer" if k in set(integer_vars) else ""
        lines.append(f"  {lp.lower[k]:.6g} <= x{k} <= {lp.upper[k]:.6g}{tag}")
    return "\n".join(lines) + "\n"
