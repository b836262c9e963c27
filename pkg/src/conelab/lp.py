"""Dense two-phase simplex method with Bland's anti-cycling rule.

Problems are stated over free variables:

    minimize c.x  subject to  A x <= b,  E x = f.

Internally x = x+ - x-, inequality rows get slacks, every row gets an
artificial variable for phase one.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, NumericalFailure

FEAS_TOL = 1e-9
OPT_TOL = 1e-8
PIVOT_TOL = 1e-11
MAX_PIVOTS = 50_000


@dataclass(frozen=True)
class LPProblem:
    c: np.ndarray
    A: np.ndarray | None = None
    b: np.ndarray | None = None
    E: np.ndarray | None = None
    f: np.ndarray | None = None

    def shapes(self) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        c = np.atleast_1d(np.asarray(self.c, dtype=float))
        n = c.shape[0]
        A = np.zeros((0, n)) if self.A is None else np.atleast_2d(np.asarray(self.A, dtype=float))
        b = np.zeros(0) if self.b is None else np.atleast_1d(np.asarray(self.b, dtype=float))
        E = np.zeros((0, n)) if self.E is None else np.atleast_2d(np.asarray(self.E, dtype=float))
        f = np.zeros(0) if self.f is None else np.atleast_1d(np.asarray(self.f, dtype=float))
        if A.size == 0:
            A = A.reshape(0, n)
        if E.size == 0:
            E = E.reshape(0, n)
        if A.shape[1] != n or E.shape[1] != n:
            raise DimensionMismatch(f"constraint matrices need {n} columns, got {A.shape} and {E.shape}")
        if A.shape[0] != b.shape[0] or E.shape[0] != f.shape[0]:
            raise DimensionMismatch("right-hand sides do not match the constraint rows")
        return c, A, b, E, f


@dataclass(frozen=True)
class LPSolution:
    status: str
    x: np.ndarray | None
    value: float | None
    pivots: int = 0

    @property
    def optimal(self) -> bool:
        return self.status == "optimal"


def _pivot(t: np.ndarray, row: int, col: int) -> None:
    t[row] /= t[row, col]
    col_vals = t[:, col].copy()
    col_vals[row] = 0.0
    t -= np.outer(col_vals, t[row])


def _simplex(t: np.ndarray, basis: list[int], allowed: int, pivots: int) -> tuple[str, int]:
    """Minimize the objective stored in the last row of the tableau (reduced costs)."""
    m = t.shape[0] - 1
    while True:
        costs = t[-1, :allowed]
        entering = -1
        for j in range(allowed):
            if costs[j] < -OPT_TOL:
                entering = j
                break
        if entering < 0:
            return "optimal", pivots
        col = t[:m, entering]
        best, leave = np.inf, -1
        for i in range(m):
            if col[i] > PIVOT_TOL:
                ratio = t[i, -1] / col[i]
                if ratio < best - 1e-12 or (abs(ratio - best) <= 1e-12 and basis[i] < basis[leave]):
                    best, leave = ratio, i
        if leave < 0:
            return "unbounded", pivots
        _pivot(t, leave, entering)
        basis[leave] = entering
        pivots += 1
        if pivots > MAX_PIVOTS:
            raise NumericalFailure(f"simplex exceeded {MAX_PIVOTS} pivots")


def lp_solve(problem: LPProblem) -> LPSolution:
    c, A, b, E, f = problem.shapes()
    n = c.shape[0]
    mi, me = A.shape[0], E.shape[0]
    m = mi + me
    # columns: x+ (n), x- (n), slacks (mi), artificials (m), rhs
    nv = 2 * n + mi
    t = np.zeros((m + 1, nv + m + 1))
    t[:mi, :n] = A
    t[:mi, n:2 * n] = -A
    t[:mi, 2 * n:nv] = np.eye(mi)
    t[mi:m, :n] = E
    t[mi:m, n:2 * n] = -E
    t[:m, -1] = np.concatenate([b, f])
    neg = t[:m, -1] < 0
    t[:m][neg] *= -1.0
    t[:m, nv:nv + m] = np.eye(m)
    basis = list(range(nv, nv + m))
    # phase one: minimize the sum of artificials
    t[-1, :] = -t[:m].sum(axis=0)
    t[-1, nv:nv + m] = 0.0
    status, pivots = _simplex(t, basis, nv, 0)
    if -t[-1, -1] > FEAS_TOL * max(1.0, float(np.max(np.abs(t[:m, -1]), initial=0.0))):
        return LPSolution("infeasible", None, None, pivots)
    # drive remaining artificials out of the basis
    keep = []
    for i in range(m):
        if basis[i] >= nv:
            cands = np.nonzero(np.abs(t[i, :nv]) > 1e-9)[0]
            if cands.size:
                _pivot(t, i, int(cands[0]))
                basis[i] = int(cands[0])
                pivots += 1
                keep.append(i)
        else:
            keep.append(i)
    t = np.vstack([t[keep], t[-1:]])
    basis = [basis[i] for i in keep]
    t = np.delete(t, np.s_[nv:nv + m], axis=1)
    # phase two
    cost = np.concatenate([c, -c, np.zeros(mi)])
    t[-1, :] = 0.0
    t[-1, :nv] = cost
    for i, j in enumerate(basis):
        t[-1] -= cost[j] * t[i]
    status, pivots = _simplex(t, basis, nv, pivots)
    if status == "unbounded":
        return LPSolution("unbounded", None, None, pivots)
    z = np.zeros(nv)
    for i, j in enumerate(basis):
        z[j] = t[i, -1]
    x = z[:n] - z[n:2 * n]
    viol = 0.0
    if mi:
        viol = max(viol, float(np.max(A @ x - b)))
    if me:
        viol = max(viol, float(np.max(np.abs(E @ x - f))))
    if viol > OPT_TOL * max(1.0, float(np.max(np.abs(x), initial=0.0))):
        raise NumericalFailure(f"optimal point violates constraints by {viol:.3e}")
    return LPSolution("optimal", x, float(c @ x), pivots)
