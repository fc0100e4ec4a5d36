"""Bounded-variable primal simplex for ``max c.x  s.t.  A x <= b,  lb <= x <= ub``.

Every row gets a slack with bounds [0, inf).  The basis inverse is kept
explicitly with rank-one updates and periodic refactorisation.  A warm start
that became infeasible (new rows, tightened bounds) is repaired by a
composite phase 1 that minimises the total bound violation.
"""

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

PRIMAL_TOL = 1e-7
PIVOT_TOL = 1e-9
DUAL_TOL = 1e-9
COMPOSITE_WEIGHT = 0.1


class LpError(RuntimeError):
    """Numerical breakdown; never reported as an optimum."""


@dataclass
class Basis:
    basic: tuple          # variable index per row (slack of row i is n + i)
    at_upper: frozenset   # nonbasic variables sitting at their upper bound
    binv: Optional[np.ndarray] = field(default=None, repr=False, compare=False)
    updates: int = field(default=0, compare=False)


@dataclass
class LpSolution:
    status: str           # "optimal" or "infeasible"
    objective: float
    x: np.ndarray
    basis: Optional[Basis] = None
    iterations: int = 0


@dataclass
class LpModel:
    n: int
    c: np.ndarray
    lb: np.ndarray = None
    ub: np.ndarray = None
    rows: list = field(default_factory=list)   # dense coefficient arrays
    rhs: list = field(default_factory=list)

    def __post_init__(self):
        self.c = np.asarray(self.c, dtype=float)
        if len(self.c) != self.n:
            raise ValueError("objective length does not match variable count")
        self.lb = np.zeros(self.n) if self.lb is None else np.asarray(self.lb, dtype=float)
        self.ub = np.ones(self.n) if self.ub is None else np.asarray(self.ub, dtype=float)
        if not (np.all(np.isfinite(self.lb)) and np.all(np.isfinite(self.ub))):
            raise ValueError("variable bounds must be finite")
        self._matrix = None

    @property
    def m(self):
        return len(self.rows)

    def add_row(self, coeffs, rhs):
        """Append ``coeffs . x <= rhs``; coeffs is a dense array or {index: value}."""
        if isinstance(coeffs, dict):
            row = np.zeros(self.n)
            for j, a in coeffs.items():
                if not 0 <= j < self.n:
                    raise ValueError(f"column {j} out of range")
                row[j] += float(a)
        else:
            row = np.asarray(coeffs, dtype=float)
            if row.shape != (self.n,):
                raise ValueError("row length does not match variable count")
        if not np.all(np.isfinite(row)) or not np.isfinite(float(rhs)):
            raise ValueError("row entries must be finite")
        self.rows.append(row)
        self.rhs.append(float(rhs))
        self._matrix = None
        return self

    def add_rows(self, rows):
        for coeffs, rhs in rows:
            self.add_row(coeffs, rhs)
        return self

    def remove_rows(self, keep):
        """Keep only the rows whose indices are listed (ascending)."""
        self.rows = [self.rows[i] for i in keep]
        self.rhs = [self.rhs[i] for i in keep]
        self._matrix = None
        return self

    def matrix(self):
        if self._matrix is None:
            self._matrix = np.array(self.rows).reshape(len(self.rows), self.n)
        return self._matrix


def add_rows(model: LpModel, rows) -> LpModel:
    return model.add_rows(rows)


def remap_basis(basis: Optional[Basis], n: int, keep) -> Optional[Basis]:
    """Carry a basis over a row deletion (``keep``: surviving old row indices).

    A deleted row must have its slack basic; the inverse of the reduced basis
    is the old inverse without the slack's position and the row's column.
    Returns None when the basis cannot be carried over.
    """
    if basis is None:
        return None
    m0 = len(basis.basic)
    keep = list(keep)
    keep_set = set(keep)
    new_index = {r: i for i, r in enumerate(keep)}
    drop_pos = []
    for r in range(m0):
        if r in keep_set:
            continue
        try:
            drop_pos.append(basis.basic.index(n + r))
        except ValueError:
            return None
    keep_pos = [p for p in range(m0) if p not in set(drop_pos)]
    basic = []
    for p in keep_pos:
        j = basis.basic[p]
        basic.append(j if j < n else n + new_index[j - n])
    upper = frozenset(j for j in basis.at_upper if j < n)
    binv = None
    if basis.binv is not None:
        rows_kept = [r for r in range(m0) if r in keep_set]
        binv = basis.binv[np.ix_(keep_pos, rows_kept)].copy()
    return Basis(tuple(basic), upper, binv, basis.updates)


class _Simplex:
    def __init__(self, model, lb, ub, tol, piv_tol, refactor_every=100, stall_limit=50, max_iter=None,
                 composite=None):
        self.n, self.m = model.n, model.m
        self.As = model.matrix() if self.m else np.zeros((0, self.n))
        self.b = np.array(model.rhs, dtype=float)
        self.c = np.concatenate([model.c, np.zeros(self.m)])
        self.lb = np.concatenate([lb, np.zeros(self.m)])
        self.ub = np.concatenate([ub, np.full(self.m, np.inf)])
        self.tol, self.piv_tol = tol, piv_tol
        self.refactor_every = refactor_every
        self.stall_limit = stall_limit
        self.max_iter = max_iter or 50 * (self.n + self.m) + 1000
        self.iterations = 0
        # phase-1 objective: infeasibility minus w * objective (w -> 0 if stuck)
        cmax = float(np.abs(model.c).max()) if model.n else 0.0
        self.w = 0.0 if not cmax else (COMPOSITE_WEIGHT if composite is None else composite) / cmax

    def column(self, j):
        if j < self.n:
            return self.As[:, j]
        col = np.zeros(self.m)
        col[j - self.n] = 1.0
        return col

    def ftran(self, j):
        if j < self.n:
            return self.Binv @ self.As[:, j]
        return self.Binv[:, j - self.n].copy()

    # -- basis handling
    def _start(self, warm):
        n, m = self.n, self.m
        basic = list(range(n, n + m))
        upper = set()
        binv = None
        if warm is not None:
            rows_known = len(warm.basic)
            cand = list(warm.basic) + list(range(n + rows_known, n + m))
            if rows_known <= m and len(set(cand)) == m:
                basic = cand
                upper = set(warm.at_upper)
                if warm.binv is not None and warm.binv.shape == (rows_known, rows_known):
                    binv = self._extend(warm.binv, warm.basic, rows_known)
        self.basic = basic
        self.is_basic = np.zeros(n + m, dtype=bool)
        self.is_basic[basic] = True
        self.at_upper = np.zeros(n + m, dtype=bool)
        for j in upper:
            if j < n + m and not self.is_basic[j] and np.isfinite(self.ub[j]):
                self.at_upper[j] = True
        if binv is not None:
            self.Binv = binv
            self.since_refactor = warm.updates
            self._recompute_x()
        elif not self._refactor():
            self._slack_basis()

    def _extend(self, binv, old_basic, m0):
        """Inverse of [[B, 0], [R_B, I]] for rows appended with basic slacks."""
        m = self.m
        if m0 == m:
            return binv.copy()
        R = self.As[m0:]
        RB = np.zeros((m - m0, m0))
        for col, j in enumerate(old_basic):
            if j < self.n:
                RB[:, col] = R[:, j]
            elif j - self.n >= m0:
                return None
        out = np.zeros((m, m))
        out[:m0, :m0] = binv
        out[m0:, :m0] = -RB @ binv
        out[m0:, m0:] = np.eye(m - m0)
        return out

    def _slack_basis(self):
        n, m = self.n, self.m
        self.basic = list(range(n, n + m))
        self.is_basic[:] = False
        self.is_basic[self.basic] = True
        self.at_upper[n:] = False
        if not self._refactor():
            raise LpError("slack basis is singular")

    def _refactor(self):
        self.since_refactor = 0
        if self.m == 0:
            self.Binv = np.zeros((0, 0))
            self._recompute_x()
            return True
        B = np.column_stack([self.column(j) for j in self.basic])
        try:
            self.Binv = np.linalg.inv(B)
        except np.linalg.LinAlgError:
            return False
        if not np.all(np.isfinite(self.Binv)) or np.abs(self.Binv).max() > 1e12:
            return False
        self._recompute_x()
        return True

    def _recompute_x(self):
        x = np.where(self.at_upper, self.ub, self.lb)
        x[self.is_basic] = 0.0
        if self.m:
            r = self.b - self.As @ x[: self.n] - x[self.n:]
            x[self.basic] = self.Binv @ r
        self.x = x

    # -- main loop
    def run(self, warm):
        self._start(warm)
        n, m = self.n, self.m
        stall, bland = 0, False
        last_obj = -np.inf
        last_inf = np.inf
        movable = self.ub - self.lb > 0
        basic_arr = np.array(self.basic, dtype=np.int64)
        while True:
            if self.iterations >= self.max_iter:
                raise LpError("iteration limit reached")
            xb = self.x[basic_arr]
            lbB, ubB = self.lb[basic_arr], self.ub[basic_arr]
            below = xb < lbB - self.tol
            above = xb > ubB + self.tol
            phase1 = bool(below.any() or above.any())
            w = self.w if phase1 else 1.0
            cB = w * self.c[basic_arr]
            if phase1:
                cB += below.astype(float) - above.astype(float)
            y = cB @ self.Binv if m else np.zeros(0)
            d = np.empty(n + m)
            d[:n] = w * self.c[:n] - (y @ self.As if m else 0.0)
            d[n:] = -y
            d[self.is_basic] = 0.0
            cand_up = (~self.at_upper) & (d > DUAL_TOL) & movable
            cand_dn = self.at_upper & (d < -DUAL_TOL) & movable
            cand = (cand_up | cand_dn) & ~self.is_basic
            if not cand.any():
                if not self._confirm():
                    continue
                if phase1 and self.w:
                    self.w = 0.0
                    last_inf = np.inf
                    continue
                return "infeasible" if phase1 else "optimal"
            if bland:
                j = int(np.flatnonzero(cand)[0])
            else:
                j = int(np.argmax(np.where(cand, np.abs(d), -1.0)))
            direction = 1.0 if cand_up[j] else -1.0
            alpha = self.ftran(j) if m else np.zeros(0)
            delta = -direction * alpha
            flip = self.ub[j] - self.lb[j]
            lim = np.full(m, np.inf)
            up = np.zeros(m, dtype=bool)
            act = np.abs(delta) > self.piv_tol
            dec = act & (delta < 0)
            inc = act & (delta > 0)
            feas = ~(below | above)
            with np.errstate(divide="ignore", invalid="ignore"):
                sel = dec & above
                lim[sel] = (xb[sel] - ubB[sel]) / -delta[sel]
                up[sel] = True
                sel = dec & feas
                lim[sel] = np.maximum(xb[sel] - lbB[sel], 0.0) / -delta[sel]
                sel = inc & below
                lim[sel] = (lbB[sel] - xb[sel]) / delta[sel]
                sel = inc & feas & np.isfinite(ubB)
                lim[sel] = np.maximum(ubB[sel] - xb[sel], 0.0) / delta[sel]
                up[sel] = True
            tmin = lim.min() if m else np.inf
            if flip < tmin - 1e-12:
                t_best, leave = flip, -1
            else:
                t_best = tmin
                if not np.isfinite(t_best):
                    raise LpError("unbounded direction in a bounded model")
                ties = np.flatnonzero(lim <= tmin + 1e-12)
                if bland:
                    leave = int(ties[np.argmin(basic_arr[ties])])
                else:
                    leave = int(ties[np.argmax(np.abs(delta[ties]))])
                t_best = lim[leave]
            self.iterations += 1
            self.x[j] += direction * t_best
            if m:
                self.x[basic_arr] += t_best * delta
            if leave < 0:
                self.at_upper[j] = not self.at_upper[j]
                self.x[j] = self.ub[j] if self.at_upper[j] else self.lb[j]
            else:
                r = leave
                out = self.basic[r]
                self.x[out] = self.ub[out] if up[r] else self.lb[out]
                self.at_upper[out] = bool(up[r])
                self.is_basic[out] = False
                self.basic[r] = j
                basic_arr[r] = j
                self.is_basic[j] = True
                self.at_upper[j] = False
                piv = alpha[r]
                if abs(piv) < self.piv_tol:
                    raise LpError("pivot below tolerance")
                row = self.Binv[r] / piv
                self.Binv -= np.outer(alpha, row)
                self.Binv[r] = row
                self.since_refactor += 1
                if self.since_refactor >= self.refactor_every:
                    if not self._refactor():
                        raise LpError("basis became singular")
            if phase1:
                inf = float(np.sum(np.maximum(lbB - xb, 0)) + np.sum(np.maximum(xb - ubB, 0)))
                inf -= self.w * float(self.c @ self.x)
                progress = inf < last_inf - 1e-12
                last_inf = inf
            else:
                obj = float(self.c @ self.x)
                progress = obj > last_obj + 1e-12
                last_obj = obj
            if progress:
                # strict progress rules out cycling; return to Dantzig pricing
                stall, bland = 0, False
            else:
                stall += 1
                if stall > self.stall_limit:
                    bland = True

    def _confirm(self):
        """Refactor and re-check before declaring termination."""
        if self.since_refactor == 0:
            return True
        if not self._refactor():
            raise LpError("basis became singular")
        return False


def solve(model: LpModel, warm: Optional[Basis] = None, lb=None, ub=None,
          tol=PRIMAL_TOL, piv_tol=PIVOT_TOL) -> LpSolution:
    """Optimal vertex of the relaxation, optionally with overriding bounds."""
    lb = model.lb if lb is None else np.asarray(lb, dtype=float)
    ub = model.ub if ub is None else np.asarray(ub, dtype=float)
    if np.any(lb > ub + tol):
        return LpSolution("infeasible", -np.inf, np.clip(np.zeros(model.n), lb, ub))
    ub = np.maximum(lb, ub)
    sx = _Simplex(model, lb, ub, tol, piv_tol)
    status = sx.run(warm)
    x = sx.x[: model.n].copy()
    basis = Basis(tuple(sx.basic), frozenset(np.nonzero(sx.at_upper)[0].tolist()),
                  sx.Binv, sx.since_refactor)
    if status == "infeasible":
        return LpSolution("infeasible", -np.inf, x, basis, sx.iterations)
    # independent feasibility check on the original rows
    viol_rows = model.matrix() @ x - np.array(model.rhs) if model.m else np.zeros(0)
    if (viol_rows.size and viol_rows.max() > 10 * tol) or np.any(x < lb - 10 * tol) or np.any(x > ub + 10 * tol):
        raise LpError("solution fails the feasibility check")
    x = np.clip(x, lb, ub)
    return LpSolution("optimal", float(model.c @ x), x, basis, sx.iterations)
