"""
Dense two-phase primal simplex.

The solver works on a standard-form translation of a LinearProgram:
finite lower bounds are shifted to zero, upper-bounded-only variables are
mirrored, free variables are split into a difference of two nonnegative
columns and finite upper bounds become extra <= rows. Rows with a single
nonzero coefficient are folded into variable bounds first.

Pricing is Dantzig (most negative reduced cost) while pivots make progress.
After LP_BLAND_STREAK consecutive degenerate pivots Bland's rule takes over
for both the entering column and ratio-test ties, and stays until a pivot
moves the objective again. A cycle consists of degenerate pivots only, so it
cannot survive the switch.

The tableau is rebuilt as B^-1 [A | b] from the original rows every
LP_REFACTOR_EVERY pivots and again before anything is reported, so the
returned vertex never carries accumulated pivot roundoff.

Programs with many more rows than columns (the sampled bound programs) are
solved through their dual, whose tableau has one row per primal column. The
primal vertex is read off the simplex multipliers of the dual's final basis.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from config import (
    LP_BLAND_STREAK,
    LP_DUALIZE_RATIO,
    LP_FEASIBILITY_TOL,
    LP_MAX_ITERATIONS_FACTOR,
    LP_PIVOT_TOL,
    LP_REFACTOR_EVERY,
)
from models.linear_program import LinearProgram, LpOutcome, LpStatus, Relation
from utils.exceptions import SolverError
from utils.logger import get_logger

logger = get_logger(__name__)

_RATIO_TIE = 1e-12
_DUALIZE_MIN_ROWS = 50
_PHASE_TWO_PASSES = 3


@dataclass
class _StandardForm:
    """min c.y + c_const  s.t.  A y (rel) b,  y >= 0;  x = offset + mapping @ y."""

    A: np.ndarray
    b: np.ndarray
    relations: List[Relation]
    c: np.ndarray
    c_const: float
    offset: np.ndarray
    mapping: np.ndarray


@dataclass
class _Run:
    status: LpStatus
    y: Optional[np.ndarray] = None
    duals: Optional[np.ndarray] = None
    iterations: int = 0


class _Infeasible(Exception):
    pass


class _Tableau:
    """Simplex tableau that keeps the rows it was built from.

    `original` holds [A | slacks | artificials | b] after each row has been
    signed so that b >= 0. The working tableau is B^-1 times those rows plus
    two reduced-cost rows (phase 2 at index m, phase 1 at m + 1).
    """

    def __init__(self, std: _StandardForm):
        A = std.A.copy()
        b = std.b.copy()
        rels = list(std.relations)
        m, ncols = A.shape
        flips = np.ones(m)
        for i in range(m):
            # rows  a.y >= 0  become  -a.y <= 0  so a slack can start in the basis
            if b[i] < 0 or (b[i] == 0 and rels[i] is Relation.GE):
                A[i] *= -1.0
                b[i] *= -1.0
                flips[i] = -1.0
                if rels[i] is Relation.LE:
                    rels[i] = Relation.GE
                elif rels[i] is Relation.GE:
                    rels[i] = Relation.LE

        n_slack = sum(1 for r in rels if r is not Relation.EQ)
        n_art = sum(1 for r in rels if r is not Relation.LE)
        n_total = ncols + n_slack + n_art
        original = np.zeros((m, n_total + 1))
        original[:, :ncols] = A
        original[:, -1] = b

        basis: List[int] = [0] * m
        art_cols: List[int] = []
        slack = ncols
        art = ncols + n_slack
        for i, rel in enumerate(rels):
            if rel is not Relation.EQ:
                original[i, slack] = 1.0 if rel is Relation.LE else -1.0
                if rel is Relation.LE:
                    basis[i] = slack
                slack += 1
            if rel is not Relation.LE:
                original[i, art] = 1.0
                basis[i] = art
                art_cols.append(art)
                art += 1

        costs = np.zeros((2, n_total + 1))
        costs[0, :ncols] = std.c
        costs[1, art_cols] = 1.0

        self.ncols = ncols
        self.n_total = n_total
        self.original = original
        self.costs = costs
        self.flips = flips
        self.rows: List[int] = list(range(m))
        self.basis = basis
        self.art_cols = art_cols
        self.since_refactor = 0
        self.T = np.zeros((m + 2, n_total + 1))
        self.reinvert()

    @property
    def m(self) -> int:
        return len(self.basis)

    def _basis_matrix(self) -> Tuple[np.ndarray, np.ndarray]:
        M = self.original[self.rows]
        return M, M[:, self.basis]

    def reinvert(self) -> None:
        m = self.m
        if m == 0:
            self.T = self.costs.copy()
            self.since_refactor = 0
            return
        M, B = self._basis_matrix()
        try:
            body = np.linalg.solve(B, M)
            prices = np.linalg.solve(B.T, self.costs[:, self.basis].T)
        except np.linalg.LinAlgError as e:
            raise SolverError(f"basis matrix became singular: {e}") from e
        T = np.empty((m + 2, self.n_total + 1))
        T[:m] = body
        T[m:] = self.costs - prices.T @ M
        T[:m, self.basis] = np.eye(m)
        T[m:, self.basis] = 0.0
        self.T = T
        self.since_refactor = 0

    def pivot(self, row: int, col: int, refactor_every: int) -> None:
        T = self.T
        T[row, :] /= T[row, col]
        factors = T[:, col].copy()
        factors[row] = 0.0
        T -= np.outer(factors, T[row, :])
        T[:, col] = 0.0
        T[row, col] = 1.0
        self.basis[row] = col
        self.since_refactor += 1
        if refactor_every and self.since_refactor >= refactor_every:
            self.reinvert()

    def drop_row(self, i: int) -> None:
        del self.rows[i]
        del self.basis[i]
        self.T = np.delete(self.T, i, axis=0)

    def values(self) -> np.ndarray:
        return self.T[: self.m, -1]

    def duals(self, num_rows: int) -> np.ndarray:
        """Phase-2 simplex multipliers in the sign of the caller's rows; 0 for dropped rows."""
        out = np.zeros(num_rows)
        if self.m:
            _, B = self._basis_matrix()
            z = np.linalg.solve(B.T, self.costs[0, self.basis])
            out[self.rows] = z * self.flips[self.rows]
        return out


class SimplexSolver:
    """Two-phase tableau simplex. One instance may solve many programs; it holds
    only tolerances, so concurrent use from several threads is safe."""

    def __init__(
        self,
        pivot_tol: float = LP_PIVOT_TOL,
        feasibility_tol: float = LP_FEASIBILITY_TOL,
        bland_streak: int = LP_BLAND_STREAK,
        max_iterations_factor: int = LP_MAX_ITERATIONS_FACTOR,
        refactor_every: int = LP_REFACTOR_EVERY,
        dualize_ratio: float = LP_DUALIZE_RATIO,
    ):
        self.pivot_tol = pivot_tol
        self.feasibility_tol = feasibility_tol
        self.bland_streak = bland_streak
        self.max_iterations_factor = max_iterations_factor
        self.refactor_every = refactor_every
        self.dualize_ratio = dualize_ratio

    # ------------------------------------------------------------------
    # public API
    # ------------------------------------------------------------------
    def solve(self, lp: LinearProgram) -> LpOutcome:
        lp.validate()
        try:
            std = self._standardize(lp)
        except _Infeasible as e:
            logger.debug("Simplex: infeasible during presolve: %s", e)
            return LpOutcome(LpStatus.INFEASIBLE)

        m, ncols = std.A.shape
        logger.debug("Simplex: %d rows x %d structural columns", m, ncols)

        if m == 0:
            return self._solve_unconstrained(lp, std)

        if self.dualize_ratio and m >= _DUALIZE_MIN_ROWS and m >= self.dualize_ratio * ncols:
            outcome = self._solve_through_dual(lp, std)
            if outcome is not None:
                return outcome
            logger.debug("Simplex: dual route inconclusive, solving the primal tableau")
        return self._solve_primal(lp, std)

    # ------------------------------------------------------------------
    # routes
    # ------------------------------------------------------------------
    def _solve_primal(self, lp: LinearProgram, std: _StandardForm) -> LpOutcome:
        run = self._simplex(std)
        if run.status is not LpStatus.OPTIMAL:
            return LpOutcome(run.status, iterations=run.iterations)
        return self._finish(lp, std, run.y, run.iterations)

    def _solve_through_dual(self, lp: LinearProgram, std: _StandardForm) -> Optional[LpOutcome]:
        """max b.pi  s.t.  A^T pi <= c, with pi >= 0 on >= rows, <= 0 on <= rows.

        Returns None when the dual alone cannot decide (dual infeasible, or a
        numerical failure), leaving the primal tableau to settle it.
        """
        A, b = std.A, std.b
        m, n = A.shape
        lower = np.full(m, -np.inf)
        upper = np.full(m, np.inf)
        for i, rel in enumerate(std.relations):
            if rel is Relation.GE:
                lower[i] = 0.0
            elif rel is Relation.LE:
                upper[i] = 0.0
        dual = LinearProgram(num_vars=m, objective=-b, lower=lower, upper=upper)
        for j in range(n):
            dual.add(A[:, j], Relation.LE, std.c[j])

        try:
            run = self._simplex(self._standardize(dual, fold=False))
        except (SolverError, _Infeasible) as e:
            logger.debug("Simplex: dual route failed: %s", e)
            return None
        if run.status is LpStatus.UNBOUNDED:
            logger.debug("Simplex: dual is unbounded, so the program is infeasible")
            return LpOutcome(LpStatus.INFEASIBLE, iterations=run.iterations)
        if run.status is LpStatus.INFEASIBLE:
            return None

        y = np.maximum(-run.duals, 0.0)
        try:
            return self._finish(lp, std, y, run.iterations)
        except SolverError as e:
            logger.debug("Simplex: dual multipliers rejected: %s", e)
            return None

    def _finish(self, lp: LinearProgram, std: _StandardForm, y: np.ndarray, iterations: int) -> LpOutcome:
        x = std.offset + std.mapping @ y
        violation = lp.max_violation(x)
        if violation > self.feasibility_tol:
            raise SolverError(
                f"final solution violates the program by {violation:.3e} (> {self.feasibility_tol:.1e})"
            )
        value = float(lp.objective @ x)
        logger.debug("Simplex: optimal after %d pivots, objective %.12g", iterations, value)
        return LpOutcome(LpStatus.OPTIMAL, solution=x, objective_value=value, iterations=iterations)

    def _solve_unconstrained(self, lp: LinearProgram, std: _StandardForm) -> LpOutcome:
        if np.any(std.c < -self.pivot_tol):
            return LpOutcome(LpStatus.UNBOUNDED)
        x = std.offset.copy()
        return LpOutcome(LpStatus.OPTIMAL, solution=x, objective_value=float(lp.objective @ x))

    # ------------------------------------------------------------------
    # standard form
    # ------------------------------------------------------------------
    def _standardize(self, lp: LinearProgram, fold: bool = True) -> _StandardForm:
        """With fold=False every constraint keeps its own row, in order."""
        lower = lp.lower.copy()
        upper = lp.upper.copy()
        rows: List[np.ndarray] = []
        rhs: List[float] = []
        rels: List[Relation] = []

        for con in lp.constraints:
            nz = np.flatnonzero(con.coefficients)
            if fold and nz.size == 0:
                if not self._trivially_satisfied(con.relation, con.rhs):
                    raise _Infeasible("an empty row cannot be satisfied")
                continue
            if fold and nz.size == 1:
                j = int(nz[0])
                a = con.coefficients[j]
                bound = con.rhs / a
                rel = con.relation
                if a < 0 and rel is not Relation.EQ:
                    rel = Relation.GE if rel is Relation.LE else Relation.LE
                if rel in (Relation.LE, Relation.EQ):
                    upper[j] = min(upper[j], bound)
                if rel in (Relation.GE, Relation.EQ):
                    lower[j] = max(lower[j], bound)
                continue
            rows.append(con.coefficients)
            rhs.append(con.rhs)
            rels.append(con.relation)

        if np.any(lower > upper + self.feasibility_tol):
            raise _Infeasible("folded bounds cross")
        upper = np.maximum(upper, lower)

        n = lp.num_vars
        offset = np.zeros(n)
        columns: List[Tuple[int, float]] = []
        bounded_rows: List[Tuple[int, float]] = []
        for j in range(n):
            lo, hi = lower[j], upper[j]
            if np.isfinite(lo):
                offset[j] = lo
                columns.append((j, 1.0))
                if np.isfinite(hi):
                    bounded_rows.append((len(columns) - 1, hi - lo))
            elif np.isfinite(hi):
                offset[j] = hi
                columns.append((j, -1.0))
            else:
                columns.append((j, 1.0))
                columns.append((j, -1.0))

        mapping = np.zeros((n, len(columns)))
        for col, (j, sign) in enumerate(columns):
            mapping[j, col] = sign

        A = np.array(rows, dtype=float).reshape(len(rows), n) if rows else np.zeros((0, n))
        b = np.array(rhs, dtype=float) - A @ offset
        A = A @ mapping
        extra = np.zeros((len(bounded_rows), len(columns)))
        for r, (col, width) in enumerate(bounded_rows):
            extra[r, col] = 1.0
        A = np.vstack([A, extra])
        b = np.concatenate([b, [w for _, w in bounded_rows]])
        rels = rels + [Relation.LE] * len(bounded_rows)

        c = lp.objective @ mapping
        return _StandardForm(A, b, rels, c, float(lp.objective @ offset), offset, mapping)

    def _trivially_satisfied(self, relation: Relation, rhs: float) -> bool:
        tol = self.feasibility_tol
        if relation is Relation.LE:
            return 0.0 <= rhs + tol
        if relation is Relation.GE:
            return 0.0 >= rhs - tol
        return abs(rhs) <= tol

    # ------------------------------------------------------------------
    # simplex iterations
    # ------------------------------------------------------------------
    def _simplex(self, std: _StandardForm) -> _Run:
        num_rows = std.A.shape[0]
        tab = _Tableau(std)
        iterations = 0

        if tab.art_cols:
            status, its = self._run_phase(tab, phase=1, excluded=())
            iterations += its
            if status is LpStatus.UNBOUNDED:
                raise SolverError("phase 1 reported an unbounded ray; the tableau is numerically broken")
            tab.reinvert()
            infeasibility = -tab.T[tab.m + 1, -1]
            if infeasibility > self.feasibility_tol:
                logger.debug("Simplex: phase 1 optimum %.3e > tolerance, infeasible", infeasibility)
                return _Run(LpStatus.INFEASIBLE, iterations=iterations)
            self._drive_out_artificials(tab)

        for _ in range(_PHASE_TWO_PASSES):
            status, its = self._run_phase(tab, phase=2, excluded=tab.art_cols)
            iterations += its
            if status is LpStatus.UNBOUNDED:
                return _Run(LpStatus.UNBOUNDED, iterations=iterations)
            tab.reinvert()
            if not self._eligible(tab, tab.m, self._mask(tab, tab.art_cols)).any():
                break
            logger.debug("Simplex: refactored reduced costs reopened phase 2")

        values = tab.values()
        if values.size and values.min() < -self.feasibility_tol:
            raise SolverError(f"refactored basis is infeasible by {-values.min():.3e}")
        y = np.zeros(tab.n_total)
        y[tab.basis] = np.maximum(values, 0.0)
        try:
            duals = tab.duals(num_rows)
        except np.linalg.LinAlgError as e:
            raise SolverError(f"basis matrix became singular: {e}") from e
        return _Run(LpStatus.OPTIMAL, y=y[: tab.ncols], duals=duals, iterations=iterations)

    @staticmethod
    def _mask(tab: _Tableau, excluded: Sequence[int]) -> np.ndarray:
        mask = np.zeros(tab.n_total, dtype=bool)
        if len(excluded):
            mask[list(excluded)] = True
        return mask

    def _eligible(self, tab: _Tableau, cost_row: int, mask: np.ndarray) -> np.ndarray:
        return (tab.T[cost_row, :-1] < -self.pivot_tol) & ~mask

    def _run_phase(self, tab: _Tableau, phase: int, excluded: Sequence[int]):
        m = tab.m
        cost_row = m + 1 if phase == 1 else m
        mask = self._mask(tab, excluded)
        max_iterations = self.max_iterations_factor * (m + tab.n_total)

        iterations = 0
        degenerate = 0
        while True:
            eligible = self._eligible(tab, cost_row, mask)
            if not eligible.any():
                return LpStatus.OPTIMAL, iterations
            use_bland = degenerate >= self.bland_streak
            if use_bland:
                col = int(np.flatnonzero(eligible)[0])
            else:
                reduced = tab.T[cost_row, :-1]
                col = int(np.argmin(np.where(eligible, reduced, np.inf)))

            pick = self._ratio_test(tab, col, use_bland)
            if pick is None:
                return LpStatus.UNBOUNDED, iterations
            row, step = pick
            tab.pivot(row, col, self.refactor_every)
            iterations += 1
            degenerate = degenerate + 1 if step <= _RATIO_TIE else 0
            if iterations > max_iterations:
                raise SolverError(f"simplex exceeded {max_iterations} iterations")

    def _ratio_test(self, tab: _Tableau, col: int, use_bland: bool) -> Optional[Tuple[int, float]]:
        m = tab.m
        column = tab.T[:m, col]
        candidates = np.flatnonzero(column > self.pivot_tol)
        if candidates.size == 0:
            return None
        rhs = np.maximum(tab.T[candidates, -1], 0.0)
        ratios = rhs / column[candidates]
        best = float(ratios.min())
        ties = candidates[ratios <= best + _RATIO_TIE * max(1.0, best)]
        if ties.size == 1:
            row = int(ties[0])
        elif use_bland:
            row = int(min(ties, key=lambda i: tab.basis[i]))
        else:
            row = int(ties[np.argmax(column[ties])])
        return row, best

    def _drive_out_artificials(self, tab: _Tableau) -> None:
        art_set = set(tab.art_cols)
        structural = ~self._mask(tab, tab.art_cols)
        i = 0
        while i < tab.m:
            if tab.basis[i] not in art_set:
                i += 1
                continue
            row = np.where(structural, tab.T[i, :-1], 0.0)
            j = int(np.argmax(np.abs(row)))
            if abs(row[j]) > self.pivot_tol:
                tab.pivot(i, j, self.refactor_every)
                i += 1
            else:
                logger.debug("Simplex: dropping redundant row %d", tab.rows[i])
                tab.drop_row(i)
        tab.reinvert()


_default_solver = SimplexSolver()


def solve(lp: LinearProgram) -> LpOutcome:
    """Solve lp with the default tolerances from config."""
    return _default_solver.solve(lp)
