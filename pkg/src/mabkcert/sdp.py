"""Small deterministic primal-dual interior-point solver for LMI problems.

Problem form (after presolve):

    maximize    c . y
    subject to  M(y) = F0 + sum_i y_i F_i  is positive semidefinite

with symmetric basis matrices ``F_i`` of disjoint support.  The Lagrange dual is

    minimize    <F0, Z>
    subject to  <F_i, Z> = -c_i  for all i,   Z >= 0,

so any dual-feasible ``Z`` certifies ``c . y <= <F0, Z>``.  The solver runs the
HKM primal-dual iteration: the barrier parameter is reduced geometrically
(factor 0.3), each step solves the Schur system ``H dy = mu * <F_i, S^-1> + c``
with ``H_ij = <F_i, sym(S^-1 F_j Z)>``, and step lengths are chosen by the
fraction-to-boundary rule (0.98) with positive-definiteness checked through
symmetric (Cholesky-based) factorizations.  Equality constraints, given as
per-variable pins ``y_i = f_i``, are eliminated by substitution into ``F0``
before the iteration starts.

Everything is dense and deterministic: fixed elimination order, no randomized
pivoting, so identical inputs produce bit-identical iteration traces.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import cho_factor, cho_solve, cholesky, eigvalsh, solve_triangular

MU_REDUCTION = 0.3
FRACTION_TO_BOUNDARY = 0.98
CERT_EIG_FLOOR = -1e-9
CERT_STATIONARITY_TOL = 1e-7


class SdpSolverError(RuntimeError):
    """Raised on numerical breakdown or iteration-limit hits, with diagnostics."""

    def __init__(self, message: str, diagnostics: dict | None = None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


@dataclass(frozen=True)
class SdpProblem:
    """Dual-form LMI data: ``M(y) = F0 + sum y_i F_i`` must stay PSD.

    The basis matrices are stored as one flat symmetric COO list
    (``var_index, rows, cols, vals``) containing both triangles of every
    off-diagonal entry.  ``equalities`` lists per-variable pins ``y_i = f_i``
    (the rows of an ``E y = f`` system with unit rows), which are eliminated
    by substitution before solving.
    """

    dimension: int
    n_vars: int
    f0: np.ndarray
    var_index: np.ndarray
    rows: np.ndarray
    cols: np.ndarray
    vals: np.ndarray
    c: np.ndarray
    equalities: tuple[tuple[int, float], ...] = ()

    @classmethod
    def from_dense(
        cls,
        f0: np.ndarray,
        mats: list[np.ndarray],
        c: np.ndarray,
        equalities: tuple[tuple[int, float], ...] = (),
    ) -> "SdpProblem":
        d = f0.shape[0]
        vi, rr, cc, vv = [], [], [], []
        for i, m in enumerate(mats):
            if not np.allclose(m, m.T):
                raise ValueError(f"basis matrix {i} is not symmetric")
            r, c_ = np.nonzero(m)
            vi.extend([i] * len(r))
            rr.extend(r)
            cc.extend(c_)
            vv.extend(m[r, c_])
        return cls(
            dimension=d,
            n_vars=len(mats),
            f0=np.array(f0, dtype=float),
            var_index=np.array(vi, dtype=np.intp),
            rows=np.array(rr, dtype=np.intp),
            cols=np.array(cc, dtype=np.intp),
            vals=np.array(vv, dtype=float),
            c=np.array(c, dtype=float),
            equalities=tuple(equalities),
        )

    def basis_matrix(self, i: int) -> np.ndarray:
        m = np.zeros((self.dimension, self.dimension))
        sel = self.var_index == i
        np.add.at(m, (self.rows[sel], self.cols[sel]), self.vals[sel])
        return m


@dataclass(frozen=True)
class SdpSolution:
    """Solver output; ``bound`` is the dual objective (a certified upper bound)."""

    y: np.ndarray
    primal_objective: float
    bound: float
    dual_matrix: np.ndarray
    equality_multipliers: dict[int, float]
    duality_gap: float
    iterations: int
    status: str
    trace: tuple[tuple[float, ...], ...] = field(repr=False, default=())


class _Operator:
    """Vectorized apply/adjoint for the flat COO basis."""

    def __init__(self, problem: SdpProblem, keep: np.ndarray):
        # keep: boolean mask of surviving (non-pinned) variables
        self.d = problem.dimension
        old_to_new = -np.ones(problem.n_vars, dtype=np.intp)
        old_to_new[keep] = np.arange(int(keep.sum()))
        sel = keep[problem.var_index]
        self.var = old_to_new[problem.var_index[sel]]
        self.flat = problem.rows[sel] * self.d + problem.cols[sel]
        self.vals = problem.vals[sel]
        self.m = int(keep.sum())

    def mat(self, y: np.ndarray, base: np.ndarray) -> np.ndarray:
        out = base.copy().ravel()
        np.add.at(out, self.flat, self.vals * y[self.var])
        return out.reshape(self.d, self.d)

    def adjoint(self, z: np.ndarray) -> np.ndarray:
        return np.bincount(
            self.var, weights=z.ravel()[self.flat] * self.vals, minlength=self.m
        )

    def columns(self) -> list[tuple[np.ndarray, np.ndarray, np.ndarray]]:
        order = np.argsort(self.var, kind="stable")
        var_s = self.var[order]
        flat_s = self.flat[order]
        vals_s = self.vals[order]
        bounds = np.searchsorted(var_s, np.arange(self.m + 1))
        cols = []
        for j in range(self.m):
            lo, hi = bounds[j], bounds[j + 1]
            f = flat_s[lo:hi]
            cols.append((f // self.d, f % self.d, vals_s[lo:hi]))
        return cols


def _max_step(x_chol: np.ndarray, delta: np.ndarray) -> float:
    """Largest alpha with X + alpha*Delta still PSD, via L^-1 Delta L^-T."""
    a = solve_triangular(x_chol, delta, lower=True)
    t = solve_triangular(x_chol, a.T, lower=True)
    lam_min = float(eigvalsh(0.5 * (t + t.T))[0])
    if lam_min >= 0.0:
        return np.inf
    return -1.0 / lam_min


def presolve(problem: SdpProblem) -> tuple[np.ndarray, np.ndarray, float]:
    """Substitute pinned variables into F0; returns (keep mask, F0', objective const)."""
    keep = np.ones(problem.n_vars, dtype=bool)
    f0 = problem.f0.copy()
    const = 0.0
    for i, value in problem.equalities:
        if not keep[i]:
            raise ValueError(f"variable {i} pinned twice")
        keep[i] = False
        sel = problem.var_index == i
        np.add.at(
            f0, (problem.rows[sel], problem.cols[sel]), problem.vals[sel] * value
        )
        const += problem.c[i] * value
    return keep, f0, const


def solve(problem: SdpProblem, tol: float = 1e-9, max_iter: int = 120) -> SdpSolution:
    """Run the interior-point iteration until gap and residuals drop below tol."""
    keep, f0, obj_const = presolve(problem)
    op = _Operator(problem, keep)
    d, m = op.d, op.m
    c = problem.c[keep]

    y = np.zeros(m)
    s = op.mat(y, f0)
    try:
        cholesky(s, lower=True)
    except np.linalg.LinAlgError as exc:
        raise SdpSolverError(
            "no strictly feasible start: M(0) is not positive definite",
            {"dimension": d, "n_vars": m},
        ) from exc
    z = np.eye(d)
    columns = op.columns()
    trace: list[tuple[float, ...]] = []

    status = "max_iter"
    it = 0
    for it in range(1, max_iter + 1):
        try:
            ls = cholesky(s, lower=True)
            lz = cholesky(z, lower=True)
        except np.linalg.LinAlgError as exc:
            raise SdpSolverError(
                f"factorization failure at iteration {it}",
                {"iteration": it, "trace": tuple(trace)},
            ) from exc
        w = cho_solve((ls, True), np.eye(d))

        mu = float(np.tensordot(s, z)) / d
        primal = float(c @ y)
        dual = float(np.tensordot(f0, z))
        gap = dual - primal
        rd = c + op.adjoint(z)  # want <F_i, Z> = -c_i
        rd_inf = float(np.abs(rd).max()) if m else 0.0

        # weak duality with the residual-corrected dual objective: by the exact
        # identity dual - primal = <S, Z> - y . rd, the corrected slack is
        # <S, Z>, which must stay non-negative while S and Z are PD
        wd_slack = gap + float(y @ rd)
        if wd_slack < -1e-9 * (1.0 + abs(dual)):
            raise SdpSolverError(
                f"weak duality violated at iteration {it}: slack {wd_slack}",
                {"iteration": it},
            )

        if (
            abs(gap) <= tol * (1.0 + abs(dual))
            and rd_inf <= max(tol, 1e-10) * 100.0
            and mu <= tol * 10.0
        ):
            status = "optimal"
            trace.append((mu, primal, dual, gap, rd_inf, 0.0, 0.0))
            break

        mu_target = MU_REDUCTION * mu

        # Schur matrix H_ij = <F_i, sym(W F_j Z)>, assembled column by column
        h = np.empty((m, m))
        for j, (rj, cj, vj) in enumerate(columns):
            yj = (w[:, rj] * vj) @ z[cj, :]
            h[:, j] = op.adjoint(0.5 * (yj + yj.T))
        h = 0.5 * (h + h.T)
        ridge = 1e-14 * max(1.0, float(h.diagonal().max()))
        h[np.diag_indices_from(h)] += ridge

        rhs = mu_target * op.adjoint(w) + c
        try:
            hc = cho_factor(h, lower=True)
        except np.linalg.LinAlgError as exc:
            raise SdpSolverError(
                f"Schur complement factorization failed at iteration {it}",
                {"iteration": it, "mu": mu, "trace": tuple(trace)},
            ) from exc
        dy = cho_solve(hc, rhs)

        ds = op.mat(dy, np.zeros((d, d)))
        dz = mu_target * w - z - w @ ds @ z
        dz = 0.5 * (dz + dz.T)

        alpha_p = min(1.0, FRACTION_TO_BOUNDARY * _max_step(ls, ds))
        alpha_d = min(1.0, FRACTION_TO_BOUNDARY * _max_step(lz, dz))

        y = y + alpha_p * dy
        s = op.mat(y, f0)
        z = z + alpha_d * dz
        trace.append((mu, primal, dual, gap, rd_inf, alpha_p, alpha_d))

    if status != "optimal":
        raise SdpSolverError(
            f"iteration limit {max_iter} reached (gap {trace[-1][3]:.3e},"
            f" residual {trace[-1][4]:.3e})",
            {"iterations": max_iter, "trace": tuple(trace)},
        )

    full_y = np.zeros(problem.n_vars)
    full_y[keep] = y
    multipliers: dict[int, float] = {}
    for i, value in problem.equalities:
        full_y[i] = value
        sel = problem.var_index == i
        fi_dot_z = float(
            np.sum(problem.vals[sel] * z[problem.rows[sel], problem.cols[sel]])
        )
        multipliers[i] = problem.c[i] + fi_dot_z

    primal = float(c @ y) + obj_const
    bound = float(np.tensordot(f0, z)) + obj_const
    return SdpSolution(
        y=full_y,
        primal_objective=primal,
        bound=bound,
        dual_matrix=z,
        equality_multipliers=multipliers,
        duality_gap=bound - primal,
        iterations=it,
        status=status,
        trace=tuple(trace),
    )


def verify_certificate(problem: SdpProblem, solution: SdpSolution) -> bool:
    """Re-check the dual certificate without trusting solver internals.

    Confirms the dual slack is PSD up to a -1e-9 eigenvalue floor, dual
    feasibility (stationarity) residuals are below 1e-7 for every free
    variable, and the reported bound matches the recomputed dual objective.
    """
    if solution.status != "optimal":
        return False
    z = solution.dual_matrix
    lam_min = float(eigvalsh(0.5 * (z + z.T))[0])
    if lam_min < CERT_EIG_FLOOR:
        return False

    keep, f0, obj_const = presolve(problem)
    op = _Operator(problem, keep)
    residual = problem.c[keep] + op.adjoint(z)
    if residual.size and float(np.abs(residual).max()) >= CERT_STATIONARITY_TOL:
        return False

    recomputed = float(np.tensordot(f0, z)) + obj_const
    return abs(recomputed - solution.bound) <= 1e-9 * (1.0 + abs(solution.bound))


def certified_upper_bound(problem: SdpProblem, solution: SdpSolution) -> float:
    """Bound valid even with tiny dual residuals, assuming ``|y*| <= 1``.

    For moment problems every variable is a correlator of dichotomic words, so
    ``|y_i| <= 1``; each stationarity residual then costs at most its absolute
    value, and a negative dual eigenvalue ``-e`` can be lifted by ``e * I``
    at a price of ``e * tr-part of F0``.
    """
    keep, f0, obj_const = presolve(problem)
    op = _Operator(problem, keep)
    z = solution.dual_matrix
    residual = problem.c[keep] + op.adjoint(z)
    lam_min = float(eigvalsh(0.5 * (z + z.T))[0])
    lift = max(0.0, -lam_min) * float(np.trace(f0))
    slack = float(np.abs(residual).sum()) if residual.size else 0.0
    return float(np.tensordot(f0, z)) + obj_const + slack + lift
