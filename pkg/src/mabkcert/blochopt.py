"""Multi-start maximization of MABK values over measurement Bloch vectors.

Observables are parameterized by spherical angles, so every candidate is a
unit Bloch vector by construction.  Each restart draws its starting angles
from ``numpy.random.default_rng([seed, restart_index])`` (the documented
counter scheme: results depend only on (n, restarts, seed)) and runs a local
ascent with central-finite-difference gradients and Armijo backtracking.
The absolute value in the MABK score is handled by ascending the signed
objective and its negation separately and keeping the larger of the two.

All restarts are advanced together as numpy batches; per-restart state is
independent, so the batched run is identical to running restarts one by one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .correlators import MeasurementSettings, identity_free_elements
from .mabk import mabk_expression
from .pauli import SIGMA_Z, BlochVector

_ARMIJO_C1 = 1e-4
_MAX_BACKTRACKS = 30
_STEP_GROWTH = 1.3
_MAX_STEP = 2.0


@dataclass(frozen=True)
class OptimizerConfig:
    restarts: int = 100
    seed: int = 20240811
    gradient_step: float = 1e-5
    convergence_tol: float = 1e-8
    max_iterations: int = 400

    def __post_init__(self) -> None:
        if self.restarts < 1:
            raise ValueError("restarts must be >= 1")
        if self.convergence_tol <= 0:
            raise ValueError("convergence_tol must be positive")


def default_config(n: int, seed: int = 20240811) -> OptimizerConfig:
    """Default restart budget: 100 for n <= 5, 30 for larger scenarios."""
    return OptimizerConfig(restarts=100 if n <= 5 else 30, seed=seed)


@dataclass(frozen=True)
class OptimizationResult:
    best_value: float
    best_settings: MeasurementSettings
    per_restart_values: tuple[float, ...]
    converged_count: int


def angles_to_bloch(theta: float, phi: float) -> BlochVector:
    """Spherical parameterization (sin t cos p, sin t sin p, cos t)."""
    st = math.sin(theta)
    return BlochVector(st * math.cos(phi), st * math.sin(phi), math.cos(theta))


class _MabkObjective:
    """Batched signed MABK value as a function of packed angle vectors."""

    def __init__(self, n: int, honest: bool):
        expr = mabk_expression(n)
        self.n = n
        self.honest = honest
        self.inputs = np.array([t.inputs for t in expr.terms], dtype=np.intp)
        self.coeffs = np.array([float(t.coefficient) for t in expr.terms])
        self.n_obs = 2 * n - 1 if honest else 2 * n
        self.dim = 2 * self.n_obs
        self.axes, self.signs = identity_free_elements(n)
        self._party_index = np.arange(n)[None, :]

    def observables(self, angles: np.ndarray) -> np.ndarray:
        """Angles (..., dim) -> Bloch tensor (..., n, 2, 3)."""
        theta = angles[..., 0::2]
        phi = angles[..., 1::2]
        st = np.sin(theta)
        bloch = np.stack(
            (st * np.cos(phi), st * np.sin(phi), np.cos(theta)), axis=-1
        )  # (..., n_obs, 3)
        shape = angles.shape[:-1] + (self.n, 2, 3)
        obs = np.empty(shape)
        if self.honest:
            obs[..., 0, 0, :] = (0.0, 0.0, 1.0)
            flat = obs.reshape(angles.shape[:-1] + (2 * self.n, 3))
            flat[..., 1:, :] = bloch
        else:
            obs.reshape(angles.shape[:-1] + (2 * self.n, 3))[...] = bloch
        return obs

    def value(self, angles: np.ndarray) -> np.ndarray:
        """Signed Bell value, batched over leading axes of ``angles``."""
        obs = self.observables(angles)
        chosen = obs[..., self._party_index, self.inputs, :]  # (..., T, n, 3)
        factors = chosen[..., self._party_index, self.axes]  # (..., T, K, n)
        expectations = factors.prod(axis=-1) @ self.signs  # (..., T)
        return expectations @ self.coeffs

    @property
    def row_cost(self) -> int:
        """Elements of the largest per-point temporary built by ``value``."""
        return len(self.coeffs) * self.axes.shape[0] * self.n


def _initial_angles(objective: _MabkObjective, restarts: int, seed: int) -> np.ndarray:
    angles = np.empty((restarts, objective.dim))
    for r in range(restarts):
        rng = np.random.default_rng([seed, r])
        theta = rng.uniform(0.0, np.pi, objective.n_obs)
        phi = rng.uniform(0.0, 2.0 * np.pi, objective.n_obs)
        angles[r, 0::2] = theta
        angles[r, 1::2] = phi
    return angles


def _chunked_value(
    objective: _MabkObjective, sign: float, points: np.ndarray
) -> np.ndarray:
    """Evaluate the signed objective on (M, dim) rows with bounded temporaries."""
    chunk = max(4, 4_000_000 // objective.row_cost)
    out = np.empty(points.shape[0])
    for lo in range(0, points.shape[0], chunk):
        out[lo : lo + chunk] = sign * objective.value(points[lo : lo + chunk])
    return out


def _ascend(
    objective: _MabkObjective, sign: float, x0: np.ndarray, config: OptimizerConfig
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Batched gradient ascent of ``sign * value``; returns (x, f, converged)."""
    x = x0.copy()
    restarts, dim = x.shape
    f = _chunked_value(objective, sign, x)
    step = np.full(restarts, 0.5)
    done = np.zeros(restarts, dtype=bool)
    converged = np.zeros(restarts, dtype=bool)
    h = config.gradient_step
    eye = np.eye(dim) * h

    for _ in range(config.max_iterations):
        active = ~done
        if not active.any():
            break
        xa = x[active]
        na = xa.shape[0]
        # central differences: rows ordered (point, coordinate, +/-)
        probes = np.repeat(xa, 2 * dim, axis=0).reshape(na, dim, 2, dim)
        probes[:, :, 0, :] += eye[None, :, :]
        probes[:, :, 1, :] -= eye[None, :, :]
        fvals = _chunked_value(objective, sign, probes.reshape(-1, dim))
        fvals = fvals.reshape(na, dim, 2)
        grad = (fvals[:, :, 0] - fvals[:, :, 1]) / (2.0 * h)

        gnorm = np.abs(grad).max(axis=1)
        newly_conv = gnorm < config.convergence_tol
        if newly_conv.any():
            idx = np.flatnonzero(active)[newly_conv]
            done[idx] = True
            converged[idx] = True
        still = ~newly_conv
        if not still.any():
            continue

        idx_live = np.flatnonzero(active)[still]
        xl = xa[still]
        gl = grad[still]
        fl = f[idx_live]
        tl = step[idx_live]
        gsq = (gl * gl).sum(axis=1)

        accepted = np.zeros(len(idx_live), dtype=bool)
        for _bt in range(_MAX_BACKTRACKS):
            trying = ~accepted
            if not trying.any():
                break
            cand = xl[trying] + tl[trying, None] * gl[trying]
            fc = _chunked_value(objective, sign, cand)
            ok = fc >= fl[trying] + _ARMIJO_C1 * tl[trying] * gsq[trying]
            sel = np.flatnonzero(trying)[ok]
            if sel.size:
                xl[sel] = cand[ok]
                fl[sel] = fc[ok]
                accepted[sel] = True
            tl[~accepted & trying] *= 0.5

        stalled = ~accepted
        if stalled.any():
            done[idx_live[stalled]] = True  # line search exhausted: local stop
        x[idx_live] = xl
        f[idx_live] = fl
        step[idx_live] = np.minimum(tl * _STEP_GROWTH, _MAX_STEP)

    return x, f, converged


def _settings_from_angles(
    objective: _MabkObjective, angles: np.ndarray, honest: bool
) -> MeasurementSettings:
    obs = objective.observables(angles)

    def bloch(party: int, choice: int) -> BlochVector:
        v = obs[party, choice]
        return BlochVector(float(v[0]), float(v[1]), float(v[2]))

    n = objective.n
    alice = (SIGMA_Z if honest else bloch(0, 0), bloch(0, 1))
    bobs = tuple((bloch(i, 0), bloch(i, 1)) for i in range(1, n))
    return MeasurementSettings(alice, bobs, honest=honest)


def _maximize(n: int, honest: bool, config: OptimizerConfig | None) -> OptimizationResult:
    if n < 3:
        raise ValueError(f"need n >= 3, got {n}")
    cfg = config if config is not None else default_config(n)
    objective = _MabkObjective(n, honest)
    x0 = _initial_angles(objective, cfg.restarts, cfg.seed)

    x_plus, f_plus, conv_plus = _ascend(objective, +1.0, x0, cfg)
    x_minus, f_minus, conv_minus = _ascend(objective, -1.0, x0, cfg)

    plus_wins = f_plus >= f_minus
    values = np.where(plus_wins, f_plus, f_minus)
    winner_converged = np.where(plus_wins, conv_plus, conv_minus)

    best = int(np.argmax(values))
    best_angles = x_plus[best] if plus_wins[best] else x_minus[best]
    return OptimizationResult(
        best_value=float(values[best]),
        best_settings=_settings_from_angles(objective, best_angles, honest),
        per_restart_values=tuple(float(v) for v in values),
        converged_count=int(winner_converged.sum()),
    )


def maximize_honest_mabk(
    n: int, config: OptimizerConfig | None = None
) -> OptimizationResult:
    """Best MABK value over all settings with the first party's A0 = sigma_z."""
    return _maximize(n, honest=True, config=config)


def maximize_unconstrained_mabk(
    n: int, config: OptimizerConfig | None = None
) -> OptimizationResult:
    """Best MABK value with every observable free; sanity oracle for 2**((n-1)/2)."""
    return _maximize(n, honest=False, config=config)
