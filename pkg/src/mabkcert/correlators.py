"""Expectation values of product observables on GHZ states.

The expectation of ``O_1 x ... x O_N`` (each ``O_i = b_i . sigma``) is computed
through the stabilizer expansion: ``tr(rho O) = 2**-N * sum_S tr(O S)`` and the
per-qubit factor ``tr(O_i S_i) = 2 * b_i[S_i]`` vanishes whenever ``S_i`` is the
identity letter.  Only identity-free stabilizer elements therefore contribute;
their letters and (real) signs are cached per party count as small integer
arrays, which also powers the batched evaluation used by the optimizer.

For odd N no identity-free element consists of Z letters only, which is why
every correlator with the first observable pinned to sigma_z vanishes exactly;
for even N the single all-Z element survives and yields the product of the
z-components of the remaining observables.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from .mabk import BellExpression
from .pauli import SIGMA_Z, BlochVector, PauliLetter
from .stabilizer import ghz_expansion

_AXIS_INDEX = {PauliLetter.X: 0, PauliLetter.Y: 1, PauliLetter.Z: 2}


@dataclass(frozen=True)
class MeasurementSettings:
    """Two Bloch observables for the first party and for each of the others.

    ``honest=True`` asserts that the first party's input-0 observable is pinned
    to sigma_z exactly (the key-generation setting reused in test rounds).
    """

    alice: tuple[BlochVector, BlochVector]
    bobs: tuple[tuple[BlochVector, BlochVector], ...]
    honest: bool = False

    def __post_init__(self) -> None:
        if self.honest and self.alice[0] != SIGMA_Z:
            raise ValueError("honest settings require A0 = sigma_z exactly")

    @property
    def n_parties(self) -> int:
        return 1 + len(self.bobs)

    def observable(self, party: int, choice: int) -> BlochVector:
        if party == 0:
            return self.alice[choice]
        return self.bobs[party - 1][choice]

    def observables_for(self, inputs: Sequence[int]) -> list[BlochVector]:
        return [self.observable(i, x) for i, x in enumerate(inputs)]

    def negate_party(self, party: int) -> "MeasurementSettings":
        """Flip the sign of both observables of one party (outcome relabeling)."""
        if party == 0:
            return MeasurementSettings(
                (self.alice[0].negated(), self.alice[1].negated()), self.bobs
            )
        bobs = list(self.bobs)
        k = party - 1
        bobs[k] = (bobs[k][0].negated(), bobs[k][1].negated())
        return MeasurementSettings(self.alice, tuple(bobs), self.honest)


@dataclass(frozen=True)
class CorrelatorReport:
    """MABK value of one settings choice together with the relevant bounds."""

    expectations: dict[tuple[int, ...], float]
    mabk_value: float
    bound_gme: float
    bound_theorem1: float | None


@lru_cache(maxsize=None)
def identity_free_elements(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Axis indices (K, n) and signs (K,) of identity-free stabilizer elements."""
    axes = []
    signs = []
    for element in ghz_expansion(n):
        if any(l is PauliLetter.I for l in element.letters):
            continue
        if element.phase_power not in (0, 2):
            raise AssertionError("stabilizer element with imaginary phase")
        axes.append([_AXIS_INDEX[l] for l in element.letters])
        signs.append(1.0 if element.phase_power == 0 else -1.0)
    return np.array(axes, dtype=np.intp), np.array(signs)


def ghz_expectation(n: int, observables: Sequence[BlochVector]) -> float:
    """``< O_1 x ... x O_n >`` on the n-party GHZ state."""
    if len(observables) != n:
        raise ValueError(f"expected {n} observables, got {len(observables)}")
    axes, signs = identity_free_elements(n)
    comp = np.array([[b.bx, b.by, b.bz] for b in observables])  # (n, 3)
    factors = comp[np.arange(n)[None, :], axes]  # (K, n)
    return float(signs @ factors.prod(axis=1))


def ghz_expectation_batch(n: int, blochs: np.ndarray) -> np.ndarray:
    """Batched expectation for an array of shape (..., n, 3) of Bloch vectors."""
    axes, signs = identity_free_elements(n)
    # gather (..., K, n): component axes[k, i] of party i for element k
    factors = blochs[..., np.arange(n)[None, :], axes]
    return factors.prod(axis=-1) @ signs


def honest_even_formula(n: int, bob_bloch_z: Sequence[float]) -> float:
    """Product of the z-components; the even-N value of ``<sigma_z x B's>``."""
    if n % 2 == 1:
        raise ValueError(f"formula applies to even party counts, got n={n}")
    if len(bob_bloch_z) != n - 1:
        raise ValueError(f"expected {n - 1} z-components, got {len(bob_bloch_z)}")
    return math.prod(bob_bloch_z)


def gme_bound(n: int, m: int) -> float:
    """MABK bound ``2**((m-1)/2)`` for entanglement depth m among n parties."""
    if not 1 <= m <= n:
        raise ValueError(f"need 1 <= m <= n, got m={m}, n={n}")
    return 2.0 ** ((m - 1) / 2)


def theorem1_bound(n: int) -> float:
    """Honest-implementation cap ``2**((n-3)/2)`` for odd n (half the terms vanish)."""
    if n < 3 or n % 2 == 0:
        raise ValueError(f"need odd n >= 3, got {n}")
    return 2.0 ** ((n - 3) / 2)


def mabk_value(expr: BellExpression, settings: MeasurementSettings) -> CorrelatorReport:
    """Evaluate a Bell expression on the GHZ state with the given settings."""
    n = expr.n_parties
    if settings.n_parties != n:
        raise ValueError(
            f"settings have {settings.n_parties} parties, expression has {n}"
        )
    expectations: dict[tuple[int, ...], float] = {}
    total = 0.0
    for term in expr.terms:
        value = ghz_expectation(n, settings.observables_for(term.inputs))
        expectations[term.inputs] = value
        total += float(term.coefficient) * value
    return CorrelatorReport(
        expectations=expectations,
        mabk_value=abs(total),
        bound_gme=gme_bound(n, n - 1),
        bound_theorem1=theorem1_bound(n) if n % 2 == 1 else None,
    )
