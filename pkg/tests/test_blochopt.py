"""Multi-start ascent: determinism, bound compliance, quick value checks."""

import math

import pytest

from mabkcert.blochopt import (
    OptimizerConfig,
    angles_to_bloch,
    default_config,
    maximize_honest_mabk,
    maximize_unconstrained_mabk,
)
from mabkcert.correlators import mabk_value, theorem1_bound
from mabkcert.mabk import mabk_expression
from mabkcert.pauli import SIGMA_Z

QUICK = OptimizerConfig(restarts=12, seed=424242)


def test_angles_to_bloch_axes():
    assert angles_to_bloch(0.0, 1.23).bz == pytest.approx(1.0, abs=1e-15)
    b = angles_to_bloch(math.pi / 2, 0.0)
    assert (b.bx, b.by) == (pytest.approx(1.0, abs=1e-15), pytest.approx(0.0, abs=1e-12))
    b = angles_to_bloch(math.pi / 2, math.pi / 2)
    assert b.by == pytest.approx(1.0, abs=1e-15)


def test_config_validation():
    with pytest.raises(ValueError):
        OptimizerConfig(restarts=0)
    with pytest.raises(ValueError):
        OptimizerConfig(convergence_tol=0.0)
    assert default_config(4).restarts == 100
    assert default_config(7).restarts == 30


def test_deterministic_given_seed():
    a = maximize_unconstrained_mabk(3, QUICK)
    b = maximize_unconstrained_mabk(3, QUICK)
    assert a.per_restart_values == b.per_restart_values
    assert a.best_value == b.best_value


def test_per_restart_seeding_is_a_counter_scheme():
    # restart r depends only on (seed, r): a longer run extends a shorter one
    short = maximize_unconstrained_mabk(
        3, OptimizerConfig(restarts=5, seed=424242)
    )
    long = maximize_unconstrained_mabk(
        3, OptimizerConfig(restarts=9, seed=424242)
    )
    assert long.per_restart_values[:5] == short.per_restart_values


def test_best_is_max_of_restarts():
    result = maximize_honest_mabk(3, QUICK)
    assert result.best_value == max(result.per_restart_values)
    assert 0 <= result.converged_count <= QUICK.restarts


def test_honest_does_not_exceed_unconstrained():
    honest = maximize_honest_mabk(3, QUICK)
    free = maximize_unconstrained_mabk(3, QUICK)
    assert honest.best_value <= free.best_value + 1e-9


def test_unconstrained_three_party_reaches_two():
    result = maximize_unconstrained_mabk(3, QUICK)
    assert result.best_value == pytest.approx(2.0, abs=1e-6)


def test_honest_three_party_respects_cap():
    result = maximize_honest_mabk(3, QUICK)
    assert result.best_value <= theorem1_bound(3) + 1e-6
    assert result.best_settings.honest
    assert result.best_settings.alice[0] == SIGMA_Z


def test_best_settings_reproduce_best_value():
    result = maximize_honest_mabk(3, QUICK)
    report = mabk_value(mabk_expression(3), result.best_settings)
    assert report.mabk_value == pytest.approx(result.best_value, abs=1e-9)


def test_returned_settings_are_unit_bloch_vectors():
    result = maximize_unconstrained_mabk(3, QUICK)
    s = result.best_settings
    for b in [*s.alice, *(b for pair in s.bobs for b in pair)]:
        assert abs(b.bx**2 + b.by**2 + b.bz**2 - 1.0) < 1e-12


def test_rejects_small_n():
    with pytest.raises(ValueError):
        maximize_honest_mabk(2, QUICK)
