"""
Full-size statistical runs; deselected by default, run with `pytest -m slow`
"""
import math
import os

import numpy as np
import pytest

from modules.adversary import (
    intercept_resend_experiment,
    missing_controller_experiment,
    outcome_uniformity,
)
from modules.protocol import AGENTS, EveModel, Party, ProtocolConfig, batch_summary, run_batch

pytestmark = pytest.mark.slow

WORKERS = os.cpu_count() or 1
SIGMAS = 3


def within(rate, expected, trials):
    return abs(rate - expected) <= SIGMAS * math.sqrt(expected * (1 - expected) / trials)


@pytest.mark.parametrize("m", [2, 3])
def test_thousand_runs_rotating_receivers(m):
    config = ProtocolConfig(m=m, seed=1000 + m, decoys_per_sequence=0)
    transcripts = run_batch(config, 1000, workers=WORKERS, rotate_receiver=True)
    stats = batch_summary(transcripts, 1e-9, rotate_receiver=True)
    assert {t.config.receiver for t in transcripts} == set(AGENTS)
    assert stats.successes == stats.runs == 1000
    assert stats.min_fidelity >= 1 - 1e-9


def test_alice_outcomes_are_uniform_at_full_size():
    trials = 80000
    result = outcome_uniformity(trials, np.random.default_rng(80), workers=WORKERS)
    assert sum(result.counts) == trials
    assert result.p_value > 0.001
    for count in result.counts:
        assert within(count / trials, 1 / 8, trials)


@pytest.mark.parametrize("m", [1, 2, 3])
def test_missing_controller_rate_at_full_size(m):
    trials = 10000
    result = missing_controller_experiment(
        m, Party.BOB1, trials, np.random.default_rng(100 + m), workers=WORKERS
    )
    assert within(result.rate, 2.0 ** -m, trials)


def test_two_qubit_rate_is_square_at_full_size():
    trials = 10000
    one = missing_controller_experiment(
        1, Party.BOB2, trials, np.random.default_rng(201), workers=WORKERS
    )
    two = missing_controller_experiment(
        2, Party.BOB2, trials, np.random.default_rng(202), workers=WORKERS
    )
    sigma = math.sqrt(0.25 * 0.75 / trials + 0.25 / trials)
    assert abs(two.rate - one.rate ** 2) <= SIGMAS * sigma


@pytest.mark.parametrize(
    "eve", [EveModel.INTERCEPT_RESEND_RANDOM_BASIS, EveModel.INTERCEPT_RESEND_Z]
)
def test_pooled_decoy_mismatch_rate(eve):
    result = intercept_resend_experiment(1000, eve, 10, np.random.default_rng(300))
    assert result.decoys == 10000
    assert within(result.per_decoy_rate, 0.25, result.decoys)
    assert result.aborts == result.trials
