"""
Security experiments for QSTS MCP Server

Two attacks are simulated: a controller who never publishes its parities
(the receiver has to guess them) and an intercept-resend eavesdropper on
the decoy photons.
"""
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy import stats

from modules import schema
from modules.protocol import (
    DecoyState,
    EveModel,
    Party,
    ProtocolConfig,
    alice_measure,
    attach_secret,
    controllers_for,
    derive_rng,
    run_decoy_check,
    run_protocol,
    secret_labels,
    setup_channel,
)
from modules.errors import ProtocolError
from modules.qstate import (
    Basis,
    QubitLabel,
    Sign,
    StateVector,
    basis_state,
    measure_basis,
    random_pure_state,
    x_state,
)
from modules.settings import get_settings

logger = logging.getLogger(__name__)

# The settings will be set by the main file
settings = get_settings()

Z95 = 1.96


def configure(config):
    """Configure the module with the simulator settings"""
    global settings
    settings = config


@dataclass(frozen=True)
class SuccessStats:
    trials: int
    successes: int
    rate: float
    ci95_halfwidth: float
    m: int = 1
    missing: Tuple[Party, ...] = ()
    note: str = ""


@dataclass(frozen=True)
class DetectionStats:
    decoys: int
    mismatches: int
    per_decoy_rate: float
    eve: EveModel = EveModel.NONE
    trials: int = 0
    aborts: int = 0


@dataclass(frozen=True)
class UniformityStats:
    trials: int
    counts: Tuple[int, ...]
    chi2: float
    p_value: float


@dataclass(frozen=True)
class EveRecord:
    basis: Basis
    outcome: Union[int, Sign]


def success_stats(successes: int, trials: int, **extra) -> SuccessStats:
    """Rate with a normal-approximation 95% half width"""
    rate = successes / trials
    halfwidth = Z95 * math.sqrt(rate * (1 - rate) / trials)
    return SuccessStats(trials, successes, rate, halfwidth, **extra)


def eve_act(
    decoy: DecoyState,
    eve: EveModel,
    rng: np.random.Generator,
    label: QubitLabel = QubitLabel("B1", 1),
) -> Tuple[StateVector, Optional[EveRecord]]:
    """What reaches the agent after Eve handles one decoy photon"""
    decoy = DecoyState(decoy)
    eve = EveModel(eve)
    photon = decoy.ket(label)
    if eve is EveModel.NONE:
        return photon, None
    if eve is EveModel.INTERCEPT_RESEND_Z:
        basis = Basis.Z
    else:
        basis = Basis.Z if rng.integers(2) == 0 else Basis.X
    outcome, _ = measure_basis(photon, label, basis, float(rng.random()))
    if basis is Basis.Z:
        resent = basis_state((label,), str(outcome))
    else:
        resent = x_state(label, outcome)
    return resent, EveRecord(basis, outcome)


def _ordered_map(func: Callable, jobs: List, workers: int) -> List:
    if workers <= 1:
        return [func(job) for job in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, jobs, chunksize=max(1, len(jobs) // (4 * workers))))


def _missing_controller_trial(args) -> bool:
    config, index, missing, tolerance = args
    rng = derive_rng(config.seed, index)
    secret = random_pure_state(secret_labels(config.m), rng)
    transcript = run_protocol(config, secret, rng, withheld=missing)
    return transcript.succeeded(tolerance)


def missing_controller_experiment(
    m: int,
    missing: Union[Party, Sequence[Party]],
    trials: int,
    rng: np.random.Generator,
    receiver: Party = Party.CHARLIE,
    workers: int = 1,
) -> SuccessStats:
    """Receiver success rate when some controllers keep their parities secret

    The receiver learns V_i from Alice, so it always picks from the right
    correction group and only the product of the missing signs is guessed.
    An empty `missing` is the cooperative control arm.
    """
    if trials < 1:
        raise ProtocolError(f"trials must be at least 1, got {trials}")
    if isinstance(missing, (Party, str)):
        missing = (missing,)
    missing = tuple(Party(p) for p in missing)
    controllers = controllers_for(receiver)
    for party in missing:
        if party not in controllers:
            raise ProtocolError(
                f"{party.value} is not a controller when {Party(receiver).value} receives"
            )
    config = ProtocolConfig(
        m=m,
        receiver=receiver,
        seed=int(rng.integers(2 ** 63)),
        decoys_per_sequence=0,
    ).validate()
    jobs = [(config, t, missing, settings.fidelity_tolerance) for t in range(trials)]
    successes = sum(_ordered_map(_missing_controller_trial, jobs, workers))
    note = ""
    if len(missing) > 1:
        note = "several missing controllers: extrapolated, independent guessing"
    logger.info(
        "missing-controller m=%d missing=%s successes=%d/%d",
        m,
        ",".join(p.value for p in missing) or "-",
        successes,
        trials,
    )
    return success_stats(successes, trials, m=m, missing=missing, note=note)


def intercept_resend_experiment(
    n_decoys: int,
    eve: EveModel,
    trials: int,
    rng: np.random.Generator,
    threshold: int = 0,
) -> DetectionStats:
    """Pooled per-decoy mismatch rate over `trials` decoy checks"""
    if n_decoys < 1 or trials < 1:
        raise ProtocolError("n_decoys and trials must both be at least 1")
    eve = EveModel(eve)
    mismatches = 0
    aborts = 0
    for _ in range(trials):
        report = run_decoy_check(n_decoys, eve, rng, threshold=threshold)
        mismatches += report.mismatches
        aborts += not report.accepted
    decoys = n_decoys * trials
    return DetectionStats(
        decoys=decoys,
        mismatches=mismatches,
        per_decoy_rate=mismatches / decoys,
        eve=eve,
        trials=trials,
        aborts=aborts,
    )


def _alice_outcome_trial(args) -> int:
    seed, index = args
    rng = derive_rng(seed, index)
    config = ProtocolConfig(m=1, seed=seed, decoys_per_sequence=0)
    channel, _ = setup_channel(config, rng)
    secret = random_pure_state(secret_labels(1), rng)
    outcomes, _, _ = alice_measure(attach_secret(channel, secret), 1, rng)
    return outcomes[0].index


def outcome_uniformity(
    trials: int, rng: np.random.Generator, workers: int = 1
) -> UniformityStats:
    """Histogram of Alice's GHZ outcome with a chi-square test against 1/8"""
    if trials < 1:
        raise ProtocolError(f"trials must be at least 1, got {trials}")
    seed = int(rng.integers(2 ** 63))
    indices = _ordered_map(_alice_outcome_trial, [(seed, t) for t in range(trials)], workers)
    counts = np.bincount(indices, minlength=8)
    chi2, p_value = stats.chisquare(counts)
    return UniformityStats(trials, tuple(int(c) for c in counts), float(chi2), float(p_value))


def register_tools(app):
    """Register all security-experiment tools with the MCP server app"""

    @app.tool()
    async def missing_controller_security(
        m: int = 1,
        missing: str = "bob1",
        trials: int = 1000,
        seed: Optional[int] = None,
        receiver: str = "charlie",
    ) -> str:
        """Estimate how often the receiver reconstructs the secret without some controllers

        Args:
            m: Number of shared qubits
            missing: Comma-separated controllers that withhold their parities (empty for none)
            trials: Number of protocol runs
            seed: Random seed (defaults to the configured seed)
            receiver: Agent that reconstructs the state
        """
        try:
            parties = [Party(p.strip().lower()) for p in missing.split(",") if p.strip()]
            rng = derive_rng(settings.seed if seed is None else seed)
            result = missing_controller_experiment(
                m, parties, trials, rng, Party(receiver.lower()), workers=settings.workers
            )
            return schema.success_doc(result).model_dump_json(indent=2)
        except Exception as e:
            return f"Error running missing-controller experiment: {str(e)}"

    @app.tool()
    async def decoy_detection(
        decoys: int = 100,
        trials: int = 100,
        eve: str = "intercept-resend-random",
        seed: Optional[int] = None,
    ) -> str:
        """Measure the decoy mismatch rate caused by an eavesdropper

        Args:
            decoys: Decoy photons per check
            trials: Number of decoy checks to pool
            eve: none, intercept-resend-random or intercept-resend-z
            seed: Random seed (defaults to the configured seed)
        """
        try:
            rng = derive_rng(settings.seed if seed is None else seed)
            result = intercept_resend_experiment(
                decoys, EveModel(eve), trials, rng, threshold=settings.decoy_threshold
            )
            return schema.detection_doc(result).model_dump_json(indent=2)
        except Exception as e:
            return f"Error running decoy experiment: {str(e)}"

    @app.tool()
    async def outcome_histogram(trials: int = 8000, seed: Optional[int] = None) -> str:
        """Histogram of Alice's GHZ outcomes for one-qubit secrets, with a chi-square test

        Args:
            trials: Number of GHZ measurements
            seed: Random seed (defaults to the configured seed)
        """
        try:
            rng = derive_rng(settings.seed if seed is None else seed)
            result = outcome_uniformity(trials, rng, workers=settings.workers)
            return schema.uniformity_doc(result).model_dump_json(indent=2)
        except Exception as e:
            return f"Error computing outcome histogram: {str(e)}"

    return app
