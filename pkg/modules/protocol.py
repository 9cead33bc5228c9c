"""
Five-party quantum state sharing protocol for QSTS MCP Server

Alice shares 2m GHZ states |Psi_0> with her four agents (A1_i B1_i B2_i
and A2_i B3_i C_i), checks both transmitted sequences with decoy photons,
measures each (x_i, A1_i, A2_i) in the GHZ basis and publishes two bits
per qubit.  The three controllers measure in the X basis and publish one
parity bit per qubit; the receiver applies the Pauli correction selected
by (V_i, P_i).
"""
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from modules import schema
from modules.errors import ChannelAbort, ProtocolError, StateError
from modules.ghz import (
    SIDE_A1,
    SIDE_A2,
    GhzOutcome,
    force_ghz,
    ghz_state,
    measure_ghz,
    receiver_value,
)
from modules.qstate import (
    Basis,
    PauliOp,
    QubitLabel,
    Sign,
    StateVector,
    apply_1q,
    basis_family,
    basis_state,
    fidelity,
    from_amplitudes,
    labels_for,
    measure_basis,
    probabilities,
    project_onto,
    random_pure_state,
    reduced_state,
    sign_product,
    tensor,
    tensor_all,
    x_state,
)
from modules.settings import get_settings

logger = logging.getLogger(__name__)

# The settings will be set by the main file
settings = get_settings()


def configure(config):
    """Configure the module with the simulator settings"""
    global settings
    settings = config


class Party(str, Enum):
    ALICE = "alice"
    BOB1 = "bob1"
    BOB2 = "bob2"
    BOB3 = "bob3"
    CHARLIE = "charlie"


AGENTS = (Party.BOB1, Party.BOB2, Party.BOB3, Party.CHARLIE)
ROLE_OF = {Party.BOB1: "B1", Party.BOB2: "B2", Party.BOB3: "B3", Party.CHARLIE: "C"}
SIDE_OF = {
    Party.BOB1: SIDE_A1,
    Party.BOB2: SIDE_A1,
    Party.BOB3: SIDE_A2,
    Party.CHARLIE: SIDE_A2,
}


class EveModel(str, Enum):
    NONE = "none"
    INTERCEPT_RESEND_RANDOM_BASIS = "intercept-resend-random"
    INTERCEPT_RESEND_Z = "intercept-resend-z"


class DecoyState(str, Enum):
    ZERO = "0"
    ONE = "1"
    PLUS = "+x"
    MINUS = "-x"

    @property
    def basis(self) -> Basis:
        """Preparation basis"""
        return Basis.Z if self in (DecoyState.ZERO, DecoyState.ONE) else Basis.X

    @property
    def outcome(self) -> Union[int, Sign]:
        """The outcome a measurement in the preparation basis must give"""
        return {
            DecoyState.ZERO: 0,
            DecoyState.ONE: 1,
            DecoyState.PLUS: Sign.PLUS,
            DecoyState.MINUS: Sign.MINUS,
        }[self]

    def ket(self, label: QubitLabel) -> StateVector:
        """The decoy photon as a one-qubit state on label"""
        if self.basis is Basis.Z:
            return basis_state((label,), self.value)
        return x_state(label, self.outcome)


class Verdict(str, Enum):
    ACCEPT = "accept"
    ABORT = "abort"


@dataclass(frozen=True)
class DecoyReport:
    sequence: int
    positions: Tuple[int, ...]
    prepared: Tuple[DecoyState, ...]
    measured_ok: Tuple[bool, ...]
    mismatches: int
    verdict: Verdict
    threshold: int = 0

    @property
    def accepted(self) -> bool:
        """True when the sequence passed its decoy check"""
        return self.verdict is Verdict.ACCEPT

    @property
    def decoys(self) -> int:
        """Number of decoy photons in the sequence"""
        return len(self.prepared)


@dataclass(frozen=True)
class ProtocolConfig:
    m: int
    receiver: Party = Party.CHARLIE
    seed: int = 0
    decoys_per_sequence: int = 16
    eve: EveModel = EveModel.NONE
    decoy_threshold: int = 0

    def __post_init__(self):
        try:
            object.__setattr__(self, "receiver", Party(self.receiver))
            object.__setattr__(self, "eve", EveModel(self.eve))
        except ValueError as e:
            raise ProtocolError(str(e)) from None

    def validate(self, max_qubits: Optional[int] = None) -> "ProtocolConfig":
        """Check m, the receiver and the decoy counts against the register cap"""
        cap = max_qubits if max_qubits is not None else settings.max_qubits
        if self.m < 1:
            raise ProtocolError(f"m must be at least 1, got {self.m}")
        if 7 * self.m > cap:
            raise ProtocolError(
                f"m={self.m} needs {7 * self.m} qubits, register cap is {cap}"
            )
        if Party(self.receiver) not in AGENTS:
            raise ProtocolError(f"receiver must be one of the agents, got {self.receiver}")
        if self.decoys_per_sequence < 0 or self.decoy_threshold < 0:
            raise ProtocolError("decoy counts cannot be negative")
        return self


@dataclass(frozen=True)
class AliceOutcome:
    value: int
    parity: Sign
    bits = 2
    kind = "alice_outcome"


@dataclass(frozen=True)
class ControllerParity:
    sign: Sign
    bits = 1
    kind = "controller_parity"


@dataclass(frozen=True)
class ClassicalMessage:
    sender: Party
    qubit_index: int
    payload: Union[AliceOutcome, ControllerParity]

    @property
    def bits(self) -> int:
        """Classical bits the message costs"""
        return self.payload.bits


@dataclass(frozen=True)
class RunTranscript:
    config: ProtocolConfig
    decoy_reports: Tuple[DecoyReport, ...]
    alice_outcomes: Tuple[GhzOutcome, ...] = ()
    controller_signs: Dict[Tuple[Party, int], Sign] = field(default_factory=dict)
    corrections: Tuple[PauliOp, ...] = ()
    fidelity: Optional[float] = None
    classical_bits_sent: int = 0
    qubits_transmitted: int = 0
    messages: Tuple[ClassicalMessage, ...] = ()
    channel_particles_sent: int = 0
    withheld: Tuple[Party, ...] = ()

    @property
    def completed(self) -> bool:
        """False when the decoy check aborted the round"""
        return self.fidelity is not None

    @property
    def decoys_transmitted(self) -> int:
        """Decoy photons sent over both sequences"""
        return sum(r.decoys for r in self.decoy_reports)

    def succeeded(self, tolerance: float = 1e-9) -> bool:
        """Completed with fidelity within tolerance of 1"""
        return self.completed and self.fidelity >= 1 - tolerance


@dataclass(frozen=True)
class BranchResult:
    alice_index: int
    controller_signs: Tuple[Sign, ...]
    probability: float
    correction: PauliOp
    fidelity: float


def derive_rng(seed: int, index: Optional[int] = None) -> np.random.Generator:
    """Stream for run `index` of a batch seeded with `seed`"""
    entropy = [seed % 2 ** 64] if index is None else [seed % 2 ** 64, index]
    return np.random.default_rng(entropy)


def agent_labels(party: Party, m: int) -> Tuple[QubitLabel, ...]:
    """Labels of the m channel particles an agent holds"""
    if party not in ROLE_OF:
        raise ProtocolError(f"{party} holds no channel particles")
    return labels_for(ROLE_OF[party], m)


def secret_labels(m: int) -> Tuple[QubitLabel, ...]:
    """Labels x_1 .. x_m of the secret"""
    return labels_for("x", m)


def controllers_for(receiver: Party) -> Tuple[Party, ...]:
    """The three agents other than the receiver"""
    receiver = Party(receiver)
    if receiver not in AGENTS:
        raise ProtocolError(f"{receiver} cannot act as receiver")
    return tuple(p for p in AGENTS if p is not receiver)


def alice_triple(i: int) -> Tuple[QubitLabel, QubitLabel, QubitLabel]:
    """Alice's (x_i, A1_i, A2_i) measured together"""
    return QubitLabel("x", i), QubitLabel("A1", i), QubitLabel("A2", i)


def run_decoy_check(
    n: int,
    eve: EveModel,
    rng: np.random.Generator,
    threshold: int = 0,
    sequence: int = 1,
    sequence_length: int = 0,
) -> DecoyReport:
    """Insert n decoys into a sequence, let Eve act, and compare after disclosure

    Decoys are simulated as standalone qubits; positions are bookkeeping
    within a sequence of `sequence_length` channel particles.
    """
    from modules.adversary import eve_act

    if n < 0:
        raise ProtocolError(f"decoy count cannot be negative, got {n}")
    eve = EveModel(eve)
    positions = tuple(
        int(p) for p in np.sort(rng.choice(sequence_length + n, size=n, replace=False))
    ) if n else ()
    label = QubitLabel("B1" if sequence == 1 else "B3", 1)
    prepared: List[DecoyState] = []
    measured_ok: List[bool] = []
    for _ in range(n):
        decoy = list(DecoyState)[int(rng.integers(4))]
        received, _record = eve_act(decoy, eve, rng, label=label)
        # bases are disclosed after transmission; the agent measures in Alice's basis
        outcome, _ = measure_basis(received, label, decoy.basis, float(rng.random()))
        prepared.append(decoy)
        measured_ok.append(outcome == decoy.outcome)
    mismatches = measured_ok.count(False)
    verdict = Verdict.ABORT if mismatches > threshold else Verdict.ACCEPT
    return DecoyReport(
        sequence=sequence,
        positions=positions,
        prepared=tuple(prepared),
        measured_ok=tuple(measured_ok),
        mismatches=mismatches,
        verdict=verdict,
        threshold=threshold,
    )


def setup_channel(
    config: ProtocolConfig, rng: np.random.Generator
) -> Tuple[StateVector, Tuple[DecoyReport, DecoyReport]]:
    """Share 2m |Psi_0> states with the agents, each sequence checked by decoys"""
    config.validate()
    m = config.m
    reports = tuple(
        run_decoy_check(
            config.decoys_per_sequence,
            config.eve,
            rng,
            threshold=config.decoy_threshold,
            sequence=sequence,
            sequence_length=2 * m,
        )
        for sequence in (1, 2)
    )
    for report in reports:
        logger.info(
            "decoy sequence=%d mismatches=%d verdict=%s",
            report.sequence,
            report.mismatches,
            report.verdict.value,
        )
    if not all(r.accepted for r in reports):
        logger.warning("channel aborted eve=%s m=%d", config.eve.value, m)
        raise ChannelAbort(reports)

    triples = []
    for i in range(1, m + 1):
        triples.append(
            ghz_state(0, (QubitLabel("A1", i), QubitLabel("B1", i), QubitLabel("B2", i)))
        )
        triples.append(
            ghz_state(0, (QubitLabel("A2", i), QubitLabel("B3", i), QubitLabel("C", i)))
        )
    return tensor_all(triples), reports


def attach_secret(channel: StateVector, secret: StateVector) -> StateVector:
    """The secret prepended to the shared channel register"""
    m = channel.n // 6
    if channel.n != 6 * m:
        raise StateError(f"channel of {channel.n} qubits is not 2m GHZ triples")
    if tuple(secret.labels) != secret_labels(m):
        raise StateError(
            f"secret must live on {[str(l) for l in secret_labels(m)]}, "
            f"got {[str(l) for l in secret.labels]}"
        )
    return tensor(secret, channel)


def alice_measure(
    joint: StateVector,
    m: int,
    rng: np.random.Generator,
    receiver: Party = Party.CHARLIE,
    discard: bool = False,
) -> Tuple[Tuple[GhzOutcome, ...], StateVector, Tuple[ClassicalMessage, ...]]:
    """Alice's m GHZ measurements; each message carries two bits

    The announced value bit is the one matching the receiver's GHZ triple,
    which is the published V for Bob3 and Charlie.  With `discard` her
    measured particles leave the register.
    """
    side = SIDE_OF[Party(receiver)]
    outcomes = []
    messages = []
    state = joint
    for i in range(1, m + 1):
        outcome, state = measure_ghz(
            state, alice_triple(i), float(rng.random()), discard=discard
        )
        outcomes.append(outcome)
        payload = AliceOutcome(receiver_value(outcome.index, side), outcome.parity)
        messages.append(ClassicalMessage(Party.ALICE, i, payload))
    return tuple(outcomes), state, tuple(messages)


def controller_measure(
    joint: StateVector,
    controller: Party,
    m: int,
    rng: np.random.Generator,
    receiver: Party = Party.CHARLIE,
    discard: bool = False,
) -> Tuple[Tuple[Sign, ...], Tuple[ClassicalMessage, ...], StateVector]:
    """X-basis measurement of each of the controller's m particles"""
    controller = Party(controller)
    if controller not in controllers_for(receiver):
        raise ProtocolError(f"{controller.value} is not a controller when {Party(receiver).value} receives")
    signs = []
    messages = []
    state = joint
    for label in agent_labels(controller, m):
        sign, state = measure_basis(
            state, label, Basis.X, float(rng.random()), discard=discard
        )
        signs.append(sign)
        messages.append(ClassicalMessage(controller, label.index, ControllerParity(sign)))
    return tuple(signs), tuple(messages), state


CORRECTIONS = {
    (0, Sign.PLUS): PauliOp.I,
    (0, Sign.MINUS): PauliOp.SIGMA_Z,
    (1, Sign.PLUS): PauliOp.SIGMA_X,
    (1, Sign.MINUS): PauliOp.I_SIGMA_Y,
}


def correction(value: int, p_total: Sign) -> PauliOp:
    """Receiver correction for value bit V and overall parity"""
    return CORRECTIONS[(int(value), Sign(p_total))]


def p_total(alice_parity: Sign, controller_signs: Sequence[Sign]) -> Sign:
    """Alice's parity times the three controller signs"""
    if len(controller_signs) != 3:
        raise ProtocolError(f"expected three controller signs, got {len(controller_signs)}")
    return sign_product([alice_parity, *controller_signs])


def receiver_register(state: StateVector, receiver: Party, m: int) -> StateVector:
    """The receiver's m particles, renamed onto the secret's labels"""
    received = reduced_state(state, agent_labels(receiver, m))
    return received.relabel(secret_labels(m))


def run_protocol(
    config: ProtocolConfig,
    secret: StateVector,
    rng: np.random.Generator,
    withheld: Sequence[Party] = (),
) -> RunTranscript:
    """One full sharing round

    Controllers listed in `withheld` still measure but publish nothing; the
    receiver substitutes a uniformly random sign for each missing parity.
    """
    config.validate()
    receiver = Party(config.receiver)
    controllers = controllers_for(receiver)
    withheld = tuple(Party(p) for p in withheld)
    for party in withheld:
        if party not in controllers:
            raise ProtocolError(f"{party.value} is not a controller and cannot withhold")
    if secret.n != config.m:
        raise ProtocolError(f"secret has {secret.n} qubits, config says m={config.m}")

    m = config.m
    logger.info("run start m=%d receiver=%s seed=%d", m, receiver.value, config.seed)
    try:
        channel, reports = setup_channel(config, rng)
    except ChannelAbort as abort:
        return RunTranscript(
            config=config,
            decoy_reports=abort.reports,
            qubits_transmitted=sum(r.decoys for r in abort.reports),
        )

    joint = attach_secret(channel, secret)
    outcomes, state, messages = alice_measure(
        joint, m, rng, receiver=receiver, discard=True
    )
    signs: Dict[Tuple[Party, int], Sign] = {}
    published: Dict[Tuple[Party, int], Sign] = {}
    messages = list(messages)
    for controller in controllers:
        controller_signs, controller_messages, state = controller_measure(
            state, controller, m, rng, receiver=receiver, discard=True
        )
        for i, sign in enumerate(controller_signs, start=1):
            signs[(controller, i)] = sign
        if controller not in withheld:
            messages.extend(controller_messages)
            for message in controller_messages:
                published[(controller, message.qubit_index)] = message.payload.sign

    corrections = []
    for i in range(1, m + 1):
        alice_payload = messages[i - 1].payload
        heard = [
            published.get((c, i)) or Sign(1 - 2 * int(rng.integers(2)))
            for c in controllers
        ]
        op = correction(alice_payload.value, p_total(alice_payload.parity, heard))
        state = apply_1q(state, agent_labels(receiver, m)[i - 1], op)
        corrections.append(op)

    received = receiver_register(state, receiver, m)
    final_fidelity = fidelity(secret, received)
    decoys = sum(r.decoys for r in reports)
    transcript = RunTranscript(
        config=config,
        decoy_reports=reports,
        alice_outcomes=outcomes,
        controller_signs=signs,
        corrections=tuple(corrections),
        fidelity=final_fidelity,
        classical_bits_sent=sum(msg.bits for msg in messages),
        qubits_transmitted=4 * m + decoys,
        messages=tuple(messages),
        channel_particles_sent=4 * m,
        withheld=withheld,
    )
    logger.info("run done m=%d fidelity=%.12f", m, final_fidelity)
    return transcript


def force_branch(
    secret: StateVector,
    alice_index: int,
    controller_signs: Sequence[Sign],
    receiver: Party = Party.CHARLIE,
) -> BranchResult:
    """Follow one m=1 branch by projection instead of sampling"""
    receiver = Party(receiver)
    if secret.n != 1:
        raise ProtocolError("forced branches are defined for a single shared qubit")
    if len(controller_signs) != 3:
        raise ProtocolError("one sign per controller is required")
    config = ProtocolConfig(m=1, receiver=receiver, decoys_per_sequence=0)
    channel, _ = setup_channel(config, np.random.default_rng(0))
    state = attach_secret(channel, secret)
    outcome, probability, state = force_ghz(state, alice_triple(1), alice_index)
    for controller, sign in zip(controllers_for(receiver), controller_signs):
        label = agent_labels(controller, 1)[0]
        p, state = project_onto(
            state, (label,), basis_family(label, Basis.X), 0 if sign is Sign.PLUS else 1
        )
        probability *= p
    value = receiver_value(outcome.index, SIDE_OF[receiver])
    op = correction(value, p_total(outcome.parity, controller_signs))
    state = apply_1q(state, agent_labels(receiver, 1)[0], op)
    received = receiver_register(state, receiver, 1)
    return BranchResult(
        alice_index=alice_index,
        controller_signs=tuple(controller_signs),
        probability=probability,
        correction=op,
        fidelity=fidelity(secret, received),
    )


def all_branches(secret: StateVector, receiver: Party = Party.CHARLIE) -> List[BranchResult]:
    """Every (Alice outcome, controller signs) branch for a one-qubit secret"""
    results = []
    for k in range(8):
        for code in range(8):
            signs = tuple(Sign.MINUS if code >> (2 - j) & 1 else Sign.PLUS for j in range(3))
            results.append(force_branch(secret, k, signs, receiver))
    return results


def receiver_marginals(state: StateVector, receiver: Party, i: int = 1) -> np.ndarray:
    """Z-basis distribution of the receiver's i-th particle, before corrections"""
    return probabilities(state, (agent_labels(Party(receiver), i)[i - 1],))


def parse_secret(
    text: str,
    m: int,
    rng: np.random.Generator,
    phases: Optional[str] = None,
    tolerance: float = 1e-6,
) -> StateVector:
    """'random' or a comma-separated list of 2^m real amplitudes

    Optional phases (radians) multiply the amplitudes position by position.
    """
    labels = secret_labels(m)
    if text.strip().lower() == "random":
        return random_pure_state(labels, rng)
    try:
        magnitudes = [float(a) for a in text.split(",")]
        angles = [float(p) for p in phases.split(",")] if phases else [0.0] * len(magnitudes)
    except ValueError:
        raise ProtocolError(f"cannot parse secret amplitudes {text!r}") from None
    if len(magnitudes) != 2 ** m or len(angles) != len(magnitudes):
        raise ProtocolError(f"an {m}-qubit secret needs {2 ** m} amplitudes and phases")
    norm = math.sqrt(sum(a * a for a in magnitudes))
    if abs(norm - 1) > tolerance:
        raise ProtocolError(f"secret amplitudes have norm {norm:.9f}, expected 1")
    amps = [a * complex(math.cos(p), math.sin(p)) for a, p in zip(magnitudes, angles)]
    return from_amplitudes(labels, amps)


def _batch_run(args) -> RunTranscript:
    config, index, rotate = args
    rng = derive_rng(config.seed, index)
    if rotate:
        config = replace(config, receiver=AGENTS[index % len(AGENTS)])
    secret = random_pure_state(secret_labels(config.m), rng)
    return run_protocol(config, secret, rng)


def run_batch(
    config: ProtocolConfig,
    runs: int,
    workers: int = 1,
    rotate_receiver: bool = False,
) -> List[RunTranscript]:
    """Seeded runs with Haar-random secrets, in run order whatever the worker count"""
    if runs < 1:
        raise ProtocolError(f"runs must be at least 1, got {runs}")
    jobs = [(config, index, rotate_receiver) for index in range(runs)]
    if workers <= 1:
        return [_batch_run(job) for job in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_batch_run, jobs, chunksize=max(1, runs // (4 * workers))))


@dataclass(frozen=True)
class BatchStats:
    m: int
    runs: int
    rotate_receiver: bool
    completed: int
    successes: int
    min_fidelity: Optional[float]
    fidelity_tolerance: float


def batch_summary(
    transcripts: Sequence[RunTranscript],
    tolerance: float = 1e-9,
    rotate_receiver: bool = False,
) -> BatchStats:
    """Completed runs, reconstructions within tolerance and the worst fidelity"""
    if not transcripts:
        raise ProtocolError("a batch needs at least one run")
    fidelities = [t.fidelity for t in transcripts if t.completed]
    return BatchStats(
        m=transcripts[0].config.m,
        runs=len(transcripts),
        rotate_receiver=rotate_receiver,
        completed=len(fidelities),
        successes=sum(t.succeeded(tolerance) for t in transcripts),
        min_fidelity=min(fidelities) if fidelities else None,
        fidelity_tolerance=tolerance,
    )


def register_tools(app):
    """Register all protocol-run tools with the MCP server app"""

    @app.tool()
    async def share_state(
        m: int = 1,
        receiver: str = "charlie",
        seed: Optional[int] = None,
        secret: str = "random",
        phases: Optional[str] = None,
        eve: str = "none",
        decoys: Optional[int] = None,
    ) -> str:
        """Run one five-party quantum state sharing round and return its transcript

        Args:
            m: Number of qubits in the shared secret (1-3 at the default register cap)
            receiver: Agent that reconstructs the state: bob1, bob2, bob3 or charlie
            seed: Random seed (defaults to the configured seed)
            secret: "random" for a Haar-random state or comma-separated real amplitudes
            phases: Optional comma-separated phases in radians, one per amplitude
            eve: Eavesdropper on the decoy photons: none, intercept-resend-random, intercept-resend-z
            decoys: Decoy photons per transmitted sequence
        """
        try:
            config = ProtocolConfig(
                m=m,
                receiver=Party(receiver.lower()),
                seed=settings.seed if seed is None else seed,
                decoys_per_sequence=settings.decoys_per_sequence if decoys is None else decoys,
                eve=EveModel(eve),
                decoy_threshold=settings.decoy_threshold,
            ).validate()
            rng = derive_rng(config.seed)
            state = parse_secret(secret, m, rng, phases)
            transcript = run_protocol(config, state, rng)
            return schema.transcript_doc(transcript).model_dump_json(indent=2)
        except Exception as e:
            return f"Error running protocol: {str(e)}"

    @app.tool()
    async def force_protocol_branch(
        alice_index: int,
        controller_signs: str,
        alpha: float = 0.6,
        beta: float = 0.8,
        receiver: str = "charlie",
    ) -> str:
        """Follow one single-qubit branch by projection and report its fidelity

        Args:
            alice_index: Alice's GHZ outcome index, 0-7
            controller_signs: Three comma-separated signs, e.g. "+,-,+"
            alpha: Amplitude of |0> in the secret
            beta: Amplitude of |1> in the secret
            receiver: Agent that reconstructs the state
        """
        try:
            signs = [Sign.parse(s.strip()) for s in controller_signs.split(",")]
            secret = from_amplitudes(secret_labels(1), [alpha, beta])
            result = force_branch(secret, alice_index, signs, Party(receiver.lower()))
            return schema.branch_doc(result).model_dump_json(indent=2)
        except Exception as e:
            return f"Error forcing branch: {str(e)}"

    @app.tool()
    async def batch_runs(
        m: int = 1,
        runs: int = 100,
        receiver: str = "charlie",
        rotate_receiver: bool = False,
        seed: Optional[int] = None,
    ) -> str:
        """Run many seeded sharing rounds with random secrets and summarize the fidelities

        Args:
            m: Number of qubits in each shared secret
            runs: Number of rounds
            receiver: Agent that reconstructs the state when not rotating
            rotate_receiver: Cycle the receiver through bob1, bob2, bob3 and charlie
            seed: Random seed (defaults to the configured seed)
        """
        try:
            config = ProtocolConfig(
                m=m,
                receiver=Party(receiver.lower()),
                seed=settings.seed if seed is None else seed,
                decoys_per_sequence=settings.decoys_per_sequence,
                decoy_threshold=settings.decoy_threshold,
            ).validate()
            transcripts = run_batch(
                config, runs, workers=settings.workers, rotate_receiver=rotate_receiver
            )
            stats = batch_summary(transcripts, settings.fidelity_tolerance, rotate_receiver)
            return schema.batch_doc(stats).model_dump_json(indent=2)
        except Exception as e:
            return f"Error running batch: {str(e)}"

    return app
