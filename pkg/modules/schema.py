"""
Serialized documents emitted by the CLI and the MCP tools

Field names and order are the compatibility contract; bump
SCHEMA_VERSION when either changes.  Signs serialize as "+" / "-",
corrections as "I" / "Z" / "X" / "iY".
"""
import csv
import io
from fractions import Fraction
from typing import Dict, List, Literal, Optional, Sequence

from pydantic import BaseModel, Field

SCHEMA_VERSION = "1.0"
FIDELITY_DIGITS = 12


class RationalDoc(BaseModel):
    num: int
    den: int
    decimal: float

    @classmethod
    def of(cls, value: Fraction) -> "RationalDoc":
        """Exact fraction plus its decimal value"""
        return cls(num=value.numerator, den=value.denominator, decimal=float(value))


class ConfigDoc(BaseModel):
    m: int
    receiver: str
    seed: int
    decoys_per_sequence: int
    eve: str
    decoy_threshold: int


class DecoyReportDoc(BaseModel):
    sequence: int
    positions: List[int]
    prepared: List[str]
    measured_ok: List[bool]
    mismatches: int
    threshold: int
    verdict: str


class OutcomeDoc(BaseModel):
    qubit: int
    index: int
    V: int
    P: str


class MessageDoc(BaseModel):
    sender: str
    qubit: int
    bits: int
    value: Optional[int] = None
    sign: str


class TranscriptDoc(BaseModel):
    schema_version: str = SCHEMA_VERSION
    kind: Literal["transcript"] = "transcript"
    config: ConfigDoc
    completed: bool
    decoy_reports: List[DecoyReportDoc]
    alice_outcomes: List[OutcomeDoc] = Field(default_factory=list)
    controller_signs: Dict[str, List[str]] = Field(default_factory=dict)
    withheld: List[str] = Field(default_factory=list)
    corrections: List[str] = Field(default_factory=list)
    messages: List[MessageDoc] = Field(default_factory=list)
    fidelity: Optional[float] = None
    classical_bits_sent: int
    qubits_transmitted: int
    decoys_transmitted: int


class BranchDoc(BaseModel):
    schema_version: str = SCHEMA_VERSION
    kind: Literal["branch"] = "branch"
    alice_index: int
    controller_signs: List[str]
    probability: float
    correction: str
    fidelity: float


class OracleDoc(BaseModel):
    schema_version: str = SCHEMA_VERSION
    kind: Literal["oracle"] = "oracle"
    receiver: str
    alpha: List[float]
    beta: List[float]
    branches: List[BranchDoc]
    total_probability: float
    min_fidelity: float


class SuccessStatsDoc(BaseModel):
    schema_version: str = SCHEMA_VERSION
    kind: Literal["success_stats"] = "success_stats"
    m: int
    missing: List[str]
    trials: int
    successes: int
    rate: float
    ci95_halfwidth: float
    expected_rate: float
    note: str = ""


class DetectionStatsDoc(BaseModel):
    schema_version: str = SCHEMA_VERSION
    kind: Literal["detection_stats"] = "detection_stats"
    eve: str
    trials: int
    decoys: int
    mismatches: int
    per_decoy_rate: float
    aborts: int


class UniformityDoc(BaseModel):
    schema_version: str = SCHEMA_VERSION
    kind: Literal["outcome_uniformity"] = "outcome_uniformity"
    trials: int
    counts: List[int]
    chi2: float
    p_value: float


class BatchStatsDoc(BaseModel):
    schema_version: str = SCHEMA_VERSION
    kind: Literal["batch_stats"] = "batch_stats"
    m: int
    runs: int
    rotate_receiver: bool
    completed: int
    successes: int
    min_fidelity: Optional[float] = None
    fidelity_tolerance: float


class EfficiencyDoc(BaseModel):
    schema_version: str = SCHEMA_VERSION
    kind: Literal["efficiency"] = "efficiency"
    m: int
    q_u: int
    q_t: int
    b_t: int
    eta_q: RationalDoc
    eta_t: RationalDoc
    decoys_transmitted: int = 0
    decoy_bits: int = 0


def _round_fidelity(value: Optional[float]) -> Optional[float]:
    return None if value is None else round(value, FIDELITY_DIGITS)


def config_doc(config) -> ConfigDoc:
    """Serialize a ProtocolConfig"""
    return ConfigDoc(
        m=config.m,
        receiver=config.receiver.value,
        seed=config.seed,
        decoys_per_sequence=config.decoys_per_sequence,
        eve=config.eve.value,
        decoy_threshold=config.decoy_threshold,
    )


def decoy_doc(report) -> DecoyReportDoc:
    """Serialize one sequence's decoy report"""
    return DecoyReportDoc(
        sequence=report.sequence,
        positions=list(report.positions),
        prepared=[d.value for d in report.prepared],
        measured_ok=list(report.measured_ok),
        mismatches=report.mismatches,
        threshold=report.threshold,
        verdict=report.verdict.value,
    )


def _message_doc(message) -> MessageDoc:
    payload = message.payload
    if payload.kind == "alice_outcome":
        return MessageDoc(
            sender=message.sender.value,
            qubit=message.qubit_index,
            bits=message.bits,
            value=payload.value,
            sign=str(payload.parity),
        )
    if payload.kind == "controller_parity":
        return MessageDoc(
            sender=message.sender.value,
            qubit=message.qubit_index,
            bits=message.bits,
            sign=str(payload.sign),
        )
    raise ValueError(f"unknown message payload {payload.kind!r}")


def transcript_doc(transcript) -> TranscriptDoc:
    """Serialize a full run transcript"""
    signs: Dict[str, List[str]] = {}
    for (party, _), sign in sorted(
        transcript.controller_signs.items(), key=lambda item: (item[0][0].value, item[0][1])
    ):
        signs.setdefault(party.value, []).append(str(sign))
    return TranscriptDoc(
        config=config_doc(transcript.config),
        completed=transcript.completed,
        decoy_reports=[decoy_doc(r) for r in transcript.decoy_reports],
        alice_outcomes=[
            OutcomeDoc(qubit=i, index=o.index, V=o.value, P=str(o.parity))
            for i, o in enumerate(transcript.alice_outcomes, start=1)
        ],
        controller_signs=signs,
        withheld=[p.value for p in transcript.withheld],
        corrections=[op.value for op in transcript.corrections],
        messages=[_message_doc(msg) for msg in transcript.messages],
        fidelity=_round_fidelity(transcript.fidelity),
        classical_bits_sent=transcript.classical_bits_sent,
        qubits_transmitted=transcript.qubits_transmitted,
        decoys_transmitted=transcript.decoys_transmitted,
    )


def branch_doc(result) -> BranchDoc:
    """Serialize one forced branch"""
    return BranchDoc(
        alice_index=result.alice_index,
        controller_signs=[str(s) for s in result.controller_signs],
        probability=round(result.probability, FIDELITY_DIGITS),
        correction=result.correction.value,
        fidelity=_round_fidelity(result.fidelity),
    )


def oracle_doc(secret, receiver, results) -> OracleDoc:
    """Serialize the 64-branch check of one secret"""
    alpha, beta = secret.amps
    branches = [branch_doc(r) for r in results]
    return OracleDoc(
        receiver=receiver.value,
        alpha=[float(alpha.real), float(alpha.imag)],
        beta=[float(beta.real), float(beta.imag)],
        branches=branches,
        total_probability=round(sum(r.probability for r in results), FIDELITY_DIGITS),
        min_fidelity=min(b.fidelity for b in branches),
    )


def success_doc(result) -> SuccessStatsDoc:
    """Serialize a missing-controller experiment"""
    return SuccessStatsDoc(
        m=result.m,
        missing=[p.value for p in result.missing],
        trials=result.trials,
        successes=result.successes,
        rate=result.rate,
        ci95_halfwidth=result.ci95_halfwidth,
        expected_rate=2.0 ** -result.m if result.missing else 1.0,
        note=result.note,
    )


def detection_doc(result) -> DetectionStatsDoc:
    """Serialize an intercept-resend experiment"""
    return DetectionStatsDoc(
        eve=result.eve.value,
        trials=result.trials,
        decoys=result.decoys,
        mismatches=result.mismatches,
        per_decoy_rate=result.per_decoy_rate,
        aborts=result.aborts,
    )


def uniformity_doc(result) -> UniformityDoc:
    """Serialize an outcome histogram"""
    return UniformityDoc(
        trials=result.trials,
        counts=list(result.counts),
        chi2=result.chi2,
        p_value=result.p_value,
    )


def batch_doc(stats) -> BatchStatsDoc:
    """Serialize a batch summary"""
    return BatchStatsDoc(
        m=stats.m,
        runs=stats.runs,
        rotate_receiver=stats.rotate_receiver,
        completed=stats.completed,
        successes=stats.successes,
        min_fidelity=_round_fidelity(stats.min_fidelity),
        fidelity_tolerance=stats.fidelity_tolerance,
    )


def efficiency_doc(report) -> EfficiencyDoc:
    """Serialize an efficiency report"""
    return EfficiencyDoc(
        m=report.m,
        q_u=report.q_u,
        q_t=report.q_t,
        b_t=report.b_t,
        eta_q=RationalDoc.of(report.eta_q),
        eta_t=RationalDoc.of(report.eta_t),
        decoys_transmitted=report.decoys_transmitted,
        decoy_bits=report.decoy_bits,
    )


def stats_csv(docs: Sequence[BaseModel]) -> str:
    """Flat CSV of stats documents; list fields are joined with ';'"""
    rows = []
    for doc in docs:
        row = doc.model_dump()
        rows.append(
            {k: ";".join(str(v) for v in value) if isinstance(value, list) else value
             for k, value in row.items()}
        )
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=list(rows[0]), lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    return buffer.getvalue()
