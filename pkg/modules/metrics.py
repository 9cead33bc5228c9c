"""
Resource accounting and efficiency for QSTS MCP Server

eta_q = q_u / q_t and eta_t = q_u / (q_t + b_t), both kept as exact
fractions.  Decoy photons are left out of q_t and reported on their own.
"""
from dataclasses import dataclass
from fractions import Fraction

from modules import schema
from modules.errors import AuditError, ProtocolError
from modules.protocol import AliceOutcome, ControllerParity, Party, RunTranscript

# Basis and prepared state are disclosed for every decoy
DECOY_DISCLOSURE_BITS = 2


@dataclass(frozen=True)
class EfficiencyReport:
    m: int
    q_u: int
    q_t: int
    b_t: int
    eta_q: Fraction
    eta_t: Fraction
    decoys_transmitted: int = 0
    decoy_bits: int = 0


def efficiency(m: int) -> EfficiencyReport:
    """q_u = q_t = 4m particles and b_t = 2m (Alice) + 3m (controllers) bits"""
    if m < 1:
        raise ProtocolError(f"m must be at least 1, got {m}")
    q_u = q_t = 4 * m
    b_t = 2 * m + 3 * m
    return EfficiencyReport(
        m=m,
        q_u=q_u,
        q_t=q_t,
        b_t=b_t,
        eta_q=Fraction(q_u, q_t),
        eta_t=Fraction(q_u, q_t + b_t),
    )


def transcript_audit(transcript: RunTranscript) -> EfficiencyReport:
    """Recount bits and particles from a completed transcript"""
    if not transcript.completed:
        raise AuditError("cannot audit an aborted run")
    m = transcript.config.m
    b_t = 0
    for message in transcript.messages:
        if message.sender is Party.ALICE and not isinstance(message.payload, AliceOutcome):
            raise AuditError(f"Alice sent a non-outcome message for qubit {message.qubit_index}")
        if message.sender is not Party.ALICE and not isinstance(message.payload, ControllerParity):
            raise AuditError(f"{message.sender.value} sent a non-parity message")
        b_t += message.bits
    q_t = transcript.channel_particles_sent
    expected = efficiency(m)
    if (q_t, b_t) != (expected.q_t, expected.b_t):
        raise AuditError(
            f"run sent {q_t} particles and {b_t} bits, formulas give "
            f"{expected.q_t} and {expected.b_t}"
        )
    if b_t != transcript.classical_bits_sent:
        raise AuditError(
            f"transcript claims {transcript.classical_bits_sent} bits, messages carry {b_t}"
        )
    decoys = transcript.decoys_transmitted
    if transcript.qubits_transmitted != q_t + decoys:
        raise AuditError(
            f"transcript claims {transcript.qubits_transmitted} qubits, "
            f"expected {q_t} channel particles plus {decoys} decoys"
        )
    return EfficiencyReport(
        m=m,
        q_u=expected.q_u,
        q_t=q_t,
        b_t=b_t,
        eta_q=Fraction(expected.q_u, q_t),
        eta_t=Fraction(expected.q_u, q_t + b_t),
        decoys_transmitted=decoys,
        decoy_bits=DECOY_DISCLOSURE_BITS * decoys,
    )


def register_tools(app):
    """Register all efficiency tools with the MCP server app"""

    @app.tool()
    async def efficiency_report(m: int = 1) -> str:
        """Qubit and total efficiency of sharing an m-qubit state

        Args:
            m: Number of qubits in the shared secret
        """
        try:
            return schema.efficiency_doc(efficiency(m)).model_dump_json(indent=2)
        except Exception as e:
            return f"Error computing efficiency: {str(e)}"

    return app
