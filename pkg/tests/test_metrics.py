"""
Tests for efficiency accounting and transcript audits
"""
from dataclasses import replace
from fractions import Fraction

import pytest

from modules.errors import AuditError, ProtocolError
from modules.metrics import efficiency, transcript_audit
from modules.protocol import (
    ClassicalMessage,
    ControllerParity,
    EveModel,
    Party,
    ProtocolConfig,
    derive_rng,
    run_protocol,
    secret_labels,
)
from modules.qstate import Sign, random_pure_state


def completed_run(m, decoys=0, withheld=()):
    config = ProtocolConfig(m=m, seed=40 + m, decoys_per_sequence=decoys)
    rng = derive_rng(config.seed)
    return run_protocol(config, random_pure_state(secret_labels(m), rng), rng, withheld=withheld)


def test_single_qubit_efficiency():
    report = efficiency(1)
    assert (report.q_u, report.q_t, report.b_t) == (4, 4, 5)
    assert report.eta_q == 1
    assert report.eta_t == Fraction(4, 9)


def test_three_qubit_efficiency():
    report = efficiency(3)
    assert (report.q_u, report.q_t, report.b_t) == (12, 12, 15)
    assert report.eta_t == Fraction(12, 27) == Fraction(4, 9)


@pytest.mark.parametrize("m", range(1, 65))
def test_total_efficiency_does_not_depend_on_m(m):
    assert efficiency(m).eta_t == Fraction(4, 9)
    assert efficiency(m).eta_q == 1


def test_efficiency_needs_a_positive_m():
    with pytest.raises(ProtocolError):
        efficiency(0)


def test_audit_single_qubit_run():
    report = transcript_audit(completed_run(1, decoys=3))
    assert (report.q_t, report.b_t) == (4, 5)
    assert report.eta_t == Fraction(4, 9)
    assert report.decoys_transmitted == 6
    assert report.decoy_bits == 12


def test_audit_two_qubit_run():
    report = transcript_audit(completed_run(2))
    assert (report.q_t, report.b_t) == (8, 10)
    assert report.decoys_transmitted == 0


def test_audit_rejects_aborted_run():
    config = ProtocolConfig(m=1, decoys_per_sequence=64, eve=EveModel.INTERCEPT_RESEND_Z)
    rng = derive_rng(1)
    transcript = run_protocol(config, random_pure_state(secret_labels(1), rng), rng)
    with pytest.raises(AuditError):
        transcript_audit(transcript)


def test_audit_catches_a_missing_parity():
    with pytest.raises(AuditError):
        transcript_audit(completed_run(1, withheld=[Party.BOB3]))


def test_audit_catches_an_extra_message():
    transcript = completed_run(1)
    extra = ClassicalMessage(Party.BOB1, 1, ControllerParity(Sign.PLUS))
    tampered = replace(
        transcript,
        messages=transcript.messages + (extra,),
        classical_bits_sent=transcript.classical_bits_sent + 1,
    )
    with pytest.raises(AuditError):
        transcript_audit(tampered)


def test_audit_catches_a_wrong_bit_count():
    transcript = completed_run(1)
    with pytest.raises(AuditError):
        transcript_audit(replace(transcript, classical_bits_sent=7))


def test_audit_catches_a_wrong_qubit_count():
    transcript = completed_run(1, decoys=2)
    with pytest.raises(AuditError):
        transcript_audit(replace(transcript, qubits_transmitted=4))


def test_audit_catches_a_mislabelled_payload():
    transcript = completed_run(1)
    forged = ClassicalMessage(Party.ALICE, 1, ControllerParity(Sign.PLUS))
    with pytest.raises(AuditError):
        transcript_audit(replace(transcript, messages=(forged,) + transcript.messages[1:]))
