"""
Tests for the GHZ basis, its outcome coding and GHZ-state measurement
"""
import math

import numpy as np
import pytest

from modules.errors import StateError
from modules.ghz import (
    PARITY_MINUS,
    PARITY_PLUS,
    SIDE_A1,
    SIDE_A2,
    VALUE_ONE,
    VALUE_ZERO,
    force_ghz,
    ghz_code,
    ghz_family,
    ghz_state,
    measure_ghz,
    pattern,
    receiver_value,
)
from modules.qstate import (
    QubitLabel,
    Sign,
    basis_state,
    fidelity,
    from_amplitudes,
    random_pure_state,
    reduced_state,
    tensor_all,
)

S = 1 / math.sqrt(2)
TRIPLE = (QubitLabel("x", 1), QubitLabel("A1", 1), QubitLabel("A2", 1))
AGENTS = (QubitLabel("B1", 1), QubitLabel("B2", 1), QubitLabel("B3", 1), QubitLabel("C", 1))


def test_psi0_amplitudes():
    amps = ghz_state(0, TRIPLE).amps
    expected = np.zeros(8)
    expected[0b000] = expected[0b111] = S
    np.testing.assert_allclose(amps, expected)


def test_psi5_amplitudes():
    amps = ghz_state(5, TRIPLE).amps
    assert amps[0b010] == pytest.approx(S)
    assert amps[0b101] == pytest.approx(-S)
    assert np.count_nonzero(amps) == 2


def test_psi7_amplitudes():
    amps = ghz_state(7, TRIPLE).amps
    assert amps[0b011] == pytest.approx(S)
    assert amps[0b100] == pytest.approx(-S)


def test_ghz_basis_is_orthonormal():
    family = ghz_family(TRIPLE)
    for j, a in enumerate(family):
        for k, b in enumerate(family):
            overlap = np.vdot(a.amps, b.amps)
            assert abs(overlap - (1 if j == k else 0)) <= 1e-12


def test_ghz_basis_is_complete(rng):
    family = ghz_family(TRIPLE)
    for _ in range(10):
        phi = random_pure_state(TRIPLE, rng)
        total = sum(abs(np.vdot(member.amps, phi.amps)) ** 2 for member in family)
        assert total == pytest.approx(1, abs=1e-12)


def test_ghz_state_validation():
    with pytest.raises(StateError):
        ghz_state(8, TRIPLE)
    with pytest.raises(StateError):
        ghz_state(-1, TRIPLE)
    with pytest.raises(StateError):
        ghz_state(0, TRIPLE[:2])


def test_coding_examples():
    assert ghz_code(0) == (0, Sign.PLUS)
    assert ghz_code(7) == (1, Sign.MINUS)
    assert ghz_code(4) == (0, Sign.PLUS)
    assert ghz_code(3) == (1, Sign.MINUS)


def test_coding_sets_partition_the_outcomes():
    assert VALUE_ZERO | VALUE_ONE == set(range(8))
    assert not VALUE_ZERO & VALUE_ONE
    assert PARITY_PLUS | PARITY_MINUS == set(range(8))
    assert not PARITY_PLUS & PARITY_MINUS


@pytest.mark.parametrize("k", range(8))
def test_coding_matches_published_sets(k):
    value, parity = ghz_code(k)
    assert value == (0 if k in {0, 1, 4, 5} else 1)
    assert parity is (Sign.PLUS if k in {0, 2, 4, 6} else Sign.MINUS)
    # structural shortcut: V is bit 1, parity is bit 0
    assert value == (k >> 1) & 1
    assert (parity is Sign.MINUS) == bool(k & 1)


def test_coding_rejects_out_of_range():
    with pytest.raises(StateError):
        ghz_code(8)


@pytest.mark.parametrize("k", range(8))
def test_receiver_value(k):
    assert receiver_value(k, SIDE_A2) == ghz_code(k)[0]
    assert receiver_value(k, SIDE_A1) == (1 if k in {4, 5, 6, 7} else 0)
    assert pattern(k)[0] == 0


def test_receiver_value_differs_between_triples():
    # outcome |Psi_4> leaves Charlie in the identity group but Bob1 in the flip group
    assert receiver_value(4, SIDE_A2) == 0
    assert receiver_value(4, SIDE_A1) == 1
    with pytest.raises(StateError):
        receiver_value(4, "B")


def test_measure_fresh_psi0():
    for rand in (0.0, 0.4, 0.99):
        outcome, _ = measure_ghz(ghz_state(0, TRIPLE), TRIPLE, rand)
        assert outcome.index == 0
        assert (outcome.value, outcome.parity) == (0, Sign.PLUS)


def test_measure_011_splits_between_six_and_seven():
    state = basis_state(TRIPLE, "011")
    assert measure_ghz(state, TRIPLE, 0.25)[0].index == 6
    assert measure_ghz(state, TRIPLE, 0.75)[0].index == 7


def _composite(alpha, beta):
    chi = from_amplitudes((TRIPLE[0],), [alpha, beta])
    first = ghz_state(0, (TRIPLE[1], AGENTS[0], AGENTS[1]))
    second = ghz_state(0, (TRIPLE[2], AGENTS[2], AGENTS[3]))
    return tensor_all([chi, first, second])


def _agents_state(terms):
    amps = np.zeros(16, dtype=complex)
    for bits, amp in terms:
        amps[int(bits, 2)] = amp
    return from_amplitudes(AGENTS, amps)


@pytest.mark.parametrize("k", range(8))
def test_collapsed_agent_states_match_expansion(k):
    alpha, beta = 0.6, 0.8j
    # four-agent term paired with |Psi_k>, qubits ordered B1 B2 B3 C
    expected_terms = {
        0: [("0000", alpha), ("1111", beta)],
        1: [("0000", alpha), ("1111", -beta)],
        2: [("0011", alpha), ("1100", beta)],
        3: [("0011", alpha), ("1100", -beta)],
        4: [("0011", beta), ("1100", alpha)],
        5: [("0011", beta), ("1100", -alpha)],
        6: [("0000", beta), ("1111", alpha)],
        7: [("0000", beta), ("1111", -alpha)],
    }
    outcome, probability, collapsed = force_ghz(_composite(alpha, beta), TRIPLE, k)
    assert outcome.index == k
    assert probability == pytest.approx(1 / 8, abs=1e-12)
    agents = reduced_state(collapsed, AGENTS)
    assert fidelity(agents, _agents_state(expected_terms[k])) == pytest.approx(1, abs=1e-12)
    # Alice's particles are left in |Psi_k>
    assert fidelity(reduced_state(collapsed, TRIPLE), ghz_state(k, TRIPLE)) == pytest.approx(1)


def test_measure_composite_state_covers_all_outcomes():
    state = _composite(0.6, 0.8)
    seen = {measure_ghz(state, TRIPLE, (j + 0.5) / 8)[0].index for j in range(8)}
    assert seen == set(range(8))
