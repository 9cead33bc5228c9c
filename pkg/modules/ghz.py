"""
Three-particle GHZ basis, outcome coding and GHZ-state measurement

|Psi_k> = (|p> + s|~p>)/sqrt(2) with the pattern p = k >> 1 (three bits,
first one always 0) and s = - for odd k, which reproduces the eight
states in their published order.
"""
import math
from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np

from modules.errors import StateError
from modules.qstate import QubitLabel, Sign, StateVector, project_family, project_onto

GHZ_INDICES = range(8)

# Published coding sets; everything else is checked against these
VALUE_ZERO = frozenset({0, 1, 4, 5})
VALUE_ONE = frozenset({2, 3, 6, 7})
PARITY_PLUS = frozenset({0, 2, 4, 6})
PARITY_MINUS = frozenset({1, 3, 5, 7})

# Which of Alice's two GHZ triples an agent's particle belongs to
SIDE_A1 = "A1"
SIDE_A2 = "A2"


@dataclass(frozen=True)
class GhzOutcome:
    index: int
    value: int
    parity: Sign

    @classmethod
    def of(cls, index: int) -> "GhzOutcome":
        """Outcome record with its (V, P) coding"""
        value, parity = ghz_code(index)
        return cls(index, value, parity)


def _check_index(k: int) -> None:
    if k not in GHZ_INDICES:
        raise StateError(f"GHZ index must be in 0..7, got {k}")


def pattern(k: int) -> Tuple[int, int, int]:
    """Bits of the '+' term of |Psi_k> on (x, A1, A2)"""
    _check_index(k)
    return 0, (k >> 2) & 1, (k >> 1) & 1


def ghz_state(k: int, labels: Sequence[QubitLabel]) -> StateVector:
    """|Psi_k> on the three labels, in order"""
    _check_index(k)
    if len(labels) != 3:
        raise StateError(f"a GHZ state needs three qubits, got {len(labels)}")
    amps = np.zeros(8, dtype=complex)
    p = k >> 1
    amps[p] = 1 / math.sqrt(2)
    amps[7 - p] = (-1 if k & 1 else 1) / math.sqrt(2)
    return StateVector(tuple(labels), amps)


def ghz_family(labels: Sequence[QubitLabel]) -> Tuple[StateVector, ...]:
    """All eight GHZ states on one triple, indexed by k"""
    return tuple(ghz_state(k, labels) for k in GHZ_INDICES)


def ghz_code(k: int) -> Tuple[int, Sign]:
    """(V, P) of outcome |Psi_k>"""
    _check_index(k)
    value = 0 if k in VALUE_ZERO else 1
    parity = Sign.PLUS if k in PARITY_PLUS else Sign.MINUS
    assert value == (k >> 1) & 1
    assert (parity is Sign.PLUS) == (k & 1 == 0)
    return value, parity


def receiver_value(k: int, side: str) -> int:
    """Value bit that selects the correction group for a receiver on `side`

    After outcome k the agents hold alpha|a> + P beta|~a> with
    a = (p1, p1, p2, p2) over (B1, B2, B3, C); the receiver needs its own
    bit of a.  For the A2 triple (Bob3, Charlie) that is the published V.
    """
    _, p1, p2 = pattern(k)
    if side == SIDE_A2:
        return p2
    if side == SIDE_A1:
        return p1
    raise StateError(f"unknown GHZ triple {side!r}")


def measure_ghz(
    state: StateVector, triple: Sequence[QubitLabel], rand: float, discard: bool = False
) -> Tuple[GhzOutcome, StateVector]:
    """Sampled GHZ-basis measurement of one triple"""
    index, collapsed = project_family(
        state, triple, ghz_family(triple), rand, discard=discard
    )
    return GhzOutcome.of(index), collapsed


def force_ghz(
    state: StateVector, triple: Sequence[QubitLabel], k: int, discard: bool = False
) -> Tuple[GhzOutcome, float, StateVector]:
    """Project onto |Psi_k> without sampling"""
    probability, collapsed = project_onto(
        state, triple, ghz_family(triple), k, discard=discard
    )
    return GhzOutcome.of(k), probability, collapsed
