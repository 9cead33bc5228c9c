"""
Dense state-vector engine for the QSTS simulator

Amplitude index b maps to the computational basis ket whose j-th label
carries the j-th most significant bit of b, so kets read left to right
as they are written.  Measured qubits stay in the register, fixed to
the measured eigenstate, unless the caller asks to discard them.
"""
import logging
import math
from dataclasses import dataclass
from enum import Enum, IntEnum
from typing import Iterable, Sequence, Tuple, Union

import numpy as np

from modules.errors import StateError
from modules.settings import DEFAULT_MAX_QUBITS

logger = logging.getLogger(__name__)

NORM_TOLERANCE = 1e-10
FIDELITY_TOLERANCE = 1e-9
ROLES = ("x", "A1", "A2", "B1", "B2", "B3", "C")

# Register cap and norm tolerance, set by configure()
max_qubits = DEFAULT_MAX_QUBITS
norm_tolerance = NORM_TOLERANCE


def configure(settings):
    """Configure the module with the simulator settings"""
    global max_qubits, norm_tolerance
    max_qubits = settings.max_qubits
    norm_tolerance = settings.tolerance
    if max_qubits > DEFAULT_MAX_QUBITS:
        mib = (2 ** max_qubits) * 16 / 2 ** 20
        logger.warning(
            "register cap raised to %d qubits; a full register needs %.0f MiB",
            max_qubits,
            mib,
        )


@dataclass(frozen=True, order=True)
class QubitLabel:
    role: str
    index: int

    def __post_init__(self):
        if self.role not in ROLES:
            raise StateError(f"unknown qubit role {self.role!r}")
        if self.index < 1:
            raise StateError(f"qubit index must be >= 1, got {self.index}")

    def __str__(self):
        return f"{self.role}_{self.index}"


def labels_for(role: str, m: int) -> Tuple[QubitLabel, ...]:
    """Labels role_1 .. role_m"""
    return tuple(QubitLabel(role, i) for i in range(1, m + 1))


class Sign(IntEnum):
    PLUS = 1
    MINUS = -1

    def __str__(self):
        return "+" if self is Sign.PLUS else "-"

    @classmethod
    def parse(cls, text: str) -> "Sign":
        """Sign from "+" or "-\""""
        if text in ("+", "+x"):
            return cls.PLUS
        if text in ("-", "−", "-x"):
            return cls.MINUS
        raise ValueError(f"not a sign: {text!r}")


def sign_product(signs: Iterable[Sign]) -> Sign:
    """Product of a run of signs"""
    return Sign(math.prod(int(s) for s in signs))


class Basis(str, Enum):
    Z = "Z"
    X = "X"


_SQRT1_2 = 1 / math.sqrt(2)


class PauliOp(str, Enum):
    """The four correction operators; ISigmaY is the real matrix |0><1| - |1><0|"""

    I = "I"
    SIGMA_Z = "Z"
    SIGMA_X = "X"
    I_SIGMA_Y = "iY"

    @property
    def matrix(self) -> np.ndarray:
        """Read-only 2x2 matrix"""
        return _PAULI_MATRICES[self]


_PAULI_MATRICES = {
    PauliOp.I: np.array([[1, 0], [0, 1]], dtype=complex),
    PauliOp.SIGMA_Z: np.array([[1, 0], [0, -1]], dtype=complex),
    PauliOp.SIGMA_X: np.array([[0, 1], [1, 0]], dtype=complex),
    PauliOp.I_SIGMA_Y: np.array([[0, 1], [-1, 0]], dtype=complex),
}
for _matrix in _PAULI_MATRICES.values():
    _matrix.flags.writeable = False

BASIS_VECTORS = {
    Basis.Z: np.array([[1, 0], [0, 1]], dtype=complex),
    Basis.X: np.array([[1, 1], [1, -1]], dtype=complex) * _SQRT1_2,
}


@dataclass(frozen=True, eq=False)
class StateVector:
    """Normalized amplitudes over an ordered register of labelled qubits

    The amplitude array is frozen on construction; the state takes ownership.
    """

    labels: Tuple[QubitLabel, ...]
    amps: np.ndarray

    def __post_init__(self):
        labels = tuple(self.labels)
        if len(set(labels)) != len(labels):
            raise StateError(f"duplicate labels in register {[str(l) for l in labels]}")
        if len(labels) > max_qubits:
            raise StateError(
                f"register of {len(labels)} qubits exceeds the cap of {max_qubits}"
            )
        amps = np.asarray(self.amps, dtype=complex).reshape(-1)
        if amps.size != 2 ** len(labels):
            raise StateError(
                f"{amps.size} amplitudes do not fit a {len(labels)}-qubit register"
            )
        if not np.all(np.isfinite(amps)):
            raise StateError("non-finite amplitude")
        amps.flags.writeable = False
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "amps", amps)

    @property
    def n(self) -> int:
        """Number of qubits in the register"""
        return len(self.labels)

    def axis(self, label: QubitLabel) -> int:
        """Position of label in the register"""
        try:
            return self.labels.index(label)
        except ValueError:
            raise StateError(f"qubit {label} is not in the register") from None

    def norm_squared(self) -> float:
        """<psi|psi>"""
        return float(np.vdot(self.amps, self.amps).real)

    def check_norm(self) -> None:
        """Raise if the norm drifted past the configured tolerance"""
        if abs(self.norm_squared() - 1) > norm_tolerance:
            raise StateError(f"state norm drifted to {self.norm_squared():.3e}")

    def tensor(self) -> np.ndarray:
        """Amplitudes as a (2,)*n view, one axis per label"""
        return self.amps.reshape((2,) * self.n)

    def relabel(self, labels: Sequence[QubitLabel]) -> "StateVector":
        """Same amplitudes under new names, position by position"""
        return StateVector(tuple(labels), self.amps)

    def __repr__(self):
        return f"StateVector({[str(l) for l in self.labels]}, n={self.n})"


def _wrap(labels: Tuple[QubitLabel, ...], amps: np.ndarray) -> StateVector:
    """Build a state from amplitudes this module produced, skipping validation

    `amps` must be a fresh flat complex array of the right size.
    """
    state = object.__new__(StateVector)
    amps.flags.writeable = False
    object.__setattr__(state, "labels", labels)
    object.__setattr__(state, "amps", amps)
    return state


def from_amplitudes(labels: Sequence[QubitLabel], amps, normalize: bool = True) -> StateVector:
    """Validated state from raw amplitudes, normalized unless told otherwise"""
    amps = np.asarray(amps, dtype=complex).reshape(-1)
    norm = np.linalg.norm(amps)
    if norm == 0:
        raise StateError("zero vector is not a state")
    if normalize:
        amps = amps / norm
    state = StateVector(tuple(labels), amps)
    state.check_norm()
    return state


def basis_state(labels: Sequence[QubitLabel], bits: str) -> StateVector:
    """Computational basis ket, bits[j] on labels[j]"""
    if len(bits) != len(labels):
        raise StateError(f"{len(bits)} bits for {len(labels)} labels")
    if any(b not in "01" for b in bits):
        raise StateError(f"not a bit string: {bits!r}")
    amps = np.zeros(2 ** len(labels), dtype=complex)
    amps[int(bits, 2) if bits else 0] = 1
    return StateVector(tuple(labels), amps)


def x_state(label: QubitLabel, sign: Sign) -> StateVector:
    """|+x> or |-x>"""
    row = 0 if sign is Sign.PLUS else 1
    return StateVector((label,), BASIS_VECTORS[Basis.X][row])


def tensor(a: StateVector, b: StateVector) -> StateVector:
    """a (x) b over the concatenated register"""
    overlap = set(a.labels) & set(b.labels)
    if overlap:
        raise StateError(f"registers overlap on {sorted(str(l) for l in overlap)}")
    if a.n + b.n > max_qubits:
        raise StateError(
            f"register of {a.n + b.n} qubits exceeds the cap of {max_qubits}"
        )
    amps = np.kron(a.amps, b.amps)
    # the norm of a product is the product of the norms
    scale = math.sqrt(a.norm_squared() * b.norm_squared())
    if scale == 0:
        raise StateError("zero vector is not a state")
    if abs(scale - 1) > norm_tolerance:
        amps /= scale
    return _wrap(a.labels + b.labels, amps)


def tensor_all(states: Sequence[StateVector]) -> StateVector:
    """Left-to-right tensor product of several registers"""
    result = states[0]
    for state in states[1:]:
        result = tensor(result, state)
    return result


def reorder(state: StateVector, labels: Sequence[QubitLabel]) -> StateVector:
    """Permute the register into the given label order"""
    labels = tuple(labels)
    if set(labels) != set(state.labels) or len(labels) != state.n:
        raise StateError("reorder needs exactly the labels of the register")
    if labels == state.labels:
        return state
    axes = [state.axis(l) for l in labels]
    amps = np.ascontiguousarray(np.transpose(state.tensor(), axes)).reshape(-1)
    return _wrap(labels, amps)


def apply_1q(
    state: StateVector,
    target: QubitLabel,
    op: Union[PauliOp, np.ndarray],
) -> StateVector:
    """op acting on one qubit of the register"""
    matrix = op.matrix if isinstance(op, PauliOp) else np.asarray(op, dtype=complex)
    if matrix.shape != (2, 2):
        raise StateError(f"single-qubit operator must be 2x2, got {matrix.shape}")
    ax = state.axis(target)
    psi = np.tensordot(matrix, state.tensor(), axes=([1], [ax]))
    psi = np.ascontiguousarray(np.moveaxis(psi, 0, ax))
    return _wrap(state.labels, psi.reshape(-1))


def _target_axes(state: StateVector, targets: Sequence[QubitLabel]) -> list:
    axes = [state.axis(t) for t in targets]
    if len(set(axes)) != len(axes):
        raise StateError("measurement targets repeat a qubit")
    return axes


def _target_block(state: StateVector, targets: Sequence[QubitLabel]) -> np.ndarray:
    """Amplitudes as a (2^k, rest) matrix with the targets as row index"""
    axes = _target_axes(state, targets)
    k = len(axes)
    psi = np.moveaxis(state.tensor(), axes, list(range(k)))
    return psi.reshape(2 ** k, -1)


def _rest_labels(state: StateVector, targets: Sequence[QubitLabel]) -> Tuple[QubitLabel, ...]:
    measured = set(targets)
    return tuple(l for l in state.labels if l not in measured)


def _family_matrix(
    targets: Sequence[QubitLabel], family: Sequence[StateVector]
) -> np.ndarray:
    """Family members as rows over the target order, checked orthonormal"""
    d = 2 ** len(targets)
    if len(family) != d:
        raise StateError(f"family of {len(family)} states cannot span dimension {d}")
    rows = []
    for member in family:
        if set(member.labels) != set(targets) or member.n != len(targets):
            raise StateError("family member is not defined on the measured qubits")
        rows.append(reorder(member, targets).amps)
    matrix = np.array(rows)
    gram = matrix.conj() @ matrix.T
    if not np.allclose(gram, np.eye(d), atol=norm_tolerance, rtol=0):
        raise StateError("measurement family is not orthonormal")
    return matrix


def _pick(probabilities: np.ndarray, rand: float) -> int:
    if not 0 <= rand < 1:
        raise StateError(f"random draw {rand} outside [0, 1)")
    cumulative = np.cumsum(probabilities)
    index = int(np.searchsorted(cumulative, rand, side="right"))
    # rounding can leave the total a hair below 1
    index = min(index, len(probabilities) - 1)
    while probabilities[index] == 0 and index > 0:
        index -= 1
    return index


def _born(
    state: StateVector,
    targets: Sequence[QubitLabel],
    family: Sequence[StateVector],
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Family matrix, per-member coefficients and Born probabilities

    coeffs[j] is <f_j|psi> over the untouched qubits, in register order.
    The probabilities of a complete family sum to the squared norm, so the
    sum check also rejects a corrupted state.
    """
    axes = _target_axes(state, targets)
    k = len(axes)
    matrix = _family_matrix(targets, family)
    bras = matrix.conj().reshape((2 ** k,) + (2,) * k)
    coeffs = np.tensordot(bras, state.tensor(), axes=(list(range(1, k + 1)), axes))
    coeffs = coeffs.reshape(2 ** k, -1)
    born = np.einsum("ij,ij->i", coeffs.conj(), coeffs).real
    if abs(born.sum() - 1) > norm_tolerance:
        raise StateError(f"Born probabilities sum to {born.sum():.12f}")
    return matrix, coeffs, born


def family_probabilities(
    state: StateVector,
    targets: Sequence[QubitLabel],
    family: Sequence[StateVector],
) -> np.ndarray:
    """Born probabilities of every family member without collapsing"""
    return _born(state, targets, family)[2]


def _collapse(
    state: StateVector,
    targets: Sequence[QubitLabel],
    matrix: np.ndarray,
    coeffs: np.ndarray,
    index: int,
    probability: float,
    discard: bool = False,
) -> StateVector:
    """Post-measurement state |f_index> (x) coeffs[index], renormalized

    With `discard` the measured qubits leave the register and only the
    rest is returned.
    """
    rest = coeffs[index] / math.sqrt(probability)
    if discard:
        return _wrap(_rest_labels(state, targets), rest)
    axes = _target_axes(state, targets)
    k = len(axes)
    out = np.empty((2,) * state.n, dtype=complex)
    # write the product straight into the target axes of the new register
    np.multiply.outer(
        matrix[index].reshape((2,) * k),
        rest.reshape((2,) * (state.n - k)),
        out=np.moveaxis(out, axes, list(range(k))),
    )
    return _wrap(state.labels, out.reshape(-1))


def project_family(
    state: StateVector,
    targets: Sequence[QubitLabel],
    family: Sequence[StateVector],
    rand: float,
    discard: bool = False,
) -> Tuple[int, StateVector]:
    """Projective measurement of the targets onto an orthonormal family

    The outcome is the first index whose cumulative Born probability
    exceeds rand.
    """
    matrix, coeffs, born = _born(state, targets, family)
    index = _pick(born, rand)
    return index, _collapse(state, targets, matrix, coeffs, index, born[index], discard)


def project_onto(
    state: StateVector,
    targets: Sequence[QubitLabel],
    family: Sequence[StateVector],
    index: int,
    discard: bool = False,
) -> Tuple[float, StateVector]:
    """Force outcome `index`; returns its Born probability and the collapsed state"""
    matrix, coeffs, born = _born(state, targets, family)
    probability = float(born[index])
    if probability <= norm_tolerance:
        raise StateError(f"outcome {index} has zero probability")
    return probability, _collapse(
        state, targets, matrix, coeffs, index, probability, discard
    )


def basis_family(label: QubitLabel, basis: Basis) -> Tuple[StateVector, StateVector]:
    """The two eigenstates of `basis` on one qubit"""
    vectors = BASIS_VECTORS[Basis(basis)]
    return StateVector((label,), vectors[0]), StateVector((label,), vectors[1])


def measure_basis(
    state: StateVector,
    target: QubitLabel,
    basis: Basis,
    rand: float,
    discard: bool = False,
) -> Tuple[Union[int, Sign], StateVector]:
    """Single-qubit measurement; Z yields a bit, X yields a sign"""
    basis = Basis(basis)
    index, collapsed = project_family(
        state, (target,), basis_family(target, basis), rand, discard=discard
    )
    if basis is Basis.Z:
        return index, collapsed
    return (Sign.PLUS if index == 0 else Sign.MINUS), collapsed


def probabilities(state: StateVector, targets: Sequence[QubitLabel]) -> np.ndarray:
    """Z-basis marginal of the targets, indexed like a basis ket over them"""
    block = _target_block(state, targets)
    return np.sum(np.abs(block) ** 2, axis=1)


def reduced_state(
    state: StateVector,
    targets: Sequence[QubitLabel],
    tolerance: float = FIDELITY_TOLERANCE,
) -> StateVector:
    """The pure state of the targets, when they are not entangled with the rest"""
    block = _target_block(state, targets)
    # rho_ij = sum_r psi[i, r] conj(psi[j, r])
    rho = block @ block.conj().T
    eigenvalues, eigenvectors = np.linalg.eigh(rho)
    purity = float(np.sum(eigenvalues ** 2))
    if purity < 1 - tolerance:
        raise StateError(f"qubits {[str(t) for t in targets]} are mixed (purity {purity:.6f})")
    return from_amplitudes(targets, eigenvectors[:, -1])


def fidelity(a: StateVector, b: StateVector) -> float:
    """|<a|b>|^2, clipped to 1"""
    if set(a.labels) != set(b.labels) or a.n != b.n:
        raise StateError("fidelity needs two states on the same register")
    b = reorder(b, a.labels)
    overlap = np.vdot(a.amps, b.amps)
    return float(min(1.0, abs(overlap) ** 2))


def random_pure_state(
    labels: Sequence[QubitLabel], rng: np.random.Generator
) -> StateVector:
    """Haar-random state from normalized complex Gaussian amplitudes"""
    if not labels:
        raise StateError("random state needs at least one qubit")
    d = 2 ** len(labels)
    amps = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return from_amplitudes(labels, amps)


def qubit_state(label: QubitLabel, alpha: complex, beta: complex) -> StateVector:
    """alpha|0> + beta|1>"""
    return from_amplitudes((label,), [alpha, beta], normalize=False)


def pauli_matrix(op: PauliOp) -> np.ndarray:
    """2x2 matrix of a correction operator"""
    return PauliOp(op).matrix
