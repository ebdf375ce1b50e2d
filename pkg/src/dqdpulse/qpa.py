"""Qutrit permutation-parity algorithm: gate definitions, embedding, readout.

The algorithm distinguishes even from odd permutations of three objects
with a single oracle query: prepare the ground state, apply the qutrit
Fourier transform, the permutation being tested, and the inverse Fourier
transform, then measure.  Even permutations return the start state, odd
ones its partner, each up to a global phase.

Qutrit basis states carry the logical labels 1, 2, 3 (the ground state is
label 2) and are embedded in the 4-level device through the model's label
map; the fourth level only ever appears as leakage.
"""

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import ContractViolationError, DimensionMismatchError, InvalidParameterError
from .hybrid_model import ModelBasis
from .propagation import ControlField, propagate_forward
from .tbqcp import StatePairSet

__all__ = [
    "Parity",
    "QutritUnitary",
    "QpaOutcome",
    "qft_matrix",
    "permutation_matrix",
    "parity",
    "embed_gate_as_state_pairs",
    "expected_outcome",
    "ideal_qpa_outcome",
    "run_qpa",
]

_UNITARITY_TOL = 1e-12

# cube root of unity; the only irrational ingredient of every gate here
_OMEGA = np.exp(2j * np.pi / 3)


class Parity(Enum):
    EVEN = "even"
    ODD = "odd"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class QutritUnitary:
    """A 3x3 unitary with its unitarity checked at construction."""

    entries: np.ndarray

    def __post_init__(self):
        entries = np.ascontiguousarray(np.asarray(self.entries, dtype=complex))
        if entries.shape != (3, 3):
            raise DimensionMismatchError(f"qutrit gate must be 3x3, got {entries.shape}")
        defect = np.abs(entries.conj().T @ entries - np.eye(3)).max()
        if defect >= _UNITARITY_TOL:
            raise ContractViolationError(
                f"matrix is not unitary: max |U^dag U - I| = {defect:.3e}")
        entries.setflags(write=False)
        object.__setattr__(self, "entries", entries)

    @property
    def dagger(self) -> "QutritUnitary":
        return QutritUnitary(self.entries.conj().T)

    def __matmul__(self, other: "QutritUnitary") -> "QutritUnitary":
        return QutritUnitary(self.entries @ other.entries)


@dataclass(frozen=True)
class QpaOutcome:
    """Measurement summary of one algorithm run.

    ``probabilities[j]`` is the population of logical level j+1 after the
    circuit.  Parity is read from the populations of levels 2 and 3 alone;
    ``confidence`` is max(P2, P3).
    """

    probabilities: np.ndarray
    inferred_parity: Parity
    confidence: float

    def __post_init__(self):
        probs = np.asarray(self.probabilities, dtype=float)
        if probs.shape != (4,):
            raise DimensionMismatchError("probabilities must be 4 values")
        if abs(probs.sum() - 1.0) > 1e-9:
            raise ContractViolationError(
                f"probabilities sum to {probs.sum():.12f}, not 1")
        probs.setflags(write=False)
        object.__setattr__(self, "probabilities", probs)


def qft_matrix() -> QutritUnitary:
    """Qutrit Fourier transform (1/sqrt3) [[1,1,1],[1,w,w*],[1,w*,w]],
    w = exp(i 2pi/3)."""
    w = _OMEGA
    f = np.array([[1, 1, 1], [1, w, w.conjugate()], [1, w.conjugate(), w]],
                 dtype=complex) / np.sqrt(3.0)
    return QutritUnitary(f)


# rows give the image of (e1, e2, e3); k = 1..3 even, k = 4..6 odd
_PERMUTATIONS = {
    1: [[1, 0, 0], [0, 1, 0], [0, 0, 1]],
    2: [[0, 1, 0], [0, 0, 1], [1, 0, 0]],
    3: [[0, 0, 1], [1, 0, 0], [0, 1, 0]],
    4: [[0, 0, 1], [0, 1, 0], [1, 0, 0]],
    5: [[0, 1, 0], [1, 0, 0], [0, 0, 1]],
    6: [[1, 0, 0], [0, 0, 1], [0, 1, 0]],
}


def _check_k(k):
    if k not in _PERMUTATIONS:
        raise InvalidParameterError(f"permutation index must be 1..6, got {k!r}")


def permutation_matrix(k: int) -> QutritUnitary:
    """Permutation gate Pi_k on the qutrit, k = 1..6."""
    _check_k(k)
    return QutritUnitary(np.array(_PERMUTATIONS[k], dtype=complex))


def parity(k: int) -> Parity:
    """Even for the identity and the two cyclic shifts (k = 1..3), odd for
    the three transpositions (k = 4..6)."""
    _check_k(k)
    return Parity.EVEN if k <= 3 else Parity.ODD


# Outcome of the ideal circuit U_FT^dag Pi_k U_FT |2>: the final logical
# label and the global phase it carries.
_OUTCOMES = {
    1: (2, 1.0 + 0.0j),
    2: (2, _OMEGA),
    3: (2, _OMEGA.conjugate()),
    4: (3, _OMEGA.conjugate()),
    5: (3, _OMEGA),
    6: (3, 1.0 + 0.0j),
}


def expected_outcome(k: int):
    """Ideal final state of the algorithm as ``(logical_label, global_phase)``."""
    _check_k(k)
    return _OUTCOMES[k]


def embed_gate_as_state_pairs(u: QutritUnitary, model: ModelBasis) -> StatePairSet:
    """Lift a qutrit gate to 4 state pairs in the 4-level model basis.

    The pairs are (|j>, U|j>) for the three qutrit basis states plus the
    uniform superposition (|1>+|2>+|3>)/sqrt3.  Three basis pairs fix the
    columns of the realized unitary only up to independent phases; the
    superposition pair ties those phases together, so a field solving all
    four pairs implements U up to one global phase.  All 8 states have a
    zero component on level 4.
    """
    if not isinstance(u, QutritUnitary):
        u = QutritUnitary(u)
    qutrit_levels = [model.logical_state(label) for label in (1, 2, 3)]

    def embed(qutrit_vec):
        out = np.zeros(4, dtype=complex)
        for amplitude, level in zip(qutrit_vec, qutrit_levels):
            out += amplitude * level
        return out

    uniform = np.ones(3, dtype=complex) / np.sqrt(3.0)
    columns = [np.eye(3, dtype=complex)[:, j] for j in range(3)] + [uniform]
    pairs = [(embed(v), embed(u.entries @ v)) for v in columns]
    return StatePairSet.from_pairs(pairs)


def _outcome_from_probabilities(probs: np.ndarray) -> QpaOutcome:
    # parity readout from the populations of logical levels 2 and 3 only
    p2, p3 = probs[1], probs[2]
    confidence = float(max(p2, p3))
    if confidence < 0.5:
        inferred = Parity.INCONCLUSIVE
    elif p2 > p3:
        inferred = Parity.EVEN
    else:
        inferred = Parity.ODD
    return QpaOutcome(probs, inferred, confidence)


def ideal_qpa_outcome(k: int) -> QpaOutcome:
    """Outcome of the circuit with exact unitaries in place of pulses."""
    _check_k(k)
    f = qft_matrix().entries
    circuit = f.conj().T @ permutation_matrix(k).entries @ f
    final = circuit @ np.array([0.0, 1.0, 0.0], dtype=complex)  # start in |2>
    probs = np.zeros(4)
    probs[:3] = np.abs(final) ** 2
    return _outcome_from_probabilities(probs)


def run_qpa(model: ModelBasis, pulse_uft: ControlField, pulse_pi_k: ControlField,
            pulse_uft_dag: ControlField, k: int) -> QpaOutcome:
    """Run the full algorithm with synthesized pulses.

    The ground state (logical |2>) is propagated through the three pulses
    back to back with no idle gap, and the populations of the logical
    levels are read at the end.
    """
    _check_k(k)
    for name, pulse in (("pulse_pi_k", pulse_pi_k), ("pulse_uft_dag", pulse_uft_dag)):
        if pulse.grid != pulse_uft.grid:
            raise DimensionMismatchError(f"{name} grid does not match pulse_uft grid")
    psi = model.logical_state(2)
    for pulse in (pulse_uft, pulse_pi_k, pulse_uft_dag):
        psi = propagate_forward(model, psi, pulse).final_state
    amplitudes = np.array([psi[model.label_map[label - 1]] for label in (1, 2, 3, 4)])
    probs = np.abs(amplitudes) ** 2
    probs = probs / probs.sum()  # strip norm drift at the 1e-12 level
    return _outcome_from_probabilities(probs)
