"""Four-level double-quantum-dot hybrid qubit model.

The electrically controlled knob is the detuning eps (ueV).  The model is
built in the position-like basis where the Hamiltonian is real symmetric,
then rotated into the eigenbasis at a reference detuning eps0.  That
eigenbasis is the propagation basis for everything else in the package:
the static part is the diagonal h0, and the control couples through the
dipole-like operator mu obtained by rotating the detuning-proportional
diagonal part of the Hamiltonian.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import ContractViolationError, DegeneracyError, InvalidParameterError
from .units import PLANCK_UEV_PER_GHZ

__all__ = [
    "HybridParams",
    "ModelBasis",
    "DIPOLE_DIAGONAL",
    "build_hamiltonian",
    "eigendecompose",
    "build_model_basis",
    "energy_spectrum_sweep",
]

#: Diagonal part of the Hamiltonian proportional to the detuning:
#: d H / d eps.  Dimensionless; couples to the control field in ueV.
DIPOLE_DIAGONAL = np.diag([0.5, 0.5, -0.5, -0.5])
DIPOLE_DIAGONAL.setflags(write=False)

#: Logical labels are assigned by energy order: the ground state is the
#: algorithm's initial state |2>, the first excited state is |1>, and the
#: two remaining levels keep energy order as |3> and |4> (|4> is the
#: leakage level).  Entry i is the index of logical |i+1> among the
#: energy-sorted eigenstates.
_LABEL_TO_SORTED_INDEX = np.array([1, 0, 2, 3])
_LABEL_TO_SORTED_INDEX.setflags(write=False)


@dataclass(frozen=True)
class HybridParams:
    """Physical constants of the hybrid qubit, defaulting to the measured set.

    Tunneling rates ``delta1..delta4`` and level splittings ``delta_el``,
    ``delta_er`` are linear frequencies in GHz; ``eps0`` is the reference
    detuning in ueV at which the propagation basis is defined.
    """

    delta1: float = 2.62
    delta2: float = 3.50
    delta3: float = 4.60
    delta4: float = 1.65
    delta_el: float = 52.7
    delta_er: float = 9.2
    eps0: float = 50.0

    def __post_init__(self):
        for name in ("delta1", "delta2", "delta3", "delta4",
                     "delta_el", "delta_er", "eps0"):
            value = getattr(self, name)
            if not np.isfinite(value):
                raise InvalidParameterError(f"{name} must be finite, got {value!r}")


@dataclass(frozen=True)
class ModelBasis:
    """Propagation basis at the reference detuning.

    ``h0_diag`` are the four eigenvalues of H(eps0) in ascending order
    (ueV); ``z`` holds the corresponding eigenvectors as columns;
    ``mu = z.T @ DIPOLE_DIAGONAL @ z``; ``label_map[i]`` is the index of
    logical level ``|i+1>`` among the energy-sorted eigenstates.
    """

    h0_diag: np.ndarray
    z: np.ndarray
    mu: np.ndarray
    label_map: np.ndarray = field(default_factory=lambda: _LABEL_TO_SORTED_INDEX.copy())

    def __post_init__(self):
        for name in ("h0_diag", "z", "mu", "label_map"):
            getattr(self, name).setflags(write=False)

    def logical_state(self, label: int) -> np.ndarray:
        """Basis vector of logical level ``|label>`` (1-based) in the eigenbasis."""
        if label not in (1, 2, 3, 4):
            raise InvalidParameterError(f"logical label must be 1..4, got {label}")
        psi = np.zeros(4, dtype=complex)
        psi[self.label_map[label - 1]] = 1.0
        return psi


def build_hamiltonian(params: HybridParams, eps: float) -> np.ndarray:
    """Hybrid-qubit Hamiltonian at detuning ``eps`` (ueV), real symmetric 4x4.

    GHz frequencies enter as energies h*f.  The diagonal is
    (eps/2, eps/2 + h*f_EL, -eps/2, -eps/2 + h*f_ER); tunneling terms sit
    on the (1,3), (1,4), (2,3), (2,4) off-diagonals with the signs
    (+d1, -d2, -d3, +d4).
    """
    if not np.isfinite(eps):
        raise InvalidParameterError(f"detuning must be finite, got {eps!r}")
    h = PLANCK_UEV_PER_GHZ
    d1 = h * params.delta1
    d2 = h * params.delta2
    d3 = h * params.delta3
    d4 = h * params.delta4
    e_l = h * params.delta_el
    e_r = h * params.delta_er
    return np.array([
        [eps / 2.0, 0.0, d1, -d2],
        [0.0, eps / 2.0 + e_l, -d3, d4],
        [d1, -d3, -eps / 2.0, 0.0],
        [-d2, d4, 0.0, -eps / 2.0 + e_r],
    ])


def _max_abs(a) -> float:
    return float(np.max(np.abs(a))) if np.asarray(a).size else 0.0


def eigendecompose(h: np.ndarray, hermiticity_tol: float = 1e-12):
    """Eigendecomposition of a Hermitian matrix with a deterministic
    sign/phase convention.

    Returns ``(eigenvalues, eigenvectors)`` with eigenvalues ascending and
    each eigenvector column scaled so its largest-magnitude component is
    real and positive, making the decomposition reproducible across
    linear-algebra backends.
    """
    h = np.asarray(h)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise ContractViolationError(f"expected a square matrix, got shape {h.shape}")
    if _max_abs(h - h.conj().T) > hermiticity_tol * max(1.0, _max_abs(h)):
        raise ContractViolationError("matrix is not Hermitian within tolerance")
    w, v = np.linalg.eigh(h)
    for j in range(v.shape[1]):
        pivot = v[np.argmax(np.abs(v[:, j])), j]
        if np.iscomplexobj(v):
            v[:, j] *= np.conj(pivot) / abs(pivot)
        elif pivot < 0:
            v[:, j] = -v[:, j]
    if not np.iscomplexobj(v):
        # eigh of a real input returns real vectors; keep them real
        pass
    return w, v


def build_model_basis(params: HybridParams, degeneracy_tol: float = 1e-9,
                      field_sign: float = 1.0) -> ModelBasis:
    """Diagonalize H(eps0) and assemble the propagation basis.

    ``field_sign`` (+1 or -1) fixes the sign with which the control field
    couples: the propagator uses H0 - E*mu, and flipping the sign of mu is
    equivalent to flipping the sign of the stored field.  Optimization
    from a null start is exactly symmetric under the flip (the synthesized
    field mirrors, fidelities are unchanged), so the flag only matters
    when exchanging pulse files with hardware that fixes the polarity.

    Raises :class:`DegeneracyError` when two eigenvalues are closer than
    ``degeneracy_tol`` ueV, since the energy-ordered labeling would then
    be undefined.
    """
    if field_sign not in (1.0, -1.0, 1, -1):
        raise InvalidParameterError(f"field_sign must be +1 or -1, got {field_sign!r}")
    h = build_hamiltonian(params, params.eps0)
    w, z = eigendecompose(h)
    gaps = np.diff(w)
    if np.any(gaps < degeneracy_tol):
        raise DegeneracyError(
            f"eigenvalues {w} contain a gap below {degeneracy_tol} ueV; "
            "level labeling is undefined"
        )
    mu = z.T @ DIPOLE_DIAGONAL @ z
    mu = (mu + mu.T) / 2.0  # symmetrize away rounding noise
    return ModelBasis(h0_diag=w, z=z, mu=float(field_sign) * mu)


def energy_spectrum_sweep(params: HybridParams, eps_min: float, eps_max: float,
                          n_points: int) -> np.ndarray:
    """Energy levels versus detuning.

    Returns an array of shape ``(n_points, 5)``: column 0 is the detuning,
    columns 1-4 the eigenvalues in ascending order.  Continuous branches
    can be recovered by following the sorted levels across rows.
    A single-point sweep (``n_points == 1`` or ``eps_min == eps_max``) is
    allowed and reproduces the pointwise spectrum.
    """
    if not (np.isfinite(eps_min) and np.isfinite(eps_max)):
        raise InvalidParameterError("sweep range must be finite")
    if eps_min > eps_max:
        raise InvalidParameterError(
            f"eps_min ({eps_min}) must not exceed eps_max ({eps_max})")
    if n_points < 1:
        raise InvalidParameterError(f"n_points must be >= 1, got {n_points}")
    if n_points == 1 and eps_min != eps_max:
        raise InvalidParameterError("a single-point sweep needs eps_min == eps_max")
    eps_values = np.linspace(eps_min, eps_max, n_points)
    table = np.empty((n_points, 5))
    for i, eps in enumerate(eps_values):
        w = np.linalg.eigvalsh(build_hamiltonian(params, eps))
        table[i, 0] = eps
        table[i, 1:] = w
    return table
