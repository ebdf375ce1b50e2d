"""Norm-preserving state propagation under piecewise-constant control fields.

The control field lives on a uniform grid of ``n_steps`` midpoint samples;
states are recorded at the ``n_steps + 1`` step boundaries.  Each step
applies the exact unitary of its constant generator, so the evolution is
unitary at machine precision for any step size.
"""

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import (
    ContractViolationError,
    DimensionMismatchError,
    InvalidParameterError,
)
from .hybrid_model import ModelBasis
from .units import HBAR_UEV_NS

__all__ = [
    "TimeGrid",
    "ControlField",
    "Trajectory",
    "step_propagator",
    "propagate_forward",
    "propagate_target_backward",
]

NORM_TOL = 1e-6


@dataclass(frozen=True)
class TimeGrid:
    """Uniform time grid: total duration ``t_final`` (ns) split into
    ``n_steps`` equal steps.  Field samples live at step midpoints."""

    t_final: float
    n_steps: int

    def __post_init__(self):
        if not (np.isfinite(self.t_final) and self.t_final > 0):
            raise InvalidParameterError(f"t_final must be positive, got {self.t_final!r}")
        if int(self.n_steps) != self.n_steps or self.n_steps < 1:
            raise InvalidParameterError(f"n_steps must be a positive integer, got {self.n_steps!r}")

    @property
    def dt(self) -> float:
        return self.t_final / self.n_steps

    def midpoint_times(self) -> np.ndarray:
        """Times of the field samples."""
        return (np.arange(self.n_steps) + 0.5) * self.dt

    def boundary_times(self) -> np.ndarray:
        """Times of the state samples."""
        return np.arange(self.n_steps + 1) * self.dt


@dataclass(frozen=True)
class ControlField:
    """Control field E(t) = eps(t) - eps0 in ueV on a :class:`TimeGrid`."""

    grid: TimeGrid
    values: np.ndarray

    def __post_init__(self):
        values = np.ascontiguousarray(np.asarray(self.values, dtype=float))
        if values.shape != (self.grid.n_steps,):
            raise DimensionMismatchError(
                f"field has {values.shape} values for a grid of {self.grid.n_steps} steps")
        if not np.all(np.isfinite(values)):
            raise InvalidParameterError("field values must be finite")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @classmethod
    def zeros(cls, grid: TimeGrid) -> "ControlField":
        return cls(grid, np.zeros(grid.n_steps))


@dataclass(frozen=True)
class Trajectory:
    """States at the step boundaries of a grid: array of shape
    ``(n_steps + 1, 4)``."""

    grid: TimeGrid
    states: np.ndarray

    def __post_init__(self):
        states = np.ascontiguousarray(np.asarray(self.states, dtype=complex))
        if states.shape != (self.grid.n_steps + 1, 4):
            raise DimensionMismatchError(
                f"trajectory shape {states.shape} does not match grid "
                f"({self.grid.n_steps + 1} boundary samples expected)")
        states.setflags(write=False)
        object.__setattr__(self, "states", states)

    @property
    def final_state(self) -> np.ndarray:
        return self.states[-1]


def _check_normalized(psi: np.ndarray, name: str) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex).reshape(-1)
    if psi.shape != (4,):
        raise DimensionMismatchError(f"{name} must have 4 amplitudes, got shape {psi.shape}")
    norm = np.linalg.norm(psi)
    if abs(norm - 1.0) > NORM_TOL:
        raise ContractViolationError(f"{name} is not normalized: ||psi|| = {norm}")
    return psi


def step_propagator(h0_diag: np.ndarray, mu: np.ndarray, e_value: float,
                    dt: float) -> np.ndarray:
    """Exact single-step unitary exp(-i (H0 - mu*E) dt / hbar).

    Computed from the eigendecomposition of the 4x4 symmetric generator,
    so the result is unitary to machine precision.
    """
    if not (np.isfinite(dt) and dt > 0):
        raise InvalidParameterError(f"dt must be positive, got {dt!r}")
    if not np.isfinite(e_value):
        raise InvalidParameterError(f"field value must be finite, got {e_value!r}")
    h = np.diag(np.asarray(h0_diag, dtype=float)) - e_value * np.asarray(mu, dtype=float)
    w, v = np.linalg.eigh(h)
    phases = np.exp(-1j * w * dt / HBAR_UEV_NS)
    return (v * phases) @ v.T


def _propagate(model: ModelBasis, state: np.ndarray, field: ControlField,
               backward: bool) -> Trajectory:
    w_all, v_all = _kernels.decompose_field(
        np.ascontiguousarray(model.h0_diag),
        np.ascontiguousarray(model.mu),
        field.values)
    dt_over_hbar = field.grid.dt / HBAR_UEV_NS
    column = np.ascontiguousarray(state.reshape(4, 1))
    if backward:
        traj = _kernels.propagate_backward_decomposed(w_all, v_all, column, dt_over_hbar)
    else:
        traj = _kernels.propagate_decomposed(w_all, v_all, column, dt_over_hbar)
    return Trajectory(field.grid, traj[:, :, 0])


def propagate_forward(model: ModelBasis, psi0: np.ndarray,
                      field: ControlField) -> Trajectory:
    """Evolve ``psi0`` forward through every step of ``field``.

    Step k advances the state with the exact unitary of the midpoint field
    value ``field.values[k]``.
    """
    psi0 = _check_normalized(psi0, "psi0")
    return _propagate(model, psi0, field, backward=False)


def propagate_target_backward(model: ModelBasis, target: np.ndarray,
                              field: ControlField) -> Trajectory:
    """Evolve a target state backward from t = T to t = 0.

    The returned trajectory chi satisfies chi[n] = target and
    chi[k] = U_k^dagger chi[k+1] with the same step unitaries as the
    forward evolution, so |chi(t)><chi(t)| is the backward-evolved
    rank-1 target observable.
    """
    target = _check_normalized(target, "target")
    return _propagate(model, target, field, backward=True)
