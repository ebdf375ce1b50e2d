"""Fidelity metrics, occupation histories, leakage, and pulse power spectra."""

from dataclasses import dataclass

import numpy as np

from .errors import ContractViolationError, InvalidParameterError
from .hybrid_model import ModelBasis
from .propagation import NORM_TOL, ControlField, Trajectory

__all__ = [
    "SpectrumTable",
    "fidelity",
    "infidelity",
    "occupations",
    "leakage",
    "power_spectrum",
]


@dataclass(frozen=True)
class SpectrumTable:
    """One-sided power spectrum of a control pulse.

    ``frequencies`` are linear frequencies in GHz ascending from 0 to the
    Nyquist limit.  ``power`` is normalized to unit total (all zero for a
    pulse with no AC content); ``total_power`` is the pre-normalization
    total, equal to the sum of squared mean-subtracted samples.
    """

    frequencies: np.ndarray
    power: np.ndarray
    total_power: float

    def __post_init__(self):
        self.frequencies.setflags(write=False)
        self.power.setflags(write=False)


def _checked_state(psi, name):
    psi = np.asarray(psi, dtype=complex).reshape(-1)
    norm = np.linalg.norm(psi)
    if abs(norm - 1.0) > NORM_TOL:
        raise ContractViolationError(f"{name} is not normalized: ||psi|| = {norm}")
    return psi


def fidelity(psi: np.ndarray, target: np.ndarray) -> float:
    """Squared overlap |<psi|target>|^2, insensitive to global phase."""
    psi = _checked_state(psi, "psi")
    target = _checked_state(target, "target")
    return float(abs(np.vdot(psi, target)) ** 2)


def infidelity(psi: np.ndarray, target: np.ndarray) -> float:
    return 1.0 - fidelity(psi, target)


def occupations(traj: Trajectory, model: ModelBasis) -> np.ndarray:
    """Occupations of the logical levels along a trajectory.

    Returns ``(n_steps + 1, 5)``: column 0 is time (ns), columns 1-4 are
    P_1..P_4 resolved through the model's label map.
    """
    probs = np.abs(traj.states) ** 2
    table = np.empty((traj.states.shape[0], 5))
    table[:, 0] = traj.grid.boundary_times()
    for label in range(4):
        table[:, 1 + label] = probs[:, model.label_map[label]]
    return table


def leakage(traj: Trajectory, model: ModelBasis) -> tuple[float, float]:
    """Maximum-in-time and final occupation of the leakage level |4>."""
    p4 = np.abs(traj.states[:, model.label_map[3]]) ** 2
    return float(p4.max()), float(p4[-1])


def power_spectrum(field: ControlField, window: str | None = None) -> SpectrumTable:
    """Discrete power spectrum of the mean-subtracted field samples.

    The mean is removed first because optimized pulses ride on a DC offset
    near the reference detuning; the AC structure is what matters.  No
    window is applied by default (the pulses are short finite bursts, not
    stationary signals); pass ``window="hann"`` to taper.

    The pre-normalization bin powers satisfy Parseval's identity: their
    sum equals the sum of squared mean-subtracted (and windowed) samples.
    """
    n = field.grid.n_steps
    if n < 2:
        raise InvalidParameterError("power spectrum needs at least 2 samples")
    samples = field.values - field.values.mean()
    if window is None or window == "none":
        pass
    elif window == "hann":
        samples = samples * np.hanning(n)
    else:
        raise InvalidParameterError(f"unknown window {window!r} (use None or 'hann')")
    coeffs = np.fft.rfft(samples)
    power = np.abs(coeffs) ** 2 / n
    # one-sided spectrum: double every bin that has a negative-frequency twin
    scale = np.full(coeffs.shape, 2.0)
    scale[0] = 1.0
    if n % 2 == 0:
        scale[-1] = 1.0
    power *= scale
    total = float(power.sum())
    if total > 0.0:
        power = power / total
    freqs = np.fft.rfftfreq(n, d=field.grid.dt)  # dt in ns -> GHz
    return SpectrumTable(frequencies=freqs, power=power, total_power=total)
