"""CSV import/export for pulses, logs, spectra, trajectories, and sweeps.

All numeric output uses 12 significant digits, enough to round-trip the
physically meaningful part of every quantity while keeping files
diff-friendly.  Pulse files carry a comment line documenting the midpoint
sample convention so an imported file can be validated against it.
"""

import numpy as np

from .analysis import SpectrumTable, occupations
from .errors import PulseFormatError
from .hybrid_model import ModelBasis
from .propagation import ControlField, TimeGrid, Trajectory

__all__ = [
    "export_pulse",
    "import_pulse",
    "write_convergence_log",
    "write_spectrum",
    "write_trajectory",
    "write_spectrum_sweep",
    "write_infidelity_summary",
]

_FMT = "%.12g"

# uniform-spacing tolerance for imported time columns, in ns
_SPACING_TOL = 1e-9


def _fmt(x: float) -> str:
    return _FMT % x


def export_pulse(field: ControlField, path) -> None:
    """Write a control field as CSV rows ``t_ns,E_ueV``.

    Times are the step midpoints t_k = (k + 1/2) dt; the convention is
    recorded in a leading ``#`` comment so imports can check it.
    """
    times = field.grid.midpoint_times()
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("# field values sampled at step midpoints: t_k = (k + 0.5)*dt, "
                 f"dt = {_fmt(field.grid.dt)} ns, n_steps = {field.grid.n_steps}\n")
        fh.write("t_ns,E_ueV\n")
        for t, e in zip(times, field.values):
            fh.write(f"{_fmt(t)},{_fmt(e)}\n")


def import_pulse(path) -> ControlField:
    """Read a pulse CSV written by :func:`export_pulse`.

    Validates column count, numeric content, uniform time spacing within
    1e-9 ns, and the midpoint convention (first sample at dt/2).  The
    reconstructed grid has t_final = n_steps * dt.
    """
    times = []
    values = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if line.lower().replace(" ", "") == "t_ns,e_uev":
                continue
            parts = line.split(",")
            if len(parts) != 2:
                raise PulseFormatError(
                    f"{path}: line {lineno}: expected 2 comma-separated values, "
                    f"got {len(parts)}")
            try:
                t, e = float(parts[0]), float(parts[1])
            except ValueError:
                raise PulseFormatError(
                    f"{path}: line {lineno}: non-numeric entry {line!r}") from None
            if not (np.isfinite(t) and np.isfinite(e)):
                raise PulseFormatError(f"{path}: line {lineno}: non-finite entry")
            times.append(t)
            values.append(e)
    if len(times) < 2:
        raise PulseFormatError(f"{path}: need at least 2 samples, got {len(times)}")
    times = np.asarray(times)
    steps = np.diff(times)
    dt = steps.mean()
    if dt <= 0 or np.abs(steps - dt).max() > _SPACING_TOL:
        raise PulseFormatError(
            f"{path}: time column is not uniformly spaced within {_SPACING_TOL} ns")
    if abs(times[0] - 0.5 * dt) > _SPACING_TOL:
        raise PulseFormatError(
            f"{path}: first sample at t = {times[0]!r} ns does not sit at the "
            f"step midpoint dt/2 = {0.5 * dt!r} ns")
    grid = TimeGrid(t_final=dt * len(times), n_steps=len(times))
    return ControlField(grid, np.asarray(values))


def write_convergence_log(mean_infidelity, max_pair_infidelity, path) -> None:
    """Per-iteration log: ``iteration,mean_infidelity,max_pair_infidelity``."""
    mean_infidelity = np.asarray(mean_infidelity, dtype=float)
    max_pair_infidelity = np.asarray(max_pair_infidelity, dtype=float)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("iteration,mean_infidelity,max_pair_infidelity\n")
        for i, (mi, mp) in enumerate(zip(mean_infidelity, max_pair_infidelity)):
            fh.write(f"{i},{_fmt(mi)},{_fmt(mp)}\n")


def write_spectrum(table: SpectrumTable, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("freq_GHz,power_normalized\n")
        for f, p in zip(table.frequencies, table.power):
            fh.write(f"{_fmt(f)},{_fmt(p)}\n")


def write_trajectory(traj: Trajectory, model: ModelBasis, path) -> None:
    """Occupations and raw amplitudes over time.

    Columns: ``t_ns,P1,P2,P3,P4,re1,im1,...,re4,im4`` with populations and
    amplitudes both in logical-label order.
    """
    table = occupations(traj, model)
    order = [int(model.label_map[j]) for j in range(4)]
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("t_ns,P1,P2,P3,P4,"
                 "re1,im1,re2,im2,re3,im3,re4,im4\n")
        for row, state in zip(table, traj.states):
            cells = [_fmt(v) for v in row]
            for idx in order:
                cells.append(_fmt(state[idx].real))
                cells.append(_fmt(state[idx].imag))
            fh.write(",".join(cells) + "\n")


def write_spectrum_sweep(sweep: np.ndarray, path) -> None:
    """Energy levels vs detuning: ``eps_ueV,E1_ueV,E2_ueV,E3_ueV,E4_ueV``."""
    sweep = np.asarray(sweep, dtype=float)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("eps_ueV,E1_ueV,E2_ueV,E3_ueV,E4_ueV\n")
        for row in sweep:
            fh.write(",".join(_fmt(v) for v in row) + "\n")


def write_infidelity_summary(t_final: float, gate_names, infidelities, path) -> None:
    """One-row summary with gates as columns, infidelities in 1e-5 units."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("T_ns," + ",".join(gate_names) + "\n")
        cells = [_fmt(t_final)]
        cells += [_fmt(v * 1e5) for v in infidelities]
        fh.write(",".join(cells) + "\n")
