"""Free evolution sanity check.

With the field off, each eigenstate only accumulates phase, so an equal
superposition of the qutrit levels beats at the transition frequencies
while all populations stay frozen.  The numerical propagator is compared
against the analytic phases.
"""

import numpy as np

from dqdpulse import (
    ControlField,
    HybridParams,
    TimeGrid,
    build_model_basis,
    occupations,
    propagate_forward,
)
from dqdpulse.units import HBAR_UEV_NS


def main():
    model = build_model_basis(HybridParams())
    grid = TimeGrid(1.3, 1300)

    # equal superposition of the three qutrit levels
    psi0 = (model.logical_state(1) + model.logical_state(2)
            + model.logical_state(3)) / np.sqrt(3)
    traj = propagate_forward(model, psi0, ControlField.zeros(grid))

    table = occupations(traj, model)
    drift = np.abs(table[:, 1:] - table[0, 1:]).max()
    print(f"population drift over {grid.t_final} ns: {drift:.3e} (should be ~0)")

    analytic = np.exp(-1j * model.h0_diag * grid.t_final / HBAR_UEV_NS) * psi0
    error = np.abs(traj.final_state - analytic).max()
    print(f"deviation from analytic phase evolution: {error:.3e}")

    norms = np.linalg.norm(traj.states, axis=1)
    print(f"worst norm defect along the trajectory: {np.abs(norms - 1).max():.3e}")


if __name__ == "__main__":
    main()
