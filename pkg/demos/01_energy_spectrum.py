"""Energy levels of the hybrid qubit versus detuning.

Sweeps the detuning across the anticrossing region, writes the level
table as CSV, and prints the working-point spectrum with the three
transition frequencies of the qutrit ladder.
"""

import os

import numpy as np

from dqdpulse import (
    HybridParams,
    build_model_basis,
    energy_spectrum_sweep,
    write_spectrum_sweep,
)
from dqdpulse.units import PLANCK_UEV_PER_GHZ

OUT = os.path.join(os.path.dirname(__file__), "out")


def main():
    os.makedirs(OUT, exist_ok=True)
    params = HybridParams()

    table = energy_spectrum_sweep(params, -500.0, 500.0, 1001)
    path = os.path.join(OUT, "energy_spectrum.csv")
    write_spectrum_sweep(table, path)
    print(f"wrote {path} ({table.shape[0]} rows)")

    gaps = np.diff(table[:, 1:], axis=1)
    row, col = np.unravel_index(np.argmin(gaps), gaps.shape)
    print(f"narrowest gap: E{col + 2}-E{col + 1} = {gaps[row, col]:.3f} ueV "
          f"at detuning {table[row, 0]:.1f} ueV")

    model = build_model_basis(params)
    print(f"\nworking point eps0 = {params.eps0} ueV")
    print("eigenvalues (ueV):", np.round(model.h0_diag, 3))
    for j, gap in enumerate(np.diff(model.h0_diag)):
        f_ghz = gap / PLANCK_UEV_PER_GHZ
        print(f"  level {j + 1} -> {j + 2}: {gap:8.3f} ueV = {f_ghz:7.3f} GHz")


if __name__ == "__main__":
    main()
