"""Acceptance gate: end-to-end checks at shipped defaults.

Two full batches run once per session (every gate at T = 1.3 ns, then at
T = 1.0 ns, default grid density and optimizer settings); the criteria
read their manifests and artifacts.  Criterion 7 is self-contained and
fast.  Each criterion prints one PASS/FAIL line; run with ``pytest -s``
to see the lines for passing criteria too.
"""

import dataclasses
import os
import time

import numpy as np
import pytest

from dqdpulse.analysis import fidelity, power_spectrum
from dqdpulse.config import GATE_NAMES, load_config
from dqdpulse.hybrid_model import build_hamiltonian, build_model_basis
from dqdpulse.propagation import ControlField, TimeGrid, propagate_forward, step_propagator
from dqdpulse.qpa import expected_outcome, ideal_qpa_outcome, parity, permutation_matrix
from dqdpulse.runner import run_experiment

from conftest import random_state
from _oracles import (
    char_poly_eigenvalues,
    perm_compose,
    perm_matrix,
    qutrit_circuit_state,
    zero_field_state,
)

pytestmark = pytest.mark.acceptance


def _report(criterion: int, passed: bool, details: str) -> bool:
    status = "PASS" if passed else "FAIL"
    print(f"ACCEPTANCE CRITERION {criterion}: {status} ({details})")
    return passed


def _run_batch(tmp_root, t_final_text):
    config = load_config(None)
    config = dataclasses.replace(
        config, output_dir=str(tmp_root / f"batch_{t_final_text}"))
    if t_final_text != "1.3":
        grid = TimeGrid(float(t_final_text), int(round(10000 * float(t_final_text))))
        config = dataclasses.replace(
            config, grid=grid,
            optimizer=dataclasses.replace(config.optimizer, grid=grid))
    return config, run_experiment(config)


@pytest.fixture(scope="session")
def batch_13(tmp_path_factory):
    return _run_batch(tmp_path_factory.mktemp("acceptance"), "1.3")


@pytest.fixture(scope="session")
def batch_10(tmp_path_factory):
    return _run_batch(tmp_path_factory.mktemp("acceptance"), "1.0")


def _infidelities(manifest) -> dict:
    return {g.name: g.mean_infidelity for g in manifest.gates}


def _read_convergence_log(config, name):
    path = os.path.join(config.output_dir, f"convergence_{name}.csv")
    table = np.loadtxt(path, delimiter=",", skiprows=1)
    return table[:, 1], table[:, 2]


def test_criterion_1_every_gate_converges_at_1p3ns(batch_13):
    config, manifest = batch_13
    infid = _infidelities(manifest)
    walls = {g.name: g.wall_time_s for g in manifest.gates}
    worst = max(infid, key=infid.get)
    slowest = max(walls, key=walls.get)
    ok = (set(infid) == set(GATE_NAMES)
          and all(v <= 5e-4 for v in infid.values())
          and all(w <= 600.0 for w in walls.values()))
    _report(1, ok, f"worst infidelity {infid[worst]:.3e} ({worst}), "
                    f"slowest gate {walls[slowest]:.0f}s ({slowest})")
    assert set(infid) == set(GATE_NAMES)
    assert all(v <= 5e-4 for v in infid.values()), infid
    assert all(w <= 600.0 for w in walls.values()), walls


def test_criterion_2_speed_limit_trend(batch_13, batch_10):
    infid_13 = _infidelities(batch_13[1])
    infid_10 = _infidelities(batch_10[1])
    median_13 = float(np.median(list(infid_13.values())))
    median_10 = float(np.median(list(infid_10.values())))
    median_ok = median_10 > median_13
    p5_ok = infid_10["P5"] > 1e-3
    _report(2, median_ok and p5_ok,
            f"median {median_10:.6e} at 1.0ns vs {median_13:.6e} at 1.3ns "
            f"[{'ok' if median_ok else 'violated'}]; P5 at 1.0ns "
            f"{infid_10['P5']:.3e} vs required > 1e-3 "
            f"[{'ok' if p5_ok else 'violated'}]")
    assert median_ok, (median_10, median_13)
    assert p5_ok, infid_10["P5"]


def test_criterion_3_parity_algorithm_end_to_end(batch_13):
    _, manifest = batch_13
    rows = manifest.qpa
    ok = (len(rows) == 6
          and all(r["match"] for r in rows)
          and all(r["confidence"] >= 0.998 for r in rows))
    confidences = {r["k"]: r["confidence"] for r in rows}
    _report(3, ok, "parity correct for all k, min confidence "
                   f"{min(confidences.values()):.6f}" if rows else "no qpa rows")
    assert len(rows) == 6
    for r in rows:
        assert r["match"], r
        assert r["confidence"] >= 0.998, r


def test_criterion_4_monotone_convergence(batch_13, batch_10):
    shape_ok = True
    monotone_ok = True
    details = []
    for config, manifest in (batch_13, batch_10):
        for gate in manifest.gates:
            mean_infid, _ = _read_convergence_log(config, gate.name)
            rises = np.diff(mean_infid)
            if rises.max() > 1e-12:
                monotone_ok = False
                details.append(f"{gate.name}@{config.grid.t_final} rise {rises.max():.2e}")
    # qualitative benchmark shape, checked on the Fourier-gate logs: the
    # fidelity races up early (90% of the total gain inside the first half
    # of the run) and the final quarter is a plateau contributing at most
    # 5% of the gain.  The hard odd permutations legitimately converge
    # through a lag phase or late staircase, so the shape is a property of
    # the benchmark curve, not of every gate.
    for config, manifest in (batch_13, batch_10):
        mean_infid, _ = _read_convergence_log(config, "UFT")
        fid = 1.0 - mean_infid
        total = fid[-1] - fid[0]
        n = len(fid)
        q = max(n // 4, 1)
        t90 = int(np.argmax(fid - fid[0] >= 0.9 * total)) / n
        plateau_share = (fid[-1] - fid[-q]) / total
        if not (t90 <= 0.5 and plateau_share <= 0.05):
            shape_ok = False
            details.append(f"UFT@{config.grid.t_final} t90 {t90:.2f}, "
                           f"plateau share {plateau_share:.4f}")
    ok = monotone_ok and shape_ok
    _report(4, ok, "fidelity non-decreasing per iteration at 1e-12 for all "
                   "16 runs, Fourier-gate logs rise fast then plateau"
                   + ("" if ok else "; " + "; ".join(details)))
    assert monotone_ok, details
    assert shape_ok, details


def test_criterion_5_leakage_bounds(batch_13):
    _, manifest = batch_13
    final_leaks = {g.name: g.final_leak for g in manifest.gates}
    max_leaks = {g.name: g.max_leak for g in manifest.gates}
    ok = (all(v < 1e-3 for v in final_leaks.values())
          and all(v < 0.05 for v in max_leaks.values()))
    _report(5, ok, f"worst final leak {max(final_leaks.values()):.2e}, "
                   f"worst in-time leak {max(max_leaks.values()):.2e}")
    assert all(v < 1e-3 for v in final_leaks.values()), final_leaks
    assert all(v < 0.05 for v in max_leaks.values()), max_leaks


def test_criterion_6_spectral_content(batch_13, batch_10):
    fractions = {}
    for config, manifest in (batch_13, batch_10):
        for gate in manifest.gates:
            path = os.path.join(config.output_dir, f"spectrum_{gate.name}.csv")
            table = np.loadtxt(path, delimiter=",", skiprows=1)
            below = table[table[:, 0] < 25.0, 1].sum()
            fractions[f"{gate.name}@{config.grid.t_final}"] = below
    worst = min(fractions, key=fractions.get)
    ok = all(v >= 0.90 for v in fractions.values())
    _report(6, ok, f"every pulse has >= 90% of power below 25 GHz, "
                   f"worst {fractions[worst]:.4f} ({worst})")
    assert ok, fractions


def test_criterion_7_oracle_suite_is_fast(params, model, rng):
    t0 = time.perf_counter()

    # Hermiticity and unitarity invariants at 1e-12 / 1e-13
    for eps in rng.uniform(-500, 500, size=200):
        h = build_hamiltonian(params, eps)
        assert np.abs(h - h.T).max() < 1e-12
    for e in rng.uniform(-30, 30, size=100):
        u = step_propagator(model.h0_diag, model.mu, e, 1e-4)
        assert np.abs(u @ u.conj().T - np.eye(4)).max() < 1e-13

    # zero-field analytic-phase propagation at 1e-10
    grid = TimeGrid(1.3, 1300)
    psi0 = random_state(rng)
    traj = propagate_forward(model, psi0, ControlField.zeros(grid))
    assert np.abs(traj.final_state
                  - zero_field_state(model.h0_diag, psi0, 1.3)).max() < 1e-10

    # S3 group table and ideal-circuit outcomes exact to 1e-12
    for ka in range(1, 7):
        assert np.array_equal(permutation_matrix(ka).entries.real, perm_matrix(ka))
        for kb in range(1, 7):
            product = permutation_matrix(ka).entries @ permutation_matrix(kb).entries
            assert np.array_equal(product,
                                  permutation_matrix(perm_compose(ka, kb)).entries)
    for k in range(1, 7):
        label, phase = expected_outcome(k)
        target = np.zeros(3, dtype=complex)
        target[label - 1] = phase
        assert np.abs(qutrit_circuit_state(k) - target).max() < 1e-12
        outcome = ideal_qpa_outcome(k)
        assert outcome.inferred_parity is parity(k)

    # Parseval identity at 1e-8 relative
    grid_fft = TimeGrid(1.0, 4096)
    values = rng.normal(size=grid_fft.n_steps)
    table = power_spectrum(ControlField(grid_fft, values))
    energy = np.sum((values - values.mean()) ** 2)
    assert abs(table.total_power - energy) <= 1e-8 * energy

    # eigenvalues against the characteristic-polynomial oracle at 1e-8
    h = build_hamiltonian(params, params.eps0)
    assert np.abs(np.sort(np.linalg.eigvalsh(h))
                  - char_poly_eigenvalues(h)).max() < 1e-8

    # grid convergence: halving dt moves the final fidelity by < 1e-8
    finals = []
    for n in (13000, 26000):
        g = TimeGrid(1.3, n)
        t = g.midpoint_times()
        field = ControlField(g, 8.0 * np.sin(2 * np.pi * 6.0 * t))
        finals.append(propagate_forward(model, psi0, field).final_state)
    assert abs(fidelity(finals[0], finals[1]) - 1.0) < 1e-8

    elapsed = time.perf_counter() - t0
    ok = elapsed < 60.0
    _report(7, ok, f"oracle/property block completed in {elapsed:.1f}s")
    assert ok
