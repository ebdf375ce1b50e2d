"""Compiled inner loops for time propagation and the self-consistent sweep.

States are stored as columns of (4, m) complex arrays so the m tracked
states of one control task advance together.  Every step uses the exact
unitary of the piecewise-constant generator H = diag(h0) - E*mu, obtained
from a fresh 4x4 symmetric eigendecomposition, so norms are preserved to
machine precision regardless of the step size.

The eigendecompositions of a field are returned alongside, because the
optimizer's backward pass re-propagates under the same field and can skip
re-diagonalizing.
"""

import numpy as np
from numba import njit


@njit(cache=True)
def _fill_generator(h0, mu, e, out):
    for i in range(4):
        for j in range(4):
            out[i, j] = -e * mu[i, j]
        out[i, i] += h0[i]


@njit(cache=True)
def _apply_eigenstep(v, phases, state, tmp):
    """state <- v @ diag(phases) @ v.T @ state, in place."""
    m = state.shape[1]
    for i in range(4):
        for j in range(m):
            s = 0j
            for l in range(4):
                s += v[l, i] * state[l, j]
            tmp[i, j] = phases[i] * s
    for i in range(4):
        for j in range(m):
            s = 0j
            for l in range(4):
                s += v[i, l] * tmp[l, j]
            state[i, j] = s


@njit(cache=True)
def decompose_field(h0, mu, field):
    """Eigendecompose H(E_k) for every step of a field.

    Returns (w_all, v_all) with shapes (n, 4) and (n, 4, 4).
    """
    n = field.shape[0]
    w_all = np.empty((n, 4))
    v_all = np.empty((n, 4, 4))
    h = np.empty((4, 4))
    for k in range(n):
        _fill_generator(h0, mu, field[k], h)
        w, v = np.linalg.eigh(h)
        w_all[k] = w
        v_all[k] = v
    return w_all, v_all


@njit(cache=True)
def propagate_decomposed(w_all, v_all, psi0, dt_over_hbar):
    """Forward trajectory under a pre-decomposed field.

    psi0 is (4, m); returns (n+1, 4, m) sampled at step boundaries.
    """
    n = w_all.shape[0]
    m = psi0.shape[1]
    traj = np.empty((n + 1, 4, m), np.complex128)
    state = psi0.astype(np.complex128).copy()
    tmp = np.empty((4, m), np.complex128)
    traj[0] = state
    for k in range(n):
        phases = np.exp(-1j * w_all[k] * dt_over_hbar)
        _apply_eigenstep(v_all[k], phases, state, tmp)
        traj[k + 1] = state
    return traj


@njit(cache=True)
def propagate_backward_decomposed(w_all, v_all, chi_final, dt_over_hbar):
    """Backward trajectory: chi[k] = U_k^dagger chi[k+1], chi[n] = chi_final."""
    n = w_all.shape[0]
    m = chi_final.shape[1]
    traj = np.empty((n + 1, 4, m), np.complex128)
    state = chi_final.astype(np.complex128).copy()
    tmp = np.empty((4, m), np.complex128)
    traj[n] = state
    for k in range(n - 1, -1, -1):
        phases = np.exp(1j * w_all[k] * dt_over_hbar)
        _apply_eigenstep(v_all[k], phases, state, tmp)
        traj[k] = state
    return traj


@njit(cache=True)
def weighted_correction(mu, psi, chi, weights, hbar):
    """Weighted field correction -2/hbar * Im(<psi|chi><chi|mu|psi>) summed
    over state columns."""
    m = psi.shape[1]
    total = 0.0
    for j in range(m):
        overlap = 0j
        for i in range(4):
            overlap += np.conj(psi[i, j]) * chi[i, j]
        matel = 0j
        for i in range(4):
            mu_psi = 0j
            for l in range(4):
                mu_psi += mu[i, l] * psi[l, j]
            matel += np.conj(chi[i, j]) * mu_psi
        total += weights[j] * (overlap * matel).imag
    return -2.0 / hbar * total


@njit(cache=True)
def self_consistent_sweep(h0, mu, field_in, chi_traj, psi0, weights, eta,
                          dt_over_hbar, hbar):
    """One forward sweep of the iterative field update.

    At each step the correction is evaluated from the states at the left
    boundary and the backward trajectory of the previous field, the field
    value is updated, and the states advance one step under the already
    updated value.  Resolving the update sequentially in time is what makes
    the implicit coupling between the new field and the new states
    self-consistent.

    Returns (field_out, psi_traj, w_all, v_all); the decompositions belong
    to field_out and seed the next backward pass.
    """
    n = field_in.shape[0]
    m = psi0.shape[1]
    field_out = np.empty(n)
    traj = np.empty((n + 1, 4, m), np.complex128)
    w_all = np.empty((n, 4))
    v_all = np.empty((n, 4, 4))
    state = psi0.astype(np.complex128).copy()
    tmp = np.empty((4, m), np.complex128)
    h = np.empty((4, 4))
    traj[0] = state
    for k in range(n):
        f = weighted_correction(mu, state, chi_traj[k], weights, hbar)
        e = field_in[k] + eta * f
        field_out[k] = e
        _fill_generator(h0, mu, e, h)
        w, v = np.linalg.eigh(h)
        w_all[k] = w
        v_all[k] = v
        phases = np.exp(-1j * w * dt_over_hbar)
        _apply_eigenstep(v, phases, state, tmp)
        traj[k + 1] = state
    return field_out, traj, w_all, v_all
