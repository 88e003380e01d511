"""Jitted fixed-step RK4 core for i d|psi>/dt = H(t)|psi>.

The Hamiltonian is decomposed as a static complex part (cavity coupling
plus the -i/2 decay diagonal) and a small set of pulsed couplings, each a
sparse excitation-direction pattern scaled by a precomputed complex drive
value per half step.  Only the pattern entries are rewritten between
steps, so the hot loop stays allocation-free.

Status codes returned by :func:`rk4_propagate`: 0 = completed,
1 = norm grew beyond the guard (unstable step), 2 = NaN/Inf encountered.
"""

import numba
import numpy as np

STATUS_OK = 0
STATUS_NORM_GREW = 1
STATUS_NOT_FINITE = 2


@numba.njit(cache=True, inline="always")
def _write_drives(A, h_static, crows, ccols, ccoef, coff, dvals, j):
    # Refresh only the entries touched by pulsed drives; distinct drives
    # never share a matrix entry.
    n_drives = coff.shape[0] - 1
    for d in range(n_drives):
        v = dvals[d, j]
        vc = v.conjugate()
        for k in range(coff[d], coff[d + 1]):
            r = crows[k]
            c = ccols[k]
            w = ccoef[k]
            A[r, c] = h_static[r, c] + v * w
            A[c, r] = h_static[c, r] + vc * w


@numba.njit(cache=True, inline="always")
def _deriv(A, y, out):
    # out = -i * A @ y
    dim, m = y.shape
    for a in range(dim):
        for l in range(m):
            acc = 0j
            for b in range(dim):
                acc += A[a, b] * y[b, l]
            out[a, l] = -1j * acc


@numba.njit(cache=True)
def rk4_propagate(
    psi0,
    h_static,
    crows,
    ccols,
    ccoef,
    coff,
    dvals,
    h,
    n_steps,
    sample_every,
    norm_guard,
):
    dim, m = psi0.shape
    n_samples = n_steps // sample_every + 1
    if n_steps % sample_every != 0:
        n_samples += 1

    samples = np.zeros((n_samples, dim, m), np.complex128)
    sample_steps = np.zeros(n_samples, np.int64)

    A = h_static.copy()
    y = psi0.copy()
    k1 = np.empty((dim, m), np.complex128)
    k2 = np.empty((dim, m), np.complex128)
    k3 = np.empty((dim, m), np.complex128)
    k4 = np.empty((dim, m), np.complex128)
    ytmp = np.empty((dim, m), np.complex128)

    samples[0] = y
    sample_steps[0] = 0
    sample_idx = 1

    half = 0.5 * h
    sixth = h / 6.0
    status = STATUS_OK
    fail_step = -1

    for s in range(n_steps):
        j = 2 * s
        _write_drives(A, h_static, crows, ccols, ccoef, coff, dvals, j)
        _deriv(A, y, k1)
        for a in range(dim):
            for l in range(m):
                ytmp[a, l] = y[a, l] + half * k1[a, l]
        _write_drives(A, h_static, crows, ccols, ccoef, coff, dvals, j + 1)
        _deriv(A, ytmp, k2)
        for a in range(dim):
            for l in range(m):
                ytmp[a, l] = y[a, l] + half * k2[a, l]
        _deriv(A, ytmp, k3)
        for a in range(dim):
            for l in range(m):
                ytmp[a, l] = y[a, l] + h * k3[a, l]
        _write_drives(A, h_static, crows, ccols, ccoef, coff, dvals, j + 2)
        _deriv(A, ytmp, k4)

        norm_sq = 0.0
        for a in range(dim):
            for l in range(m):
                y[a, l] += sixth * (
                    k1[a, l] + 2.0 * k2[a, l] + 2.0 * k3[a, l] + k4[a, l]
                )
                z = y[a, l]
                norm_sq += z.real * z.real + z.imag * z.imag

        if not np.isfinite(norm_sq):
            status = STATUS_NOT_FINITE
            fail_step = s + 1
            break
        if norm_sq > norm_guard:
            status = STATUS_NORM_GREW
            fail_step = s + 1
            break

        if (s + 1) % sample_every == 0 or (s + 1) == n_steps:
            samples[sample_idx] = y
            sample_steps[sample_idx] = s + 1
            sample_idx += 1

    return samples, sample_steps, sample_idx, status, fail_step
