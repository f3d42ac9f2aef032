# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled twin of the pure-numpy kernels in ``_fallback``.

Semantics are defined by that module; keep the two in lockstep. The heavy
loops run without the GIL so surrogate replications can be threaded.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport sqrt

cnp.import_array()

ctypedef cnp.int64_t i64
ctypedef cnp.float64_t f64


cdef Py_ssize_t _hindcast_fill(
    const f64* y, Py_ssize_t T, Py_ssize_t m, Py_ssize_t tau_max,
    i64* origin, i64* tau, f64* raw, f64* norm, f64* mu_out, f64* k_out,
    Py_ssize_t* skipped,
) noexcept nogil:
    """Append records for one series; returns the number written."""
    cdef Py_ssize_t n = 0, i, t, ntau
    cdef double mu, acc, dev, k2, k, err
    for i in range(m, T - 1):
        mu = (y[i] - y[i - m]) / m
        acc = 0.0
        for t in range(i - m, i):
            dev = (y[t + 1] - y[t]) - mu
            acc += dev * dev
        k2 = acc / (m - 1)
        if k2 <= 0.0:
            skipped[0] += 1
            continue
        k = sqrt(k2)
        ntau = T - 1 - i
        if ntau > tau_max:
            ntau = tau_max
        for t in range(1, ntau + 1):
            err = y[i + t] - y[i] - mu * t
            origin[n] = i
            tau[n] = t
            raw[n] = err
            norm[n] = err / k
            mu_out[n] = mu
            k_out[n] = k
            n += 1
    return n


cdef Py_ssize_t _record_cap(Py_ssize_t T, Py_ssize_t m, Py_ssize_t tau_max) noexcept nogil:
    cdef Py_ssize_t cap = 0, i, ntau
    for i in range(m, T - 1):
        ntau = T - 1 - i
        if ntau > tau_max:
            ntau = tau_max
        cap += ntau
    return cap


def hindcast_errors(y, m, tau_max):
    """See ``_fallback.hindcast_errors``."""
    cdef cnp.ndarray[f64, ndim=1] y_arr = np.ascontiguousarray(y, dtype=np.float64)
    cdef Py_ssize_t m_c = int(m)
    cdef Py_ssize_t tau_c = int(tau_max)
    if m_c < 2:
        raise ValueError(f"window must contain at least 2 differences, got m={m}")
    if tau_c < 1:
        raise ValueError(f"tau_max must be >= 1, got {tau_max}")
    cdef Py_ssize_t T = y_arr.shape[0]
    if T < m_c + 2:
        empty_i = np.empty(0, dtype=np.int64)
        empty_f = np.empty(0, dtype=np.float64)
        return (empty_i, empty_i.copy(), empty_f, empty_f.copy(), empty_f.copy(), empty_f.copy(), 0)

    cdef Py_ssize_t cap = _record_cap(T, m_c, tau_c)
    cdef cnp.ndarray[i64, ndim=1] origin = np.empty(cap, dtype=np.int64)
    cdef cnp.ndarray[i64, ndim=1] tau = np.empty(cap, dtype=np.int64)
    cdef cnp.ndarray[f64, ndim=1] raw = np.empty(cap, dtype=np.float64)
    cdef cnp.ndarray[f64, ndim=1] norm = np.empty(cap, dtype=np.float64)
    cdef cnp.ndarray[f64, ndim=1] mu_out = np.empty(cap, dtype=np.float64)
    cdef cnp.ndarray[f64, ndim=1] k_out = np.empty(cap, dtype=np.float64)
    cdef Py_ssize_t skipped = 0
    cdef Py_ssize_t n
    with nogil:
        n = _hindcast_fill(
            &y_arr[0], T, m_c, tau_c,
            &origin[0], &tau[0], &raw[0], &norm[0], &mu_out[0], &k_out[0],
            &skipped,
        )
    return (
        origin[:n].copy(), tau[:n].copy(), raw[:n].copy(),
        norm[:n].copy(), mu_out[:n].copy(), k_out[:n].copy(), int(skipped),
    )


def corpus_norm_errors(lengths, drifts, theta, innovations, m, tau_max):
    """See ``_fallback.corpus_norm_errors``."""
    cdef cnp.ndarray[i64, ndim=1] len_arr = np.ascontiguousarray(lengths, dtype=np.int64)
    cdef cnp.ndarray[f64, ndim=1] mu_arr = np.ascontiguousarray(drifts, dtype=np.float64)
    cdef cnp.ndarray[f64, ndim=1] v_arr = np.ascontiguousarray(innovations, dtype=np.float64)
    cdef Py_ssize_t J = len_arr.shape[0]
    if mu_arr.shape[0] != J:
        raise ValueError("lengths and drifts must have the same size")
    cdef Py_ssize_t m_c = int(m)
    cdef Py_ssize_t tau_c = int(tau_max)
    if m_c < 2:
        raise ValueError(f"window must contain at least 2 differences, got m={m}")
    if tau_c < 1:
        raise ValueError(f"tau_max must be >= 1, got {tau_max}")
    cdef double theta_c = float(theta)

    cdef Py_ssize_t total_len = 0, cap = 0, max_T = 0, series_cap = 0, c
    cdef Py_ssize_t j, T
    for j in range(J):
        T = len_arr[j]
        total_len += T
        c = _record_cap(T, m_c, tau_c)
        cap += c
        if c > series_cap:
            series_cap = c
        if T > max_T:
            max_T = T
    if v_arr.shape[0] != total_len:
        raise ValueError("innovations length must equal sum(lengths)")
    if cap == 0:
        empty_i = np.empty(0, dtype=np.int64)
        return (empty_i, empty_i.copy(), np.empty(0, dtype=np.float64), 0)

    cdef cnp.ndarray[i64, ndim=1] series_idx = np.empty(cap, dtype=np.int64)
    cdef cnp.ndarray[i64, ndim=1] tau = np.empty(cap, dtype=np.int64)
    cdef cnp.ndarray[f64, ndim=1] norm = np.empty(cap, dtype=np.float64)
    # per-series scratch, overwritten on every iteration
    cdef cnp.ndarray[i64, ndim=1] origin_s = np.empty(max(series_cap, 1), dtype=np.int64)
    cdef cnp.ndarray[f64, ndim=1] raw_s = np.empty(max(series_cap, 1), dtype=np.float64)
    cdef cnp.ndarray[f64, ndim=1] mu_s = np.empty(max(series_cap, 1), dtype=np.float64)
    cdef cnp.ndarray[f64, ndim=1] k_s = np.empty(max(series_cap, 1), dtype=np.float64)
    cdef cnp.ndarray[f64, ndim=1] y_buf = np.empty(max(max_T, 1), dtype=np.float64)

    cdef Py_ssize_t n = 0, written, offset = 0, t
    cdef Py_ssize_t skipped = 0
    cdef double mu_j
    with nogil:
        for j in range(J):
            T = len_arr[j]
            mu_j = mu_arr[j]
            y_buf[0] = 0.0
            for t in range(1, T):
                y_buf[t] = y_buf[t - 1] + (mu_j + v_arr[offset + t]) + theta_c * v_arr[offset + t - 1]
            offset += T
            written = _hindcast_fill(
                &y_buf[0], T, m_c, tau_c,
                &origin_s[0], &tau[n], &raw_s[0], &norm[n],
                &mu_s[0], &k_s[0], &skipped,
            )
            for t in range(written):
                series_idx[n + t] = j
            n += written
    return (series_idx[:n].copy(), tau[:n].copy(), norm[:n].copy(), int(skipped))
