"""Hot detection kernels: numba-jitted loops with a pure-numpy fallback.

The per-subcarrier ML searches dominate simulation runtime (up to 256
codewords x 256 subcarriers per OFDM symbol).  When numba is importable the
jitted loops are used; setting the environment variable SCCKM_DISABLE_NUMBA=1
(or running without numba installed) selects the vectorized numpy path
instead.  Both paths implement identical argmin semantics: ties resolve to
the lowest candidate index.
"""

from __future__ import annotations

import os

import numpy as np

try:
    from numba import njit
    HAS_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba
    HAS_NUMBA = False

    def njit(*args, **kwargs):
        def wrap(func):
            return func
        return wrap

USE_NUMBA = HAS_NUMBA and os.environ.get("SCCKM_DISABLE_NUMBA", "0") != "1"


def _scck_detect_np(z, codewords):
    d2 = np.sum(np.abs(z[:, None, :] - codewords[None, :, :]) ** 2, axis=2)
    idx = np.argmin(d2, axis=1)
    return idx, d2[np.arange(len(idx)), idx]


@njit(cache=True)
def _scck_detect_nb(z, codewords):  # pragma: no cover - jitted
    n_sub, n = z.shape
    count = codewords.shape[0]
    idx = np.empty(n_sub, dtype=np.int64)
    dmin = np.empty(n_sub, dtype=np.float64)
    for k in range(n_sub):
        best = 0
        best_d = np.inf
        for c in range(count):
            d = 0.0
            for j in range(n):
                diff = z[k, j] - codewords[c, j]
                d += diff.real * diff.real + diff.imag * diff.imag
            if d < best_d:
                best_d = d
                best = c
        idx[k] = best
        dmin[k] = best_d
    return idx, dmin


def scck_detect(z: np.ndarray, codewords: np.ndarray):
    """Per-row argmin squared distance against a codeword table.

    z is (n_sub, n), codewords is (L, n).  Returns (indices, min squared
    distances), each of length n_sub.
    """
    z = np.ascontiguousarray(z, dtype=np.complex128)
    codewords = np.ascontiguousarray(codewords, dtype=np.complex128)
    if USE_NUMBA:
        return _scck_detect_nb(z, codewords)
    return _scck_detect_np(z, codewords)


def _sm_detect_np(received, hk, points):
    cand = hk[:, :, :, None] * points[None, None, None, :]
    diff = received[:, :, None, None] - cand
    d2 = np.sum(np.abs(diff) ** 2, axis=1)  # (n_sub, n_tx, ncp)
    n_sub, n_tx, ncp = d2.shape
    flat = d2.reshape(n_sub, n_tx * ncp)
    best = np.argmin(flat, axis=1)  # antenna-major, so ties prefer low antenna
    return best // ncp, best % ncp, flat[np.arange(n_sub), best]


@njit(cache=True)
def _sm_detect_nb(received, hk, points):  # pragma: no cover - jitted
    n_sub, n_rx = received.shape
    n_tx = hk.shape[2]
    ncp = points.shape[0]
    ant = np.empty(n_sub, dtype=np.int64)
    sym = np.empty(n_sub, dtype=np.int64)
    dmin = np.empty(n_sub, dtype=np.float64)
    for k in range(n_sub):
        best_a = 0
        best_s = 0
        best_d = np.inf
        for a in range(n_tx):
            for s in range(ncp):
                d = 0.0
                for m in range(n_rx):
                    diff = received[k, m] - hk[k, m, a] * points[s]
                    d += diff.real * diff.real + diff.imag * diff.imag
                if d < best_d:
                    best_d = d
                    best_a = a
                    best_s = s
        ant[k] = best_a
        sym[k] = best_s
        dmin[k] = best_d
    return ant, sym, dmin


def sm_detect(received: np.ndarray, hk: np.ndarray, points: np.ndarray):
    """Joint argmin of ||r - h_a * s||^2 over antenna a and point s.

    received is (n_sub, n_rx), hk is (n_sub, n_rx, n_tx), points is the
    constellation.  Ties resolve to the lower antenna, then the lower point
    label.  Returns (antenna indices, point indices, min squared distances).
    """
    received = np.ascontiguousarray(received, dtype=np.complex128)
    hk = np.ascontiguousarray(hk, dtype=np.complex128)
    points = np.ascontiguousarray(points, dtype=np.complex128)
    if USE_NUMBA:
        return _sm_detect_nb(received, hk, points)
    return _sm_detect_np(received, hk, points)


def _sm_detect_eq_np(z, points):
    dr = z.real[:, :, None] - points.real[None, None, :]
    di = z.imag[:, :, None] - points.imag[None, None, :]
    zp = z.real * z.real + z.imag * z.imag
    metric = (dr * dr + di * di) - zp[:, :, None]  # (n_sub, n_tx, ncp)
    n_sub, n_tx, ncp = metric.shape
    flat = metric.reshape(n_sub, n_tx * ncp)
    best = np.argmin(flat, axis=1)
    return best // ncp, best % ncp, flat[np.arange(n_sub), best]


@njit(cache=True)
def _sm_detect_eq_nb(z, points):  # pragma: no cover - jitted
    n_sub, n_tx = z.shape
    ncp = points.shape[0]
    ant = np.empty(n_sub, dtype=np.int64)
    sym = np.empty(n_sub, dtype=np.int64)
    mmin = np.empty(n_sub, dtype=np.float64)
    for k in range(n_sub):
        best_a = 0
        best_s = 0
        best_m = np.inf
        for a in range(n_tx):
            zr = z[k, a].real
            zi = z[k, a].imag
            zp = zr * zr + zi * zi
            for s in range(ncp):
                dr = zr - points[s].real
                di = zi - points[s].imag
                m = (dr * dr + di * di) - zp
                if m < best_m:
                    best_m = m
                    best_a = a
                    best_s = s
        ant[k] = best_a
        sym[k] = best_s
        mmin[k] = best_m
    return ant, sym, mmin


def sm_detect_equalized(z: np.ndarray, points: np.ndarray):
    """Joint argmin of ||z - s * e_a||^2 over antenna a and point s.

    Operates on the equalized vector z of shape (n_sub, n_tx): the hypothesis
    for antenna a and point s is s on stream a and zero elsewhere, so the
    distance reduces to |z_a - s|^2 - |z_a|^2 plus a hypothesis-independent
    offset.  Returns (antenna indices, point indices, min relative metrics);
    the metric can be negative.  Ties resolve antenna-major like sm_detect.
    """
    z = np.ascontiguousarray(z, dtype=np.complex128)
    points = np.ascontiguousarray(points, dtype=np.complex128)
    if USE_NUMBA:
        return _sm_detect_eq_nb(z, points)
    return _sm_detect_eq_np(z, points)
