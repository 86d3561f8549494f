"""Transmit mapping, zero-forcing equalization and ML detection per subcarrier.

SCCKM places one codeword per subcarrier with its N chips spread across N
transmit antennas, scaled by 1/sqrt(N_t) so total transmit energy per
subcarrier is 1.  SM activates a single antenna per subcarrier: the leading
log2(N_t) bits pick the antenna (natural binary), the rest pick a unit-energy
constellation point (Gray labeled).  Detection is exhaustive minimum squared
Euclidean distance with ties resolved to the lowest index.
"""

from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np

from . import kernels
from .cck import Codebook, pack_bits, unpack_bits

BPSK = np.array([1.0, -1.0], dtype=np.complex128)
# Gray labeling: first bit flips the real sign, second bit the imaginary sign
QAM4 = np.array([1 + 1j, 1 - 1j, -1 + 1j, -1 - 1j], dtype=np.complex128) / math.sqrt(2)

CONSTELLATIONS = {"bpsk": BPSK, "4qam": QAM4}

ZF_RCOND = 1e-10


class ScckDetection(NamedTuple):
    indices: np.ndarray
    bits: np.ndarray
    distances: np.ndarray


class SmDetection(NamedTuple):
    antennas: np.ndarray
    labels: np.ndarray
    bits: np.ndarray
    distances: np.ndarray


def _check_bits(bits: np.ndarray, rows: int) -> np.ndarray:
    bits = np.asarray(bits)
    if bits.ndim != 2 or bits.shape[0] != rows:
        raise ValueError(f"bit matrix must have {rows} rows, got shape {bits.shape}")
    if not np.isin(bits, (0, 1)).all():
        raise ValueError("bit matrix entries must be 0 or 1")
    return bits


def _constellation(name) -> np.ndarray:
    if isinstance(name, str):
        try:
            return CONSTELLATIONS[name.lower()]
        except KeyError:
            raise ValueError(f"unknown constellation {name!r}") from None
    return np.asarray(name, dtype=np.complex128)


def scck_map(bits: np.ndarray, codebook: Codebook) -> np.ndarray:
    """Map an (m, n_sub) bit matrix to an (N_t, n_sub) symbol grid."""
    bits = _check_bits(bits, codebook.bits_per_codeword)
    indices = pack_bits(bits)
    return codebook.entries[indices].T / math.sqrt(codebook.length_n)


def sm_map(bits: np.ndarray, n_tx: int, constellation) -> np.ndarray:
    """Map bits to a single active antenna plus constellation point per column."""
    n_tx = int(n_tx)
    if n_tx < 2 or n_tx & (n_tx - 1):
        raise ValueError(f"transmit antenna count must be a power of two >= 2, got {n_tx}")
    points = _constellation(constellation)
    ant_bits = n_tx.bit_length() - 1
    sym_bits = len(points).bit_length() - 1
    bits = _check_bits(bits, ant_bits + sym_bits)
    antennas = pack_bits(bits[:ant_bits])
    labels = pack_bits(bits[ant_bits:])
    n_sub = bits.shape[1]
    grid = np.zeros((n_tx, n_sub), dtype=np.complex128)
    grid[antennas, np.arange(n_sub)] = points[labels]
    return grid


def zf_equalize(received: np.ndarray, h_k: np.ndarray) -> np.ndarray:
    """Least-squares channel inversion for one subcarrier.

    Uses the SVD-based pseudo-inverse with relative cutoff ZF_RCOND; a
    rank-deficient matrix is truncated rather than rejected, so the caller
    always gets the least-squares solution.
    """
    h_k = np.asarray(h_k)
    if h_k.shape[0] < h_k.shape[1]:
        raise ValueError(f"need n_rx >= n_tx, got channel shape {h_k.shape}")
    return np.linalg.pinv(h_k, rcond=ZF_RCOND) @ np.asarray(received)


def zf_equalize_grid(received: np.ndarray, hk: np.ndarray) -> np.ndarray:
    """Batched ZF: received (n_sub, n_rx), hk (n_sub, n_rx, n_tx) -> (n_sub, n_tx)."""
    if hk.shape[1] < hk.shape[2]:
        raise ValueError(f"need n_rx >= n_tx, got channel shape {hk.shape[1:]}")
    pinv = np.linalg.pinv(hk, rcond=ZF_RCOND)  # (n_sub, n_tx, n_rx)
    return np.einsum("kij,kj->ki", pinv, received)


def is_degenerate(h_k: np.ndarray) -> bool:
    """True when the smallest singular value falls under ZF_RCOND * largest."""
    sv = np.linalg.svd(np.asarray(h_k), compute_uv=False)
    return bool(sv[-1] < ZF_RCOND * sv[0])


def ml_detect_scck_grid(equalized: np.ndarray, codebook: Codebook) -> ScckDetection:
    """Closest power-normalized codeword per row of an (n_sub, N_t) grid."""
    normalized = codebook.entries / math.sqrt(codebook.length_n)
    indices, dists = kernels.scck_detect(equalized, normalized)
    bits = unpack_bits(indices, codebook.bits_per_codeword)
    return ScckDetection(indices=indices, bits=bits, distances=dists)


def ml_detect_scck(equalized: np.ndarray, codebook: Codebook):
    """Single-subcarrier ML detection: returns (codeword index, bits)."""
    equalized = np.asarray(equalized)
    if equalized.shape != (codebook.length_n,):
        raise ValueError(
            f"equalized vector must have length {codebook.length_n}, "
            f"got shape {equalized.shape}"
        )
    det = ml_detect_scck_grid(equalized[None, :], codebook)
    return int(det.indices[0]), det.bits[:, 0]


def ml_detect_sm_grid(received: np.ndarray, hk: np.ndarray, n_tx: int,
                      constellation) -> SmDetection:
    """Joint ML over (antenna, point) per subcarrier.

    received is (n_sub, n_rx), hk is (n_sub, n_rx, n_tx).  Decoded bits stack
    the antenna index (natural binary) over the point label.
    """
    points = _constellation(constellation)
    ant, labels, dists = kernels.sm_detect(received, hk, points)
    ant_bits = int(n_tx).bit_length() - 1
    sym_bits = len(points).bit_length() - 1
    bits = np.vstack([unpack_bits(ant, ant_bits), unpack_bits(labels, sym_bits)])
    return SmDetection(antennas=ant, labels=labels, bits=bits, distances=dists)


def ml_detect_sm(received: np.ndarray, h_k: np.ndarray, n_tx: int, constellation):
    """Single-subcarrier SM detection: returns (antenna, point, bits)."""
    received = np.asarray(received)
    det = ml_detect_sm_grid(received[None, :], h_k[None, :, :], n_tx, constellation)
    point = _constellation(constellation)[det.labels[0]]
    return int(det.antennas[0]), point, det.bits[:, 0]


def ml_detect_sm_equalized_grid(equalized: np.ndarray, n_tx: int,
                                constellation) -> SmDetection:
    """SM detection on the equalized grid: argmin ||z - s*e_a||^2.

    equalized is (n_sub, n_tx), one zero-forced stream per transmit antenna.
    The hypothesis for (antenna a, point s) puts s on stream a and zero on the
    rest, so only |z_a - s|^2 - |z_a|^2 varies across hypotheses.  Reported
    distances are the full squared distances ||z - s*e_a||^2.  The BER harness
    uses this detector so both schemes share one equalize-then-detect chain.
    """
    equalized = np.asarray(equalized)
    if equalized.ndim != 2 or equalized.shape[1] != n_tx:
        raise ValueError(
            f"equalized grid must be (n_sub, {n_tx}), got {equalized.shape}")
    points = _constellation(constellation)
    ant, labels, metric = kernels.sm_detect_equalized(equalized, points)
    offset = np.sum(np.abs(equalized) ** 2, axis=1)
    ant_bits = int(n_tx).bit_length() - 1
    sym_bits = len(points).bit_length() - 1
    bits = np.vstack([unpack_bits(ant, ant_bits), unpack_bits(labels, sym_bits)])
    return SmDetection(antennas=ant, labels=labels, bits=bits,
                       distances=metric + offset)
