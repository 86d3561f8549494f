"""Monte Carlo BER sweep engine.

One experiment is a SimConfig: a scheme, a MIMO size, an Eb/N0 list, frame
counts and a master seed.  Every (frame, symbol) pair owns its own RNG
substream derived from the master seed by counter-based spawning, so error
counts do not depend on scheduling or worker count.  Frames accumulate in
index order and the early-stop check runs at frame boundaries, which keeps
CSV output byte-identical across thread counts.
"""

from __future__ import annotations

import math
from collections import deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .cck import Codebook, cck2_codebook, cck4_reference_codebook, cck8_codebook
from .channel import apply_channel, freq_response, generate_channel
from .modem import (CONSTELLATIONS, ml_detect_scck_grid,
                    ml_detect_sm_equalized_grid, scck_map, sm_map,
                    zf_equalize_grid)
from .ofdm import OfdmParams, ofdm_demodulate, ofdm_modulate

_SCCK_CODEBOOKS = {
    "scck2": cck2_codebook,
    "scck4": cck4_reference_codebook,
    "scck8": cck8_codebook,
}
_SM_CONSTELLATION = {"sm-bpsk": "bpsk", "sm-4qam": "4qam"}
SCHEMES = tuple(_SCCK_CODEBOOKS) + tuple(_SM_CONSTELLATION)


@dataclass(frozen=True)
class SimConfig:
    scheme: str
    n_tx: int
    n_rx: int
    ebn0_db: tuple
    frames: int
    seed: int
    symbols_per_frame: int = 20
    ofdm: OfdmParams = field(default_factory=OfdmParams)
    taps: int = 2
    max_bit_errors: int | None = None

    def __post_init__(self):
        if self.scheme not in SCHEMES:
            raise ValueError(f"unknown scheme {self.scheme!r}, expected one of {SCHEMES}")
        if self.scheme in _SCCK_CODEBOOKS:
            required = int(self.scheme[-1])
            if self.n_tx != required:
                raise ValueError(
                    f"{self.scheme} requires {required} transmit antennas, got {self.n_tx}"
                )
        else:
            if self.n_tx < 2 or self.n_tx & (self.n_tx - 1):
                raise ValueError(
                    f"transmit antenna count must be a power of two >= 2, got {self.n_tx}"
                )
        if self.n_rx < self.n_tx:
            raise ValueError(
                f"zero forcing needs n_rx >= n_tx, got {self.n_rx} < {self.n_tx}"
            )
        if not self.ebn0_db:
            raise ValueError("ebn0 list must be non-empty")
        for e in self.ebn0_db:
            value = float(e)
            if math.isnan(value) or (math.isinf(value) and value < 0):
                raise ValueError(f"ebn0 values must be finite or +inf, got {value}")
        if self.frames < 1:
            raise ValueError(f"frame count must be >= 1, got {self.frames}")
        if self.symbols_per_frame < 1:
            raise ValueError(f"symbols per frame must be >= 1, got {self.symbols_per_frame}")
        if self.taps < 1:
            raise ValueError(f"tap count must be >= 1, got {self.taps}")
        if self.taps > self.ofdm.cp_len + 1:
            raise ValueError(
                f"{self.taps} taps exceed cyclic prefix length {self.ofdm.cp_len} + 1"
            )
        if not 0 <= self.seed < 2 ** 64:
            raise ValueError(f"seed must be a 64-bit unsigned integer, got {self.seed}")
        if self.max_bit_errors is not None and self.max_bit_errors < 1:
            raise ValueError(f"max bit errors must be >= 1, got {self.max_bit_errors}")
        object.__setattr__(self, "ebn0_db", tuple(float(e) for e in self.ebn0_db))

    @property
    def bits_per_subcarrier(self) -> int:
        if self.scheme in _SCCK_CODEBOOKS:
            return int(self.scheme[-1])
        ant_bits = self.n_tx.bit_length() - 1
        sym_bits = len(CONSTELLATIONS[_SM_CONSTELLATION[self.scheme]]).bit_length() - 1
        return ant_bits + sym_bits


class BerPoint(NamedTuple):
    ebn0_db: float
    bits_simulated: int
    bit_errors: int
    ber: float


class BerCurve(NamedTuple):
    config: SimConfig
    points: tuple


def canonical_config_string(config: SimConfig) -> str:
    """Fixed-order key=value rendering of the experiment (scheduling excluded)."""
    ebn0 = ",".join(repr(e) for e in config.ebn0_db)
    mbe = "none" if config.max_bit_errors is None else str(config.max_bit_errors)
    return (
        f"scheme={config.scheme} ntx={config.n_tx} nrx={config.n_rx} "
        f"ebn0={ebn0} frames={config.frames} "
        f"symbols_per_frame={config.symbols_per_frame} "
        f"nsub={config.ofdm.n_sub} cp={config.ofdm.cp_len} "
        f"taps={config.taps} seed={config.seed} max_bit_errors={mbe}"
    )


def noise_variance(config: SimConfig, ebn0_db: float) -> float:
    """N0 = E_s,total / (eta * 10^(EbN0/10)); E_s,total = 1 per subcarrier."""
    if math.isinf(ebn0_db) and ebn0_db > 0:
        return 0.0
    return 1.0 / (config.bits_per_subcarrier * 10.0 ** (ebn0_db / 10.0))


def _symbol_rng(seed: int, frame: int, symbol: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(frame, symbol)))


def _run_frame(config: SimConfig, mapper, frame: int, n0: float) -> int:
    """Simulate one frame and return its bit error count."""
    params = config.ofdm
    m = config.bits_per_subcarrier
    errors = 0
    for symbol in range(config.symbols_per_frame):
        rng = _symbol_rng(config.seed, frame, symbol)
        bits = rng.integers(0, 2, size=(m, params.n_sub), dtype=np.uint8)
        channel = generate_channel(config.n_tx, config.n_rx, config.taps, rng)
        grid = mapper.map(bits)
        tx = ofdm_modulate(grid, params)
        rx = apply_channel(tx, channel, n0, rng)
        received = ofdm_demodulate(rx[:, : params.n_sub + params.cp_len], params).T
        hk = freq_response(channel, params)
        decoded = mapper.detect(received, hk)
        errors += int(np.count_nonzero(decoded != bits))
    return errors


class _ScckMapper:
    def __init__(self, config: SimConfig):
        self.codebook: Codebook = _SCCK_CODEBOOKS[config.scheme]()

    def map(self, bits):
        return scck_map(bits, self.codebook)

    def detect(self, received, hk):
        equalized = zf_equalize_grid(received, hk)
        return ml_detect_scck_grid(equalized, self.codebook).bits


class _SmMapper:
    def __init__(self, config: SimConfig):
        self.n_tx = config.n_tx
        self.constellation = _SM_CONSTELLATION[config.scheme]

    def map(self, bits):
        return sm_map(bits, self.n_tx, self.constellation)

    def detect(self, received, hk):
        equalized = zf_equalize_grid(received, hk)
        return ml_detect_sm_equalized_grid(
            equalized, self.n_tx, self.constellation).bits


def _mapper(config: SimConfig):
    if config.scheme in _SCCK_CODEBOOKS:
        return _ScckMapper(config)
    return _SmMapper(config)


def run_point(config: SimConfig, ebn0_db: float, workers: int = 1) -> BerPoint:
    """Simulate one Eb/N0 point, early-stopping at max_bit_errors if set."""
    n0 = noise_variance(config, ebn0_db)
    mapper = _mapper(config)
    limit = config.max_bit_errors
    errors = 0
    frames_run = 0
    if workers <= 1:
        for frame in range(config.frames):
            errors += _run_frame(config, mapper, frame, n0)
            frames_run += 1
            if limit is not None and errors >= limit:
                break
    else:
        # frames may finish out of order, but results are consumed strictly in
        # frame order so worker count cannot change the counts
        with ThreadPoolExecutor(max_workers=workers) as pool:
            window = 4 * workers
            pending: deque = deque()
            submitted = 0
            while submitted < config.frames or pending:
                while submitted < config.frames and len(pending) < window:
                    pending.append(
                        pool.submit(_run_frame, config, mapper, submitted, n0)
                    )
                    submitted += 1
                errors += pending.popleft().result()
                frames_run += 1
                if limit is not None and errors >= limit:
                    for fut in pending:
                        fut.cancel()
                    break
    bits = frames_run * config.symbols_per_frame * config.ofdm.n_sub \
        * config.bits_per_subcarrier
    return BerPoint(ebn0_db=float(ebn0_db), bits_simulated=bits,
                    bit_errors=errors, ber=errors / bits)


def run_sweep(config: SimConfig, workers: int = 1) -> BerCurve:
    """Run every configured Eb/N0 point, ordered ascending."""
    points = tuple(
        run_point(config, e, workers=workers) for e in sorted(config.ebn0_db)
    )
    return BerCurve(config=config, points=points)


def emit_csv(curve: BerCurve, destination) -> None:
    """Write a BER curve as CSV with config and seed comment lines."""
    close = False
    if isinstance(destination, (str, bytes)) or hasattr(destination, "__fspath__"):
        fh = open(destination, "w", encoding="utf-8", newline="")
        close = True
    else:
        fh = destination
    try:
        fh.write(f"# config: {canonical_config_string(curve.config)}\n")
        fh.write(f"# seed: {curve.config.seed}\n")
        fh.write("ebn0_db,bits_simulated,bit_errors,ber\n")
        for pt in curve.points:
            fh.write(f"{pt.ebn0_db!r},{pt.bits_simulated},{pt.bit_errors},{pt.ber!r}\n")
    finally:
        if close:
            fh.close()


def read_csv(source):
    """Parse emit_csv output: returns (config string, seed, list of BerPoint)."""
    close = False
    if isinstance(source, (str, bytes)) or hasattr(source, "__fspath__"):
        fh = open(source, "r", encoding="utf-8")
        close = True
    else:
        fh = source
    try:
        config_str = None
        seed = None
        points = []
        for line in fh:
            line = line.strip()
            if not line:
                continue
            if line.startswith("# config:"):
                config_str = line[len("# config:"):].strip()
            elif line.startswith("# seed:"):
                seed = int(line[len("# seed:"):].strip())
            elif line.startswith("#") or line.startswith("ebn0_db"):
                continue
            else:
                e, b, n, r = line.split(",")
                points.append(BerPoint(float(e), int(b), int(n), float(r)))
        return config_str, seed, points
    finally:
        if close:
            fh.close()
