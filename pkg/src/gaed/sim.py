"""Monte-Carlo FER/BER sweeps over BI-AWGN and the brute-force ML oracle.

Every frame draws its noise (then its information word) from a generator
seeded by ``(seed, snr_index, frame_index)``.  Frames are decoded in chunks
of ``chunk_size`` consecutive indices and chunk results are consumed in index
order, so a sweep is reproducible for any worker count.
"""
from __future__ import annotations

import csv
import io
import json
import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Callable, Optional

import numpy as np

from .automorphism import GenAutomorphism, automorphism_powers, load_automorphism
from .bp import DecoderConfig
from .channel import ChannelParams, frame_rng, transmit
from .code import LinearCode, load_code
from .ensemble import GAED, IGAED, MAX_CORRELATION, PathSpec, run_ensemble
from .gf2 import MAX_ENUM_DIM, EnumerationLimitError

log = logging.getLogger(__name__)

CSV_COLUMNS = ("ebn0_db", "frames", "bit_errors", "frame_errors", "fer", "ber", "wall_seconds")
ENSEMBLE, ML = "ensemble", "ml"
RANDOM, ALL_ZERO = "random", "all_zero"


class ConfigError(ValueError):
    pass


# -- ML oracle ------------------------------------------------------------

class MLDecoder:
    """Exhaustive maximum-likelihood decoding for k <= 20."""

    def __init__(self, code: LinearCode, max_cells: int = 1 << 22):
        if code.k > MAX_ENUM_DIM:
            raise EnumerationLimitError(f"k = {code.k} exceeds enumeration cap {MAX_ENUM_DIM}")
        book = code.codebook()
        # lexicographic order so argmax resolves ties to the smallest codeword
        self.codebook = book[np.lexsort(book.T[::-1])]
        self._signs = 1.0 - 2.0 * self.codebook.T.astype(np.float64)  # (n, 2^k)
        self._rows = max(1, max_cells // len(self.codebook))

    def decode(self, llrs) -> np.ndarray:
        llrs = np.asarray(llrs, dtype=np.float64)
        flat = np.atleast_2d(llrs)
        best = np.empty(flat.shape[0], dtype=np.int64)
        for s in range(0, flat.shape[0], self._rows):
            best[s:s + self._rows] = np.argmax(flat[s:s + self._rows] @ self._signs, axis=1)
        out = self.codebook[best]
        return out[0] if llrs.ndim == 1 else out


def bruteforce_ml_decode(code: LinearCode, llrs) -> np.ndarray:
    return MLDecoder(code).decode(llrs)


# -- configuration --------------------------------------------------------

@dataclass(frozen=True)
class PathConfig:
    t_path: Optional[Path]
    exp: int = 1
    mode: str = GAED


@dataclass(frozen=True)
class SimConfig:
    code_path: Path
    ebn0_db: tuple[float, ...]
    paths: tuple[PathConfig, ...] = ()
    include_identity: bool = True
    decoder: DecoderConfig = DecoderConfig()
    decoder_kind: str = ENSEMBLE
    min_frame_errors: int = 400
    max_frames: int = 10**8
    seed: int = 0
    workers: int = 1
    transmit: str = RANDOM
    fallback: str = MAX_CORRELATION
    force: bool = False
    chunk_size: int = 1000
    record_timing: bool = True

    def __post_init__(self):
        if not self.ebn0_db:
            raise ConfigError("ebn0_db grid is empty")
        if self.min_frame_errors < 1:
            raise ConfigError("min_frame_errors must be >= 1")
        if self.max_frames < 1 or self.chunk_size < 1 or self.workers < 1:
            raise ConfigError("max_frames, chunk_size and workers must be >= 1")
        if self.transmit not in (RANDOM, ALL_ZERO):
            raise ConfigError(f"unknown transmit mode {self.transmit!r}")
        if self.decoder_kind not in (ENSEMBLE, ML):
            raise ConfigError(f"unknown decoder kind {self.decoder_kind!r}")
        for p in self.paths:
            if p.mode not in (GAED, IGAED):
                raise ConfigError(f"unknown path mode {p.mode!r}")

    @classmethod
    def from_dict(cls, data: dict, base_dir: Path = Path(".")) -> "SimConfig":
        data = dict(data)
        known = {"code", "automorphism", "mode", "paths", "include_identity", "decoder",
                 "decoder_kind", "ebn0_db", "min_frame_errors", "max_frames", "seed",
                 "workers", "transmit", "fallback", "force", "chunk_size", "record_timing"}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        if "code" not in data:
            raise ConfigError("config needs a 'code' file")

        def resolve(p):
            return None if p is None else (base_dir / p)

        default_t = data.get("automorphism")
        default_mode = data.get("mode", GAED)
        paths = []
        for entry in data.get("paths", []):
            if isinstance(entry, int):
                entry = {"exp": entry}
            t = entry.get("t", default_t)
            if t is None:
                raise ConfigError("path entry without a T file and no top-level 'automorphism'")
            paths.append(PathConfig(resolve(t), int(entry.get("exp", 1)),
                                    entry.get("mode", default_mode)))
        try:
            decoder = DecoderConfig(**data.get("decoder", {}))
        except TypeError as exc:
            raise ConfigError(f"bad decoder section: {exc}") from None
        grid = data.get("ebn0_db", [])
        if isinstance(grid, (int, float)):
            grid = [grid]
        kwargs = {k: data[k] for k in ("include_identity", "decoder_kind", "min_frame_errors",
                                       "max_frames", "seed", "workers", "transmit",
                                       "fallback", "force", "chunk_size", "record_timing")
                  if k in data}
        return cls(code_path=resolve(data["code"]), ebn0_db=tuple(float(g) for g in grid),
                   paths=tuple(paths), decoder=decoder, **kwargs)

    @classmethod
    def load(cls, path) -> "SimConfig":
        path = Path(path)
        try:
            data = json.loads(path.read_text())
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: invalid JSON: {exc}") from None
        return cls.from_dict(data, path.parent)

    def with_overrides(self, **kw) -> "SimConfig":
        return replace(self, **{k: v for k, v in kw.items() if v is not None})


@dataclass(frozen=True)
class SimResultRow:
    ebn0_db: float
    frames: int
    bit_errors: int
    frame_errors: int
    wall_seconds: float
    n: int
    successes: int = field(default=-1, compare=False)

    @property
    def fer(self) -> float:
        return self.frame_errors / self.frames

    @property
    def ber(self) -> float:
        """Bit errors per transmitted code bit."""
        return self.bit_errors / (self.frames * self.n)

    def csv_values(self) -> list:
        return [self.ebn0_db, self.frames, self.bit_errors, self.frame_errors,
                self.fer, self.ber, self.wall_seconds]


# -- simulation -----------------------------------------------------------

class Simulator:
    """Code, decoder and frame generation for one configuration."""

    def __init__(self, cfg: SimConfig):
        self.cfg = cfg
        self.code = load_code(cfg.code_path)
        if cfg.decoder_kind == ML:
            self._ml = MLDecoder(self.code)
            self.paths = []
        else:
            self._ml = None
            self.paths = self._build_paths()

    def _build_paths(self) -> list[PathSpec]:
        cfg, code = self.cfg, self.code
        paths = [PathSpec.build(code, None, cfg=cfg.decoder)] if cfg.include_identity else []
        cache: dict[Path, GenAutomorphism] = {}
        for p in cfg.paths:
            if p.t_path not in cache:
                t = load_automorphism(p.t_path, code, force=cfg.force)
                cache[p.t_path] = t
            aut = automorphism_powers(cache[p.t_path], [p.exp])[0]
            paths.append(PathSpec.build(code, aut, p.mode, cfg.decoder))
        if not paths:
            raise ConfigError("no decoding paths configured")
        return paths

    def decode(self, llrs: np.ndarray) -> np.ndarray:
        if self._ml is not None:
            return self._ml.decode(llrs)
        return run_ensemble(llrs, self.paths, self.cfg.fallback).chosen

    def frames(self, snr_index: int, start: int, stop: int) -> tuple[np.ndarray, np.ndarray]:
        """Transmitted codewords and standard-normal noise for frames [start, stop)."""
        n, k = self.code.n, self.code.k
        noise = np.empty((stop - start, n))
        info = np.zeros((stop - start, k), dtype=np.uint8)
        for row, f in enumerate(range(start, stop)):
            rng = frame_rng(self.cfg.seed, snr_index, f)
            noise[row] = rng.standard_normal(n)
            if self.cfg.transmit == RANDOM:
                info[row] = rng.integers(0, 2, k, dtype=np.uint8)
        return self.code.encode(info), noise

    def simulate_chunk(self, snr_index: int, start: int, stop: int):
        """Per-frame (frame error flag, bit error count)."""
        params = ChannelParams(self.cfg.ebn0_db[snr_index], self.code.rate)
        x, noise = self.frames(snr_index, start, stop)
        _, llrs = transmit(x, params, noise)
        est = self.decode(llrs)
        bit_err = (est != x).sum(axis=1)
        return bit_err > 0, bit_err


_WORKER: Optional[Simulator] = None


def _init_worker(cfg: SimConfig):
    global _WORKER
    _WORKER = Simulator(cfg)


def _run_chunk(args):
    return _WORKER.simulate_chunk(*args)


def _chunks(cfg: SimConfig, snr_index: int):
    for start in range(0, cfg.max_frames, cfg.chunk_size):
        yield snr_index, start, min(start + cfg.chunk_size, cfg.max_frames)


def _ordered_results(cfg, snr_index, sim, pool):
    """Chunk results in index order; the pool runs a bounded window ahead."""
    if pool is None:
        for args in _chunks(cfg, snr_index):
            yield sim.simulate_chunk(*args)
        return
    pending = []
    source = _chunks(cfg, snr_index)
    window = 2 * cfg.workers
    try:
        for args in source:
            pending.append(pool.submit(_run_chunk, args))
            if len(pending) >= window:
                yield pending.pop(0).result()
        while pending:
            yield pending.pop(0).result()
    finally:
        for fut in pending:
            fut.cancel()


def run_sweep(cfg: SimConfig, progress: Optional[Callable[[SimResultRow], None]] = None
              ) -> list[SimResultRow]:
    """Simulate each grid point until ``min_frame_errors`` or ``max_frames``."""
    sim = Simulator(cfg)
    pool = None
    if cfg.workers > 1:
        pool = ProcessPoolExecutor(cfg.workers, initializer=_init_worker, initargs=(cfg,))
    rows = []
    try:
        for snr_index, ebn0 in enumerate(cfg.ebn0_db):
            t0 = time.perf_counter()
            frames = bit_errors = frame_errors = successes = 0
            results = _ordered_results(cfg, snr_index, sim, pool)
            for fe, be in results:
                cum = frame_errors + np.cumsum(fe)
                hit = np.flatnonzero(cum >= cfg.min_frame_errors)
                take = int(hit[0]) + 1 if hit.size else len(fe)
                fe, be = fe[:take], be[:take]
                frames += take
                frame_errors += int(fe.sum())
                bit_errors += int(be.sum())
                successes += int((~fe).sum())
                if hit.size:
                    break
            results.close()
            elapsed = time.perf_counter() - t0 if cfg.record_timing else 0.0
            row = SimResultRow(ebn0, frames, bit_errors, frame_errors, elapsed, sim.code.n,
                               successes)
            log.info("Eb/N0 %.2f dB: %d frames, %d frame errors, FER %.3e",
                     ebn0, frames, frame_errors, row.fer)
            rows.append(row)
            if progress is not None:
                progress(row)
    finally:
        if pool is not None:
            pool.shutdown(cancel_futures=True)
    return rows


def format_csv(rows: list[SimResultRow]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for row in rows:
        writer.writerow([repr(float(v)) if isinstance(v, float) else int(v)
                         for v in row.csv_values()])
    return buf.getvalue()


def write_csv(rows: list[SimResultRow], path) -> None:
    Path(path).write_text(format_csv(rows))


def read_csv(path) -> dict[str, np.ndarray]:
    with open(path, newline="") as fh:
        records = list(csv.DictReader(fh))
    return {col: np.array([float(r[col]) for r in records]) for col in CSV_COLUMNS}
