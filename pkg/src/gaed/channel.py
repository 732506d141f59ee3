"""BPSK over BI-AWGN with per-frame reproducible noise."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


def ebn0_to_sigma(ebn0_db: float, rate: float) -> float:
    """Noise standard deviation for unit-energy BPSK at the given Eb/N0."""
    if not 0 < rate <= 1:
        raise ValueError(f"rate must lie in (0, 1], got {rate}")
    return math.sqrt(1.0 / (2.0 * rate * 10.0 ** (ebn0_db / 10.0)))


@dataclass(frozen=True)
class ChannelParams:
    ebn0_db: float
    rate: float

    def __post_init__(self):
        if not 0 < self.rate <= 1:
            raise ValueError(f"rate must lie in (0, 1], got {self.rate}")

    @property
    def sigma(self) -> float:
        return ebn0_to_sigma(self.ebn0_db, self.rate)


def frame_rng(seed: int, snr_index: int, frame_index: int) -> np.random.Generator:
    return np.random.default_rng([seed, snr_index, frame_index])


def modulate(bits) -> np.ndarray:
    return 1.0 - 2.0 * np.asarray(bits, dtype=np.float64)


def transmit(codewords, params: ChannelParams, noise) -> tuple[np.ndarray, np.ndarray]:
    """Received samples and LLRs for given standard-normal ``noise`` draws."""
    sigma = params.sigma
    received = modulate(codewords) + sigma * np.asarray(noise)
    return received, 2.0 * received / sigma**2


def transmit_frame(codeword, params: ChannelParams, rng: np.random.Generator):
    codeword = np.asarray(getattr(codeword, "array", codeword))
    return transmit(codeword, params, rng.standard_normal(codeword.shape[-1]))
