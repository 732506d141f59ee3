"""Flooding-schedule belief propagation: sum-product and normalized min-sum.

Decoding is vectorised over a batch of frames.  Messages live on edges in
CN-major order; each node gathers its edges through a padded slot table whose
padding points at a sentinel column, so node updates are plain reductions
along the last axis and every frame is processed independently of the others.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .code import TannerGraph, tanner_from_pcm
from .gf2 import BitMatrix

SUM_PRODUCT = "sum_product"
MIN_SUM = "normalized_min_sum"
DEFAULT_CLAMP = 30.0


@dataclass(frozen=True)
class DecoderConfig:
    variant: str = MIN_SUM
    alpha: float = 0.75
    max_iters: int = 30
    llr_clamp: float = DEFAULT_CLAMP
    early_stop: bool = True

    def __post_init__(self):
        if self.variant not in (SUM_PRODUCT, MIN_SUM):
            raise ValueError(f"unknown decoder variant {self.variant!r}")
        if not 0 < self.alpha <= 1:
            raise ValueError("alpha must lie in (0, 1]")
        if self.max_iters < 1:
            raise ValueError("max_iters must be >= 1")
        if not self.llr_clamp > 0:
            raise ValueError("llr_clamp must be positive")


@dataclass(frozen=True)
class DecodeResult:
    """Decoder output; arrays carry a leading batch axis for batched input."""

    hard_bits: np.ndarray
    converged: np.ndarray
    iters_used: np.ndarray
    posterior_llrs: np.ndarray


def boxplus(a, b, clamp: float = DEFAULT_CLAMP):
    """``2 atanh(tanh(a/2) tanh(b/2))`` in a form that stays finite for large inputs."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    out = (np.sign(a) * np.sign(b) * np.minimum(np.abs(a), np.abs(b))
           + np.log1p(np.exp(-np.abs(a + b))) - np.log1p(np.exp(-np.abs(a - b))))
    return np.clip(out, -clamp, clamp)


def boxplus_fold(values, clamp: float = DEFAULT_CLAMP):
    """Left fold of :func:`boxplus` over the first axis of ``values``."""
    values = list(values) if not isinstance(values, np.ndarray) else values
    if len(values) == 0:
        raise ValueError("box-plus over an empty set")
    acc = np.clip(np.asarray(values[0], dtype=np.float64), -clamp, clamp)
    for v in values[1:]:
        acc = boxplus(acc, v, clamp)
    return float(acc) if acc.ndim == 0 else acc


def _phi(x):
    # -log(tanh(x/2)); self-inverse on [0, inf], phi(0) = inf, phi(inf) = 0
    with np.errstate(divide="ignore", over="ignore"):
        return np.log1p(2.0 / np.expm1(x))


def _exclusive_sums(x):
    """Sum over all other entries along the last axis, without subtraction."""
    zero = np.zeros(x.shape[:-1] + (1,), dtype=x.dtype)
    prefix = np.concatenate([zero, np.cumsum(x[..., :-1], axis=-1)], axis=-1)
    suffix = np.concatenate([np.cumsum(x[..., :0:-1], axis=-1)[..., ::-1], zero], axis=-1)
    return prefix + suffix


def _slot_table(neighbors, edge_of, sentinel):
    width = max((len(nb) for nb in neighbors), default=0)
    table = np.full((len(neighbors), max(width, 1)), sentinel, dtype=np.int64)
    for node, nb in enumerate(neighbors):
        for s, other in enumerate(nb):
            table[node, s] = edge_of(node, other)
    return table


Observer = Callable[[int, np.ndarray, np.ndarray], None]


class BeliefPropagationDecoder:
    """Reusable decoder bound to one Tanner graph and configuration.

    Instances hold per-call scratch state only and are not thread-safe; build
    one per worker.
    """

    def __init__(self, graph, cfg: DecoderConfig = DecoderConfig()):
        if isinstance(graph, BitMatrix):
            graph = tanner_from_pcm(graph)
        self.graph: TannerGraph = graph
        self.cfg = cfg
        E = graph.edge_count
        self._E = E
        self._cn_slots = _slot_table(graph.cn_neighbors, lambda c, v: graph.edge_index[(c, v)], E)
        self._vn_slots = _slot_table(graph.vn_neighbors, lambda v, c: graph.edge_index[(c, v)], E)
        self._cn_real = (self._cn_slots != E).ravel()
        self._edge_vn = np.array([v for _, v in graph.edges], dtype=np.int64)
        self._ht = graph.to_pcm().array.T.copy() if graph.cn_count else None

    def syndrome_weight(self, hard: np.ndarray) -> np.ndarray:
        if self._ht is None:
            return np.zeros(hard.shape[:-1], dtype=np.int64)
        return ((hard @ self._ht) & 1).sum(axis=-1)

    def _check_update(self, v2c: np.ndarray) -> np.ndarray:
        cfg = self.cfg
        g = v2c[:, self._cn_slots]  # (B, C, dc); sentinel = +inf
        neg = g < 0
        flip = (neg.sum(axis=-1, keepdims=True) & 1).astype(bool) ^ neg
        mag = np.abs(g)
        if cfg.variant == MIN_SUM:
            if mag.shape[-1] >= 2:
                two = np.partition(mag, 1, axis=-1)
                min1, min2 = two[..., :1], two[..., 1:2]
            else:
                min1 = mag
                min2 = np.full_like(mag, np.inf)
            first = np.argmin(mag, axis=-1)[..., None] == np.arange(mag.shape[-1])
            ext = cfg.alpha * np.where(first, min2, min1)
        else:
            ext = _phi(_exclusive_sums(_phi(mag)))
        ext = np.minimum(ext, cfg.llr_clamp)
        out = np.where(flip, -ext, ext)
        return out.reshape(out.shape[0], -1)[:, self._cn_real]

    def decode(self, llrs, observer: Optional[Observer] = None) -> DecodeResult:
        """Decode one frame (1-D) or a batch of frames (2-D)."""
        llrs = np.asarray(llrs, dtype=np.float64)
        single = llrs.ndim == 1
        ch_all = np.atleast_2d(llrs)
        V = self.graph.vn_count
        if ch_all.shape[-1] != V:
            raise ValueError(f"expected {V} LLRs per frame, got {ch_all.shape[-1]}")
        cfg = self.cfg
        clamp = cfg.llr_clamp
        B = ch_all.shape[0]
        E = self._E
        ch_all = np.clip(ch_all, -clamp, clamp)

        hard_out = np.zeros((B, V), dtype=np.uint8)
        post_out = ch_all.copy()
        conv_out = np.zeros(B, dtype=bool)
        iters_out = np.zeros(B, dtype=np.int64)

        active = np.arange(B)
        ch = ch_all
        v2c = np.empty((B, E + 1))
        v2c[:, :E] = ch[:, self._edge_vn]
        v2c[:, E] = np.inf
        c2v = np.zeros((B, E + 1))
        post = ch
        hard = (post < 0).astype(np.uint8)

        def retire(mask, it):
            nonlocal active, ch, v2c, c2v, post, hard
            idx = active[mask]
            hard_out[idx] = hard[mask]
            post_out[idx] = post[mask]
            conv_out[idx] = self.syndrome_weight(hard[mask]) == 0
            iters_out[idx] = it
            keep = ~mask
            active, ch, v2c, c2v = active[keep], ch[keep], v2c[keep], c2v[keep]
            post, hard = post[keep], hard[keep]

        if cfg.early_stop:
            retire(self.syndrome_weight(hard) == 0, 0)

        for it in range(1, cfg.max_iters + 1):
            if active.size == 0:
                break
            c2v[:, :E] = self._check_update(v2c)
            gathered = c2v[:, self._vn_slots]  # sentinel column is 0
            post = ch + gathered.sum(axis=-1)
            v2c[:, :E] = np.clip(post[:, self._edge_vn] - c2v[:, :E], -clamp, clamp)
            hard = (post < 0).astype(np.uint8)
            if observer is not None:
                observer(it, c2v[:, :E].copy(), v2c[:, :E].copy())
            if cfg.early_stop:
                retire(self.syndrome_weight(hard) == 0, it)
        if active.size:
            retire(np.ones(active.size, dtype=bool), cfg.max_iters)

        if single:
            return DecodeResult(hard_out[0], conv_out[0], iters_out[0], post_out[0])
        return DecodeResult(hard_out, conv_out, iters_out, post_out)


def decode(graph, channel_llrs, cfg: DecoderConfig = DecoderConfig(),
           observer: Optional[Observer] = None) -> DecodeResult:
    return BeliefPropagationDecoder(graph, cfg).decode(channel_llrs, observer)
