"""GAED and iGAED paths and the ML-in-the-list selection.

All functions accept one frame (1-D LLRs) or a batch (2-D); outputs keep the
same leading shape.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .automorphism import GenAutomorphism
from .bp import DEFAULT_CLAMP, BeliefPropagationDecoder, DecoderConfig, boxplus
from .code import LinearCode, TannerGraph, tanner_from_pcm
from .gf2 import BitMatrix, mul_rows
from .graph_transform import PrunedGraph, prune_extended

IDENTITY, GAED, IGAED = "identity", "gaed", "igaed"
MAX_CORRELATION, FIRST_PATH = "max_correlation", "first_path"


@dataclass(frozen=True)
class Candidate:
    hard_bits: np.ndarray
    valid: np.ndarray
    correlation: np.ndarray
    converged: np.ndarray


@dataclass(frozen=True)
class EnsembleResult:
    chosen: np.ndarray
    chosen_path: np.ndarray
    candidates: tuple[Candidate, ...]
    any_valid: np.ndarray


@dataclass(frozen=True)
class PathSpec:
    code: LinearCode
    automorphism: GenAutomorphism
    mode: str
    decoder_cfg: DecoderConfig
    prepared: TannerGraph | PrunedGraph
    decoder: BeliefPropagationDecoder

    @classmethod
    def build(cls, code: LinearCode, automorphism: GenAutomorphism | None = None,
              mode: str = GAED, cfg: DecoderConfig = DecoderConfig()) -> "PathSpec":
        if automorphism is None:
            automorphism = GenAutomorphism.identity(code.n)
        if automorphism.n != code.n:
            raise ValueError("automorphism size does not match the code length")
        if automorphism.is_identity():
            mode = IDENTITY
        elif mode == IDENTITY:
            raise ValueError("identity mode needs the identity automorphism")
        if mode == IGAED:
            prepared = prune_extended(automorphism.t, code.h)
            graph = tanner_from_pcm(prepared.h_pruned)
        elif mode in (GAED, IDENTITY):
            prepared = graph = tanner_from_pcm(code.h)
        else:
            raise ValueError(f"unknown path mode {mode!r}")
        return cls(code, automorphism, mode, cfg, prepared,
                   BeliefPropagationDecoder(graph, cfg))

    def run(self, llrs) -> Candidate:
        if self.mode == IGAED:
            return igaed_path(llrs, self)
        return gaed_path(llrs, self)


def correlation(bits, llrs) -> np.ndarray:
    """sum_i (1 - 2 x_i) L_i."""
    bits = np.asarray(bits)
    return np.sum((1.0 - 2.0 * bits) * np.asarray(llrs, dtype=np.float64), axis=-1)


def gaed_preprocess(llrs, t: BitMatrix, clamp: float = DEFAULT_CLAMP) -> np.ndarray:
    """Output j is the box-plus over the LLRs selected by row j of ``t``."""
    llrs = np.asarray(llrs, dtype=np.float64)
    n = llrs.shape[-1]
    if t.shape != (n, n):
        raise ValueError(f"T is {t.shape}, LLR length is {n}")
    out = np.empty_like(llrs)
    arr = t.array
    for j in range(n):
        support = np.flatnonzero(arr[j])
        if support.size == 0:
            raise ValueError(f"row {j} of T is zero")
        acc = np.clip(llrs[..., support[0]], -clamp, clamp)
        for i in support[1:]:
            acc = boxplus(acc, llrs[..., i], clamp)
        out[..., j] = acc
    return out


def _syndrome_ok(h: BitMatrix, bits) -> np.ndarray:
    return ~mul_rows(h, bits).any(axis=-1)


def gaed_path(llrs, spec: PathSpec) -> Candidate:
    """Preprocess, decode on H, map back with T^-1."""
    if spec.mode not in (GAED, IDENTITY):
        raise ValueError(f"gaed_path called with a {spec.mode!r} path")
    llrs = np.asarray(llrs, dtype=np.float64)
    if spec.mode == IDENTITY:
        pre = llrs
    elif spec.automorphism.is_permutation:
        pre = llrs[..., spec.automorphism.t.array.argmax(axis=1)]
    else:
        pre = gaed_preprocess(llrs, spec.automorphism.t, spec.decoder_cfg.llr_clamp)
    res = spec.decoder.decode(pre)
    if spec.mode == IDENTITY:
        cand = res.hard_bits
    else:
        cand = spec.automorphism.apply_inverse(res.hard_bits)
    valid = np.asarray(res.converged) & _syndrome_ok(spec.code.h, cand)
    return Candidate(cand, valid, correlation(cand, llrs), np.asarray(res.converged))


def igaed_path(llrs, spec: PathSpec) -> Candidate:
    """Decode on the pruned extended graph with erased preprocessed bits."""
    if spec.mode != IGAED:
        raise ValueError(f"igaed_path called with a {spec.mode!r} path")
    llrs = np.asarray(llrs, dtype=np.float64)
    graph: PrunedGraph = spec.prepared
    res = spec.decoder.decode(graph.embed_llrs(llrs))
    cand = graph.read(res.hard_bits)
    valid = _syndrome_ok(spec.code.h, cand)
    return Candidate(cand, valid, correlation(cand, llrs), np.asarray(res.converged))


def ml_in_the_list(candidates: Sequence[Candidate], llrs,
                   fallback: str = MAX_CORRELATION) -> EnsembleResult:
    """Highest-correlation valid candidate; lowest path index wins ties.

    With no valid candidate the fallback is the highest-correlation hard output
    (``max_correlation``) or path 0 (``first_path``).
    """
    if not candidates:
        raise ValueError("ML-in-the-list needs at least one candidate")
    if fallback not in (MAX_CORRELATION, FIRST_PATH):
        raise ValueError(f"unknown fallback {fallback!r}")
    bits = np.stack([np.atleast_2d(c.hard_bits) for c in candidates])  # (K, B, n)
    valid = np.stack([np.atleast_1d(c.valid) for c in candidates])
    corr = np.stack([np.atleast_1d(c.correlation) for c in candidates])
    any_valid = valid.any(axis=0)
    best_valid = np.argmax(np.where(valid, corr, -np.inf), axis=0)
    if fallback == MAX_CORRELATION:
        best_any = np.argmax(corr, axis=0)
    else:
        best_any = np.zeros_like(best_valid)
    choice = np.where(any_valid, best_valid, best_any)
    chosen = bits[choice, np.arange(bits.shape[1])]
    if np.asarray(candidates[0].hard_bits).ndim == 1:
        return EnsembleResult(chosen[0], choice[0], tuple(candidates), any_valid[0])
    return EnsembleResult(chosen, choice, tuple(candidates), any_valid)


def run_ensemble(llrs, paths: Sequence[PathSpec],
                 fallback: str = MAX_CORRELATION) -> EnsembleResult:
    if not paths:
        raise ValueError("ensemble needs at least one path")
    return ml_in_the_list([p.run(llrs) for p in paths], llrs, fallback)


def build_ensemble(code: LinearCode, automorphisms: Sequence[GenAutomorphism],
                   mode: str = GAED, cfg: DecoderConfig = DecoderConfig(),
                   include_identity: bool = True) -> list[PathSpec]:
    """Path list ``[I, T_2, ..., T_K]`` sharing one mode and decoder config."""
    paths = [PathSpec.build(code, None, IDENTITY, cfg)] if include_identity else []
    paths += [PathSpec.build(code, a, mode, cfg) for a in automorphisms]
    return paths
