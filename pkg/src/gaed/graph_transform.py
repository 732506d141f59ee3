"""Merged Tanner graph of preprocessing plus code, and its degree-2 pruning.

The extended PCM stacks the preprocessing checks ``[T | I]`` on top of the
code checks ``[0 | H]``.  Columns ``0..n-1`` are the channel bits ``x``;
columns ``n..2n-1`` are the preprocessed bits ``T x``, which carry no channel
observation.  A weight-1 row ``j`` of ``T`` with support ``{i}`` is a degree-2
check forcing ``(T x)_j = x_i``, so that preprocessed bit is folded into
channel bit ``i``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .gf2 import BitMatrix, gf2_inverse

CHANNEL = "channel"
ERASED = "erased"


@dataclass(frozen=True)
class VNRecord:
    """What a column of the pruned PCM stands for.

    ``kind`` is ``"channel"`` (``index`` = original bit, ``merged`` = rows of
    ``T`` folded into it) or ``"erased"`` (``index`` = preprocessed bit).
    """

    kind: str
    index: int
    merged: tuple[int, ...] = ()

    def describe(self) -> str:
        if self.kind == CHANNEL:
            extra = "".join(f" +tau{j}" for j in self.merged)
            return f"channel x{self.index}{extra}"
        return f"erased tau{self.index}"


@dataclass(frozen=True)
class PrunedGraph:
    h_pruned: BitMatrix
    vn_map: tuple[VNRecord, ...]
    readout: tuple[int, ...]
    n: int
    m: int

    @property
    def channel_columns(self) -> np.ndarray:
        return np.array([i for i, r in enumerate(self.vn_map) if r.kind == CHANNEL])

    def embed_llrs(self, llrs: np.ndarray) -> np.ndarray:
        """Channel LLRs on channel VNs, zeros (erasures) on the rest."""
        llrs = np.asarray(llrs, dtype=np.float64)
        if llrs.shape[-1] != self.n:
            raise ValueError(f"expected {self.n} LLRs, got {llrs.shape[-1]}")
        out = np.zeros(llrs.shape[:-1] + (len(self.vn_map),), dtype=np.float64)
        out[..., self.channel_columns] = llrs[..., [r.index for r in self.vn_map
                                                    if r.kind == CHANNEL]]
        return out

    def project(self, x: np.ndarray, x_tau: np.ndarray) -> np.ndarray:
        """Map an extended vector ``(x, T x)`` onto the pruned VNs."""
        x = np.asarray(x, dtype=np.uint8)
        x_tau = np.asarray(x_tau, dtype=np.uint8)
        cols = [x[..., r.index] if r.kind == CHANNEL else x_tau[..., r.index]
                for r in self.vn_map]
        return np.stack(cols, axis=-1)

    def read(self, bits: np.ndarray) -> np.ndarray:
        """Estimate of the original bits from pruned-graph hard decisions."""
        return np.asarray(bits)[..., list(self.readout)]

    def describe_map(self) -> list[str]:
        return [f"v{i}: {r.describe()}" for i, r in enumerate(self.vn_map)]


def build_extended_pcm(t: BitMatrix, h: BitMatrix) -> BitMatrix:
    """``[[T, I], [0, H]]`` of shape (n + m) x 2n."""
    n = t.rows
    if not t.is_square():
        raise ValueError(f"T must be square, got {t.shape}")
    if h.cols != n:
        raise ValueError(f"H has {h.cols} columns, T is {n}x{n}")
    m = h.rows
    top = np.hstack([t.array, np.eye(n, dtype=np.uint8)])
    bottom = np.hstack([np.zeros((m, n), dtype=np.uint8), h.array])
    return BitMatrix.from_array(np.vstack([top, bottom]))


def prune_extended(t: BitMatrix, h: BitMatrix) -> PrunedGraph:
    """Fold every preprocessed bit whose T-row has weight 1 into its channel bit."""
    ext = build_extended_pcm(t, h).array.copy()
    if gf2_inverse(t) is None:
        raise ValueError("transformation matrix is singular")
    n, m = t.rows, h.rows
    merged: dict[int, list[int]] = {i: [] for i in range(n)}
    drop_rows, drop_cols = [], []
    targets = set()
    for j, row in enumerate(t.data):
        if row.bit_count() != 1:
            continue
        i = row.bit_length() - 1
        # two weight-1 rows with the same support would make T singular
        assert i not in targets, "duplicate merge target"
        targets.add(i)
        ext[:, i] ^= ext[:, n + j]
        merged[i].append(j)
        drop_rows.append(j)
        drop_cols.append(n + j)

    keep_rows = [r for r in range(n + m) if r not in set(drop_rows)]
    keep_cols = [c for c in range(2 * n) if c not in set(drop_cols)]
    pruned = ext[np.ix_(keep_rows, keep_cols)]
    vn_map = tuple(
        VNRecord(CHANNEL, c, tuple(merged[c])) if c < n else VNRecord(ERASED, c - n)
        for c in keep_cols
    )
    readout = tuple(keep_cols.index(i) for i in range(n))
    return PrunedGraph(BitMatrix.from_array(pruned), vn_map, readout, n, m)
