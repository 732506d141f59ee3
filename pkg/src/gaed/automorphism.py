"""Generalized automorphisms: nonsingular T with T x in C for every codeword x."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .code import LinearCode, load_matrix
from .gf2 import BitMatrix, gf2_inverse, gf2_mul, mul_rows

MAX_PERMUTATION_SEARCH_N = 8


class NotAnAutomorphismError(ValueError):
    pass


def weight_over_permutation(t: BitMatrix) -> int:
    """Number of ones in ``t`` beyond the ``n`` a permutation matrix has."""
    if not t.is_square():
        raise ValueError(f"weight over permutation needs a square matrix, got {t.shape}")
    return t.weight() - t.rows


def _is_permutation(t: BitMatrix) -> bool:
    arr = t.array
    return bool(np.all(arr.sum(axis=0) == 1) and np.all(arr.sum(axis=1) == 1))


@dataclass(frozen=True)
class GenAutomorphism:
    t: BitMatrix
    t_inv: BitMatrix
    delta: int
    is_permutation: bool

    @classmethod
    def from_matrix(cls, t: BitMatrix) -> "GenAutomorphism":
        if not isinstance(t, BitMatrix):
            t = BitMatrix.from_array(t)
        inv = gf2_inverse(t)
        if inv is None:
            raise ValueError("transformation matrix is singular")
        return cls(t, inv, weight_over_permutation(t), _is_permutation(t))

    @classmethod
    def identity(cls, n: int) -> "GenAutomorphism":
        eye = BitMatrix.identity(n)
        return cls(eye, eye, 0, True)

    @property
    def n(self) -> int:
        return self.t.rows

    def is_identity(self) -> bool:
        return self.t == BitMatrix.identity(self.n)

    def inverse(self) -> "GenAutomorphism":
        return GenAutomorphism(self.t_inv, self.t, weight_over_permutation(self.t_inv),
                               self.is_permutation)

    def apply(self, x: np.ndarray) -> np.ndarray:
        """T x for a batch of 0/1 rows."""
        return mul_rows(self.t, x)

    def apply_inverse(self, x: np.ndarray) -> np.ndarray:
        return mul_rows(self.t_inv, x)


def verify_automorphism(t: BitMatrix, code: LinearCode) -> bool:
    """True iff ``t`` is nonsingular and maps every generator into the code."""
    if t.shape != (code.n, code.n):
        raise ValueError(f"T is {t.shape}, code length is {code.n}")
    if gf2_inverse(t) is None:
        return False
    images = gf2_mul(t, code.generator_matrix.T)  # columns are T g
    return gf2_mul(code.h, images).weight() == 0


def automorphism_powers(t: BitMatrix, exponents: Iterable[int]) -> list[GenAutomorphism]:
    """Wrap T, T^-1, T^2, (T^2)^-1 as requested by exponents in {1, -1, 2, -2}."""
    base = GenAutomorphism.from_matrix(t)
    squared = None
    out = []
    for e in exponents:
        if e not in (1, -1, 2, -2):
            raise ValueError(f"unsupported exponent {e}; use 1, -1, 2 or -2")
        if abs(e) == 2 and squared is None:
            squared = GenAutomorphism.from_matrix(gf2_mul(t, t))
        g = base if abs(e) == 1 else squared
        out.append(g if e > 0 else g.inverse())
    return out


def permutation_matrix(perm: Sequence[int]) -> BitMatrix:
    """Matrix P with (P x)_j = x_{perm[j]}."""
    n = len(perm)
    if sorted(perm) != list(range(n)):
        raise ValueError("not a permutation")
    return BitMatrix(n, n, [1 << int(p) for p in perm])


def permutation_automorphisms(code: LinearCode) -> list[tuple[int, ...]]:
    """All permutations of S_n mapping the code onto itself (n <= 8)."""
    n = code.n
    if n > MAX_PERMUTATION_SEARCH_N:
        raise ValueError(f"permutation search limited to n <= {MAX_PERMUTATION_SEARCH_N}")
    h = code.h.array.astype(np.int64)
    g = code.generator_matrix.array.astype(np.int64)
    perms = np.array(list(itertools.permutations(range(n))), dtype=np.int64)
    # (P g)_j = g_{perm[j]}; need H P g^T = 0 for every generator
    permuted = g[:, perms]  # (k, P, n)
    synd = np.einsum("mn,kpn->pmk", h, permuted) & 1
    ok = ~synd.reshape(len(perms), -1).any(axis=1)
    return [tuple(int(v) for v in p) for p in perms[ok]]


def load_automorphism(path, code: LinearCode, force: bool = False) -> BitMatrix:
    """Read a dense T file and check it against ``code`` unless forced."""
    t = load_matrix(Path(path), fmt="dense")
    if t.shape != (code.n, code.n):
        raise ValueError(f"{path}: T is {t.shape}, expected {(code.n, code.n)}")
    if not force and not verify_automorphism(t, code):
        raise NotAnAutomorphismError(f"{path}: not an automorphism of the code")
    return t
