"""Dense GF(2) linear algebra on bit-packed rows.

Each row of a :class:`BitMatrix` is stored as a Python ``int`` whose bit ``c``
holds entry ``(r, c)``; row operations are single XORs on those words.  The
``array`` views give numpy ``uint8`` copies for vectorised consumers (decoders,
batched syndromes).
"""
from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

MAX_ENUM_DIM = 20


class EnumerationLimitError(ValueError):
    """Raised when a brute-force enumeration would exceed ``2**MAX_ENUM_DIM``."""


def _row_to_int(bits: np.ndarray) -> int:
    packed = np.packbits(np.asarray(bits, dtype=np.uint8), bitorder="little")
    return int.from_bytes(packed.tobytes(), "little")


def _int_to_row(value: int, length: int) -> np.ndarray:
    nbytes = (length + 7) // 8
    raw = np.frombuffer(value.to_bytes(nbytes, "little"), dtype=np.uint8)
    return np.unpackbits(raw, bitorder="little")[:length]


class BitVector:
    """Immutable binary vector of fixed length."""

    __slots__ = ("length", "value", "_array")

    def __init__(self, length: int, value: int = 0):
        if length < 1:
            raise ValueError("BitVector length must be >= 1")
        if value < 0 or value >> length:
            raise ValueError("value has bits outside the vector length")
        self.length = length
        self.value = value
        self._array = None

    @classmethod
    def from_array(cls, bits) -> "BitVector":
        arr = np.asarray(bits)
        if arr.ndim != 1:
            raise ValueError("expected a 1-D array")
        if np.any((arr != 0) & (arr != 1)):
            raise ValueError("entries must be 0 or 1")
        return cls(arr.size, _row_to_int(arr))

    @classmethod
    def zeros(cls, length: int) -> "BitVector":
        return cls(length, 0)

    @property
    def array(self) -> np.ndarray:
        if self._array is None:
            arr = _int_to_row(self.value, self.length)
            arr.flags.writeable = False
            self._array = arr
        return self._array

    def weight(self) -> int:
        return self.value.bit_count()

    def is_zero(self) -> bool:
        return self.value == 0

    def __len__(self) -> int:
        return self.length

    def __getitem__(self, i: int) -> int:
        if not -self.length <= i < self.length:
            raise IndexError(i)
        return (self.value >> (i % self.length)) & 1

    def __xor__(self, other: "BitVector") -> "BitVector":
        if self.length != other.length:
            raise ValueError("length mismatch")
        return BitVector(self.length, self.value ^ other.value)

    def __eq__(self, other) -> bool:
        if not isinstance(other, BitVector):
            return NotImplemented
        return self.length == other.length and self.value == other.value

    def __hash__(self) -> int:
        return hash((self.length, self.value))

    def __repr__(self) -> str:
        return "BitVector(" + "".join(str(b) for b in self.array) + ")"


class BitMatrix:
    """Immutable dense binary matrix with packed rows."""

    __slots__ = ("rows", "cols", "data", "_array")

    def __init__(self, rows: int, cols: int, data: Sequence[int]):
        if rows < 1 or cols < 1:
            raise ValueError("BitMatrix needs at least one row and one column")
        data = tuple(int(r) for r in data)
        if len(data) != rows:
            raise ValueError("row count does not match data")
        for r in data:
            if r < 0 or r >> cols:
                raise ValueError("row has bits outside the column range")
        self.rows = rows
        self.cols = cols
        self.data = data
        self._array = None

    @classmethod
    def from_array(cls, arr) -> "BitMatrix":
        a = np.asarray(arr)
        if a.ndim != 2:
            raise ValueError("expected a 2-D array")
        if np.any((a != 0) & (a != 1)):
            raise ValueError("entries must be 0 or 1")
        return cls(a.shape[0], a.shape[1], [_row_to_int(row) for row in a])

    @classmethod
    def identity(cls, n: int) -> "BitMatrix":
        return cls(n, n, [1 << i for i in range(n)])

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "BitMatrix":
        return cls(rows, cols, [0] * rows)

    @classmethod
    def from_vectors(cls, vectors: Sequence[BitVector]) -> "BitMatrix":
        """Stack vectors as rows."""
        if not vectors:
            raise ValueError("need at least one vector")
        n = vectors[0].length
        if any(v.length != n for v in vectors):
            raise ValueError("vectors differ in length")
        return cls(len(vectors), n, [v.value for v in vectors])

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    @property
    def array(self) -> np.ndarray:
        if self._array is None:
            arr = np.array([_int_to_row(r, self.cols) for r in self.data], dtype=np.uint8)
            arr.flags.writeable = False
            self._array = arr
        return self._array

    @property
    def T(self) -> "BitMatrix":
        return BitMatrix.from_array(self.array.T)

    def row(self, r: int) -> BitVector:
        return BitVector(self.cols, self.data[r])

    def row_weights(self) -> list[int]:
        return [r.bit_count() for r in self.data]

    def weight(self) -> int:
        return sum(self.row_weights())

    def is_square(self) -> bool:
        return self.rows == self.cols

    def __getitem__(self, idx: tuple[int, int]) -> int:
        r, c = idx
        if not (0 <= r < self.rows and 0 <= c < self.cols):
            raise IndexError(idx)
        return (self.data[r] >> c) & 1

    def __matmul__(self, other):
        return gf2_mul(self, other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, BitMatrix):
            return NotImplemented
        return self.shape == other.shape and self.data == other.data

    def __hash__(self) -> int:
        return hash((self.rows, self.cols, self.data))

    def __repr__(self) -> str:
        body = "\n".join(" ".join(str(b) for b in row) for row in self.array)
        return f"BitMatrix({self.rows}x{self.cols})\n{body}"


def hstack(blocks: Iterable[BitMatrix]) -> BitMatrix:
    blocks = list(blocks)
    return BitMatrix.from_array(np.hstack([b.array for b in blocks]))


def vstack(blocks: Iterable[BitMatrix]) -> BitMatrix:
    blocks = list(blocks)
    return BitMatrix.from_array(np.vstack([b.array for b in blocks]))


def gf2_mul(a: BitMatrix, b):
    """Product over F2 of ``a`` with a matrix or a vector."""
    if isinstance(b, BitVector):
        if a.cols != b.length:
            raise ValueError(f"dimension mismatch: {a.shape} x ({b.length},)")
        out = 0
        for i, row in enumerate(a.data):
            out |= ((row & b.value).bit_count() & 1) << i
        return BitVector(a.rows, out)
    if isinstance(b, BitMatrix):
        if a.cols != b.rows:
            raise ValueError(f"dimension mismatch: {a.shape} x {b.shape}")
        out = []
        for row in a.data:
            acc = 0
            j = 0
            while row:
                if row & 1:
                    acc ^= b.data[j]
                row >>= 1
                j += 1
            out.append(acc)
        return BitMatrix(a.rows, b.cols, out)
    raise TypeError(f"cannot multiply BitMatrix by {type(b).__name__}")


def mul_rows(m: BitMatrix, x: np.ndarray) -> np.ndarray:
    """Batched ``m @ x_b`` for every row ``x_b`` of a 0/1 array ``x`` of shape (..., m.cols).

    uint8 accumulation may wrap, which preserves parity.
    """
    x = np.asarray(x, dtype=np.uint8)
    if x.shape[-1] != m.cols:
        raise ValueError("length mismatch")
    return (x @ m.array.T) & np.uint8(1)


def _rref(data: Sequence[int], ncols: int) -> tuple[list[int], list[int]]:
    """Reduced row echelon form; pivot row is the lowest-index candidate."""
    rows = list(data)
    pivots = []
    r = 0
    for c in range(ncols):
        bit = 1 << c
        pivot = next((i for i in range(r, len(rows)) if rows[i] & bit), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        prow = rows[r]
        for i in range(len(rows)):
            if i != r and rows[i] & bit:
                rows[i] ^= prow
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows, pivots


def gf2_rank(a: BitMatrix) -> int:
    return len(_rref(a.data, a.cols)[1])


def gf2_inverse(a: BitMatrix) -> BitMatrix | None:
    """Inverse of a square matrix, or ``None`` when singular."""
    if not a.is_square():
        raise ValueError(f"inverse needs a square matrix, got {a.shape}")
    n = a.rows
    aug = [row | (1 << (n + i)) for i, row in enumerate(a.data)]
    rows, pivots = _rref(aug, n)
    if len(pivots) < n or pivots[-1] >= n:
        return None
    mask = (1 << n) - 1
    if any((row & mask) != (1 << i) for i, row in enumerate(rows)):
        return None
    return BitMatrix(n, n, [row >> n for row in rows])


def null_space_basis(h: BitMatrix) -> list[BitVector]:
    """Basis of ``{x : h x = 0}``, one vector per free column (ascending)."""
    rows, pivots = _rref(h.data, h.cols)
    pivot_set = set(pivots)
    basis = []
    for f in range(h.cols):
        if f in pivot_set:
            continue
        v = 1 << f
        for r, p in enumerate(pivots):
            if (rows[r] >> f) & 1:
                v |= 1 << p
        basis.append(BitVector(h.cols, v))
    return basis


def span_array(basis: Sequence[BitVector], length: int | None = None) -> np.ndarray:
    """All ``2**len(basis)`` combinations of ``basis`` as a uint8 array.

    Row ``i`` is the combination selected by the bits of ``i`` (bit ``j`` picks
    ``basis[j]``).
    """
    k = len(basis)
    if k > MAX_ENUM_DIM:
        raise EnumerationLimitError(f"dimension {k} exceeds enumeration cap {MAX_ENUM_DIM}")
    if length is None:
        if not basis:
            raise ValueError("length required for an empty basis")
        length = basis[0].length
    out = np.zeros((1, length), dtype=np.uint8)
    for g in basis:
        out = np.vstack([out, out ^ g.array])
    return out


def min_distance_bruteforce(code) -> int:
    """Minimum Hamming weight of a nonzero codeword by full enumeration.

    ``code`` is a :class:`~gaed.code.LinearCode` or a list of basis vectors.
    """
    basis = getattr(code, "generator", code)
    if not basis:
        raise ValueError("code has dimension 0")
    if len(basis) > MAX_ENUM_DIM:
        raise EnumerationLimitError(
            f"k = {len(basis)} exceeds enumeration cap {MAX_ENUM_DIM}"
        )
    words = span_array(basis)
    weights = words[1:].sum(axis=1, dtype=np.int64)
    return int(weights.min())
