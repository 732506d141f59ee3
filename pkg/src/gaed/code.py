"""Binary linear codes, Tanner graphs and PCM file formats."""
from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .gf2 import (
    BitMatrix,
    BitVector,
    gf2_mul,
    gf2_rank,
    null_space_basis,
    span_array,
)


class MatrixParseError(ValueError):
    """Malformed matrix file; ``line`` is 1-based (0 when not line-specific)."""

    def __init__(self, message: str, line: int = 0):
        self.line = line
        super().__init__(f"line {line}: {message}" if line else message)


@dataclass(frozen=True)
class LinearCode:
    """The null space of a parity-check matrix.

    ``k`` comes from the rank of ``h``, so PCMs with redundant rows are fine.
    """

    h: BitMatrix
    n: int
    k: int
    rank: int
    generator: tuple[BitVector, ...] = field(repr=False)

    @classmethod
    def from_pcm(cls, h: BitMatrix) -> "LinearCode":
        if not isinstance(h, BitMatrix):
            h = BitMatrix.from_array(h)
        rank = gf2_rank(h)
        basis = tuple(null_space_basis(h))
        if not basis:
            raise ValueError("parity-check matrix has full column rank; code is {0}")
        return cls(h=h, n=h.cols, k=h.cols - rank, rank=rank, generator=basis)

    @property
    def rate(self) -> float:
        return self.k / self.n

    @property
    def generator_matrix(self) -> BitMatrix:
        return BitMatrix.from_vectors(self.generator)

    def codebook(self) -> np.ndarray:
        """All codewords (k <= 20), row i selected by the bits of i."""
        return span_array(self.generator)

    def encode(self, info: np.ndarray) -> np.ndarray:
        """Map information words (..., k) to codewords (..., n)."""
        info = np.asarray(info, dtype=np.uint8)
        return (info @ self.generator_matrix.array) & np.uint8(1)

    def is_codeword(self, x) -> bool:
        return syndrome(self.h, x).is_zero()


@dataclass(frozen=True)
class TannerGraph:
    vn_count: int
    cn_count: int
    cn_neighbors: tuple[tuple[int, ...], ...]
    vn_neighbors: tuple[tuple[int, ...], ...]
    # edges in CN-major order, VN-ascending within a CN
    edges: tuple[tuple[int, int], ...]
    edge_index: dict = field(repr=False, compare=False)

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def to_pcm(self) -> BitMatrix:
        arr = np.zeros((self.cn_count, self.vn_count), dtype=np.uint8)
        for c, nbrs in enumerate(self.cn_neighbors):
            arr[c, list(nbrs)] = 1
        return BitMatrix.from_array(arr)


def tanner_from_pcm(h: BitMatrix) -> TannerGraph:
    arr = h.array
    cn = tuple(tuple(int(v) for v in np.flatnonzero(arr[c])) for c in range(h.rows))
    vn = tuple(tuple(int(c) for c in np.flatnonzero(arr[:, v])) for v in range(h.cols))
    edges = tuple((c, v) for c in range(h.rows) for v in cn[c])
    index = {e: i for i, e in enumerate(edges)}
    return TannerGraph(h.cols, h.rows, cn, vn, edges, index)


def syndrome(h: BitMatrix, x) -> BitVector:
    if not isinstance(x, BitVector):
        x = BitVector.from_array(np.asarray(x, dtype=np.uint8))
    if x.length != h.cols:
        raise ValueError(f"length mismatch: H has {h.cols} columns, x has {x.length}")
    return gf2_mul(h, x)


# -- file formats ---------------------------------------------------------

def _content_lines(text: str):
    for lineno, line in enumerate(text.splitlines(), start=1):
        tokens = line.split()
        if tokens:
            yield lineno, tokens


def _ints(tokens, lineno):
    try:
        return [int(t) for t in tokens]
    except ValueError:
        raise MatrixParseError(f"non-integer token in {tokens!r}", lineno) from None


def parse_alist(text: str) -> BitMatrix:
    """Parse MacKay's alist format (1-based indices, zero padding allowed)."""
    lines = list(_content_lines(text))
    pos = 0

    def take(what):
        nonlocal pos
        if pos >= len(lines):
            last = lines[-1][0] if lines else 0
            raise MatrixParseError(f"truncated file, expected {what}", last + 1)
        lineno, tokens = lines[pos]
        pos += 1
        return lineno, _ints(tokens, lineno)

    lineno, header = take("header 'n m'")
    if len(header) != 2 or min(header) < 1:
        raise MatrixParseError("header must be two positive integers 'n m'", lineno)
    n, m = header
    lineno, maxdeg = take("max degrees")
    if len(maxdeg) != 2:
        raise MatrixParseError("expected two maximum degrees", lineno)
    max_col, max_row = maxdeg
    lineno, col_deg = take("column degrees")
    if len(col_deg) != n:
        raise MatrixParseError(f"expected {n} column degrees, got {len(col_deg)}", lineno)
    lineno, row_deg = take("row degrees")
    if len(row_deg) != m:
        raise MatrixParseError(f"expected {m} row degrees, got {len(row_deg)}", lineno)

    from_cols = set()
    for i in range(n):
        lineno, entries = take(f"neighbour list of column {i + 1}")
        nbrs = [e for e in entries if e != 0]
        if len(entries) > max(max_col, col_deg[i], 1) or len(nbrs) != col_deg[i]:
            raise MatrixParseError(
                f"column {i + 1}: expected {col_deg[i]} entries, got {len(nbrs)}", lineno
            )
        for j in nbrs:
            if not 1 <= j <= m:
                raise MatrixParseError(f"row index {j} out of range 1..{m}", lineno)
            if (j - 1, i) in from_cols:
                raise MatrixParseError(f"duplicate entry ({j}, {i + 1})", lineno)
            from_cols.add((j - 1, i))

    from_rows = set()
    for j in range(m):
        lineno, entries = take(f"neighbour list of row {j + 1}")
        nbrs = [e for e in entries if e != 0]
        if len(entries) > max(max_row, row_deg[j], 1) or len(nbrs) != row_deg[j]:
            raise MatrixParseError(
                f"row {j + 1}: expected {row_deg[j]} entries, got {len(nbrs)}", lineno
            )
        for i in nbrs:
            if not 1 <= i <= n:
                raise MatrixParseError(f"column index {i} out of range 1..{n}", lineno)
            if (j, i - 1) not in from_cols:
                raise MatrixParseError(
                    f"row {j + 1} lists column {i} but column {i} does not list row {j + 1}",
                    lineno,
                )
            from_rows.add((j, i - 1))

    if from_rows != from_cols:
        missing = sorted(from_cols - from_rows)[0]
        raise MatrixParseError(
            f"column lists contain entry ({missing[0] + 1}, {missing[1] + 1}) "
            "absent from the row lists"
        )
    arr = np.zeros((m, n), dtype=np.uint8)
    for j, i in from_cols:
        arr[j, i] = 1
    return BitMatrix.from_array(arr)


def format_alist(h: BitMatrix) -> str:
    arr = h.array
    m, n = arr.shape
    col_nbrs = [list(np.flatnonzero(arr[:, i]) + 1) for i in range(n)]
    row_nbrs = [list(np.flatnonzero(arr[j]) + 1) for j in range(m)]
    max_col = max((len(c) for c in col_nbrs), default=0)
    max_row = max((len(r) for r in row_nbrs), default=0)

    def padded(nbrs, width):
        # a lone 0 keeps the line of an isolated node from being blank
        return " ".join(str(v) for v in list(nbrs) + [0] * (max(width, 1) - len(nbrs)))

    out = [f"{n} {m}", f"{max_col} {max_row}"]
    out.append(" ".join(str(len(c)) for c in col_nbrs))
    out.append(" ".join(str(len(r)) for r in row_nbrs))
    out += [padded(c, max_col) for c in col_nbrs]
    out += [padded(r, max_row) for r in row_nbrs]
    return "\n".join(out) + "\n"


def parse_dense(text: str) -> BitMatrix:
    """Dense 0/1 text: first line 'm n', then m rows of n entries."""
    lines = list(_content_lines(text))
    if not lines:
        raise MatrixParseError("empty file", 1)
    lineno, header = lines[0]
    header = _ints(header, lineno)
    if len(header) != 2 or min(header) < 1:
        raise MatrixParseError("header must be two positive integers 'm n'", lineno)
    m, n = header
    body = lines[1:]
    if len(body) < m:
        last = lines[-1][0]
        raise MatrixParseError(f"truncated file, expected {m} rows, got {len(body)}", last + 1)
    if len(body) > m:
        raise MatrixParseError(f"extra content after {m} rows", body[m][0])
    rows = []
    for lineno, tokens in body:
        vals = _ints(tokens, lineno)
        if len(vals) != n:
            raise MatrixParseError(f"expected {n} entries, got {len(vals)}", lineno)
        if any(v not in (0, 1) for v in vals):
            raise MatrixParseError("entries must be 0 or 1", lineno)
        rows.append(vals)
    return BitMatrix.from_array(np.array(rows, dtype=np.uint8))


def format_dense(h: BitMatrix) -> str:
    lines = [f"{h.rows} {h.cols}"]
    lines += [" ".join(str(b) for b in row) for row in h.array]
    return "\n".join(lines) + "\n"


def load_matrix(path, fmt: str | None = None) -> BitMatrix:
    """Read a matrix file; ``fmt`` is 'alist' or 'dense' (default: by suffix)."""
    path = Path(path)
    text = path.read_text()
    if fmt is None:
        fmt = "alist" if path.suffix.lower() == ".alist" else "dense"
    if fmt == "alist":
        return parse_alist(text)
    if fmt == "dense":
        return parse_dense(text)
    raise ValueError(f"unknown matrix format {fmt!r}")


def load_code(path, fmt: str | None = None) -> LinearCode:
    return LinearCode.from_pcm(load_matrix(path, fmt))
