"""
Exact dense linear algebra over prime fields F_p.

Everything downstream (algebras, modules, resolutions, certificates) is
reduced to the operations in this module. Matrices are immutable wrappers
around ``galois`` field arrays; pivoting is always leftmost-column,
first-nonzero-row, so results are reproducible across runs.
"""
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, List, Optional, Sequence, Tuple

import galois
import numpy as np

from config import settings


@lru_cache(maxsize=None)
def prime_field(p: int) -> type:
    """
    Return the galois field class for F_p.

    Args:
        p: Prime modulus

    Returns:
        galois FieldArray subclass for GF(p)
    """
    if not isinstance(p, (int, np.integer)) or p < 2 or not galois.is_prime(int(p)):
        raise ValueError(f"Modulus must be prime, got {p}")
    if p > settings.max_prime:
        raise ValueError(f"Prime {p} exceeds the machine-word bound {settings.max_prime}")
    return galois.GF(int(p))


@dataclass(frozen=True, eq=False)
class FpMatrix:
    """Dense matrix with entries in F_p."""

    p: int
    array: galois.FieldArray

    def __post_init__(self):
        if self.array.ndim != 2:
            raise ValueError(f"FpMatrix needs a 2-D array, got shape {self.array.shape}")
        if type(self.array).order != self.p:
            raise ValueError(f"Array field order {type(self.array).order} does not match p={self.p}")
        self.array.flags.writeable = False

    # Construction

    @classmethod
    def from_array(cls, p: int, data) -> "FpMatrix":
        """Build from any integer array-like; entries are reduced mod p."""
        field = prime_field(p)
        ints = np.asarray(data, dtype=np.int64)
        if ints.ndim != 2:
            raise ValueError(f"Expected a 2-D array, got shape {ints.shape}")
        return cls(p, field(np.mod(ints, p)))

    @classmethod
    def from_rows(cls, p: int, rows: Sequence[Sequence[int]], cols: Optional[int] = None) -> "FpMatrix":
        """Build from a list of rows; ``cols`` fixes the width of an empty matrix."""
        if len(rows) == 0:
            return cls.zeros(p, 0, cols or 0)
        return cls.from_array(p, [list(r) for r in rows])

    @classmethod
    def from_entries(cls, p: int, rows: int, cols: int, entries: Sequence[int]) -> "FpMatrix":
        """Build from a row-major residue list."""
        if rows * cols != len(entries):
            raise ValueError(f"{rows}x{cols} matrix needs {rows * cols} entries, got {len(entries)}")
        return cls.from_array(p, np.asarray(entries, dtype=np.int64).reshape(rows, cols))

    @classmethod
    def zeros(cls, p: int, rows: int, cols: int) -> "FpMatrix":
        return cls(p, prime_field(p).Zeros((rows, cols)))

    @classmethod
    def identity(cls, p: int, n: int) -> "FpMatrix":
        return cls(p, prime_field(p).Identity(n))

    @classmethod
    def column_vector(cls, p: int, values: Sequence[int]) -> "FpMatrix":
        return cls.from_array(p, np.asarray(values, dtype=np.int64).reshape(-1, 1))

    # Shape and data

    @property
    def rows(self) -> int:
        return self.array.shape[0]

    @property
    def cols(self) -> int:
        return self.array.shape[1]

    @property
    def shape(self) -> Tuple[int, int]:
        return self.array.shape

    @property
    def ints(self) -> np.ndarray:
        """Entries as a fresh int64 numpy array."""
        return self.array.view(np.ndarray).astype(np.int64)

    @property
    def entries(self) -> Tuple[int, ...]:
        """Row-major residues in [0, p)."""
        return tuple(int(x) for x in self.ints.ravel())

    def to_list(self) -> List[List[int]]:
        return self.ints.tolist()

    def is_zero(self) -> bool:
        return not np.any(self.ints)

    def is_square(self) -> bool:
        return self.rows == self.cols

    # Arithmetic

    def _check_field(self, other: "FpMatrix"):
        if not isinstance(other, FpMatrix) or other.p != self.p:
            raise ValueError("Matrices live over different prime fields")

    def __matmul__(self, other: "FpMatrix") -> "FpMatrix":
        self._check_field(other)
        if self.cols != other.rows:
            raise ValueError(f"Cannot multiply {self.shape} by {other.shape}")
        if 0 in (self.rows, self.cols, other.cols):
            return FpMatrix.zeros(self.p, self.rows, other.cols)
        return FpMatrix(self.p, self.array @ other.array)

    def __add__(self, other: "FpMatrix") -> "FpMatrix":
        self._check_field(other)
        if self.shape != other.shape:
            raise ValueError(f"Cannot add {self.shape} and {other.shape}")
        return FpMatrix(self.p, self.array + other.array)

    def __sub__(self, other: "FpMatrix") -> "FpMatrix":
        self._check_field(other)
        if self.shape != other.shape:
            raise ValueError(f"Cannot subtract {self.shape} and {other.shape}")
        return FpMatrix(self.p, self.array - other.array)

    def __neg__(self) -> "FpMatrix":
        return FpMatrix(self.p, -self.array)

    def scale(self, c: int) -> "FpMatrix":
        return FpMatrix.from_array(self.p, self.ints * (int(c) % self.p))

    @property
    def T(self) -> "FpMatrix":
        return FpMatrix.from_array(self.p, self.ints.T)

    def __eq__(self, other) -> bool:
        if not isinstance(other, FpMatrix):
            return NotImplemented
        return self.p == other.p and self.shape == other.shape and np.array_equal(self.ints, other.ints)

    def __hash__(self) -> int:
        return hash((self.p, self.shape, self.ints.tobytes()))

    def __repr__(self) -> str:
        return f"FpMatrix(p={self.p}, {self.rows}x{self.cols}, {self.to_list()})"

    # Slicing helpers

    def take_rows(self, idx: Iterable[int]) -> "FpMatrix":
        idx = list(idx)
        return FpMatrix.from_array(self.p, self.ints[idx, :].reshape(len(idx), self.cols))

    def take_cols(self, idx: Iterable[int]) -> "FpMatrix":
        idx = list(idx)
        return FpMatrix.from_array(self.p, self.ints[:, idx].reshape(self.rows, len(idx)))

    def column(self, j: int) -> "FpMatrix":
        return self.take_cols([j])

    def row(self, i: int) -> "FpMatrix":
        return self.take_rows([i])

    def flatten_column(self) -> "FpMatrix":
        """Row-major vectorization as a column vector."""
        return FpMatrix.from_array(self.p, self.ints.reshape(-1, 1))


def hstack(p: int, blocks: Sequence[FpMatrix], rows: Optional[int] = None) -> FpMatrix:
    """Concatenate horizontally; ``rows`` fixes the height when ``blocks`` is empty."""
    if not blocks:
        return FpMatrix.zeros(p, rows or 0, 0)
    return FpMatrix.from_array(p, np.hstack([b.ints for b in blocks]))


def vstack(p: int, blocks: Sequence[FpMatrix], cols: Optional[int] = None) -> FpMatrix:
    """Concatenate vertically; ``cols`` fixes the width when ``blocks`` is empty."""
    if not blocks:
        return FpMatrix.zeros(p, 0, cols or 0)
    return FpMatrix.from_array(p, np.vstack([b.ints for b in blocks]))


def block_diag(p: int, blocks: Sequence[FpMatrix]) -> FpMatrix:
    rows = sum(b.rows for b in blocks)
    cols = sum(b.cols for b in blocks)
    out = np.zeros((rows, cols), dtype=np.int64)
    r = c = 0
    for b in blocks:
        out[r:r + b.rows, c:c + b.cols] = b.ints
        r += b.rows
        c += b.cols
    return FpMatrix.from_array(p, out)


def rref(m: FpMatrix) -> Tuple[FpMatrix, int, List[int]]:
    """
    Reduced row echelon form.

    Args:
        m: Input matrix

    Returns:
        Tuple of (reduced matrix, rank, pivot column indices)
    """
    if m.rows == 0 or m.cols == 0:
        return FpMatrix.zeros(m.p, m.rows, m.cols), 0, []
    reduced = m.array.row_reduce()
    ints = reduced.view(np.ndarray)
    pivots = []
    for row in ints:
        nz = np.flatnonzero(row)
        if nz.size == 0:
            break
        pivots.append(int(nz[0]))
    return FpMatrix(m.p, reduced), len(pivots), pivots


def rank(m: FpMatrix) -> int:
    if m.rows == 0 or m.cols == 0:
        return 0
    return int(np.linalg.matrix_rank(m.array))


def kernel_basis(m: FpMatrix) -> FpMatrix:
    """
    Basis of the right null space {v : m v = 0}, one basis vector per row.

    Args:
        m: Input matrix

    Returns:
        Matrix with cols - rank rows spanning the null space
    """
    if m.cols == 0:
        return FpMatrix.zeros(m.p, 0, 0)
    if m.rows == 0 or m.is_zero():
        return FpMatrix.identity(m.p, m.cols)
    if rank(m) == m.cols:
        return FpMatrix.zeros(m.p, 0, m.cols)
    return FpMatrix(m.p, m.array.null_space())


def kernel_columns(m: FpMatrix) -> FpMatrix:
    """Null space basis arranged as columns."""
    return kernel_basis(m).T


def row_space(m: FpMatrix) -> FpMatrix:
    """Canonical (reduced) basis of the row space, one vector per row."""
    reduced, r, _ = rref(m)
    return reduced.take_rows(range(r)) if r else FpMatrix.zeros(m.p, 0, m.cols)


def column_space(m: FpMatrix) -> FpMatrix:
    """Canonical basis of the column space, one vector per row."""
    return row_space(m.T)


def solve(a: FpMatrix, b: FpMatrix) -> Optional[FpMatrix]:
    """
    Solve a x = b with free variables set to zero.

    Args:
        a: Coefficient matrix
        b: Right-hand side column vector (a.rows x 1)

    Returns:
        A solution column vector, or None when the system is inconsistent
    """
    if b.rows != a.rows or b.cols != 1:
        raise ValueError(f"Right-hand side must be {a.rows}x1, got {b.shape}")
    return solve_matrix(a, b)


def solve_matrix(a: FpMatrix, b: FpMatrix) -> Optional[FpMatrix]:
    """Solve a X = B column by column; None if any column is inconsistent."""
    if b.rows != a.rows:
        raise ValueError(f"Right-hand side must have {a.rows} rows, got {b.rows}")
    if b.cols == 0:
        return FpMatrix.zeros(a.p, a.cols, 0)
    if a.rows == 0:
        return FpMatrix.zeros(a.p, a.cols, b.cols)
    if a.cols == 0:
        return FpMatrix.zeros(a.p, 0, b.cols) if b.is_zero() else None
    reduced, r, pivots = rref(hstack(a.p, [a, b]))
    if any(c >= a.cols for c in pivots):
        return None
    x = np.zeros((a.cols, b.cols), dtype=np.int64)
    ints = reduced.ints
    for i, c in enumerate(pivots):
        x[c, :] = ints[i, a.cols:]
    return FpMatrix.from_array(a.p, x)


def inverse(m: FpMatrix) -> Optional[FpMatrix]:
    """Inverse of a square matrix, or None if singular."""
    if not m.is_square():
        raise ValueError(f"Cannot invert a {m.shape} matrix")
    if rank(m) != m.rows:
        return None
    return solve_matrix(m, FpMatrix.identity(m.p, m.rows))


def same_span(a: FpMatrix, b: FpMatrix) -> bool:
    """True when the row spaces of a and b coincide."""
    return row_space(a) == row_space(b)


def quotient_map(dim: int, sub_rows: FpMatrix) -> Tuple[FpMatrix, FpMatrix]:
    """
    Coordinates on F_p^dim / span(sub_rows).

    The complement is spanned by the standard vectors at the non-pivot columns
    of rref(sub_rows).

    Args:
        dim: Ambient dimension
        sub_rows: Spanning set of the subspace, one vector per row

    Returns:
        Tuple (Q, S) with Q: quotient map (d x dim), S: section (dim x d), Q S = I
    """
    p = sub_rows.p
    reduced, r, pivots = rref(sub_rows) if sub_rows.rows else (sub_rows, 0, [])
    nonpivots = [c for c in range(dim) if c not in set(pivots)]
    d = len(nonpivots)
    q = np.zeros((d, dim), dtype=np.int64)
    q[:, nonpivots] = np.eye(d, dtype=np.int64)
    if r:
        ints = reduced.ints[:r]
        q[:, pivots] = -ints[:, nonpivots].T
    s = np.zeros((dim, d), dtype=np.int64)
    s[nonpivots, :] = np.eye(d, dtype=np.int64)
    return FpMatrix.from_array(p, q), FpMatrix.from_array(p, s)


def left_inverse(basis_cols: FpMatrix) -> FpMatrix:
    """Left inverse of a full-column-rank matrix (L B = I)."""
    sol = solve_matrix(basis_cols.T, FpMatrix.identity(basis_cols.p, basis_cols.cols))
    if sol is None:
        raise ValueError("Columns are not linearly independent")
    return sol.T


def random_matrix(p: int, rows: int, cols: int, rng: np.random.Generator) -> FpMatrix:
    return FpMatrix.from_array(p, rng.integers(0, p, size=(rows, cols), dtype=np.int64))
