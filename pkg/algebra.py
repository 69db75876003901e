"""
Finite-dimensional unital algebras over F_p given by structure constants.

Conventions used throughout the engine:

* ``constants[i, j, k]`` is the coefficient of ``b_k`` in ``b_i * b_j``.
* Elements are coefficient vectors; module elements are column vectors.
* ``left_regular[i]`` is the matrix of ``x -> b_i x`` on A (so
  ``left_regular[i] @ left_regular[j] == left_regular`` of ``b_i b_j``).
* Right modules are left modules over ``opposite(A)``; ``is_opposite``
  records which side of the original ring a value lives on.
* path_A2 composes arrows left to right: ``e1 * alpha = alpha = alpha * e2``.
  Its left module ``A e1`` is the one-dimensional projective simple.
"""
from dataclasses import dataclass, field
from functools import cached_property
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
from loguru import logger

from config import settings
from exceptions import AlgebraValidationError, SpecParseError
from linalg import FpMatrix, kernel_basis, rank, row_space, prime_field


InjDim = Union[int, str, None]


@dataclass(frozen=True)
class BoundedVerdict:
    """
    Result of a search for the smallest ``d <= bound`` with some property.

    ``value is None`` means the property failed at every degree up to ``bound``.
    """

    value: Optional[int]
    bound: int

    @property
    def bounded(self) -> bool:
        return self.value is not None

    def __str__(self) -> str:
        return f"<= {self.value}" if self.value is not None else f"> {self.bound}"

    def exact_str(self) -> str:
        return f"= {self.value}" if self.value is not None else f"> {self.bound}"


@dataclass(frozen=True, eq=False)
class Algebra:
    """Associative unital F_p-algebra with a chosen basis."""

    name: str
    p: int
    basis: Tuple[str, ...]
    constants: np.ndarray
    unit: np.ndarray
    declared_radical: Optional[Tuple[Tuple[int, ...], ...]] = None
    declared_injdim: InjDim = None
    is_opposite: bool = False
    _validated: bool = field(default=False, repr=False)

    def __post_init__(self):
        n = len(self.basis)
        prime_field(self.p)
        c = np.mod(np.asarray(self.constants, dtype=np.int64), self.p)
        u = np.mod(np.asarray(self.unit, dtype=np.int64), self.p)
        if c.shape != (n, n, n):
            raise AlgebraValidationError(f"Structure constants must have shape {(n, n, n)}, got {c.shape}")
        if u.shape != (n,):
            raise AlgebraValidationError(f"Unit must have length {n}, got {u.shape}")
        c.flags.writeable = False
        u.flags.writeable = False
        object.__setattr__(self, "constants", c)
        object.__setattr__(self, "unit", u)
        if not self._validated:
            self.validate()

    # Identity

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def side(self) -> str:
        return "right" if self.is_opposite else "left"

    @property
    def key(self) -> tuple:
        return (self.p, self.basis, self.constants.tobytes(), self.unit.tobytes(), self.is_opposite)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Algebra):
            return NotImplemented
        return self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)

    def __repr__(self) -> str:
        return f"Algebra({self.name!r}, p={self.p}, dim={self.dim}, side={self.side})"

    # Validation

    def validate(self):
        """
        Check associativity on all basis triples and the two-sided unit law.

        Raises:
            AlgebraValidationError: naming the first offending triple or basis element
        """
        c, p, n = self.constants, self.p, self.dim
        if n == 0:
            raise AlgebraValidationError("The zero ring is not supported")
        lhs = np.mod(np.einsum("ijm,mkl->ijkl", c, c), p)
        rhs = np.mod(np.einsum("jkm,iml->ijkl", c, c), p)
        bad = np.argwhere(np.any(lhs != rhs, axis=3))
        if bad.size:
            i, j, k = (int(x) for x in bad[0])
            raise AlgebraValidationError(
                f"Associativity fails on basis triple ({self.basis[i]}, {self.basis[j]}, {self.basis[k]})"
            )
        eye = np.eye(n, dtype=np.int64)
        left_unit = np.mod(np.einsum("i,ijk->jk", self.unit, c), p)
        right_unit = np.mod(np.einsum("j,ijk->ik", self.unit, c), p)
        for name, table in (("unit * b", left_unit), ("b * unit", right_unit)):
            rows = np.flatnonzero(np.any(table != eye, axis=1))
            if rows.size:
                b = self.basis[int(rows[0])]
                raise AlgebraValidationError(f"Unit law fails: {name} != b for the pair (unit, {b})")
        if self.declared_radical is not None:
            self._verify_declared_radical()

    # Multiplication

    def multiply(self, x: Sequence[int], y: Sequence[int]) -> np.ndarray:
        """Product of two coefficient vectors."""
        x = np.asarray(x, dtype=np.int64)
        y = np.asarray(y, dtype=np.int64)
        return np.mod(np.einsum("i,j,ijk->k", x, y, self.constants), self.p)

    def lmul(self, r: Sequence[int]) -> FpMatrix:
        """Matrix of left multiplication x -> r x."""
        r = np.asarray(r, dtype=np.int64)
        return FpMatrix.from_array(self.p, np.einsum("i,ijk->kj", r, self.constants))

    def rmul(self, r: Sequence[int]) -> FpMatrix:
        """Matrix of right multiplication x -> x r."""
        r = np.asarray(r, dtype=np.int64)
        return FpMatrix.from_array(self.p, np.einsum("l,ilk->ki", r, self.constants))

    @cached_property
    def left_regular(self) -> Tuple[FpMatrix, ...]:
        return tuple(FpMatrix.from_array(self.p, self.constants[i].T) for i in range(self.dim))

    @cached_property
    def right_regular(self) -> Tuple[FpMatrix, ...]:
        return tuple(FpMatrix.from_array(self.p, self.constants[:, j, :].T) for j in range(self.dim))

    def element(self, coeffs: Sequence[int]) -> "RingElement":
        return RingElement(self, tuple(int(c) % self.p for c in coeffs))

    def one(self) -> "RingElement":
        return self.element(self.unit)

    def basis_element(self, i: int) -> "RingElement":
        v = [0] * self.dim
        v[i] = 1
        return self.element(v)

    # Derived algebras

    def opposite(self) -> "Algebra":
        """The opposite algebra: b_i *op b_j = b_j * b_i."""
        name = self.name[:-3] if self.name.endswith("^op") else f"{self.name}^op"
        return Algebra(
            name=name,
            p=self.p,
            basis=self.basis,
            constants=np.swapaxes(self.constants, 0, 1).copy(),
            unit=self.unit.copy(),
            declared_radical=self.declared_radical,
            declared_injdim=self.declared_injdim,
            is_opposite=not self.is_opposite,
            _validated=True,
        )

    @property
    def base(self) -> "Algebra":
        """The underlying ring with left-side orientation."""
        return self.opposite() if self.is_opposite else self

    # Radical

    def _span_products(self, left: np.ndarray, right: np.ndarray) -> FpMatrix:
        """Row space spanned by all products x*y, x a row of ``left``, y a row of ``right``."""
        if left.shape[0] == 0 or right.shape[0] == 0:
            return FpMatrix.zeros(self.p, 0, self.dim)
        prods = np.einsum("ai,bj,ijk->abk", left, right, self.constants).reshape(-1, self.dim)
        return row_space(FpMatrix.from_array(self.p, prods))

    def is_ideal(self, rows: FpMatrix) -> bool:
        """True when the span of ``rows`` is a two-sided ideal."""
        basis = row_space(rows)
        if basis.rows == 0:
            return True
        eye = np.eye(self.dim, dtype=np.int64)
        both = np.vstack([
            self._span_products(eye, basis.ints).ints,
            self._span_products(basis.ints, eye).ints,
        ])
        return rank(FpMatrix.from_array(self.p, np.vstack([basis.ints, both]))) == basis.rows

    def nilpotency_index(self, rows: FpMatrix) -> Optional[int]:
        """Smallest k with I^k = 0 for the ideal I spanned by ``rows``, or None."""
        ideal = row_space(rows)
        power, k = ideal, 1
        while power.rows:
            nxt = self._span_products(power.ints, ideal.ints)
            if nxt.rows == power.rows:
                return None
            power, k = nxt, k + 1
        return k - 1 if ideal.rows else 0

    def _verify_declared_radical(self):
        rows = FpMatrix.from_rows(self.p, self.declared_radical, cols=self.dim)
        if not self.is_ideal(rows):
            raise AlgebraValidationError("Declared radical is not a two-sided ideal")
        if self.nilpotency_index(rows) is None:
            raise AlgebraValidationError("Declared radical is not nilpotent")

    def _trace_form(self, x: np.ndarray, i: int) -> int:
        """(Tr(L_x^(p^i)) mod p^(i+1)) / p^i on the integer lift of the left regular matrix."""
        modulus = self.p ** (i + 1)
        lift = np.einsum("i,ijk->kj", x, self.constants) % self.p
        result = np.eye(self.dim, dtype=object)
        base = lift.astype(object)
        e = self.p ** i
        while e:
            if e & 1:
                result = (result @ base) % modulus
            base = (base @ base) % modulus
            e >>= 1
        return int((np.trace(result) % modulus) // (self.p ** i))

    def compute_radical(self) -> FpMatrix:
        """
        Largest nilpotent ideal, by iterated trace-form refinement.

        Starting from A, the i-th step keeps the elements a of the previous
        ideal with g_i(a b) = 0 for every basis element b, where g_i is the
        p^i-power trace form. g_i is linear on the previous ideal, so each
        step is a kernel computation.
        """
        n, p = self.dim, self.p
        levels = 0
        while p ** (levels + 1) <= n:
            levels += 1
        current = FpMatrix.identity(p, n)
        for i in range(levels + 1):
            if current.rows == 0:
                break
            vecs = current.ints
            form = np.zeros((current.rows, n), dtype=np.int64)
            for s, v in enumerate(vecs):
                for j in range(n):
                    form[s, j] = self._trace_form(self.multiply(v, np.eye(n, dtype=np.int64)[j]), i)
            coeffs = kernel_basis(FpMatrix.from_array(p, form).T)
            current = row_space(coeffs @ current) if coeffs.rows else FpMatrix.zeros(p, 0, n)
            logger.debug(f"Radical refinement step {i}: dim {current.rows}")
        return current

    @cached_property
    def radical_basis(self) -> FpMatrix:
        """
        Canonical basis of rad(A), one coefficient vector per row.

        A declared radical is trusted after the ideal and nilpotency checks,
        and compared against the computed radical when dim <= the configured limit.
        """
        if self.declared_radical is None:
            return self.compute_radical()
        declared = row_space(FpMatrix.from_rows(self.p, self.declared_radical, cols=self.dim))
        if self.dim <= settings.radical_verify_max_dim:
            computed = self.compute_radical()
            if computed != declared:
                raise AlgebraValidationError(
                    f"Declared radical has dim {declared.rows}, computed radical has dim {computed.rows}"
                )
        else:
            logger.warning(f"Radical maximality not verified for {self.name} (dim {self.dim})")
        return declared

    def radical(self) -> FpMatrix:
        return self.radical_basis

    @property
    def radical_dim(self) -> int:
        return self.radical_basis.rows

    # Homological metadata

    def injdim_bounded(self, bound: int) -> BoundedVerdict:
        """
        Smallest d <= bound with Ext^(d+1)(A/rad A, A) = 0 on both sides.

        Args:
            bound: Largest injective dimension tried

        Returns:
            BoundedVerdict with the maximum of the left and right answers
        """
        from homology import injdim_side

        left = injdim_side(self.base, bound)
        right = injdim_side(self.base.opposite(), bound)
        if left is None or right is None:
            return BoundedVerdict(None, bound)
        return BoundedVerdict(max(left, right), bound)

    # Text form

    def to_spec_text(self) -> str:
        """Serialize the underlying (left-oriented) ring in ring-spec grammar."""
        a = self.base
        lines = [f"ring {a.name} p={a.p} dim={a.dim}", "basis " + " ".join(a.basis)]
        lines.append("unit " + " ".join(str(int(x)) for x in a.unit))
        for i in range(a.dim):
            for j in range(a.dim):
                if np.any(a.constants[i, j]):
                    coeffs = " ".join(str(int(x)) for x in a.constants[i, j])
                    lines.append(f"mul {i} {j} = {coeffs}")
        if a.declared_radical is not None:
            idx = _radical_indices(a.declared_radical)
            if idx is not None:
                lines.append("radical " + " ".join(str(k) for k in idx))
        if a.declared_injdim is not None:
            lines.append(f"injdim {a.declared_injdim}")
        return "\n".join(lines) + "\n"


def _radical_indices(rows: Tuple[Tuple[int, ...], ...]) -> Optional[List[int]]:
    """Basis indices when every declared radical vector is a standard basis vector."""
    idx = []
    for r in rows:
        nz = [k for k, c in enumerate(r) if c]
        if len(nz) != 1 or r[nz[0]] != 1:
            return None
        idx.append(nz[0])
    return idx


@dataclass(frozen=True, eq=False)
class RingElement:
    """Element of an algebra as a coefficient vector."""

    algebra: Algebra
    coeffs: Tuple[int, ...]

    def __post_init__(self):
        if len(self.coeffs) != self.algebra.dim:
            raise ValueError(f"Element needs {self.algebra.dim} coefficients, got {len(self.coeffs)}")

    def __mul__(self, other: "RingElement") -> "RingElement":
        return self.algebra.element(self.algebra.multiply(self.coeffs, other.coeffs))

    def __add__(self, other: "RingElement") -> "RingElement":
        return self.algebra.element([a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __sub__(self, other: "RingElement") -> "RingElement":
        return self.algebra.element([a - b for a, b in zip(self.coeffs, other.coeffs)])

    def __eq__(self, other) -> bool:
        if not isinstance(other, RingElement):
            return NotImplemented
        return self.algebra == other.algebra and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash((self.algebra, self.coeffs))

    def is_zero(self) -> bool:
        return not any(self.coeffs)


# Parsing


def _strip(line: str) -> str:
    return line.split("#", 1)[0].strip()


def _int(token: str, lineno: int, source: Optional[str]) -> int:
    try:
        return int(token)
    except ValueError:
        raise SpecParseError(f"Expected an integer, got {token!r}", lineno, source)


def parse_algebra(text: str, source: Optional[str] = None) -> Algebra:
    """
    Parse and validate a ring-spec document.

    Args:
        text: Ring-spec text
        source: Optional file name used in diagnostics

    Returns:
        Validated Algebra
    """
    header = None
    basis = unit = radical = injdim = None
    products = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _strip(raw)
        if not line:
            continue
        tokens = line.split()
        key = tokens[0]
        if header is None:
            if key != "ring" or len(tokens) != 4:
                raise SpecParseError("Expected header 'ring <name> p=<prime> dim=<n>'", lineno, source)
            fields = dict(t.split("=", 1) for t in tokens[2:] if "=" in t)
            if set(fields) != {"p", "dim"}:
                raise SpecParseError("Header needs p=<prime> and dim=<n>", lineno, source)
            p = _int(fields["p"], lineno, source)
            n = _int(fields["dim"], lineno, source)
            try:
                prime_field(p)
            except ValueError as e:
                raise SpecParseError(str(e), lineno, source)
            if n < 1:
                raise SpecParseError(f"dim must be positive, got {n}", lineno, source)
            header = (tokens[1], p, n)
            continue
        _, p, n = header
        if key == "basis":
            if len(tokens) != n + 1:
                raise SpecParseError(f"basis needs {n} labels", lineno, source)
            basis = tuple(tokens[1:])
        elif key == "unit":
            if len(tokens) != n + 1:
                raise SpecParseError(f"unit needs {n} coefficients", lineno, source)
            unit = [_int(t, lineno, source) for t in tokens[1:]]
        elif key == "mul":
            if len(tokens) != n + 4 or tokens[3] != "=":
                raise SpecParseError(f"Expected 'mul <i> <j> = <{n} coefficients>'", lineno, source)
            i, j = _int(tokens[1], lineno, source), _int(tokens[2], lineno, source)
            if not (0 <= i < n and 0 <= j < n):
                raise SpecParseError(f"Basis index out of range in mul {i} {j}", lineno, source)
            if (i, j) in products:
                raise SpecParseError(f"Duplicate product mul {i} {j}", lineno, source)
            products[(i, j)] = [_int(t, lineno, source) for t in tokens[4:]]
        elif key == "radical":
            idx = [_int(t, lineno, source) for t in tokens[1:]]
            if any(not 0 <= k < n for k in idx):
                raise SpecParseError("Radical index out of range", lineno, source)
            radical = tuple(tuple(1 if c == k else 0 for c in range(n)) for k in idx)
        elif key == "injdim":
            if len(tokens) != 2:
                raise SpecParseError("Expected 'injdim <d|inf>'", lineno, source)
            injdim = "inf" if tokens[1] == "inf" else _int(tokens[1], lineno, source)
        else:
            raise SpecParseError(f"Unrecognized key {key!r}", lineno, source)

    if header is None:
        raise SpecParseError("Missing ring header", None, source)
    name, p, n = header
    if basis is None or unit is None:
        raise SpecParseError("Ring spec needs both 'basis' and 'unit' lines", None, source)
    constants = np.zeros((n, n, n), dtype=np.int64)
    for (i, j), coeffs in products.items():
        constants[i, j] = coeffs
    algebra = Algebra(
        name=name,
        p=p,
        basis=basis,
        constants=constants,
        unit=np.asarray(unit),
        declared_radical=radical,
        declared_injdim=injdim,
    )
    logger.debug(f"Parsed ring {name}: p={p}, dim={n}")
    return algebra


# Builders


def _std(n: int, idx: Sequence[int]) -> Tuple[Tuple[int, ...], ...]:
    return tuple(tuple(1 if c == k else 0 for c in range(n)) for k in idx)


def prime_field_algebra(p: int) -> Algebra:
    """F_p as a one-dimensional algebra."""
    return Algebra(
        name=f"F{p}",
        p=p,
        basis=("1",),
        constants=np.ones((1, 1, 1), dtype=np.int64),
        unit=np.ones(1, dtype=np.int64),
        declared_radical=(),
        declared_injdim=0,
    )


def dual_numbers(p: int, n: int = 2) -> Algebra:
    """k[x]/(x^n)."""
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    c = np.zeros((n, n, n), dtype=np.int64)
    for i in range(n):
        for j in range(n - i):
            c[i, j, i + j] = 1
    unit = np.zeros(n, dtype=np.int64)
    unit[0] = 1
    labels = ("1",) + tuple("x" if k == 1 else f"x{k}" for k in range(1, n))
    return Algebra(
        name=f"dual{n}_p{p}",
        p=p,
        basis=labels,
        constants=c,
        unit=unit,
        declared_radical=_std(n, range(1, n)),
        declared_injdim=0,
    )


def three_dim_local(p: int) -> Algebra:
    """k[x,y]/(x^2, xy, y^2)."""
    c = np.zeros((3, 3, 3), dtype=np.int64)
    for i in range(3):
        c[0, i, i] = 1
        c[i, 0, i] = 1
    return Algebra(
        name=f"local3_p{p}",
        p=p,
        basis=("1", "x", "y"),
        constants=c,
        unit=np.array([1, 0, 0]),
        declared_radical=_std(3, [1, 2]),
    )


def path_A2(p: int) -> Algebra:
    """Path algebra of 1 -> 2: basis e1, e2, alpha with e1 alpha = alpha = alpha e2."""
    c = np.zeros((3, 3, 3), dtype=np.int64)
    c[0, 0, 0] = 1
    c[1, 1, 1] = 1
    c[0, 2, 2] = 1
    c[2, 1, 2] = 1
    return Algebra(
        name=f"pathA2_p{p}",
        p=p,
        basis=("e1", "e2", "alpha"),
        constants=c,
        unit=np.array([1, 1, 0]),
        declared_radical=_std(3, [2]),
        declared_injdim=1,
    )


def triangular_over(b: Algebra) -> Algebra:
    """
    Upper triangular 2x2 matrices with entries in ``b``.

    Basis E11 (x) b_i, E12 (x) b_i, E22 (x) b_i in that block order.
    """
    b = b.base
    n = b.dim
    blocks = [(0, 0), (0, 1), (1, 1)]
    c = np.zeros((3 * n, 3 * n, 3 * n), dtype=np.int64)
    for s, (r1, c1) in enumerate(blocks):
        for t, (r2, c2) in enumerate(blocks):
            if c1 != r2:
                continue
            u = blocks.index((r1, c2))
            c[s * n:(s + 1) * n, t * n:(t + 1) * n, u * n:(u + 1) * n] = b.constants
    unit = np.concatenate([b.unit, np.zeros(n, dtype=np.int64), b.unit])
    rad = b.radical_basis.ints
    rows = [np.concatenate([r, np.zeros(2 * n, dtype=np.int64)]) for r in rad]
    rows += [np.concatenate([np.zeros(n, dtype=np.int64), e, np.zeros(n, dtype=np.int64)])
             for e in np.eye(n, dtype=np.int64)]
    rows += [np.concatenate([np.zeros(2 * n, dtype=np.int64), r]) for r in rad]
    labels = tuple(f"{blk}{lbl}" for blk in ("E11.", "E12.", "E22.") for lbl in b.basis)
    injdim = 1 if b.declared_injdim == 0 else None
    return Algebra(
        name=f"tri_{b.name}",
        p=b.p,
        basis=labels,
        constants=c,
        unit=unit,
        declared_radical=tuple(tuple(int(x) for x in r) for r in rows),
        declared_injdim=injdim,
    )


BUILDERS = {
    "field": lambda p: prime_field_algebra(p),
    "dual": lambda p: dual_numbers(p, 2),
    "local3": three_dim_local,
    "pathA2": path_A2,
    "tri_dual": lambda p: triangular_over(dual_numbers(p, 2)),
}


def build_named(name: str, p: int = 2) -> Algebra:
    """Look up one of the built-in test algebras by short name."""
    try:
        return BUILDERS[name](p)
    except KeyError:
        raise ValueError(f"Unknown algebra {name!r}; choose from {sorted(BUILDERS)}")
