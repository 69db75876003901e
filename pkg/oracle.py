"""
Independent brute-force verifiers and small-instance enumerators.

The rechecker and the Ext oracle call none of the radical, resolution, Hom,
exactness or projectivity code of algebra / fpmod / homology / gorenstein.
They work from raw action matrices and the algebra's structure constants,
using only linalg, and make different choices: the radical is found by
brute force over ring elements, generators are lifted from the top by
walking standard vectors from last to first (non-minimal over non-local
algebras), kernels are restricted by solving instead of left inverses, and
the Ext cochain complex is read off the F_p differentials applied to units.

Module enumeration is the exception: it yields engine PresentedModules and
dedups with the engine's radical layers and iso probes, so its output can be
fed straight to the engine under test.
"""
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product
from typing import Any, Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np
from loguru import logger

from algebra import Algebra
from certificates import CertificateRecord, ObjectRecord, to_record
from config import settings
from exceptions import GtransError
from gorenstein import MODE_RING, VERDICT_GP, VERDICT_NOT_GP
from fpmod import (
    TAG_FREE,
    TAG_GP,
    TAG_GP_BOUNDED,
    TAG_PROJECTIVE,
    PresentedModule,
    from_representation,
    iso_probe,
    radical_layers,
    zero_module,
)
from linalg import FpMatrix, column_space, kernel_basis, quotient_map, rank, row_space, solve, solve_matrix

MAX_EXT_DEGREE = 8
MAX_ENUMERATION_DIM = 5
MAX_RADICAL_ELEMENTS = 2 ** 16
DEDUP_RAW = "raw"
DEDUP_ISO = "iso"


# Regular representations straight from the structure constants


def _lmul(algebra: Algebra, a: np.ndarray) -> np.ndarray:
    """Matrix of u -> a u."""
    return np.mod(np.einsum("k,kjo->oj", np.asarray(a, dtype=np.int64), algebra.constants), algebra.p)


def _rmul(algebra: Algebra, a: np.ndarray) -> np.ndarray:
    """Matrix of u -> u a."""
    return np.mod(np.einsum("k,jko->oj", np.asarray(a, dtype=np.int64), algebra.constants), algebra.p)


def _free_stack(algebra: Algebra, g: int) -> List[np.ndarray]:
    """Action of each basis element on A^g, block by block."""
    n = algebra.dim
    out = []
    for k in range(n):
        block = algebra.constants[k].T
        mat = np.zeros((g * n, g * n), dtype=np.int64)
        for t in range(g):
            mat[t * n:(t + 1) * n, t * n:(t + 1) * n] = block
        out.append(mat)
    return out


def _ints(actions: Sequence) -> List[np.ndarray]:
    return [a.ints if isinstance(a, FpMatrix) else np.asarray(a, dtype=np.int64) for a in actions]


# Radical by brute force


def _row_basis(p: int, rows: np.ndarray, n: int) -> np.ndarray:
    if rows.shape[0] == 0:
        return np.zeros((0, n), dtype=np.int64)
    return row_space(FpMatrix.from_array(p, rows)).ints


def _products(algebra: Algebra, left: np.ndarray, right: np.ndarray) -> np.ndarray:
    """Every product l r, one coefficient row each."""
    prods = np.einsum("ai,bj,ijk->abk", left, right, algebra.constants)
    return np.mod(prods.reshape(-1, algebra.dim), algebra.p)


def _nilpotent_left_ideal(algebra: Algebra, a: np.ndarray) -> bool:
    """True when L = A a satisfies L^k = 0 for some k."""
    p, n = algebra.p, algebra.dim
    ideal = _row_basis(p, _products(algebra, np.eye(n, dtype=np.int64), a[None, :]), n)
    power = ideal
    while power.shape[0]:
        nxt = _row_basis(p, _products(algebra, ideal, power), n)
        if nxt.shape[0] == power.shape[0]:
            return False
        power = nxt
    return True


@lru_cache(maxsize=32)
def oracle_radical(algebra: Algebra) -> np.ndarray:
    """
    Canonical basis rows of rad A, searched over all p^dim ring elements.

    a lies in the radical iff the left ideal A a is nilpotent.

    Raises:
        GtransError: p^dim exceeds MAX_RADICAL_ELEMENTS
    """
    p, n = algebra.p, algebra.dim
    if p ** n > MAX_RADICAL_ELEMENTS:
        raise GtransError(f"Oracle radical needs p^dim <= {MAX_RADICAL_ELEMENTS}, got {p}^{n}")
    found = np.zeros((0, n), dtype=np.int64)
    for coeffs in product(range(p), repeat=n):
        a = np.array(coeffs, dtype=np.int64)
        if not a.any():
            continue
        if found.shape[0] and _rank(p, np.vstack([found, a])) == found.shape[0]:
            continue
        if _nilpotent_left_ideal(algebra, a):
            found = _row_basis(p, np.vstack([found, a]), n)
    return found


# Resolution


def _top_lift(algebra: Algebra, actions: List[np.ndarray], d: int) -> np.ndarray:
    """Standard vectors, last to first, completing rad M to a spanning set."""
    p = algebra.p
    rad = oracle_radical(algebra)
    span = [np.mod(np.einsum("k,kab->ab", r, np.stack(actions)), p) for r in rad] if d and len(rad) else []
    current = np.hstack(span) if span else np.zeros((d, 0), dtype=np.int64)
    current_rank = rank(FpMatrix.from_array(p, current)) if current.size else 0
    chosen = []
    for i in reversed(range(d)):
        e = np.zeros((d, 1), dtype=np.int64)
        e[i, 0] = 1
        trial = np.hstack([current, e])
        r = rank(FpMatrix.from_array(p, trial))
        if r > current_rank:
            chosen.append(i)
            current, current_rank = trial, r
        if current_rank == d:
            break
    gens = np.zeros((d, len(chosen)), dtype=np.int64)
    for t, i in enumerate(chosen):
        gens[i, t] = 1
    return gens


def _cover(algebra: Algebra, actions: List[np.ndarray], gens: np.ndarray) -> np.ndarray:
    """Column (t, j) is b_j applied to generator t."""
    d, g = gens.shape
    n = algebra.dim
    cover = np.zeros((d, g * n), dtype=np.int64)
    for t in range(g):
        for j in range(n):
            cover[:, t * n + j] = actions[j] @ gens[:, t]
    return np.mod(cover, algebra.p)


def _restrict(algebra: Algebra, ambient: List[np.ndarray], basis: np.ndarray) -> List[np.ndarray]:
    """Actions on the submodule spanned by the columns of ``basis``."""
    p = algebra.p
    b = FpMatrix.from_array(p, basis)
    out = []
    for a in ambient:
        x = solve_matrix(b, FpMatrix.from_array(p, a @ basis))
        if x is None:
            raise GtransError("Oracle kernel is not a submodule")
        out.append(x.ints)
    return out


def oracle_resolution(algebra: Algebra, actions: Sequence, length: int) -> List[np.ndarray]:
    """
    Differentials d_1..d_length of a free resolution of M (column convention).

    Returns:
        List whose entry i-1 is the matrix of d_i: F_i -> F_{i-1}; the matrix
        of the augmentation F_0 -> M is prepended at index 0 via ``cover``
    """
    p, n = algebra.p, algebra.dim
    acts = _ints(actions)
    d = acts[0].shape[0] if acts else 0
    gens = _top_lift(algebra, acts, d)
    cover = _cover(algebra, acts, gens)
    differentials = [cover]
    for _ in range(length):
        cols = cover.shape[1]
        if cols == 0:
            differentials.append(np.zeros((0, 0), dtype=np.int64))
            cover = np.zeros((0, 0), dtype=np.int64)
            continue
        ker = kernel_basis(FpMatrix.from_array(p, cover)).ints.T if cover.shape[0] else np.eye(cols, dtype=np.int64)
        if ker.shape[1] == 0:
            differentials.append(np.zeros((cols, 0), dtype=np.int64))
            cover = np.zeros((0, 0), dtype=np.int64)
            continue
        free = _free_stack(algebra, cols // n)
        sub = _restrict(algebra, free, ker)
        k_gens = _top_lift(algebra, sub, ker.shape[1])
        k_cover = _cover(algebra, sub, k_gens)
        differentials.append(np.mod(ker @ k_cover, p))
        cover = k_cover
    return differentials


def _coboundary(algebra: Algebra, diff: np.ndarray, g_prev: int) -> np.ndarray:
    """Hom(F_{i-1}, A) -> Hom(F_i, A) for the differential ``diff``: F_i -> F_{i-1}."""
    n, p = algebra.dim, algebra.p
    g_next = diff.shape[1] // n if diff.size else 0
    delta = np.zeros((g_next * n, g_prev * n), dtype=np.int64)
    for s in range(g_next):
        unit_image = diff[:, s * n:(s + 1) * n] @ algebra.unit
        for t in range(g_prev):
            delta[s * n:(s + 1) * n, t * n:(t + 1) * n] = _lmul(algebra, unit_image[t * n:(t + 1) * n])
    return np.mod(delta, p)


def _ext_from(algebra: Algebra, actions: Sequence, top: int) -> List[int]:
    """dim Ext^i for i = 0..top from one resolution."""
    p, n = algebra.p, algebra.dim
    diffs = oracle_resolution(algebra, actions, top + 1)
    gens = [diffs[0].shape[1] // n] + [dm.shape[1] // n if dm.size else 0 for dm in diffs[1:]]
    deltas = [_coboundary(algebra, diffs[i + 1], gens[i]) for i in range(top + 1)]
    dims = []
    for i in range(top + 1):
        nullity = gens[i] * n - (rank(FpMatrix.from_array(p, deltas[i])) if deltas[i].size else 0)
        incoming = rank(FpMatrix.from_array(p, deltas[i - 1])) if i and deltas[i - 1].size else 0
        dims.append(nullity - incoming)
    return dims


def ext_oracle(m: PresentedModule, i: int) -> int:
    """
    dim Ext^i(M, R) through the oracle's own resolution.

    Args:
        m: Module
        i: Degree, 0 <= i <= 8

    Returns:
        Dimension over F_p
    """
    if not 0 <= i <= MAX_EXT_DEGREE:
        raise ValueError(f"Oracle degree must lie in [0, {MAX_EXT_DEGREE}], got {i}")
    return _ext_from(m.algebra, m.actions, i)[i]


def ext_oracle_table(algebra: Algebra, actions: Sequence, top: int) -> List[int]:
    """dim Ext^i for i = 1..top."""
    if top < 1:
        return []
    if top > MAX_EXT_DEGREE:
        raise ValueError(f"Oracle degree must lie in [0, {MAX_EXT_DEGREE}], got {top}")
    return _ext_from(algebra, actions, top)[1:]


def oracle_transpose(algebra: Algebra, actions: Sequence) -> Tuple[Algebra, List[np.ndarray]]:
    """
    Tr M as Coker(Hom(F_0, A) -> Hom(F_1, A)) with A acting on the right.

    Returns:
        (opposite algebra, action matrices of the transpose)
    """
    p, n = algebra.p, algebra.dim
    diffs = oracle_resolution(algebra, actions, 1)
    g0 = diffs[0].shape[1] // n
    delta = _coboundary(algebra, diffs[1], g0)
    g1 = delta.shape[0] // n
    total = g1 * n
    opposite = algebra.opposite()
    if total == 0:
        return opposite, [np.zeros((0, 0), dtype=np.int64) for _ in range(n)]
    image = column_space(FpMatrix.from_array(p, delta)) if delta.size else FpMatrix.zeros(p, 0, total)
    q, s = quotient_map(total, image)
    out = []
    for k in range(n):
        block = _rmul(algebra, np.eye(n, dtype=np.int64)[k])
        right = np.zeros((total, total), dtype=np.int64)
        for t in range(g1):
            right[t * n:(t + 1) * n, t * n:(t + 1) * n] = block
        out.append(np.mod(q.ints @ right @ s.ints, p))
    return opposite, out


# Enumeration


@dataclass(frozen=True)
class EnumerationSpec:
    algebra: Algebra
    max_dim: int
    seed: int = 0
    dedup: str = DEDUP_RAW
    min_dim: int = 0

    def __post_init__(self):
        cap = min(MAX_ENUMERATION_DIM, settings.enumeration_max_dim)
        if not 0 <= self.min_dim <= self.max_dim <= cap:
            raise ValueError(f"Enumeration dimensions must satisfy 0 <= min <= max <= {cap}")
        if self.dedup not in (DEDUP_RAW, DEDUP_ISO):
            raise ValueError(f"Unknown dedup mode {self.dedup!r}")


class _Budget:
    def __init__(self, limit: int):
        self.limit = limit
        self.used = 0
        self.exhausted = False

    def spend(self, k: int) -> bool:
        self.used += k
        if self.used > self.limit and not self.exhausted:
            self.exhausted = True
            logger.warning(f"Enumeration budget of {self.limit} candidate matrices exhausted; output truncated")
        return not self.exhausted


class _StructureSolver:
    """
    Backtracking search for action tuples on F_p^d.

    Basis elements in the unit's support are assigned first; the last of them
    is fixed by the unit equation. Each new matrix X is drawn from the affine
    space cut out by the linear constraints A_i X = sum c A_k and X A_i = sum c A_k
    whose other terms are already known; every remaining product rule is
    checked as soon as all its terms are assigned.
    """

    def __init__(self, algebra: Algebra, d: int, rng: np.random.Generator, budget: _Budget):
        self.algebra = algebra
        self.d = d
        self.p = algebra.p
        self.budget = budget
        unit_support = [k for k in range(algebra.dim) if algebra.unit[k]]
        self.pivot = unit_support[-1]
        head = [k for k in unit_support if k != self.pivot]
        tail = [k for k in range(algebra.dim) if not algebra.unit[k]]
        rng.shuffle(head)
        rng.shuffle(tail)
        self.order = head + tail
        self.head_len = len(head)
        self.pivot_inv = pow(int(algebra.unit[self.pivot]), -1, self.p)
        self.support = {
            (i, j): [int(k) for k in np.flatnonzero(algebra.constants[i, j])]
            for i in range(algebra.dim) for j in range(algebra.dim)
        }

    def _ready(self, assigned) -> set:
        return {
            pair for pair, sup in self.support.items()
            if pair[0] in assigned and pair[1] in assigned and all(k in assigned for k in sup)
        }

    def _linear_system(self, b: int, assigned: Dict[int, np.ndarray]):
        d, p = self.d, self.p
        eye = np.eye(d, dtype=np.int64)
        blocks, rhs = [], []
        for i, a in assigned.items():
            for left, right in ((i, b), (b, i)):
                c = self.algebra.constants[left, right]
                if any(k != b and k not in assigned for k in self.support[(left, right)]):
                    continue
                lhs = np.kron(a, eye) if left == i else np.kron(eye, a.T)
                lhs = lhs - int(c[b]) * np.eye(d * d, dtype=np.int64)
                known = sum((int(c[k]) * assigned[k] for k in self.support[(left, right)] if k != b),
                            np.zeros((d, d), dtype=np.int64))
                blocks.append(lhs)
                rhs.append(known.reshape(-1))
        if not blocks:
            return np.zeros(d * d, dtype=np.int64), np.eye(d * d, dtype=np.int64)
        system = FpMatrix.from_array(p, np.vstack(blocks))
        target = FpMatrix.from_array(p, np.concatenate(rhs).reshape(-1, 1))
        particular = solve(system, target)
        if particular is None:
            return None, None
        return particular.ints[:, 0], kernel_basis(system).ints

    def _candidates(self, particular: np.ndarray, kernel: np.ndarray) -> Iterator[np.ndarray]:
        """Batches of (N, d, d) candidates from the affine space."""
        d, p = self.d, self.p
        k = kernel.shape[0]
        chunk = max(1, 4096 // max(1, p))
        combos = product(range(p), repeat=k)
        while True:
            block = [c for _, c in zip(range(chunk), combos)]
            if not block:
                return
            if not self.budget.spend(len(block)):
                return
            coeffs = np.asarray(block, dtype=np.int64).reshape(len(block), k)
            flat = np.mod(particular[None, :] + coeffs @ kernel, p)
            yield flat.reshape(len(block), d, d)

    def _check(self, values: Dict[int, np.ndarray], pairs, n_batch: int) -> np.ndarray:
        ok = np.ones(n_batch, dtype=bool)
        for i, j in pairs:
            lhs = np.mod(np.einsum("...ab,...bc->...ac", values[i], values[j]), self.p)
            rhs = np.zeros_like(lhs)
            for k in self.support[(i, j)]:
                rhs = rhs + int(self.algebra.constants[i, j, k]) * values[k]
            diff = np.broadcast_to(np.mod(lhs - rhs, self.p), (n_batch, self.d, self.d))
            ok &= ~np.any(diff.reshape(n_batch, -1), axis=1)
        return ok

    def _pivot_value(self, values: Dict[int, np.ndarray]) -> np.ndarray:
        rest = sum((int(self.algebra.unit[k]) * values[k] for k in self.order[:self.head_len]),
                   np.zeros((self.d, self.d), dtype=np.int64))
        return np.mod(self.pivot_inv * (np.eye(self.d, dtype=np.int64) - rest), self.p)

    def solve(self) -> Iterator[List[np.ndarray]]:
        start: Dict[int, np.ndarray] = {}
        if self.head_len == 0:
            start[self.pivot] = self._pivot_value(start)
            if not self._check(start, self._ready(start), 1)[0]:
                return
        yield from self._extend(0, start)

    def _extend(self, level: int, assigned: Dict[int, np.ndarray]) -> Iterator[List[np.ndarray]]:
        if self.budget.exhausted:
            return
        if level == len(self.order):
            yield [assigned[k] for k in range(self.algebra.dim)]
            return
        b = self.order[level]
        particular, kernel = self._linear_system(b, assigned)
        if particular is None:
            return
        before = self._ready(assigned)
        after_keys = set(assigned) | {b}
        fixes_pivot = level == self.head_len - 1
        if fixes_pivot:
            after_keys.add(self.pivot)
        pairs = self._ready(after_keys) - before
        for batch in self._candidates(particular, kernel):
            values = {k: v[None] for k, v in assigned.items()}
            values[b] = batch
            if fixes_pivot:
                values[self.pivot] = self._pivot_value(values)
            ok = self._check(values, pairs, batch.shape[0])
            for idx in np.flatnonzero(ok):
                nxt = dict(assigned)
                nxt[b] = batch[idx]
                if fixes_pivot:
                    pv = values[self.pivot]
                    nxt[self.pivot] = pv[idx] if pv.ndim == 3 and pv.shape[0] > 1 else pv.reshape(self.d, self.d)
                yield from self._extend(level + 1, nxt)
                if self.budget.exhausted:
                    return


def enumerate_modules(spec: EnumerationSpec) -> Iterator[PresentedModule]:
    """
    Every module structure on F_p^d for min_dim <= d <= max_dim.

    Dimensions are solved one after another with a seeded element order; with
    ``dedup="iso"`` modules are bucketed by (dim, radical layers) and dropped
    when iso_probe finds an isomorphism to an earlier one.
    """
    algebra = spec.algebra
    budget = _Budget(settings.enumeration_budget)
    buckets: Dict[Tuple, List[PresentedModule]] = {}
    count = 0
    for d in range(spec.min_dim, spec.max_dim + 1):
        rng = np.random.default_rng([spec.seed, d])
        if d == 0:
            candidates = [zero_module(algebra)]
        else:
            solver = _StructureSolver(algebra, d, rng, budget)
            candidates = (
                from_representation(algebra, [FpMatrix.from_array(algebra.p, a) for a in acts], name=f"M{d}")
                for acts in solver.solve()
            )
        for m in candidates:
            if spec.dedup == DEDUP_ISO:
                key = (m.dim, radical_layers(m))
                bucket = buckets.setdefault(key, [])
                if any(iso_probe(m, other, seed=spec.seed).isomorphic for other in bucket):
                    continue
                bucket.append(m)
            count += 1
            yield m
        if budget.exhausted:
            break
    logger.debug(f"Enumerated {count} modules over {algebra.name} ({budget.used} candidates)")


# Rechecking certificates


@dataclass
class RecheckResult:
    passed: bool
    diffs: List[str] = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.passed


def _axiom_diffs(algebra: Algebra, obj: ObjectRecord, label: str) -> List[str]:
    n, p, d = algebra.dim, algebra.p, obj.dim
    if len(obj.actions) != n:
        return [f"{label}: {len(obj.actions)} action matrices for a {n}-dimensional algebra"]
    if any(a.shape != (d, d) for a in obj.actions):
        return [f"{label}: action matrices are not {d}x{d}"]
    if d == 0:
        return []
    acts = [np.mod(a, p) for a in obj.actions]
    for i in range(n):
        for j in range(n):
            rhs = np.zeros((d, d), dtype=np.int64)
            for k in range(n):
                rhs = rhs + int(algebra.constants[i, j, k]) * acts[k]
            if np.any(np.mod(acts[i] @ acts[j] - rhs, p)):
                return [f"{label}: product rule fails for ({algebra.basis[i]}, {algebra.basis[j]})"]
    unit = sum(int(algebra.unit[k]) * acts[k] for k in range(n))
    if np.any(np.mod(unit - np.eye(d, dtype=np.int64), p)):
        return [f"{label}: unit does not act as the identity"]
    return []


def _generator_diffs(algebra: Algebra, obj: ObjectRecord, label: str) -> List[str]:
    gens = np.asarray(obj.generators, dtype=np.int64)
    if gens.shape[0] != obj.dim:
        return [f"{label}: generator matrix has {gens.shape[0]} rows, expected {obj.dim}"]
    if obj.dim == 0:
        return []
    cover = _cover(algebra, obj.actions, gens)
    if rank(FpMatrix.from_array(algebra.p, cover)) != obj.dim:
        return [f"{label}: stored generators do not generate"]
    return []


def _map_diffs(algebra: Algebra, source: ObjectRecord, target: ObjectRecord, m: np.ndarray, label: str) -> List[str]:
    if m.shape != (target.dim, source.dim):
        return [f"{label}: shape {m.shape}, expected {(target.dim, source.dim)}"]
    for k in range(algebra.dim):
        if np.any(np.mod(m @ source.actions[k] - target.actions[k] @ m, algebra.p)):
            return [f"{label}: not linear for {algebra.basis[k]}"]
    return []


def _rank(p: int, m: np.ndarray) -> int:
    return rank(FpMatrix.from_array(p, m)) if m.size else 0


def _node_diffs(p: int, f: np.ndarray, g: np.ndarray, node: Tuple[np.ndarray, np.ndarray], index: int) -> List[str]:
    label = f"node {index}"
    dim = f.shape[0]
    if g.size and f.size and np.any(np.mod(g @ f, p)):
        return [f"{label}: composite of the adjacent maps is nonzero"]
    rf, rg = _rank(p, f), _rank(p, g)
    if rf + rg != dim:
        return [f"{label}: rank {rf} + rank {rg} != {dim}, not exact"]
    im, ker = (np.asarray(x, dtype=np.int64) for x in node)
    if im.shape != (rf, dim) or ker.shape != (dim - rg, dim):
        return [f"{label}: stored bases have shapes {im.shape}, {ker.shape}"]
    if rf == 0:
        return []
    if not np.array_equal(np.mod(im, p), np.mod(ker, p)):
        return [f"{label}: stored image and kernel bases differ"]
    if _rank(p, im) != rf or _rank(p, np.hstack([f, im.T])) != rf:
        return [f"{label}: stored image basis does not span the image"]
    if g.size and np.any(np.mod(g @ ker.T, p)):
        return [f"{label}: stored kernel basis is not in the kernel"]
    return []


def _is_free(algebra: Algebra, obj: ObjectRecord) -> bool:
    g = obj.generators.shape[1]
    return obj.dim == g * algebra.dim and _rank(algebra.p, _cover(algebra, obj.actions, obj.generators)) == obj.dim


def _splitting_diffs(algebra: Algebra, obj: ObjectRecord, label: str) -> List[str]:
    p = algebra.p
    s = np.asarray(obj.splitting, dtype=np.int64)
    cover = _cover(algebra, obj.actions, obj.generators)
    if s.shape != (cover.shape[1], obj.dim):
        return [f"{label}: splitting has shape {s.shape}"]
    if obj.dim and np.any(np.mod(cover @ s - np.eye(obj.dim, dtype=np.int64), p)):
        return [f"{label}: splitting is not a section of the cover"]
    free = _free_stack(algebra, obj.generators.shape[1])
    for k in range(algebra.dim):
        if np.any(np.mod(s @ obj.actions[k] - free[k] @ s, p)):
            return [f"{label}: splitting is not linear"]
    return []


def _injdim_diff(algebra: Algebra, degree: int) -> Optional[str]:
    """
    None when Ext^(k+1)(A / rad A, A) = 0 on both sides for some k <= degree.

    Only degrees up to MAX_EXT_DEGREE are computed; a claim that needs more
    is reported as not verifiable.
    """
    top_degree = min(degree + 1, MAX_EXT_DEGREE)
    p, n = algebra.p, algebra.dim
    tables = []
    for ring in (algebra.base, algebra.base.opposite()):
        regular = [_lmul(ring, np.eye(n, dtype=np.int64)[k]) for k in range(n)]
        rad = oracle_radical(ring)
        sub = FpMatrix.from_array(p, rad) if rad.shape[0] else FpMatrix.zeros(p, 0, n)
        q, s = quotient_map(n, sub)
        top = [np.mod(q.ints @ a @ s.ints, p) for a in regular]
        tables.append(_ext_from(ring, top, top_degree))
    for k in range(top_degree):
        if not any(table[k + 1] for table in tables):
            return None
    if degree + 1 > MAX_EXT_DEGREE:
        return f"injective dimension {degree} not verifiable beyond degree {MAX_EXT_DEGREE}"
    return f"ring mode but injective dimension exceeds {degree}"


def _gp_diffs(algebra: Algebra, obj: ObjectRecord, label: str) -> List[str]:
    gp = obj.gp
    diffs = []
    table = ext_oracle_table(algebra, obj.actions, len(gp.ext_table))
    if table != list(gp.ext_table):
        diffs.append(f"{label}: Ext table {gp.ext_table} != oracle {table}")
    if gp.transpose_table:
        tr_algebra, tr_actions = oracle_transpose(algebra, obj.actions)
        tr_table = ext_oracle_table(tr_algebra, tr_actions, len(gp.transpose_table))
        if tr_table != list(gp.transpose_table):
            diffs.append(f"{label}: transpose Ext table {gp.transpose_table} != oracle {tr_table}")
    if gp.verdict == VERDICT_NOT_GP:
        tables = {"module": gp.ext_table, "transpose": gp.transpose_table}
        side = tables.get(gp.witness_side or "", ())
        w = gp.witness_degree
        if w is None or not 1 <= w <= len(side) or not side[w - 1]:
            diffs.append(f"{label}: not-GP verdict without a nonzero witness")
    else:
        if any(gp.ext_table) or any(gp.transpose_table):
            diffs.append(f"{label}: {gp.verdict} verdict with nonzero Ext")
        if len(gp.ext_table) != gp.degree or len(gp.transpose_table) != gp.degree:
            diffs.append(f"{label}: tables do not reach degree {gp.degree}")
        if gp.mode == MODE_RING:
            injdim = _injdim_diff(algebra, gp.degree)
            if injdim:
                diffs.append(f"{label}: {injdim}")
    return diffs


def _tag_diffs(algebra: Algebra, obj: ObjectRecord, label: str) -> List[str]:
    if obj.tag == TAG_FREE and obj.splitting is None:
        return [] if _is_free(algebra, obj) else [f"{label}: tagged free but is not free on its generators"]
    if obj.tag in (TAG_FREE, TAG_PROJECTIVE):
        if obj.splitting is None:
            return [f"{label}: tagged {obj.tag} without a splitting"]
        return _splitting_diffs(algebra, obj, label)
    if obj.tag in (TAG_GP, TAG_GP_BOUNDED):
        if obj.gp is None:
            return [f"{label}: tagged {obj.tag} without GP tables"]
        if obj.tag == TAG_GP and obj.gp.verdict != VERDICT_GP:
            return [f"{label}: tagged GP with verdict {obj.gp.verdict}"]
    return []


def recheck_record(rec: CertificateRecord) -> RecheckResult:
    diffs: List[str] = []
    try:
        algebra = rec.algebra()
    except GtransError as e:
        return RecheckResult(False, [f"ring: {e}"])
    p = algebra.p
    for i, obj in enumerate(rec.objects):
        label = f"object {i}"
        obj_diffs = _axiom_diffs(algebra, obj, label)
        if not obj_diffs:
            obj_diffs = _generator_diffs(algebra, obj, label) or _tag_diffs(algebra, obj, label)
            if not obj_diffs and obj.gp is not None:
                try:
                    obj_diffs = _gp_diffs(algebra, obj, label)
                except (GtransError, ValueError) as e:
                    obj_diffs = [f"{label}: GP tables not rechecked: {e}"]
        diffs.extend(obj_diffs)
    if diffs:
        return RecheckResult(False, diffs)
    if rec.maps:
        if len(rec.maps) != len(rec.objects) - 1:
            return RecheckResult(False, [f"{len(rec.maps)} maps for {len(rec.objects)} objects"])
        for i, m in enumerate(rec.maps):
            diffs.extend(_map_diffs(algebra, rec.objects[i], rec.objects[i + 1], np.asarray(m), f"map {i}"))
        if len(rec.nodes) != len(rec.maps) - 1:
            diffs.append(f"{len(rec.nodes)} node certificates for {len(rec.maps)} maps")
        if not diffs:
            for i, node in enumerate(rec.nodes):
                diffs.extend(_node_diffs(p, np.asarray(rec.maps[i]), np.asarray(rec.maps[i + 1]), node, i + 1))
    return RecheckResult(not diffs, diffs)


def recheck(obj: Any) -> RecheckResult:
    """
    Re-validate a CertifiedSequence, GPCertificate or certificate record from raw data.

    Returns:
        RecheckResult; ``diffs`` locates every failing object, map or node
    """
    result = recheck_record(to_record(obj))
    if not result:
        for diff in result.diffs:
            logger.debug(f"recheck: {diff}")
    return result


def mutation_sweep(record: Any, count: int = 100, seed: int = 0) -> Dict[str, Any]:
    """
    Apply ``count`` seeded single-entry mutations and recheck each one.

    A mutation that recheck accepts left a valid certificate behind (for
    instance a different generating set) and is counted as benign.
    """
    base = to_record(record)
    p = base.algebra().p
    rng = np.random.default_rng(seed)
    detected, benign = 0, []
    slots = [(label, m.shape) for label, m in base.matrices() if m.size]
    if not slots:
        return {"mutations": 0, "detected": 0, "benign": 0, "benign_locations": []}
    for _ in range(count):
        mutated = base.copy()
        arrays = [m for _, m in mutated.matrices() if m.size]
        which = int(rng.integers(len(arrays)))
        target = arrays[which]
        idx = tuple(int(rng.integers(s)) for s in target.shape)
        target[idx] = (int(target[idx]) + int(rng.integers(1, p))) % p
        if recheck_record(mutated):
            benign.append(f"{slots[which][0]} entry {idx}")
        else:
            detected += 1
    logger.info(f"Mutation sweep: {detected}/{count} detected, {len(benign)} benign")
    return {"mutations": count, "detected": detected, "benign": len(benign), "benign_locations": benign}
