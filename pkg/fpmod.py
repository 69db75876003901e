"""
Finitely presented modules over an Algebra and their homomorphisms.

A module is carried in two synchronized forms:

* ``relations``: an array of shape (m, g, n); row j is an element of the free
  module A^g, and the module is A^g modulo the submodule the rows generate.
* ``actions``: one d x d matrix per basis element of A acting on F_p^d.

The F_p coordinates of A^g are g blocks of n coordinates; generator t is the
unit of A placed in block t. The cover A^g -> M has columns A_k y_t where y_t
is the image of generator t (column t of ``gen_embedding``).
"""
from dataclasses import dataclass, field
from functools import cached_property
from itertools import product
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np
from loguru import logger

from algebra import Algebra
from config import settings
from exceptions import CertificationError, ModuleAxiomError, NotAModuleMapError
from linalg import (
    FpMatrix,
    block_diag,
    column_space,
    hstack,
    kernel_basis,
    left_inverse,
    quotient_map,
    rank,
    row_space,
    solve_matrix,
    vstack,
)


def _stack(p: int, mats: Sequence[FpMatrix], d: int) -> np.ndarray:
    if not mats:
        return np.zeros((0, d, d), dtype=np.int64)
    return np.stack([m.ints for m in mats])


def realization(algebra: Algebra, relations: np.ndarray) -> FpMatrix:
    """F_p matrix of A^m -> A^g, e_j -> relation row j; block (t, j) is right multiplication by rel[j, t]."""
    m, g, n = relations.shape
    if m == 0 or g == 0:
        return FpMatrix.zeros(algebra.p, g * n, m * n)
    blocks = np.einsum("jtl,ilk->tkji", relations, algebra.constants)
    return FpMatrix.from_array(algebra.p, blocks.reshape(g * n, m * n))


def free_actions(algebra: Algebra, g: int) -> List[FpMatrix]:
    eye = np.eye(g, dtype=np.int64)
    return [FpMatrix.from_array(algebra.p, np.kron(eye, lm.ints)) for lm in algebra.left_regular]


def cover_for(algebra: Algebra, action_stack: np.ndarray, images: FpMatrix) -> FpMatrix:
    """Matrix of A^g -> M sending generator t to column t of ``images``."""
    d, g = images.shape
    if d == 0 or g == 0:
        return FpMatrix.zeros(algebra.p, d, g * algebra.dim)
    cols = np.einsum("kab,bt->atk", action_stack, images.ints)
    return FpMatrix.from_array(algebra.p, cols.reshape(d, g * algebra.dim))


@dataclass(frozen=True, eq=False)
class PresentedModule:
    """Finitely presented left module over ``algebra`` (right modules live over its opposite)."""

    algebra: Algebra
    relations: np.ndarray
    actions: Tuple[FpMatrix, ...]
    gen_embedding: FpMatrix
    name: str = ""

    def __post_init__(self):
        rel = np.mod(np.asarray(self.relations, dtype=np.int64), self.algebra.p)
        if rel.ndim != 3 or rel.shape[2] != self.algebra.dim:
            raise ModuleAxiomError(f"Relations need shape (m, g, {self.algebra.dim}), got {rel.shape}")
        rel.flags.writeable = False
        object.__setattr__(self, "relations", rel)
        object.__setattr__(self, "actions", tuple(self.actions))
        check_module_axioms(self.algebra, self.actions, self.dim)
        if self.gen_embedding.shape != (self.dim, self.num_generators):
            raise ModuleAxiomError(
                f"Generator embedding must be {self.dim}x{self.num_generators}, got {self.gen_embedding.shape}"
            )
        cover = self.cover_matrix
        real = realization(self.algebra, rel)
        if rank(cover) != self.dim:
            raise ModuleAxiomError("Generators do not span the representation")
        if not (cover @ real).is_zero() or rank(real) != cover.cols - self.dim:
            raise ModuleAxiomError("Relations do not present the representation")

    # Shape

    @property
    def p(self) -> int:
        return self.algebra.p

    @property
    def dim(self) -> int:
        return self.gen_embedding.rows

    @property
    def num_generators(self) -> int:
        return self.relations.shape[1]

    @property
    def num_relations(self) -> int:
        return self.relations.shape[0]

    @property
    def side(self) -> str:
        return self.algebra.side

    def is_zero(self) -> bool:
        return self.dim == 0

    def is_free(self) -> bool:
        """No relations: the module is A^g itself."""
        return self.num_relations == 0

    def describe(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "dim": self.dim,
            "generators": self.num_generators,
            "relations": self.num_relations,
            "side": self.side,
        }

    def __repr__(self) -> str:
        return (
            f"PresentedModule({self.name or '?'}, dim={self.dim}, gens={self.num_generators}, "
            f"rels={self.num_relations}, side={self.side})"
        )

    # Action helpers

    @cached_property
    def action_stack(self) -> np.ndarray:
        return _stack(self.p, self.actions, self.dim)

    def act(self, r: Sequence[int]) -> FpMatrix:
        """Matrix of x -> r x for a coefficient vector r."""
        r = np.asarray(r, dtype=np.int64)
        if self.dim == 0:
            return FpMatrix.zeros(self.p, 0, 0)
        return FpMatrix.from_array(self.p, np.einsum("k,kab->ab", r, self.action_stack))

    def same_representation(self, other: "PresentedModule") -> bool:
        if self is other:
            return True
        return (
            self.algebra == other.algebra
            and self.dim == other.dim
            and np.array_equal(self.action_stack, other.action_stack)
        )

    @cached_property
    def cover_matrix(self) -> FpMatrix:
        """F_p matrix of the free cover A^g -> M (d x g*n)."""
        return cover_for(self.algebra, self.action_stack, self.gen_embedding)

    @cached_property
    def cover_section(self) -> FpMatrix:
        """F_p section S of the cover, cover @ S = I."""
        sol = solve_matrix(self.cover_matrix, FpMatrix.identity(self.p, self.dim))
        if sol is None:
            raise ModuleAxiomError("Cover is not surjective")
        return sol

    @cached_property
    def radical_submodule(self) -> FpMatrix:
        """Canonical row basis of rad(A) M."""
        rad = self.algebra.radical_basis
        if rad.rows == 0 or self.dim == 0:
            return FpMatrix.zeros(self.p, 0, self.dim)
        return column_space(hstack(self.p, [self.act(r) for r in rad.ints]))

    @cached_property
    def dual_data(self) -> "DualData":
        return _compute_dual(self)


def check_module_axioms(algebra: Algebra, actions: Sequence[FpMatrix], d: int):
    """
    Verify A_i A_j = sum_k c_ijk A_k and unit action = identity.

    Raises:
        ModuleAxiomError: naming the first failing basis pair
    """
    n, p = algebra.dim, algebra.p
    if len(actions) != n:
        raise ModuleAxiomError(f"Need {n} action matrices, got {len(actions)}")
    for i, a in enumerate(actions):
        if a.shape != (d, d) or a.p != p:
            raise ModuleAxiomError(f"Action of {algebra.basis[i]} must be {d}x{d} over F_{p}")
    if d == 0:
        return
    act = np.stack([a.ints for a in actions])
    lhs = np.mod(np.einsum("iab,jbc->ijac", act, act), p)
    rhs = np.mod(np.einsum("ijk,kac->ijac", algebra.constants, act), p)
    bad = np.argwhere(np.any(lhs != rhs, axis=(2, 3)))
    if bad.size:
        i, j = (int(x) for x in bad[0])
        raise ModuleAxiomError(
            f"Action fails on basis pair ({algebra.basis[i]}, {algebra.basis[j]})"
        )
    unit = np.mod(np.einsum("k,kab->ab", algebra.unit, act), p)
    if not np.array_equal(unit, np.eye(d, dtype=np.int64)):
        raise ModuleAxiomError("Unit does not act as the identity")


# Constructors


def _as_relations(algebra: Algebra, rel, generators: Optional[int]) -> np.ndarray:
    arr = np.asarray(rel, dtype=np.int64)
    if arr.size == 0:
        g = generators if generators is not None else (arr.shape[1] if arr.ndim == 3 else 0)
        return np.zeros((0, g, algebra.dim), dtype=np.int64)
    if arr.ndim != 3 or arr.shape[2] != algebra.dim:
        raise ModuleAxiomError(f"Relation matrix must have shape (m, g, {algebra.dim}), got {arr.shape}")
    if generators is not None and arr.shape[1] != generators:
        raise ModuleAxiomError(f"Relations have {arr.shape[1]} columns but {generators} generators declared")
    return arr


def from_presentation(algebra: Algebra, rel, generators: Optional[int] = None, name: str = "") -> PresentedModule:
    """
    Module presented as the cokernel of A^m -> A^g.

    Args:
        algebra: Ring the module lives over
        rel: Relation matrix of shape (m, g, dim); row j is an element of A^g
        generators: Generator count, needed when there are no relations
        name: Label used in reports

    Returns:
        PresentedModule whose representation is the cokernel
    """
    rel = _as_relations(algebra, rel, generators)
    m, g, n = rel.shape
    real = realization(algebra, rel)
    q, s = quotient_map(g * n, column_space(real) if m else FpMatrix.zeros(algebra.p, 0, g * n))
    actions = [q @ a @ s for a in free_actions(algebra, g)]
    units = np.zeros((g * n, g), dtype=np.int64)
    for t in range(g):
        units[t * n:(t + 1) * n, t] = algebra.unit
    embedding = q @ FpMatrix.from_array(algebra.p, units)
    return PresentedModule(algebra, rel, actions, embedding, name)


def free_module(algebra: Algebra, g: int, name: str = "") -> PresentedModule:
    return from_presentation(algebra, np.zeros((0, g, algebra.dim)), generators=g, name=name or f"A^{g}")


def zero_module(algebra: Algebra) -> PresentedModule:
    return free_module(algebra, 0, name="0")


def _kernel_as_module(algebra: Algebra, actions: Sequence[FpMatrix], cover: FpMatrix):
    """Kernel of an F_p cover matrix as (basis columns, restricted actions)."""
    g_n = cover.cols
    basis = kernel_basis(cover).T if g_n else FpMatrix.zeros(algebra.p, 0, 0)
    if basis.cols == 0:
        return basis, [FpMatrix.zeros(algebra.p, 0, 0) for _ in range(algebra.dim)]
    inv = left_inverse(basis)
    return basis, [inv @ a @ basis for a in actions]


def top_quotient(algebra: Algebra, actions: Sequence[FpMatrix], d: int):
    """Actions on M / rad(A) M together with the (Q, S) coordinates."""
    p = algebra.p
    rad = algebra.radical_basis
    stack = _stack(p, actions, d)
    if rad.rows and d:
        parts = [FpMatrix.from_array(p, np.einsum("k,kab->ab", r, stack)) for r in rad.ints]
        sub = column_space(hstack(p, parts))
    else:
        sub = FpMatrix.zeros(p, 0, d)
    q, s = quotient_map(d, sub)
    return [q @ a @ s for a in actions], q, s


def generator_lower_bound(algebra: Algebra, top_dim: int) -> int:
    """Fewest generators a module whose top has dimension ``top_dim`` can have."""
    semisimple_dim = algebra.dim - algebra.radical_basis.rows
    return -(-top_dim // semisimple_dim)


def generators_verified_minimal(m: "PresentedModule") -> bool:
    """True when the generator count of ``m`` meets the lower bound from its top."""
    _, q, _ = top_quotient(m.algebra, m.actions, m.dim)
    return m.num_generators == generator_lower_bound(m.algebra, q.rows)


def minimal_generators(algebra: Algebra, actions: Sequence[FpMatrix], d: int) -> FpMatrix:
    """
    Generator columns whose images form a minimal generating set of M / rad M.

    Greedy search on the top: each step adds the vector v maximizing the
    dimension of U + A v, where U is the span generated so far. Standard
    complement vectors are tried first, then seeded random combinations.
    Lifts of generators of the top generate M by Nakayama.
    """
    p = algebra.p
    top, q, s = top_quotient(algebra, actions, d)
    dt = q.rows
    if dt == 0:
        return FpMatrix.zeros(p, d, 0)
    top_stack = _stack(p, top, dt)
    semisimple_dim = algebra.dim - algebra.radical_basis.rows
    rng = np.random.default_rng(settings.default_seed)
    span = FpMatrix.zeros(p, 0, dt)
    chosen = []

    def orbit(v: np.ndarray) -> np.ndarray:
        return np.mod(np.einsum("kab,b->ka", top_stack, v), p)

    while span.rows < dt:
        ceiling = span.rows + min(dt - span.rows, semisimple_dim)
        _, s_u = quotient_map(dt, span)
        candidates = [col for col in s_u.ints.T]
        best, best_dim = None, -1
        trial = 0
        while True:
            if candidates:
                v = candidates.pop(0)
            elif trial < settings.generator_search_trials:
                trial += 1
                v = np.mod(s_u.ints @ rng.integers(0, p, size=s_u.cols), p)
                if not v.any():
                    continue
            else:
                break
            grown = rank(FpMatrix.from_array(p, np.vstack([span.ints, orbit(v)])))
            if grown > best_dim:
                best, best_dim = v, grown
                if grown == ceiling:
                    break
        chosen.append(best)
        span = row_space(FpMatrix.from_array(p, np.vstack([span.ints, orbit(best)])))
    lower = generator_lower_bound(algebra, dt)
    if len(chosen) > lower:
        logger.warning(f"Greedy search found {len(chosen)} generators against a lower bound of {lower}; "
                       f"minimality not verified")
    gens = FpMatrix.from_array(p, np.stack(chosen, axis=1))
    return s @ gens


def top_basis_generators(algebra: Algebra, actions: Sequence[FpMatrix], d: int) -> FpMatrix:
    """Lift of the standard basis of M / rad M; minimal only over local algebras."""
    _, _, s = top_quotient(algebra, actions, d)
    return s


def present_with_generators(algebra: Algebra, actions: Sequence[FpMatrix], gens: FpMatrix, name: str, minimal: bool) -> PresentedModule:
    """Attach relations generating the kernel of the cover determined by ``gens``."""
    p, n = algebra.p, algebra.dim
    d, g = gens.shape
    cover = cover_for(algebra, _stack(p, actions, d), gens)
    basis, kernel_actions = _kernel_as_module(algebra, free_actions(algebra, g), cover)
    k = basis.cols
    if k == 0:
        rel = np.zeros((0, g, n), dtype=np.int64)
    else:
        pick = minimal_generators if minimal else top_basis_generators
        local = pick(algebra, kernel_actions, k)
        vectors = (basis @ local).ints
        rel = vectors.T.reshape(-1, g, n)
    return PresentedModule(algebra, rel, actions, gens, name)


def from_representation(algebra: Algebra, actions: Sequence[FpMatrix], name: str = "", minimal: bool = True) -> PresentedModule:
    """
    Present a module given by action matrices.

    Args:
        algebra: Ring the module lives over
        actions: One d x d matrix per basis element
        name: Label used in reports
        minimal: Minimal generator counts (greedy on the top) or the top-basis lift

    Returns:
        PresentedModule with the given representation
    """
    actions = list(actions)
    d = actions[0].rows if actions else 0
    check_module_axioms(algebra, actions, d)
    pick = minimal_generators if minimal else top_basis_generators
    gens = pick(algebra, actions, d)
    return present_with_generators(algebra, actions, gens, name, minimal)


# Maps


@dataclass(frozen=True, eq=False)
class ModuleMap:
    """R-linear map; ``matrix`` acts on column vectors of the source representation."""

    source: PresentedModule
    target: PresentedModule
    matrix: FpMatrix
    name: str = ""

    def __post_init__(self):
        s, t = self.source, self.target
        if s.algebra != t.algebra:
            raise NotAModuleMapError("Source and target live over different algebras or sides")
        if self.matrix.shape != (t.dim, s.dim):
            raise NotAModuleMapError(f"Map matrix must be {t.dim}x{s.dim}, got {self.matrix.shape}")
        if s.dim and t.dim:
            f = self.matrix.ints
            lhs = np.mod(np.einsum("ab,kbc->kac", f, s.action_stack), s.p)
            rhs = np.mod(np.einsum("kab,bc->kac", t.action_stack, f), s.p)
            bad = np.flatnonzero(np.any(lhs != rhs, axis=(1, 2)))
            if bad.size:
                raise NotAModuleMapError(
                    f"Map does not commute with the action of {s.algebra.basis[int(bad[0])]}"
                )

    @property
    def p(self) -> int:
        return self.source.p

    def compose(self, other: "ModuleMap") -> "ModuleMap":
        """self o other."""
        if not other.target.same_representation(self.source):
            raise NotAModuleMapError("Maps are not composable")
        return ModuleMap(other.source, self.target, self.matrix @ other.matrix)

    def __matmul__(self, other: "ModuleMap") -> "ModuleMap":
        return self.compose(other)

    def __add__(self, other: "ModuleMap") -> "ModuleMap":
        return ModuleMap(self.source, self.target, self.matrix + other.matrix)

    def __neg__(self) -> "ModuleMap":
        return ModuleMap(self.source, self.target, -self.matrix)

    @property
    def rank(self) -> int:
        return rank(self.matrix)

    def is_zero(self) -> bool:
        return self.matrix.is_zero()

    def is_injective(self) -> bool:
        return self.rank == self.source.dim

    def is_surjective(self) -> bool:
        return self.rank == self.target.dim

    def is_iso(self) -> bool:
        return self.source.dim == self.target.dim and self.is_injective()

    def retarget(self, source: PresentedModule, target: PresentedModule) -> "ModuleMap":
        """Same matrix between structurally equal modules."""
        if not (source.same_representation(self.source) and target.same_representation(self.target)):
            raise NotAModuleMapError("Retargeting needs structurally equal modules")
        return ModuleMap(source, target, self.matrix, self.name)


def identity_map(m: PresentedModule) -> ModuleMap:
    return ModuleMap(m, m, FpMatrix.identity(m.p, m.dim), "id")


def zero_map(source: PresentedModule, target: PresentedModule) -> ModuleMap:
    return ModuleMap(source, target, FpMatrix.zeros(source.p, target.dim, source.dim), "0")


def free_cover(m: PresentedModule) -> ModuleMap:
    """The cover A^g -> M sending generator t to y_t."""
    return ModuleMap(free_module(m.algebra, m.num_generators), m, m.cover_matrix, "cover")


# Sub- and quotient modules


def submodule(m: PresentedModule, basis_cols: FpMatrix, name: str = "", minimal: bool = True) -> Tuple[PresentedModule, ModuleMap]:
    """Submodule spanned by independent columns, with its inclusion."""
    if basis_cols.cols == 0:
        z = zero_module(m.algebra)
        return z, zero_map(z, m)
    inv = left_inverse(basis_cols)
    actions = [inv @ a @ basis_cols for a in m.actions]
    sub = from_representation(m.algebra, actions, name=name, minimal=minimal)
    return sub, ModuleMap(sub, m, basis_cols, "incl")


def quotient_module(m: PresentedModule, sub_rows: FpMatrix, name: str = "") -> Tuple[PresentedModule, ModuleMap, FpMatrix]:
    """
    Quotient by the submodule spanned by ``sub_rows``.

    Returns:
        Tuple of (quotient, projection map, F_p section of the projection)
    """
    q, s = quotient_map(m.dim, sub_rows)
    actions = [q @ a @ s for a in m.actions]
    quo = from_representation(m.algebra, actions, name=name)
    return quo, ModuleMap(m, quo, q, "proj"), s


def kernel(f: ModuleMap, name: str = "") -> Tuple[PresentedModule, ModuleMap]:
    """Kernel with its inclusion into the source."""
    return submodule(f.source, kernel_basis(f.matrix).T, name=name or "Ker")


def image(f: ModuleMap, name: str = "") -> Tuple[PresentedModule, ModuleMap]:
    """Image with its inclusion into the target."""
    basis = column_space(f.matrix)
    return submodule(f.target, basis.T, name=name or "Im")


def image_factorization(f: ModuleMap) -> Tuple[PresentedModule, ModuleMap, ModuleMap]:
    """f = inclusion o corestriction through Im f."""
    im, inc = image(f)
    coeffs = solve_matrix(inc.matrix, f.matrix)
    return im, ModuleMap(f.source, im, coeffs, "onto"), inc


def cokernel(f: ModuleMap, name: str = "") -> Tuple[PresentedModule, ModuleMap]:
    """Cokernel with its projection from the target."""
    quo, proj, _ = quotient_module(f.target, column_space(f.matrix), name=name or "Coker")
    return quo, proj


# Direct sums


@dataclass(frozen=True, eq=False)
class DirectSum:
    module: PresentedModule
    injections: Tuple[ModuleMap, ...]
    projections: Tuple[ModuleMap, ...]


def direct_sum(ms: Sequence[PresentedModule], name: str = "") -> DirectSum:
    """
    Block direct sum with injections and projections.

    Args:
        ms: Summands over one algebra and side

    Returns:
        DirectSum bundle
    """
    if not ms:
        raise ValueError("direct_sum needs at least one summand")
    algebra = ms[0].algebra
    for m in ms:
        if m.algebra != algebra:
            raise NotAModuleMapError("Summands live over different algebras or sides")
    n, p = algebra.dim, algebra.p
    total_g = sum(m.num_generators for m in ms)
    total_m = sum(m.num_relations for m in ms)
    rel = np.zeros((total_m, total_g, n), dtype=np.int64)
    r0 = g0 = 0
    for m in ms:
        rel[r0:r0 + m.num_relations, g0:g0 + m.num_generators] = m.relations
        r0 += m.num_relations
        g0 += m.num_generators
    actions = [block_diag(p, [m.actions[i] for m in ms]) for i in range(n)]
    embedding = block_diag(p, [m.gen_embedding for m in ms])
    total = PresentedModule(algebra, rel, actions, embedding, name or " + ".join(m.name or "?" for m in ms))
    injections, projections = [], []
    offset = 0
    for m in ms:
        inj = np.zeros((total.dim, m.dim), dtype=np.int64)
        inj[offset:offset + m.dim, :] = np.eye(m.dim, dtype=np.int64)
        injections.append(ModuleMap(m, total, FpMatrix.from_array(p, inj), "inj"))
        projections.append(ModuleMap(total, m, FpMatrix.from_array(p, inj.T), "proj"))
        offset += m.dim
    return DirectSum(total, tuple(injections), tuple(projections))


def map_from_sum(ds: DirectSum, parts: Sequence[ModuleMap], target: PresentedModule) -> ModuleMap:
    """[h_1 | h_2 | ...] : M_1 + M_2 + ... -> target."""
    return ModuleMap(ds.module, target, hstack(target.p, [h.matrix for h in parts], rows=target.dim))


def map_into_sum(source: PresentedModule, parts: Sequence[ModuleMap], ds: DirectSum) -> ModuleMap:
    """(h_1; h_2; ...) : source -> M_1 + M_2 + ..."""
    return ModuleMap(source, ds.module, vstack(source.p, [h.matrix for h in parts], cols=source.dim))


def sum_of_maps(f: ModuleMap, g: ModuleMap) -> Tuple[ModuleMap, DirectSum, DirectSum]:
    """f + g : A + C -> B + D."""
    src = direct_sum([f.source, g.source])
    tgt = direct_sum([f.target, g.target])
    return ModuleMap(src.module, tgt.module, block_diag(f.p, [f.matrix, g.matrix])), src, tgt


# Pushouts and pullbacks


@dataclass(frozen=True, eq=False)
class Pushout:
    module: PresentedModule
    in_b: ModuleMap
    in_c: ModuleMap
    ambient: DirectSum
    section: FpMatrix

    def induced(self, h_b: ModuleMap, h_c: ModuleMap) -> ModuleMap:
        """The unique u with u o in_b = h_b and u o in_c = h_c."""
        joint = hstack(h_b.p, [h_b.matrix, h_c.matrix], rows=h_b.target.dim)
        return ModuleMap(self.module, h_b.target, joint @ self.section, "induced")


@dataclass(frozen=True, eq=False)
class Pullback:
    module: PresentedModule
    pr_b: ModuleMap
    pr_c: ModuleMap
    ambient: DirectSum
    inclusion: FpMatrix

    def induced(self, h_b: ModuleMap, h_c: ModuleMap) -> ModuleMap:
        """The unique u with pr_b o u = h_b and pr_c o u = h_c."""
        joint = vstack(h_b.p, [h_b.matrix, h_c.matrix], cols=h_b.source.dim)
        coeffs = solve_matrix(self.inclusion, joint)
        if coeffs is None:
            raise NotAModuleMapError("Maps do not agree on the common target")
        return ModuleMap(h_b.source, self.module, coeffs, "induced")


def pushout(f: ModuleMap, g: ModuleMap, name: str = "") -> Pushout:
    """
    P = (B + C) / {(f(a), -g(a))} for f: A -> B, g: A -> C.

    Returns:
        Pushout with in_b: B -> P and in_c: C -> P
    """
    if not f.source.same_representation(g.source):
        raise NotAModuleMapError("Pushout needs a common source")
    ds = direct_sum([f.target, g.target])
    joint = vstack(f.p, [f.matrix, -g.matrix], cols=f.source.dim)
    quo, proj, section = quotient_module(ds.module, column_space(joint), name=name or "PO")
    in_b = proj.compose(ds.injections[0])
    in_c = proj.compose(ds.injections[1])
    return Pushout(quo, in_b, in_c, ds, section)


def pullback(f: ModuleMap, g: ModuleMap, name: str = "") -> Pullback:
    """
    P = {(b, c) : f(b) = g(c)} for f: B -> A, g: C -> A.

    Returns:
        Pullback with pr_b: P -> B and pr_c: P -> C
    """
    if not f.target.same_representation(g.target):
        raise NotAModuleMapError("Pullback needs a common target")
    ds = direct_sum([f.source, g.source])
    joint = hstack(f.p, [f.matrix, -g.matrix], rows=f.target.dim)
    basis = kernel_basis(joint).T
    sub, inc = submodule(ds.module, basis, name=name or "PB")
    pr_b = ds.projections[0].compose(inc)
    pr_c = ds.projections[1].compose(inc)
    return Pullback(sub, pr_b, pr_c, ds, basis)


# Hom and duality


def hom_space(m: PresentedModule, n: PresentedModule) -> List[ModuleMap]:
    """
    F_p basis of Hom_R(M, N).

    Unknowns are the generator images y_t in N subject to
    sum_t rel[j, t] y_t = 0 for every relation j.
    """
    if m.algebra != n.algebra:
        raise NotAModuleMapError("Hom needs modules over the same algebra and side")
    p, g, dn = m.p, m.num_generators, n.dim
    if g == 0 or dn == 0:
        return []
    if m.num_relations:
        eqs = np.zeros((m.num_relations * dn, g * dn), dtype=np.int64)
        for j in range(m.num_relations):
            for t in range(g):
                eqs[j * dn:(j + 1) * dn, t * dn:(t + 1) * dn] = n.act(m.relations[j, t]).ints
        solutions = kernel_basis(FpMatrix.from_array(p, eqs))
    else:
        solutions = FpMatrix.identity(p, g * dn)
    maps = []
    section = m.cover_section
    for sol in solutions.ints:
        images = FpMatrix.from_array(p, sol.reshape(g, dn).T)
        psi = cover_for(n.algebra, n.action_stack, images)
        maps.append(ModuleMap(m, n, psi @ section))
    return maps


def hom_dim(m: PresentedModule, n: PresentedModule) -> int:
    return len(hom_space(m, n))


@dataclass(frozen=True, eq=False)
class DualData:
    """M* with the basis of Hom(M, A) its coordinates refer to."""

    module: PresentedModule
    basis: Tuple[FpMatrix, ...]
    vectorized: FpMatrix

    def coordinates(self, phi: FpMatrix) -> FpMatrix:
        """Coordinates of a homomorphism M -> A (as an n x d matrix) in the dual basis."""
        sol = solve_matrix(self.vectorized, phi.flatten_column())
        if sol is None:
            raise NotAModuleMapError("Matrix is not a homomorphism into the ring")
        return sol


def _compute_dual(m: PresentedModule) -> DualData:
    algebra = m.algebra
    ring = free_module(algebra, 1)
    basis = tuple(f.matrix for f in hom_space(m, ring))
    p, n, h = m.p, algebra.dim, len(basis)
    opposite = algebra.opposite()
    if h == 0:
        return DualData(zero_module(opposite), (), FpMatrix.zeros(p, n * m.dim, 0))
    vec = hstack(p, [phi.flatten_column() for phi in basis])
    actions = []
    for r in algebra.right_regular:
        moved = hstack(p, [(r @ phi).flatten_column() for phi in basis])
        actions.append(solve_matrix(vec, moved))
    name = f"({m.name})*" if m.name else "M*"
    return DualData(from_representation(opposite, actions, name=name), basis, vec)


def dual(m: PresentedModule) -> PresentedModule:
    """M* = Hom_R(M, R) as a module on the other side."""
    return m.dual_data.module


def dual_map(f: ModuleMap) -> ModuleMap:
    """f*: N* -> M*, phi -> phi o f."""
    src, tgt = f.target.dual_data, f.source.dual_data
    cols = [tgt.coordinates(psi @ f.matrix) for psi in src.basis]
    matrix = hstack(f.p, cols, rows=tgt.module.dim)
    return ModuleMap(src.module, tgt.module, matrix, f"({f.name})*" if f.name else "")


def sigma(m: PresentedModule) -> ModuleMap:
    """Evaluation map M -> M**, x -> (phi -> phi(x))."""
    first = m.dual_data
    second = first.module.dual_data
    cols = []
    for c in range(m.dim):
        x = np.zeros((m.dim, 1), dtype=np.int64)
        x[c, 0] = 1
        ev = hstack(m.p, [phi @ FpMatrix.from_array(m.p, x) for phi in first.basis], rows=m.algebra.dim)
        cols.append(second.coordinates(ev))
    double = second.module
    matrix = hstack(m.p, cols, rows=double.dim)
    return ModuleMap(m, double, matrix, "sigma")


# Exactness


TAG_FREE = "free"
TAG_PROJECTIVE = "projective"
TAG_GP = "gp"
TAG_GP_BOUNDED = "gp-up-to-bound"
TAG_NONE = "none"


@dataclass(frozen=True, eq=False)
class NodeCertificate:
    """At object ``index``: canonical bases of the incoming image and the outgoing kernel."""

    index: int
    image_basis: FpMatrix
    kernel_basis: FpMatrix

    @property
    def exact(self) -> bool:
        return self.image_basis == self.kernel_basis


@dataclass(frozen=True)
class ExactnessFailure:
    node: int
    image_dim: int
    kernel_dim: int
    reason: str

    def __bool__(self) -> bool:
        return False


@dataclass(frozen=True, eq=False)
class CertifiedSequence:
    """Composable chain with per-node exactness certificates and per-object tags."""

    maps: Tuple[ModuleMap, ...]
    nodes: Tuple[NodeCertificate, ...]
    tags: Tuple[str, ...]
    witnesses: Mapping[int, Any] = field(default_factory=dict)
    name: str = ""

    def __bool__(self) -> bool:
        return True

    @property
    def objects(self) -> Tuple[PresentedModule, ...]:
        return tuple([f.source for f in self.maps] + [self.maps[-1].target])

    @property
    def inner_maps(self) -> Tuple[ModuleMap, ...]:
        """Maps without the zero maps at the two ends."""
        return self.maps[1:-1]

    @property
    def inner_objects(self) -> Tuple[PresentedModule, ...]:
        return self.objects[1:-1]

    def with_tags(self, tags: Mapping[int, str], witnesses: Optional[Mapping[int, Any]] = None) -> "CertifiedSequence":
        """Replace tags (and witnesses) at the given object indices."""
        merged = list(self.tags)
        for i, t in tags.items():
            merged[i] = t
        wit = dict(self.witnesses)
        wit.update(witnesses or {})
        return CertifiedSequence(self.maps, self.nodes, tuple(merged), wit, self.name)

    def tag_inner(self, i: int) -> str:
        return self.tags[i + 1]

    def revalidate(self) -> bool:
        """Recompute every node certificate and compare with the stored bases."""
        fresh = is_exact(list(self.maps), bracket=False)
        if not fresh:
            return False
        return all(a.image_basis == b.image_basis and a.kernel_basis == b.kernel_basis
                   for a, b in zip(fresh.nodes, self.nodes))


def is_exact(maps: Sequence[ModuleMap], bracket: bool = True, name: str = "") -> Union[CertifiedSequence, ExactnessFailure]:
    """
    Check im = ker at every internal node.

    Args:
        maps: Composable chain M_0 -> M_1 -> ... -> M_k
        bracket: Add 0 -> M_0 and M_k -> 0 so injectivity and surjectivity are checked too
        name: Label of the sequence

    Returns:
        CertifiedSequence, or ExactnessFailure naming the first bad node
    """
    maps = list(maps)
    if not maps:
        raise CertificationError("Empty sequence")
    for k in range(len(maps) - 1):
        if not maps[k].target.same_representation(maps[k + 1].source):
            raise CertificationError(f"Maps {k} and {k + 1} are not composable")
    if bracket:
        first, last = maps[0].source, maps[-1].target
        maps = [zero_map(zero_module(first.algebra), first)] + maps + [zero_map(last, zero_module(last.algebra))]
    nodes = []
    for k in range(len(maps) - 1):
        f, g = maps[k], maps[k + 1]
        im = column_space(f.matrix) if f.target.dim else FpMatrix.zeros(f.p, 0, 0)
        ker = row_space(kernel_basis(g.matrix)) if g.source.dim else FpMatrix.zeros(f.p, 0, 0)
        if im.rows != ker.rows or im != ker:
            reason = "image not contained in kernel" if not (g.matrix @ f.matrix).is_zero() else "dimension mismatch"
            logger.debug(f"Sequence not exact at node {k + 1}: dim im {im.rows}, dim ker {ker.rows}")
            return ExactnessFailure(k + 1, im.rows, ker.rows, reason)
        nodes.append(NodeCertificate(k + 1, im, ker))
    objects = [f.source for f in maps] + [maps[-1].target]
    tags = tuple(TAG_FREE if m.is_free() else TAG_NONE for m in objects)
    return CertifiedSequence(tuple(maps), tuple(nodes), tags, {}, name)


def certify(maps: Sequence[ModuleMap], name: str = "") -> CertifiedSequence:
    """is_exact that raises CertificationError on failure."""
    result = is_exact(maps, name=name)
    if not result:
        raise CertificationError(
            f"Sequence {name or ''} not exact at node {result.node}: "
            f"dim im {result.image_dim}, dim ker {result.kernel_dim} ({result.reason})"
        )
    return result


# Projectivity and isomorphism


@dataclass(frozen=True, eq=False)
class ProjectivityVerdict:
    projective: bool
    generators: int
    splitting: Optional[FpMatrix] = None

    def __bool__(self) -> bool:
        return self.projective


def is_projective(m: PresentedModule) -> ProjectivityVerdict:
    """
    Split test for the free cover A^g -> M.

    The witness is an F_p matrix s with cover @ s = id that is R-linear; it
    exists iff M is a direct summand of A^g.
    """
    g, p = m.num_generators, m.p
    if m.is_zero():
        return ProjectivityVerdict(True, 0, FpMatrix.zeros(p, 0, 0))
    if m.is_free():
        return ProjectivityVerdict(True, g, m.cover_section)
    cover = m.cover_matrix
    basis = [h.matrix for h in hom_space(m, free_module(m.algebra, g))]
    if not basis:
        return ProjectivityVerdict(False, g)
    columns = hstack(p, [(cover @ h).flatten_column() for h in basis])
    target = FpMatrix.identity(p, m.dim).flatten_column()
    coeffs = solve_matrix(columns, target)
    if coeffs is None:
        return ProjectivityVerdict(False, g)
    split = FpMatrix.zeros(p, g * m.algebra.dim, m.dim)
    for c, h in zip(coeffs.ints[:, 0], basis):
        if c:
            split = split + h.scale(int(c))
    return ProjectivityVerdict(True, g, split)


def radical_layers(m: PresentedModule) -> Tuple[int, ...]:
    """Dimensions of rad^k M for k = 1, 2, ... until zero or stable."""
    rad = m.algebra.radical_basis
    dims = []
    current = FpMatrix.identity(m.p, m.dim) if m.dim else FpMatrix.zeros(m.p, 0, 0)
    while current.rows:
        if rad.rows == 0:
            break
        parts = [m.act(r) @ current.T for r in rad.ints]
        nxt = column_space(hstack(m.p, parts, rows=m.dim))
        dims.append(nxt.rows)
        if nxt.rows == current.rows:
            break
        current = nxt
    return tuple(dims)


@dataclass(frozen=True, eq=False)
class IsoVerdict:
    status: str
    evidence: str
    witness: Optional[ModuleMap] = None

    @property
    def isomorphic(self) -> bool:
        return self.status == "isomorphic"

    @property
    def conclusive(self) -> bool:
        return self.status != "inconclusive"


def iso_probe(m: PresentedModule, n: PresentedModule, seed: int = 0) -> IsoVerdict:
    """
    Sound semi-decision for M = N.

    Invariants (dimension, radical layers, Hom dimensions) first, then seeded
    random elements of Hom(M, N), then exhaustive search when |Hom| is small.
    """
    if m.algebra != n.algebra:
        raise NotAModuleMapError("iso_probe needs modules over the same algebra and side")
    if m.dim != n.dim:
        return IsoVerdict("not-isomorphic", f"dimension {m.dim} != {n.dim}")
    if m.dim == 0:
        return IsoVerdict("isomorphic", "both zero", zero_map(m, n))
    if radical_layers(m) != radical_layers(n):
        return IsoVerdict("not-isomorphic", f"radical layers {radical_layers(m)} != {radical_layers(n)}")
    basis = hom_space(m, n)
    back = hom_dim(n, m)
    ends_m, ends_n = hom_dim(m, m), hom_dim(n, n)
    if len({len(basis), back, ends_m, ends_n}) != 1:
        return IsoVerdict(
            "not-isomorphic",
            f"Hom dims (M,N)={len(basis)} (N,M)={back} (M,M)={ends_m} (N,N)={ends_n}",
        )
    p = m.p
    stack = np.stack([h.matrix.ints for h in basis])
    rng = np.random.default_rng(seed)

    def attempt(coeffs) -> Optional[IsoVerdict]:
        mat = FpMatrix.from_array(p, np.einsum("s,sab->ab", np.asarray(coeffs, dtype=np.int64), stack))
        if rank(mat) == m.dim:
            return IsoVerdict("isomorphic", "explicit isomorphism", ModuleMap(m, n, mat, "iso"))
        return None

    for unit in np.eye(len(basis), dtype=np.int64):
        found = attempt(unit)
        if found:
            return found
    for _ in range(settings.iso_random_trials):
        found = attempt(rng.integers(0, p, size=len(basis)))
        if found:
            return found
    if p ** len(basis) <= settings.iso_exhaustive_limit:
        for coeffs in product(range(p), repeat=len(basis)):
            found = attempt(coeffs)
            if found:
                return found
        return IsoVerdict("not-isomorphic", "exhaustive Hom search found no isomorphism")
    logger.warning(f"iso_probe inconclusive: |Hom| = {p}^{len(basis)}")
    return IsoVerdict("inconclusive", "invariants match, random search failed")
