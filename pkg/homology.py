"""
Resolutions, Ext(-, R), syzygies, the transpose and torsionfreeness.

Ext^i(M, R) is computed from a free resolution F_. -> M -> 0 as the
cohomology of Hom(F_., R). Hom(A^g, A) is identified with A^g on the other
side (phi -> (phi(e_t))_t), and the coboundary F_i* -> F_(i+1)* has block
(j, t) equal to left multiplication by d_(i+1)[j, t].
"""
from dataclasses import dataclass
from functools import lru_cache
from typing import List, Optional, Tuple

import numpy as np
from loguru import logger

from algebra import Algebra, BoundedVerdict
from config import settings
from exceptions import TheoremFailure
from fpmod import (
    CertifiedSequence,
    IsoVerdict,
    ModuleMap,
    PresentedModule,
    cokernel,
    free_actions,
    free_cover,
    free_module,
    from_presentation,
    from_representation,
    is_exact,
    is_projective,
    iso_probe,
    kernel,
    present_with_generators,
    quotient_module,
    realization,
    sigma,
    zero_map,
    zero_module,
)
from linalg import FpMatrix, column_space, kernel_basis, left_inverse, quotient_map, rank, solve_matrix


@lru_cache(maxsize=1024)
def minimal_presentation(m: PresentedModule) -> PresentedModule:
    """Same representation with a minimal generating set and minimal relations."""
    return from_representation(m.algebra, m.actions, name=m.name)


@lru_cache(maxsize=1024)
def syzygy_step(m: PresentedModule, minimal: bool = True) -> PresentedModule:
    """
    Kernel of the free cover A^g -> M.

    Its generators are the relation rows of M, so the differential
    A^(g_1) -> A^g of a resolution is realized by ``m.relations``.
    """
    algebra, p, n = m.algebra, m.p, m.algebra.dim
    g, r = m.num_generators, m.num_relations
    if r == 0:
        return free_module(algebra, 0, name=f"Omega({m.name})")
    basis = kernel_basis(m.cover_matrix).T
    inv = left_inverse(basis)
    actions = [inv @ a @ basis for a in free_actions(algebra, g)]
    rel_vectors = FpMatrix.from_array(p, m.relations.reshape(r, g * n).T)
    gens = inv @ rel_vectors
    return present_with_generators(algebra, actions, gens, f"Omega({m.name})", minimal)


@dataclass(frozen=True, eq=False)
class FreeResolution:
    """A^(g_L) -> ... -> A^(g_0) -> M -> 0 with syzygies Omega^0 = M, ..., Omega^L."""

    base: PresentedModule
    syzygies: Tuple[PresentedModule, ...]
    minimal: bool

    @property
    def length(self) -> int:
        return len(self.syzygies) - 1

    @property
    def ranks(self) -> Tuple[int, ...]:
        return tuple(s.num_generators for s in self.syzygies)

    def differential(self, i: int) -> np.ndarray:
        """d_i : A^(g_i) -> A^(g_(i-1)) as a relation array of shape (g_i, g_(i-1), n), i >= 1."""
        return self.syzygies[i - 1].relations

    def free(self, i: int) -> PresentedModule:
        return free_module(self.base.algebra, self.syzygies[i].num_generators, name=f"F{i}")

    def differential_map(self, i: int) -> ModuleMap:
        return ModuleMap(self.free(i), self.free(i - 1), realization(self.base.algebra, self.differential(i)), f"d{i}")

    def augmentation(self) -> ModuleMap:
        """F_0 -> M, landing on the base module itself."""
        cover = free_cover(self.syzygies[0])
        return ModuleMap(cover.source, self.base, cover.matrix, "eps")

    def inclusion(self, i: int) -> ModuleMap:
        """Omega^i M -> F_(i-1), i >= 1."""
        basis = kernel_basis(self.syzygies[i - 1].cover_matrix).T
        return ModuleMap(self.syzygies[i], self.free(i - 1), basis, f"incl{i}")

    def certify(self) -> CertifiedSequence:
        """Exactness certificate for F_L -> ... -> F_0 -> M -> 0 (F_L need not inject)."""
        maps = [self.differential_map(i) for i in range(self.length, 0, -1)]
        maps.append(self.augmentation())
        maps.append(zero_map(self.base, zero_module(self.base.algebra)))
        return is_exact(maps, bracket=False)


def free_resolution(m: PresentedModule, length: int, minimal: bool = True) -> FreeResolution:
    """
    Free resolution up to F_length.

    Args:
        m: Module to resolve
        length: Last free module index L >= 0
        minimal: Lift generators from M / rad M at each step

    Returns:
        FreeResolution with syzygies Omega^0..Omega^L
    """
    if length < 0:
        raise ValueError(f"Resolution length must be non-negative, got {length}")
    start = minimal_presentation(m) if minimal else m
    chain = [start]
    for _ in range(length):
        chain.append(syzygy_step(chain[-1], minimal))
    return FreeResolution(m, tuple(chain), minimal)


def syzygy(m: PresentedModule, n: int, minimal: bool = True) -> PresentedModule:
    """Omega^n M from the minimal free resolution."""
    if n < 1:
        raise ValueError(f"Syzygy index must be at least 1, got {n}")
    return free_resolution(m, n, minimal).syzygies[n]


# Ext


@dataclass(frozen=True, eq=False)
class ExtGroup:
    """Ext^i(M, R) as a module on the other side."""

    degree: int
    value: PresentedModule

    @property
    def dim(self) -> int:
        return self.value.dim


def coboundary(algebra: Algebra, resolution: FreeResolution, i: int) -> FpMatrix:
    """F_p matrix of Hom(F_i, R) -> Hom(F_(i+1), R); zero-width when i < 0."""
    n, p = algebra.dim, algebra.p
    if i < 0:
        g0 = resolution.syzygies[0].num_generators
        return FpMatrix.zeros(p, g0 * n, 0)
    d = resolution.differential(i + 1)
    rows, cols = d.shape[0], d.shape[1]
    if rows == 0 or cols == 0:
        return FpMatrix.zeros(p, rows * n, cols * n)
    blocks = np.einsum("jtl,lbk->jktb", d, algebra.constants)
    return FpMatrix.from_array(p, blocks.reshape(rows * n, cols * n))


def _cohomology(opposite: Algebra, before: FpMatrix, after: FpMatrix, g: int, name: str) -> PresentedModule:
    """ker(after) / im(before) inside (R^op)^g."""
    p = opposite.p
    basis = kernel_basis(after).T if g else FpMatrix.zeros(p, 0, 0)
    if basis.cols == 0:
        return free_module(opposite, 0, name=name)
    inv = left_inverse(basis)
    cycles = [inv @ a @ basis for a in free_actions(opposite, g)]
    boundaries = solve_matrix(basis, before)
    q, s = quotient_map(basis.cols, column_space(boundaries) if boundaries.cols else FpMatrix.zeros(p, 0, basis.cols))
    return from_representation(opposite, [q @ a @ s for a in cycles], name=name)


def ext(m: PresentedModule, i: int, minimal: bool = True) -> ExtGroup:
    """
    Ext^i(M, R) with its module structure on the other side.

    Args:
        m: Module
        i: Degree >= 0
        minimal: Resolution type used

    Returns:
        ExtGroup of degree i
    """
    if i < 0:
        raise ValueError(f"Ext degree must be non-negative, got {i}")
    res = free_resolution(m, i, minimal)
    algebra = m.algebra
    before = coboundary(algebra, res, i - 1)
    after = coboundary(algebra, res, i)
    g = res.syzygies[i].num_generators
    value = _cohomology(algebra.opposite(), before, after, g, f"Ext^{i}({m.name})")
    return ExtGroup(i, value)


def ext_dims(m: PresentedModule, bound: int, minimal: bool = True, start: int = 1) -> List[int]:
    """dim Ext^i(M, R) for i = start..bound, from one resolution."""
    if bound < start:
        return []
    res = free_resolution(m, bound, minimal)
    algebra = m.algebra
    deltas = {i: coboundary(algebra, res, i) for i in range(start - 1, bound + 1)}
    dims = []
    for i in range(start, bound + 1):
        g = res.syzygies[i].num_generators
        nullity = g * algebra.dim - rank(deltas[i])
        dims.append(nullity - rank(deltas[i - 1]))
    return dims


def injdim_side(algebra: Algebra, bound: int) -> Optional[int]:
    """Smallest d <= bound with Ext^(d+1)(A / rad A, A) = 0, computed for left modules over ``algebra``."""
    regular = free_module(algebra, 1, name="A")
    top, _, _ = quotient_module(regular, algebra.radical_basis, name="A/radA")
    dims = ext_dims(top, bound + 1)
    for d, value in enumerate(dims):
        if value == 0:
            logger.debug(f"injdim of {algebra.name} <= {d}")
            return d
    return None


# Transpose


def transpose(m: PresentedModule, presentation: Optional[PresentedModule] = None) -> PresentedModule:
    """
    Tr M = Coker(f*: (A^g)* -> (A^r)*) for a free presentation A^r -> A^g -> M -> 0.

    Args:
        m: Module
        presentation: Module whose relations give the presentation; defaults to
            the minimal presentation of ``m``

    Returns:
        The transpose, a module on the other side
    """
    pres = presentation if presentation is not None else minimal_presentation(m)
    if presentation is not None and pres.dim != m.dim:
        raise ValueError("Presentation does not present the given module")
    rel = np.swapaxes(pres.relations, 0, 1)
    return from_presentation(m.algebra.opposite(), rel, generators=pres.num_relations, name=f"Tr({m.name})")


# Projective and Gorenstein projective dimension


def pd_bounded(m: PresentedModule, bound: int) -> BoundedVerdict:
    """Smallest d <= bound with Omega^d M projective."""
    res = free_resolution(m, bound)
    for d, omega in enumerate(res.syzygies):
        if is_projective(omega):
            return BoundedVerdict(d, bound)
    return BoundedVerdict(None, bound)


def gpd_bounded(m: PresentedModule, bound: int, mode=None) -> BoundedVerdict:
    """Smallest d <= bound with Omega^d M Gorenstein projective under ``mode``."""
    from gorenstein import GPMode, gp_test

    mode = mode or GPMode.bounded(settings.ext_bound)
    res = free_resolution(m, bound)
    for d, omega in enumerate(res.syzygies):
        if gp_test(omega, mode).is_gp:
            return BoundedVerdict(d, bound)
    return BoundedVerdict(None, bound)


# Sequence (*) and torsionfreeness


@dataclass(frozen=True, eq=False)
class StarSequence:
    """0 -> Ker sigma -> M -> M** -> Coker sigma -> 0 with the Ext^1, Ext^2(Tr M, R) it identifies."""

    sequence: CertifiedSequence
    sigma: ModuleMap
    ext1: ExtGroup
    ext2: ExtGroup
    kernel_iso: IsoVerdict
    cokernel_iso: IsoVerdict

    @property
    def kernel_dim(self) -> int:
        return self.sequence.objects[1].dim

    @property
    def cokernel_dim(self) -> int:
        return self.sequence.objects[4].dim

    @property
    def consistent(self) -> bool:
        return self.kernel_dim == self.ext1.dim and self.cokernel_dim == self.ext2.dim


def star_sequence(m: PresentedModule, seed: int = 0) -> StarSequence:
    """
    Exact sequence 0 -> Ext^1(Tr M, R) -> M -> M** -> Ext^2(Tr M, R) -> 0.

    The outer terms are realized as Ker sigma and Coker sigma and matched
    against the computed Ext groups by dimension and by iso_probe.
    """
    ev = sigma(m)
    ker, inc = kernel(ev, name="Ker sigma")
    cok, proj = cokernel(ev, name="Coker sigma")
    seq = is_exact([inc, ev, proj], name="star")
    if not seq:
        raise TheoremFailure(f"Evaluation sequence not exact at node {seq.node}")
    tr = transpose(m)
    e1, e2 = ext(tr, 1), ext(tr, 2)
    return StarSequence(seq, ev, e1, e2, iso_probe(ker, e1.value, seed), iso_probe(cok, e2.value, seed))


@dataclass(frozen=True)
class TorsionfreeVerdict:
    n: int
    holds: bool
    table: Tuple[int, ...]
    sigma_injective: bool
    sigma_surjective: bool

    @property
    def consistent(self) -> bool:
        """Torsionless iff 1-torsionfree, reflexive iff 2-torsionfree."""
        ok = (self.table[0] == 0) == self.sigma_injective
        if self.n >= 2:
            ok = ok and ((self.table[0] == 0 and self.table[1] == 0) == (self.sigma_injective and self.sigma_surjective))
        return ok


def n_torsionfree(m: PresentedModule, n: int) -> TorsionfreeVerdict:
    """Ext^i(Tr M, R) = 0 for 1 <= i <= n, cross-checked against sigma."""
    if n < 1:
        raise ValueError(f"n must be at least 1, got {n}")
    table = tuple(ext_dims(transpose(m), max(n, 2)))
    ev = sigma(m)
    verdict = TorsionfreeVerdict(
        n=n,
        holds=all(x == 0 for x in table[:n]),
        table=table[:max(n, 2)],
        sigma_injective=ev.is_injective(),
        sigma_surjective=ev.is_surjective(),
    )
    if not verdict.consistent:
        logger.error(f"Torsionfree table {table} disagrees with the evaluation map")
    return verdict
