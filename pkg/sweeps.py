"""
Seeded instance generators and consistency sweeps.

Every sweep draws its instances from ``numpy.random.default_rng([seed, i])``
so instance i is the same regardless of count, and records its outcome in a
CheckReport. Sweep summaries are logged as ruled tables.
"""
from functools import lru_cache
from typing import Any, Callable, Dict, List, Optional, Sequence

import numpy as np
from loguru import logger

from algebra import Algebra
from config import settings
from exceptions import CertificationError, GtransError, MissingDataError, TheoremFailure
from fpmod import (
    TAG_FREE,
    TAG_PROJECTIVE,
    ModuleMap,
    PresentedModule,
    certify,
    cokernel,
    direct_sum,
    from_presentation,
    hom_space,
    identity_map,
    image_factorization,
    is_projective,
    kernel,
    map_from_sum,
    map_into_sum,
    sum_of_maps,
    zero_map,
    zero_module,
)
from gorenstein import (
    GPMode,
    GPresentation,
    certify_gpresentation,
    construct_cor25,
    construct_prop36,
    construct_thm24_bwd,
    construct_thm24_fwd,
    construct_thm26,
    cor35_report,
    free_gpresentation,
    gorenstein_star_report,
    gorenstein_transpose,
    gp_resolution_maps,
    gp_test,
    lemma21_check,
    precover_check,
    prop34_report,
    thm31_embed,
    thm31_realize,
    zero_transpose_presentation,
)
from homology import ext_dims, gpd_bounded, n_torsionfree, star_sequence, syzygy, transpose
from linalg import FpMatrix, rank
from oracle import DEDUP_ISO, EnumerationSpec, enumerate_modules, ext_oracle_table, mutation_sweep, recheck
from reports import CheckReport, Report
from utils import create_summary_stats

SKIPPED = (CertificationError, MissingDataError)


# Instance generators


def random_module(algebra: Algebra, rng: np.random.Generator, max_gens: int = 1, max_rels: int = 2,
                  name: str = "M") -> PresentedModule:
    """Cokernel of a random map A^m -> A^g."""
    g = int(rng.integers(1, max_gens + 1))
    m = int(rng.integers(0, max_rels + 1))
    rel = rng.integers(0, algebra.p, size=(m, g, algebra.dim))
    return from_presentation(algebra, rel, generators=g, name=name)


@lru_cache(maxsize=32)
def _injdim(algebra: Algebra, bound: int) -> Optional[int]:
    return algebra.injdim_bounded(bound).value


def gp_module(algebra: Algebra, rng: np.random.Generator, mode: GPMode, attempts: int = 8) -> Optional[PresentedModule]:
    """
    A Gorenstein projective module, non-projective when the search finds one.

    Uses that Omega^d M is GP once d reaches the injective dimension of the
    ring; returns None when no finite injective dimension is known.
    """
    injdim = _injdim(algebra, mode.degree)
    if injdim is None:
        return None
    found = None
    for k in range(attempts):
        m = random_module(algebra, rng, name=f"M{k}")
        g = syzygy(m, injdim) if injdim else m
        if g.is_zero() or not gp_test(g, mode).is_gp:
            continue
        found = g
        if not is_projective(g):
            return g
    return found


def insert_contractible(maps: Sequence[ModuleMap], k: int, g: PresentedModule) -> List[ModuleMap]:
    """Add G --id--> G to the k-th map of a chain; exactness is unchanged."""
    out = list(maps)
    f = maps[k]
    out[k], src, tgt = sum_of_maps(f, identity_map(g))
    if k > 0:
        prev = maps[k - 1]
        out[k - 1] = map_into_sum(prev.source, [prev, zero_map(prev.source, g)], src)
    if k + 1 < len(maps):
        nxt = maps[k + 1]
        out[k + 1] = map_from_sum(tgt, [nxt, zero_map(g, nxt.target)], nxt.target)
    return out


def gorenstein_syzygy_instance(algebra: Algebra, n: int, rng: np.random.Generator, mode: GPMode):
    """
    0 -> A -> G_(n-1) -> ... -> G_0 -> M -> 0 with GP terms.

    Built from the minimal resolution of a random module with a contractible
    GP summand inserted at a random position, so one G_i is not projective
    whenever the ring has non-projective GP modules.
    """
    m = random_module(algebra, rng)
    maps = gp_resolution_maps(m, n)
    g = gp_module(algebra, rng, mode)
    if g is not None and n >= 1:
        maps = insert_contractible(maps, int(rng.integers(0, n)), g)
    return certify(maps, name=f"gorenstein {n}-syzygy")


def random_gpresentation(a: PresentedModule, rng: np.random.Generator, mode: GPMode) -> GPresentation:
    """
    A Gorenstein projective presentation of ``a``.

    Tries X0 = F + G mapping onto ``a`` through a random map on G with X1 the
    kernel; falls back to the free presentation with a contractible G added.
    """
    base = free_gpresentation(a, mode)
    g = gp_module(a.algebra, rng, mode)
    if g is None:
        return base
    ds = direct_sum([base.x0, g], name="X0")
    homs = hom_space(g, a)
    h = zero_map(g, a)
    if homs:
        coeffs = rng.integers(0, a.p, size=len(homs))
        mat = FpMatrix.zeros(a.p, a.dim, g.dim)
        for c, basis_map in zip(coeffs, homs):
            mat = mat + basis_map.matrix.scale(int(c))
        h = ModuleMap(g, a, mat, "h")
    eps = map_from_sum(ds, [base.eps, h], a)
    _, inc = kernel(eps, name="X1")
    try:
        return certify_gpresentation(inc, eps, mode, name="random")
    except CertificationError:
        logger.debug("Kernel of the random cover is not GP; adding a contractible summand instead")
    new_g, _, tgt = sum_of_maps(base.g, identity_map(g))
    eps = map_from_sum(tgt, [base.eps, zero_map(g, a)], a)
    return certify_gpresentation(new_g, eps, mode, name="contractible")


# Sweeps


class Sweeper:
    """Runs the seeded consistency sweeps over one algebra."""

    def __init__(self, algebra: Algebra, count: Optional[int] = None, seed: Optional[int] = None,
                 bound: Optional[int] = None, mode: Optional[GPMode] = None, dim_max: int = 2):
        self.algebra = algebra
        self.count = settings.sweep_count if count is None else count
        self.seed = settings.default_seed if seed is None else seed
        self.bound = settings.ext_bound if bound is None else bound
        self.mode = mode or GPMode.bounded(self.bound)
        self.dim_max = dim_max
        self.results: Dict[str, CheckReport] = {}

    def _rng(self, i: int) -> np.random.Generator:
        return np.random.default_rng([self.seed, i])

    def _enumerated(self, dim_max: Optional[int] = None) -> List[PresentedModule]:
        spec = EnumerationSpec(self.algebra, self.dim_max if dim_max is None else dim_max, self.seed, DEDUP_ISO)
        return list(enumerate_modules(spec))

    def _recheck(self, report: CheckReport, label: str, obj):
        result = recheck(obj)
        report.add(f"{label} recheck", True, result.passed)
        if not result.passed:
            report.notes.setdefault("recheck diffs", []).extend(f"{label}: {d}" for d in result.diffs)

    def _guarded(self, report: CheckReport, label: str, generate: Callable[[], Any], check: Callable[[Any], None]):
        """
        Run one instance.

        Only errors raised by ``generate`` count as skipped inputs. Once the
        instance exists, any engine error from ``check`` is a failure.
        """
        try:
            instance = generate()
        except SKIPPED as e:
            report.notes["skipped"] = report.notes.get("skipped", 0) + 1
            logger.debug(f"{report.name} {label} skipped: {e}")
            return
        try:
            check(instance)
        except GtransError as e:
            kind = "theorem failure" if isinstance(e, TheoremFailure) else type(e).__name__
            report.add(f"{label}", "no error", f"{kind}: {e}", passed=False)

    def _finish(self, report: CheckReport) -> CheckReport:
        self.results[report.name] = report
        self._log_report(report)
        return report

    def ext_oracle_sweep(self, top: Optional[int] = None) -> CheckReport:
        """Engine Ext against the oracle, plus the evaluation-map identities, on every enumerated module."""
        top = min(self.bound if top is None else top, 8)
        report = CheckReport(name="ext-oracle")
        tables = []
        for idx, m in enumerate(self._enumerated()):
            label = f"{m.name}#{idx}"
            engine = ext_dims(m, top)
            tables.append(engine)
            report.add(f"{label} Ext", ext_oracle_table(m.algebra, m.actions, top), engine)
            star = star_sequence(m, seed=self.seed)
            report.add(f"{label} dim Ker sigma", star.ext1.dim, star.kernel_dim)
            report.add(f"{label} dim Coker sigma", star.ext2.dim, star.cokernel_dim)
            report.add(f"{label} torsionfree vs sigma", True, n_torsionfree(m, 2).consistent)
        report.notes["ext tables"] = create_summary_stats(tables)
        return self._finish(report)

    def thm24_sweep(self, max_n: int = 3) -> CheckReport:
        """Projective realizations of seeded Gorenstein n-syzygy sequences, rechecked by the oracle."""
        report = CheckReport(name="thm24")
        mutated = False
        for i in range(self.count):
            rng = self._rng(i)
            n = int(rng.integers(1, max_n + 1))

            def check(seq):
                nonlocal mutated
                for direction, construct in (("fwd", construct_thm24_fwd), ("bwd", construct_thm24_bwd)):
                    proj_seq, comp_seq = construct(seq, self.mode)
                    self._recheck(report, f"#{i} n={n} {direction} projective", proj_seq)
                    self._recheck(report, f"#{i} n={n} {direction} complement", comp_seq)
                    if not mutated:
                        report.notes["mutations"] = mutation_sweep(proj_seq, 20, self.seed)
                        mutated = True

            self._guarded(report, f"#{i}", lambda: gorenstein_syzygy_instance(self.algebra, n, rng, self.mode), check)
        return self._finish(report)

    def thm31_sweep(self) -> CheckReport:
        """Transpose embeddings of seeded (A, pi) pairs and their round trip."""
        report = CheckReport(name="thm31")
        explicit = 0
        for i in range(self.count):
            rng = self._rng(i)

            def generate():
                a = random_module(self.algebra, rng, name="A")
                return a, random_gpresentation(a, rng, self.mode)

            def check(instance):
                nonlocal explicit
                a, pi = instance
                emb = thm31_embed(a, pi, self.mode, self.bound, seed=i)
                self._recheck(report, f"#{i} embedding", emb.sequence)
                prop = prop34_report(a, pi, self.bound, self.mode, seed=i)
                report.add(f"#{i} transpose comparison", True, prop.passed)
                real = thm31_realize(a, emb.sequence, emb.presentation, self.mode, seed=i)
                report.add(f"#{i} realized dim", emb.gorenstein_transpose.dim, real.transpose.dim)
                self._recheck(report, f"#{i} realized presentation", real.presentation.sequence)
                explicit += int(real.iso.isomorphic)

            self._guarded(report, f"#{i}", generate, check)
        report.notes["explicit isomorphisms"] = explicit
        return self._finish(report)

    def cor25_sweep(self) -> CheckReport:
        """Projective hulls and double-transpose realizations for modules of Gpd 0 or 1."""
        report = CheckReport(name="cor25-prop36")
        rng_modules = [random_module(self.algebra, self._rng(i), name=f"R{i}") for i in range(self.count)]
        for idx, m in enumerate(self._enumerated() + rng_modules):
            label = f"{m.name}#{idx}"
            gpd = gpd_bounded(m, self.bound, self.mode).value
            if gpd not in (0, 1):
                continue

            def check(module):
                hull = construct_cor25(module, self.bound, self.mode)
                report.add(f"{label} pd N", hull.gpd, hull.pd.value)
                self._recheck(report, f"{label} hull", hull.sequence)
                self._recheck(report, f"{label} projective syzygy", hull.projective_sequence)
                prop = construct_prop36(module, self.bound, self.mode, seed=self.seed)
                report.add(f"{label} double transpose realization", True, prop.report.passed)
                self._recheck(report, f"{label} realized presentation", prop.realization.presentation.sequence)

            self._guarded(report, label, lambda: m, check)
        return self._finish(report)

    def thm26_sweep(self, max_gpd: int = 2) -> CheckReport:
        """GP slot placement for every admissible slot; slot 0 is also checked as a precover."""
        report = CheckReport(name="thm26")
        testset = [m for m in self._enumerated(min(self.dim_max, 2)) if gp_test(m, self.mode).is_gp]
        report.notes["testset size"] = len(testset)
        for i in range(self.count):
            m = random_module(self.algebra, self._rng(i), name=f"M{i}")
            d = gpd_bounded(m, max_gpd, self.mode).value
            if d is None:
                report.notes["skipped"] = report.notes.get("skipped", 0) + 1
                continue
            for t in range(d + 1):
                def check(seq):
                    self._recheck(report, f"#{i} slot {t}", seq)
                    others = [seq.tags[d - s + 1] for s in range(d + 1) if s != t]
                    report.add(f"#{i} slot {t} projective elsewhere", True,
                               all(tag in (TAG_FREE, TAG_PROJECTIVE) for tag in others))
                    if t == 0 and testset:
                        cover = seq.inner_maps[-1]
                        if d == 0:
                            inc = zero_map(zero_module(m.algebra), cover.source)
                        else:
                            _, _, inc = image_factorization(seq.inner_maps[-2])
                        precover = precover_check(certify([inc, cover], name="precover"), testset)
                        report.add(f"#{i} precover", True, precover.passed)

                self._guarded(report, f"#{i} slot {t}", lambda: None,
                              lambda _: check(construct_thm26(m, t, d, self.mode, self.bound)))
        return self._finish(report)

    def consistency_sweep(self) -> CheckReport:
        """Gpd along sequences with GP cokernel, double Gorenstein transposes and sequence (*)."""
        report = CheckReport(name="consistency")
        for i in range(self.count):
            rng = self._rng(i)

            def generate():
                m = random_module(self.algebra, rng, name="M")
                return m, gp_module(self.algebra, rng, self.mode), random_gpresentation(m, rng, self.mode)

            def check(instance):
                m, g, pi = instance
                if g is not None and not m.is_zero():
                    ds = direct_sum([m, g], name="M + G")
                    seq = certify([ds.injections[0], ds.projections[1]], name="split")
                    lemma = lemma21_check(seq, self.bound, self.mode)
                    report.add(f"#{i} Gpd along sequence", True, lemma.passed)
                report.add(f"#{i} double transpose", True, cor35_report(m, pi, None, self.bound, self.mode, i).passed)
                report.add(f"#{i} Gorenstein sequence (*)", True, gorenstein_star_report(m, pi).passed)

            self._guarded(report, f"#{i}", generate, check)
        return self._finish(report)

    def zero_transpose_check(self) -> CheckReport:
        """A GP non-projective module has a zero Gorenstein transpose but nonzero GP transposes."""
        report = CheckReport(name="zero-transpose")
        g = gp_module(self.algebra, self._rng(0), self.mode)
        if g is None or is_projective(g):
            report.notes["skipped"] = "no non-projective GP module found"
            return self._finish(report)
        zero_pi = zero_transpose_presentation(g, self.mode)
        report.add("zero Gorenstein transpose", 0, gorenstein_transpose(g, zero_pi).dim)
        tr = transpose(g)
        report.add("transpose nonzero", True, not tr.is_zero())
        report.add("transpose GP", True, gp_test(tr, self.mode).is_gp)
        return self._finish(report)

    def question33_sweep(self) -> CheckReport:
        """
        Record whether Tr_G(a) looks like H + Tr a for seeded (a, pi).

        A split embedding Tr a -> Tr_G(a) is searched among random maps; the
        result lists candidates only and never fails.
        """
        report = CheckReport(name="question33")
        candidates, searched = 0, 0
        for i in range(self.count):
            rng = self._rng(i)
            try:
                a = random_module(self.algebra, rng, name="A")
                pi = random_gpresentation(a, rng, self.mode)
                gt, tr = gorenstein_transpose(a, pi), transpose(a)
            except GtransError as e:
                logger.debug(f"question33 #{i} skipped: {e}")
                continue
            searched += 1
            if self._split_candidate(tr, gt, rng):
                candidates += 1
        report.notes.update({"instances": searched, "candidates": candidates})
        return self._finish(report)

    def _split_candidate(self, tr: PresentedModule, gt: PresentedModule, rng: np.random.Generator) -> bool:
        if tr.is_zero():
            return True
        if gt.dim < tr.dim:
            return False
        there, back = hom_space(tr, gt), hom_space(gt, tr)
        if not there or not back:
            return False
        for _ in range(settings.iso_random_trials):
            u = sum((h.matrix.scale(int(c)) for h, c in zip(there, rng.integers(0, tr.p, len(there)))),
                    FpMatrix.zeros(tr.p, gt.dim, tr.dim))
            v = sum((h.matrix.scale(int(c)) for h, c in zip(back, rng.integers(0, tr.p, len(back)))),
                    FpMatrix.zeros(tr.p, tr.dim, gt.dim))
            if rank(v @ u) == tr.dim:
                complement, _ = cokernel(ModuleMap(tr, gt, u, "split"), name="H")
                return gp_test(complement, self.mode).is_gp
        return False

    def run_all(self, only: Optional[Sequence[str]] = None) -> Report:
        """Run the selected sweeps and collect them into one report."""
        sweeps = {
            "ext-oracle": self.ext_oracle_sweep,
            "zero-transpose": self.zero_transpose_check,
            "thm24": self.thm24_sweep,
            "thm31": self.thm31_sweep,
            "cor25-prop36": self.cor25_sweep,
            "thm26": self.thm26_sweep,
            "consistency": self.consistency_sweep,
            "question33": self.question33_sweep,
        }
        report = Report(command="sweep", bounds={"ext_bound": self.bound, "count": self.count,
                                                 "dim_max": self.dim_max, "seed": self.seed})
        for name, sweep in sweeps.items():
            if only and name not in only:
                continue
            logger.info(f"Running sweep {name} over {self.algebra.name}")
            report.absorb(sweep())
        report.verdict = "pass" if not report.failures else "FAILURE"
        self._log_comparison()
        return report

    def _log_report(self, report: CheckReport):
        logger.info("=" * 50)
        logger.info(f"SWEEP {report.name.upper()} ({self.algebra.name})")
        logger.info("=" * 50)
        logger.info(f"checks: {len(report.items)}")
        logger.info(f"failures: {len(report.failures)}")
        for key, value in report.notes.items():
            if not isinstance(value, (list, dict)):
                logger.info(f"{key}: {value}")
        logger.info("=" * 50)

    def _log_comparison(self):
        logger.info("=" * 70)
        logger.info("SWEEP SUMMARY")
        logger.info("=" * 70)
        logger.info(f"{'Sweep':<25} {'checks':<15} {'failures':<15}")
        logger.info("-" * 70)
        for name, report in self.results.items():
            logger.info(f"{name:<25} {len(report.items):<15} {len(report.failures):<15}")
        logger.info("=" * 70)
