"""
Command-line front end for the gtrans engine.

    python main.py <command> [options]

Reports go to stdout as text, or as JSON with ``--json``; logs go to stderr.
Exit codes: 0 success, 2 usage error, 3 invalid input (parse, validation or
certification), 4 theorem-check FAILURE.
"""
import argparse
import sys
from functools import cached_property
from pathlib import Path
from typing import Callable, Dict, List, Optional, Tuple

from loguru import logger

from algebra import Algebra, build_named
from certificates import write_certificate
from config import settings
from exceptions import CertificationError, GtransError, TheoremFailure
from fpmod import CertifiedSequence, PresentedModule, generators_verified_minimal, is_exact, is_projective
from gorenstein import (
    GPMode,
    GPresentation,
    certify_gpresentation,
    construct_cor25,
    construct_cor32,
    construct_prop22,
    construct_prop36,
    construct_thm24_bwd,
    construct_thm24_fwd,
    construct_thm26,
    cor35_report,
    free_gpresentation,
    gorenstein_star_report,
    gorenstein_transpose_data,
    gp_test,
    lemma21_check,
    precover_check,
    prop34_report,
    summarize,
    thm31_embed,
    thm31_realize,
)
from homology import (
    ext,
    ext_dims,
    free_resolution,
    gpd_bounded,
    minimal_presentation,
    n_torsionfree,
    pd_bounded,
    star_sequence,
    syzygy,
    transpose,
)
from oracle import recheck
from reports import CheckReport, Report
from spec_loader import SpecLoader
from sweeps import Sweeper
from utils import describe_module, digest_file, digest_text, format_table, setup_logging

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_INPUT = 3
EXIT_FAILURE = 4

CONSTRUCTIONS = ("prop22", "thm24fwd", "thm24bwd", "cor25", "thm26", "thm31embed", "thm31realize", "cor32", "prop36")
CHECKS = ("lemma21", "prop34", "cor35", "precover", "gstar")


class CommandLineError(Exception):
    """A required option is missing or inconsistent."""


class Session:
    """Inputs of one command, loaded on first use and digested into the report."""

    def __init__(self, args: argparse.Namespace, report: Report):
        self.args = args
        self.report = report
        self.loader = SpecLoader()

    def _path(self, attr: str, flag: str) -> str:
        path = getattr(self.args, attr, None)
        if not path:
            raise CommandLineError(f"{self.args.command} needs {flag} FILE")
        self.report.inputs[attr] = digest_file(path)
        return path

    @property
    def bound(self) -> int:
        return settings.ext_bound if self.args.bound is None else self.args.bound

    @property
    def seed(self) -> int:
        return settings.default_seed if self.args.seed is None else self.args.seed

    @cached_property
    def algebra(self) -> Algebra:
        return self.loader.load_ring(self._path("ring", "--ring"))

    @cached_property
    def mode(self) -> GPMode:
        mode = GPMode.for_algebra(self.algebra, getattr(self.args, "mode", None), self.bound)
        self.report.evidence["gp_mode"] = str(mode)
        return mode

    def module(self, attr: str = "mod", flag: str = "--mod") -> PresentedModule:
        return self.loader.load_module(self._path(attr, flag), self.algebra)

    def sequence(self, attr: str = "seq", flag: str = "--seq") -> CertifiedSequence:
        path = self._path(attr, flag)
        maps = self.loader.load_diagram(path, self.algebra).sequence(0)
        seq = is_exact(maps, name=Path(path).stem)
        if not seq:
            raise CertificationError(
                f"Sequence in {path} is not exact at node {seq.node} "
                f"(dim im {seq.image_dim}, dim ker {seq.kernel_dim})"
            )
        return seq

    def presentation(self, a: Optional[PresentedModule] = None) -> GPresentation:
        """The --pres presentation, or the minimal free presentation of ``a``."""
        if not getattr(self.args, "pres", None):
            if a is None:
                raise CommandLineError(f"{self.args.command} needs --pres FILE")
            return free_gpresentation(a, self.mode)
        path = self._path("pres", "--pres")
        maps = self.loader.load_diagram(path, self.algebra).sequence(0)
        if len(maps) != 2:
            raise CertificationError(f"A presentation is a sequence of two maps g, eps; got {len(maps)}")
        return certify_gpresentation(maps[0], maps[1], self.mode, name=Path(path).stem)

    def embed(self, *objects):
        """Attach certificates, each rechecked independently before it is reported."""
        check = CheckReport(name="recheck")
        for k, obj in enumerate(objects):
            text = write_certificate(obj)
            result = recheck(obj)
            check.add(f"certificate {k}", True, result.passed)
            if not result.passed:
                check.notes[f"certificate {k} diffs"] = result.diffs
            self.report.certificates.append(text)
        if check.items:
            self.report.absorb(check)
        save = getattr(self.args, "save", None)
        if save:
            out = Path(save)
            out.mkdir(parents=True, exist_ok=True)
            for k, text in enumerate(self.report.certificates):
                (out / f"{self.args.command}-{k}.cert").write_text(text)
            logger.info(f"Wrote {len(self.report.certificates)} certificates to {out}")


# Ring and module information


def cmd_ring(s: Session):
    path = s.args.path or s.args.ring
    if not path:
        raise CommandLineError("ring needs a ring file")
    s.report.inputs["ring"] = digest_file(path)
    a = s.loader.load_ring(path)
    s.report.verdict = "valid"
    s.report.tables["ring"] = {"name": a.name, "p": a.p, "dim": a.dim, "radical_dim": a.radical_dim}
    if s.args.action == "info":
        s.report.tables["basis"] = list(a.basis)
        s.report.tables["declared_injdim"] = a.declared_injdim
        s.report.tables["injdim"] = str(a.injdim_bounded(s.bound))


def _minimality(verified: bool) -> str:
    return "verified" if verified else "not verified (greedy count above the lower bound)"


def cmd_mod(s: Session):
    m = s.module()
    s.report.tables["module"] = describe_module(m)
    pres = minimal_presentation(m)
    s.report.tables["minimal_generators"] = pres.num_generators
    s.report.evidence["generators_minimal"] = _minimality(generators_verified_minimal(pres))
    s.report.tables["projective"] = bool(is_projective(m))
    s.report.verdict = "valid"


def cmd_resolve(s: Session):
    m = s.module()
    res = free_resolution(m, s.args.length, minimal=s.args.minimal)
    s.report.tables["ranks"] = list(res.ranks)
    s.report.tables["minimal"] = res.minimal
    s.report.tables["syzygy_dims"] = [omega.dim for omega in res.syzygies]
    if res.minimal:
        s.report.evidence["generators_minimal"] = _minimality(all(generators_verified_minimal(z) for z in res.syzygies))
    s.report.verdict = f"resolution of length {res.length}"
    seq = res.certify()
    if not seq:
        raise TheoremFailure(f"Free resolution not exact at node {seq.node}")
    s.embed(seq)


def cmd_syzygy(s: Session):
    omega = syzygy(s.module(), s.args.n)
    s.report.tables["syzygy"] = describe_module(omega)
    s.report.verdict = f"Omega^{s.args.n}, dim {omega.dim}"


def cmd_ext(s: Session):
    group = ext(s.module(), s.args.i)
    s.report.tables["ext"] = describe_module(group.value)
    s.report.verdict = f"dim Ext^{s.args.i} = {group.dim}"


def cmd_transpose(s: Session):
    m = s.module()
    tr = transpose(m)
    s.report.tables["transpose"] = describe_module(tr)
    s.report.verdict = f"Tr {m.name}, dim {tr.dim}, side {tr.side}"


def cmd_gtranspose(s: Session):
    pi = s.presentation()
    a = s.module() if s.args.mod else pi.module
    gt = gorenstein_transpose_data(a, pi)
    s.report.tables["gorenstein_transpose"] = describe_module(gt.module)
    s.report.tables["transpose_dim"] = transpose(a).dim
    s.report.verdict = f"TrG {a.name}, dim {gt.module.dim}, side {gt.module.side}"
    s.embed(gt.sequence)


def cmd_gp(s: Session):
    cert = gp_test(s.module(), s.mode)
    s.report.tables["gp"] = summarize(cert)
    s.report.tables["witness_degree"] = cert.witness_degree
    s.report.tables["witness_side"] = cert.witness_side
    s.report.verdict = cert.verdict
    s.embed(cert)


def cmd_torsionfree(s: Session):
    n = s.args.n
    v = n_torsionfree(s.module(), n)
    s.report.tables["transpose_ext"] = format_table(v.table)
    s.report.tables["sigma_injective"] = v.sigma_injective
    s.report.tables["sigma_surjective"] = v.sigma_surjective
    s.report.verdict = f"{n}-torsionfree" if v.holds else f"not {n}-torsionfree"
    if not v.consistent:
        s.report.failures.append(f"torsionfree: Ext table {list(v.table)} disagrees with the evaluation map")


def cmd_star(s: Session):
    st = star_sequence(s.module(), s.seed)
    s.report.tables["star"] = {
        "dim_ker_sigma": st.kernel_dim,
        "dim_ext1_tr": st.ext1.dim,
        "dim_coker_sigma": st.cokernel_dim,
        "dim_ext2_tr": st.ext2.dim,
    }
    s.report.evidence["kernel"] = st.kernel_iso.status
    s.report.evidence["cokernel"] = st.cokernel_iso.status
    s.report.verdict = "consistent" if st.consistent else "FAILURE"
    if not st.consistent:
        s.report.failures.append("star: evaluation map disagrees with Ext of the transpose")
    s.embed(st.sequence)


# Constructions


def _sequence_table(seq: CertifiedSequence) -> List[Dict]:
    return [{"dim": obj.dim, "tag": tag} for obj, tag in zip(seq.objects, seq.tags)]


def construct_sequences(s: Session) -> Tuple[List, Dict]:
    which = s.args.which
    mode = s.mode
    if which in ("prop22", "thm24fwd", "thm24bwd"):
        build = {"prop22": construct_prop22, "thm24fwd": construct_thm24_fwd, "thm24bwd": construct_thm24_bwd}[which]
        first, second = build(s.sequence(), mode)
        return [first, second], {}
    if which == "cor25":
        res = construct_cor25(s.module(), s.bound, mode)
        return [res.sequence, res.projective_sequence], {"gpd": res.gpd, "pd": str(res.pd)}
    if which == "thm26":
        m = s.module()
        n = s.args.n
        if n is None:
            d = gpd_bounded(m, s.bound, mode)
            n = max(d.value if d.value is not None else s.bound, s.args.slot)
        return [construct_thm26(m, s.args.slot, n, mode, s.bound)], {"length": n, "slot": s.args.slot}
    if which == "thm31embed":
        a = s.module()
        emb = thm31_embed(a, s.presentation(a), mode, s.bound, s.seed)
        s.report.evidence["cokernel vs dual of kernel"] = emb.kernel_dual_iso.status
        return [emb.sequence], {
            "gorenstein_transpose_dim": emb.gorenstein_transpose.dim,
            "transpose_dim": emb.transpose.dim,
            "cokernel_dim": emb.cokernel.dim,
            "ext_tables": [list(t) for t in emb.ext_tables],
        }
    if which == "thm31realize":
        a = s.module()
        if s.args.seq:
            emb_seq, pres = s.sequence(), None
        else:
            emb = thm31_embed(a, s.presentation(a), mode, s.bound, s.seed)
            emb_seq, pres = emb.sequence, emb.presentation
        real = thm31_realize(a, emb_seq, pres, mode, s.seed)
        s.report.evidence["realized transpose"] = real.evidence
        return [real.presentation.sequence, real.kernel_certificate], {"realized_dim": real.transpose.dim}
    if which == "cor32":
        res = construct_cor32(s.module("other", "--other"), s.module(), mode, s.seed)
        s.report.evidence["realized transpose"] = res.realization.evidence
        return [res.embedding, res.realization.presentation.sequence], {"summand_sum_dim": res.summand_sum.dim}
    res = construct_prop36(s.module(), s.bound, mode, s.seed)
    s.report.absorb(res.report)
    s.report.evidence["realized transpose"] = res.realization.evidence
    return [res.hull.sequence, res.realization.presentation.sequence], {
        "module_dim": res.module.dim,
        "pd": str(res.hull.pd),
    }


def cmd_construct(s: Session):
    sequences, extra = construct_sequences(s)
    s.report.tables.update(extra)
    for k, obj in enumerate(sequences):
        if isinstance(obj, CertifiedSequence):
            s.report.tables[f"sequence {k}"] = _sequence_table(obj)
    s.embed(*sequences)
    s.report.verdict = "certified" if not s.report.failures else "FAILURE"


# Consistency checks


def cmd_check(s: Session):
    which = s.args.which
    if which == "lemma21":
        check = lemma21_check(s.sequence(), s.bound, s.mode)
    elif which == "precover":
        seq = s.sequence()
        if not s.args.testset:
            raise CommandLineError("check precover needs --testset DIR")
        testset = s.loader.load_directory(s.args.testset, s.algebra)
        files = s.loader.get_statistics()["processed_files"]
        listing = "\n".join(f"{Path(f).name} {digest_file(f)}" for f in files if Path(f).parent == Path(s.args.testset))
        s.report.inputs["testset"] = digest_text(listing)
        check = precover_check(seq, testset)
    else:
        a = s.module()
        pi = s.presentation(a)
        if which == "prop34":
            check = prop34_report(a, pi, s.bound, s.mode, s.seed)
        elif which == "cor35":
            check = cor35_report(a, pi, None, s.bound, s.mode, s.seed)
        else:
            check = gorenstein_star_report(a, pi)
    s.report.absorb(check)
    s.report.verdict = "pass" if check.passed else "FAILURE"


# Certificates and sweeps


def cmd_verify(s: Session) -> int:
    s.report.inputs["certificate"] = digest_file(s.args.file)
    rec = s.loader.load_certificate(s.args.file)
    result = recheck(rec)
    s.report.tables["certificate"] = {"kind": rec.kind, "name": rec.name, "objects": len(rec.objects),
                                      "maps": len(rec.maps)}
    if result.passed:
        s.report.verdict = "valid"
        return EXIT_OK
    s.report.verdict = "invalid"
    s.report.tables["diffs"] = result.diffs
    return EXIT_INPUT


def cmd_sweep(s: Session):
    if s.args.ring:
        algebra = s.algebra
    else:
        algebra = build_named(s.args.algebra, s.args.prime)
    sweeper = Sweeper(algebra, count=s.args.count, seed=s.seed, bound=s.bound, dim_max=s.args.dim_max)
    result = sweeper.run_all(s.args.only)
    result.command = s.report.command
    result.inputs.update(s.report.inputs)
    result.inputs["algebra"] = digest_text(algebra.to_spec_text())
    s.report = result


HANDLERS: Dict[str, Callable[[Session], Optional[int]]] = {
    "ring": cmd_ring,
    "mod": cmd_mod,
    "resolve": cmd_resolve,
    "syzygy": cmd_syzygy,
    "ext": cmd_ext,
    "transpose": cmd_transpose,
    "gtranspose": cmd_gtranspose,
    "gp": cmd_gp,
    "torsionfree": cmd_torsionfree,
    "star": cmd_star,
    "construct": cmd_construct,
    "check": cmd_check,
    "verify": cmd_verify,
    "sweep": cmd_sweep,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--ring", help="Ring-spec file")
    common.add_argument("--mod", help="Module file")
    common.add_argument("--json", action="store_true", help="Emit the machine-readable report")
    common.add_argument("--seed", type=int, default=None, help="Seed for randomized steps")
    common.add_argument("--bound", type=int, default=None, help="Ext / resolution bound")
    common.add_argument("--mode", choices=("ring", "bounded"), default=None, help="Gorenstein projectivity mode")
    common.add_argument("--log-level", default=None, help="Log level for stderr")

    parser = argparse.ArgumentParser(prog="gtrans", description="Gorenstein transposes over finite-dimensional algebras")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ring", parents=[common], help="Validate or describe a ring")
    p.add_argument("action", choices=("check", "info"))
    p.add_argument("path", nargs="?")

    p = sub.add_parser("mod", parents=[common], help="Describe a module")
    p.add_argument("action", choices=("info",))

    p = sub.add_parser("resolve", parents=[common], help="Free resolution")
    p.add_argument("--length", type=int, required=True)
    p.add_argument("--minimal", action="store_true")

    p = sub.add_parser("syzygy", parents=[common], help="n-th syzygy")
    p.add_argument("-n", type=int, required=True)

    p = sub.add_parser("ext", parents=[common], help="Ext^i(M, R)")
    p.add_argument("-i", type=int, required=True)

    sub.add_parser("transpose", parents=[common], help="Auslander-Bridger transpose")

    p = sub.add_parser("gtranspose", parents=[common], help="Gorenstein transpose of a presentation")
    p.add_argument("--pres", required=True)
    p.add_argument("--save")

    p = sub.add_parser("gp", parents=[common], help="Gorenstein projectivity test")
    p.add_argument("--save")

    p = sub.add_parser("torsionfree", parents=[common], help="n-torsionfreeness")
    p.add_argument("-n", type=int, required=True)

    sub.add_parser("star", parents=[common], help="Evaluation-map exact sequence")

    p = sub.add_parser("construct", parents=[common], help="Certified constructions")
    p.add_argument("which", choices=CONSTRUCTIONS)
    p.add_argument("--seq", help="Diagram file with the input sequence")
    p.add_argument("--pres", help="Diagram file with a Gorenstein projective presentation g, eps")
    p.add_argument("--other", help="Module file for the GP summand H (cor32)")
    p.add_argument("--slot", type=int, default=0)
    p.add_argument("-n", type=int, default=None, help="Resolution length (thm26)")
    p.add_argument("--save", help="Directory for certificate files")

    p = sub.add_parser("check", parents=[common], help="Consistency checks")
    p.add_argument("which", choices=CHECKS)
    p.add_argument("--seq")
    p.add_argument("--pres")
    p.add_argument("--testset")

    p = sub.add_parser("verify", parents=[common], help="Re-check a certificate file")
    p.add_argument("file")

    p = sub.add_parser("sweep", parents=[common], help="Seeded consistency sweeps")
    p.add_argument("--algebra", default="dual")
    p.add_argument("-p", "--prime", type=int, default=2)
    p.add_argument("--dim-max", type=int, default=2)
    p.add_argument("--count", type=int, default=None)
    p.add_argument("--only", nargs="*", default=None)
    return parser


def run(argv: List[str]) -> Tuple[Report, int]:
    """
    Parse ``argv``, run one command and return its report with the exit code.

    Args:
        argv: Arguments without the program name

    Returns:
        (report, exit code)
    """
    report = Report(command=" ".join(argv))
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as e:
        code = e.code if isinstance(e.code, int) else EXIT_USAGE
        report.verdict = "usage error" if code else "help"
        return report, code
    setup_logging(args.log_level or settings.log_level)
    session = Session(args, report)
    session.report.bounds = {
        "ext_bound": session.bound,
        "seed": session.seed,
        "sweep_count": settings.sweep_count,
        "dim_max": settings.enumeration_max_dim,
    }
    try:
        code = HANDLERS[args.command](session)
    except CommandLineError as e:
        logger.error(str(e))
        session.report.verdict = f"usage error: {e}"
        return session.report, EXIT_USAGE
    except TheoremFailure as e:
        logger.error(f"FAILURE: {e}")
        session.report.verdict = "FAILURE"
        session.report.failures.append(str(e))
        return session.report, EXIT_FAILURE
    except (GtransError, ValueError, FileNotFoundError) as e:
        logger.error(f"Invalid input: {e}")
        session.report.verdict = f"invalid input: {e}"
        return session.report, EXIT_INPUT
    if code is None:
        code = session.report.exit_code
    return session.report, code


def main(argv: Optional[List[str]] = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    report, code = run(argv)
    if report.verdict != "help":
        print(report.to_json() if "--json" in argv else report.to_text())
    return code


if __name__ == "__main__":
    sys.exit(main())
