"""
Certificate files.

A certificate stores everything needed to re-check a certified sequence or a
GP certificate without the engine that produced it: the ring in ring-spec
grammar, every object's action matrices and generators, every map matrix,
the node bases and the per-object witnesses. Matrices are written as
row-major residue lists after their shape.
"""
import copy
from dataclasses import dataclass, field
from typing import Iterator, List, Optional, Tuple

import numpy as np
from loguru import logger

from algebra import Algebra, parse_algebra
from exceptions import SpecParseError
from fpmod import TAG_NONE, CertifiedSequence, PresentedModule, ProjectivityVerdict
from gorenstein import GPCertificate

HEADER = "gtranscert v1"
KIND_SEQUENCE = "sequence"
KIND_GP = "gp"


@dataclass
class GPRecord:
    mode: str
    degree: int
    verdict: str
    ext_table: List[int]
    transpose_table: List[int]
    witness_degree: Optional[int] = None
    witness_side: Optional[str] = None


@dataclass
class ObjectRecord:
    dim: int
    actions: List[np.ndarray]
    generators: np.ndarray
    tag: str = TAG_NONE
    splitting: Optional[np.ndarray] = None
    gp: Optional[GPRecord] = None


@dataclass
class CertificateRecord:
    """Raw, engine-independent form of a certificate."""

    kind: str
    name: str
    ring_text: str
    side: str
    objects: List[ObjectRecord] = field(default_factory=list)
    maps: List[np.ndarray] = field(default_factory=list)
    nodes: List[Tuple[np.ndarray, np.ndarray]] = field(default_factory=list)

    def algebra(self) -> Algebra:
        ring = parse_algebra(self.ring_text, source="certificate")
        return ring.opposite() if self.side == "right" else ring

    def copy(self) -> "CertificateRecord":
        return copy.deepcopy(self)

    def matrices(self) -> Iterator[Tuple[str, np.ndarray]]:
        """Every stored matrix with a location label."""
        for i, obj in enumerate(self.objects):
            for k, a in enumerate(obj.actions):
                yield f"object {i} action {k}", a
            yield f"object {i} gens", obj.generators
            if obj.splitting is not None:
                yield f"object {i} split", obj.splitting
        for i, m in enumerate(self.maps):
            yield f"map {i}", m
        for i, (im, ker) in enumerate(self.nodes):
            yield f"node {i + 1} image", im
            yield f"node {i + 1} kernel", ker


# Conversion from engine values


def _object_record(m: PresentedModule, tag: str = TAG_NONE, witness=None) -> ObjectRecord:
    record = ObjectRecord(m.dim, [a.ints for a in m.actions], m.gen_embedding.ints, tag)
    if isinstance(witness, ProjectivityVerdict) and witness.splitting is not None:
        record.splitting = witness.splitting.ints
    elif isinstance(witness, GPCertificate):
        record.gp = _gp_record(witness)
    return record


def _gp_record(cert: GPCertificate) -> GPRecord:
    return GPRecord(
        mode=cert.mode.kind,
        degree=cert.mode.degree,
        verdict=cert.verdict,
        ext_table=list(cert.ext_table),
        transpose_table=list(cert.transpose_table),
        witness_degree=cert.witness_degree,
        witness_side=cert.witness_side,
    )


def from_sequence(seq: CertifiedSequence) -> CertificateRecord:
    algebra = seq.objects[0].algebra
    record = CertificateRecord(KIND_SEQUENCE, seq.name, algebra.to_spec_text(), algebra.side)
    for i, obj in enumerate(seq.objects):
        record.objects.append(_object_record(obj, seq.tags[i], seq.witnesses.get(i)))
    record.maps = [f.matrix.ints for f in seq.maps]
    record.nodes = [(node.image_basis.ints, node.kernel_basis.ints) for node in seq.nodes]
    return record


def from_gp_certificate(cert: GPCertificate) -> CertificateRecord:
    m = cert.module
    record = CertificateRecord(KIND_GP, m.name, m.algebra.to_spec_text(), m.algebra.side)
    record.objects.append(_object_record(m, cert.tag, cert))
    return record


def to_record(obj) -> CertificateRecord:
    if isinstance(obj, CertificateRecord):
        return obj
    if isinstance(obj, CertifiedSequence):
        return from_sequence(obj)
    if isinstance(obj, GPCertificate):
        return from_gp_certificate(obj)
    raise TypeError(f"Cannot build a certificate from {type(obj).__name__}")


# Text format


def _matrix_tokens(m: np.ndarray) -> str:
    m = np.asarray(m, dtype=np.int64)
    rows, cols = (m.shape + (1,))[:2] if m.ndim == 1 else m.shape
    body = " ".join(str(int(x)) for x in m.reshape(-1))
    return f"{rows} {cols}" + (f" {body}" if body else "")


def _table(values: List[int]) -> str:
    return " ".join([str(len(values))] + [str(v) for v in values])


def write_certificate(obj) -> str:
    """Serialize a CertifiedSequence, GPCertificate or CertificateRecord."""
    rec = to_record(obj)
    lines = [HEADER, f"kind {rec.kind}", f"name {rec.name or '-'}", f"side {rec.side}", "ring"]
    lines += rec.ring_text.rstrip("\n").splitlines()
    lines.append("endring")
    lines.append(f"objects {len(rec.objects)}")
    for i, obj in enumerate(rec.objects):
        lines.append(f"object {i} dim {obj.dim} tag {obj.tag}")
        lines.append(f"gens {_matrix_tokens(obj.generators)}")
        for k, a in enumerate(obj.actions):
            lines.append(f"action {k} {_matrix_tokens(a)}")
        if obj.splitting is not None:
            lines.append(f"split {_matrix_tokens(obj.splitting)}")
        if obj.gp is not None:
            g = obj.gp
            lines.append(
                f"gp {g.mode} {g.degree} {g.verdict} {g.witness_degree if g.witness_degree is not None else '-'} "
                f"{g.witness_side or '-'} ext {_table(g.ext_table)} tr {_table(g.transpose_table)}"
            )
    lines.append(f"maps {len(rec.maps)}")
    for i, m in enumerate(rec.maps):
        lines.append(f"map {i} {_matrix_tokens(m)}")
    for i, (im, ker) in enumerate(rec.nodes):
        lines.append(f"node {i + 1} image {_matrix_tokens(im)} kernel {_matrix_tokens(ker)}")
    lines.append("end")
    return "\n".join(lines) + "\n"


class _Tokens:
    """Cursor over the tokens of one certificate line."""

    def __init__(self, tokens: List[str], lineno: int, source: Optional[str]):
        self.tokens = tokens
        self.pos = 0
        self.lineno = lineno
        self.source = source

    def error(self, message: str) -> SpecParseError:
        return SpecParseError(message, self.lineno, self.source)

    def word(self, expected: Optional[str] = None) -> str:
        if self.pos >= len(self.tokens):
            raise self.error(f"Line ended early{f', expected {expected!r}' if expected else ''}")
        tok = self.tokens[self.pos]
        self.pos += 1
        if expected is not None and tok != expected:
            raise self.error(f"Expected {expected!r}, got {tok!r}")
        return tok

    def int(self) -> int:
        tok = self.word()
        try:
            return int(tok)
        except ValueError:
            raise self.error(f"Expected an integer, got {tok!r}")

    def optional_int(self) -> Optional[int]:
        tok = self.word()
        return None if tok == "-" else self._to_int(tok)

    def _to_int(self, tok: str) -> int:
        try:
            return int(tok)
        except ValueError:
            raise self.error(f"Expected an integer, got {tok!r}")

    def matrix(self) -> np.ndarray:
        rows, cols = self.int(), self.int()
        if rows < 0 or cols < 0:
            raise self.error("Negative matrix shape")
        values = [self.int() for _ in range(rows * cols)]
        return np.asarray(values, dtype=np.int64).reshape(rows, cols)

    def table(self) -> List[int]:
        return [self.int() for _ in range(self.int())]

    def done(self):
        if self.pos != len(self.tokens):
            raise self.error(f"Unexpected trailing tokens {self.tokens[self.pos:]}")


def parse_certificate(text: str, source: Optional[str] = None) -> CertificateRecord:
    """
    Parse certificate text into a CertificateRecord.

    Raises:
        SpecParseError: wrong header, unknown lines or malformed matrices
    """
    lines = text.splitlines()
    if not lines or lines[0].strip() != HEADER:
        raise SpecParseError(f"Missing header {HEADER!r}", 1, source)
    rec = CertificateRecord(kind="", name="", ring_text="", side="left")
    ring_lines: Optional[List[str]] = None
    current: Optional[ObjectRecord] = None
    finished = False
    for lineno, raw in enumerate(lines[1:], start=2):
        line = raw.strip()
        if ring_lines is not None:
            if line == "endring":
                rec.ring_text = "\n".join(ring_lines) + "\n"
                ring_lines = None
            else:
                ring_lines.append(raw)
            continue
        if not line:
            continue
        if finished:
            raise SpecParseError("Content after 'end'", lineno, source)
        cur = _Tokens(line.split(), lineno, source)
        key = cur.word()
        if key == "kind":
            rec.kind = cur.word()
            if rec.kind not in (KIND_SEQUENCE, KIND_GP):
                raise cur.error(f"Unknown certificate kind {rec.kind!r}")
        elif key == "name":
            rest = line[len("name"):].strip()
            rec.name = "" if rest == "-" else rest
            continue
        elif key == "side":
            rec.side = cur.word()
            if rec.side not in ("left", "right"):
                raise cur.error(f"Side must be left or right, got {rec.side!r}")
        elif key == "ring":
            ring_lines = []
        elif key == "objects":
            cur.int()
        elif key == "object":
            index, _, dim, _, tag = cur.int(), cur.word("dim"), cur.int(), cur.word("tag"), cur.word()
            if index != len(rec.objects):
                raise cur.error(f"Object {index} out of order")
            current = ObjectRecord(dim, [], np.zeros((dim, 0), dtype=np.int64), tag)
            rec.objects.append(current)
        elif key in ("gens", "action", "split", "gp"):
            if current is None:
                raise cur.error(f"{key!r} outside an object block")
            if key == "gens":
                current.generators = cur.matrix()
            elif key == "action":
                if cur.int() != len(current.actions):
                    raise cur.error("Action matrices out of order")
                current.actions.append(cur.matrix())
            elif key == "split":
                current.splitting = cur.matrix()
            else:
                mode, degree, verdict = cur.word(), cur.int(), cur.word()
                wdeg, wside = cur.optional_int(), cur.word()
                cur.word("ext")
                ext_table = cur.table()
                cur.word("tr")
                tr_table = cur.table()
                current.gp = GPRecord(mode, degree, verdict, ext_table, tr_table, wdeg,
                                      None if wside == "-" else wside)
        elif key == "maps":
            cur.int()
            current = None
        elif key == "map":
            if cur.int() != len(rec.maps):
                raise cur.error("Maps out of order")
            rec.maps.append(cur.matrix())
        elif key == "node":
            cur.int()
            cur.word("image")
            im = cur.matrix()
            cur.word("kernel")
            rec.nodes.append((im, cur.matrix()))
        elif key == "end":
            finished = True
        else:
            raise cur.error(f"Unrecognized key {key!r}")
        cur.done()
    if ring_lines is not None:
        raise SpecParseError("Unterminated ring block", None, source)
    if not finished:
        raise SpecParseError("Missing 'end' line", None, source)
    if not rec.kind or not rec.ring_text:
        raise SpecParseError("Certificate needs 'kind' and a ring block", None, source)
    logger.debug(f"Parsed {rec.kind} certificate with {len(rec.objects)} objects")
    return rec
