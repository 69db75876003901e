"""
Module, diagram and certificate files.

A module block is

    module <name> over <ring> side=<left|right>
    presentation gens=<g>
    rel <g*dim coefficients>        (one line per relation)

or

    module <name> over <ring> side=<left|right>
    representation dim=<d>
    action <basis index>
    <d rows of d residues>          (one action block per basis element)

Diagram files add map blocks and sequence lines:

    map <name> <source module> <target module>
    <dim(target) rows of dim(source) residues>
    sequence <map> <map> ...

``#`` starts a comment. Modules must be declared before maps that use them.
"""
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional

import numpy as np
from loguru import logger

from algebra import Algebra, parse_algebra
from certificates import CertificateRecord, parse_certificate
from exceptions import GtransError, SpecParseError
from fpmod import ModuleMap, PresentedModule, from_presentation, from_representation
from linalg import FpMatrix


@dataclass
class Diagram:
    """Named modules and maps read from one file, plus the declared sequences."""

    modules: Dict[str, PresentedModule] = field(default_factory=dict)
    maps: Dict[str, ModuleMap] = field(default_factory=dict)
    sequences: List[List[str]] = field(default_factory=list)

    def sequence(self, index: int = 0) -> List[ModuleMap]:
        if index >= len(self.sequences):
            raise SpecParseError(f"Diagram declares {len(self.sequences)} sequences, wanted #{index}")
        return [self.maps[name] for name in self.sequences[index]]

    def first_module(self) -> PresentedModule:
        if not self.modules:
            raise SpecParseError("No module block found")
        return next(iter(self.modules.values()))


def _strip(line: str) -> str:
    return line.split("#", 1)[0].strip()


def _ints(tokens: List[str], lineno: int, source: Optional[str]) -> List[int]:
    try:
        return [int(t) for t in tokens]
    except ValueError:
        raise SpecParseError(f"Expected integers, got {' '.join(tokens)!r}", lineno, source)


def _keyvalue(token: str, key: str, lineno: int, source: Optional[str]) -> str:
    name, _, value = token.partition("=")
    if name != key or not value:
        raise SpecParseError(f"Expected {key}=<value>, got {token!r}", lineno, source)
    return value


class _Block:
    """Lines belonging to one module or map declaration."""

    def __init__(self, kind: str, header: List[str], lineno: int):
        self.kind = kind
        self.header = header
        self.lineno = lineno
        self.body: List[tuple] = []


def _blocks(text: str, source: Optional[str]) -> List[_Block]:
    blocks: List[_Block] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _strip(raw)
        if not line:
            continue
        tokens = line.split()
        if tokens[0] in ("module", "map", "sequence"):
            blocks.append(_Block(tokens[0], tokens, lineno))
        elif not blocks:
            raise SpecParseError(f"Expected a 'module' header, got {tokens[0]!r}", lineno, source)
        else:
            blocks[-1].body.append((lineno, tokens))
    return blocks


def _algebra_for(header: List[str], algebra: Algebra, lineno: int, source: Optional[str]) -> Algebra:
    if len(header) != 5 or header[2] != "over":
        raise SpecParseError("Expected 'module <name> over <ring> side=<left|right>'", lineno, source)
    if header[3] != algebra.base.name:
        raise SpecParseError(f"Module is over {header[3]!r} but the ring is {algebra.base.name!r}", lineno, source)
    side = _keyvalue(header[4], "side", lineno, source)
    if side not in ("left", "right"):
        raise SpecParseError(f"side must be left or right, got {side!r}", lineno, source)
    return algebra.base.opposite() if side == "right" else algebra.base


def _module(block: _Block, algebra: Algebra, source: Optional[str]) -> PresentedModule:
    ring = _algebra_for(block.header, algebra, block.lineno, source)
    name, n, p = block.header[1], ring.dim, ring.p
    if not block.body:
        raise SpecParseError("Module block needs a 'presentation' or 'representation' line", block.lineno, source)
    lineno, first = block.body[0]
    try:
        if first[0] == "presentation":
            if len(first) != 2:
                raise SpecParseError("Expected 'presentation gens=<g>'", lineno, source)
            g = int(_keyvalue(first[1], "gens", lineno, source))
            rels = []
            for lineno, tokens in block.body[1:]:
                if tokens[0] != "rel" or len(tokens) != g * n + 1:
                    raise SpecParseError(f"Expected 'rel' with {g * n} coefficients", lineno, source)
                rels.append(_ints(tokens[1:], lineno, source))
            rel = np.asarray(rels, dtype=np.int64).reshape(len(rels), g, n)
            return from_presentation(ring, rel, generators=g, name=name)
        if first[0] == "representation":
            if len(first) != 2:
                raise SpecParseError("Expected 'representation dim=<d>'", lineno, source)
            d = int(_keyvalue(first[1], "dim", lineno, source))
            actions: Dict[int, List[List[int]]] = {}
            current = None
            for lineno, tokens in block.body[1:]:
                if tokens[0] == "action":
                    if len(tokens) != 2:
                        raise SpecParseError("Expected 'action <basis index>'", lineno, source)
                    current = _ints(tokens[1:], lineno, source)[0]
                    if not 0 <= current < n or current in actions:
                        raise SpecParseError(f"Bad or repeated action index {current}", lineno, source)
                    actions[current] = []
                elif current is None:
                    raise SpecParseError("Matrix row before any 'action' line", lineno, source)
                else:
                    row = _ints(tokens, lineno, source)
                    if len(row) != d or len(actions[current]) == d:
                        raise SpecParseError(f"Action of basis element {current} needs {d} rows of {d}", lineno, source)
                    actions[current].append(row)
            if sorted(actions) != list(range(n)) or any(len(rows) != d for rows in actions.values()):
                raise SpecParseError(f"Need a complete {d}x{d} action for each of the {n} basis elements",
                                     block.lineno, source)
            mats = [FpMatrix.from_array(p, np.asarray(actions[k], dtype=np.int64).reshape(d, d)) for k in range(n)]
            return from_representation(ring, mats, name=name)
    except GtransError:
        raise
    except ValueError as e:
        raise SpecParseError(str(e), block.lineno, source)
    raise SpecParseError(f"Unknown module body {first[0]!r}", lineno, source)


def _map(block: _Block, modules: Dict[str, PresentedModule], source: Optional[str]) -> ModuleMap:
    if len(block.header) != 4:
        raise SpecParseError("Expected 'map <name> <source> <target>'", block.lineno, source)
    _, name, src, tgt = block.header
    for label in (src, tgt):
        if label not in modules:
            raise SpecParseError(f"Map {name!r} uses undeclared module {label!r}", block.lineno, source)
    s, t = modules[src], modules[tgt]
    rows = [_ints(tokens, lineno, source) for lineno, tokens in block.body]
    if len(rows) != t.dim or any(len(r) != s.dim for r in rows):
        raise SpecParseError(f"Map {name!r} needs {t.dim} rows of {s.dim} entries", block.lineno, source)
    matrix = np.asarray(rows, dtype=np.int64).reshape(t.dim, s.dim)
    return ModuleMap(s, t, FpMatrix.from_array(s.p, matrix), name)


def parse_diagram(text: str, algebra: Algebra, source: Optional[str] = None) -> Diagram:
    """
    Parse module blocks, map blocks and sequence lines.

    Raises:
        SpecParseError: malformed text, with the offending line
        ModuleAxiomError / NotAModuleMapError: well-formed data that is not a module or map
    """
    diagram = Diagram()
    for block in _blocks(text, source):
        name = block.header[1] if len(block.header) > 1 else ""
        if block.kind == "module":
            if name in diagram.modules:
                raise SpecParseError(f"Duplicate module {name!r}", block.lineno, source)
            diagram.modules[name] = _module(block, algebra, source)
        elif block.kind == "map":
            if name in diagram.maps:
                raise SpecParseError(f"Duplicate map {name!r}", block.lineno, source)
            diagram.maps[name] = _map(block, diagram.modules, source)
        else:
            names = block.header[1:]
            missing = [m for m in names if m not in diagram.maps]
            if not names or missing or block.body:
                raise SpecParseError(f"Bad sequence line, unknown maps {missing}", block.lineno, source)
            diagram.sequences.append(names)
    logger.debug(
        f"Parsed diagram: {len(diagram.modules)} modules, {len(diagram.maps)} maps, "
        f"{len(diagram.sequences)} sequences"
    )
    return diagram


def parse_module(text: str, algebra: Algebra, source: Optional[str] = None) -> PresentedModule:
    """The first module block of ``text``."""
    return parse_diagram(text, algebra, source).first_module()


def module_to_spec_text(m: PresentedModule) -> str:
    """Presentation-form module block for ``m``."""
    n, g = m.algebra.dim, m.num_generators
    lines = [
        f"module {m.name or 'M'} over {m.algebra.base.name} side={m.side}",
        f"presentation gens={g}",
    ]
    for row in m.relations.reshape(m.num_relations, g * n):
        lines.append("rel " + " ".join(str(int(x)) for x in row))
    return "\n".join(lines) + "\n"


class SpecLoader:
    """Loads ring, module, diagram and certificate files by extension."""

    SUPPORTED_EXTENSIONS = {
        ".ring": "ring",
        ".mod": "module",
        ".dia": "diagram",
        ".cert": "certificate",
    }

    def __init__(self):
        self.processed_files: List[str] = []

    def _read(self, file_path: str) -> str:
        path = Path(file_path)
        if not path.exists():
            raise FileNotFoundError(f"File not found: {path}")
        if path.suffix.lower() not in self.SUPPORTED_EXTENSIONS:
            logger.debug(f"Unregistered extension {path.suffix!r} for {path.name}")
        self.processed_files.append(str(path))
        return path.read_text()

    def load_ring(self, file_path: str) -> Algebra:
        algebra = parse_algebra(self._read(file_path), source=str(file_path))
        logger.info(f"Loaded ring {algebra.name} (p={algebra.p}, dim={algebra.dim}) from {Path(file_path).name}")
        return algebra

    def load_module(self, file_path: str, algebra: Algebra) -> PresentedModule:
        m = parse_module(self._read(file_path), algebra, source=str(file_path))
        logger.info(f"Loaded module {m.name}: dim {m.dim}, side {m.side}")
        return m

    def load_diagram(self, file_path: str, algebra: Algebra) -> Diagram:
        return parse_diagram(self._read(file_path), algebra, source=str(file_path))

    def load_certificate(self, file_path: str) -> CertificateRecord:
        return parse_certificate(self._read(file_path), source=str(file_path))

    def load_directory(self, directory_path: str, algebra: Algebra, recursive: bool = False) -> List[PresentedModule]:
        """
        Every module in the .mod / .dia files of a directory, sorted by file name.

        Files that fail to parse are logged and skipped.
        """
        directory = Path(directory_path)
        if not directory.is_dir():
            raise FileNotFoundError(f"Directory not found: {directory}")
        files = directory.rglob("*") if recursive else directory.glob("*")
        supported = sorted(f for f in files if f.is_file() and f.suffix.lower() in (".mod", ".dia"))
        logger.info(f"Found {len(supported)} module files in {directory}")
        modules = []
        for path in supported:
            try:
                diagram = parse_diagram(self._read(str(path)), algebra, source=str(path))
            except GtransError as e:
                logger.error(f"Error loading {path.name}: {e}")
                continue
            modules.extend(diagram.modules.values())
        logger.info(f"Loaded {len(modules)} modules")
        return modules

    def get_statistics(self) -> Dict[str, Any]:
        return {
            "total_files_processed": len(self.processed_files),
            "processed_files": self.processed_files,
            "supported_extensions": list(self.SUPPORTED_EXTENSIONS),
        }
