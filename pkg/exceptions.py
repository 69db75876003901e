"""
Exception hierarchy for the gtrans engine.

Bounded verdicts, inconclusive isomorphism probes and failed exactness checks
are returned as values; only malformed input and broken invariants raise.
"""
from typing import Optional


class GtransError(Exception):
    """Base class for all engine errors."""


class SpecParseError(GtransError, ValueError):
    """Malformed ring, module, diagram or certificate text."""

    def __init__(self, message: str, line: Optional[int] = None, source: Optional[str] = None):
        self.line = line
        self.source = source
        where = ""
        if source:
            where += f"{source}:"
        if line is not None:
            where += f"{line}:"
        super().__init__(f"{where} {message}" if where else message)


class AlgebraValidationError(GtransError, ValueError):
    """Structure constants violate associativity, the unit law or the radical claim."""


class ModuleAxiomError(GtransError, ValueError):
    """Action matrices do not define a module over the algebra."""


class NotAModuleMapError(GtransError, ValueError):
    """A matrix fails to commute with the algebra action or has the wrong shape."""


class ModeMismatchError(GtransError, ValueError):
    """Gorenstein-ring GP mode was requested without a verified injective dimension."""


class CertificationError(GtransError):
    """An input sequence or presentation failed certification."""


class MissingDataError(GtransError):
    """Constructive data required by a construction could not be produced."""


class TheoremFailure(GtransError):
    """A proved statement did not hold; this is always an implementation bug."""
