"""
Report models shared by the constructions, the sweeps and the CLI.
"""
from typing import Any, Dict, List, Optional

from loguru import logger
from pydantic import BaseModel, Field


# Evidence levels for claimed isomorphisms, weakest first
EVIDENCE_DIMENSION = "dimension"
EVIDENCE_INVARIANT = "invariant"
EVIDENCE_EXPLICIT = "explicit-iso"


class CheckItem(BaseModel):
    """One compared quantity inside a consistency report."""
    label: str
    expected: Any
    observed: Any
    passed: bool
    evidence: str = EVIDENCE_DIMENSION


class CheckReport(BaseModel):
    """Outcome of a consistency check; any failed item is a FAILURE."""
    name: str
    items: List[CheckItem] = Field(default_factory=list)
    notes: Dict[str, Any] = Field(default_factory=dict)

    def add(self, label: str, expected: Any, observed: Any, evidence: str = EVIDENCE_DIMENSION,
            passed: Optional[bool] = None) -> bool:
        ok = (expected == observed) if passed is None else passed
        self.items.append(CheckItem(label=label, expected=expected, observed=observed, passed=ok, evidence=evidence))
        if not ok:
            logger.error(f"FAILURE in {self.name}: {label}: expected {expected}, observed {observed}")
        return ok

    @property
    def failures(self) -> List[CheckItem]:
        return [item for item in self.items if not item.passed]

    @property
    def passed(self) -> bool:
        return not self.failures

    def failure_lines(self) -> List[str]:
        return [f"{self.name}: {i.label}: expected {i.expected}, observed {i.observed}" for i in self.failures]


class Report(BaseModel):
    """Machine-readable result of one CLI command."""
    command: str
    inputs: Dict[str, str] = Field(default_factory=dict)
    verdict: str = ""
    tables: Dict[str, Any] = Field(default_factory=dict)
    certificates: List[str] = Field(default_factory=list)
    evidence: Dict[str, str] = Field(default_factory=dict)
    failures: List[str] = Field(default_factory=list)
    bounds: Dict[str, int] = Field(default_factory=dict)

    @property
    def exit_code(self) -> int:
        return 4 if self.failures else 0

    def absorb(self, check: CheckReport):
        """Copy a check report's items into tables and failures."""
        self.tables[check.name] = [item.model_dump() for item in check.items]
        if check.notes:
            self.tables[f"{check.name}.notes"] = check.notes
        self.failures.extend(check.failure_lines())

    def to_json(self) -> str:
        return self.model_dump_json(indent=2)

    @classmethod
    def from_json(cls, text: str) -> "Report":
        return cls.model_validate_json(text)

    def to_text(self) -> str:
        """Human-readable rendering."""
        lines = [f"command: {self.command}", f"verdict: {self.verdict}"]
        if self.bounds:
            lines.append("bounds: " + ", ".join(f"{k}={v}" for k, v in self.bounds.items()))
        for name, digest in self.inputs.items():
            lines.append(f"input {name}: sha256 {digest[:16]}")
        for key, value in self.tables.items():
            lines.append(f"{key}: {value}")
        for key, value in self.evidence.items():
            lines.append(f"evidence {key}: {value}")
        if self.certificates:
            lines.append(f"certificates: {len(self.certificates)} embedded")
        for failure in self.failures:
            lines.append(f"FAILURE: {failure}")
        return "\n".join(lines)
