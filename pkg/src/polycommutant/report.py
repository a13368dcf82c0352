"""Verification records shared by the A3 and Racah pipelines."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

VERIFIED = "verified"
FAILED = "failed"


@dataclass
class RelationReport:
    id: str
    indices: tuple[int, ...] = ()
    lhs: str = ""
    expected: str = ""
    residual: str = "0"
    status: str = VERIFIED
    correction: str | None = None
    paper_correction: str | None = None
    paper_comparison: dict[str, Any] | None = None
    extra: dict[str, Any] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.status == VERIFIED

    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {
            "id": self.id,
            "indices": list(self.indices),
            "lhs": self.lhs,
            "expected": self.expected,
            "residual": self.residual,
            "status": self.status,
        }
        if self.correction is not None:
            out["correction"] = self.correction
        if self.paper_correction is not None:
            out["paper_correction"] = self.paper_correction
        if self.paper_comparison is not None:
            out["paper_comparison"] = self.paper_comparison
        if self.extra:
            out["extra"] = self.extra
        return out

    def text_line(self) -> str:
        idx = ",".join(map(str, self.indices))
        line = f"[{self.status}] {self.id}({idx}) residual: {self.residual}"
        if self.correction is not None:
            line += f" | correction: {self.correction}"
        if self.paper_comparison is not None:
            line += " | paper: " + ("match" if self.paper_comparison.get("matched") else "differs")
        return line


def status_for(residual_is_zero: bool) -> str:
    return VERIFIED if residual_is_zero else FAILED
