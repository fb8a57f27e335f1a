"""Check results shared by validators, identity checks and the CLI."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, List, Optional, Tuple


@dataclass
class Finding:
    check: str
    indices: Tuple[int, ...] = ()
    passed: bool = True
    residual: Any = None  # Expr, Form or None
    detail: str = ""

    def to_dict(self) -> dict:
        out = {"check": self.check, "indices": list(self.indices),
               "verdict": "pass" if self.passed else "fail"}
        if not self.passed and self.residual is not None:
            out["residual"] = str(self.residual)
        if self.detail:
            out["detail"] = self.detail
        return out

    def __str__(self):
        idx = f"[{','.join(map(str, self.indices))}]" if self.indices else ""
        line = f"{'PASS' if self.passed else 'FAIL'} {self.check}{idx}"
        if self.detail:
            line += f" ({self.detail})"
        if not self.passed and self.residual is not None:
            line += f": residual = {self.residual}"
        return line


@dataclass
class Report:
    name: str
    findings: List[Finding] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(f.passed for f in self.findings)

    @property
    def failures(self) -> List[Finding]:
        return [f for f in self.findings if not f.passed]

    def add(self, check: str, indices=(), residual=None, passed: Optional[bool] = None,
            detail: str = "") -> Finding:
        """Record a check; ``passed`` defaults to ``residual`` being zero."""
        if passed is None:
            passed = residual is None or residual.is_zero()
        f = Finding(check, tuple(indices), passed, None if passed else residual, detail)
        self.findings.append(f)
        return f

    def extend(self, other: "Report") -> "Report":
        self.findings.extend(other.findings)
        return self

    def __bool__(self):
        return self.passed

    def __str__(self):
        head = f"{self.name}: {'pass' if self.passed else 'fail'}"
        return "\n".join([head] + ["  " + str(f) for f in self.findings])


ValidationReport = Report
