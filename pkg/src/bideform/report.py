"""Verification reports: named checks with witnesses, renderable as text or JSON.

The machine rendering carries exactly the data of the human one, so the two
can never drift apart.
"""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class CheckResult:
    """Outcome of one named check."""

    name: str
    passed: bool
    witness: str | None = None
    order: int | None = None  # t-order of the first failure, when meaningful

    def to_dict(self):
        d = {"name": self.name, "passed": self.passed}
        if self.witness is not None:
            d["witness"] = self.witness
        if self.order is not None:
            d["order"] = self.order
        return d


@dataclass
class VerificationReport:
    """A list of checks plus free-form numeric results and notes."""

    title: str
    checks: list[CheckResult] = field(default_factory=list)
    numbers: dict = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)

    def add(self, name, passed, witness=None, order=None):
        self.checks.append(CheckResult(name, bool(passed), witness, order))

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def check(self, name: str) -> CheckResult:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def first_failure_orders(self) -> dict:
        """Map check name -> order of first failure (None while passing)."""
        return {c.name: c.order for c in self.checks}

    def render_text(self) -> str:
        lines = [f"{self.title}: {'PASS' if self.passed else 'FAIL'}"]
        for c in self.checks:
            line = f"  [{'ok' if c.passed else 'FAIL'}] {c.name}"
            if c.order is not None:
                line += f" (order {c.order})"
            if c.witness and not c.passed:
                line += f": {c.witness}"
            lines.append(line)
        for key in sorted(self.numbers):
            lines.append(f"  {key} = {self.numbers[key]}")
        for note in self.notes:
            lines.append(f"  note: {note}")
        return "\n".join(lines)

    def to_dict(self):
        return {
            "title": self.title,
            "passed": self.passed,
            "checks": [c.to_dict() for c in self.checks],
            "numbers": dict(sorted(self.numbers.items())),
            "notes": list(self.notes),
        }
