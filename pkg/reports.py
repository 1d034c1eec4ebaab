from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable


@dataclass(frozen=True)
class CheckRecord:
    """
    Outcome of a single law check.

    - name: stable identifier, no whitespace (used in porcelain output)
    - passed: whether the identity held exactly
    - witness: on failure, where it broke (basis triple, degree, entry ...)
    """

    name: str
    passed: bool
    witness: str = ""


def ok(name: str) -> CheckRecord:
    return CheckRecord(name=name, passed=True)


def fail(name: str, witness: str) -> CheckRecord:
    return CheckRecord(name=name, passed=False, witness=witness)


def check(name: str, condition: bool, witness: str = "") -> CheckRecord:
    return ok(name) if condition else fail(name, witness or "condition is false")


def all_passed(records: Iterable[CheckRecord]) -> bool:
    return all(r.passed for r in records)


def first_failure(records: Iterable[CheckRecord]) -> CheckRecord | None:
    return next((r for r in records if not r.passed), None)


@dataclass
class Report:
    command: str
    checks: list[CheckRecord] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all_passed(self.checks)

    @property
    def exit_code(self) -> int:
        return 0 if self.ok else 1

    def add(self, record: CheckRecord) -> None:
        self.checks.append(record)

    def extend(self, records: Iterable[CheckRecord], prefix: str = "") -> None:
        for r in records:
            name = f"{prefix}{r.name}" if prefix else r.name
            self.checks.append(CheckRecord(name=name, passed=r.passed, witness=r.witness))

    def render(self, porcelain: bool = False) -> str:
        lines: list[str] = []
        for r in self.checks:
            status = "PASS" if r.passed else "FAIL"
            if porcelain:
                tail = f" {r.witness}" if (r.witness and not r.passed) else ""
                lines.append(f"CHECK {r.name} {status}{tail}")
            else:
                tail = f"  ({r.witness})" if (r.witness and not r.passed) else ""
                lines.append(f"{status}  {r.name}{tail}")
        if not porcelain:
            passed = sum(1 for r in self.checks if r.passed)
            lines.append(f"{self.command}: {passed}/{len(self.checks)} checks passed")
        return "\n".join(lines)
