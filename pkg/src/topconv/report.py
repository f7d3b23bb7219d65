"""Check verdicts, reports, and evaluation budgets shared by every module.

A check either passes outright, passes relative to an explicitly declared
filter universe, fails with a serialized witness, or is skipped with a
reason.  Reports are deterministic for a fixed (document, seed, budgets)
triple; wall-clock timing is carried separately so it never enters the
comparable body.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

PASS = "pass"
FAIL = "fail"
RELATIVE = "relative-pass"
SKIP = "skipped"


@dataclass(frozen=True)
class CheckResult:
    name: str
    status: str
    witness: str | None = None
    detail: str | None = None

    @property
    def ok(self) -> bool:
        return self.status != FAIL


def passed(name: str, detail: str | None = None) -> CheckResult:
    return CheckResult(name, PASS, None, detail)


def relative(name: str, detail: str | None = None) -> CheckResult:
    return CheckResult(name, RELATIVE, None, detail)


def verdict(name: str, complete: bool, detail: str | None = None) -> CheckResult:
    """Pass outright on a complete universe, relative-pass otherwise."""
    return passed(name, detail) if complete else relative(name, detail)


def failed(name: str, witness: str, detail: str | None = None) -> CheckResult:
    return CheckResult(name, FAIL, witness, detail)


def skipped(name: str, reason: str) -> CheckResult:
    return CheckResult(name, SKIP, None, reason)


@dataclass(frozen=True)
class Budgets:
    """Caps that keep every exhaustive loop finite and reproducible.

    enumeration: largest |L|^|X| (or candidate count) that may be fully
    materialized; sample: fallback sample size for checks above budget;
    closure_rounds: iterations when a filter universe is generated by need.
    """

    enumeration: int = 20_000
    sample: int = 500
    closure_rounds: int = 4


class BudgetExceeded(RuntimeError):
    pass


@dataclass
class Report:
    seed: int
    budgets: Budgets
    entries: list[CheckResult] = field(default_factory=list)
    elapsed: float = 0.0

    def extend(self, results) -> None:
        self.entries.extend(results)

    @property
    def failures(self) -> list[CheckResult]:
        return [e for e in self.entries if e.status == FAIL]

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_text(self) -> str:
        lines = []
        width = max((len(e.status) for e in self.entries), default=4)
        for e in self.entries:
            line = f"{e.status.upper():<{width + 2}}{e.name}"
            if e.witness:
                line += f"  witness: {e.witness}"
            if e.detail:
                line += f"  [{e.detail}]"
            lines.append(line)
        lines.append(
            f"checks: {len(self.entries)}  failures: {len(self.failures)}"
            f"  seed: {self.seed}  budgets: {self.budgets.enumeration}/"
            f"{self.budgets.sample}/{self.budgets.closure_rounds}"
        )
        lines.append(f"time: {self.elapsed:.3f}s")
        return "\n".join(lines)

    def to_json(self) -> str:
        doc = {
            "schema": "topconv-report/1",
            "seed": self.seed,
            "budgets": {
                "enumeration": self.budgets.enumeration,
                "sample": self.budgets.sample,
                "closure_rounds": self.budgets.closure_rounds,
            },
            "checks": [
                {
                    "name": e.name,
                    "status": e.status,
                    "witness": e.witness,
                    "detail": e.detail,
                }
                for e in self.entries
            ],
            "failures": len(self.failures),
            "elapsed_s": round(self.elapsed, 3),
        }
        return json.dumps(doc, indent=2, sort_keys=True)
