"""Structured verification reports with canonical serialization.

Reports are deterministic: same configuration, same bytes.  Checks carry a
stable identifier and a short statement of the mathematical fact verified.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

REPORT_SCHEMA = "thhtate.report@1"


@dataclass
class Check:
    check_id: str
    statement: str
    status: str  # "pass" or "fail"
    detail: str = ""

    def to_obj(self):
        out = {
            "id": self.check_id,
            "statement": self.statement,
            "status": self.status,
        }
        if self.detail:
            out["detail"] = self.detail
        return out


@dataclass
class VerificationReport:
    suite: str
    config: dict
    checks: list = field(default_factory=list)

    def add(self, check_id, statement, fn):
        """Run fn(); record pass, or fail with the error message."""
        try:
            fn()
        except Exception as exc:  # noqa: BLE001 - every failure must be reported
            self.checks.append(Check(check_id, statement, "fail", str(exc)))
            return False
        self.checks.append(Check(check_id, statement, "pass"))
        return True

    def add_expected_failure(self, check_id, statement, fn, exc_types):
        """Record pass only if fn() raises one of exc_types (mutation tests)."""
        try:
            fn()
        except exc_types:
            self.checks.append(Check(check_id, statement, "pass"))
            return True
        except Exception as exc:  # noqa: BLE001
            self.checks.append(
                Check(check_id, statement, "fail", f"unexpected error: {exc}")
            )
            return False
        self.checks.append(
            Check(check_id, statement, "fail", "the corruption was not detected")
        )
        return False

    @property
    def passed(self):
        return all(c.status == "pass" for c in self.checks)

    def to_obj(self):
        return {
            "schema": REPORT_SCHEMA,
            "suite": self.suite,
            "config": self.config,
            "pass": self.passed,
            "checks": [c.to_obj() for c in self.checks],
        }

    def to_json(self):
        return canonical_json(self.to_obj())

    def to_text(self):
        lines = [f"suite: {self.suite}"]
        for k in sorted(self.config):
            lines.append(f"  config.{k}: {self.config[k]}")
        for c in self.checks:
            mark = "PASS" if c.status == "pass" else "FAIL"
            line = f"[{mark}] {c.check_id}: {c.statement}"
            if c.detail:
                line += f"  ({c.detail})"
            lines.append(line)
        lines.append(f"result: {'pass' if self.passed else 'FAIL'}")
        return "\n".join(lines) + "\n"


def canonical_json(obj):
    """Deterministic JSON bytes-for-bytes serialization."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n"
