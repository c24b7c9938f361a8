"""Machine-readable run reports: metrics and pass/fail verdicts against declared thresholds."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

SCHEMA = 1


@dataclass
class Check:
    name: str
    value: float
    threshold: float
    op: str = "<="

    @property
    def passed(self) -> bool:
        v = self.value
        if v is None or (isinstance(v, float) and math.isnan(v)):
            return False
        if self.op == "<=":
            return v <= self.threshold
        if self.op == ">=":
            return v >= self.threshold
        raise ValueError(self.op)

    def to_dict(self) -> dict:
        return {"value": _clean(self.value), "threshold": self.threshold, "op": self.op,
                "passed": bool(self.passed)}


def _clean(v):
    if hasattr(v, "item"):
        v = v.item()
    if isinstance(v, float) and not math.isfinite(v):
        return repr(v)
    if isinstance(v, complex):
        return [v.real, v.imag]
    if isinstance(v, (list, tuple)):
        return [_clean(x) for x in v]
    if isinstance(v, dict):
        return {k: _clean(x) for k, x in v.items()}
    return v


@dataclass
class Report:
    command: str
    parameters: dict
    metrics: dict = field(default_factory=dict)
    checks: list[Check] = field(default_factory=list)
    version: str = ""
    wall_time: float | None = None

    def check(self, name: str, value, threshold: float, op: str = "<=") -> Check:
        c = Check(name, float(value), float(threshold), op)
        self.checks.append(c)
        return c

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def to_dict(self) -> dict:
        return {
            "schema": SCHEMA,
            "command": self.command,
            "parameters": _clean(self.parameters),
            "metrics": _clean(self.metrics),
            "checks": {c.name: c.to_dict() for c in self.checks},
            "passed": self.passed,
            "version": self.version,
            "wall_time": self.wall_time,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"
