"""Pass/fail records produced by the verification routines."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any


@dataclass
class Report:
    statement_id: str
    instances: int = 0
    passed: bool = True
    counterexample: Any = None
    details: dict = field(default_factory=dict)

    def fail(self, counterexample) -> None:
        # keep the first counterexample only
        if self.passed:
            self.counterexample = counterexample
        self.passed = False

    def to_json(self) -> dict:
        out = {
            "statement_id": self.statement_id,
            "instances": self.instances,
            "passed": self.passed,
        }
        if self.counterexample is not None:
            out["counterexample"] = _jsonable(self.counterexample)
        if self.details:
            out["details"] = _jsonable(self.details)
        return out

    def __bool__(self) -> bool:
        return self.passed


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set, frozenset)):
        items = [_jsonable(v) for v in obj]
        return sorted(items, key=str) if isinstance(obj, (set, frozenset)) else items
    if isinstance(obj, (bool, int, float, str)) or obj is None:
        return obj
    return str(obj)
