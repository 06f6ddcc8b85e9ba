"""Verification records and their stable serialisation.

Floats are written in fixed 17-significant-digit scientific notation and
keys keep insertion order, so identical runs produce identical bytes.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np


@dataclass
class CheckRecord:
    """One verified quantity.

    With ``expect="below"`` the check passes when ``max_residual <= tolerance``;
    with ``expect="above"`` it passes when the residual exceeds the tolerance
    (used where a field must fail to be Killing).
    """

    name: str
    max_residual: float
    tolerance: float
    expect: str = "below"

    @property
    def passed(self) -> bool:
        r = self.max_residual
        if math.isnan(r):
            return False
        return r <= self.tolerance if self.expect == "below" else r > self.tolerance

    def to_dict(self) -> dict:
        return {"name": self.name, "max_residual": float(self.max_residual),
                "tolerance": float(self.tolerance), "expect": self.expect, "pass": self.passed}


@dataclass
class VerificationReport:
    command: str
    config: dict
    checks: list[CheckRecord] = field(default_factory=list)
    summary: dict = field(default_factory=dict)

    def add(self, name: str, residual: float, tolerance: float, expect: str = "below") -> CheckRecord:
        rec = CheckRecord(name, float(residual), float(tolerance), expect)
        self.checks.append(rec)
        return rec

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_dict(self) -> dict:
        return {
            "command": self.command,
            "config": self.config,
            "checks": [c.to_dict() for c in self.checks],
            "summary": self.summary,
            "verdict": "pass" if self.passed else "fail",
        }

    def to_json(self) -> str:
        return dumps_stable(self.to_dict()) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["name", "max_residual", "tolerance", "expect", "pass"])
        for c in self.checks:
            w.writerow([c.name, format_float(c.max_residual), format_float(c.tolerance),
                        c.expect, "true" if c.passed else "false"])
        w.writerow(["verdict", "", "", "", "pass" if self.passed else "fail"])
        return buf.getvalue()


def format_float(x: float) -> str:
    x = float(x)
    if math.isnan(x):
        return '"nan"'
    if math.isinf(x):
        return '"inf"' if x > 0 else '"-inf"'
    return format(x, ".16e")


def _plain(obj: Any) -> Any:
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, np.generic):
        return obj.item()
    return obj


def dumps_stable(obj: Any, indent: int = 2, _level: int = 0) -> str:
    """JSON text with fixed-precision floats and insertion-ordered keys."""
    obj = _plain(obj)
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return format_float(obj)
    if isinstance(obj, str):
        return json.dumps(obj)
    if hasattr(obj, "value") and isinstance(getattr(obj, "value"), str):
        return json.dumps(obj.value)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(_plain(k)))}: {dumps_stable(v, indent, _level + 1)}"
                 for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(isinstance(_plain(v), (int, float)) and not isinstance(v, bool) for v in obj):
            return "[" + ", ".join(dumps_stable(v, indent, _level + 1) for v in obj) + "]"
        items = [pad + dumps_stable(v, indent, _level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    raise TypeError(f"cannot serialise {type(obj).__name__}")
