"""Check records and JSON report emission.

Every float is written with 17 significant digits so reports round-trip
exactly; the only field that changes between identical runs is
``generated_at``.
"""

import json
import math
from dataclasses import dataclass, field
from datetime import datetime, timezone

from . import __version__

RULES = ("abs", "max", "min")


@dataclass(frozen=True)
class Check:
    """One named check.

    ``rule`` decides pass/fail: ``abs`` means |value - reference| <= tolerance,
    ``max`` means value <= tolerance and ``min`` means value >= reference - tolerance.
    """

    name: str
    value: float
    reference: float = 0.0
    tolerance: float = 0.0
    rule: str = "abs"
    note: str = ""

    def __post_init__(self):
        if self.rule not in RULES:
            raise ValueError(f"rule must be one of {RULES}")

    @property
    def passed(self):
        v = float(self.value)
        if not math.isfinite(v):
            return False
        if self.rule == "abs":
            return abs(v - self.reference) <= self.tolerance
        if self.rule == "max":
            return v <= self.tolerance
        return v >= self.reference - self.tolerance

    def as_dict(self):
        return {
            "check_name": self.name,
            "value": float(self.value),
            "reference_value": float(self.reference),
            "tolerance": float(self.tolerance),
            "rule": self.rule,
            "pass": self.passed,
            "note": self.note,
        }


@dataclass
class CheckReport:
    suite: str
    checks: list = field(default_factory=list)
    environment: dict = field(default_factory=dict)
    extra: dict = field(default_factory=dict)

    @property
    def passed(self):
        return all(c.passed for c in self.checks)

    def as_dict(self, timestamp=True):
        out = {
            "suite": self.suite,
            "passed": self.passed,
            "environment": {"version": __version__, **self.environment},
            "checks": [c.as_dict() for c in self.checks],
        }
        if self.extra:
            out["extra"] = self.extra
        if timestamp:
            out["generated_at"] = datetime.now(timezone.utc).isoformat()
        return out


def _format_floats(obj, table):
    """Replace floats by placeholder strings, collecting their 17-digit text."""
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return obj
    if isinstance(obj, float):
        key = f"\x00{len(table)}\x00"
        if math.isnan(obj):
            table.append("NaN")
        elif math.isinf(obj):
            table.append("Infinity" if obj > 0 else "-Infinity")
        else:
            table.append(format(obj, ".17g"))
        return key
    if isinstance(obj, dict):
        return {str(k): _format_floats(v, table) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_format_floats(v, table) for v in obj]
    if hasattr(obj, "item"):  # numpy scalars
        return _format_floats(obj.item(), table)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj):
    """JSON text with every float at 17 significant digits."""
    table = []
    text = json.dumps(_format_floats(obj, table), indent=2)
    for i, s in enumerate(table):
        text = text.replace(json.dumps(f"\x00{i}\x00"), s, 1)
    return text + "\n"


def write_json(obj, path):
    text = dumps(obj)
    if path in (None, "-"):
        print(text, end="")
        return
    with open(path, "w") as fh:
        fh.write(text)
