"""Verification report records and their JSON / CSV serialization."""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field

SCHEMA = "casimir-qubit/1"

PASS = "pass"
FAIL = "fail"
INFO = "info"
SKIPPED = "skipped"


def fmt(x: float) -> str:
    """17 significant digits, lowercase e-notation."""
    return format(float(x), ".16e")


def encode(obj):
    """JSON-ready form: complex numbers become ``{re, im}``, arrays nested lists."""
    if isinstance(obj, complex):
        return {"re": obj.real, "im": obj.imag}
    if hasattr(obj, "tolist") and hasattr(obj, "dtype"):
        return encode(obj.tolist())
    if isinstance(obj, dict):
        return {str(k): encode(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [encode(v) for v in obj]
    if isinstance(obj, float) and not math.isfinite(obj):
        return repr(obj)
    if hasattr(obj, "item") and callable(obj.item):
        return encode(obj.item())
    return obj


@dataclass
class CheckEntry:
    id: str
    anchor: str
    status: str
    residual: float | None = None
    tolerance: float | None = None
    conventions: dict = field(default_factory=dict)
    note: str = ""
    value: object = None

    @classmethod
    def measured(cls, id: str, anchor: str, residual: float, tolerance: float, **kw) -> "CheckEntry":
        ok = residual <= tolerance and math.isfinite(residual)
        return cls(id, anchor, PASS if ok else FAIL, float(residual), float(tolerance), **kw)

    def as_dict(self) -> dict:
        return encode({
            "id": self.id,
            "anchor": self.anchor,
            "status": self.status,
            "residual": self.residual,
            "tolerance": self.tolerance,
            "conventions": self.conventions,
            "note": self.note,
            "value": self.value,
        })


@dataclass
class VerificationReport:
    checks: list[CheckEntry]
    version: str
    config: dict

    def __post_init__(self):
        ids = [c.id for c in self.checks]
        dup = {i for i in ids if ids.count(i) > 1}
        if dup:
            raise ValueError(f"duplicate check ids: {sorted(dup)}")

    def summary(self) -> dict:
        out = {PASS: 0, FAIL: 0, INFO: 0, SKIPPED: 0}
        for c in self.checks:
            out[c.status] += 1
        out["total"] = len(self.checks)
        return out

    @property
    def failed(self) -> bool:
        return any(c.status == FAIL for c in self.checks)

    def to_json(self) -> str:
        doc = {
            "schema": SCHEMA,
            "version": self.version,
            "config": encode(self.config),
            "summary": self.summary(),
            "checks": [c.as_dict() for c in self.checks],
        }
        return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf)
        w.writerow(["id", "anchor", "status", "residual", "tolerance", "conventions", "note"])
        for c in self.checks:
            w.writerow([
                c.id, c.anchor, c.status,
                "" if c.residual is None else fmt(c.residual),
                "" if c.tolerance is None else fmt(c.tolerance),
                json.dumps(encode(c.conventions), sort_keys=True),
                c.note,
            ])
        return buf.getvalue()
