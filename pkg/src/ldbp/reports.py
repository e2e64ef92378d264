"""Structured results of numerical checks."""
from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

__all__ = ["VerificationReport", "to_jsonable", "dumps"]

SCHEMA_VERSION = 1


def to_jsonable(obj):
    """Recursively convert numpy scalars/arrays and dataclass-likes to JSON types."""
    if hasattr(obj, "as_dict"):
        return to_jsonable(obj.as_dict())
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return to_jsonable(obj.tolist())
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        return v if np.isfinite(v) else repr(v)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    return obj


def dumps(obj):
    """Deterministic JSON text (sorted keys, fixed float repr)."""
    return json.dumps(to_jsonable(obj), sort_keys=True, indent=2)


@dataclass
class VerificationReport:
    """Outcome of a randomized or quadrature-based check.

    ``margin`` is the worst per-sample margin (positive is good unless the
    check says otherwise), ``margins`` holds every per-sample value.
    """

    name: str
    passed: bool
    margin: float
    tol: float
    seed: int | None = None
    num_checks: int = 0
    margins: np.ndarray | None = None
    details: dict = field(default_factory=dict)

    @property
    def status(self):
        return "PASS" if self.passed else "FAIL"

    def as_dict(self, include_margins=True):
        out = {
            "schema": SCHEMA_VERSION,
            "name": self.name,
            "status": self.status,
            "passed": self.passed,
            "margin": self.margin,
            "tol": self.tol,
            "seed": self.seed,
            "num_checks": self.num_checks,
            "details": self.details,
        }
        if include_margins and self.margins is not None:
            out["margins"] = np.asarray(self.margins)
        return to_jsonable(out)
