"""Verification reports shared by the susy, coherent, frames and quantization checks."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any


def _num(z) -> Any:
    if z is None:
        return None
    z = complex(z)
    if z.imag == 0.0:
        return z.real
    return {"re": z.real, "im": z.imag}


@dataclass(frozen=True)
class VerificationReport:
    """Outcome of one identity check; ``passed`` iff residual <= tolerance."""

    identity: str
    inputs: dict
    residual: float
    tolerance: float
    strategy: str
    lhs: complex | None = None
    rhs: complex | None = None
    notes: tuple[str, ...] = ()
    details: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return bool(math.isfinite(self.residual) and self.residual <= self.tolerance)

    def to_dict(self) -> dict:
        out = {
            "identity": self.identity,
            "inputs": self.inputs,
            "lhs": _num(self.lhs),
            "rhs": _num(self.rhs),
            "residual": float(self.residual),
            "tolerance": float(self.tolerance),
            "pass": self.passed,
            "strategy": self.strategy,
        }
        # the flat susy form {identity, params, n, ...} is kept alongside
        for key in ("params", "n"):
            if key in self.inputs:
                out[key] = self.inputs[key]
        if self.notes:
            out["notes"] = list(self.notes)
        if self.details:
            out["details"] = self.details
        return out

    def summary(self) -> str:
        flag = "PASS" if self.passed else "FAIL"
        return f"[{flag}] {self.identity} ({self.strategy}): residual {self.residual:.3e} <= {self.tolerance:.1e}"


def relative_residual(lhs: complex, rhs: complex, floor: float = 0.0) -> float:
    """|lhs - rhs| relative to the larger magnitude, never below ``floor``."""
    scale = max(abs(lhs), abs(rhs), floor)
    if scale == 0.0:
        return 0.0
    return abs(lhs - rhs) / scale
