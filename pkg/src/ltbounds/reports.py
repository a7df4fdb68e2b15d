"""Shared result containers for the bound-verification harnesses."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

__all__ = ["BoundReport", "ConvergenceError", "PASS_SLACK"]

# Multiplicative slack absorbing round-off in an otherwise strict lhs <= rhs.
PASS_SLACK = 1e-12


class ConvergenceError(RuntimeError):
    """Raised when a self-convergence check (grid doubling) fails."""


@dataclass(frozen=True)
class BoundReport:
    """Outcome of checking one inequality instance lhs <= rhs.

    ratio is lhs/rhs (0 when both sides vanish, inf when only rhs does);
    passed is equivalent to ratio <= 1 + PASS_SLACK.  metadata carries the
    discretization parameters so a failing instance can be reproduced.
    """

    lhs: float
    rhs: float
    ratio: float
    passed: bool
    constant_used: float
    metadata: dict = field(default_factory=dict)

    @classmethod
    def build(cls, lhs: float, rhs: float, constant_used: float, **metadata) -> "BoundReport":
        if lhs < 0 or rhs < 0:
            raise ValueError("bound sides must be non-negative")
        if rhs == 0.0:
            ratio = 0.0 if lhs == 0.0 else math.inf
        else:
            ratio = lhs / rhs
        return cls(
            lhs=float(lhs),
            rhs=float(rhs),
            ratio=float(ratio),
            passed=bool(lhs <= rhs * (1.0 + PASS_SLACK)),
            constant_used=float(constant_used),
            metadata=dict(metadata),
        )

    def with_rhs_scaled(self, factor: float) -> "BoundReport":
        """Rebuild the report with the right-hand side multiplied by factor.

        Fault-injection hook: factor < 1 deliberately weakens the bound so a
        harness can demonstrate that it detects violations.
        """
        if factor <= 0:
            raise ValueError("rhs scale factor must be > 0")
        meta = dict(self.metadata)
        meta["rhs_scale"] = factor
        return BoundReport.build(self.lhs, self.rhs * factor, self.constant_used, **meta)

    def to_dict(self) -> dict:
        out = {
            "lhs": self.lhs,
            "rhs": self.rhs,
            "ratio": self.ratio,
            "pass": self.passed,
            "constant_used": self.constant_used,
        }
        out.update(self.metadata)
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)
