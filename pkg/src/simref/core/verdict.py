"""Check outcomes and search bounds."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field, replace
from typing import Any

from .order import jsonable


@dataclass(frozen=True)
class CheckBounds:
    """Limits for every bounded search.

    ``max_prefix``/``max_cycle`` bound enumerated lassos, ``unroll_factor``
    bounds how many source periods a matched target period may span,
    ``horizon`` bounds quiescence indices and ``candidate_cap`` bounds
    generated spaces and preimage enumeration.
    """

    max_prefix: int = 3
    max_cycle: int = 2
    unroll_factor: int = 1
    horizon: int = 8
    candidate_cap: int = 100_000

    def __post_init__(self):
        if self.max_prefix < 0:
            raise ValueError("max_prefix must be >= 0")
        for name in ("max_cycle", "unroll_factor", "horizon", "candidate_cap"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be >= 1")

    def with_(self, **changes) -> "CheckBounds":
        return replace(self, **changes)

    def to_json(self) -> dict:
        return {
            "max_prefix": self.max_prefix,
            "max_cycle": self.max_cycle,
            "unroll_factor": self.unroll_factor,
            "horizon": self.horizon,
            "candidate_cap": self.candidate_cap,
        }

    @classmethod
    def parse(cls, text: str) -> "CheckBounds":
        """Read ``prefix,cycle[,unroll[,horizon[,cap]]]``."""
        parts = [int(p) for p in text.split(",") if p.strip()]
        names = ("max_prefix", "max_cycle", "unroll_factor", "horizon", "candidate_cap")
        if not 1 <= len(parts) <= len(names):
            raise ValueError(f"bad bounds {text!r}")
        return cls(**dict(zip(names, parts)))


class Status(enum.Enum):
    EXACT_PASS = "ExactPass"
    EXACT_FAIL = "ExactFail"
    BOUNDED_PASS = "BoundedPass"


@dataclass(frozen=True)
class Verdict:
    status: Status
    evidence: tuple = ()
    conditions: dict = field(default_factory=dict)
    bounds: CheckBounds | None = None
    note: str = ""

    @property
    def passed(self) -> bool:
        return self.status is not Status.EXACT_FAIL

    @property
    def failed(self) -> bool:
        return self.status is Status.EXACT_FAIL

    @property
    def exact(self) -> bool:
        return self.status is not Status.BOUNDED_PASS

    def condition(self, name: str) -> "Verdict":
        return self.conditions[name]

    def to_dict(self) -> dict:
        out: dict[str, Any] = {
            "status": self.status.value,
            "conditions": {k: v.to_dict() for k, v in self.conditions.items()},
            "witnesses": [jsonable(e) for e in self.evidence],
        }
        if self.bounds is not None:
            out["bounds"] = self.bounds.to_json()
        if self.note:
            out["note"] = self.note
        return out

    def __str__(self) -> str:
        head = self.status.value + (f" ({self.note})" if self.note else "")
        lines = [head]
        for name, sub in self.conditions.items():
            lines.append(f"  {name}: {sub.status.value}" + (f" ({sub.note})" if sub.note else ""))
        return "\n".join(lines)


def exact_pass(evidence=(), note: str = "", **conditions) -> Verdict:
    return Verdict(Status.EXACT_PASS, tuple(evidence), conditions, None, note)


def exact_fail(evidence=(), note: str = "", **conditions) -> Verdict:
    return Verdict(Status.EXACT_FAIL, tuple(evidence), conditions, None, note)


def bounded_pass(bounds: CheckBounds, evidence=(), note: str = "", **conditions) -> Verdict:
    return Verdict(Status.BOUNDED_PASS, tuple(evidence), conditions, bounds, note)


def combine(conditions: dict, bounds: CheckBounds | None = None, note: str = "",
            evidence=()) -> Verdict:
    """Overall verdict of named sub-verdicts: any failure fails, any bound bounds."""
    subs = list(conditions.values())
    failing = [s for s in subs if s.failed]
    if failing:
        ev = tuple(evidence) or failing[0].evidence
        return Verdict(Status.EXACT_FAIL, ev, dict(conditions), bounds, note)
    if all(s.status is Status.EXACT_PASS for s in subs):
        return Verdict(Status.EXACT_PASS, tuple(evidence), dict(conditions), None, note)
    return Verdict(Status.BOUNDED_PASS, tuple(evidence), dict(conditions), bounds, note)
