"""Example instances and their expectation tables."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

from ..core.verdict import CheckBounds, Status, Verdict, combine, exact_fail, exact_pass


@dataclass(frozen=True)
class Expectation:
    """One claim about an example.

    ``check`` runs a checker; the claim holds when the verdict passes
    (``expect="pass"``) or fails (``expect="fail"``) and, if given,
    ``detail`` accepts the verdict.
    """

    name: str
    claim: str
    check: Callable[[CheckBounds], Verdict]
    expect: str = "pass"
    detail: Callable[[Verdict], bool] | None = None

    def run(self, bounds: CheckBounds) -> tuple[bool, Verdict]:
        verdict = self.check(bounds)
        ok = verdict.passed == (self.expect == "pass")
        if ok and self.detail is not None:
            ok = bool(self.detail(verdict))
        return ok, verdict


@dataclass(frozen=True, eq=False)
class ExampleInstance:
    name: str
    specs: dict
    relations: dict = field(default_factory=dict)
    mappings: dict = field(default_factory=dict)
    expectations: tuple = ()
    bounds: CheckBounds = CheckBounds()
    params: dict = field(default_factory=dict)
    extras: dict = field(default_factory=dict)

    def expectation(self, name: str) -> Expectation:
        for e in self.expectations:
            if e.name == name:
                return e
        raise KeyError(name)


def claim(holds: bool, evidence=(), note: str = "") -> Verdict:
    """Verdict of a directly decided statement."""
    return exact_pass(evidence, note) if holds else exact_fail(evidence, note)


def run_expectations(inst: ExampleInstance, bounds: CheckBounds | None = None) -> Verdict:
    """Run every expectation; a condition fails when the observed verdict contradicts it."""
    bounds = bounds or inst.bounds
    conditions: dict[str, Verdict] = {}
    for e in inst.expectations:
        ok, verdict = e.run(bounds)
        observed = verdict.status.value
        summary = f"expected {e.expect}, observed {observed}"
        if ok:
            status = verdict.status if e.expect == "pass" else Status.EXACT_PASS
            conditions[e.name] = Verdict(status, verdict.evidence, verdict.conditions,
                                         verdict.bounds, summary)
        else:
            conditions[e.name] = exact_fail(verdict.evidence, f"{summary}: {e.claim}",
                                            **verdict.conditions)
    return combine(conditions, bounds, note=inst.name)
