"""Programmatic builders for the worked examples."""

from __future__ import annotations

from .examples import (
    counter,
    example_a,
    example_b,
    example_c,
    example_d,
    example_e,
    example_f,
    example_g,
    example_h,
    example_i,
    example_j,
)
from .instance import ExampleInstance, Expectation, claim, run_expectations
from .pipeline import example_pipeline

BUILDERS = {
    "A": example_a,
    "B": example_b,
    "C": example_c,
    "D": example_d,
    "E": example_e,
    "F": example_f,
    "G": example_g,
    "G'": example_g,
    "H": example_h,
    "I": example_i,
    "J": example_j,
    "K0-K5": example_pipeline,
}

NAMES = ("A", "B", "C", "D", "E", "F", "G", "G'", "H", "I", "J", "K0-K5")


def _canonical(name: str) -> str:
    key = name.strip().upper().replace("′", "'").replace("PRIME", "'")
    if key not in BUILDERS:
        raise KeyError(f"unknown example {name!r}; choose from {', '.join(NAMES)}")
    return key


def build_example(name: str, **params) -> ExampleInstance:
    """Build example ``name`` (``A`` to ``J``, ``G'`` or ``K0-K5``) with optional parameters.

    ``G`` and ``G'`` share one instance holding both variants.
    """
    return BUILDERS[_canonical(name)](**params)


__all__ = [
    "BUILDERS",
    "ExampleInstance",
    "Expectation",
    "NAMES",
    "build_example",
    "claim",
    "counter",
    "run_expectations",
]
