"""Stutter insertions and the empirical stutter-closure test."""

from __future__ import annotations

from typing import Iterable, Iterator

from .formula import Formula, tabulate
from .lasso import Lasso


def stutter_variants(xs: Lasso) -> Iterator[Lasso]:
    """A deterministic family of words stutter-equivalent to ``xs``.

    Each spine position is duplicated once in turn, and separately the
    whole cycle is written out twice with every letter doubled.
    """
    u, v = list(xs.prefix), list(xs.cycle)
    for i in range(len(u)):
        yield Lasso(u[: i + 1] + u[i:], v)
    for i in range(len(v)):
        yield Lasso(u, v[: i + 1] + v[i:])
    yield Lasso(u, [x for x in v + v for _ in range(2)])


def sample_lassos(space: Iterable, per_space: int = 5) -> list[Lasso]:
    """Constant words, two-letter cycles and short prefixes over a sample of ``space``."""
    space = list(space)
    if not space:
        return []
    if len(space) > per_space:
        stride = (len(space) - 1) / (per_space - 1)
        picked = [space[round(k * stride)] for k in range(per_space)]
    else:
        picked = space
    out = []
    for x in picked:
        out.append(Lasso.constant(x))
        for y in picked:
            if x != y:
                out.append(Lasso((), (x, y)))
                out.append(Lasso((x,), (y,)))
    return out


def stutter_counterexample(phi: Formula, samples: Iterable[Lasso]):
    """First ``(xs, ys)`` with ``ys`` a stuttering of ``xs`` that ``phi`` tells apart."""
    for xs in samples:
        truth = tabulate(phi, xs)[0]
        for ys in stutter_variants(xs):
            if tabulate(phi, ys)[0] != truth:
                return xs, ys
    return None
