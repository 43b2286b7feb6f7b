"""Ultimately periodic infinite words ``u . v^omega``."""

from __future__ import annotations

from dataclasses import dataclass
from math import lcm
from typing import Any, Callable, Iterable, Sequence

from .order import state_key


def _primitive_root(cycle: tuple) -> tuple:
    n = len(cycle)
    for d in range(1, n + 1):
        if n % d == 0 and cycle[:d] * (n // d) == cycle:
            return cycle[:d]
    return cycle


@dataclass(frozen=True)
class Lasso:
    """The infinite word ``prefix . cycle^omega``.

    Instances are always stored in canonical form: the cycle is primitive
    and the prefix is as short as possible.  Two lassos therefore compare
    equal exactly when they denote the same infinite word, which makes them
    usable as set members and dictionary keys.
    """

    prefix: tuple
    cycle: tuple

    def __init__(self, prefix: Iterable[Any] = (), cycle: Iterable[Any] = ()):
        u = tuple(prefix)
        v = tuple(cycle)
        if not v:
            raise ValueError("a lasso needs a nonempty cycle")
        v = _primitive_root(v)
        while u and u[-1] == v[-1]:
            v = (u[-1],) + v[:-1]
            u = u[:-1]
        object.__setattr__(self, "prefix", u)
        object.__setattr__(self, "cycle", v)

    @classmethod
    def constant(cls, x: Any) -> "Lasso":
        return cls((), (x,))

    def __getitem__(self, i: int) -> Any:
        if i < 0:
            raise IndexError("lassos are indexed from 0")
        u = self.prefix
        if i < len(u):
            return u[i]
        return self.cycle[(i - len(u)) % len(self.cycle)]

    @property
    def spine(self) -> int:
        """Number of distinct suffixes, ``|u| + |v|``."""
        return len(self.prefix) + len(self.cycle)

    def successor(self, i: int) -> int:
        """Position following ``i`` on the spine, wrapping into the cycle."""
        return i + 1 if i + 1 < self.spine else len(self.prefix)

    def letters(self, n: int) -> list:
        return [self[i] for i in range(n)]

    def positions(self) -> range:
        return range(self.spine)

    def steps(self):
        """Every distinct step ``(x_i, x_{i+1})`` of the word, wrap included."""
        for i in range(self.spine):
            yield self[i], self[i + 1]

    def alphabet(self) -> set:
        return set(self.prefix) | set(self.cycle)

    def map(self, f: Callable[[Any], Any]) -> "Lasso":
        return Lasso(map(f, self.prefix), map(f, self.cycle))

    def is_constant(self) -> bool:
        """Whether the word is eventually constant."""
        return len(self.cycle) == 1

    def final(self) -> Any:
        """The repeated state of an eventually constant word."""
        if not self.is_constant():
            raise ValueError(f"{self} is not eventually constant")
        return self.cycle[0]

    def aligned_length(self, other: "Lasso") -> int:
        """Index count after which both words repeat in lockstep."""
        return max(len(self.prefix), len(other.prefix)) + lcm(
            len(self.cycle), len(other.cycle)
        )

    def sort_key(self) -> tuple:
        return (
            self.spine,
            len(self.prefix),
            tuple(state_key(x) for x in self.prefix + self.cycle),
        )

    def to_json(self) -> dict:
        from .order import jsonable

        return {
            "prefix": [jsonable(x) for x in self.prefix],
            "cycle": [jsonable(x) for x in self.cycle],
        }

    def __str__(self) -> str:
        head = [_show(x) for x in self.prefix]
        if len(self.cycle) == 1:
            tail = f"{_show(self.cycle[0])}^ω"
        else:
            tail = "(" + ", ".join(_show(x) for x in self.cycle) + ")^ω"
        return "(" + ", ".join(head + [tail]) + ")"

    __repr__ = __str__


def _show(x: Any) -> str:
    if isinstance(x, bool):
        return "T" if x else "F"
    if isinstance(x, tuple):
        return "(" + ",".join(_show(e) for e in x) + ")"
    return str(x)


def same_word(xs: Lasso, ys: Lasso) -> bool:
    """Index-function comparison, independent of canonical form."""
    n = len(xs.prefix) + len(ys.prefix) + 2 * lcm(len(xs.cycle), len(ys.cycle))
    return all(xs[i] == ys[i] for i in range(n))


def lasso_from_orbit(start: Any, step: Callable[[Any], Any],
                     project: Callable[[Any], Any], limit: int = 100_000) -> Lasso:
    """Lasso of ``project`` along the orbit of a deterministic ``step``.

    The orbit of ``start`` must eventually revisit a node; the projected
    word is then ultimately periodic with the orbit's period.
    """
    seen: dict = {}
    nodes: list = []
    node = start
    while node not in seen:
        if len(nodes) >= limit:
            raise ValueError("orbit did not close within the limit")
        seen[node] = len(nodes)
        nodes.append(node)
        node = step(node)
    first = seen[node]
    word = [project(n) for n in nodes]
    return Lasso(word[:first], word[first:])


def from_sequence(seq: Sequence[Any], loop_at: int) -> Lasso:
    """Lasso whose spine is ``seq`` with the wrap returning to ``loop_at``."""
    return Lasso(seq[:loop_at], seq[loop_at:])
