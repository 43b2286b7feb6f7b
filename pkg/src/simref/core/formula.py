"""Stutter-aware temporal formulas over a state space.

Atoms are state sets ``[[U]]`` (the word starts in ``U``) and step
relations ``[[A]]`` (the first step belongs to ``A``).  Either may be given
as an explicit set or as a predicate; predicates keep formulas over large
or generated state spaces cheap.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Callable, Iterable

from .lasso import Lasso
from .order import sorted_states


class Formula:
    """Base class of the formula tree."""

    def children(self) -> tuple:
        return ()

    def depth(self) -> int:
        return 1 + max((c.depth() for c in self.children()), default=0)

    def __and__(self, other: "Formula") -> "Formula":
        return And((self, other))

    def __or__(self, other: "Formula") -> "Formula":
        return Or((self, other))

    def __invert__(self) -> "Formula":
        return Not(self)


@dataclass(frozen=True, eq=False)
class StateSet(Formula):
    members: frozenset | None = None
    pred: Callable[[Any], bool] | None = None
    label: str = ""

    def __post_init__(self):
        if (self.members is None) == (self.pred is None):
            raise ValueError("StateSet takes exactly one of members / pred")

    def test(self, x: Any) -> bool:
        if self.members is not None:
            return x in self.members
        return bool(self.pred(x))

    def __str__(self):
        if self.label:
            return f"⟦{self.label}⟧"
        return "⟦{" + ",".join(map(str, sorted_states(self.members))) + "}⟧"


@dataclass(frozen=True, eq=False)
class Step(Formula):
    pairs: frozenset | None = None
    pred: Callable[[Any, Any], bool] | None = None
    label: str = ""

    def __post_init__(self):
        if (self.pairs is None) == (self.pred is None):
            raise ValueError("Step takes exactly one of pairs / pred")

    def test(self, x: Any, y: Any) -> bool:
        if self.pairs is not None:
            return (x, y) in self.pairs
        return bool(self.pred(x, y))

    def __str__(self):
        if self.label:
            return f"⟦{self.label}⟧"
        return "⟦" + str(sorted_states(self.pairs)) + "⟧"


@dataclass(frozen=True, eq=False)
class Not(Formula):
    child: Formula

    def children(self):
        return (self.child,)

    def __str__(self):
        return f"¬{self.child}"


@dataclass(frozen=True, eq=False)
class And(Formula):
    parts: tuple = ()

    def children(self):
        return self.parts

    def __str__(self):
        if not self.parts:
            return "true"
        return "(" + " ∧ ".join(map(str, self.parts)) + ")"


@dataclass(frozen=True, eq=False)
class Or(Formula):
    parts: tuple = ()

    def children(self):
        return self.parts

    def __str__(self):
        if not self.parts:
            return "false"
        return "(" + " ∨ ".join(map(str, self.parts)) + ")"


@dataclass(frozen=True, eq=False)
class Always(Formula):
    child: Formula

    def children(self):
        return (self.child,)

    def __str__(self):
        return f"□{self.child}"


@dataclass(frozen=True, eq=False)
class Eventually(Formula):
    child: Formula

    def children(self):
        return (self.child,)

    def __str__(self):
        return f"◇{self.child}"


TRUE = And(())
FALSE = Or(())


def states(u: Iterable[Any] | Callable[[Any], bool], label: str = "") -> StateSet:
    if callable(u):
        return StateSet(pred=u, label=label or "U")
    return StateSet(members=frozenset(u), label=label)


def step(a: Iterable[tuple] | Callable[[Any, Any], bool], label: str = "") -> Step:
    if callable(a):
        return Step(pred=a, label=label or "A")
    return Step(pairs=frozenset(tuple(p) for p in a), label=label)


def always(phi: Formula) -> Always:
    return Always(phi)


def eventually(phi: Formula) -> Eventually:
    return Eventually(phi)


def conj(*parts: Formula) -> Formula:
    return parts[0] if len(parts) == 1 else And(tuple(parts))


def disj(*parts: Formula) -> Formula:
    return parts[0] if len(parts) == 1 else Or(tuple(parts))


def changes(key: Callable[[Any], Any] | None = None, label: str = "≠") -> Step:
    """``[[x != x']]``, optionally comparing only ``key(x)``."""
    if key is None:
        return Step(pred=lambda x, y: x != y, label=label)
    return Step(pred=lambda x, y: key(x) != key(y), label=label)


def decreases(key: Callable[[Any], Any] | None = None, label: str = ">") -> Step:
    if key is None:
        return Step(pred=lambda x, y: x > y, label=label)
    return Step(pred=lambda x, y: key(x) > key(y), label=label)


def infinitely_often(phi: Formula) -> Formula:
    return Always(Eventually(phi))


def tabulate(phi: Formula, xs: Lasso) -> list[bool]:
    """Truth of ``phi`` at every spine position of ``xs``.

    Position ``i`` stands for the suffix starting at index ``i``; positions
    past the end of the spine repeat those of the cycle, so the spine
    covers every distinct suffix.
    """
    n = xs.spine
    word = [xs[i] for i in range(n)]
    nxt = [xs.successor(i) for i in range(n)]

    def go(f: Formula) -> list[bool]:
        if isinstance(f, StateSet):
            return [f.test(x) for x in word]
        if isinstance(f, Step):
            return [f.test(word[i], word[nxt[i]]) for i in range(n)]
        if isinstance(f, Not):
            return [not v for v in go(f.child)]
        if isinstance(f, And):
            vals = [True] * n
            for part in f.parts:
                vals = [a and b for a, b in zip(vals, go(part))]
            return vals
        if isinstance(f, Or):
            vals = [False] * n
            for part in f.parts:
                vals = [a or b for a, b in zip(vals, go(part))]
            return vals
        if isinstance(f, (Always, Eventually)):
            child = go(f.child)
            every = isinstance(f, Always)
            # greatest / least fixpoint, iterated backwards over the spine
            vals = [every] * n
            changed = True
            while changed:
                changed = False
                for i in reversed(range(n)):
                    v = (child[i] and vals[nxt[i]]) if every else (child[i] or vals[nxt[i]])
                    if v != vals[i]:
                        vals[i] = v
                        changed = True
            return vals
        raise TypeError(f"not a formula: {f!r}")

    return go(phi)


def pullback(phi: Formula, f: Callable[[Any], Any]) -> Formula:
    """The formula ``phi`` read through the state function ``f``.

    ``xs`` satisfies the result iff ``f^omega(xs)`` satisfies ``phi``.
    """
    if isinstance(phi, StateSet):
        return StateSet(pred=lambda x, t=phi.test: t(f(x)), label=phi.label or str(phi)[1:-1])
    if isinstance(phi, Step):
        return Step(pred=lambda x, y, t=phi.test: t(f(x), f(y)), label=phi.label or "A")
    if isinstance(phi, Not):
        return Not(pullback(phi.child, f))
    if isinstance(phi, And):
        return And(tuple(pullback(p, f) for p in phi.parts))
    if isinstance(phi, Or):
        return Or(tuple(pullback(p, f) for p in phi.parts))
    if isinstance(phi, Always):
        return Always(pullback(phi.child, f))
    if isinstance(phi, Eventually):
        return Eventually(pullback(phi.child, f))
    raise TypeError(f"not a formula: {phi!r}")


def materialize(phi: Formula, space: Iterable[Any]) -> Formula:
    """Replace predicate atoms by explicit sets over ``space``."""
    space = list(space)
    if isinstance(phi, StateSet):
        return StateSet(members=frozenset(x for x in space if phi.test(x)))
    if isinstance(phi, Step):
        return Step(pairs=frozenset((x, y) for x in space for y in space if phi.test(x, y)))
    if isinstance(phi, Not):
        return Not(materialize(phi.child, space))
    if isinstance(phi, And):
        return And(tuple(materialize(p, space) for p in phi.parts))
    if isinstance(phi, Or):
        return Or(tuple(materialize(p, space) for p in phi.parts))
    if isinstance(phi, Always):
        return Always(materialize(phi.child, space))
    if isinstance(phi, Eventually):
        return Eventually(materialize(phi.child, space))
    raise TypeError(f"not a formula: {phi!r}")


def structurally_equal(a: Formula, b: Formula) -> bool:
    """Equality of explicit (materialized) formula trees."""
    if type(a) is not type(b):
        return False
    if isinstance(a, StateSet):
        return a.members is not None and a.members == b.members
    if isinstance(a, Step):
        return a.pairs is not None and a.pairs == b.pairs
    ca, cb = a.children(), b.children()
    return len(ca) == len(cb) and all(structurally_equal(x, y) for x, y in zip(ca, cb))
