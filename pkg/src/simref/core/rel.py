"""Finite binary relations between state spaces."""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from functools import cached_property
from typing import Any, Callable, Iterable

from .errors import PartialFunction, SpaceMismatch, SpecError
from .order import sorted_states


@dataclass(frozen=True, eq=False)
class Rel:
    """A set of pairs ``(x, y)`` with optional source and target spaces."""

    pairs: frozenset
    source: frozenset | None = None
    target: frozenset | None = None
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "pairs", frozenset(tuple(p) for p in self.pairs))
        if self.source is not None:
            object.__setattr__(self, "source", frozenset(self.source))
            bad = [x for x, _ in self.pairs if x not in self.source]
            if bad:
                raise SpecError(f"relation {self.name!r}: {bad[0]!r} outside its source")
        if self.target is not None:
            object.__setattr__(self, "target", frozenset(self.target))
            bad = [y for _, y in self.pairs if y not in self.target]
            if bad:
                raise SpecError(f"relation {self.name!r}: {bad[0]!r} outside its target")

    @cached_property
    def _forward(self) -> dict:
        out = defaultdict(set)
        for x, y in self.pairs:
            out[x].add(y)
        return {x: frozenset(ys) for x, ys in out.items()}

    @cached_property
    def _backward(self) -> dict:
        out = defaultdict(set)
        for x, y in self.pairs:
            out[y].add(x)
        return {y: frozenset(xs) for y, xs in out.items()}

    def image(self, x: Any) -> frozenset:
        return self._forward.get(x, frozenset())

    def preimage(self, y: Any) -> frozenset:
        return self._backward.get(y, frozenset())

    def domain(self) -> frozenset:
        return frozenset(self._forward)

    def __contains__(self, pair) -> bool:
        return tuple(pair) in self.pairs

    def __iter__(self):
        return iter(sorted_states(self.pairs))

    def __len__(self) -> int:
        return len(self.pairs)

    def __eq__(self, other) -> bool:
        return isinstance(other, Rel) and self.pairs == other.pairs

    def __hash__(self) -> int:
        return hash(self.pairs)

    def __le__(self, other: "Rel") -> bool:
        return self.pairs <= other.pairs

    def __or__(self, other: "Rel") -> "Rel":
        return Rel(self.pairs | other.pairs,
                   _join(self.source, other.source), _join(self.target, other.target))

    def __repr__(self) -> str:
        label = f" {self.name}" if self.name else ""
        return f"<Rel{label}: {len(self.pairs)} pairs>"

    def with_name(self, name: str) -> "Rel":
        return Rel(self.pairs, self.source, self.target, name)

    def is_function(self) -> bool:
        return all(len(ys) == 1 for ys in self._forward.values())

    def apply(self, x: Any) -> Any:
        ys = self.image(x)
        if len(ys) != 1:
            raise PartialFunction(f"relation {self.name!r} is not a function at {x!r}")
        return next(iter(ys))


def _join(a, b):
    if a is None or b is None:
        return None
    return a | b


def rel_compose(a: Rel, b: Rel) -> Rel:
    """``(A;B)``: pairs ``(x, z)`` with some ``y`` such that ``xAy`` and ``yBz``."""
    if a.target is not None and b.source is not None and a.target != b.source:
        raise SpaceMismatch(f"cannot compose {a.name or 'A'} with {b.name or 'B'}: "
                            "target and source spaces differ")
    out = set()
    for x, y in a.pairs:
        for z in b.image(y):
            out.add((x, z))
    return Rel(frozenset(out), a.source, b.target)


def rel_converse(a: Rel) -> Rel:
    return Rel(frozenset((y, x) for x, y in a.pairs), a.target, a.source,
               f"cv({a.name})" if a.name else "")


def identity(space: Iterable[Any], name: str = "") -> Rel:
    space = frozenset(space)
    return Rel(frozenset((x, x) for x in space), space, space, name or "1")


def graph(f: Callable[[Any], Any], domain: Iterable[Any],
          codomain: Iterable[Any] | None = None, name: str = "") -> Rel:
    """The graph ``{(x, f(x))}`` of a total function on ``domain``."""
    domain = frozenset(domain)
    pairs = set()
    for x in domain:
        try:
            pairs.add((x, f(x)))
        except (KeyError, IndexError) as exc:
            raise PartialFunction(f"{name or 'f'} undefined at {x!r}") from exc
    target = frozenset(codomain) if codomain is not None else None
    if target is not None:
        bad = sorted_states(y for _, y in pairs if y not in target)
        if bad:
            raise PartialFunction(f"{name or 'f'} leaves its codomain: {bad[0]!r}")
    return Rel(frozenset(pairs), domain, target, name)


def fst(pair):
    return pair[0]


def snd(pair):
    return pair[1]


def relation_from(pred: Callable[[Any, Any], bool], source: Iterable[Any],
                  target: Iterable[Any], name: str = "") -> Rel:
    source = frozenset(source)
    target = frozenset(target)
    return Rel(frozenset((x, y) for x in source for y in target if pred(x, y)),
               source, target, name)


def omega_related(f: Rel, xs, ys) -> bool:
    """``(xs, ys)`` in ``F^omega``: pointwise related at every index."""
    return all((xs[i], ys[i]) in f.pairs for i in range(xs.aligned_length(ys)))
