"""Specifications ``(X, Y, N, P)`` and their construction."""

from __future__ import annotations

from collections import defaultdict, deque
from dataclasses import dataclass
from functools import cached_property
from typing import Any, Callable, Iterable

from .errors import CapExceeded, SpecError
from .formula import TRUE, Formula
from .order import sorted_states
from .stutter import sample_lassos, stutter_counterexample


@dataclass(frozen=True, eq=False)
class Spec:
    """A state machine with a supplementary property.

    ``next`` always contains every stutter step ``(x, x)``.
    """

    states: tuple
    init: frozenset
    next: frozenset
    prop: Formula = TRUE
    name: str = ""

    @cached_property
    def state_set(self) -> frozenset:
        return frozenset(self.states)

    @cached_property
    def _succ(self) -> dict:
        out = defaultdict(list)
        for x, y in self.next:
            out[x].append(y)
        return {x: tuple(sorted_states(ys)) for x, ys in out.items()}

    @cached_property
    def _pred(self) -> dict:
        out = defaultdict(list)
        for x, y in self.next:
            out[y].append(x)
        return {y: tuple(sorted_states(xs)) for y, xs in out.items()}

    def successors(self, x: Any) -> tuple:
        return self._succ.get(x, ())

    def predecessors(self, y: Any) -> tuple:
        return self._pred.get(y, ())

    def moves(self, x: Any) -> tuple:
        """Successors other than ``x`` itself."""
        return tuple(y for y in self.successors(x) if y != x)

    @cached_property
    def sorted_init(self) -> tuple:
        return tuple(sorted_states(self.init))

    def reachable(self) -> frozenset:
        seen = set(self.init)
        todo = deque(self.sorted_init)
        while todo:
            x = todo.popleft()
            for y in self.successors(x):
                if y not in seen:
                    seen.add(y)
                    todo.append(y)
        return frozenset(seen)

    def renamed(self, name: str) -> "Spec":
        return Spec(self.states, self.init, self.next, self.prop, name)

    def __repr__(self) -> str:
        return (f"<Spec {self.name or '?'}: {len(self.states)} states, "
                f"{len(self.init)} initial, {len(self.next)} steps>")


def make_spec(states: Iterable[Any], init: Iterable[Any], next: Iterable[tuple],
              prop: Formula = TRUE, name: str = "", check_prop: bool = True) -> Spec:
    """Build a :class:`Spec`, closing ``next`` reflexively.

    Raises :class:`SpecError` for an empty state space, initial states or
    steps outside the space, and (when ``check_prop``) a property that is
    not closed under stuttering on a sample of words.
    """
    states = tuple(sorted_states(set(states)))
    if not states:
        raise SpecError(f"spec {name!r} has no states")
    space = frozenset(states)
    init = frozenset(init)
    stray = sorted_states(init - space)
    if stray:
        raise SpecError(f"spec {name!r}: initial state {stray[0]!r} is not a state")
    pairs = set()
    for pair in next:
        x, y = pair
        if x not in space or y not in space:
            raise SpecError(f"spec {name!r}: step {(x, y)!r} leaves the state space")
        pairs.add((x, y))
    pairs.update((x, x) for x in states)
    if check_prop and prop is not TRUE:
        bad = stutter_counterexample(prop, sample_lassos(states))
        if bad is not None:
            raise SpecError(f"spec {name!r}: property distinguishes {bad[0]} "
                            f"from its stuttering {bad[1]}")
    return Spec(states, init, frozenset(pairs), prop, name)


def explore(init: Iterable[Any], successors: Callable[[Any], Iterable[Any]],
            cap: int, prop: Formula = TRUE, name: str = "",
            check_prop: bool = True) -> Spec:
    """Spec of the states reachable from ``init`` under ``successors``.

    Raises :class:`CapExceeded` once more than ``cap`` states are found.
    """
    init = list(init)
    seen = set(init)
    todo = deque(sorted_states(init))
    pairs = set()
    while todo:
        x = todo.popleft()
        for y in successors(x):
            pairs.add((x, y))
            if y not in seen:
                seen.add(y)
                if len(seen) > cap:
                    raise CapExceeded(f"spec {name!r}: more than {cap} reachable states")
                todo.append(y)
    return make_spec(seen, init, pairs, prop, name, check_prop)


def guarded(space: Iterable[Any], rule: Callable[[Any, Any], bool]) -> set:
    """All pairs of ``space`` satisfying the transition predicate ``rule``."""
    space = list(space)
    return {(x, y) for x in space for y in space if rule(x, y)}
