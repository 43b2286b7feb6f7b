"""Derived specifications: restriction, unfolding, eternity extension, history lifts."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Any, Callable, Iterable

from .behaviour import enumerate_behaviours, is_behaviour, occurring_states
from .core.errors import CapExceeded, SpecError
from .core.formula import Always, And, pullback, states
from .core.lasso import Lasso
from .core.order import sorted_states
from .core.rel import Rel
from .core.spec import Spec, make_spec
from .core.verdict import (
    CheckBounds,
    Verdict,
    bounded_pass,
    combine,
    exact_fail,
)
from .simulation import check_forward, check_refinement_mapping, check_simulation


# -- invariants ---------------------------------------------------------------


class InvariantKind(enum.IntEnum):
    NONE = 0
    PLAIN = 1
    FORWARD = 2
    STRONG = 3


@dataclass(frozen=True)
class InvariantClass:
    """Strongest invariant notion ``D`` satisfies, with the evidence against the next one."""

    kind: InvariantKind
    strong: bool
    forward: bool
    plain: bool
    evidence: dict = field(default_factory=dict)

    @property
    def name(self) -> str:
        return self.kind.name.capitalize()


def classify_invariant(k: Spec, d: Iterable[Any], bounds: CheckBounds) -> InvariantClass:
    """Strong and forward are decided exactly; plain uses enumerated behaviours."""
    d = frozenset(d)
    evidence: dict = {}
    missing_init = sorted_states(k.init - d)
    leaving = next((s for s in sorted_states(k.next) if s[0] in d and s[1] not in d), None)
    strong = not missing_init and leaving is None
    if missing_init:
        evidence["strong"] = ("initial state outside", missing_init[0])
    elif leaving is not None:
        evidence["strong"] = ("step leaving", leaving)
    unreachable = sorted_states(k.reachable() - d)
    forward = not unreachable
    if unreachable:
        evidence["forward"] = ("reachable state outside", unreachable[0])
    missing = sorted_states(occurring_states(k, bounds) - d)
    plain = not missing
    if missing:
        evidence["plain"] = ("occurring state outside", missing[0])
    if strong:
        kind = InvariantKind.STRONG
    elif forward:
        kind = InvariantKind.FORWARD
    elif plain:
        kind = InvariantKind.PLAIN
    else:
        kind = InvariantKind.NONE
    return InvariantClass(kind, strong, forward, plain, evidence)


def restrict(k: Spec, d: Iterable[Any], name: str | None = None) -> Spec:
    """``K_D``: states ``D``, with ``always [[D]]`` conjoined to the property."""
    d = frozenset(d)
    if not d:
        raise SpecError("cannot restrict to an empty set")
    stray = sorted_states(d - k.state_set)
    if stray:
        raise SpecError(f"restriction set contains non-state {stray[0]!r}")
    prop = And((k.prop, Always(states(d.__contains__, label="D"))))
    return make_spec(d, k.init & d, (s for s in k.next if s[0] in d and s[1] in d),
                     prop, name or f"{k.name}_D", check_prop=False)


def restriction_identity(k: Spec, d: Iterable[Any]) -> Rel:
    """``1_D`` from the states of ``k`` to ``D``."""
    d = frozenset(d)
    return Rel(frozenset((x, x) for x in d), k.state_set, d, "1_D")


def check_restriction_lemma(k: Spec, d: Iterable[Any], bounds: CheckBounds) -> Verdict:
    """Simulation through ``1_D`` iff invariant; forward simulation iff strong invariant."""
    d = frozenset(d)
    cls = classify_invariant(k, d, bounds)
    kd = restrict(k, d)
    one = restriction_identity(k, d)
    behaviours = enumerate_behaviours(k, bounds)
    sim = check_simulation(one, k, kd, bounds, behaviours)
    fwd = check_forward(one, k, kd, bounds, behaviours=behaviours)
    evidence = (cls.name, sim.status.value, fwd.status.value)

    def agree(flag: bool, verdict: Verdict) -> Verdict:
        if flag != verdict.passed:
            return exact_fail(evidence, note="invariant class and simulation disagree")
        return bounded_pass(bounds, evidence)

    conditions = {
        "simulation-iff-invariant": agree(cls.plain, sim),
        "forward-iff-strong": agree(cls.strong, fwd),
    }
    return combine(conditions, bounds, note=f"D is {cls.name}", evidence=evidence)


# -- unfolding ----------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class UnfoldingSpec:
    spec: Spec
    base: Spec
    depth: int
    cvl: Rel

    @staticmethod
    def last(execution: tuple) -> Any:
        return execution[-1]


def unfold(k: Spec, depth: int, cap: int = 100_000) -> UnfoldingSpec:
    """``K#`` over stutterfree initial executions of length at most ``depth``."""
    if depth < 1:
        raise ValueError("depth must be >= 1")
    layer = [(x,) for x in k.sorted_init]
    found = list(layer)
    steps = []
    for _ in range(depth - 1):
        nxt = []
        for xs in layer:
            for y in k.moves(xs[-1]):
                xt = xs + (y,)
                nxt.append(xt)
                steps.append((xs, xt))
        found.extend(nxt)
        if len(found) > cap:
            raise CapExceeded(f"unfolding has more than {cap} states")
        layer = nxt
    last = UnfoldingSpec.last
    spec = make_spec(found, [xs for xs in found if len(xs) == 1], steps,
                     pullback(k.prop, last), f"{k.name}#", check_prop=False)
    cvl = Rel(frozenset((xs[-1], xs) for xs in found), k.state_set, spec.state_set, "cvl")
    return UnfoldingSpec(spec, k, depth, cvl)


def _is_prefix(short: tuple, word: Lasso) -> bool:
    return all(word[i] == x for i, x in enumerate(short))


def check_unfolding_lemmas(k: Spec, depth: int, bounds: CheckBounds) -> Verdict:
    """``cvl`` is forward (below the depth cap) and ``last`` maps behaviours back.

    The second condition checks, for each stutterfree behaviour ``vss`` of
    the unfolding, that ``last^omega(vss)`` is a behaviour of ``k`` having
    every ``vss_i`` as a prefix.
    """
    unf = unfold(k, depth, bounds.candidate_cap)
    forward = check_forward(unf.cvl, k, unf.spec, bounds,
                            within=lambda pair: len(pair[1]) < depth)
    bad = None
    for vss in enumerate_behaviours(unf.spec, bounds):
        xs = vss.map(UnfoldingSpec.last)
        if not is_behaviour(k, xs) or not all(_is_prefix(vss[i], xs) for i in vss.positions()):
            bad = vss
            break
    blown = exact_fail([bad], note="last-image is not a behaviour with the prefixes") if bad \
        else bounded_pass(bounds)
    return combine({"cvl-forward": forward, "last-behaviours": blown}, bounds,
                   note=f"depth {depth}")


# -- eventually periodic values and history lifts ------------------------------


class EventuallyPeriodicSeq(Lasso):
    """A function ``m: N -> values`` given as ``prefix . cycle^omega``."""

    def __call__(self, i: int) -> Any:
        return self[i]

    def reduce(self, n: int) -> int:
        """Smallest index with the same suffix as index ``n``."""
        u = len(self.prefix)
        if n < u:
            return n
        return u + (n - u) % len(self.cycle)

    def values(self) -> set:
        return self.alphabet()

    def __str__(self) -> str:
        return "m" + super().__str__()

    __repr__ = __str__


@dataclass(frozen=True, eq=False)
class HistoryLift:
    """The unique lift of ``base`` to a spec with a write-once history array.

    ``record(x, x')`` returns the value written by the step, or ``None``
    for steps that write nothing.  The lifted state at index ``i`` is
    ``(x_i, n_i, q_i)`` with ``n_i`` the number of writes so far and
    ``q_i`` the tuple of values written.
    """

    base: Lasso
    record: Callable[[Any, Any], Any]
    unroll: int = 3

    def __post_init__(self):
        for x in self.base.alphabet():
            if self.record(x, x) is not None:
                raise SpecError(f"history rule writes on the stutter step at {x!r}")

    def writes(self, n: int) -> list:
        out = []
        for i in range(n):
            value = self.record(self.base[i], self.base[i + 1])
            if value is not None:
                out.append(value)
        return out

    def __getitem__(self, i: int) -> tuple:
        q = tuple(self.writes(i))
        return (self.base[i], len(q), q)

    def positions(self) -> range:
        return range(len(self.base.prefix) + self.unroll * len(self.base.cycle))

    def steps(self):
        for i in self.positions():
            yield self[i], self[i + 1]

    @property
    def exhaustive(self) -> bool:
        return False

    def limit(self, default: Any = 0) -> EventuallyPeriodicSeq:
        """The array once every write has happened; unwritten cells keep ``default``."""
        u = len(self.base.prefix)
        head = self.writes(u)
        cycle = []
        for i in range(u, u + len(self.base.cycle)):
            value = self.record(self.base[i], self.base[i + 1])
            if value is not None:
                cycle.append(value)
        if not cycle:
            return EventuallyPeriodicSeq(head, (default,))
        return EventuallyPeriodicSeq(head, cycle)

    def replay_agrees(self) -> bool:
        """Applying the update rule step by step reproduces the derived states."""
        x0, n, q = self[0]
        if n != 0 or q != ():
            return False
        for i in self.positions():
            x, n, q = self[i]
            x2, n2, q2 = self[i + 1]
            value = self.record(x, x2)
            expect = (n, q) if value is None else (n + 1, q + (value,))
            if (n2, q2) != expect or x2 != self.base[i + 1]:
                return False
        return True


def lift_history(k: Spec, record: Callable[[Any, Any], Any], xs: Lasso,
                 unroll: int = 3) -> HistoryLift:
    if not is_behaviour(k, xs):
        raise SpecError(f"{xs} is not a behaviour of {k.name or 'the spec'}")
    return HistoryLift(xs, record, unroll)


# -- behaviour restrictions and eternity extensions -----------------------------


@dataclass(frozen=True, eq=False)
class BehaviourRestriction:
    """A relation ``R`` between states and eternity values with a witness generator."""

    source: Spec
    relation: Callable[[Any, Any], bool]
    generator: Callable[[Any], Iterable[Any]]
    domain: frozenset | None = None
    name: str = "R"

    def holds(self, behaviour, m: Any) -> int | None:
        """First position where ``R`` fails for ``m``, or ``None``."""
        for i in behaviour.positions():
            if not self.relation(behaviour[i], m):
                return i
        return None


def check_behaviour_restriction(br: BehaviourRestriction, bounds: CheckBounds,
                                behaviours: Iterable | None = None) -> Verdict:
    """Condition (BR): some generated value satisfies ``R`` along each behaviour."""
    if behaviours is None:
        behaviours = enumerate_behaviours(br.source, bounds)
    witnesses = []
    for xs in behaviours:
        failures = []
        chosen = None
        for m in br.generator(xs):
            first = br.holds(xs, m)
            if first is None:
                chosen = m
                break
            failures.append((m, first))
        if chosen is None:
            return exact_fail([getattr(xs, "base", xs), tuple(failures)],
                              note="no generated value satisfies the restriction")
        witnesses.append((getattr(xs, "base", xs), chosen))
    return bounded_pass(bounds, witnesses)


def eternity_extend(br: BehaviourRestriction, bounds: CheckBounds,
                    candidates: Iterable[Any] | None = None,
                    behaviours: Iterable | None = None,
                    name: str | None = None) -> tuple[Spec, Rel]:
    """The eternity extension ``W`` over generated values and ``cvf = cv(fst)``.

    Values come from ``candidates``, else from the finite ``domain`` of the
    restriction, else from the generator applied to the behaviours.
    """
    k = br.source
    if candidates is None:
        if br.domain is not None:
            candidates = br.domain
        else:
            if behaviours is None:
                behaviours = enumerate_behaviours(k, bounds)
            candidates = {m for xs in behaviours for m in br.generator(xs)}
    values = sorted_states(set(candidates))
    space = [(x, m) for m in values for x in k.states if br.relation(x, m)]
    if len(space) > bounds.candidate_cap:
        raise CapExceeded(f"eternity extension has more than {bounds.candidate_cap} states")
    members = set(space)
    steps = []
    for x, m in space:
        for x2 in k.successors(x):
            if (x2, m) in members:
                steps.append(((x, m), (x2, m)))
    w = make_spec(space, [(x, m) for x, m in space if x in k.init], steps,
                  pullback(k.prop, _first), name or f"{k.name}+eternity", check_prop=False)
    cvf = Rel(frozenset((x, (x, m)) for x, m in space), k.state_set, w.state_set, "cvf")
    return w, cvf


def _first(pair):
    return pair[0]


# -- extensions -----------------------------------------------------------------


def check_extension_kind(k: Spec, l: Spec, bounds: CheckBounds) -> Verdict:
    """Whether ``fst`` is a refinement mapping and whether ``cv(fst)`` is a simulation."""
    if not all(isinstance(y, tuple) and len(y) == 2 for y in l.states):
        raise SpecError(f"{l.name or 'target'} is not over a product state space")
    outside = sorted_states(y for y in l.states if y[0] not in k.state_set)
    if outside:
        raise SpecError(f"first component of {outside[0]!r} is not a state of {k.name}")
    extension = check_refinement_mapping(_first, l, k, bounds)
    cvf = Rel(frozenset((y[0], y) for y in l.states), k.state_set, l.state_set, "cv(fst)")
    refinement = check_simulation(cvf, k, l, bounds)
    return combine({"extension": extension, "refinement-extension": refinement}, bounds)


__all__ = [
    "BehaviourRestriction",
    "EventuallyPeriodicSeq",
    "HistoryLift",
    "InvariantClass",
    "InvariantKind",
    "UnfoldingSpec",
    "check_behaviour_restriction",
    "check_extension_kind",
    "check_restriction_lemma",
    "check_unfolding_lemmas",
    "classify_invariant",
    "eternity_extend",
    "lift_history",
    "restrict",
    "restriction_identity",
    "unfold",
]
