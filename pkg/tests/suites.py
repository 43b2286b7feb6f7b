"""Seeded randomized suites for the theorem-level properties of the checkers.

Each suite draws instances from ``rng_for(suite, i)`` and returns a
``SuiteResult``; a violation is an instance where the hypotheses pass
and the conclusion does not.  The bounds are chosen so that every
implication is also a theorem about the bounded checkers.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field

from simref.behaviour import check_implements, check_internally_continuous, enumerate_behaviours
from simref.constructions import check_restriction_lemma, check_unfolding_lemmas
from simref.core.formula import TRUE
from simref.core.rel import Rel, rel_compose
from simref.core.spec import make_spec
from simref.core.verdict import CheckBounds
from simref.simulation import (
    check_backward,
    check_flat,
    check_forward,
    check_preserves_quiescence,
    check_simulation,
    theorem0_forward,
    theorem0_relation,
)

from helpers import random_function, random_relation, random_spec, random_subset, rng_for, \
    stutter_invariant_prop

INSTANCES = 200


@dataclass
class SuiteResult:
    name: str
    instances: int = 0
    nonvacuous: int = 0
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations and self.instances >= INSTANCES

    def __str__(self) -> str:
        return (f"{self.name}: {self.instances} instances, {self.nonvacuous} non-vacuous, "
                f"{len(self.violations)} violations")


def related_pair(rng, noise: float = 0.5):
    """``K``, ``L`` and ``F`` with ``L`` an image of ``K`` under a random map, plus noise.

    Without noise the graph of the map passes every forward and backward
    step condition; noise adds target steps, drops pairs or adds pairs.
    """
    k = random_spec(rng, name="K")
    m = rng.randint(3, 5)
    h = {x: rng.randrange(m) for x in k.states}
    space = list(range(m))
    init = {h[x] for x in k.init}
    steps = {(h[x], h[y]) for x, y in k.next}
    if rng.random() < noise:
        steps |= {(x, y) for x in space for y in space if rng.random() < 0.15}
    prop = TRUE if rng.random() < 0.4 else stutter_invariant_prop(rng, space)
    l = make_spec(space, init, steps, prop, "L", check_prop=False)
    pairs = {(x, h[x]) for x in k.states}
    if rng.random() < noise:
        pairs = {p for p in pairs if rng.random() < 0.85}
    if rng.random() < noise:
        pairs |= {(x, y) for x in k.states for y in space if rng.random() < 0.1}
    return k, l, Rel(frozenset(pairs), k.state_set, l.state_set, "F"), h


def bounds_for(l, prefix: int = 2, cycle: int = 2, **kw) -> CheckBounds:
    """Unroll by the target size: enough for a related lasso whenever a related execution exists."""
    return CheckBounds(prefix, cycle, unroll_factor=len(l.states), **kw)


def live(k, b: CheckBounds) -> bool:
    """``K`` has enumerated behaviours, so a passing simulation says something."""
    return bool(enumerate_behaviours(k, b))


def _run(name, body, n=INSTANCES) -> SuiteResult:
    res = SuiteResult(name)
    for i in range(n):
        res.instances += 1
        outcome = body(rng_for(name, i))
        if outcome is None:
            continue
        if outcome is True:
            res.nonvacuous += 1
        else:
            res.violations.append((i, outcome))
    return res


def _composition(rng):
    k, l, f, _ = related_pair(rng)
    _, m, g, _ = related_pair(rng)
    # re-target g onto m from the states of l
    g = Rel(frozenset((y, z) for y in l.states for z in m.states
                      if rng.random() < 0.5 or (y % len(m.states)) == z),
            l.state_set, m.state_set, "G")
    b = bounds_for(l)
    first = check_simulation(f, k, l, b)
    if not first.passed or not live(k, b):
        return None
    middle = [ys for _, ys in first.evidence]
    second = check_simulation(g, l, m, bounds_for(m), behaviours=middle)
    if not second.passed:
        return None
    u = b.unroll_factor + b.unroll_factor * len(m.states)
    both = check_simulation(rel_compose(f, g), k, m, CheckBounds(b.max_prefix, b.max_cycle, u))
    return True if both.passed else ("F;G", both.evidence)


def _superset(rng):
    k, l, f, _ = related_pair(rng)
    b = bounds_for(l)
    if not check_simulation(f, k, l, b).passed or not live(k, b):
        return None
    extra = random_relation(rng, k, l, 0.2)
    bigger = f | extra
    return True if check_simulation(bigger, k, l, b).passed else ("superset", bigger)


def _forward(rng):
    k, l, f, _ = related_pair(rng)
    b = bounds_for(l)
    if not check_forward(f, k, l, b).passed or not live(k, b):
        return None
    return True if check_simulation(f, k, l, b).passed else ("forward", f)


def _backward(rng):
    k, l, f, _ = related_pair(rng)
    b = bounds_for(l)
    if not check_backward(f, k, l, b).passed or not live(k, b):
        return None
    return True if check_simulation(f, k, l, b).passed else ("backward", f)


def _quiescence(rng):
    k, l, f, _ = related_pair(rng)
    b = bounds_for(l, horizon=3)
    if not check_simulation(f, k, l, b).passed or not live(k, b):
        return None
    if not check_flat(f, k, l, b).passed:
        return None
    return True if check_preserves_quiescence(f, k, l, b).passed else ("quiescence", f)


def _observations(rng, k, l):
    """Observation maps ``f`` on ``K`` and ``g`` on ``L`` into a small common alphabet."""
    n = rng.randint(2, 3)
    return ({x: rng.randrange(n) for x in k.states}, {y: rng.randrange(n) for y in l.states})


def _theorem0(rng):
    k, l, _, _ = related_pair(rng)
    f, g = _observations(rng, k, l)
    b = bounds_for(l)
    rel = theorem0_relation(f.__getitem__, g.__getitem__, k, l)
    imp = check_implements(k, f.__getitem__, l, g.__getitem__, b).passed
    sim = check_simulation(rel, k, l, b).passed
    if imp != sim or not theorem0_forward(rel, g.__getitem__, f.__getitem__):
        return ("iff", imp, sim)
    # any simulation inside the relation also yields the implementation
    sub = Rel(frozenset(p for p in rel.pairs if rng.random() < 0.8), k.state_set, l.state_set)
    if check_simulation(sub, k, l, b).passed and not imp:
        return ("sub", sub)
    return True if imp and live(k, b) else None


def _restriction(rng):
    k = random_spec(rng)
    d = random_subset(rng, k.states, 0.6)
    v = check_restriction_lemma(k, d, CheckBounds(2, 2, unroll_factor=len(d)))
    return True if v.passed else ("lemma", d, v.evidence)


def _unfolding(rng):
    k = random_spec(rng, density=0.3)
    depth = rng.randint(1, 5)
    b = CheckBounds(2, 2, unroll_factor=2)
    v = check_unfolding_lemmas(k, depth, b)
    if not v.passed:
        return ("unfold", depth, v.evidence)
    return True if live(k, b) else None


def _continuity(rng):
    k, l, _, h = related_pair(rng)
    if rng.random() < 0.5:
        g = {y: y for y in l.states}
    else:
        g = {y: rng.randrange(2) for y in l.states}
    f = {x: g[h[x]] for x in k.states}
    rel = theorem0_relation(f.__getitem__, g.__getitem__, k, l)
    pairs = {p for p in rel.pairs if p[1] == h[p[0]] or rng.random() < 0.3}
    F = Rel(frozenset(pairs), k.state_set, l.state_set, "F")
    b = bounds_for(l, horizon=3)
    if not check_simulation(F, k, l, b).passed or not live(k, b):
        return None
    ic = CheckBounds(b.max_prefix, b.max_cycle, b.unroll_factor + b.max_prefix)
    if not check_internally_continuous(l, g.__getitem__, ic).passed:
        return None
    return True if check_preserves_quiescence(F, k, l, b).passed else ("continuity", F)


BODIES = {
    "a-composition": _composition,
    "b-superset": _superset,
    "c-forward": _forward,
    "d-backward": _backward,
    "e-flat-quiescence": _quiescence,
    "f-theorem0": _theorem0,
    "g-restriction": _restriction,
    "h-unfolding": _unfolding,
    "i-continuity": _continuity,
}


@functools.lru_cache(maxsize=None)
def run_suite(name: str) -> SuiteResult:
    return _run(name, BODIES[name])
