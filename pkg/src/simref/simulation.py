"""Simulation notions: plain, refinement mappings, flat, forward, backward, quiescence."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Any, Callable, Iterable, Mapping

from .behaviour import (
    enumerate_behaviours,
    eval_property,
    observation_relation,
    quiescent_indices,
)
from .core.errors import CapExceeded, PartialFunction
from .core.lasso import Lasso
from .core.order import sorted_states
from .core.rel import Rel, graph
from .core.spec import Spec
from .core.verdict import (
    CheckBounds,
    Status,
    Verdict,
    bounded_pass,
    combine,
    exact_fail,
    exact_pass,
)
from .search import related_executions

NO_MATCH = "no related behaviour of the target within bounds"


@dataclass(frozen=True)
class MatchResult:
    source: Lasso
    target: Lasso | None
    trace: tuple = ()

    @property
    def found(self) -> bool:
        return self.target is not None


def _trace(xs: Lasso, ys: Lasso) -> tuple:
    return tuple((xs[i], ys[i]) for i in range(xs.aligned_length(ys)))


def _behaviours(k: Spec, bounds: CheckBounds, behaviours) -> list[Lasso]:
    return list(behaviours) if behaviours is not None else enumerate_behaviours(k, bounds)


def all_matches(f: Rel, l: Spec, xs: Lasso, bounds: CheckBounds) -> list[Lasso]:
    """Every behaviour of ``l`` within bounds that is pointwise F-related to ``xs``."""
    return [ys for ys in related_executions(f, l, xs, bounds) if eval_property(l.prop, ys)]


def match_behaviour(f: Rel, k: Spec, l: Spec, xs: Lasso, bounds: CheckBounds) -> MatchResult:
    """First behaviour of ``l`` related to ``xs``, shortest product lasso first."""
    for ys in related_executions(f, l, xs, bounds):
        if eval_property(l.prop, ys):
            return MatchResult(xs, ys, _trace(xs, ys))
    return MatchResult(xs, None)


def check_simulation(f: Rel, k: Spec, l: Spec, bounds: CheckBounds,
                     behaviours: Iterable[Lasso] | None = None) -> Verdict:
    """Every enumerated behaviour of ``k`` has an F-related behaviour of ``l``.

    A failure names an enumerated behaviour without a match inside the
    search bounds.
    """
    witnesses = []
    for xs in _behaviours(k, bounds, behaviours):
        m = match_behaviour(f, k, l, xs, bounds)
        if not m.found:
            return Verdict(Status.EXACT_FAIL, (xs,), {}, bounds, NO_MATCH)
        witnesses.append((xs, m.target))
    return bounded_pass(bounds, witnesses)


def _function(f, domain: Iterable[Any]) -> dict:
    if isinstance(f, Mapping):
        return dict(f)
    if isinstance(f, Rel):
        return {x: f.apply(x) for x in domain}
    out = {}
    for x in domain:
        try:
            out[x] = f(x)
        except (KeyError, IndexError) as exc:
            raise PartialFunction(f"mapping undefined at {x!r}") from exc
    return out


def check_refinement_mapping(f, k: Spec, l: Spec, bounds: CheckBounds,
                             behaviours: Iterable[Lasso] | None = None,
                             domain: Iterable[Any] | None = None) -> Verdict:
    """``f`` maps initial states, steps and enumerated behaviours of ``k`` into ``l``.

    With ``domain`` the initial and step conditions are checked only on
    states of ``domain``.
    """
    dom = frozenset(domain) if domain is not None else k.state_set
    fn = _function(f, sorted_states(dom))
    missing = [x for x in sorted_states(dom) if x not in fn]
    if missing:
        raise PartialFunction(f"mapping undefined at {missing[0]!r}")
    return _refinement_conditions(fn, k, l, bounds, _behaviours(k, bounds, behaviours), dom)


def _refinement_conditions(fn: dict, k: Spec, l: Spec, bounds: CheckBounds,
                           behaviours: list, dom: frozenset) -> Verdict:
    conditions = {}
    outside = [x for x in sorted_states(dom) if fn[x] not in l.state_set]
    conditions["codomain"] = (exact_fail([outside[0], fn[outside[0]]]) if outside
                              else exact_pass())
    bad_init = [x for x in sorted_states(k.init & dom) if fn[x] not in l.init]
    conditions["init"] = exact_fail([bad_init[0]]) if bad_init else exact_pass()
    bad_step = next((s for s in sorted_states(k.next)
                     if s[0] in dom and s[1] in dom and (fn[s[0]], fn[s[1]]) not in l.next), None)
    conditions["step"] = exact_fail([bad_step]) if bad_step is not None else exact_pass()
    bad_prop = None
    if not outside:
        for xs in behaviours:
            if not xs.alphabet() <= dom:
                continue
            if not eval_property(l.prop, xs.map(fn.__getitem__)):
                bad_prop = xs
                break
    conditions["prop"] = exact_fail([bad_prop]) if bad_prop is not None else bounded_pass(bounds)
    return combine(conditions, bounds)


def check_flat(f: Rel, k: Spec, l: Spec, bounds: CheckBounds,
               behaviours: Iterable[Lasso] | None = None) -> Verdict:
    """Every related initial execution of ``l`` satisfies the property of ``l``."""
    for xs in _behaviours(k, bounds, behaviours):
        for ys in related_executions(f, l, xs, bounds):
            if not eval_property(l.prop, ys):
                return exact_fail([xs, ys], note="related execution violates the target property")
    return bounded_pass(bounds)


def _forward_init(f: Rel, k: Spec, l: Spec) -> Verdict:
    for x in k.sorted_init:
        if not f.image(x) & l.init:
            return exact_fail([x], note="initial state without initial partner")
    return exact_pass()


def _forward_step(f: Rel, k: Spec, l: Spec, within: Callable | None) -> Verdict:
    for x, y in f:
        if within is not None and not within((x, y)):
            continue
        for x2 in k.successors(x):
            partners = f.image(x2)
            if not any(y2 in partners for y2 in l.successors(y)):
                return exact_fail([(x, y), (x, x2)], note="step of the source not mimicked")
    return exact_pass()


def check_forward(f: Rel, k: Spec, l: Spec, bounds: CheckBounds,
                  within: Callable[[tuple], bool] | None = None,
                  behaviours: Iterable[Lasso] | None = None) -> Verdict:
    """Conditions F0 (initial), F1 (step) and F2 (flat).

    ``within`` limits F1 to the selected pairs of ``f``; the step condition
    is then only a bounded pass.
    """
    behaviours = _behaviours(k, bounds, behaviours)
    f1 = _forward_step(f, k, l, within)
    if within is not None and f1.passed:
        f1 = bounded_pass(bounds, note="step condition checked on a window of pairs")
    conditions = {
        "F0": _forward_init(f, k, l),
        "F1": f1,
        "F2": check_flat(f, k, l, bounds, behaviours),
    }
    return combine(conditions, bounds)


def _backward_init(f: Rel, k: Spec, l: Spec) -> Verdict:
    for x, y in f:
        if x in k.init and y not in l.init:
            return exact_fail([(x, y)], note="initial source state related to non-initial state")
    return exact_pass()


def _backward_step(f: Rel, k: Spec, l: Spec) -> Verdict:
    for x2, y2 in f:
        before = l.predecessors(y2)
        for x in k.predecessors(x2):
            partners = f.image(x)
            if not any(y in partners for y in before):
                return exact_fail([(x2, y2), (x, x2)], note="step of the source not mimicked backwards")
    return exact_pass()


def _backward_preimages(f: Rel, bounds: CheckBounds, behaviours: list) -> Verdict:
    for xs in behaviours:
        cycle = range(len(xs.prefix), xs.spine)
        if not any(0 < len(f.image(xs[n])) <= bounds.candidate_cap for n in cycle):
            return exact_fail([xs], note="no recurring index with a nonempty finite image")
    return bounded_pass(bounds)


def check_backward(f: Rel, k: Spec, l: Spec, bounds: CheckBounds,
                   behaviours: Iterable[Lasso] | None = None) -> Verdict:
    """Conditions B0 (initial), B1 (backward step), B2 (images) and B3 (flat)."""
    behaviours = _behaviours(k, bounds, behaviours)
    conditions = {
        "B0": _backward_init(f, k, l),
        "B1": _backward_step(f, k, l),
        "B2": _backward_preimages(f, bounds, behaviours),
        "B3": check_flat(f, k, l, bounds, behaviours),
    }
    return combine(conditions, bounds)


def check_preserves_quiescence(f: Rel, k: Spec, l: Spec, bounds: CheckBounds,
                               behaviours: Iterable[Lasso] | None = None) -> Verdict:
    """Each behaviour has a related behaviour quiescent wherever it is (within the horizon)."""
    witnesses = []
    for xs in _behaviours(k, bounds, behaviours):
        qk = quiescent_indices(k, xs, bounds)
        found = None
        for ys in related_executions(f, l, xs, bounds):
            if eval_property(l.prop, ys) and qk <= quiescent_indices(l, ys, bounds):
                found = ys
                break
        if found is None:
            return Verdict(Status.EXACT_FAIL, (xs, qk), {}, bounds,
                           "no related behaviour keeps the quiescent indices")
        witnesses.append((xs, found))
    return bounded_pass(bounds, witnesses)


def theorem0_forward(f_rel: Rel, g, f) -> bool:
    """``(F;g)`` is contained in ``f``: related states have equal observations."""
    gn = g.apply if isinstance(g, Rel) else g
    fn = f.apply if isinstance(f, Rel) else f
    return all(gn(y) == fn(x) for x, y in f_rel.pairs)


def theorem0_relation(f, g, source: Spec | Iterable | None = None,
                      target: Spec | Iterable | None = None) -> Rel:
    """``{(x, y) | f(x) = g(y)}``; spaces default to the domains of graph relations."""
    def space(fn, given):
        if isinstance(given, Spec):
            return given
        if given is None:
            given = fn.domain()
        return Spec(tuple(sorted_states(given)), frozenset(), frozenset())

    return observation_relation(f, space(f, source), g, space(g, target))


def refinement_mapping_exists(k: Spec, l: Spec, constraints: Mapping[Any, Any],
                              bounds: CheckBounds, domain: Iterable[Any] | None = None) -> Verdict:
    """Brute force over every function on ``domain`` (default all states) fixing ``constraints``.

    Passes with the first refinement mapping found; fails after exhausting
    all candidates.
    """
    dom = frozenset(domain) if domain is not None else k.state_set
    free = [x for x in sorted_states(dom) if x not in constraints]
    total = len(l.states) ** len(free)
    if total > bounds.candidate_cap:
        raise CapExceeded(f"{total} candidate mappings exceed candidate_cap")
    behaviours = enumerate_behaviours(k, bounds)
    tried = 0
    for values in itertools.product(l.states, repeat=len(free)):
        tried += 1
        fn = dict(constraints)
        fn.update(zip(free, values))
        if _refinement_conditions(fn, k, l, bounds, behaviours, dom).passed:
            return bounded_pass(bounds, [fn], note=f"witness after {tried} candidates")
    return exact_fail([tried], note=f"no refinement mapping among {tried} candidates")


def mapping_relation(f, k: Spec, l: Spec | None = None) -> Rel:
    """The graph of a state function on the states of ``k``."""
    fn = _function(f, k.states)
    return graph(fn.__getitem__, k.states, l.states if l is not None else None)


__all__ = [
    "MatchResult",
    "all_matches",
    "check_backward",
    "check_flat",
    "check_forward",
    "check_preserves_quiescence",
    "check_refinement_mapping",
    "check_simulation",
    "mapping_relation",
    "match_behaviour",
    "refinement_mapping_exists",
    "theorem0_forward",
    "theorem0_relation",
]
