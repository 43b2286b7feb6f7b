"""Behaviours of specifications: membership, enumeration, stuttering, quiescence."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Callable, Iterable

from .core.errors import CapExceeded, PartialFunction
from .core.formula import Formula, tabulate
from .core.lasso import Lasso
from .core.rel import Rel
from .core.spec import Spec
from .core.stutter import stutter_counterexample
from .core.verdict import CheckBounds, Status, Verdict, bounded_pass, exact_fail
from .search import related_executions

INFINITE = float("inf")


def eval_property(phi: Formula, xs: Lasso) -> bool:
    return tabulate(phi, xs)[0]


def _runs(seq: Iterable[Any]) -> list[tuple[Any, int]]:
    out: list[list] = []
    for x in seq:
        if out and out[-1][0] == x:
            out[-1][1] += 1
        else:
            out.append([x, 1])
    return [(x, k) for x, k in out]


def run_lengths(xs: Lasso) -> Lasso:
    """The word of maximal runs ``(letter, length)`` of ``xs``.

    A final constant tail is the single run ``(letter, inf)``.
    """
    u, v = list(xs.prefix), list(xs.cycle)
    if len(v) == 1:
        head = _runs(u + v)
        return Lasso(head[:-1], [(v[0], INFINITE)])
    r = next(r for r in range(1, len(v) + 1) if v[r - 1] != v[r % len(v)])
    u = u + v[:r]
    c = v[r:] + v[:r]
    return Lasso(_runs(u + c), _runs(c))


def unstutter(xs: Lasso) -> Lasso:
    """The unique stutterfree word ``xt`` with ``xt`` an unstuttering of ``xs``."""
    return run_lengths(xs).map(lambda run: run[0])


def is_stutterfree(xs: Lasso) -> bool:
    return unstutter(xs) == xs


def is_unstuttering(xs: Lasso, ys: Lasso) -> bool:
    """``xs`` is obtained from ``ys`` by shortening runs of equal letters."""
    rx, ry = run_lengths(xs), run_lengths(ys)
    for i in range(rx.aligned_length(ry)):
        (a, m), (b, n) = rx[i], ry[i]
        if a != b or m > n:
            return False
    return True


def is_execution(spec: Spec, xs: Lasso) -> bool:
    """``xs`` starts initially and takes only ``next`` steps."""
    return xs[0] in spec.init and all(s in spec.next for s in xs.steps())


def is_behaviour(spec: Spec, xs: Lasso) -> bool:
    return is_execution(spec, xs) and eval_property(spec.prop, xs)


def _lasso_paths(spec: Spec, bounds: CheckBounds, stutters: bool):
    """Every lasso shape over initial paths within the bounds."""
    cap = bounds.candidate_cap
    longest = bounds.max_prefix + bounds.max_cycle
    count = 0
    path: list = []

    def closings():
        n = len(path)
        for p in range(max(0, n - bounds.max_cycle), min(n - 1, bounds.max_prefix) + 1):
            if n - p == 1:
                yield Lasso(path[:p], path[p:])
            elif (path[-1], path[p]) in spec.next and (stutters or path[-1] != path[p]):
                yield Lasso(path[:p], path[p:])

    def grow():
        nonlocal count
        count += 1
        if count > cap:
            raise CapExceeded(f"more than {cap} paths of {spec.name or 'spec'} within bounds")
        yield from closings()
        if len(path) < longest:
            options = spec.successors(path[-1]) if stutters else spec.moves(path[-1])
            for y in options:
                path.append(y)
                yield from grow()
                path.pop()

    for x in spec.sorted_init:
        path.append(x)
        yield from grow()
        path.pop()


def enumerate_executions(spec: Spec, bounds: CheckBounds, stutters: bool = False) -> list[Lasso]:
    """Canonical initial-execution lassos within the bounds.

    With ``stutters`` false only stutterfree words are produced.
    """
    found = set(_lasso_paths(spec, bounds, stutters))
    return sorted(found, key=Lasso.sort_key)


def enumerate_behaviours(spec: Spec, bounds: CheckBounds) -> list[Lasso]:
    """Stutterfree behaviours with ``|u| <= max_prefix`` and ``|v| <= max_cycle``."""
    return [xs for xs in enumerate_executions(spec, bounds) if eval_property(spec.prop, xs)]


def truncate_extend(xs: Lasso, n: int) -> Lasso:
    """``E_n(xs)``: ``xs`` up to index ``n``, then ``xs_n`` forever."""
    return Lasso(xs.letters(n), (xs[n],))


@dataclass(frozen=True)
class QuiescenceSet:
    base: Lasso
    horizon: int
    members: frozenset
    periodicity: tuple | None = None

    def __contains__(self, n: int) -> bool:
        return n in self.members

    def __le__(self, other: "QuiescenceSet") -> bool:
        return self.members <= other.members

    def __str__(self) -> str:
        return "Q{" + ", ".join(map(str, sorted(self.members))) + f"}} below {self.horizon}"

    def to_json(self) -> dict:
        return {"lasso": self.base.to_json(), "horizon": self.horizon,
                "members": sorted(self.members)}


def quiescent_indices(spec: Spec, xs: Lasso, bounds: CheckBounds) -> QuiescenceSet:
    """``{n < horizon | E_n(xs) in Beh(spec)}``, decided point by point."""
    members = frozenset(n for n in range(bounds.horizon)
                        if is_behaviour(spec, truncate_extend(xs, n)))
    start, period = len(xs.prefix), len(xs.cycle)
    note = None
    tail = range(start, bounds.horizon)
    if len(tail) > period and all(
        (n in members) == (n + period in members) for n in tail if n + period < bounds.horizon
    ):
        note = (start, period)
    return QuiescenceSet(xs, bounds.horizon, members, note)


def _as_function(f) -> Callable[[Any], Any]:
    if isinstance(f, Rel):
        return f.apply
    return f


def observe(f, xs: Lasso) -> Lasso:
    """``f^omega(xs)`` with stutters kept."""
    fn = _as_function(f)

    def image(x):
        try:
            return fn(x)
        except (KeyError, IndexError) as exc:
            raise PartialFunction(f"observation undefined at {x!r}") from exc

    return xs.map(image)


def observation_relation(f, source: Spec, g, target: Spec) -> Rel:
    """``{(x, y) | f(x) = g(y)}`` over the two state spaces."""
    fn, gn = _as_function(f), _as_function(g)
    images: dict = {}
    for y in target.states:
        images.setdefault(gn(y), []).append(y)
    pairs = frozenset((x, y) for x in source.states for y in images.get(fn(x), ()))
    return Rel(pairs, source.state_set, target.state_set)


def find_observation(f, source: Spec, g, target: Spec, xs: Lasso,
                     bounds: CheckBounds, rel: Rel | None = None) -> Lasso | None:
    """A behaviour of ``target`` whose ``g``-observation equals ``f^omega(xs)``."""
    rel = rel or observation_relation(f, source, g, target)
    for ys in related_executions(rel, target, xs, bounds):
        if eval_property(target.prop, ys):
            return ys
    return None


def check_implements(k: Spec, f, l: Spec, g, bounds: CheckBounds) -> Verdict:
    """``Obs(K, f)`` within ``Obs(L, g)`` on the enumerated behaviours of ``K``.

    Stutterfree behaviours suffice: stuttering a behaviour of ``K`` stutters
    its observation at the same places, and the correspondingly stuttered
    match is again a behaviour of ``L``.
    """
    rel = observation_relation(f, k, g, l)
    pairs = []
    for xs in enumerate_behaviours(k, bounds):
        ys = find_observation(f, k, g, l, xs, bounds, rel)
        if ys is None:
            return exact_fail([observe(f, xs), xs], note="observation not matched within bounds")
        pairs.append((xs, ys))
    return bounded_pass(bounds, pairs)


def check_internally_continuous(k: Spec, f, bounds: CheckBounds) -> Verdict:
    """Search an initial execution outside ``Beh(K)`` whose observation is one of ``K``'s."""
    rel = observation_relation(f, k, f, k)
    for xs in enumerate_executions(k, bounds, stutters=True):
        if eval_property(k.prop, xs):
            continue
        ys = find_observation(f, k, f, k, xs, bounds, rel)
        if ys is not None:
            return exact_fail([xs, ys], note="non-behaviour with the observation of a behaviour")
    return bounded_pass(bounds)


def check_stutter_closed(phi: Formula, samples: Iterable[Lasso]) -> Verdict:
    samples = list(samples)
    bad = stutter_counterexample(phi, samples)
    if bad is not None:
        return exact_fail(list(bad), note="formula separates stutter-equivalent words")
    return Verdict(Status.BOUNDED_PASS, note=f"{len(samples)} samples")


def occurring_states(spec: Spec, bounds: CheckBounds) -> frozenset:
    """States visited by some enumerated behaviour."""
    out: set = set()
    for xs in enumerate_behaviours(spec, bounds):
        out |= xs.alphabet()
    return frozenset(out)


__all__ = [
    "INFINITE",
    "QuiescenceSet",
    "check_implements",
    "check_internally_continuous",
    "check_stutter_closed",
    "enumerate_behaviours",
    "enumerate_executions",
    "eval_property",
    "find_observation",
    "is_behaviour",
    "is_execution",
    "is_stutterfree",
    "is_unstuttering",
    "observation_relation",
    "observe",
    "occurring_states",
    "quiescent_indices",
    "run_lengths",
    "truncate_extend",
    "unstutter",
]
