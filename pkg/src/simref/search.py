"""Search for target executions pointwise related to a source lasso.

Given a lasso ``xs = u.v^omega``, a relation ``F`` and a spec ``L``, the
engine enumerates lassos ``ys`` that are initial executions of ``L`` with
``(xs_i, ys_i)`` in ``F`` for every ``i``.  A candidate ``ys`` is described
by a loop point ``a >= |u|`` and a period ``c`` that is a multiple of
``|v|``, so that the pair word ``(xs_i, ys_i)`` repeats with period ``c``
from index ``a`` on.  The unroll factor ``U`` bounds both:
``|u| <= a <= |u| + U|v|`` and ``c = k|v|`` for ``1 <= k <= U``.
"""

from __future__ import annotations

from typing import Iterator

from .core.errors import CapExceeded
from .core.lasso import Lasso
from .core.order import sorted_states
from .core.rel import Rel
from .core.spec import Spec
from .core.verdict import CheckBounds


def shapes(xs: Lasso, unroll: int) -> list[tuple[int, int]]:
    """Admissible ``(a, c)`` pairs, shortest product lasso first."""
    u, v = len(xs.prefix), len(xs.cycle)
    out = [(a, k * v) for a in range(u, u + unroll * v + 1) for k in range(1, unroll + 1)]
    return sorted(out, key=lambda s: (s[0] + s[1], s[0]))


def _solutions(f: Rel, target: Spec, xs: Lasso, a: int, c: int,
               budget: list) -> Iterator[list]:
    n = a + c
    allowed = [f.image(xs[i]) for i in range(n)]
    forward = [frozenset(target.init) & allowed[0]]
    for i in range(1, n):
        step_set = set()
        for y in forward[-1]:
            step_set.update(target.successors(y))
        forward.append(frozenset(step_set) & allowed[i])
        if not forward[-1]:
            return
    for anchor in sorted_states(forward[a]):
        # back[i]: states at position i from which the rest of the loop closes on anchor
        back = [frozenset()] * n
        nxt = frozenset([anchor])
        for i in reversed(range(a, n)):
            here = set()
            for y in nxt:
                here.update(target.predecessors(y))
            back[i] = frozenset(here) & forward[i]
            nxt = back[i]
        if anchor not in back[a]:
            continue
        back[a] = frozenset([anchor])
        nxt = back[a]
        for i in reversed(range(a)):
            here = set()
            for y in nxt:
                here.update(target.predecessors(y))
            back[i] = frozenset(here) & forward[i]
            nxt = back[i]
        if not back[0]:
            continue
        yield from _paths(target, back, anchor, budget)


def _paths(target: Spec, back: list, anchor, budget: list) -> Iterator[list]:
    n = len(back)
    path: list = []

    def extend(i: int):
        budget[0] -= 1
        if budget[0] < 0:
            raise CapExceeded("match search exceeded candidate_cap")
        if i == n:
            if (path[-1], anchor) in target.next:
                yield list(path)
            return
        options = back[i] if i == 0 else [y for y in target.successors(path[-1]) if y in back[i]]
        for y in sorted_states(options):
            path.append(y)
            yield from extend(i + 1)
            path.pop()

    yield from extend(0)


def related_executions(f: Rel, target: Spec, xs: Lasso, bounds: CheckBounds) -> Iterator[Lasso]:
    """Distinct canonical initial executions of ``target`` F-related to ``xs``.

    Yields in the deterministic order of :func:`shapes`, then by state order.
    """
    seen: set = set()
    budget = [bounds.candidate_cap * 10]
    for a, c in shapes(xs, bounds.unroll_factor):
        for word in _solutions(f, target, xs, a, c, budget):
            ys = Lasso(word[:a], word[a:])
            if ys not in seen:
                seen.add(ys)
                yield ys
