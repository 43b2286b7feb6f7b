"""Independent oracles and seeded generators shared by the test modules."""

from __future__ import annotations

import os
import random

from simref.core.formula import (
    TRUE,
    Always,
    And,
    Eventually,
    Not,
    Or,
    StateSet,
    Step,
    always,
    changes,
    conj,
    eventually,
    states,
)
from simref.core.lasso import Lasso
from simref.core.rel import Rel
from simref.core.spec import make_spec

SEED = int(os.environ.get("SIMREF_SEED", "20240601"))


def rng_for(suite: str, i: int) -> random.Random:
    return random.Random(f"{SEED}:{suite}:{i}")


# -- oracles ----------------------------------------------------------------


def oracle_holds(phi, xs: Lasso, i: int = 0, memo=None) -> bool:
    """Truth of ``phi`` on the suffix of ``xs`` at index ``i``, by direct recursion.

    Temporal operators quantify over the window ``i .. i + spine``, which
    meets every distinct suffix from ``i`` on.
    """
    memo = {} if memo is None else memo
    key = (id(phi), i if i < len(xs.prefix) else len(xs.prefix) + (i - len(xs.prefix)) % len(xs.cycle))
    if key in memo:
        return memo[key]
    if isinstance(phi, StateSet):
        out = phi.test(xs[i])
    elif isinstance(phi, Step):
        out = phi.test(xs[i], xs[i + 1])
    elif isinstance(phi, Not):
        out = not oracle_holds(phi.child, xs, i, memo)
    elif isinstance(phi, And):
        out = all(oracle_holds(p, xs, i, memo) for p in phi.parts)
    elif isinstance(phi, Or):
        out = any(oracle_holds(p, xs, i, memo) for p in phi.parts)
    elif isinstance(phi, (Always, Eventually)):
        window = range(i, i + xs.spine + 1)
        values = (oracle_holds(phi.child, xs, j, memo) for j in window)
        out = all(values) if isinstance(phi, Always) else any(values)
    else:
        raise TypeError(phi)
    memo[key] = out
    return out


def _window(xs: Lasso, n: int) -> list:
    return [xs[i] for i in range(n)]


def _kept(word: list) -> list:
    """Letters at indices where the word changes (index 0 included)."""
    return [x for i, x in enumerate(word) if i == 0 or word[i - 1] != x]


def oracle_unstutter_prefix(xs: Lasso, n: int) -> list:
    """First ``n`` letters of the stutter-free form, by scanning indices."""
    long = _window(xs, (n + xs.spine) * (xs.spine + 1) * 2)
    kept = _kept(long)
    if len(xs.cycle) == 1:
        kept = kept + [xs.cycle[0]] * n
    return kept[:n]


def _runs(word: list) -> list:
    out = []
    for x in word:
        if out and out[-1][0] == x:
            out[-1][1] += 1
        else:
            out.append([x, 1])
    return out


def oracle_is_unstuttering(xs: Lasso, ys: Lasso) -> bool:
    """``xs`` arises from ``ys`` by shortening runs, compared run by run on a long window."""
    n = 4 * (xs.spine + 1) * (ys.spine + 1) * max(len(xs.cycle), len(ys.cycle))
    if oracle_unstutter_prefix(xs, n) != oracle_unstutter_prefix(ys, n):
        return False
    rx, ry = _runs(_window(xs, 3 * n)), _runs(_window(ys, 3 * n))
    # the last run of each window may be cut short
    rx, ry = rx[:-1], ry[:-1]
    m = min(len(rx), len(ry))
    return all(a[0] == b[0] and a[1] <= b[1] for a, b in zip(rx[:m], ry[:m]))


# -- generators ---------------------------------------------------------------


def random_lasso(rng: random.Random, alphabet, max_prefix: int = 3, max_cycle: int = 3) -> Lasso:
    alphabet = list(alphabet)
    u = [rng.choice(alphabet) for _ in range(rng.randint(0, max_prefix))]
    v = [rng.choice(alphabet) for _ in range(rng.randint(1, max_cycle))]
    return Lasso(u, v)


def random_stuttering(rng: random.Random, xs: Lasso) -> Lasso:
    """A word stutter-equivalent to ``xs`` with some letters repeated."""
    u = [x for x in xs.prefix for _ in range(rng.randint(1, 3))]
    v = [x for x in xs.cycle for _ in range(rng.randint(1, 3))]
    return Lasso(u, v)


def random_formula(rng: random.Random, alphabet, depth: int):
    alphabet = list(alphabet)
    if depth <= 1 or rng.random() < 0.25:
        if rng.random() < 0.5:
            return StateSet(members=frozenset(x for x in alphabet if rng.random() < 0.5))
        return Step(pairs=frozenset((x, y) for x in alphabet for y in alphabet
                                    if rng.random() < 0.3))
    op = rng.choice(["not", "and", "or", "always", "eventually"])
    if op == "not":
        return Not(random_formula(rng, alphabet, depth - 1))
    if op in ("and", "or"):
        parts = tuple(random_formula(rng, alphabet, depth - 1) for _ in range(rng.randint(0, 3)))
        return And(parts) if op == "and" else Or(parts)
    cls = Always if op == "always" else Eventually
    return cls(random_formula(rng, alphabet, depth - 1))


def random_subset(rng: random.Random, space, p: float = 0.5, nonempty: bool = True) -> frozenset:
    space = list(space)
    out = {x for x in space if rng.random() < p}
    if nonempty and not out:
        out.add(rng.choice(space))
    return frozenset(out)


def stutter_invariant_prop(rng: random.Random, space):
    """A property from a family closed under stuttering."""
    u = random_subset(rng, space)
    choices = [
        lambda: TRUE,
        lambda: always(eventually(changes())),
        lambda: eventually(states(u)),
        lambda: always(eventually(states(u))),
        lambda: eventually(always(states(u))),
        lambda: always(states(u | {x for x in space if rng.random() < 0.7})),
    ]
    first = rng.choice(choices)()
    if rng.random() < 0.3:
        return conj(first, rng.choice(choices)())
    return first


def random_spec(rng: random.Random, n: int | None = None, density: float = 0.4, name: str = ""):
    n = n or rng.randint(3, 5)
    space = list(range(n))
    init = random_subset(rng, space, 0.3)
    steps = [(x, y) for x in space for y in space if x != y and rng.random() < density]
    return make_spec(space, init, steps, stutter_invariant_prop(rng, space), name,
                     check_prop=False)


def random_relation(rng: random.Random, k, l, p: float = 0.4) -> Rel:
    pairs = frozenset((x, y) for x in k.states for y in l.states if rng.random() < p)
    return Rel(pairs, k.state_set, l.state_set, "F")


def random_function(rng: random.Random, k, l) -> dict:
    return {x: rng.choice(l.states) for x in k.states}
