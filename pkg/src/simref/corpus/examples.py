"""Builders for the small worked examples A to J."""

from __future__ import annotations

import itertools

from ..behaviour import (
    check_implements,
    enumerate_behaviours,
    observe,
    run_lengths,
)
from ..constructions import (
    BehaviourRestriction,
    check_behaviour_restriction,
    check_extension_kind,
    check_restriction_lemma,
    classify_invariant,
    eternity_extend,
)
from ..core.formula import always, changes, conj, eventually, states
from ..core.lasso import Lasso
from ..core.rel import Rel, graph, identity, rel_compose, relation_from
from ..core.spec import Spec, guarded, make_spec
from ..core.verdict import CheckBounds
from ..simulation import (
    all_matches,
    check_backward,
    check_flat,
    check_forward,
    check_preserves_quiescence,
    check_refinement_mapping,
    check_simulation,
    match_behaviour,
    refinement_mapping_exists,
    theorem0_forward,
    theorem0_relation,
)
from .instance import ExampleInstance, Expectation, claim


def counter(m: int, name: str | None = None) -> Spec:
    """``K(m)``: ``j`` counts modulo ``m`` and changes infinitely often."""
    if m < 2:
        raise ValueError("K(m) needs m > 1")
    return make_spec(range(m), [0], [(j, (j + 1) % m) for j in range(m)],
                     always(eventually(changes())), name or f"K({m})")


# -- A: invariant taxonomy ----------------------------------------------------------


def example_a(low: int = -6, high: int = 6) -> ExampleInstance:
    window = range(low, high + 1)

    def rule(k, k2):
        return (k == 0 and k2 > 0) or (k != 0 and k2 == k - 2) or k2 == k

    k = make_spec(window, [0], guarded(window, rule),
                  always(eventually(states({0}, "k=0"))), f"A[{low}..{high}]")
    j0 = frozenset(x for x in window if x >= 0 and x % 2 == 0)
    j1 = frozenset(x for x in window if x >= 0 or x % 2 == 1)
    j1m2 = j1 | {-2}
    shrunk = j0 - {0}
    sets = {"J0": j0, "J1": j1, "J1+{-2}": j1m2, "J0-{0}": shrunk, "all": k.state_set}

    def kind_is(d, name):
        return lambda b: claim(classify_invariant(k, d, b).name == name,
                               [classify_invariant(k, d, b).name])

    expectations = (
        Expectation("J0-plain", "even naturals are an invariant but not a forward invariant",
                    kind_is(j0, "Plain")),
        Expectation("J1-strong", "in the window no step leaves the naturals and odd numbers",
                    kind_is(j1, "Strong")),
        Expectation("J1+{-2}-forward", "adding -2 keeps a forward invariant that is not strong",
                    kind_is(j1m2, "Forward")),
        Expectation("all-strong", "the whole space is a strong invariant",
                    kind_is(k.state_set, "Strong")),
        Expectation("lemma-J0", "restriction lemma agrees for J0",
                    lambda b: check_restriction_lemma(k, j0, b)),
        Expectation("lemma-J1+{-2}", "restriction lemma agrees for J1 with -2",
                    lambda b: check_restriction_lemma(k, j1m2, b)),
        Expectation("lemma-all", "restriction lemma agrees for the whole space",
                    lambda b: check_restriction_lemma(k, k.state_set, b)),
        Expectation("lemma-J0-{0}", "restriction lemma agrees when an occurring state is dropped",
                    lambda b: check_restriction_lemma(k, shrunk, b)),
        Expectation("J0-{0}-none", "dropping 0 from J0 leaves no invariant",
                    kind_is(shrunk, "None")),
    )
    return ExampleInstance("A", {"K": k}, extras={"sets": sets}, expectations=expectations,
                           bounds=CheckBounds(3, 4), params={"low": low, "high": high})


# -- B: a refinement mapping between counters -------------------------------------------


def example_b(big: int = 20, small: int = 13) -> ExampleInstance:
    k, l = counter(big), counter(small)
    top = small - 1

    def f(j):
        return min(j, top)

    expectations = (
        Expectation("refinement", "min(j, m-1) maps the larger counter onto the smaller",
                    lambda b: check_refinement_mapping(f, k, l, b)),
        Expectation("identity", "the identity is a refinement mapping of a counter to itself",
                    lambda b: check_refinement_mapping(lambda j: j, l, l, b)),
    )
    return ExampleInstance("B", {"K": k, "L": l}, mappings={"f": f},
                           expectations=expectations, bounds=CheckBounds(0, big),
                           params={"big": big, "small": small})


# -- C and F: counters of period m and 2m -------------------------------------------------


def mod_relation(m: int, k: Spec, l: Spec) -> Rel:
    return relation_from(lambda j, h: j == h % m, k.states, l.states, f"j = k mod {m}")


def example_c(m: int = 3) -> ExampleInstance:
    k, l = counter(m), counter(2 * m)
    f = mod_relation(m, k, l)
    occurring = set(range(m))
    expectations = (
        Expectation("simulation", "the mod relation is a simulation",
                    lambda b: check_simulation(f, k, l, b)),
        Expectation("forward", "the mod relation is a forward simulation",
                    lambda b: check_forward(f, k, l, b)),
        Expectation("no-refinement-mapping", "no refinement mapping exists on the occurring states",
                    lambda b: refinement_mapping_exists(k, l, {}, b, domain=occurring),
                    expect="fail",
                    detail=lambda v: v.evidence == ((2 * m) ** m,)),
    )
    return ExampleInstance("C", {"K": k, "L": l}, {"F": f}, expectations=expectations,
                           bounds=CheckBounds(0, 2 * m, unroll_factor=2), params={"m": m})


def example_f(m: int = 3) -> ExampleInstance:
    k, l = counter(m), counter(2 * m)
    f = graph(lambda j: j, k.states, name="f")
    g = graph(lambda j: j % m, l.states, name="g")
    built = theorem0_relation(f, g)
    expectations = (
        Expectation("relation-is-C", "the constructed relation is the mod relation",
                    lambda b: claim(built == mod_relation(m, k, l))),
        Expectation("contained", "(F;g) is contained in f",
                    lambda b: claim(theorem0_forward(built, g, f))),
        Expectation("implements", "K(m) with f implements K(2m) with g",
                    lambda b: check_implements(k, f, l, g, b)),
        Expectation("simulation", "the constructed relation is a simulation",
                    lambda b: check_simulation(built, k, l, b)),
    )
    return ExampleInstance("F", {"K": k, "L": l}, {"F": built}, {"f": f, "g": g},
                           expectations, CheckBounds(0, 2 * m, unroll_factor=2), {"m": m})


# -- D: late versus early choice ---------------------------------------------------------


def example_d() -> ExampleInstance:
    space = range(5)
    target = eventually(states({0, 1}))
    k = make_spec(space, [4], [(4, 2), (2, 1), (2, 0)], target, "D.K")
    l = make_spec(space, [4], [(4, 3), (4, 2), (3, 1), (2, 0)], target, "D.L")
    f = Rel(identity(space).pairs | {(2, 3)}, k.state_set, l.state_set, "F")

    def visible(x):
        return x if x in (0, 1) else "_"

    xs = Lasso([4, 2], [1])
    expectations = (
        Expectation("K-behaviours", "K has exactly the two stutterfree behaviours",
                    lambda b: claim(enumerate_behaviours(k, b) == [Lasso([4, 2], [0]), xs])),
        Expectation("L-behaviours", "L has exactly the two stutterfree behaviours",
                    lambda b: claim(enumerate_behaviours(l, b)
                                    == [Lasso([4, 2], [0]), Lasso([4, 3], [1])])),
        Expectation("simulation", "1 + (2,3) is a simulation",
                    lambda b: check_simulation(f, k, l, b)),
        Expectation("match", "the late choice of 1 is matched through state 3",
                    lambda b: claim(match_behaviour(f, k, l, xs, b).target == Lasso([4, 3], [1]))),
        Expectation("backward", "1 + (2,3) is a backward simulation",
                    lambda b: check_backward(f, k, l, b)),
        Expectation("not-forward", "the step condition fails at pair (2,2) with step (2,1)",
                    lambda b: check_forward(f, k, l, b), expect="fail",
                    detail=lambda v: v.condition("F1").evidence == ((2, 2), (2, 1))),
        Expectation("no-refinement-mapping", "no refinement mapping fixes 0 and 1",
                    lambda b: refinement_mapping_exists(k, l, {0: 0, 1: 1}, b), expect="fail",
                    detail=lambda v: v.evidence == (125,)),
        Expectation("K-implements-L", "K implements L when only 0 and 1 are visible",
                    lambda b: check_implements(k, visible, l, visible, b)),
        Expectation("L-implements-K", "L implements K when only 0 and 1 are visible",
                    lambda b: check_implements(l, visible, k, visible, b)),
    )
    return ExampleInstance("D", {"K": k, "L": l}, {"F": f}, {"visible": visible},
                           expectations, CheckBounds(3, 1))


# -- E: observing a counter ---------------------------------------------------------------


def example_e(m: int = 3) -> ExampleInstance:
    k = counter(m)

    def f(j):
        return j > 0

    def shape_ok(b):
        for xs in enumerate_behaviours(k, b):
            obs = observe(f, xs)
            runs = run_lengths(obs)
            letters = {r[0] for r in runs.cycle}
            if letters != {True, False}:
                return claim(False, [obs])
            if any(r[0] and r[1] < m - 1 for r in list(runs.prefix) + list(runs.cycle)):
                return claim(False, [obs])
        return claim(True)

    expectations = (
        Expectation("observation", "the basic run is observed as false then m-1 trues",
                    lambda b: claim(observe(f, Lasso([], range(m)))
                                    == Lasso([], [False] + [True] * (m - 1)))),
        Expectation("shape", f"observations alternate and every true lasts at least {m - 1} steps",
                    shape_ok),
    )
    return ExampleInstance("E", {"K": k}, mappings={"f": f}, expectations=expectations,
                           bounds=CheckBounds(0, m), params={"m": m})


# -- G and G': flatness and quiescence ----------------------------------------------------


def example_g(n: int = 2) -> ExampleInstance:
    if n < 2:
        raise ValueError("example G needs N >= 2")
    xs_space = range(n + 1)
    pairs = list(itertools.product(xs_space, (False, True)))
    one = states({1}, "k=1")
    k = make_spec(xs_space, [0], itertools.product(xs_space, repeat=2),
                  conj(always(eventually(changes())), eventually(one)), "G.K")
    k_weak = make_spec(xs_space, [0], k.next, eventually(one), "G.K'")
    prop_l = eventually(states(lambda s: s[1], "b"))

    def step_l(s, t):
        (j, b), (_, b2) = s, t
        return b2 == b or (j == 1 and b2)

    def step_l2(s, t):
        (j, b), (j2, b2) = s, t
        return b2 == (b or j == 1) or (j == j2 and b == b2)

    l = make_spec(pairs, [(0, False)], guarded(pairs, step_l), prop_l, "G.L")
    l2 = make_spec(pairs, [(0, False)], guarded(pairs, step_l2), prop_l, "G.L'")
    f = relation_from(lambda x, y: x == y[0], k.states, l.states, "F")
    ident = identity(l.states, "id")
    composed = rel_compose(f, ident)

    def b_never(v):
        ys = v.evidence[1]
        return not any(s[1] for s in ys.alphabet())

    expectations = (
        Expectation("simulation-K-L", "F is a simulation into L",
                    lambda b: check_simulation(f, k, l, b)),
        Expectation("not-flat-K-L", "F is not flat: a related execution keeps b false",
                    lambda b: check_flat(f, k, l, b), expect="fail", detail=b_never),
        Expectation("forward-K-L'", "F is a forward simulation into L'",
                    lambda b: check_forward(f, k, l2, b)),
        Expectation("refinement-L'-L", "the identity is a refinement mapping from L' to L",
                    lambda b: check_refinement_mapping(lambda s: s, l2, l, b)),
        Expectation("forward-L'-L", "the identity is a forward simulation from L' to L",
                    lambda b: check_forward(ident, l2, l, b)),
        Expectation("composition-not-flat", "the composition of the two forward simulations is not flat",
                    lambda b: check_flat(composed, k, l, b), expect="fail", detail=b_never),
        Expectation("simulation-K'-L'", "F is a simulation from K' into L'",
                    lambda b: check_simulation(f, k_weak, l2, b)),
        Expectation("quiescence-K'-L'", "F from K' to L' does not preserve quiescence",
                    lambda b: check_preserves_quiescence(f, k_weak, l2, b), expect="fail"),
    )
    return ExampleInstance("G", {"K": k, "K'": k_weak, "L": l, "L'": l2},
                           {"F": f, "id": ident, "F;id": composed},
                           expectations=expectations, bounds=CheckBounds(4, 2), params={"N": n})


# -- H: a prophecy that runs out--------------------------------------------------------


def example_h(k_cap: int = 999, m: int = 13) -> ExampleInstance:
    base = counter(m)
    space = list(itertools.product(range(m), range(k_cap + 1)))
    steps = [((j, c), ((j + 1) % m, c - 1)) for j, c in space if c > 0]
    fst_changes = changes(lambda s: s[0], "j changes")
    l = make_spec(space, [(0, c) for c in range(k_cap + 1)], steps,
                  always(eventually(fst_changes)), f"H.L[k<={k_cap}]")
    f = Rel(frozenset((s[0], s) for s in space), base.state_set, l.state_set, "cv(fst)")
    expectations = (
        Expectation("L-empty", "L has no behaviours",
                    lambda b: claim(enumerate_behaviours(l, b) == [])),
        Expectation("K-nonempty", "the counter has behaviours",
                    lambda b: claim(bool(enumerate_behaviours(base, b)))),
        Expectation("no-simulation", "cv(fst) is not a simulation",
                    lambda b: check_simulation(f, base, l, b), expect="fail"),
        Expectation("backward-B1", "with a bounded prophecy the backward step condition fails",
                    lambda b: check_backward(f, base, l, b), expect="fail",
                    detail=lambda v: v.condition("B1").failed and v.condition("B0").passed
                    and v.condition("B3").passed),
        Expectation("extension", "L extends the counter but not as a refinement extension",
                    lambda b: check_extension_kind(base, l, b), expect="fail",
                    detail=lambda v: v.condition("extension").passed
                    and v.condition("refinement-extension").failed),
    )
    return ExampleInstance("H", {"K": base, "L": l}, {"F": f}, expectations=expectations,
                           bounds=CheckBounds(m, m), params={"k_cap": k_cap, "m": m})


# -- I: a simulation that loses quiescence ------------------------------------------------


def example_i() -> ExampleInstance:
    space = range(3)
    prop = eventually(always(states({0})))
    k = make_spec(space, [1], [(1, 0), (0, 1)], prop, "I.K")
    l = make_spec(space, [1], [(1, 0), (1, 2), (2, 1)], prop, "I.L")
    f = Rel(frozenset({(0, 0), (0, 2), (1, 1)}), k.state_set, l.state_set, "F")
    xs = Lasso([1, 0, 0, 1], [0])
    ys = Lasso([1, 2, 2, 1], [0])

    def unique(b):
        counts = {x: len(all_matches(f, l, x, b)) for x in enumerate_behaviours(k, b)}
        return claim(all(c == 1 for c in counts.values()), [counts])

    expectations = (
        Expectation("unique-matches", "every behaviour has exactly one match", unique),
        Expectation("match", "the chosen behaviour is matched by the 2-padded word",
                    lambda b: claim(all_matches(f, l, xs, b) == [ys])),
        Expectation("simulation", "F is a simulation", lambda b: check_simulation(f, k, l, b)),
        Expectation("quiescence", "F does not preserve quiescence at the chosen behaviour",
                    lambda b: check_preserves_quiescence(f, k, l, b, behaviours=[xs]),
                    expect="fail", detail=lambda v: v.evidence[0] == xs),
        Expectation("quiescence-all", "F does not preserve quiescence",
                    lambda b: check_preserves_quiescence(f, k, l, b), expect="fail"),
    )
    return ExampleInstance("I", {"K": k, "L": l}, {"F": f}, expectations=expectations,
                           bounds=CheckBounds(5, 1, horizon=8), extras={"xs": xs, "ys": ys})


# -- J: an eternity variable ---------------------------------------------------------------


def final_value(xs) -> list:
    """The last value of the counter component of an eventually constant behaviour."""
    return [xs.final()[0]]


def example_j(j_max: int = 6) -> ExampleInstance:
    ks = list(itertools.product(range(j_max + 1), (False, True)))

    def step_k(s, t):
        (j, b), (j2, b2) = s, t
        return (not b and j2 == j + 1 and b2 == b) or (j != 0 and j2 == j and b2)

    k = make_spec(ks, [(0, False)], guarded(ks, step_k),
                  eventually(states(lambda s: s[1], "b")), "J.K")
    ls = [(c, n) for n in range(j_max + 1) for c in range(n + 1)]

    def step_l(s, t):
        (c, n), (c2, n2) = s, t
        return (n == 0 and c2 == 1 and n2 >= 1) or (c < n and c2 == c + 1 and n2 == n)

    l = make_spec(ls, [(0, 0)], guarded(ls, step_l),
                  eventually(states(lambda s: s[0] == s[1], "k=n")), "J.L")
    f = relation_from(lambda x, y: x[0] == y[0], k.states, l.states, "F")

    def r(x, m):
        j, b = x
        return j <= m and (not b or j == m)

    br = BehaviourRestriction(k, r, final_value, name="R")
    zero = BehaviourRestriction(k, r, lambda xs: [0], name="R0")

    def g(s):
        (j, _), m = s
        return (j, 0 if j == 0 else m)

    def build(b):
        return eternity_extend(br, b)

    def contained(b):
        w, cvf = build(b)
        gr = graph(g, w.states, l.states, "g")
        comp = rel_compose(cvf, gr)
        return claim(comp.pairs <= f.pairs, [len(comp)])

    def program_shape(b):
        w, _ = build(b)
        for (x, m), (x2, m2) in w.next:
            if (x, m) == (x2, m2):
                continue
            (j, bb), (j2, bb2) = x, x2
            inc = not bb and j < m and j2 == j + 1 and not bb2
            stop = j == m != 0 and j2 == j and not bb and bb2
            if m != m2 or not (inc or stop):
                return claim(False, [((x, m), (x2, m2))])
        return claim(True)

    expectations = (
        Expectation("BR", "the final value of j witnesses the restriction",
                    lambda b: check_behaviour_restriction(br, b)),
        Expectation("BR-zero", "the constant 0 does not witness the restriction",
                    lambda b: check_behaviour_restriction(zero, b), expect="fail"),
        Expectation("W-program", "W steps only by the guarded increment and stop",
                    program_shape),
        Expectation("g-refinement", "g is a refinement mapping from W to L",
                    lambda b: check_refinement_mapping(g, build(b)[0], l, b)),
        Expectation("cvf-flat", "cvf is a flat simulation into W",
                    lambda b: check_flat(build(b)[1], k, build(b)[0], b)),
        Expectation("cvf-simulation", "cvf is a simulation into W",
                    lambda b: check_simulation(build(b)[1], k, build(b)[0], b)),
        Expectation("composition", "(cvf; g) is contained in F", contained),
        Expectation("simulation", "F is a simulation", lambda b: check_simulation(f, k, l, b)),
        Expectation("extension-kind", "W is a refinement extension of K",
                    lambda b: check_extension_kind(k, build(b)[0], b)),
    )
    return ExampleInstance("J", {"K": k, "L": l}, {"F": f}, {"g": g},
                           expectations, CheckBounds(6, 1), {"j_max": j_max},
                           extras={"restriction": br})
