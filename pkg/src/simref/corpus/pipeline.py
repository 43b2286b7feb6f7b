"""The K0 to K5 pipeline: a simulation proved through history, eternity and restriction.

Unbounded components are windowed.  K2 and K3 keep at most ``n_max``
history writes; their infinite behaviours are represented by history
lifts of K0 behaviours.  K4 and K5 store the jump counter reduced modulo
the period of the eternity sequence, which keeps them finite.
"""

from __future__ import annotations

import itertools

from ..behaviour import enumerate_behaviours, eval_property, is_behaviour
from ..constructions import (
    BehaviourRestriction,
    EventuallyPeriodicSeq,
    check_behaviour_restriction,
    classify_invariant,
    eternity_extend,
    lift_history,
    restrict,
    restriction_identity,
)
from ..core.formula import always, changes, decreases, eventually, pullback
from ..core.lasso import Lasso, lasso_from_orbit
from ..core.rel import Rel, graph, omega_related, rel_compose
from ..core.spec import Spec, make_spec
from ..core.verdict import CheckBounds, combine, exact_fail, exact_pass
from ..simulation import check_forward, check_refinement_mapping, check_simulation
from .instance import ExampleInstance, Expectation, claim


def _first(s):
    return s[0]


def jump(x, x2):
    """The value recorded by a back jump of ``j``, else ``None``."""
    return x if x2 < x else None


def sequences(values, max_prefix: int = 1, max_cycle: int = 2) -> set:
    out = set()
    for p in range(max_prefix + 1):
        for c in range(1, max_cycle + 1):
            for word in itertools.product(values, repeat=p + c):
                out.add(EventuallyPeriodicSeq(word[:p], word[p:]))
    return out


def build_k0(j_max: int) -> Spec:
    window = range(j_max + 1)
    steps = [(j, j2) for j in window for j2 in (0, j + 1) if j2 in window]
    return make_spec(window, [0], steps, always(eventually(decreases())), f"K0[j<={j_max}]")


def build_k1(z_max: int) -> Spec:
    space = [(0, 0)] + [(j, z) for z in range(1, z_max + 1) for j in range(1, z + 1)]
    steps = []
    for j, z in space:
        if j == 0:
            steps += [((0, 0), (1, z2)) for z2 in range(1, z_max + 1)]
        elif j < z:
            steps.append(((j, z), (j + 1, z)))
        else:
            steps.append(((j, z), (0, 0)))
    return make_spec(space, [(0, 0)], steps, always(eventually(changes())), f"K1[z<={z_max}]")


def k2_step(s, t) -> bool:
    (j, n, q), (j2, n2, q2) = s, t
    if s == t:
        return True
    if j2 == j + 1 and (n2, q2) == (n, q):
        return True
    return j > 0 and j2 == 0 and n2 == n + 1 and q2 == q + (j,)


def build_k2(k0: Spec, n_max: int) -> Spec:
    jumps = [j for j in k0.states if j > 0]
    space = [(j, n, q) for n in range(n_max + 1)
             for q in itertools.product(jumps, repeat=n) for j in k0.states]
    members = set(space)
    steps = []
    for j, n, q in space:
        for j2 in k0.successors(j):
            t = (j2, n + (j2 < j), q + ((j,) if j2 < j else ()))
            if t in members and k2_step((j, n, q), t):
                steps.append(((j, n, q), t))
    return make_spec(space, [(0, 0, ())], steps, pullback(k0.prop, _first),
                     f"K2[n<={n_max}]", check_prop=False)


def build_k4(k0: Spec, values: set) -> Spec:
    top = max(k0.states)
    space = [(j, n, m) for m in values for n in range(m.spine) for j in k0.states]
    steps = []
    for j, n, m in space:
        if j < top:
            steps.append(((j, n, m), (j + 1, n, m)))
        if j == m(n) > 0:
            steps.append(((j, n, m), (0, m.reduce(n + 1), m)))
    return make_spec(space, [(0, 0, m) for m in values], steps,
                     pullback(k0.prop, _first), "K4", check_prop=False)


def k4_image(xs: Lasso, m: EventuallyPeriodicSeq) -> Lasso:
    """The K4 behaviour reached from K0 behaviour ``xs`` through K2, K3 and ``f34``."""
    def step(node):
        p, n = node
        p2 = xs.successor(p)
        return (p2, m.reduce(n + 1) if jump(xs[p], xs[p2]) is not None else n)

    return lasso_from_orbit((0, 0), step, lambda node: (xs[node[0]], node[1], m))


def in_d(s) -> bool:
    j, n, m = s
    return j <= m(n) and all(v >= 1 for v in m.values())


def f34(s):
    (j, n, _), m = s
    return (j, m.reduce(n), m)


def f51(s):
    j, n, m = s
    return (j, 0 if j == 0 else m(n))


def example_pipeline(j_max: int = 4, z_max: int = 4, n_max: int = 3) -> ExampleInstance:
    if z_max < j_max:
        raise ValueError("z_max must cover every jump value of K0")
    k0, k1 = build_k0(j_max), build_k1(z_max)
    k2 = build_k2(k0, n_max)
    f10 = _first
    f01 = Rel(frozenset((y[0], y) for y in k1.states), k0.state_set, k1.state_set, "F01")
    f02 = Rel(frozenset((y[0], y) for y in k2.states), k0.state_set, k2.state_set, "F02")
    bounds0 = CheckBounds(3, 5)
    bounds4 = CheckBounds(5, 10)
    behaviours0 = enumerate_behaviours(k0, bounds0)
    lifts = [lift_history(k0, jump, xs) for xs in behaviours0]
    limits = {lift.limit() for lift in lifts}

    def r(s, m):
        _, n, q = s
        return all(m(i) == q[i] for i in range(n))

    br = BehaviourRestriction(k2, r, lambda lift: [lift.limit()], name="R")
    k3, f23 = eternity_extend(br, bounds0, candidates=limits, name="K3")
    values = sequences(range(j_max + 1)) | limits
    k4 = build_k4(k0, values)
    d = frozenset(s for s in k4.states if in_d(s))
    k5 = restrict(k4, d, "K5")
    one_d = restriction_identity(k4, d)
    g34 = graph(f34, k3.states, k4.states, "f34")
    g51 = graph(f51, k5.states, k1.states, "f51")
    composed = rel_compose(rel_compose(rel_compose(rel_compose(f02, f23), g34), one_d), g51)
    images = {xs: k4_image(xs, lift.limit()) for xs, lift in zip(behaviours0, lifts)}

    def forward02(b):
        # F1 on the window; F2 from the K0 behaviours, since K2's property
        # reads only j and every related execution has the same j word.
        windowed = check_forward(f02, k0, k2, b, within=lambda p: p[1][1] < n_max,
                                 behaviours=[])
        lifted = next((lift for lift in lifts if not all(
            k2_step(s, t) for s, t in lift.steps()) or not lift.replay_agrees()), None)
        conditions = dict(windowed.conditions)
        conditions["F2"] = (exact_pass() if all(eval_property(k2.prop, lift.base.map(
            lambda x: (x, 0, ()))) for lift in lifts) else exact_fail())
        conditions["lift"] = exact_fail([lifted.base]) if lifted else exact_pass()
        return combine(conditions, b)

    def refinement34(b):
        base = check_refinement_mapping(f34, k3, k4, b, behaviours=[])
        bad = next((xs for xs, ys in images.items() if not is_behaviour(k4, ys)), None)
        conditions = dict(base.conditions)
        conditions["prop"] = exact_fail([bad]) if bad else base.condition("prop")
        return combine(conditions, b)

    def end_to_end(b):
        for xs, ys in images.items():
            zs = ys.map(f51)
            if not (is_behaviour(k5, ys) and is_behaviour(k1, zs)
                    and omega_related(f01, xs, zs)):
                return claim(False, [xs, ys, zs])
        return claim(True, [len(images)])

    expectations = (
        Expectation("f10-refinement", "dropping z is a refinement mapping from K1 to K0",
                    lambda b: check_refinement_mapping(f10, k1, k0, b)),
        Expectation("F02-forward", "the history extension is a forward simulation", forward02),
        Expectation("BR", "the limit of the history array witnesses the restriction",
                    lambda b: check_behaviour_restriction(br, b, behaviours=lifts)),
        Expectation("f34-refinement", "forgetting q is a refinement mapping from K3 to K4",
                    refinement34),
        Expectation("D-plain", "D is an invariant of K4 but not a forward invariant",
                    lambda b: claim(classify_invariant(k4, d, bounds4).name == "Plain")),
        Expectation("1D-simulation", "1_D is a simulation from K4 to K5",
                    lambda b: check_simulation(one_d, k4, k5, bounds4)),
        Expectation("f51-refinement", "f51 is a refinement mapping from K5 to K1",
                    lambda b: check_refinement_mapping(f51, k5, k1, bounds4)),
        Expectation("G-contained", "every pair of the composed relation agrees on j",
                    lambda b: claim(bool(composed) and all(x == y[0] for x, y in composed),
                                    [len(composed)])),
        Expectation("end-to-end", "each K0 behaviour is carried to a related K1 behaviour",
                    end_to_end),
        Expectation("F01-simulation", "F01 is a simulation from K0 to K1",
                    lambda b: check_simulation(f01, k0, k1, b)),
    )
    specs = {"K0": k0, "K1": k1, "K2": k2, "K3": k3, "K4": k4, "K5": k5}
    relations = {"F01": f01, "F02": f02, "F23": f23, "f34": g34, "1_D": one_d,
                 "f51": g51, "G": composed}
    return ExampleInstance("K0-K5", specs, relations, {"f10": f10, "f34": f34, "f51": f51},
                           expectations, bounds0,
                           {"j_max": j_max, "z_max": z_max, "n_max": n_max},
                           extras={"D": d, "lifts": lifts, "images": images,
                                   "restriction": br, "bounds4": bounds4})
