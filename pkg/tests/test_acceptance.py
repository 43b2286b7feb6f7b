"""Acceptance criteria 1-10, each at its stated tolerance and time limit.

Every criterion prints one PASS/FAIL line (also listed in the terminal
summary).  Run standalone with ``python3 tests/test_acceptance.py``.
"""

from __future__ import annotations

import time

import pytest

from simref.behaviour import enumerate_behaviours, eval_property, is_unstuttering, unstutter
from simref.constructions import (
    check_behaviour_restriction,
    check_restriction_lemma,
    classify_invariant,
    eternity_extend,
)
from simref.core.lasso import Lasso
from simref.core.rel import graph, rel_compose
from simref.corpus import build_example
from simref.simulation import (
    all_matches,
    check_backward,
    check_flat,
    check_forward,
    check_preserves_quiescence,
    check_refinement_mapping,
    check_simulation,
    match_behaviour,
    refinement_mapping_exists,
)

from helpers import (
    oracle_holds,
    oracle_is_unstuttering,
    oracle_unstutter_prefix,
    random_formula,
    random_lasso,
    random_stuttering,
    rng_for,
)

RESULTS: list[str] = []


class Checks:
    """Named sub-checks of one criterion."""

    def __init__(self):
        self.items: list[tuple[str, bool]] = []

    def __call__(self, label: str, ok) -> None:
        self.items.append((label, bool(ok)))

    @property
    def failed(self) -> list[str]:
        return [label for label, ok in self.items if not ok]


def criterion(number: int, title: str, limit: float | None):
    """Register a criterion body; the test fails on any sub-check or on overtime."""
    def wrap(body):
        def test():
            checks = Checks()
            start = time.perf_counter()
            body(checks)
            elapsed = time.perf_counter() - start
            over = limit is not None and elapsed > limit
            ok = not checks.failed and not over
            extra = []
            if checks.failed:
                extra.append("failed: " + ", ".join(checks.failed))
            if over:
                extra.append(f"over the {limit:g} s limit")
            line = (f"criterion {number:2d} {'PASS' if ok else 'FAIL'}  {title}"
                    f"  [{len(checks.items)} checks, {elapsed:.2f} s]")
            if extra:
                line += "  (" + "; ".join(extra) + ")"
            RESULTS.append(line)
            print(line)
            assert ok, line

        test.__name__ = f"test_criterion_{number:02d}"
        return test
    return wrap


@criterion(1, "Example D: backward simulation without a refinement mapping", 1.0)
def test_criterion_01(checks):
    d = build_example("D")
    k, l, f, b = d.specs["K"], d.specs["L"], d.relations["F"], d.bounds
    checks("K behaviours", enumerate_behaviours(k, b) == [Lasso([4, 2], [0]), Lasso([4, 2], [1])])
    checks("simulation", check_simulation(f, k, l, b).passed)
    back = check_backward(f, k, l, b)
    checks("backward", back.passed)
    for name in ("B0", "B1", "B2", "B3"):
        checks(name, back.condition(name).passed)
    none = refinement_mapping_exists(k, l, {0: 0, 1: 1}, b)
    checks("no refinement mapping", none.failed)
    checks("125 candidates", none.evidence == (125,))


@criterion(2, "Example C: forward simulation without a refinement mapping", 1.0)
def test_criterion_02(checks):
    c = build_example("C", m=3)
    k, l, f, b = c.specs["K"], c.specs["L"], c.relations["F"], c.bounds
    checks("F is j = k mod 3", f.pairs == {(j, k2) for j in range(3) for k2 in range(6)
                                           if j == k2 % 3})
    checks("forward", check_forward(f, k, l, b).passed)
    none = refinement_mapping_exists(k, l, {}, b, domain=range(3))
    checks("no refinement mapping", none.failed)
    checks("at most 6^3 candidates", none.evidence[0] <= 6 ** 3)


@criterion(3, "Example A: invariant classes and the restriction lemma", 1.0)
def test_criterion_03(checks):
    a = build_example("A", low=-6, high=6)
    k, b, sets = a.specs["K"], a.bounds, a.extras["sets"]
    j0 = classify_invariant(k, sets["J0"], b)
    checks("J0 plain", j0.plain)
    checks("J0 not forward", not j0.forward)
    j1 = classify_invariant(k, sets["J1+{-2}"], b)
    checks("J1+{-2} forward", j1.forward)
    checks("J1+{-2} not strong", not j1.strong)
    for name in ("J0", "J1+{-2}"):
        lemma = check_restriction_lemma(k, sets[name], b)
        checks(f"lemma {name} simulation", lemma.condition("simulation-iff-invariant").passed)
        checks(f"lemma {name} forward", lemma.condition("forward-iff-strong").passed)


@criterion(4, "Example G: flatness lost under composition, quiescence lost", 5.0)
def test_criterion_04(checks):
    g = build_example("G")
    b = g.bounds
    checks("bounds", (b.max_prefix, b.max_cycle) == (4, 2))
    k, kw, l, l2 = g.specs["K"], g.specs["K'"], g.specs["L"], g.specs["L'"]
    f, ident, comp = g.relations["F"], g.relations["id"], g.relations["F;id"]
    flat = check_flat(f, k, l, b)
    checks("F into L not flat", flat.failed)
    checks("witness keeps b false", flat.failed and not any(s[1] for s in flat.evidence[1].alphabet()))
    checks("F into L' forward", check_forward(f, k, l2, b).passed)
    checks("identity L' to L forward", check_forward(ident, l2, l, b).passed)
    checks("composition is F;id", comp == rel_compose(f, ident))
    checks("composition not flat", check_flat(comp, k, l, b).failed)
    checks("K' simulated in L'", check_simulation(f, kw, l2, b).passed)
    checks("quiescence not preserved for K'", check_preserves_quiescence(f, kw, l2, b).failed)


@criterion(5, "Example H: a bounded prophecy breaks the backward step", 5.0)
def test_criterion_05(checks):
    h = build_example("H", k_cap=999)
    k, l, f, b = h.specs["K"], h.specs["L"], h.relations["F"], h.bounds
    checks("L has no behaviours", enumerate_behaviours(l, b) == [])
    back = check_backward(f, k, l, b)
    checks("backward fails", back.failed)
    checks("B1 fails", back.condition("B1").failed)
    checks("no simulation", check_simulation(f, k, l, b).failed)


@criterion(6, "Example I: unique matches and lost quiescence", 1.0)
def test_criterion_06(checks):
    i = build_example("I")
    k, l, f, b = i.specs["K"], i.specs["L"], i.relations["F"], i.bounds
    checks("bounds", (b.max_prefix, b.horizon) == (5, 8))
    for xs in enumerate_behaviours(k, b):
        matches = all_matches(f, l, xs, b)
        checks(f"one match for {xs}", len(matches) == 1)
        checks(f"match_behaviour for {xs}", match_behaviour(f, k, l, xs, b).target == matches[0])
    xs = Lasso([1, 0, 0, 1], [0])
    m = match_behaviour(f, k, l, xs, b)
    checks("chosen match", m.target == Lasso([1, 2, 2, 1], [0]))
    checks("chosen match unique", all_matches(f, l, xs, b) == [m.target])
    q = check_preserves_quiescence(f, k, l, b, behaviours=[xs])
    checks("quiescence fails", q.failed)
    checks("witness is xs", q.failed and q.evidence[0] == xs)


@criterion(7, "Example J: eternity extension end to end", 5.0)
def test_criterion_07(checks):
    j = build_example("J")
    k, l, f, b = j.specs["K"], j.specs["L"], j.relations["F"], j.bounds
    checks("bounds", (b.max_prefix, b.max_cycle) == (6, 1))
    br = j.extras["restriction"]
    checks("BR with the final value of j", check_behaviour_restriction(br, b).passed)
    w, cvf = eternity_extend(br, b)
    checks("W built", len(w.states) > 0)
    g = j.mappings["g"]
    checks("g refinement mapping W to L", check_refinement_mapping(g, w, l, b).passed)
    comp = rel_compose(cvf, graph(g, w.states, l.states))
    checks("(cvf;g) within F", comp.pairs <= f.pairs)
    checks("F simulation", check_simulation(f, k, l, b).passed)


PIPELINE_PARTS = {
    "f10-refinement": "f10 refinement mapping",
    "F02-forward": "F02 forward",
    "BR": "K2 to K3 restriction via lift limits",
    "f34-refinement": "f34 refinement mapping",
    "f51-refinement": "f51 refinement mapping",
    "D-plain": "D plain invariant",
    "1D-simulation": "1_D simulation",
    "G-contained": "G within F01 on generated pairs",
    "F01-simulation": "F01 simulation",
}


@criterion(8, "Six-step pipeline from K0 to K1", 30.0)
def test_criterion_08(checks):
    pipe = build_example("K0-K5", j_max=4, z_max=4)
    for name, label in PIPELINE_PARTS.items():
        ok, _ = pipe.expectation(name).run(pipe.bounds)
        checks(label, ok)
    lifts = pipe.extras["lifts"]
    checks("every lift replays", all(lift.replay_agrees() for lift in lifts))


SUITES = ("a-composition", "b-superset", "c-forward", "d-backward", "e-flat-quiescence",
          "f-theorem0", "g-restriction", "h-unfolding", "i-continuity")


@criterion(9, "Randomized theorem suites, zero violations", None)
def test_criterion_09(checks):
    from suites import INSTANCES, run_suite

    for name in SUITES:
        res = run_suite(name)
        checks(f"{name} size", res.instances >= INSTANCES)
        checks(f"{name} violations", not res.violations)
        checks(f"{name} exercised", res.nonvacuous > 0)


@criterion(10, "Evaluator and unstuttering match independent oracles", None)
def test_criterion_10(checks):
    alphabet = (0, 1, 2)
    agree = 0
    for n in range(1200):
        rng = rng_for("oracle", n)
        phi = random_formula(rng, alphabet, rng.randint(0, 4))
        xs = random_lasso(rng, alphabet)
        agree += eval_property(phi, xs) == oracle_holds(phi, xs)
    checks(f"formulas {agree}/1200", agree == 1200)
    words = same = 0
    for n in range(1000):
        rng = rng_for("unstutter", n)
        xs = random_lasso(rng, alphabet[:2])
        ys = random_stuttering(rng, xs)
        zs = random_lasso(rng, alphabet[:2])
        horizon = 3 * (ys.spine + zs.spine) + 4
        words += 1
        same += (unstutter(ys).letters(horizon) == oracle_unstutter_prefix(ys, horizon)
                 and all(is_unstuttering(a, c) == oracle_is_unstuttering(a, c)
                         for a, c in ((xs, ys), (ys, xs), (xs, zs), (unstutter(ys), ys))))
    checks(f"unstuttering {same}/{words}", same == words)


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q", "-s"]))
