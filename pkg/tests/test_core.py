import pytest

from simref.core.errors import CapExceeded, PartialFunction, SpaceMismatch, SpecError
from simref.core.formula import TRUE, always, eventually, states, step
from simref.core.lasso import Lasso
from simref.core.order import jsonable, sorted_states
from simref.core.rel import (
    Rel,
    graph,
    identity,
    omega_related,
    rel_compose,
    rel_converse,
    relation_from,
)
from simref.core.spec import explore, guarded, make_spec
from simref.core.verdict import (
    CheckBounds,
    Status,
    bounded_pass,
    combine,
    exact_fail,
    exact_pass,
)


class TestRel:
    def test_image_and_preimage(self):
        r = Rel(frozenset({(0, "a"), (0, "b"), (1, "a")}))
        assert r.image(0) == {"a", "b"}
        assert r.preimage("a") == {0, 1}
        assert r.domain() == {0, 1}

    def test_compose(self):
        a = Rel(frozenset({(0, 1), (1, 2)}))
        b = Rel(frozenset({(1, "x"), (2, "y")}))
        assert rel_compose(a, b).pairs == {(0, "x"), (1, "y")}

    def test_compose_space_mismatch(self):
        a = Rel(frozenset({(0, 1)}), {0}, {1})
        b = Rel(frozenset({(2, 3)}), {2}, {3})
        with pytest.raises(SpaceMismatch):
            rel_compose(a, b)

    def test_converse_and_identity(self):
        r = relation_from(lambda x, y: y == x + 1, range(3), range(4))
        assert rel_converse(r).pairs == {(y, x) for x, y in r.pairs}
        assert rel_compose(identity(range(3)), r) == r

    def test_pairs_checked_against_spaces(self):
        with pytest.raises(SpecError):
            Rel(frozenset({(0, 9)}), {0}, {1})

    def test_graph_partial(self):
        with pytest.raises(PartialFunction):
            graph({0: 1}.__getitem__, [0, 1])
        with pytest.raises(PartialFunction):
            graph(lambda x: x + 5, [0], codomain=[0, 1])

    def test_apply_requires_function(self):
        r = Rel(frozenset({(0, 1), (0, 2)}))
        assert not r.is_function()
        with pytest.raises(PartialFunction):
            r.apply(0)

    def test_subset(self):
        small = Rel(frozenset({(0, 1)}))
        assert small <= (small | Rel(frozenset({(1, 1)})))

    def test_omega_related(self):
        f = Rel(frozenset({(0, 0), (0, 2), (1, 1)}))
        assert omega_related(f, Lasso([1, 0, 0, 1], [0]), Lasso([1, 2, 2, 1], [0]))
        assert not omega_related(f, Lasso([1], [0]), Lasso([1], [1]))


class TestSpec:
    def test_reflexive_closure(self):
        k = make_spec(range(3), [0], [(0, 1)])
        assert all((x, x) in k.next for x in k.states)
        assert k.moves(0) == (1,)

    def test_errors(self):
        with pytest.raises(SpecError):
            make_spec([], [], [])
        with pytest.raises(SpecError):
            make_spec([0], [1], [])
        with pytest.raises(SpecError):
            make_spec([0], [0], [(0, 2)])

    def test_stutter_sensitive_prop_rejected(self):
        with pytest.raises(SpecError):
            make_spec(range(2), [0], [(0, 1)], step({(0, 1)}))

    def test_reachable(self):
        k = make_spec(range(4), [0], [(0, 1), (1, 0), (2, 3)])
        assert k.reachable() == {0, 1}

    def test_guarded_and_explore(self):
        pairs = guarded(range(3), lambda x, y: y == x + 1)
        assert pairs == {(0, 1), (1, 2)}
        k = explore([0], lambda x: [x + 1] if x < 4 else [], cap=10)
        assert k.states == (0, 1, 2, 3, 4)
        with pytest.raises(CapExceeded):
            explore([0], lambda x: [x + 1], cap=10)

    def test_mixed_state_order(self):
        assert sorted_states([(1, 2), "a", 3, True]) == [True, 3, "a", (1, 2)]

    def test_jsonable(self):
        assert jsonable(((1, 2), frozenset({3}), Lasso([], [0]))) == [
            [1, 2], [3], {"prefix": [], "cycle": [0]}]

    def test_default_prop(self):
        assert make_spec([0], [0], []).prop is TRUE


class TestVerdict:
    def test_combine(self):
        b = CheckBounds()
        assert combine({"a": exact_pass(), "b": exact_pass()}).status is Status.EXACT_PASS
        assert combine({"a": exact_pass(), "b": bounded_pass(b)}).status is Status.BOUNDED_PASS
        v = combine({"a": bounded_pass(b), "b": exact_fail([1])})
        assert v.failed and v.evidence == (1,)

    def test_bounds(self):
        b = CheckBounds.parse("3,2,2,8,500")
        assert (b.max_prefix, b.max_cycle, b.unroll_factor, b.horizon, b.candidate_cap) == (
            3, 2, 2, 8, 500)
        with pytest.raises(ValueError):
            CheckBounds(max_cycle=0)
        with pytest.raises(ValueError):
            CheckBounds.parse("")

    def test_to_dict_schema(self):
        d = exact_fail([Lasso([1], [0])], note="x", sub=exact_pass()).to_dict()
        assert set(d) >= {"status", "conditions", "witnesses"}
        assert d["witnesses"] == [{"prefix": [1], "cycle": [0]}]


def test_always_eventually_reexported():
    import simref

    assert simref.Lasso is Lasso
    assert always(eventually(states({0})))
