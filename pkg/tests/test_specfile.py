import pytest

from simref.behaviour import enumerate_behaviours, enumerate_executions, eval_property
from simref.core.errors import SpecError
from simref.core.lasso import Lasso
from simref.core.verdict import CheckBounds
from simref.expr import compile_expr
from simref.specfile import (
    SpecFileError,
    bundled_files,
    dump,
    load_bundled,
    load_text,
    serialize_bundle,
    serialize_spec,
)


@pytest.fixture(scope="module")
def bundled():
    return load_bundled()


@pytest.fixture(scope="module")
def reloaded(bundled):
    return load_text(dump(serialize_bundle(bundled)))


def same_spec(a, b, bounds=CheckBounds(2, 2)):
    """Specs compare by identity; check the canonical entry and the property."""
    if serialize_spec(a) != serialize_spec(b):
        return False
    if len(a.states) > 100:
        return True
    words = enumerate_executions(a, bounds)
    return all(eval_property(a.prop, xs) == eval_property(b.prop, xs) for xs in words)


class TestRoundTrip:
    def test_every_bundled_file(self, bundled, reloaded):
        assert len(bundled_files()) == 8
        again = reloaded
        for name, spec in bundled.specs.items():
            assert same_spec(again.spec(name), spec), name
        for name, rel in bundled.relations.items():
            assert again.relation(name) == rel, name
        assert again.sets == bundled.sets

    def test_serialization_is_a_fixpoint(self, bundled, reloaded):
        assert dump(serialize_bundle(reloaded)) == dump(serialize_bundle(bundled))

    def test_mapping_survives(self, bundled, reloaded):
        f, g = bundled.mapping("exB_f"), reloaded.mapping("exB_f")
        assert all(f.function(x) == g.function(x) for x in bundled.spec("exB_K20").states)


class TestFormats:
    def test_d(self, bundled):
        k = bundled.spec("exD_K")
        assert enumerate_behaviours(k, CheckBounds(3, 1)) == [
            Lasso([4, 2], [0]), Lasso([4, 2], [1])]

    def test_equation_sugar(self, bundled):
        f = bundled.relation("exC_F")
        assert (1, 4) in f and (2, 4) not in f

    def test_guarded_rules(self):
        b = load_text("""
specs:
  K:
    vars: [j, b]
    states: {product: [{range: [0, 2]}, [false, true]], where: "not b or j > 0"}
    init: {where: "j = 0"}
    next: {rule: "j' = j + 1 and b' = b or j' = j and not b and b'"}
    prop: {eventually: {states: "b"}}
""")
        k = b.spec("K")
        assert (0, True) not in k.state_set
        assert ((1, False), (1, True)) in k.next
        assert ((0, False), (1, False)) in k.next
        assert ((0, False), (0, True)) not in k.next

    def test_successor_sugar(self):
        b = load_text("""
specs:
  C:
    vars: j
    states: {range: [0, 3]}
    init: [0]
    next: {successors: "[(j + 1) mod 4]"}
""")
        assert (3, 0) in b.spec("C").next

    def test_string_literal_with_prime(self):
        b = load_text("""
specs:
  K:
    states: [a, "b'"]
    init: ["b'"]
    prop: {always: {states: "x = \\"b'\\""}}
""")
        assert b.spec("K").init == {"b'"}

    def test_stutter_sensitive_prop_rejected(self):
        with pytest.raises(SpecFileError):
            load_text("""
specs:
  K:
    states: [0, 1]
    init: [0]
    next: [[0, 1]]
    prop: {step: [[0, 1]]}
""")


class TestErrors:
    @pytest.mark.parametrize("text,where", [
        ("specs:\n  K:\n    states: [0, 1]\n    init: [2]\n", "specs.K.init"),
        ("specs:\n  K:\n    states: [0, 1]\n    init: [0]\n    next: [[0, 5]]\n", "specs.K.next"),
        ("specs:\n  K:\n    states: [0]\n    init: [0]\n    prop: {sometimes: true}\n", "specs.K.prop"),
        ("relations:\n  F: {from: K, to: K, identity: true}\n", "relations.F"),
        ("specs: [1, 2]\n", "specs"),
    ])
    def test_located(self, text, where):
        with pytest.raises(SpecFileError, match=where.replace(".", r"\.")):
            load_text(text)

    def test_yaml_position(self):
        with pytest.raises(SpecFileError, match=r"<text>:\d+:\d+"):
            load_text("specs: {K: [\n")


class TestExpressions:
    def test_sugar(self):
        run = compile_expr("j = k mod 3", {"j", "k"})
        assert run({"j": 1, "k": 4}) and not run({"j": 2, "k": 4})

    def test_comparison_stays(self):
        assert compile_expr("j <= 2 and j != 1 and j >= 0", {"j"})({"j": 2})

    def test_comprehension(self):
        assert compile_expr("sum(i for i in range(j))", {"j"})({"j": 4}) == 6

    @pytest.mark.parametrize("src", [
        "__import__('os')",
        "j.__class__",
        "open('x')",
        "(lambda: 1)()",
        "[c for c in ().__class__.__bases__]",
    ])
    def test_unsafe_rejected(self, src):
        with pytest.raises(SpecError):
            compile_expr(src, {"j"})

    def test_unknown_name(self):
        with pytest.raises(SpecError, match="unknown name 'k'"):
            compile_expr("k + 1", {"j"})

    def test_no_builtins_at_runtime(self):
        run = compile_expr("len(j)", {"j"})
        assert run({"j": (1, 2)}) == 2
