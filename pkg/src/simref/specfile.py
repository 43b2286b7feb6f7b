"""Declarative spec files: loading, lookup and serialization.

A document has up to five sections, each a mapping from names to entries::

    specs:
      K:
        vars: j                        # binding pattern for expressions
        states: {range: [0, 4]}        # or a list, or {product: [...], where: expr}
        init: [4]                      # or {where: expr}
        next: [[4, 2], [2, 1]]         # or {rule: expr} or {successors: expr, when: expr}
        prop: {eventually: {states: [0, 1]}}
    relations:
      F: {from: K, to: L, bind: [j, k], where: "j = k mod 3"}   # or pairs, identity
    mappings:
      f: {from: K, to: L, expr: "min(j, 12)"}
    sets:
      D: {spec: K, where: "j >= 0"}    # or members
    restrictions:
      R: {spec: K, values: [0, 1], bind: [x, m], where: "x <= m"}

Properties are trees over ``always``, ``eventually``, ``not``, ``and``,
``or``, ``states`` (a list or an expression) and ``step`` (a pair list or
an expression over primed names); ``true`` and ``false`` are constants.
"""

from __future__ import annotations

import weakref
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Any

import yaml

from .core.errors import SimrefError, SpecError
from .core.formula import (
    FALSE,
    TRUE,
    Always,
    And,
    Eventually,
    Formula,
    Not,
    Or,
    StateSet,
    Step,
)
from .core.order import sorted_states
from .core.rel import Rel
from .core.spec import Spec, make_spec
from .expr import PRIME, bind, compile_expr, pattern_names

# expression source of atoms built from expressions, for serialization
_SOURCES: "weakref.WeakKeyDictionary[Formula, str]" = weakref.WeakKeyDictionary()


class SpecFileError(SimrefError, ValueError):
    """A malformed spec document; the message names the offending location."""


@dataclass(frozen=True)
class Mapping:
    name: str
    source: str
    target: str | None
    function: Any
    expr: str
    pattern: Any = "x"


@dataclass(frozen=True)
class Restriction:
    name: str
    spec: str
    values: tuple
    relation: Any
    expr: str
    pattern: Any


@dataclass
class Bundle:
    """The named objects declared by one or more documents."""

    specs: dict = field(default_factory=dict)
    relations: dict = field(default_factory=dict)
    mappings: dict = field(default_factory=dict)
    sets: dict = field(default_factory=dict)
    restrictions: dict = field(default_factory=dict)
    patterns: dict = field(default_factory=dict)
    origins: dict = field(default_factory=dict)

    def merge(self, other: "Bundle") -> "Bundle":
        for part in ("specs", "relations", "mappings", "sets", "restrictions", "patterns",
                     "origins"):
            getattr(self, part).update(getattr(other, part))
        return self

    def _get(self, part: str, name: str):
        table = getattr(self, part)
        if name not in table:
            known = ", ".join(sorted(table)) or "none"
            raise SpecFileError(f"unknown {part[:-1]} {name!r} (known: {known})")
        return table[name]

    def spec(self, name: str) -> Spec:
        return self._get("specs", name)

    def relation(self, name: str) -> Rel:
        return self._get("relations", name)

    def mapping(self, name: str) -> Mapping:
        return self._get("mappings", name)

    def state_set(self, name: str) -> frozenset:
        return self._get("sets", name)

    def restriction(self, name: str) -> Restriction:
        return self._get("restrictions", name)

    def relation_between(self, source: str, target: str) -> Rel:
        """The single declared relation from ``source`` to ``target``."""
        found = [r for r in self.relations.values() if r.source == self.spec(source).state_set
                 and r.target == self.spec(target).state_set
                 and self.origins.get(("relation", r.name)) == (source, target)]
        if len(found) != 1:
            raise SpecFileError(f"{len(found)} relations declared from {source} to {target}; "
                                "name one with --rel")
        return found[0]


def _value(v: Any) -> Any:
    if isinstance(v, list):
        return tuple(_value(x) for x in v)
    return v


def _plain(v: Any) -> Any:
    if isinstance(v, tuple):
        return [_plain(x) for x in v]
    return v


def _space(node: Any, where: str) -> list:
    if isinstance(node, list):
        return [_value(v) for v in node]
    if isinstance(node, dict) and "range" in node:
        lo, hi = node["range"]
        return list(range(int(lo), int(hi) + 1))
    if isinstance(node, dict) and "product" in node:
        import itertools
        parts = [_space(p, f"{where}.product[{i}]") for i, p in enumerate(node["product"])]
        return [tuple(t) for t in itertools.product(*parts)]
    raise SpecFileError(f"{where}: states must be a list, {{range: [lo, hi]}} or {{product: [...]}}")


class _Scope:
    """Compiles expressions against one or two binding patterns."""

    def __init__(self, pattern: Any, where: str):
        self.pattern = pattern
        self.where = where
        try:
            self.names = pattern_names(pattern)
        except SpecError as exc:
            raise SpecFileError(f"{where}.vars: {exc}") from None

    def state(self, src: Any, where: str):
        run = self._compile(src, self.names, where)
        return lambda x: run(bind(self.pattern, x, {}))

    def pair(self, src: Any, where: str):
        run = self._compile(src, self.names | pattern_names(self.pattern, PRIME), where)
        return lambda x, y: run(bind(self.pattern, y, bind(self.pattern, x, {}), PRIME))

    @staticmethod
    def _compile(src, names, where):
        try:
            return compile_expr(src, names, where)
        except SpecError as exc:
            raise SpecFileError(str(exc)) from None


def _guard(fn, where: str):
    def run(*args):
        try:
            return fn(*args)
        except SpecError as exc:
            raise SpecFileError(f"{where}: {exc}") from None
        except (TypeError, ValueError, IndexError, ZeroDivisionError, KeyError) as exc:
            raise SpecFileError(f"{where}: evaluation failed at {args!r}: {exc}") from None
    return run


def _prop(node: Any, scope: _Scope, where: str) -> Formula:
    if node is True or node == "true":
        return TRUE
    if node is False or node == "false":
        return FALSE
    if not isinstance(node, dict) or len(node) != 1:
        raise SpecFileError(f"{where}: a property node has exactly one operator")
    (op, arg), = node.items()
    here = f"{where}.{op}"
    if op in ("always", "eventually", "not"):
        child = _prop(arg, scope, here)
        return {"always": Always, "eventually": Eventually, "not": Not}[op](child)
    if op in ("and", "or"):
        if not isinstance(arg, list):
            raise SpecFileError(f"{here}: expected a list of properties")
        parts = tuple(_prop(a, scope, f"{here}[{i}]") for i, a in enumerate(arg))
        return And(parts) if op == "and" else Or(parts)
    if op == "states":
        if isinstance(arg, list):
            return StateSet(members=frozenset(_value(v) for v in arg))
        atom = StateSet(pred=_guard(scope.state(arg, here), here), label=str(arg))
        _SOURCES[atom] = arg
        return atom
    if op == "step":
        if isinstance(arg, list):
            return Step(pairs=frozenset(tuple(_value(p)) for p in arg))
        atom = Step(pred=_guard(scope.pair(arg, here), here), label=str(arg))
        _SOURCES[atom] = arg
        return atom
    raise SpecFileError(f"{where}: unknown operator {op!r}")


def _check_member(x, space: set, where: str):
    if x not in space:
        raise SpecFileError(f"{where}: {x!r} is not a declared state")
    return x


def _load_spec(name: str, node: dict, where: str) -> tuple[Spec, Any]:
    if not isinstance(node, dict):
        raise SpecFileError(f"{where}: a spec is a mapping")
    for key in ("states", "init"):
        if key not in node:
            raise SpecFileError(f"{where}: missing {key!r}")
    scope = _Scope(node.get("vars", "x"), where)
    space = _space(node["states"], f"{where}.states")
    if isinstance(node["states"], dict) and "where" in node["states"]:
        keep = _guard(scope.state(node["states"]["where"], f"{where}.states.where"), where)
        space = [x for x in space if keep(x)]
    members = set(space)
    init_node = node["init"]
    if isinstance(init_node, dict):
        test = _guard(scope.state(init_node.get("where"), f"{where}.init.where"), where)
        init = [x for x in space if test(x)]
    else:
        init = [_check_member(_value(x), members, f"{where}.init[{i}]")
                for i, x in enumerate(init_node)]
    steps = _load_next(node.get("next", []), scope, space, members, f"{where}.next")
    prop = _prop(node.get("prop", True), scope, f"{where}.prop")
    try:
        spec = make_spec(space, init, steps, prop, name)
    except SpecError as exc:
        raise SpecFileError(f"{where}: {exc}") from None
    return spec, scope.pattern


def _load_next(node, scope: _Scope, space: list, members: set, where: str) -> list:
    if isinstance(node, list):
        out = []
        for i, p in enumerate(node):
            if not isinstance(p, list) or len(p) != 2:
                raise SpecFileError(f"{where}[{i}]: a step is a pair [x, x']")
            pair = (_value(p[0]), _value(p[1]))
            for x in pair:
                _check_member(x, members, f"{where}[{i}]")
            out.append(pair)
        return out
    if isinstance(node, dict) and "rule" in node:
        rule = _guard(scope.pair(node["rule"], f"{where}.rule"), where)
        return [(x, y) for x in space for y in space if rule(x, y)]
    if isinstance(node, dict) and "successors" in node:
        succ = _guard(scope.state(node["successors"], f"{where}.successors"), where)
        when = _guard(scope.state(node.get("when", True), f"{where}.when"), where)
        out = []
        for x in space:
            if not when(x):
                continue
            targets = succ(x)
            if not isinstance(targets, list):
                targets = [targets]
            for y in targets:
                y = _value(y) if isinstance(y, list) else y
                if y in members:
                    out.append((x, y))
        return out
    raise SpecFileError(f"{where}: next must be a pair list, {{rule: ...}} or {{successors: ...}}")


def _endpoints(node: dict, bundle: Bundle, where: str, target: bool = True):
    if not isinstance(node, dict) or "from" not in node or (target and "to" not in node):
        raise SpecFileError(f"{where}: needs 'from'" + (" and 'to'" if target else ""))
    try:
        k = bundle.spec(node["from"])
        l = bundle.spec(node["to"]) if target else (
            bundle.spec(node["to"]) if "to" in node else None)
    except SpecFileError as exc:
        raise SpecFileError(f"{where}: {exc}") from None
    return k, l


def _load_relation(name: str, node: dict, bundle: Bundle, where: str) -> Rel:
    k, l = _endpoints(node, bundle, where)
    pairs = set()
    if node.get("identity"):
        pairs |= {(x, x) for x in k.states if x in l.state_set}
    for i, p in enumerate(node.get("pairs", [])):
        x, y = _value(p[0]), _value(p[1])
        _check_member(x, k.state_set, f"{where}.pairs[{i}]")
        _check_member(y, l.state_set, f"{where}.pairs[{i}]")
        pairs.add((x, y))
    if "where" in node:
        pattern = node.get("bind", ["x", "y"])
        if not isinstance(pattern, list) or len(pattern) != 2:
            raise SpecFileError(f"{where}.bind: expected [source pattern, target pattern]")
        scope = _Scope(pattern, where)
        test = _guard(scope.state(node["where"], f"{where}.where"), where)
        pairs |= {(x, y) for x in k.states for y in l.states if test((x, y))}
    bundle.origins[("relation", name)] = (node["from"], node["to"])
    return Rel(frozenset(pairs), k.state_set, l.state_set, name)


def _load_mapping(name: str, node: dict, bundle: Bundle, where: str) -> Mapping:
    k, l = _endpoints(node, bundle, where, target=False)
    if "expr" not in node:
        raise SpecFileError(f"{where}: missing 'expr'")
    scope = _Scope(node.get("bind", bundle.patterns.get(node["from"], "x")), where)
    raw = _guard(scope.state(node["expr"], f"{where}.expr"), where)

    def fn(x):
        y = raw(x)
        return _value(y) if isinstance(y, list) else y

    return Mapping(name, node["from"], node.get("to"), fn, node["expr"], scope.pattern)


def _load_set(name: str, node: dict, bundle: Bundle, where: str) -> frozenset:
    if not isinstance(node, dict) or "spec" not in node:
        raise SpecFileError(f"{where}: needs 'spec'")
    k = bundle.spec(node["spec"])
    out = set()
    for i, x in enumerate(node.get("members", [])):
        out.add(_check_member(_value(x), k.state_set, f"{where}.members[{i}]"))
    if "where" in node:
        scope = _Scope(node.get("bind", bundle.patterns.get(node["spec"], "x")), where)
        test = _guard(scope.state(node["where"], f"{where}.where"), where)
        out |= {x for x in k.states if test(x)}
    return frozenset(out)


def _load_restriction(name: str, node: dict, bundle: Bundle, where: str) -> Restriction:
    if not isinstance(node, dict) or not {"spec", "values", "where"} <= set(node):
        raise SpecFileError(f"{where}: needs 'spec', 'values' and 'where'")
    bundle.spec(node["spec"])
    values = tuple(_value(v) for v in _space(node["values"], f"{where}.values"))
    pattern = node.get("bind", [bundle.patterns.get(node["spec"], "x"), "m"])
    scope = _Scope(pattern, where)
    test = _guard(scope.state(node["where"], f"{where}.where"), where)
    return Restriction(name, node["spec"], values, lambda x, m: bool(test((x, m))),
                       node["where"], pattern)


_SECTIONS = ("specs", "relations", "mappings", "sets", "restrictions")


def load_document(doc: Any, origin: str = "<document>", into: Bundle | None = None) -> Bundle:
    """Load one parsed document; names may refer to objects already in ``into``."""
    bundle = into if into is not None else Bundle()
    if not isinstance(doc, dict):
        raise SpecFileError(f"{origin}: top level must be a mapping")
    unknown = set(doc) - set(_SECTIONS)
    if unknown:
        raise SpecFileError(f"{origin}: unknown section(s) {', '.join(sorted(unknown))}")
    for section in _SECTIONS:
        if not isinstance(doc.get(section) or {}, dict):
            raise SpecFileError(f"{origin}: {section} must map names to entries")
    loaders = {"relations": (_load_relation, "relations"), "mappings": (_load_mapping, "mappings"),
               "sets": (_load_set, "sets"), "restrictions": (_load_restriction, "restrictions")}
    for name, node in (doc.get("specs") or {}).items():
        spec, pattern = _load_spec(str(name), node, f"{origin}: specs.{name}")
        bundle.specs[str(name)] = spec
        bundle.patterns[str(name)] = pattern
    for section in _SECTIONS[1:]:
        load, part = loaders[section]
        for name, node in (doc.get(section) or {}).items():
            where = f"{origin}: {section}.{name}"
            try:
                getattr(bundle, part)[str(name)] = load(str(name), node, bundle, where)
            except SpecFileError as exc:
                msg = str(exc)
                raise SpecFileError(msg if msg.startswith(origin) else f"{where}: {msg}") from None
    return bundle


def load_text(text: str, origin: str = "<text>", into: Bundle | None = None) -> Bundle:
    try:
        doc = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        place = f"{origin}:{mark.line + 1}:{mark.column + 1}" if mark else origin
        raise SpecFileError(f"{place}: {getattr(exc, 'problem', exc)}") from None
    return load_document(doc or {}, origin, into)


def load_file(path: str | Path, into: Bundle | None = None) -> Bundle:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise SpecFileError(f"{path}: {exc.strerror}") from None
    return load_text(text, str(path), into)


def bundled_files() -> list:
    data = resources.files("simref") / "data"
    return sorted((p for p in data.iterdir() if p.name.endswith(".yaml")), key=lambda p: p.name)


def load_bundled(into: Bundle | None = None) -> Bundle:
    bundle = into if into is not None else Bundle()
    for p in bundled_files():
        load_text(p.read_text(), f"simref/data/{p.name}", bundle)
    return bundle


# -- serialization --------------------------------------------------------------


def prop_tree(phi: Formula, space) -> Any:
    """Document form of a property; predicate atoms without a source are materialized."""
    if isinstance(phi, And) and not phi.parts:
        return True
    if isinstance(phi, Or) and not phi.parts:
        return False
    if isinstance(phi, (StateSet, Step)):
        src = _SOURCES.get(phi)
        key = "states" if isinstance(phi, StateSet) else "step"
        if src is not None:
            return {key: src}
        if isinstance(phi, StateSet):
            members = phi.members if phi.members is not None else [x for x in space if phi.test(x)]
            return {key: [_plain(x) for x in sorted_states(members)]}
        pairs = phi.pairs if phi.pairs is not None else [
            (x, y) for x in space for y in space if phi.test(x, y)]
        return {key: [[_plain(x), _plain(y)] for x, y in sorted_states(pairs)]}
    for cls, key in ((Always, "always"), (Eventually, "eventually"), (Not, "not")):
        if isinstance(phi, cls):
            return {key: prop_tree(phi.child, space)}
    if isinstance(phi, (And, Or)):
        key = "and" if isinstance(phi, And) else "or"
        return {key: [prop_tree(p, space) for p in phi.parts]}
    raise TypeError(f"not a formula: {phi!r}")


def serialize_spec(spec: Spec, pattern: Any = "x") -> dict:
    """Canonical document entry for ``spec``: explicit states, init and non-stutter steps."""
    out: dict = {}
    if pattern != "x":
        out["vars"] = pattern
    out["states"] = [_plain(x) for x in spec.states]
    out["init"] = [_plain(x) for x in spec.sorted_init]
    out["next"] = [[_plain(x), _plain(y)] for x, y in sorted_states(spec.next) if x != y]
    out["prop"] = prop_tree(spec.prop, spec.states)
    return out


def serialize_bundle(bundle: Bundle) -> dict:
    doc: dict = {}
    if bundle.specs:
        doc["specs"] = {n: serialize_spec(s, bundle.patterns.get(n, "x"))
                        for n, s in bundle.specs.items()}
    names = {s.state_set: n for n, s in bundle.specs.items()}
    if bundle.relations:
        doc["relations"] = {}
        for n, r in bundle.relations.items():
            source, target = bundle.origins.get(("relation", n)) or (
                names[r.source], names[r.target])
            doc["relations"][n] = {"from": source, "to": target,
                                   "pairs": [[_plain(x), _plain(y)] for x, y in r]}
    if bundle.mappings:
        doc["mappings"] = {}
        for n, m in bundle.mappings.items():
            entry = {"from": m.source, "bind": m.pattern, "expr": m.expr}
            if m.target is not None:
                entry["to"] = m.target
            doc["mappings"][n] = entry
    if bundle.sets:
        doc["sets"] = {}
        for n, d in bundle.sets.items():
            owner = next(sn for sn, s in bundle.specs.items() if d <= s.state_set)
            doc["sets"][n] = {"spec": owner, "members": [_plain(x) for x in sorted_states(d)]}
    if bundle.restrictions:
        doc["restrictions"] = {
            n: {"spec": r.spec, "values": [_plain(v) for v in r.values],
                "bind": r.pattern, "where": r.expr}
            for n, r in bundle.restrictions.items()}
    return doc


def dump(doc: dict) -> str:
    return yaml.safe_dump(doc, sort_keys=False, default_flow_style=None, width=100)


__all__ = [
    "Bundle",
    "Mapping",
    "Restriction",
    "SpecFileError",
    "bundled_files",
    "dump",
    "load_bundled",
    "load_document",
    "load_file",
    "load_text",
    "prop_tree",
    "serialize_bundle",
    "serialize_spec",
]
