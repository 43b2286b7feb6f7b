"""Command-line front end: ``simref check``, ``simref enumerate``, ``simref export``."""

from __future__ import annotations

import argparse
import json
import sys
from typing import Callable

from . import constructions as cons
from . import simulation as sim
from .behaviour import check_implements, enumerate_behaviours
from .core.errors import CapExceeded, SimrefError
from .core.lasso import Lasso
from .core.verdict import CheckBounds, Status, Verdict, combine, exact_pass
from .corpus import NAMES, build_example, run_expectations
from .specfile import Bundle, SpecFileError, dump, load_bundled, load_file, serialize_bundle

EXIT_PASS, EXIT_FAIL, EXIT_CAP, EXIT_INPUT = 0, 1, 2, 3

KINDS = ("simulation", "forward", "backward", "refinement", "flat", "quiescence", "implements",
         "invariant", "restriction-lemma", "unfolding", "eternity", "corpus")


class InputError(SimrefError):
    pass


def _bundle(args) -> Bundle:
    bundle = Bundle() if args.no_bundled else load_bundled()
    for path in args.file or ():
        load_file(path, bundle)
    return bundle


def _need(args, *names):
    attrs = {"from": "source", "to": "target"}
    missing = [n for n in names if getattr(args, attrs.get(n, n.replace("-", "_"))) is None]
    if missing:
        raise InputError(f"check {args.kind} needs " + ", ".join(f"--{n}" for n in missing))


def _relation(args, bundle):
    if args.rel is not None:
        return bundle.relation(args.rel)
    return bundle.relation_between(args.source, args.target)


def _pair_check(fn: Callable) -> Callable:
    def run(args, bundle, bounds):
        _need(args, "from", "to")
        k, l = bundle.spec(args.source), bundle.spec(args.target)
        return fn(_relation(args, bundle), k, l, bounds)
    return run


def _refinement(args, bundle, bounds):
    _need(args, "from", "map")
    m = bundle.mapping(args.map)
    target = args.target or m.target
    if target is None:
        raise InputError("check refinement needs --to or a mapping with a target")
    return sim.check_refinement_mapping(m.function, bundle.spec(args.source),
                                        bundle.spec(target), bounds)


def _implements(args, bundle, bounds):
    _need(args, "from", "to", "map", "target-map")
    f, g = bundle.mapping(args.map), bundle.mapping(args.target_map)
    return check_implements(bundle.spec(args.source), f.function, bundle.spec(args.target),
                            g.function, bounds)


def _invariant(args, bundle, bounds):
    _need(args, "from", "set")
    k, d = bundle.spec(args.source), bundle.state_set(args.set)
    cls = cons.classify_invariant(k, d, bounds)

    def level(flag, exact=True):
        if not flag:
            return Verdict(Status.EXACT_FAIL)
        return exact_pass() if exact else Verdict(Status.BOUNDED_PASS, bounds=bounds)

    conditions = {"strong": level(cls.strong), "forward": level(cls.forward),
                  "plain": level(cls.plain, exact=False)}
    status = Status.BOUNDED_PASS if cls.plain and not cls.forward else Status.EXACT_PASS
    return Verdict(status, (cls.name,), conditions, bounds, f"{args.set} is {cls.name}")


def _restriction_lemma(args, bundle, bounds):
    _need(args, "from", "set")
    return cons.check_restriction_lemma(bundle.spec(args.source),
                                        bundle.state_set(args.set), bounds)


def _unfolding(args, bundle, bounds):
    _need(args, "from", "depth")
    return cons.check_unfolding_lemmas(bundle.spec(args.source), args.depth, bounds)


def _eternity(args, bundle, bounds):
    _need(args, "restriction")
    r = bundle.restriction(args.restriction)
    k = bundle.spec(r.spec)
    br = cons.BehaviourRestriction(k, r.relation, lambda xs: r.values,
                                   frozenset(r.values), r.name)
    restriction = cons.check_behaviour_restriction(br, bounds)
    if restriction.failed:
        return combine({"BR": restriction}, bounds)
    w, _ = cons.eternity_extend(br, bounds)
    return combine({"BR": restriction, "extension": cons.check_extension_kind(k, w, bounds)},
                   bounds)


def _corpus(args, bundle, bounds):
    names = list(NAMES) if args.all or not args.example else args.example
    if args.all:
        names = [n for n in names if n != "G'"]
    results = {}
    for name in names:
        inst = build_example(name)
        results[inst.name if name != "G'" else name] = run_expectations(
            inst, bounds if args.bounds else None)
    return combine(results, bounds if args.bounds else None, note="corpus")


CHECKS = {
    "simulation": _pair_check(sim.check_simulation),
    "forward": _pair_check(sim.check_forward),
    "backward": _pair_check(sim.check_backward),
    "flat": _pair_check(sim.check_flat),
    "quiescence": _pair_check(sim.check_preserves_quiescence),
    "refinement": _refinement,
    "implements": _implements,
    "invariant": _invariant,
    "restriction-lemma": _restriction_lemma,
    "unfolding": _unfolding,
    "eternity": _eternity,
    "corpus": _corpus,
}


def _inputs(args) -> dict:
    keys = ("source", "target", "rel", "map", "target_map", "set", "restriction", "depth",
            "example")
    return {k: getattr(args, k) for k in keys if getattr(args, k, None) is not None}


def _human(verdict: Verdict, title: str, depth: int = 0, limit: int = 6,
           max_depth: int = 8) -> list[str]:
    pad = "  " * depth
    head = f"{pad}{verdict.status.value:<12} {title}"
    if verdict.note:
        head += f"  ({verdict.note})"
    lines = [head]
    if depth >= max_depth:
        return lines
    for name, sub in verdict.conditions.items():
        lines += _human(sub, name, depth + 1, limit, max_depth)
    if verdict.conditions:
        return lines
    for item in verdict.evidence[:limit]:
        lines.append(f"{pad}  - {_show(item)}")
    if len(verdict.evidence) > limit:
        lines.append(f"{pad}  ... {len(verdict.evidence) - limit} more")
    return lines


def _show(item) -> str:
    if isinstance(item, tuple) and len(item) == 2 and all(isinstance(i, Lasso) for i in item):
        return f"{item[0]} -> {item[1]}"
    if isinstance(item, tuple) and len(item) == 2 and isinstance(item[0], Lasso):
        return f"{item[0]} -> {_show(item[1])}"
    if isinstance(item, tuple):
        return "(" + ", ".join(_show(i) for i in item) + ("," if len(item) == 1 else "") + ")"
    if isinstance(item, dict):
        return "{" + ", ".join(f"{_show(k)}: {_show(v)}" for k, v in item.items()) + "}"
    return str(item)


def emit(doc: dict, verdict: Verdict | None, fmt: str, title: str, out=None,
         max_depth: int = 8) -> None:
    out = out or sys.stdout
    if fmt == "structured":
        out.write(json.dumps(doc, indent=2, ensure_ascii=False) + "\n")
    elif verdict is not None:
        out.write("\n".join(_human(verdict, title, max_depth=max_depth)) + "\n")


def exit_code(verdict: Verdict) -> int:
    return EXIT_FAIL if verdict.failed else EXIT_PASS


def cmd_check(args) -> int:
    bundle = Bundle() if args.kind == "corpus" else _bundle(args)
    bounds = args.bounds or CheckBounds()
    verdict = CHECKS[args.kind](args, bundle, bounds)
    doc = {"command": "check", "kind": args.kind, "inputs": _inputs(args),
           "verdict": verdict.to_dict()}
    emit(doc, verdict, args.format, f"check {args.kind}",
         max_depth=2 if args.kind == "corpus" else 8)
    return exit_code(verdict)


def cmd_enumerate(args) -> int:
    bundle = _bundle(args)
    bounds = args.bounds or CheckBounds()
    found = enumerate_behaviours(bundle.spec(args.spec), bounds)
    if args.format == "structured":
        doc = {"command": "enumerate", "spec": args.spec, "bounds": bounds.to_json(),
               "behaviours": [xs.to_json() for xs in found]}
        emit(doc, None, "structured", "")
    else:
        for xs in found:
            print(xs)
    return EXIT_PASS


def cmd_export(args) -> int:
    bundle = _bundle(args)
    if args.names:
        keep = Bundle()
        for name in args.names:
            keep.specs[name] = bundle.spec(name)
            keep.patterns[name] = bundle.patterns.get(name, "x")
        bundle = keep
    sys.stdout.write(dump(serialize_bundle(bundle)))
    return EXIT_PASS


def _bounds(text: str) -> CheckBounds:
    try:
        return CheckBounds.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="simref", description=__doc__)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--file", action="append", help="spec file (repeatable)")
    common.add_argument("--no-bundled", action="store_true", help="skip the bundled examples")
    common.add_argument("--bounds", type=_bounds, help="prefix,cycle[,unroll[,horizon[,cap]]]")
    common.add_argument("--format", choices=("human", "structured"), default="human")
    sub = parser.add_subparsers(dest="command", required=True)

    check = sub.add_parser("check", parents=[common], help="run a checker")
    check.add_argument("kind", choices=KINDS)
    check.add_argument("--from", dest="source")
    check.add_argument("--to", dest="target")
    check.add_argument("--rel")
    check.add_argument("--map")
    check.add_argument("--target-map")
    check.add_argument("--set")
    check.add_argument("--restriction")
    check.add_argument("--depth", type=int)
    check.add_argument("--example", action="append", help="corpus example (repeatable)")
    check.add_argument("--all", action="store_true", help="every corpus example")
    check.set_defaults(run=cmd_check)

    enum = sub.add_parser("enumerate", parents=[common], help="list stutterfree behaviours")
    enum.add_argument("spec")
    enum.set_defaults(run=cmd_enumerate)

    export = sub.add_parser("export", parents=[common], help="print specs in canonical form")
    export.add_argument("names", nargs="*")
    export.set_defaults(run=cmd_export)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.run(args)
    except CapExceeded as exc:
        print(f"inconclusive: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (SpecFileError, InputError, SimrefError, KeyError, ValueError) as exc:
        message = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"error: {message}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
