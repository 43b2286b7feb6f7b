"""A small, safe expression language for rules, predicates and mappings.

Expressions are Python syntax restricted to arithmetic, comparisons,
boolean operators, conditionals, tuples, indexing and a few builtins.
A name followed by a prime (``j'``) refers to the next state.
"""

from __future__ import annotations

import ast
import re
from typing import Any, Callable

from .core.errors import SpecError

PRIME = "__next"
_PRIMED = re.compile(r"([A-Za-z_]\w*)'")
_FUNCTIONS = {"min": min, "max": max, "abs": abs, "len": len, "all": all, "any": any,
              "range": range, "sum": sum}
_CONSTANTS = {"true": True, "false": False}
_ALLOWED = (
    ast.Expression, ast.BoolOp, ast.And, ast.Or, ast.UnaryOp, ast.Not, ast.USub, ast.UAdd,
    ast.BinOp, ast.Add, ast.Sub, ast.Mult, ast.FloorDiv, ast.Mod, ast.Pow,
    ast.Compare, ast.Eq, ast.NotEq, ast.Lt, ast.LtE, ast.Gt, ast.GtE, ast.In, ast.NotIn,
    ast.IfExp, ast.Name, ast.Load, ast.Constant, ast.Tuple, ast.List, ast.Subscript,
    ast.Slice, ast.Call, ast.GeneratorExp, ast.comprehension, ast.Store,
)


def _rewrite(src: str) -> str:
    """Apply the sugar (primes, ``mod``, lone ``=``) outside string literals."""
    out, code, i = [], [], 0
    while i < len(src):
        c = src[i]
        if c in "'\"" and not (c == "'" and i and (src[i - 1].isalnum() or src[i - 1] == "_")):
            end = src.find(c, i + 1)
            end = len(src) - 1 if end < 0 else end
            out.append(_sugar("".join(code)))
            out.append(src[i:end + 1])
            code, i = [], end + 1
            continue
        code.append(c)
        i += 1
    out.append(_sugar("".join(code)))
    return "".join(out)


def _sugar(code: str) -> str:
    code = re.sub(r"\bmod\b", "%", code)
    code = _PRIMED.sub(lambda m: m.group(1) + PRIME, code)
    # lone "=" is equation sugar for "=="
    return re.sub(r"(?<![=!<>])=(?!=)", "==", code)


def compile_expr(src: Any, names: set[str], where: str = "expression") -> Callable[[dict], Any]:
    """Compile ``src`` into a function of a variable environment.

    Free names must be among ``names`` or the allowed builtins.
    """
    if isinstance(src, (bool, int)):
        return lambda env, v=src: v
    if not isinstance(src, str):
        raise SpecError(f"{where}: expected an expression string, got {src!r}")
    try:
        tree = ast.parse(_rewrite(src), mode="eval")
    except SyntaxError as exc:
        raise SpecError(f"{where}: cannot parse {src!r}: {exc.msg}") from None
    bound = set(names) | set(_FUNCTIONS) | set(_CONSTANTS)
    for node in ast.walk(tree):
        if isinstance(node, ast.comprehension):
            for t in ast.walk(node.target):
                if isinstance(t, ast.Name):
                    bound.add(t.id)
    for node in ast.walk(tree):
        if not isinstance(node, _ALLOWED):
            raise SpecError(f"{where}: {type(node).__name__} is not allowed in {src!r}")
        if isinstance(node, ast.Call) and not (
                isinstance(node.func, ast.Name) and node.func.id in _FUNCTIONS):
            raise SpecError(f"{where}: only {', '.join(sorted(_FUNCTIONS))} may be called")
        if isinstance(node, ast.Name) and node.id not in bound:
            shown = node.id.replace(PRIME, "'")
            raise SpecError(f"{where}: unknown name {shown!r} in {src!r}")
    code = compile(tree, where, "eval")
    scope = {"__builtins__": {}, **_FUNCTIONS, **_CONSTANTS}

    def run(env: dict) -> Any:
        return eval(code, scope, env)  # noqa: S307 - the tree was checked above

    run.source = src
    return run


def pattern_names(pattern: Any, suffix: str = "") -> set[str]:
    """Variable names bound by a (possibly nested) binding pattern."""
    if isinstance(pattern, str):
        return {pattern + suffix}
    if isinstance(pattern, (list, tuple)):
        out: set[str] = set()
        for p in pattern:
            out |= pattern_names(p, suffix)
        return out
    raise SpecError(f"binding pattern must be a name or a list, got {pattern!r}")


def bind(pattern: Any, value: Any, env: dict, suffix: str = "") -> dict:
    if isinstance(pattern, str):
        env[pattern + suffix] = value
        return env
    if not isinstance(value, tuple) or len(value) != len(pattern):
        raise SpecError(f"state {value!r} does not match pattern {pattern!r}")
    for p, v in zip(pattern, value):
        bind(p, v, env, suffix)
    return env
