"""A total order over heterogeneous state values.

States may be ints, bools, strings, tuples or small objects exposing a
``sort_key`` method (sequences, for instance).  Python refuses to compare
most mixed types, so every deterministic traversal sorts through
:func:`state_key`.
"""

from __future__ import annotations

from typing import Any, Iterable


def state_key(value: Any) -> tuple:
    if isinstance(value, bool):
        return (0, int(value))
    if isinstance(value, int):
        return (0, value)
    if isinstance(value, str):
        return (1, value)
    if isinstance(value, tuple):
        return (2, len(value), tuple(state_key(v) for v in value))
    key = getattr(value, "sort_key", None)
    if key is not None:
        return (3, key())
    if isinstance(value, frozenset):
        return (4, tuple(sorted(state_key(v) for v in value)))
    return (5, repr(value))


def sorted_states(values: Iterable[Any]) -> list:
    return sorted(values, key=state_key)


def jsonable(value: Any) -> Any:
    """Structural JSON form of a state value (tuples and sets become lists)."""
    if isinstance(value, (bool, int, str)) or value is None:
        return value
    if isinstance(value, tuple):
        return [jsonable(v) for v in value]
    if isinstance(value, (frozenset, set)):
        return [jsonable(v) for v in sorted_states(value)]
    to_json = getattr(value, "to_json", None)
    if to_json is not None:
        return to_json()
    return repr(value)
