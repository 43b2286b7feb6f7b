"""Simulation and refinement checking for finite-state specifications over lasso words."""

from .behaviour import (
    enumerate_behaviours,
    enumerate_executions,
    eval_property,
    is_behaviour,
    check_implements,
    quiescent_indices,
    unstutter,
)
from .core import CheckBounds, Lasso, Rel, Spec, Status, Verdict, make_spec
from .core.formula import FALSE, TRUE, always, changes, conj, disj, eventually, states, step
from .core.rel import graph, identity, rel_compose, relation_from
from .simulation import (
    check_backward,
    check_flat,
    check_forward,
    check_preserves_quiescence,
    check_refinement_mapping,
    check_simulation,
    match_behaviour,
    refinement_mapping_exists,
    theorem0_relation,
)

__version__ = "0.1.0"

__all__ = [
    "CheckBounds",
    "FALSE",
    "Lasso",
    "Rel",
    "Spec",
    "Status",
    "TRUE",
    "Verdict",
    "always",
    "changes",
    "check_backward",
    "check_flat",
    "check_forward",
    "check_implements",
    "check_preserves_quiescence",
    "check_refinement_mapping",
    "check_simulation",
    "conj",
    "disj",
    "enumerate_behaviours",
    "enumerate_executions",
    "eval_property",
    "eventually",
    "graph",
    "identity",
    "is_behaviour",
    "make_spec",
    "match_behaviour",
    "quiescent_indices",
    "refinement_mapping_exists",
    "rel_compose",
    "relation_from",
    "states",
    "step",
    "theorem0_relation",
    "unstutter",
]
