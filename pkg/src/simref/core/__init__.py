"""Core data model: lassos, formulas, relations, specs and verdicts."""

from .errors import CapExceeded, PartialFunction, SimrefError, SpaceMismatch, SpecError
from .formula import (
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
    always,
    changes,
    conj,
    decreases,
    disj,
    eventually,
    infinitely_often,
    materialize,
    pullback,
    states,
    step,
    structurally_equal,
    tabulate,
)
from .lasso import Lasso, from_sequence, lasso_from_orbit, same_word
from .order import jsonable, sorted_states, state_key
from .rel import (
    Rel,
    fst,
    graph,
    identity,
    omega_related,
    rel_compose,
    rel_converse,
    relation_from,
    snd,
)
from .spec import Spec, explore, guarded, make_spec
from .stutter import sample_lassos, stutter_counterexample, stutter_variants
from .verdict import (
    CheckBounds,
    Status,
    Verdict,
    bounded_pass,
    combine,
    exact_fail,
    exact_pass,
)
