"""Büchi automata, the pumping automaton and universal co-Büchi tree automata."""

from plts.automata.nba import NBA, AutomatonError, ltl_to_nba, nba_accepts, simplify_nba
from plts.automata.pump import (
    ComposedAutomaton, PumpAutomaton, build_n_pump, color_code, color_set, compose_spec_pump,
)
from plts.automata.uct import (
    Annotation, RunGraph, StateAwareUCT, check_acceptance, dualize_to_uct, run_graph,
    valid_annotation,
)

__all__ = [
    "NBA", "AutomatonError", "ltl_to_nba", "nba_accepts", "simplify_nba",
    "ComposedAutomaton", "PumpAutomaton", "build_n_pump", "color_code", "color_set",
    "compose_spec_pump",
    "Annotation", "RunGraph", "StateAwareUCT", "check_acceptance", "dualize_to_uct",
    "run_graph", "valid_annotation",
]
