"""Bounded synthesis: constraint encoding, solving, decoding and drivers."""

from plts.synth.bounds import BoundFamily, enumerate_bounds
from plts.synth.decode import decode_model, encode_points
from plts.synth.drivers import (
    Attempt, InternalError, Status, SynthesisResult, realized_prompt_bound, synth_async_ag,
    synth_sync_pltl, synth_sync_prompt,
)
from plts.synth.encode import EncodingError, encode_architectural, encode_global, uct_states
from plts.synth.smt import Sat, Script, SolverError, Unknown, Unsat, solve

__all__ = [
    "BoundFamily", "enumerate_bounds", "decode_model", "encode_points",
    "Attempt", "InternalError", "Status", "SynthesisResult", "realized_prompt_bound",
    "synth_async_ag", "synth_sync_pltl", "synth_sync_prompt",
    "EncodingError", "encode_architectural", "encode_global", "uct_states",
    "Sat", "Script", "SolverError", "Unknown", "Unsat", "solve",
]
