"""Top-level synthesis drivers.

Each driver walks the bound families in a fixed order, encodes the
annotation constraints, asks the solver, decodes a model into per-process
transition systems and re-verifies it with the model checker before
reporting it.
"""

from __future__ import annotations

import enum
import logging
import time
from dataclasses import dataclass, field
from typing import Hashable, Mapping

from plts.architecture import (
    Architecture, ArchitectureError, async_lift, color_extend, validate,
)
from plts.automata.nba import ltl_to_nba
from plts.automata.pump import S0, ComposedAutomaton, compose_spec_pump, pump_step
from plts.automata.uct import dualize_to_uct
from plts.colored import (
    Lasso, buchi_non_empty, build_colored_graph, prompt_model_check, pumpable_witness,
    spec_automaton,
)
from plts.formula.ast import Formula, atoms, is_prompt_ltl, is_well_formed, negate, var_sets
from plts.formula.rewrite import RewriteError, colorize, pltl_to_prompt
from plts.machine import TransitionSystem, product_of, respects_scheduling, widen
from plts.architecture import sched_name
from plts.synth.bounds import BoundFamily, enumerate_bounds
from plts.synth.decode import decode_model
from plts.synth.encode import encode_architectural, encode_global, is_async, uct_states
from plts.synth.smt import DEFAULT_SOLVER, Sat, SolverError, Unknown, Unsat, solve

log = logging.getLogger(__name__)


class Status(enum.Enum):
    REALIZED = "Realized"
    EXHAUSTED = "ExhaustedBounds"
    SOLVER_ERROR = "SolverError"


class InternalError(RuntimeError):
    """A decoded solution failed verification: the encoding is unsound."""


@dataclass(frozen=True)
class Attempt:
    bounds: str
    answer: str
    seconds: float
    iterations: int = 1
    grounded: int = 0


@dataclass(frozen=True)
class SynthesisResult:
    status: Status
    systems: Mapping[str, TransitionSystem] = field(default_factory=dict)
    bounds: BoundFamily | None = None
    realized_bound: int | None = None
    valuation: Mapping[str, int] | None = None
    attempts: tuple[Attempt, ...] = ()
    notes: tuple[str, ...] = ()
    seconds: float = 0.0
    script: str = field(default="", repr=False, compare=False)

    @property
    def realized(self) -> bool:
        return self.status is Status.REALIZED


def fresh_name(base: str, used) -> str:
    used = set(used)
    if base not in used:
        return base
    i = 1
    while f"{base}{i}" in used:
        i += 1
    return f"{base}{i}"


def realized_prompt_bound(ts_r: TransitionSystem, r: str | None = None) -> int:
    """Twice the longest color block on the unique run of an input-free system."""
    if ts_r.inputs:
        raise ValueError("color system must not read inputs")
    if r is None:
        if len(ts_r.outputs) != 1:
            raise ValueError("color system must have exactly one output")
        r = ts_r.outputs[0]
    first: dict[int, int] = {}
    run = []
    s = ts_r.init
    while s not in first:
        first[s] = len(run)
        run.append(s)
        s = ts_r.delta[s][0]
    start = first[s]
    loop = run[start:]
    colors = [r in ts_r.labels[t] for t in run[:start] + loop + loop]
    if len({r in ts_r.labels[t] for t in loop}) < 2:
        raise ValueError("no color alternation on the cycle")
    longest = cur = 1
    for a, b in zip(colors, colors[1:]):
        cur = cur + 1 if a == b else 1
        longest = max(longest, cur)
    return 2 * longest


def _check_formula(a: Architecture, *formulas: Formula) -> None:
    for f in formulas:
        unknown = atoms(f) - a.propositions()
        if unknown:
            raise ArchitectureError(
                f"formula refers to propositions outside the architecture: {sorted(unknown)}")


def _system_product(a: Architecture, systems: Mapping[str, TransitionSystem]) -> TransitionSystem:
    ts = product_of([systems[p] for p in a.processes])
    missing = set(a.outputs[a.env]) - set(ts.inputs)
    return widen(ts, missing) if missing else ts


def _answer_name(ans) -> str:
    if isinstance(ans, Sat):
        return "sat"
    if isinstance(ans, Unsat):
        return "unsat"
    return f"unknown ({ans.reason})"


def synth_sync_prompt(a: Architecture, formula: Formula, cap_total: int,
                      solver: str = DEFAULT_SOLVER, cap_annotation: bool = True,
                      timeout: float | None = None) -> SynthesisResult:
    """Synchronous synthesis through the color process ``p_r``."""
    start = time.perf_counter()
    validate(a)
    if not is_prompt_ltl(formula):
        raise RewriteError("synchronous synthesis needs a PROMPT-LTL formula")
    _check_formula(a, formula)
    r = fresh_name("r", a.propositions())
    ar = color_extend(a, r, fresh_name(f"p_{r}", a.all_processes))
    p_r = ar.processes[-1]
    inputs = sorted(a.outputs[a.env])
    outputs = sorted(a.system_outputs() | {r})
    n = ltl_to_nba(negate(colorize(formula, r)), props=inputs + outputs)
    u = dualize_to_uct(n, inputs, outputs)
    states = uct_states(u, 1)
    attempts: list[Attempt] = []
    script = ""
    for bounds in enumerate_bounds(ar.processes, cap_total):
        sc = encode_global(u, bounds.total, inputs, outputs, states, cap_annotation)
        sc.extend(encode_architectural(ar, bounds, asynchronous=False))
        script = sc.text()
        try:
            ans = solve(script, solver, timeout)
        except SolverError as exc:
            return SynthesisResult(Status.SOLVER_ERROR, attempts=tuple(attempts), notes=(str(exc),),
                                   seconds=time.perf_counter() - start, script=script)
        attempts.append(Attempt(str(bounds), _answer_name(ans), ans.seconds, 1, len(states)))
        log.info("bounds %s: %s in %.1fs", bounds, _answer_name(ans), ans.seconds)
        if isinstance(ans, Unknown):
            return SynthesisResult(Status.SOLVER_ERROR, attempts=tuple(attempts),
                                   notes=(f"solver gave no answer at {bounds}: {ans.reason}",),
                                   seconds=time.perf_counter() - start, script=script)
        if isinstance(ans, Unsat):
            continue
        systems, notes = decode_model(ans.values, ar, bounds)
        product = _system_product(a, systems)
        if not prompt_model_check(product, formula, *_mc_colors(product)):
            raise InternalError(f"decoded solution at {bounds} violates the formula")
        return SynthesisResult(
            Status.REALIZED, {p: systems[p] for p in ar.processes}, bounds,
            realized_prompt_bound(systems[p_r], r), None, tuple(attempts), tuple(notes),
            time.perf_counter() - start, script)
    return SynthesisResult(Status.EXHAUSTED, attempts=tuple(attempts),
                           seconds=time.perf_counter() - start, script=script)


def _mc_colors(ts: TransitionSystem) -> tuple[str, str]:
    used = set(ts.inputs) | set(ts.outputs)
    r = fresh_name("r", used)
    return r, fresh_name("rp", used | {r})


def synth_sync_pltl(a: Architecture, formula: Formula, cap_total: int,
                    solver: str = DEFAULT_SOLVER, cap_annotation: bool = True,
                    timeout: float | None = None) -> SynthesisResult:
    """PLTL synthesis: bounded eventualities share the realized prompt bound,
    bounded always operators get bound 0."""
    if not is_well_formed(formula):
        raise RewriteError("formula is not well-formed: a variable parameterizes both F and G")
    res = synth_sync_prompt(a, pltl_to_prompt(formula), cap_total, solver, cap_annotation, timeout)
    if not res.realized:
        return res
    var_f, var_g = var_sets(formula)
    valuation = {x: res.realized_bound for x in sorted(var_f)}
    valuation.update({y: 0 for y in sorted(var_g)})
    return SynthesisResult(res.status, res.systems, res.bounds, res.realized_bound, valuation,
                           res.attempts, res.notes, res.seconds, res.script)


def run_of_witness(n: ComposedAutomaton, witness: Lasso) -> list[tuple]:
    """States of ``n`` along an accepting run on a colored-graph witness.

    ``witness`` is a lasso of the pump product of the colored graph, so its
    path is pumpable for graph vertices ``(s, colors, q)``; the pump inside
    ``n`` identifies vertices by ``(s, q)`` only, which is coarser, so a run
    exists and is found by searching positions times pump states.
    """
    path = [v for v, _ in witness.path]
    size, start = len(path), witness.loop_start

    def succ(node):
        i, p = node
        s, c, q = path[i]
        j = i + 1 if i + 1 < size else start
        return [(j, p2) for p2 in pump_step(p, (n.xs[s], q), c)]

    lasso = buchi_non_empty((0, S0), succ, [])
    if lasso is None:
        raise InternalError("counterexample has no run of the composed automaton")
    return [(path[i][2], p) for i, p in lasso.path]


def synth_async_ag(a: Architecture, assumption: Formula, guarantee: Formula, cap_total: int,
                   solver: str = DEFAULT_SOLVER, cap_annotation: bool = True,
                   timeout: float | None = None, cap_each: int | None = None,
                   max_iterations: int | None = None) -> SynthesisResult:
    """Asynchronous assume-guarantee synthesis.

    The annotation constraints of the state-aware automaton are grounded
    lazily: a satisfying model is checked with the pumpable-emptiness model
    checker, and the automaton states on a counterexample run are added to
    the grounded set.  Leaving states out only drops constraints, so an
    unsatisfiable partial system proves the bound family unrealizable, and
    every reported solution has passed the model checker.
    """
    start = time.perf_counter()
    validate(a)
    for f in (assumption, guarantee):
        if not is_prompt_ltl(f):
            raise RewriteError("assume-guarantee synthesis needs PROMPT-LTL formulas")
    if not is_async(a):
        a = async_lift(a)
    _check_formula(a, assumption, guarantee)
    inputs = sorted(a.outputs[a.env])
    outputs = sorted(a.system_outputs())
    r = fresh_name("r", a.propositions())
    rp = fresh_name("rp", a.propositions() | {r})
    spec = spec_automaton(assumption, guarantee, set(inputs) | set(outputs), r, rp)
    attempts: list[Attempt] = []
    notes: list[str] = []
    script = ""
    for bounds in enumerate_bounds(a.processes, cap_total, cap_each):
        b = bounds.total
        n = compose_spec_pump(spec, tuple(range(b)), r, rp)
        u = dualize_to_uct(n, inputs, outputs, colors=(r, rp))
        grounded: list[Hashable] = [u.init]
        known = {u.init}
        arch = encode_architectural(a, bounds, asynchronous=True)
        t0, iterations = time.perf_counter(), 0
        while True:
            iterations += 1
            sc = encode_global(u, b, inputs, outputs, grounded, cap_annotation)
            sc.extend(arch)
            script = sc.text()
            try:
                ans = solve(script, solver, timeout)
            except SolverError as exc:
                return SynthesisResult(Status.SOLVER_ERROR, attempts=tuple(attempts),
                                       notes=(str(exc),), seconds=time.perf_counter() - start,
                                       script=script)
            log.info("bounds %s iteration %d: %d grounded states, %s in %.1fs",
                     bounds, iterations, len(grounded), _answer_name(ans), ans.seconds)
            if not isinstance(ans, Sat):
                attempts.append(Attempt(str(bounds), _answer_name(ans), time.perf_counter() - t0,
                                        iterations, len(grounded)))
                break
            systems, decode_notes = decode_model(ans.values, a, bounds)
            ts = _system_product(a, systems)
            witness = pumpable_witness(build_colored_graph(ts, spec, r, rp))
            if witness is None:
                for p in a.processes:
                    if not respects_scheduling(systems[p], sched_name(p)):
                        raise InternalError(f"decoded process {p} ignores its scheduling bit")
                attempts.append(Attempt(str(bounds), "sat", time.perf_counter() - t0,
                                        iterations, len(grounded)))
                return SynthesisResult(
                    Status.REALIZED, systems, bounds, None, None, tuple(attempts),
                    tuple(notes + decode_notes), time.perf_counter() - start, script)
            added = [q for q in run_of_witness(n, witness) if q not in known]
            if not added:
                raise InternalError("counterexample run is already grounded but was not excluded")
            for q in added:
                if q not in known:
                    known.add(q)
                    grounded.append(q)
            if max_iterations is not None and iterations >= max_iterations:
                attempts.append(Attempt(str(bounds), "iteration limit", time.perf_counter() - t0,
                                        iterations, len(grounded)))
                return SynthesisResult(Status.SOLVER_ERROR, attempts=tuple(attempts),
                                       notes=(f"refinement limit reached at {bounds}",),
                                       seconds=time.perf_counter() - start, script=script)
        if isinstance(ans, Unknown):
            return SynthesisResult(Status.SOLVER_ERROR, attempts=tuple(attempts),
                                   notes=(f"solver gave no answer at {bounds}: {ans.reason}",),
                                   seconds=time.perf_counter() - start, script=script)
    return SynthesisResult(Status.EXHAUSTED, attempts=tuple(attempts),
                           seconds=time.perf_counter() - start, script=script)
