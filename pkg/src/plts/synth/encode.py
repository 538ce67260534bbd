"""Grounded bounded-synthesis constraints.

Global states are ``1..b`` and input letters are coded as bitmasks over the
sorted global inputs.  Output labels are one boolean function per output
proposition.  The annotation is split into ``lamB`` (reachability of a
run-graph vertex) and ``lamN`` (its rejecting count), both indexed by the
position of the automaton state in the grounded state list.
"""

from __future__ import annotations

import re
from typing import Hashable, Iterable, Sequence

from plts.architecture import Architecture, sched_name
from plts.automata.uct import StateAwareUCT
from plts.synth.bounds import BoundFamily
from plts.synth.smt import Script, land

MAX_WIDTH = 16
_SIMPLE = re.compile(r"[A-Za-z_][A-Za-z0-9_.]*\Z")


class EncodingError(ValueError):
    pass


def sym(*parts: str) -> str:
    # "." cannot occur in proposition names, so joined names never collide
    name = ".".join(parts)
    return name if _SIMPLE.match(name) else "|" + name.replace("|", "_").replace("\\", "_") + "|"


def delta_fun(p: str) -> str:
    return sym("delta", p)


def label_fun(p: str, o: str) -> str:
    return sym("l", p, o)


def _check_width(inputs: Sequence[str], outputs: Sequence[str]) -> None:
    if len(inputs) > MAX_WIDTH or len(outputs) > MAX_WIDTH:
        raise EncodingError(
            f"letter code overflow: {len(inputs)} inputs / {len(outputs)} outputs, at most {MAX_WIDTH}")


def uct_states(u: StateAwareUCT, b: int) -> list:
    """Automaton states reachable on some letter at some implementation state."""
    xs = list(u.xs) if u.state_aware else [None]
    if u.state_aware and len(xs) != b:
        raise EncodingError(f"automaton state space has {len(xs)} ids, bound is {b}")
    order = [u.init]
    seen = {u.init}
    for q in order:
        for out in range(1 << len(u.outputs)):
            for x in xs:
                for q2, _ in u.delta(q, out, x):
                    if q2 not in seen:
                        seen.add(q2)
                        order.append(q2)
    return order


def encode_global(u: StateAwareUCT, b: int, inputs: Iterable[str], outputs: Iterable[str],
                  states: Sequence[Hashable] | None = None, cap: bool = True) -> Script:
    """Annotation constraints for an implementation with ``b`` states.

    ``states`` restricts grounding to the given automaton states (they must
    include the initial one); constraints towards other states are left
    out, which only relaxes the system.
    """
    if b < 1:
        raise EncodingError("bound must be positive")
    inputs, outputs = tuple(sorted(set(inputs))), tuple(sorted(set(outputs)))
    _check_width(inputs, outputs)
    if outputs != u.outputs:
        raise EncodingError(f"automaton outputs {u.outputs} differ from {outputs}")
    states = list(uct_states(u, b) if states is None else states)
    if u.init not in states:
        raise EncodingError("grounded states must include the initial state")
    index = {q: i for i, q in enumerate(states)}
    project = [sum(1 << inputs.index(x) for k, x in enumerate(u.directions)
                   if d >> k & 1 and x in inputs) for d in range(u.n_directions)]
    n_in = 1 << len(inputs)

    sc = Script()
    sc.comment(f"implementation states 1..{b}; {len(states)} automaton states grounded")
    sc.declare("delta", ["Int", "Int"], "Int")
    for o in outputs:
        sc.declare(sym("l", o), ["Int"], "Bool")
    sc.declare("lamB", ["Int", "Int"], "Bool")
    sc.declare("lamN", ["Int", "Int"], "Int")
    for s in range(1, b + 1):
        for i in range(n_in):
            sc.add(f"(and (<= 1 (delta {s} {i})) (<= (delta {s} {i}) {b}))")
    sc.add(f"(lamB {index[u.init]} 1)")
    bound = b * u.rejecting_count
    for q in states:
        qi = index[q]
        for s in range(1, b + 1):
            here = f"(lamN {qi} {s})"
            sc.add(f"(<= 0 {here})" if not cap else f"(and (<= 0 {here}) (<= {here} {bound}))")
    for q in states:
        qi = index[q]
        for s in range(1, b + 1):
            x = u.xs[s - 1] if u.state_aware else None
            for out in range(1 << len(outputs)):
                parts: dict[str, None] = {}
                for q2, d in u.delta(q, out, x):
                    j = index.get(q2)
                    if j is None:
                        continue
                    t = f"(delta {s} {project[d]})"
                    rel = ">" if u.is_rejecting(q2) else ">="
                    parts[f"(lamB {j} {t})"] = None
                    parts[f"({rel} (lamN {j} {t}) (lamN {qi} {s}))"] = None
                if not parts:
                    continue
                guard = [f"(lamB {qi} {s})"]
                guard += [f"({sym('l', o)} {s})" if out >> k & 1 else f"(not ({sym('l', o)} {s}))"
                          for k, o in enumerate(outputs)]
                sc.add(f"(=> {land(guard)} {land(list(parts))})")
    return sc


def is_async(a: Architecture) -> bool:
    return bool(a.processes) and all(
        sched_name(p) in a.inputs[p] and sched_name(p) in a.outputs[a.env] for p in a.processes)


def encode_architectural(a: Architecture, bounds: BoundFamily,
                         asynchronous: bool | None = None) -> Script:
    """Local transition and label functions and their link to the global ones."""
    missing = set(a.processes) - set(bounds.processes)
    if missing:
        raise EncodingError(f"bounds missing for processes {sorted(missing)}")
    if tuple(bounds.processes) != tuple(a.processes):
        bounds = BoundFamily(tuple((p, bounds[p]) for p in a.processes))
    inputs = tuple(sorted(a.outputs[a.env]))
    owner = {o: p for p in a.processes for o in a.outputs[p]}
    outputs = tuple(sorted(owner))
    _check_width(inputs, outputs)
    asynchronous = is_async(a) if asynchronous is None else asynchronous

    sc = Script()
    sc.comment("architecture: " + ", ".join(f"{p}:{bounds[p]}" for p in a.processes))
    local_in = {p: tuple(sorted(a.inputs[p])) for p in a.processes}
    for p in a.processes:
        _check_width(local_in[p], ())
        for x in local_in[p]:
            if x not in inputs and x not in owner:
                raise EncodingError(f"input {x!r} of {p!r} has no producer")
        sc.declare(delta_fun(p), ["Int", "Int"], "Int")
        for o in sorted(a.outputs[p]):
            sc.declare(label_fun(p, o), ["Int"], "Bool")
        bp = bounds[p]
        for d in range(1, bp + 1):
            for c in range(1 << len(local_in[p])):
                term = f"({delta_fun(p)} {d} {c})"
                sc.add(f"(and (<= 1 {term}) (<= {term} {bp}))")
                sc.queries.append(term)
            for o in sorted(a.outputs[p]):
                sc.queries.append(f"({label_fun(p, o)} {d})")
        if asynchronous:
            bit = 1 << local_in[p].index(sched_name(p))
            for d in range(1, bp + 1):
                for c in range(1 << len(local_in[p])):
                    if not c & bit:
                        sc.add(f"(= ({delta_fun(p)} {d} {c}) {d})")

    for s in range(1, bounds.total + 1):
        dg = bounds.digits(s)
        for o in outputs:
            p = owner[o]
            sc.add(f"(= ({sym('l', o)} {s}) ({label_fun(p, o)} {dg[p]}))")
        for i in range(1 << len(inputs)):
            terms = []
            for p in a.processes:
                const, dyn = 0, []
                for k, x in enumerate(local_in[p]):
                    if x in inputs:
                        const |= (i >> inputs.index(x) & 1) << k
                    else:
                        q = owner[x]
                        dyn.append(f"(ite ({label_fun(q, x)} {dg[q]}) {1 << k} 0)")
                code = str(const) if not dyn else f"(+ {const} {' '.join(dyn)})"
                local = f"({delta_fun(p)} {dg[p]} {code})"
                w = bounds.weight(p)
                terms.append(f"(- {local} 1)" if w == 1 else f"(* {w} (- {local} 1))")
            sc.add(f"(= (delta {s} {i}) (+ 1 {' '.join(terms)}))")
    return sc
