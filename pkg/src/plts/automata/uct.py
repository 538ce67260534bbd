"""State-aware universal co-Büchi tree automata, run graphs and annotations.

A UCT here is the dual reading of a nondeterministic automaton: the same
transitions taken universally, with the accepting states reinterpreted as
rejecting ones.  A transition system is accepted iff every path of its run
graph visits rejecting vertices only finitely often.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Hashable, Iterable, Mapping, Union

from plts.automata.nba import NBA, AutomatonError
from plts.automata.pump import ComposedAutomaton
from plts.graphs import is_nontrivial, tarjan
from plts.machine import TransitionSystem, mask_of

Automaton = Union[NBA, ComposedAutomaton]


def _bits(names: Iterable[str], props: tuple[str, ...]) -> list[int]:
    return [1 << props.index(x) if x in props else 0 for x in names]


def _spread(mask: int, bits: list[int]) -> int:
    out = 0
    for i, b in enumerate(bits):
        if mask >> i & 1:
            out |= b
    return out


@dataclass(frozen=True, eq=False)
class StateAwareUCT:
    """Tree automaton reading ``(output letter, implementation state)`` and
    sending copies into directions, which are subsets of ``directions``.

    Output letters and directions are bitmasks over ``outputs`` and
    ``directions`` respectively.  For a plain (not state-aware) automaton
    ``xs`` is empty and the state argument of :meth:`delta` is ignored.
    """

    automaton: Automaton
    outputs: tuple[str, ...]
    directions: tuple[str, ...]
    xs: tuple = ()
    _memo: dict = field(default_factory=dict, repr=False, compare=False)
    _out_bits: list = field(default_factory=list, repr=False, compare=False)
    _dir_bits: list = field(default_factory=list, repr=False, compare=False)

    def __post_init__(self):
        props = self.automaton.props
        overlap = set(self.outputs) & set(self.directions)
        if overlap:
            raise AutomatonError(f"propositions both output and direction: {sorted(overlap)}")
        unknown = set(props) - set(self.outputs) - set(self.directions)
        if unknown:
            raise AutomatonError(f"automaton reads propositions outside the interface: {sorted(unknown)}")
        self._out_bits.extend(_bits(self.outputs, props))
        self._dir_bits.extend(_bits(self.directions, props))

    @property
    def state_aware(self) -> bool:
        return isinstance(self.automaton, ComposedAutomaton)

    @property
    def init(self):
        return self.automaton.init

    def is_rejecting(self, q) -> bool:
        return self.automaton.is_accepting(q)

    @property
    def rejecting_count(self) -> int:
        """Number of rejecting states, the ``|B|`` of the annotation bound."""
        a = self.automaton
        if isinstance(a, ComposedAutomaton):
            return len(a.spec.accepting) * a.pump.size
        return len(a.accepting)

    @property
    def n_directions(self) -> int:
        return 1 << len(self.directions)

    def delta(self, q, out: int, x: Hashable = None) -> tuple[tuple[Hashable, int], ...]:
        """All ``(q', direction)`` pairs for output letter ``out`` at state ``x``."""
        key = (q, out, x)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        a = self.automaton
        base = _spread(out, self._out_bits)
        res = []
        for d in range(self.n_directions):
            m = base | _spread(d, self._dir_bits)
            succ = a.successors(q, m, x) if self.state_aware else a.successors(q, m)
            res.extend((q2, d) for q2 in succ)
        hit = self._memo[key] = tuple(res)
        return hit


def dualize_to_uct(n: Automaton, inputs: Iterable[str], outputs: Iterable[str],
                   colors: Iterable[str] = ()) -> StateAwareUCT:
    """Read ``n`` universally as a co-Büchi tree automaton.

    Directions are the subsets of ``inputs`` together with ``colors``; the
    tree automaton accepts an implementation iff no execution is accepted
    by ``n``.
    """
    directions = tuple(sorted(set(inputs))) + tuple(sorted(set(colors) - set(inputs)))
    xs = n.xs if isinstance(n, ComposedAutomaton) else ()
    return StateAwareUCT(n, tuple(sorted(set(outputs))), directions, xs)


@dataclass(frozen=True)
class RunGraph:
    root: tuple
    edges: Mapping[tuple, tuple[tuple, ...]]

    @property
    def vertices(self) -> frozenset[tuple]:
        return frozenset(self.edges)

    def successors(self, v) -> tuple[tuple, ...]:
        return self.edges[v]


class _Binding:
    """Letter translation between a UCT and a transition system."""

    def __init__(self, u: StateAwareUCT, ts: TransitionSystem):
        if set(u.outputs) != set(ts.outputs):
            raise AutomatonError(
                f"output propositions differ: {sorted(u.outputs)} vs {sorted(ts.outputs)}")
        missing = set(ts.inputs) - set(u.directions)
        if missing:
            raise AutomatonError(f"system inputs are not directions: {sorted(missing)}")
        if u.state_aware and len(u.xs) != ts.size:
            raise AutomatonError(
                f"state space mismatch: automaton expects {len(u.xs)} states, system has {ts.size}")
        self.u, self.ts = u, ts
        self.label = [mask_of(ts.labels[s], u.outputs) for s in ts.states]
        in_pos = [ts.inputs.index(x) if x in ts.inputs else None for x in u.directions]
        self.project = []
        for d in range(u.n_directions):
            self.project.append(sum(1 << p for i, p in enumerate(in_pos)
                                    if p is not None and d >> i & 1))

    def successors(self, v):
        q, s = v
        x = self.u.xs[s] if self.u.state_aware else None
        seen = []
        for q2, d in self.u.delta(q, self.label[s], x):
            w = (q2, self.ts.delta[s][self.project[d]])
            if w not in seen:
                seen.append(w)
        return tuple(seen)


def run_graph(u: StateAwareUCT, ts: TransitionSystem) -> RunGraph:
    """Least graph containing the root and closed under the transitions."""
    b = _Binding(u, ts)
    root = (u.init, ts.init)
    edges: dict = {}
    stack = [root]
    while stack:
        v = stack.pop()
        if v in edges:
            continue
        edges[v] = b.successors(v)
        stack.extend(w for w in edges[v] if w not in edges)
    return RunGraph(root, edges)


@dataclass(frozen=True)
class Annotation:
    """Partial map from run-graph vertices to naturals; absent means ⊥."""

    values: Mapping[tuple, int]

    def __getitem__(self, v) -> int | None:
        return self.values.get(v)

    @property
    def max(self) -> int:
        return max(self.values.values(), default=0)


def check_acceptance(u: StateAwareUCT, ts: TransitionSystem) -> Annotation | None:
    """A valid annotation if no reachable cycle visits a rejecting vertex.

    The value at a vertex is the largest number of rejecting vertices on a
    run-graph path from the root to it, which is bounded by the number of
    rejecting vertices and hence by ``|S|·|B|``.
    """
    g = run_graph(u, ts)
    rej = {v for v in g.edges if u.is_rejecting(v[0])}
    comps = tarjan([g.root], g.successors)
    for comp in comps:
        if is_nontrivial(comp, g.successors) and rej & set(comp):
            return None
    incoming = {g.root: 0}
    values: dict = {}
    for comp in reversed(comps):
        base = max(incoming.get(v, 0) for v in comp)
        for v in comp:
            values[v] = base + (v in rej)
        members = set(comp)
        for v in comp:
            for w in g.edges[v]:
                if w not in members:
                    incoming[w] = max(incoming.get(w, 0), values[v])
    return Annotation(values)


def valid_annotation(u: StateAwareUCT, ts: TransitionSystem, lam: Annotation) -> bool:
    root = (u.init, ts.init)
    if lam[root] is None:
        return False
    b = _Binding(u, ts)
    for v, val in lam.values.items():
        if val is None:
            continue
        for w in b.successors(v):
            nxt = lam[w]
            if nxt is None:
                return False
            if nxt < val + (1 if u.is_rejecting(w[0]) else 0):
                return False
    return True
