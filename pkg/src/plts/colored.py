"""Colored Büchi graphs, pumpable emptiness and assume-guarantee model checking."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Hashable, Iterable, Mapping, Sequence

from plts.automata.nba import NBA, ltl_to_nba
from plts.automata.pump import COLOR_CODES, R_BIT, RP_BIT, S0, color_set, pump_step
from plts.formula.ast import TRUE, Formula, atoms, conj, is_ltl, is_prompt_ltl, negate
from plts.formula.rewrite import alt, colorize, rel_color, unfold_prompt
from plts.graphs import is_nontrivial, iter_sccs, path_between, reachable, shortest_path
from plts.machine import TransitionSystem, letter_of


class ColoringError(ValueError):
    pass


@dataclass(frozen=True)
class Lasso:
    """Infinite path ``path[:loop_start] (path[loop_start:])^ω``."""

    path: tuple
    loop_start: int

    def __post_init__(self):
        object.__setattr__(self, "path", tuple(self.path))
        if not 0 <= self.loop_start < len(self.path):
            raise ColoringError("loop start outside the path")

    @property
    def stem(self) -> tuple:
        return self.path[:self.loop_start]

    @property
    def loop(self) -> tuple:
        return self.path[self.loop_start:]

    def unroll(self, times: int) -> tuple:
        return self.stem + self.loop * times

    def is_path_of(self, succ: Callable[[Hashable], Iterable[Hashable]], init=None) -> bool:
        if init is not None and self.path[0] != init:
            return False
        closed = self.path + (self.path[self.loop_start],)
        return all(b in set(succ(a)) for a, b in zip(closed, closed[1:]))

    def __str__(self) -> str:
        stem = " ".join(map(str, self.stem))
        return f"{stem} ({' '.join(map(str, self.loop))})^w".strip()


@dataclass(frozen=True)
class ColoredBuchiGraph:
    """Büchi graph whose vertices carry a two-bit color (bit 0 ``r``, bit 1 ``r'``)."""

    edges: Mapping[Hashable, tuple]
    init: Hashable
    colors: Mapping[Hashable, int]
    acceptance: tuple[frozenset, ...]
    r: str = "r"
    rp: str = "rp"

    def __post_init__(self):
        if self.init not in self.edges:
            raise ColoringError("initial vertex is not a vertex")
        if not 1 <= len(self.acceptance) <= 2:
            raise ColoringError("acceptance must consist of one or two sets")
        object.__setattr__(self, "acceptance", tuple(frozenset(b) for b in self.acceptance))
        for b in self.acceptance:
            if not b <= self.edges.keys():
                raise ColoringError("acceptance set mentions unknown vertices")
        for v, ws in self.edges.items():
            if any(w not in self.edges for w in ws):
                raise ColoringError(f"edge from {v!r} leaves the vertex set")

    @property
    def vertices(self) -> frozenset:
        return frozenset(self.edges)

    def successors(self, v) -> tuple:
        return self.edges[v]

    def label(self, v) -> frozenset[str]:
        return color_set(self.colors[v], self.r, self.rp)


def colored_graph(vertices: Iterable, edges: Iterable[tuple], init, colors: Mapping,
                  acceptance: Sequence[Iterable], r: str = "r", rp: str = "rp") -> ColoredBuchiGraph:
    """Convenience constructor from an edge list; colors may be codes or sets."""
    succ: dict = {v: [] for v in vertices}
    for a, b in edges:
        if b not in succ[a]:
            succ[a].append(b)
    codes = {v: c if isinstance(c, int) else
             (R_BIT if r in c else 0) | (RP_BIT if rp in c else 0) for v, c in colors.items()}
    return ColoredBuchiGraph({v: tuple(ws) for v, ws in succ.items()}, init, codes,
                             tuple(frozenset(b) for b in acceptance), r, rp)


def build_colored_graph(ts: TransitionSystem, spec: NBA, r: str = "r",
                        rp: str = "rp") -> ColoredBuchiGraph:
    """Product of a system with a specification automaton over colored letters.

    Vertices are ``(s, colors, q)``.  The automaton reads the system label,
    the input and the current colors; the successor colors are free.  Only
    the part reachable from ``(s0, ∅, q0)`` is built.
    """
    system = set(ts.inputs) | set(ts.outputs)
    if r in system or rp in system:
        raise ColoringError("color propositions collide with system propositions")
    if not set(ts.outputs) <= set(spec.props):
        raise ColoringError("system outputs missing from the specification alphabet")
    extra = set(spec.props) - system - {r, rp}
    if extra:
        raise ColoringError(f"specification reads unknown propositions {sorted(extra)}")
    base = [[spec.mask(ts.labels[s] | letter_of(i, ts.inputs)) for i in range(1 << len(ts.inputs))]
            for s in ts.states]
    cmask = [spec.mask(color_set(c, r, rp)) for c in COLOR_CODES]
    init = (ts.init, 0, spec.init)
    edges: dict = {}
    stack = [init]
    while stack:
        v = stack.pop()
        if v in edges:
            continue
        s, c, q = v
        out = []
        for i, s2 in enumerate(ts.delta[s]):
            for q2 in spec.successors(q, base[s][i] | cmask[c]):
                for c2 in COLOR_CODES:
                    w = (s2, c2, q2)
                    if w not in out:
                        out.append(w)
        edges[v] = tuple(out)
        stack.extend(w for w in out if w not in edges)
    colors = {v: v[1] for v in edges}
    accepting = frozenset(v for v in edges if v[2] in spec.accepting)
    return ColoredBuchiGraph(edges, init, colors, (accepting,), r, rp)


def buchi_non_empty(init, succ: Callable[[Hashable], Iterable[Hashable]] | Mapping,
                    acceptance: Sequence[Iterable] | Sequence[Callable]) -> Lasso | None:
    """Accepting lasso of a generalized Büchi graph, found through its SCCs."""
    if isinstance(succ, Mapping):
        succ = succ.__getitem__
    tests = [b if callable(b) else frozenset(b).__contains__ for b in acceptance]
    for comp in iter_sccs([init], succ):
        if not is_nontrivial(comp, succ):
            continue
        members = set(comp)
        hits = []
        for t in tests:
            hit = next((v for v in comp if t(v)), None)
            if hit is None:
                break
            hits.append(hit)
        else:
            return _witness(init, succ, comp[0] if not hits else hits[0], hits[1:],
                            members.__contains__)
    return None


def _witness(init, succ, anchor, targets, inside) -> Lasso:
    stem = shortest_path([init], lambda v: v == anchor, succ)
    loop, cur = [anchor], anchor
    for t in targets:
        if t != cur:
            loop += shortest_path([cur], lambda v, t=t: v == t, succ, inside)[1:]
            cur = t
    loop += path_between(cur, anchor, succ, inside)[1:-1]
    return Lasso(tuple(stem[:-1]) + tuple(loop), len(stem) - 1)


def pump_product(g: ColoredBuchiGraph, within: Callable[[Hashable], bool] | None = None
                 ) -> Callable[[tuple], tuple]:
    """Successor function of the product of ``g`` with the pumping automaton."""
    def succ(node):
        v, s = node
        pumps = pump_step(s, v, g.colors[v])
        return tuple((w, t) for w in g.edges[v] if within is None or within(w) for t in pumps)

    return succ


def pump_product_size(g: ColoredBuchiGraph) -> int:
    return len(reachable([(g.init, S0)], pump_product(g)))


def useful_vertices(g: ColoredBuchiGraph) -> set:
    """Vertices from which some cycle meeting every acceptance set is reachable."""
    good: set = set()
    for comp in iter_sccs([g.init], g.successors):
        members = set(comp)
        if is_nontrivial(comp, g.successors) and all(members & b for b in g.acceptance):
            good |= members
    preds: dict = {v: [] for v in g.edges}
    for v, ws in g.edges.items():
        for w in ws:
            preds[w].append(v)
    return reachable(good, preds.__getitem__)


def pumpable_witness(g: ColoredBuchiGraph) -> Lasso | None:
    """Accepting lasso of the pump product, as ``(vertex, pump state)`` pairs.

    Vertices that cannot reach an accepting cycle of ``g`` are skipped; no
    accepting path of the product passes through them.
    """
    useful = useful_vertices(g)
    if g.init not in useful:
        return None
    succ = pump_product(g, useful.__contains__)
    return buchi_non_empty((g.init, S0), succ,
                           [lambda n, b=b: n[0] in b for b in g.acceptance])


def pumpable_non_empty(g: ColoredBuchiGraph) -> Lasso | None:
    """Pumpable accepting path of ``g``, via emptiness of its pump product."""
    lasso = pumpable_witness(g)
    if lasso is None:
        return None
    return Lasso(tuple(v for v, _ in lasso.path), lasso.loop_start)


def _blocks_pumpable(g: ColoredBuchiGraph, path: Sequence) -> bool:
    """Pumpability of all blocks between adjacent r'-change points of a finite path."""
    rp = [g.colors[v] & RP_BIT for v in path]
    changes = [t for t in range(len(path)) if t == 0 or rp[t] != rp[t - 1]]
    for i, i2 in zip(changes, changes[1:]):
        if not _block_pumpable(g, path[i:i2]):
            return False
    return True


def _block_pumpable(g: ColoredBuchiGraph, block: Sequence) -> bool:
    rbit = [g.colors[v] & R_BIT for v in block]
    n = len(block)
    for j in range(n):
        for j2 in range(j + 1, n):
            if rbit[j2] == rbit[j]:
                continue
            if any(block[j3] == block[j] for j3 in range(j2 + 1, n)):
                return True
    return False


def is_pumpable_accepting(g: ColoredBuchiGraph, lasso: Lasso, unrollings: int = 2) -> bool:
    """Witness check: a path of ``g`` meeting every acceptance set in its
    loop whose r'-blocks are all pumpable."""
    if not lasso.is_path_of(g.successors, g.init):
        return False
    if not all(set(lasso.loop) & b for b in g.acceptance):
        return False
    return _blocks_pumpable(g, lasso.unroll(unrollings))


def enumerate_lassos(g: ColoredBuchiGraph, max_stem: int, max_loop: int) -> Iterable[Lasso]:
    """All lassos from the initial vertex, shortest first."""
    for total in range(1, max_stem + max_loop + 1):
        for path in _paths(g, total):
            last = set(g.edges[path[-1]])
            for start in range(max(0, total - max_loop), min(max_stem, total - 1) + 1):
                if path[start] in last:
                    yield Lasso(path, start)


def _paths(g: ColoredBuchiGraph, length: int):
    def go(path):
        if len(path) == length:
            yield tuple(path)
            return
        for w in g.edges[path[-1]]:
            path.append(w)
            yield from go(path)
            path.pop()
    yield from go([g.init])


def brute_force_pumpable(g: ColoredBuchiGraph, max_stem: int, max_loop: int) -> Lasso | None:
    """Exhaustive search for a pumpable accepting lasso within the bounds."""
    for lasso in enumerate_lassos(g, max_stem, max_loop):
        two = is_pumpable_accepting(g, lasso, 2)
        if two != is_pumpable_accepting(g, lasso, 3):
            raise AssertionError(f"unrolling sanity check failed on {lasso}")
        if two:
            return lasso
    return None


def spec_automaton(assumption: Formula, guarantee: Formula, props: Iterable[str],
                   r: str = "r", rp: str = "rp") -> NBA:
    """Automaton for executions whose guarantee coloring is violated while the
    assumption coloring holds."""
    for f in (assumption, guarantee):
        if not is_prompt_ltl(f):
            raise ColoringError("assumption and guarantee must be PROMPT-LTL formulas")
        if {r, rp} & atoms(f):
            raise ColoringError(f"color propositions {r!r}/{rp!r} occur in a formula")
    bad = conj(alt(rp), negate(rel_color(guarantee, rp)), colorize(assumption, r))
    return ltl_to_nba(bad, props=sorted(set(props) | {r, rp}))


def ag_counterexample(ts: TransitionSystem, assumption: Formula, guarantee: Formula,
                      r: str = "r", rp: str = "rp") -> Lasso | None:
    """A pumpable violating execution as a lasso of colored letters, if any."""
    system = set(ts.inputs) | set(ts.outputs)
    if {r, rp} & system:
        raise ColoringError("color propositions collide with system propositions")
    unknown = (atoms(assumption) | atoms(guarantee)) - system
    if unknown:
        raise ColoringError(f"formulas mention propositions outside the system: {sorted(unknown)}")
    spec = spec_automaton(assumption, guarantee, system, r, rp)
    lasso = pumpable_non_empty(build_colored_graph(ts, spec, r, rp))
    return None if lasso is None else witness_letters(ts, spec, lasso, r, rp)


def ag_model_check(ts: TransitionSystem, assumption: Formula, guarantee: Formula,
                   r: str = "r", rp: str = "rp") -> bool:
    """Whether every bound on the assumption admits a bound on the guarantee."""
    return ag_counterexample(ts, assumption, guarantee, r, rp) is None


def prompt_model_check(ts: TransitionSystem, formula: Formula, r: str = "r", rp: str = "rp") -> bool:
    return ag_model_check(ts, TRUE, formula, r, rp)


def witness_letters(ts: TransitionSystem, spec: NBA, lasso: Lasso, r: str = "r",
                    rp: str = "rp") -> Lasso:
    """Colored system letters along a path of the colored graph."""
    letters = []
    closed = lasso.path + (lasso.path[lasso.loop_start],)
    for (s, c, q), (s2, _, q2) in zip(closed, closed[1:]):
        colors = color_set(c, r, rp)
        for i in range(1 << len(ts.inputs)):
            letter = ts.labels[s] | letter_of(i, ts.inputs) | colors
            if ts.delta[s][i] == s2 and q2 in spec.step(q, letter):
                letters.append(letter)
                break
        else:
            raise ColoringError("lasso is not a path of the colored graph")
    return Lasso(tuple(letters), lasso.loop_start)


def ltl_counterexample(ts: TransitionSystem, formula: Formula) -> Lasso | None:
    """A lasso of system letters violating an LTL formula, if any."""
    if not is_ltl(formula):
        raise ColoringError("plain model checking needs an LTL formula")
    props = sorted(set(ts.inputs) | set(ts.outputs))
    unknown = atoms(formula) - set(props)
    if unknown:
        raise ColoringError(f"formula mentions propositions outside the system: {sorted(unknown)}")
    nba = ltl_to_nba(negate(formula), props)
    width = 1 << len(ts.inputs)

    def succ(node):
        s, q, _ = node
        out = []
        for i in range(width):
            letter = ts.labels[s] | letter_of(i, ts.inputs)
            for q2 in nba.step(q, letter):
                out.append((ts.delta[s][i], q2, i))
        return out

    lasso = buchi_non_empty((ts.init, nba.init, -1), succ,
                            [lambda node: nba.is_accepting(node[1])])
    if lasso is None:
        return None
    # node (s, q, i) was entered by reading input i; the letter read at s is on the next node
    path = lasso.path
    nxt = path[1:] + (path[lasso.loop_start],)
    letters = tuple(ts.labels[s] | letter_of(n[2], ts.inputs) for (s, _, _), n in zip(path, nxt))
    return Lasso(letters, lasso.loop_start)


def guarantee_bound(ts: TransitionSystem, assumption: Formula, guarantee: Formula, k: int,
                    max_bound: int) -> int | None:
    """Least ``l <= max_bound`` such that the assumption at bound ``k`` implies
    the guarantee at bound ``l`` on every execution of ``ts``."""
    phi = unfold_prompt(assumption, k)
    for l in range(max_bound + 1):
        if ltl_counterexample(ts, negate(conj(phi, negate(unfold_prompt(guarantee, l))))) is None:
            return l
    return None
