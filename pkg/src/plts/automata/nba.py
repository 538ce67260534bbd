"""Nondeterministic Büchi automata and the tableau translation from LTL."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

from plts.formula.ast import (
    TRUE, And, Atom, FalseF, Formula, NegAtom, Next, Or, Release, TrueF, Until,
    atoms, is_ltl, subformulas,
)
from plts.formula.printer import to_text
from plts.formula.words import LassoWord
from plts.graphs import is_nontrivial, iter_sccs, reachable, tarjan


class AutomatonError(ValueError):
    pass


Edge = tuple[int, int, int]  # (required-true mask, required-false mask, target)


@dataclass(frozen=True, eq=False)
class NBA:
    """State-based Büchi automaton over letters ``2^props``.

    Transitions are guarded by cubes: an edge ``(pos, neg, t)`` is enabled
    on a letter with bitmask ``m`` iff ``m & pos == pos`` and ``m & neg == 0``.
    A safety automaton is the special case where every state accepts.
    """

    props: tuple[str, ...]
    edges: tuple[tuple[Edge, ...], ...]
    init: int
    accepting: frozenset[int]
    _succ_cache: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def size(self) -> int:
        return len(self.edges)

    @property
    def states(self) -> range:
        return range(self.size)

    def mask(self, letter: Iterable[str]) -> int:
        letter = set(letter)
        return sum(1 << i for i, x in enumerate(self.props) if x in letter)

    def is_accepting(self, q: int) -> bool:
        return q in self.accepting

    def successors(self, q: int, m: int) -> tuple[int, ...]:
        key = (q, m)
        hit = self._succ_cache.get(key)
        if hit is None:
            hit = tuple(sorted({t for pos, neg, t in self.edges[q]
                                if m & pos == pos and not m & neg}))
            self._succ_cache[key] = hit
        return hit

    def step(self, q: int, letter: Iterable[str]) -> tuple[int, ...]:
        return self.successors(q, self.mask(letter))

    def targets(self, q: int) -> set[int]:
        return {t for _, _, t in self.edges[q]}

    def is_empty(self) -> bool:
        for comp in tarjan([self.init], self.targets):
            if is_nontrivial(comp, self.targets) and self.accepting & set(comp):
                return False
        return True

    def to_dot(self) -> str:
        lines = ["digraph nba {", '  init [shape=point];', f"  init -> {self.init};"]
        for q in self.states:
            shape = "doublecircle" if q in self.accepting else "circle"
            lines.append(f"  {q} [shape={shape}];")
            for pos, neg, t in self.edges[q]:
                lits = [x for i, x in enumerate(self.props) if pos >> i & 1]
                lits += ["!" + x for i, x in enumerate(self.props) if neg >> i & 1]
                lines.append(f'  {q} -> {t} [label="{" & ".join(lits) or "true"}"];')
        lines.append("}")
        return "\n".join(lines)


Option = tuple[frozenset, frozenset]  # (next obligations, postponed untils)


def _minimal(options: Iterable[Option]) -> frozenset[Option]:
    """Antichain of options; a choice with more obligations and more
    postponed untils than another one can never help a run."""
    kept: list[Option] = []
    for o in sorted(set(options), key=lambda o: (len(o[0]) + len(o[1]), _okey(o))):
        if not any(k[0] <= o[0] and k[1] <= o[1] for k in kept):
            kept.append(o)
    return frozenset(kept)


def _okey(o: Option) -> tuple:
    return (sorted(map(_key, o[0])), sorted(map(_key, o[1])))


@lru_cache(maxsize=None)
def _key(f: Formula) -> str:
    return to_text(f)


_NOTHING: Option = (frozenset(), frozenset())


def _join(xs: frozenset[Option], ys: frozenset[Option]) -> frozenset[Option]:
    return _minimal((a | c, b | d) for a, b in xs for c, d in ys)


class _Tableau:
    """Per-letter expansion of obligation sets, memoized on (formula, letter)."""

    def __init__(self, bit: dict[str, int]):
        self.bit = bit
        self.memo: dict[tuple[Formula, int], frozenset[Option]] = {}

    def options(self, f: Formula, m: int) -> frozenset[Option]:
        key = (f, m)
        hit = self.memo.get(key)
        if hit is None:
            hit = self.memo[key] = self._options(f, m)
        return hit

    def _options(self, f: Formula, m: int) -> frozenset[Option]:
        if isinstance(f, TrueF):
            return frozenset({_NOTHING})
        if isinstance(f, FalseF):
            return frozenset()
        if isinstance(f, Atom):
            return frozenset({_NOTHING}) if m & self.bit[f.name] else frozenset()
        if isinstance(f, NegAtom):
            return frozenset() if m & self.bit[f.name] else frozenset({_NOTHING})
        if isinstance(f, And):
            return _join(self.options(f.left, m), self.options(f.right, m))
        if isinstance(f, Or):
            return _minimal(self.options(f.left, m) | self.options(f.right, m))
        if isinstance(f, Next):
            return frozenset({(frozenset({f.operand}), frozenset())})
        if isinstance(f, Until):
            later = (frozenset({f}), frozenset({f}))
            return _minimal(self.options(f.right, m)
                            | _join(self.options(f.left, m), frozenset({later})))
        if isinstance(f, Release):
            later = (frozenset({f}), frozenset())
            now = _join(self.options(f.left, m), self.options(f.right, m))
            return _minimal(now | _join(self.options(f.right, m), frozenset({later})))
        raise AutomatonError(f"parameterized operator {type(f).__name__} in LTL translation")

    def successors(self, obligations: frozenset[Formula], m: int) -> frozenset[Option]:
        acc = frozenset({_NOTHING})
        for f in sorted(obligations, key=_key):
            acc = _join(acc, self.options(f, m))
            if not acc:
                break
        return acc


def ltl_to_nba(formula: Formula, props: Sequence[str] | None = None,
               simplify: bool = False) -> NBA:
    """Tableau translation of an LTL formula into a Büchi automaton.

    States of the generalized automaton are sets of obligations for the next
    letter, generated on the fly from the initial set ``{formula}``; every
    until contributes one acceptance set, checked on transitions, and the
    result is degeneralized with a counter.  Edges are full cubes over the
    atoms of the formula.  ``simplify`` additionally trims states without
    accepting continuations and merges bisimilar states.
    """
    if not is_ltl(formula):
        raise AutomatonError("formula contains prompt or parameterized operators")
    used = sorted(atoms(formula))
    props = tuple(sorted(set(props) if props is not None else used))
    missing = set(used) - set(props)
    if missing:
        raise AutomatonError(f"alphabet lacks propositions {sorted(missing)}")
    bit = {x: 1 << i for i, x in enumerate(used)}
    full = {x: 1 << props.index(x) for x in used}
    untils = sorted((g for g in subformulas(formula) if isinstance(g, Until)), key=_key)
    n_acc = len(untils)
    tableau = _Tableau(bit)

    def cube(m: int) -> tuple[int, int]:
        pos = sum(full[x] for x in used if m & bit[x])
        return pos, sum(full.values()) & ~pos

    # generalized automaton, explored breadth-first for deterministic numbering
    start = frozenset({formula}) - {TRUE}
    gstates = {start: 0}
    glist = [start]
    gedges: list[list[tuple[int, int, int, frozenset[int]]]] = []
    for obligations in glist:
        row = []
        for m in range(1 << len(used)):
            pos, neg = cube(m)
            for nxt, postponed in sorted(tableau.successors(obligations, m), key=_okey):
                nxt = nxt - {TRUE}
                if nxt not in gstates:
                    gstates[nxt] = len(glist)
                    glist.append(nxt)
                marks = frozenset(i for i, u in enumerate(untils) if u not in postponed)
                row.append((pos, neg, gstates[nxt], marks))
        gedges.append(row)

    # degeneralization: counter c in 0..n_acc, accepting when c == n_acc
    top = n_acc
    dstates = {(0, 0): 0}
    dlist = [(0, 0)]
    dedges: list[list[Edge]] = []
    for g, c in dlist:
        row = []
        base = 0 if c == top else c
        for pos, neg, t, marks in gedges[g]:
            nc = base
            while nc < top and nc in marks:
                nc += 1
            key = (t, nc)
            if key not in dstates:
                dstates[key] = len(dlist)
                dlist.append(key)
            row.append((pos, neg, dstates[key]))
        dedges.append(row)
    accepting = frozenset(i for i, (_, c) in enumerate(dlist) if c == top)
    nba = NBA(props, tuple(tuple(sorted(set(r))) for r in dedges), 0, accepting)
    return simplify_nba(nba) if simplify else nba


def _renumber(nba: NBA, keep: Iterable[int], rep: dict[int, int] | None = None) -> NBA:
    """Restrict to ``keep`` (mapping states via ``rep``) with BFS numbering."""
    keep = set(keep)
    rep = rep or {}

    def r(q):
        return rep.get(q, q)

    index = {r(nba.init): 0}
    order = [r(nba.init)]
    rows = []
    for q in order:
        row = set()
        for pos, neg, t in nba.edges[q]:
            t = r(t)
            if t not in keep:
                continue
            if t not in index:
                index[t] = len(order)
                order.append(t)
            row.add((pos, neg, index[t]))
        rows.append(tuple(sorted(row)))
    accepting = frozenset(index[q] for q in order if q in nba.accepting)
    return NBA(nba.props, tuple(rows), 0, accepting)


def simplify_nba(nba: NBA) -> NBA:
    """Language-preserving cleanup: trim useless states, merge bisimilar ones."""
    succ = nba.targets
    good: set[int] = set()
    for comp in tarjan([nba.init], succ):
        if is_nontrivial(comp, succ) and nba.accepting & set(comp):
            good.update(comp)
    preds: dict[int, set[int]] = {q: set() for q in nba.states}
    for q in nba.states:
        for t in succ(q):
            preds[t].add(q)
    useful = reachable(good, lambda q: preds[q])
    if nba.init not in useful:
        return NBA(nba.props, ((),), 0, frozenset())
    trimmed = _renumber(nba, useful)

    # forward bisimulation by partition refinement
    cls = {q: int(q in trimmed.accepting) for q in trimmed.states}
    while True:
        sigs = {q: (cls[q], tuple(sorted({(p, n, cls[t]) for p, n, t in trimmed.edges[q]})))
                for q in trimmed.states}
        numbering: dict = {}
        new = {q: numbering.setdefault(sigs[q], len(numbering)) for q in trimmed.states}
        if len(numbering) == len(set(cls.values())):
            break
        cls = new
    rep: dict[int, int] = {}
    first: dict[int, int] = {}
    for q in trimmed.states:
        rep[q] = first.setdefault(cls[q], q)
    return _renumber(trimmed, set(rep.values()), rep)


def lasso_product(nba: NBA, word: LassoWord) -> Iterator[tuple[int, int]]:
    """Nodes ``(position, state)`` of the product with a lasso, for inspection."""
    return iter(reachable([(0, nba.init)], lambda v: [
        (word.successor(v[0]), t) for t in nba.step(v[1], word[v[0]])]))


def nba_accepts(nba: NBA, word: LassoWord) -> bool:
    """Membership of an ultimately periodic word: search for an accepting cycle."""
    masks = [nba.mask(x) for x in word.letters]
    nxt = word.successors

    def succ(v):
        i, q = v
        j = nxt[i]
        return [(j, t) for t in nba.successors(q, masks[i])]

    for comp in iter_sccs([(0, nba.init)], succ):
        if is_nontrivial(comp, succ) and any(q in nba.accepting for _, q in comp):
            return True
    return False
