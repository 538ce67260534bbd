"""Exact satisfaction of PROMPT-LTL / PLTL formulas on lasso words."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Union

from plts.formula.ast import (
    And, Atom, BoundedF, BoundedG, FalseF, Formula, NegAtom, Next, Or,
    PromptF, Release, TrueF, Until, subformulas,
)
from plts.formula.words import LassoWord


class EvaluationError(ValueError):
    pass


@dataclass(frozen=True)
class Valuation:
    """Bound ``k`` of the prompt-eventually operator plus PLTL variable values."""

    bound: int = 0
    values: Mapping[str, int] = field(default_factory=dict)

    def __post_init__(self):
        if self.bound < 0 or any(v < 0 for v in self.values.values()):
            raise EvaluationError("valuations map to natural numbers")

    def __getitem__(self, var: str) -> int:
        try:
            return self.values[var]
        except KeyError:
            raise EvaluationError(f"unbound variable {var!r}") from None


ValuationLike = Union[int, Mapping[str, int], Valuation]


def as_valuation(v: ValuationLike) -> Valuation:
    if isinstance(v, Valuation):
        return v
    if isinstance(v, int):
        return Valuation(bound=v)
    return Valuation(values=dict(v))


def _scan(sub: list[bool], word: LassoWord, start: int, steps: int, want_any: bool) -> bool:
    # positions start .. start+steps; after len(word) steps nothing new is seen
    steps = min(steps, len(word))
    i = start
    for _ in range(steps + 1):
        if sub[i] == want_any:
            return want_any
        i = word.successors[i]
    return not want_any


def satisfaction_sets(word: LassoWord, formula: Formula,
                      valuation: ValuationLike = 0) -> dict[Formula, list[bool]]:
    """Truth value of every subformula at every index of ``stem + loop``."""
    val = as_valuation(valuation)
    n = len(word)
    succ = word.successors
    letters = word.letters
    subs = list(subformulas(formula))
    if word.alphabet is not None:
        for g in subs:
            if isinstance(g, (Atom, NegAtom)) and g.name not in word.alphabet:
                raise EvaluationError(f"unknown atom {g.name!r}")
    sat: dict[Formula, list[bool]] = {}
    for g in subs:
        if isinstance(g, TrueF):
            row = [True] * n
        elif isinstance(g, FalseF):
            row = [False] * n
        elif isinstance(g, Atom):
            row = [g.name in x for x in letters]
        elif isinstance(g, NegAtom):
            row = [g.name not in x for x in letters]
        elif isinstance(g, And):
            row = [a and b for a, b in zip(sat[g.left], sat[g.right])]
        elif isinstance(g, Or):
            row = [a or b for a, b in zip(sat[g.left], sat[g.right])]
        elif isinstance(g, Next):
            sub = sat[g.operand]
            row = [sub[succ[i]] for i in range(n)]
        elif isinstance(g, (Until, Release)):
            left, right = sat[g.left], sat[g.right]
            until = isinstance(g, Until)
            # least (U) / greatest (R) fixpoint; backward sweeps until stable
            row = [not until] * n
            changed = True
            while changed:
                changed = False
                for i in reversed(range(n)):
                    if until:
                        v = right[i] or (left[i] and row[succ[i]])
                    else:
                        v = right[i] and (left[i] or row[succ[i]])
                    if v != row[i]:
                        row[i] = v
                        changed = True
        elif isinstance(g, PromptF):
            sub = sat[g.operand]
            row = [_scan(sub, word, i, val.bound, True) for i in range(n)]
        elif isinstance(g, BoundedF):
            sub, k = sat[g.operand], val[g.var]
            row = [_scan(sub, word, i, k, True) for i in range(n)]
        elif isinstance(g, BoundedG):
            sub, k = sat[g.operand], val[g.var]
            row = [_scan(sub, word, i, k, False) for i in range(n)]
        else:
            raise TypeError(f"not a formula: {g!r}")
        sat[g] = row
    return sat


def evaluate(word: LassoWord, formula: Formula, valuation: ValuationLike = 0) -> bool:
    """Whether ``(word, 0, valuation)`` satisfies ``formula``.

    ``valuation`` is either the prompt bound ``k``, a PLTL variable valuation,
    or a :class:`Valuation` carrying both.
    """
    return satisfaction_sets(word, formula, valuation)[formula][0]


@dataclass(frozen=True)
class ColoringProperties:
    max_block: int | None
    min_block: int | None
    changes_infinitely: bool

    def is_bounded(self, k: int) -> bool:
        return self.max_block is not None and self.max_block <= k

    def is_spaced(self, k: int) -> bool:
        return self.changes_infinitely and self.min_block is not None and self.min_block >= k


def coloring_properties(word: LassoWord, r: str) -> ColoringProperties:
    """Maximal and minimal ``r``-block lengths of the infinite word."""
    loop_colors = {r in x for x in word.loop}
    changes_infinitely = len(loop_colors) == 2
    horizon = len(word.stem) + 2 * len(word.loop) + 1
    colors = [r in word[n] for n in range(horizon + 1)]
    changes = [0] + [n for n in range(1, horizon + 1) if colors[n] != colors[n - 1]]
    if not changes_infinitely:
        return ColoringProperties(None, None, False)
    # change points after the stem repeat with the loop, so blocks starting
    # before stem + loop + 1 cover every block shape; each ends within the horizon
    cutoff = len(word.stem) + len(word.loop) + 1
    lengths = [b - a for a, b in zip(changes, changes[1:]) if a < cutoff]
    return ColoringProperties(max(lengths), min(lengths), True)
