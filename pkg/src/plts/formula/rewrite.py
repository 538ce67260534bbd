"""Alternating-color relativization and PLTL parameter elimination."""

from __future__ import annotations

from functools import lru_cache

from plts.formula.ast import (
    And, Atom, BoundedF, BoundedG, Formula, G, F, NegAtom, Next, Or,
    PromptF, Release, Until, atoms, is_prompt_ltl, is_well_formed,
)


class RewriteError(ValueError):
    pass


def alt(r: str) -> Formula:
    """``GF r & GF !r``: the color changes infinitely often."""
    return And(G(F(Atom(r))), G(F(NegAtom(r))))


def _within_one_change(r: str, body: Formula) -> Formula:
    pos, neg = Atom(r), NegAtom(r)
    # (r -> r U (!r U body)) & (!r -> !r U (r U body))
    return And(
        Or(neg, Until(pos, Until(neg, body))),
        Or(pos, Until(neg, Until(pos, body))),
    )


def rel_color(formula: Formula, r: str) -> Formula:
    """Replace every prompt eventuality by "within at most one r-change"."""
    if not is_prompt_ltl(formula):
        raise RewriteError("relativization needs a PROMPT-LTL formula")
    if r in atoms(formula):
        raise RewriteError(f"color {r!r} collides with an atom of the formula")

    @lru_cache(maxsize=None)
    def go(f: Formula) -> Formula:
        if isinstance(f, PromptF):
            return _within_one_change(r, go(f.operand))
        if isinstance(f, (And, Or, Until, Release)):
            return type(f)(go(f.left), go(f.right))
        if isinstance(f, Next):
            return Next(go(f.operand))
        return f

    return go(formula)


def colorize(formula: Formula, r: str) -> Formula:
    return And(rel_color(formula, r), alt(r))


def pltl_to_prompt(formula: Formula) -> Formula:
    """Bounded eventualities become prompt ones; bounded always operators vanish."""
    if not is_well_formed(formula):
        raise RewriteError("formula is not well-formed: a variable parameterizes both F and G")

    @lru_cache(maxsize=None)
    def go(f: Formula) -> Formula:
        if isinstance(f, BoundedF):
            return PromptF(go(f.operand))
        if isinstance(f, BoundedG):
            return go(f.operand)
        if isinstance(f, PromptF):
            return PromptF(go(f.operand))
        if isinstance(f, (And, Or, Until, Release)):
            return type(f)(go(f.left), go(f.right))
        if isinstance(f, Next):
            return Next(go(f.operand))
        return f

    return go(formula)


def unfold_prompt(formula: Formula, k: int) -> Formula:
    """LTL formula equivalent to ``formula`` with every prompt eventuality bounded by ``k``."""
    if k < 0:
        raise RewriteError("bound must be non-negative")
    if not is_prompt_ltl(formula):
        raise RewriteError("unfolding needs a PROMPT-LTL formula")

    @lru_cache(maxsize=None)
    def go(f: Formula) -> Formula:
        if isinstance(f, PromptF):
            body = go(f.operand)
            out = body
            for _ in range(k):
                out = Or(body, Next(out))
            return out
        if isinstance(f, (And, Or, Until, Release)):
            return type(f)(go(f.left), go(f.right))
        if isinstance(f, Next):
            return Next(go(f.operand))
        return f

    return go(formula)
