"""Formulas of PROMPT-LTL and PLTL: syntax, semantics, rewrites."""

from plts.formula.ast import (
    FALSE, TRUE, And, Atom, BoundedF, BoundedG, F, FalseF, Formula, G,
    NegAtom, NegationError, Next, Or, PromptF, Release, TrueF, Until, atoms,
    conj, disj, has_parameters, is_ltl, is_prompt_ltl, is_well_formed,
    negate, size, subformulas, var_sets, variables,
)
from plts.formula.parser import FormulaSyntaxError, parse
from plts.formula.printer import to_text
from plts.formula.rewrite import (
    RewriteError, alt, colorize, pltl_to_prompt, rel_color, unfold_prompt,
)
from plts.formula.semantics import (
    ColoringProperties, EvaluationError, Valuation, coloring_properties,
    evaluate, satisfaction_sets,
)
from plts.formula.words import LassoWord, lasso

__all__ = [name for name in dir() if not name.startswith("_")]
