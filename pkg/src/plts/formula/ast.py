"""Negation-normal-form syntax trees for PROMPT-LTL and PLTL."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator


@dataclass(frozen=True)
class Formula:
    def children(self) -> tuple["Formula", ...]:
        return ()

    def __str__(self) -> str:
        from plts.formula.printer import to_text

        return to_text(self)


@dataclass(frozen=True)
class TrueF(Formula):
    pass


@dataclass(frozen=True)
class FalseF(Formula):
    pass


@dataclass(frozen=True)
class Atom(Formula):
    name: str


@dataclass(frozen=True)
class NegAtom(Formula):
    name: str


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula

    def children(self):
        return (self.left, self.right)


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula

    def children(self):
        return (self.left, self.right)


@dataclass(frozen=True)
class Next(Formula):
    operand: Formula

    def children(self):
        return (self.operand,)


@dataclass(frozen=True)
class Until(Formula):
    left: Formula
    right: Formula

    def children(self):
        return (self.left, self.right)


@dataclass(frozen=True)
class Release(Formula):
    left: Formula
    right: Formula

    def children(self):
        return (self.left, self.right)


@dataclass(frozen=True)
class PromptF(Formula):
    operand: Formula

    def children(self):
        return (self.operand,)


@dataclass(frozen=True)
class BoundedF(Formula):
    var: str
    operand: Formula

    def children(self):
        return (self.operand,)


@dataclass(frozen=True)
class BoundedG(Formula):
    var: str
    operand: Formula

    def children(self):
        return (self.operand,)


TRUE = TrueF()
FALSE = FalseF()


def F(f: Formula) -> Formula:
    return Until(TRUE, f)


def G(f: Formula) -> Formula:
    return Release(FALSE, f)


def conj(*fs: Formula) -> Formula:
    if not fs:
        return TRUE
    out = fs[-1]
    for f in reversed(fs[:-1]):
        out = And(f, out)
    return out


def disj(*fs: Formula) -> Formula:
    if not fs:
        return FALSE
    out = fs[-1]
    for f in reversed(fs[:-1]):
        out = Or(f, out)
    return out


def subformulas(f: Formula) -> Iterator[Formula]:
    """Yield every distinct subformula once, children before parents."""
    seen: set[Formula] = set()
    stack: list[tuple[Formula, bool]] = [(f, False)]
    while stack:
        node, expanded = stack.pop()
        if node in seen:
            continue
        if expanded:
            seen.add(node)
            yield node
        else:
            stack.append((node, True))
            for child in node.children():
                if child not in seen:
                    stack.append((child, False))


def size(f: Formula) -> int:
    return sum(1 for _ in subformulas(f))


def atoms(f: Formula) -> frozenset[str]:
    return frozenset(
        g.name for g in subformulas(f) if isinstance(g, (Atom, NegAtom))
    )


def var_sets(f: Formula) -> tuple[frozenset[str], frozenset[str]]:
    """Variables of bounded eventualities and of bounded always operators."""
    var_f, var_g = set(), set()
    for g in subformulas(f):
        if isinstance(g, BoundedF):
            var_f.add(g.var)
        elif isinstance(g, BoundedG):
            var_g.add(g.var)
    return frozenset(var_f), frozenset(var_g)


def variables(f: Formula) -> frozenset[str]:
    var_f, var_g = var_sets(f)
    return var_f | var_g


def is_well_formed(f: Formula) -> bool:
    var_f, var_g = var_sets(f)
    return not (var_f & var_g)


def is_prompt_ltl(f: Formula) -> bool:
    return not any(isinstance(g, (BoundedF, BoundedG)) for g in subformulas(f))


def is_ltl(f: Formula) -> bool:
    return not any(
        isinstance(g, (PromptF, BoundedF, BoundedG)) for g in subformulas(f)
    )


def has_parameters(f: Formula) -> bool:
    return not is_ltl(f)


class NegationError(ValueError):
    pass


def negate(f: Formula) -> Formula:
    """NNF negation; only defined on formulas without parameterized operators."""
    if isinstance(f, TrueF):
        return FALSE
    if isinstance(f, FalseF):
        return TRUE
    if isinstance(f, Atom):
        return NegAtom(f.name)
    if isinstance(f, NegAtom):
        return Atom(f.name)
    if isinstance(f, And):
        return Or(negate(f.left), negate(f.right))
    if isinstance(f, Or):
        return And(negate(f.left), negate(f.right))
    if isinstance(f, Next):
        return Next(negate(f.operand))
    if isinstance(f, Until):
        return Release(negate(f.left), negate(f.right))
    if isinstance(f, Release):
        return Until(negate(f.left), negate(f.right))
    raise NegationError(
        f"negation over parameterized operator {type(f).__name__}"
    )
