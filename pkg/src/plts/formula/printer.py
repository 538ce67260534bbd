from __future__ import annotations

from plts.formula.ast import (
    And, Atom, BoundedF, BoundedG, FalseF, Formula, NegAtom, Next, Or,
    PromptF, Release, TrueF, Until,
)


def to_text(f: Formula) -> str:
    """Render a formula in the concrete syntax accepted by :func:`parse`."""
    if isinstance(f, TrueF):
        return "true"
    if isinstance(f, FalseF):
        return "false"
    if isinstance(f, Atom):
        return f.name
    if isinstance(f, NegAtom):
        return "!" + f.name
    if isinstance(f, And):
        return f"({to_text(f.left)} & {to_text(f.right)})"
    if isinstance(f, Or):
        return f"({to_text(f.left)} | {to_text(f.right)})"
    if isinstance(f, Next):
        return "X " + to_text(f.operand)
    if isinstance(f, Until):
        if isinstance(f.left, TrueF):
            return "F " + to_text(f.right)
        return f"({to_text(f.left)} U {to_text(f.right)})"
    if isinstance(f, Release):
        if isinstance(f.left, FalseF):
            return "G " + to_text(f.right)
        return f"({to_text(f.left)} R {to_text(f.right)})"
    if isinstance(f, PromptF):
        return "Fp " + to_text(f.operand)
    if isinstance(f, BoundedF):
        return f"F<={f.var} " + to_text(f.operand)
    if isinstance(f, BoundedG):
        return f"G<={f.var} " + to_text(f.operand)
    raise TypeError(f"not a formula: {f!r}")
