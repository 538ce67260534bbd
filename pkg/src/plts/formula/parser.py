"""Recursive-descent parser for the concrete formula syntax.

Precedence, tightest first: unary operators, ``U``/``R`` (right
associative), ``&``, ``|``, ``->`` (right associative).  General negation is
accepted and pushed to the atoms; it may not reach a parameterized operator.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from plts.formula.ast import (
    FALSE, TRUE, And, Atom, BoundedF, BoundedG, Formula, NegAtom, Next, Or,
    PromptF, Release, Until,
)

IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
KEYWORDS = {"X", "F", "G", "U", "R", "Fp", "true", "false"}
# stacked prefix operators written without spaces, e.g. "GFp a" or "GF a"
_CLUSTER = re.compile(r"(?:Fp|F|G|X)+")
_CLUSTER_PART = re.compile(r"Fp|F|G|X")


class FormulaSyntaxError(ValueError):
    def __init__(self, message: str, position: int | None = None):
        self.position = position
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    pos: int


def _operand_word(text: str) -> bool:
    m = IDENT.match(text)
    return m is not None and m.group() not in ("U", "R")


def tokenize(text: str) -> list[Token]:
    tokens = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if text.startswith("->", i):
            tokens.append(Token("->", "->", i))
            i += 2
            continue
        if ch in "!()&|":
            tokens.append(Token(ch, ch, i))
            i += 1
            continue
        m = IDENT.match(text, i)
        if m is None:
            raise FormulaSyntaxError(f"unexpected character {ch!r}", i)
        word = m.group()
        if word in ("F", "G") and text.startswith("<=", m.end()):
            v = IDENT.match(text, m.end() + 2)
            if v is None or v.group() in KEYWORDS:
                raise FormulaSyntaxError(
                    "expected variable after '<='", m.end() + 2)
            tokens.append(Token(word + "<=", v.group(), i))
            i = v.end()
            continue
        rest = text[m.end():].lstrip()
        if (word not in KEYWORDS and _CLUSTER.fullmatch(word)
                and rest[:1] and (rest[0] in "(!" or _operand_word(rest))):
            for part in _CLUSTER_PART.finditer(word):
                tokens.append(Token(part.group(), part.group(), i + part.start()))
        else:
            tokens.append(Token(word if word in KEYWORDS else "ident", word, i))
        i = m.end()
    tokens.append(Token("eof", "", len(text)))
    return tokens


# Raw trees are nested tuples (op, pos, *args); negation is still explicit.

class _Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def take(self, kind: str) -> Token:
        if self.tok.kind != kind:
            want = "end of input" if kind == "eof" else repr(kind)
            got = self.tok.text or "end of input"
            raise FormulaSyntaxError(f"expected {want}, got {got!r}", self.tok.pos)
        t = self.tok
        self.i += 1
        return t

    def implication(self):
        left = self.disjunction()
        if self.tok.kind == "->":
            pos = self.take("->").pos
            return ("->", pos, left, self.implication())
        return left

    def disjunction(self):
        left = self.conjunction()
        while self.tok.kind == "|":
            pos = self.take("|").pos
            left = ("|", pos, left, self.conjunction())
        return left

    def conjunction(self):
        left = self.temporal()
        while self.tok.kind == "&":
            pos = self.take("&").pos
            left = ("&", pos, left, self.temporal())
        return left

    def temporal(self):
        left = self.unary()
        if self.tok.kind in ("U", "R"):
            t = self.take(self.tok.kind)
            return (t.kind, t.pos, left, self.temporal())
        return left

    def unary(self):
        t = self.tok
        if t.kind in ("!", "X", "F", "G", "Fp"):
            self.i += 1
            return (t.kind, t.pos, self.unary())
        if t.kind in ("F<=", "G<="):
            self.i += 1
            return (t.kind, t.pos, t.text, self.unary())
        return self.primary()

    def primary(self):
        t = self.tok
        if t.kind == "ident":
            self.i += 1
            return ("atom", t.pos, t.text)
        if t.kind in ("true", "false"):
            self.i += 1
            return (t.kind, t.pos)
        if t.kind == "(":
            self.i += 1
            inner = self.implication()
            self.take(")")
            return inner
        raise FormulaSyntaxError(
            f"unexpected {t.text or 'end of input'!r}", t.pos)


def _parameterized(raw) -> bool:
    op = raw[0]
    if op in ("Fp", "F<=", "G<="):
        return True
    return any(_parameterized(a) for a in raw[2:] if isinstance(a, tuple))


def _nnf(raw, negated: bool) -> Formula:
    op, pos = raw[0], raw[1]
    if op == "atom":
        return NegAtom(raw[2]) if negated else Atom(raw[2])
    if op == "true":
        return FALSE if negated else TRUE
    if op == "false":
        return TRUE if negated else FALSE
    if op == "!":
        return _nnf(raw[2], not negated)
    if op in ("&", "|"):
        left, right = _nnf(raw[2], negated), _nnf(raw[3], negated)
        return Or(left, right) if (op == "&") == negated else And(left, right)
    if op == "->":
        if _parameterized(raw[2]):
            raise FormulaSyntaxError("non-negatable antecedent", pos)
        # a -> b  ==  !a | b
        left, right = _nnf(raw[2], not negated), _nnf(raw[3], negated)
        return And(left, right) if negated else Or(left, right)
    if op == "X":
        return Next(_nnf(raw[2], negated))
    if op == "F":
        body = _nnf(raw[2], negated)
        return Release(FALSE, body) if negated else Until(TRUE, body)
    if op == "G":
        body = _nnf(raw[2], negated)
        return Until(TRUE, body) if negated else Release(FALSE, body)
    if op in ("U", "R"):
        left, right = _nnf(raw[2], negated), _nnf(raw[3], negated)
        return Release(left, right) if (op == "U") == negated else Until(left, right)
    if negated:
        raise FormulaSyntaxError("negation over parameterized operator", pos)
    if op == "Fp":
        return PromptF(_nnf(raw[2], False))
    if op == "F<=":
        return BoundedF(raw[2], _nnf(raw[3], False))
    if op == "G<=":
        return BoundedG(raw[2], _nnf(raw[3], False))
    raise AssertionError(op)


def parse(text: str) -> Formula:
    p = _Parser(text)
    raw = p.implication()
    p.take("eof")
    return _nnf(raw, False)
