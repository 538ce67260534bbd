"""SMT-LIB v2 scripts and a one-shot solver subprocess driver."""

from __future__ import annotations

import shlex
import subprocess
import time
from dataclasses import dataclass, field
from typing import Iterable, Union


class SolverError(RuntimeError):
    pass


@dataclass
class Script:
    """Declarations and assertions in emission order, plus terms to read back."""

    logic: str = "QF_UFLIA"
    lines: list[str] = field(default_factory=list)
    queries: list[str] = field(default_factory=list)

    def comment(self, text: str) -> None:
        self.lines.append(f"; {text}")

    def declare(self, name: str, args: Iterable[str], sort: str) -> None:
        self.lines.append(f"(declare-fun {name} ({' '.join(args)}) {sort})")

    def add(self, formula: str) -> None:
        self.lines.append(f"(assert {formula})")

    def extend(self, other: "Script") -> None:
        self.lines.extend(other.lines)
        self.queries.extend(other.queries)

    def text(self, queries: bool = True) -> str:
        out = [f"(set-logic {self.logic})", *self.lines, "(check-sat)"]
        if queries and self.queries:
            out.append(f"(get-value ({' '.join(self.queries)}))")
        out.append("(exit)")
        return "\n".join(out) + "\n"


@dataclass(frozen=True)
class Sat:
    values: dict
    seconds: float = 0.0


@dataclass(frozen=True)
class Unsat:
    seconds: float = 0.0


@dataclass(frozen=True)
class Unknown:
    reason: str
    seconds: float = 0.0


Answer = Union[Sat, Unsat, Unknown]


def land(parts: list[str]) -> str:
    if not parts:
        return "true"
    return parts[0] if len(parts) == 1 else f"(and {' '.join(parts)})"


def tokenize_sexpr(text: str) -> list[str]:
    tokens, i = [], 0
    while i < len(text):
        c = text[i]
        if c.isspace():
            i += 1
        elif c in "()":
            tokens.append(c)
            i += 1
        elif c == ";":
            while i < len(text) and text[i] != "\n":
                i += 1
        elif c == "|":
            j = text.index("|", i + 1)
            tokens.append(text[i:j + 1])
            i = j + 1
        elif c == '"':
            j = i + 1
            while text[j] != '"' or text[j + 1:j + 2] == '"':
                j += 2 if text[j] == '"' else 1
            tokens.append(text[i:j + 1])
            i = j + 1
        else:
            j = i
            while j < len(text) and not text[j].isspace() and text[j] not in "();":
                j += 1
            tokens.append(text[i:j])
            i = j
    return tokens


def parse_sexprs(text: str) -> list:
    """Parse a sequence of s-expressions into nested lists of atoms."""
    stack: list[list] = [[]]
    for tok in tokenize_sexpr(text):
        if tok == "(":
            stack.append([])
        elif tok == ")":
            if len(stack) == 1:
                raise SolverError("unbalanced ')' in solver output")
            done = stack.pop()
            stack[-1].append(done)
        else:
            stack[-1].append(tok)
    if len(stack) != 1:
        raise SolverError("unbalanced '(' in solver output")
    return stack[0]


def to_text(sexpr) -> str:
    if isinstance(sexpr, list):
        return "(" + " ".join(to_text(x) for x in sexpr) + ")"
    return sexpr


def _value(sexpr):
    if sexpr == "true":
        return True
    if sexpr == "false":
        return False
    if isinstance(sexpr, str):
        try:
            return int(sexpr)
        except ValueError:
            raise SolverError(f"unsupported value {sexpr!r}") from None
    if len(sexpr) == 2 and sexpr[0] == "-":
        return -_value(sexpr[1])
    raise SolverError(f"unsupported value {to_text(sexpr)}")


def parse_answer(output: str, seconds: float = 0.0) -> Answer:
    exprs = parse_sexprs(output)
    if not exprs:
        raise SolverError("solver produced no answer")
    head = exprs[0]
    if head == "unsat":
        return Unsat(seconds)
    if head == "unknown":
        return Unknown("solver answered unknown", seconds)
    if head != "sat":
        raise SolverError(f"unexpected solver answer: {to_text(head)[:200]}")
    values = {}
    for block in exprs[1:]:
        if not isinstance(block, list) or (block and block[0] == "error"):
            raise SolverError(f"solver error: {to_text(block)[:200]}")
        for pair in block:
            if not isinstance(pair, list) or len(pair) != 2:
                raise SolverError(f"malformed get-value entry: {to_text(pair)[:200]}")
            values[to_text(pair[0])] = _value(pair[1])
    return Sat(values, seconds)


DEFAULT_SOLVER = "z3 -in"


def solve(script: Script | str, command: str = DEFAULT_SOLVER,
          timeout: float | None = None) -> Answer:
    """Run the solver once on the whole script and parse its answer."""
    text = script.text() if isinstance(script, Script) else script
    if "(check-sat)" not in text:
        text += "(check-sat)\n(exit)\n"
    argv = shlex.split(command)
    start = time.perf_counter()
    try:
        proc = subprocess.run(argv, input=text, capture_output=True, text=True, timeout=timeout)
    except FileNotFoundError as exc:
        raise SolverError(f"cannot start solver {argv[0]!r}") from exc
    except subprocess.TimeoutExpired:
        return Unknown("timeout", time.perf_counter() - start)
    seconds = time.perf_counter() - start
    if not proc.stdout.strip():
        raise SolverError(f"solver exited with status {proc.returncode}: {proc.stderr.strip()[:200]}")
    return parse_answer(proc.stdout, seconds)
