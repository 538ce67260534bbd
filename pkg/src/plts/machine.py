"""Finite transition systems as representations of finite-state strategies."""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import reduce
from itertools import product
from pathlib import Path
from typing import Iterable, Sequence

from plts.formula.words import LassoWord


class MachineError(ValueError):
    pass


def mask_of(letter: Iterable[str], props: Sequence[str]) -> int:
    letter = set(letter)
    return sum(1 << i for i, x in enumerate(props) if x in letter)


def letter_of(mask: int, props: Sequence[str]) -> frozenset[str]:
    return frozenset(x for i, x in enumerate(props) if mask >> i & 1)


def all_letters(props: Sequence[str]) -> list[frozenset[str]]:
    return [letter_of(m, props) for m in range(1 << len(props))]


@dataclass(frozen=True)
class TransitionSystem:
    """A ``2^outputs``-labeled ``2^inputs``-transition system.

    States are ``0 .. size-1``; ``delta[s][m]`` is the successor of ``s`` on
    the input letter with bitmask ``m`` over the sorted ``inputs``.
    """

    inputs: tuple[str, ...]
    outputs: tuple[str, ...]
    delta: tuple[tuple[int, ...], ...]
    labels: tuple[frozenset[str], ...]
    init: int = 0

    def __post_init__(self):
        object.__setattr__(self, "inputs", tuple(sorted(set(self.inputs))))
        object.__setattr__(self, "outputs", tuple(sorted(set(self.outputs))))
        object.__setattr__(self, "delta", tuple(tuple(row) for row in self.delta))
        object.__setattr__(self, "labels", tuple(frozenset(x) for x in self.labels))
        if set(self.inputs) & set(self.outputs):
            raise MachineError("inputs and outputs overlap")
        n = len(self.labels)
        if n == 0 or len(self.delta) != n:
            raise MachineError("need one delta row and one label per state")
        if not 0 <= self.init < n:
            raise MachineError("initial state out of range")
        width = 1 << len(self.inputs)
        for s, row in enumerate(self.delta):
            if len(row) != width:
                raise MachineError(f"delta of state {s} is not total over {width} letters")
            if any(not 0 <= t < n for t in row):
                raise MachineError(f"delta of state {s} leaves the state space")
        outs = set(self.outputs)
        for s, lab in enumerate(self.labels):
            if not lab <= outs:
                raise MachineError(f"label of state {s} uses non-output propositions")

    @property
    def size(self) -> int:
        return len(self.labels)

    @property
    def states(self) -> range:
        return range(self.size)

    def mask(self, letter: Iterable[str]) -> int:
        """Bitmask of ``letter`` projected onto the inputs."""
        return mask_of(letter, self.inputs)

    def step(self, s: int, letter: Iterable[str]) -> int:
        return self.delta[s][self.mask(letter)]

    def run(self, inputs: Iterable[Iterable[str]]) -> int:
        s = self.init
        for letter in inputs:
            s = self.step(s, letter)
        return s

    def reachable(self) -> set[int]:
        seen = {self.init}
        stack = [self.init]
        while stack:
            s = stack.pop()
            for t in self.delta[s]:
                if t not in seen:
                    seen.add(t)
                    stack.append(t)
        return seen

    def trim(self) -> "TransitionSystem":
        """Restrict to reachable states, renumbered in breadth-first order."""
        order = [self.init]
        index = {self.init: 0}
        for s in order:
            for t in self.delta[s]:
                if t not in index:
                    index[t] = len(order)
                    order.append(t)
        return TransitionSystem(
            self.inputs, self.outputs,
            tuple(tuple(index[t] for t in self.delta[s]) for s in order),
            tuple(self.labels[s] for s in order), 0)

    def to_json(self) -> dict:
        return {
            "inputs": list(self.inputs),
            "outputs": list(self.outputs),
            "states": [{"id": s, "label": sorted(self.labels[s])} for s in self.states],
            "init": self.init,
            "delta": [
                {"from": s, "on": sorted(letter_of(m, self.inputs)), "to": t}
                for s in self.states for m, t in enumerate(self.delta[s])
            ],
        }

    @classmethod
    def from_json(cls, doc: dict) -> "TransitionSystem":
        try:
            inputs = tuple(sorted(doc["inputs"]))
            outputs = tuple(sorted(doc["outputs"]))
            ids = [st["id"] for st in doc["states"]]
            labels = [frozenset(st.get("label", [])) for st in doc["states"]]
            init = doc["init"]
            entries = doc["delta"]
        except (KeyError, TypeError) as e:
            raise MachineError(f"malformed transition system document: {e}") from None
        if len(set(ids)) != len(ids):
            raise MachineError("duplicate state ids")
        index = {sid: i for i, sid in enumerate(ids)}
        if init not in index:
            raise MachineError(f"initial state {init!r} is not declared")
        width = 1 << len(inputs)
        table: list[list[int | None]] = [[None] * width for _ in ids]
        for e in entries:
            if e["from"] not in index or e["to"] not in index:
                raise MachineError(f"delta entry {e} refers to an undeclared state")
            on = set(e.get("on", []))
            if not on <= set(inputs):
                raise MachineError(f"delta entry {e} reads non-input propositions")
            s, m = index[e["from"]], mask_of(on, inputs)
            if table[s][m] is not None:
                raise MachineError(f"duplicate delta entry for state {e['from']} on {sorted(on)}")
            table[s][m] = index[e["to"]]
        for s, row in enumerate(table):
            if None in row:
                raise MachineError(f"delta is not total at state {ids[s]}")
        return cls(inputs, outputs, tuple(tuple(r) for r in table), tuple(labels), index[init])

    @classmethod
    def load(cls, path: str | Path) -> "TransitionSystem":
        return cls.from_json(json.loads(Path(path).read_text(encoding="utf-8")))

    def dump(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps(self.to_json(), indent=2) + "\n", encoding="utf-8")


def run_output(ts: TransitionSystem, prefix: Iterable[Iterable[str]]) -> frozenset[str]:
    """Output of the generated strategy after reading ``prefix``."""
    return ts.labels[ts.run(prefix)]


def constant(outputs: Iterable[str], label: Iterable[str], inputs: Iterable[str] = ()) -> TransitionSystem:
    inputs = tuple(sorted(set(inputs)))
    return TransitionSystem(inputs, tuple(outputs), ((0,) * (1 << len(inputs)),), (frozenset(label),))


def widen(ts: TransitionSystem, extra: Iterable[str]) -> TransitionSystem:
    extra = set(extra)
    if extra & set(ts.inputs):
        raise MachineError(f"widening propositions {sorted(extra & set(ts.inputs))} already inputs")
    inputs = tuple(sorted(set(ts.inputs) | extra))
    proj = [ts.mask(letter_of(m, inputs)) for m in range(1 << len(inputs))]
    delta = tuple(tuple(row[p] for p in proj) for row in ts.delta)
    return TransitionSystem(inputs, ts.outputs, delta, ts.labels, ts.init)


def distributed_product(ts1: TransitionSystem, ts2: TransitionSystem) -> TransitionSystem:
    """Synchronous product; state ``(s1, s2)`` is numbered ``s1 * |S2| + s2``."""
    if set(ts1.outputs) & set(ts2.outputs):
        raise MachineError(f"outputs overlap: {sorted(set(ts1.outputs) & set(ts2.outputs))}")
    inputs = tuple(sorted(set(ts1.inputs) | set(ts2.inputs)))
    outputs = tuple(sorted(set(ts1.outputs) | set(ts2.outputs)))
    # inputs that one component reads but the other produces are not inputs of the product
    inputs = tuple(x for x in inputs if x not in outputs)
    n2 = ts2.size
    width = 1 << len(inputs)
    delta, labels = [], []
    for s1, s2 in product(ts1.states, ts2.states):
        row = []
        for m in range(width):
            letter = letter_of(m, inputs)
            full1 = letter | ts2.labels[s2]
            full2 = letter | ts1.labels[s1]
            row.append(ts1.step(s1, full1) * n2 + ts2.step(s2, full2))
        delta.append(tuple(row))
        labels.append(ts1.labels[s1] | ts2.labels[s2])
    return TransitionSystem(inputs, outputs, tuple(delta), tuple(labels), ts1.init * n2 + ts2.init)


def product_of(systems: Sequence[TransitionSystem]) -> TransitionSystem:
    return reduce(distributed_product, systems)


def respects_scheduling(ts: TransitionSystem, sched: str) -> bool:
    """Every reachable state is frozen on letters where ``sched`` is absent."""
    if sched not in ts.inputs:
        raise MachineError(f"{sched!r} is not an input")
    bit = 1 << ts.inputs.index(sched)
    return all(ts.delta[s][m] == s
               for s in ts.reachable() for m in range(1 << len(ts.inputs)) if not m & bit)


def trace(ts: TransitionSystem, word: LassoWord) -> LassoWord:
    """The labeled path of ``ts`` on an input lasso, itself as a lasso."""
    alphabet = frozenset(ts.inputs) | frozenset(ts.outputs)
    letters: list[frozenset[str]] = []
    seen: dict[tuple[int, int], int] = {}
    s, i = ts.init, 0
    while True:
        if i >= len(word.stem):
            key = (i, s)
            if key in seen:
                start = seen[key]
                return LassoWord(tuple(letters[:start]), tuple(letters[start:]), alphabet)
            seen[key] = len(letters)
        inp = word[i] & frozenset(ts.inputs)
        letters.append(ts.labels[s] | inp)
        s = ts.delta[s][ts.mask(inp)]
        i = word.successor(i)


def input_lassos(props: Sequence[str], max_stem: int, max_loop: int) -> Iterable[LassoWord]:
    letters = all_letters(tuple(sorted(props)))
    for n_stem in range(max_stem + 1):
        for stem in product(letters, repeat=n_stem):
            for n_loop in range(1, max_loop + 1):
                for loop in product(letters, repeat=n_loop):
                    yield LassoWord(stem, loop)


def traces(ts: TransitionSystem, max_stem: int, max_loop: int) -> frozenset[LassoWord]:
    """All traces on input lassos within the bounds, in canonical form."""
    return frozenset(trace(ts, w).canonical()
                     for w in input_lassos(ts.inputs, max_stem, max_loop))
