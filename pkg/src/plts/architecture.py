"""Architectures of distributed systems and information-fork detection."""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import combinations
from pathlib import Path
from typing import Iterable, Mapping

from plts.formula.parser import IDENT, KEYWORDS


class ArchitectureError(ValueError):
    pass


@dataclass(frozen=True)
class Architecture:
    """Environment plus system processes with their input/output propositions.

    ``processes`` lists the system processes in a fixed order; ``inputs`` and
    ``outputs`` are keyed by every process including the environment.
    """

    env: str
    processes: tuple[str, ...]
    inputs: Mapping[str, frozenset[str]]
    outputs: Mapping[str, frozenset[str]]

    def __post_init__(self):
        object.__setattr__(self, "processes", tuple(self.processes))
        names = (self.env,) + self.processes
        object.__setattr__(self, "inputs", {p: frozenset(self.inputs.get(p, ())) for p in names})
        object.__setattr__(self, "outputs", {p: frozenset(self.outputs.get(p, ())) for p in names})

    def __hash__(self):
        return hash((self.env, self.processes,
                     tuple(sorted((p, tuple(sorted(v))) for p, v in self.inputs.items())),
                     tuple(sorted((p, tuple(sorted(v))) for p, v in self.outputs.items()))))

    @property
    def all_processes(self) -> tuple[str, ...]:
        return (self.env,) + self.processes

    def propositions(self) -> frozenset[str]:
        return frozenset().union(*self.inputs.values(), *self.outputs.values())

    def system_outputs(self) -> frozenset[str]:
        return frozenset().union(*(self.outputs[p] for p in self.processes))

    def edge_label(self, q: str, p: str) -> frozenset[str]:
        return self.outputs[q] & self.inputs[p]

    @classmethod
    def build(cls, env_outputs: Iterable[str],
              processes: Mapping[str, tuple[Iterable[str], Iterable[str]]],
              env: str = "env") -> "Architecture":
        """``processes`` maps each system process to ``(inputs, outputs)``."""
        return cls(
            env=env,
            processes=tuple(processes),
            inputs={env: frozenset(), **{p: frozenset(io[0]) for p, io in processes.items()}},
            outputs={env: frozenset(env_outputs), **{p: frozenset(io[1]) for p, io in processes.items()}},
        )

    def to_json(self) -> dict:
        return {
            "env": {"name": self.env, "outputs": sorted(self.outputs[self.env])},
            "processes": [
                {"name": p, "inputs": sorted(self.inputs[p]), "outputs": sorted(self.outputs[p])}
                for p in self.processes
            ],
        }

    @classmethod
    def from_json(cls, doc: dict) -> "Architecture":
        try:
            env = doc["env"]["name"]
            procs = {p["name"]: (p.get("inputs", []), p.get("outputs", [])) for p in doc["processes"]}
            env_outputs = doc["env"].get("outputs", [])
        except (KeyError, TypeError) as e:
            raise ArchitectureError(f"malformed architecture document: {e}") from None
        if len(procs) != len(doc["processes"]):
            raise ArchitectureError("duplicate process names")
        for name in [env, *procs]:
            if not isinstance(name, str) or not name:
                raise ArchitectureError(f"bad process name {name!r}")
        for prop in [*env_outputs, *(x for io in procs.values() for part in io for x in part)]:
            if not IDENT.fullmatch(prop) or prop in KEYWORDS:
                raise ArchitectureError(f"bad proposition name {prop!r}")
        return cls.build(env_outputs, procs, env=env)

    @classmethod
    def load(cls, path: str | Path) -> "Architecture":
        return cls.from_json(json.loads(Path(path).read_text(encoding="utf-8")))


def violations(a: Architecture) -> list[str]:
    problems = []
    if a.env in a.processes:
        problems.append("environment listed as a system process")
    if a.inputs[a.env]:
        problems.append("environment has inputs")
    owners: dict[str, str] = {}
    for p in a.all_processes:
        for x in sorted(a.outputs[p]):
            if x in owners:
                problems.append(f"outputs not disjoint: {x!r} output by {owners[x]!r} and {p!r}")
            else:
                owners[x] = p
    for p in a.processes:
        for x in sorted(a.inputs[p] - set(owners)):
            problems.append(f"dangling input: {x!r} read by {p!r} is output by no process")
    return problems


def validate(a: Architecture) -> None:
    problems = violations(a)
    if problems:
        raise ArchitectureError("; ".join(problems))


def _fresh(a: Architecture, names: Iterable[str], props: Iterable[str]) -> None:
    taken_procs = set(a.all_processes)
    for n in names:
        if n in taken_procs:
            raise ArchitectureError(f"process name {n!r} already used")
    used = a.propositions()
    for x in props:
        if x in used:
            raise ArchitectureError(f"proposition {x!r} already used")


def color_extend(a: Architecture, r: str, process: str | None = None) -> Architecture:
    """Add a process without inputs whose only output is the color ``r``."""
    process = process or f"p_{r}"
    _fresh(a, [process], [r])
    return Architecture(
        a.env,
        a.processes + (process,),
        {**a.inputs, process: frozenset()},
        {**a.outputs, process: frozenset({r})},
    )


def sched_name(p: str) -> str:
    return f"sched_{p}"


def async_lift(a: Architecture) -> Architecture:
    """Let the environment emit one scheduling bit per system process."""
    sched = {p: sched_name(p) for p in a.processes}
    _fresh(a, [], sched.values())
    inputs = dict(a.inputs)
    for p, s in sched.items():
        inputs[p] = inputs[p] | {s}
    outputs = dict(a.outputs)
    outputs[a.env] = outputs[a.env] | frozenset(sched.values())
    return Architecture(a.env, a.processes, inputs, outputs)


@dataclass(frozen=True)
class InformationFork:
    procs: frozenset[str]
    variables: frozenset[str]
    p: str
    p2: str

    def __str__(self):
        procs = "{" + ", ".join(sorted(self.procs)) + "}"
        vs = "{" + ", ".join(sorted(self.variables)) + "}"
        return f"({procs}, {vs}, {self.p}, {self.p2})"


def _rooted(a: Architecture, procs: frozenset[str], variables: frozenset[str]) -> bool:
    if a.env not in procs:
        return False
    seen = {a.env}
    stack = [a.env]
    while stack:
        q = stack.pop()
        for t in procs - seen:
            if a.edge_label(q, t) & variables:
                seen.add(t)
                stack.append(t)
    return seen == procs


def _feeds(a: Architecture, procs: Iterable[str], p: str, other: str) -> bool:
    # some q in procs has an edge to p carrying a variable p_other cannot read
    return any(not (a.edge_label(q, p) <= a.inputs[other]) for q in procs)


def is_information_fork(a: Architecture, fork: InformationFork) -> bool:
    """Check a candidate tuple directly against the definition."""
    system = set(a.processes)
    p, p2 = fork.p, fork.p2
    if p == p2 or p not in system or p2 not in system:
        return False
    if p in fork.procs or p2 in fork.procs or not fork.procs <= set(a.all_processes):
        return False
    if fork.variables & (a.inputs[p] | a.inputs[p2]):
        return False
    return (_rooted(a, fork.procs, fork.variables)
            and _feeds(a, fork.procs, p, p2) and _feeds(a, fork.procs, p2, p))


def find_information_fork(a: Architecture) -> InformationFork | None:
    """Search process subsets by increasing size; return the first fork found."""
    validate(a)
    others = [p for p in a.all_processes if p != a.env]
    # the fork conditions are symmetric in p and p2
    for p, p2 in combinations(a.processes, 2):
        rest = [q for q in others if q not in (p, p2)]
        blocked = a.inputs[p] | a.inputs[p2]
        for size in range(len(rest) + 1):
            for extra in combinations(rest, size):
                procs = frozenset((a.env, *extra))
                if not (_feeds(a, procs, p, p2) and _feeds(a, procs, p2, p)):
                    continue
                internal = frozenset().union(
                    *(a.edge_label(q, t) for q in procs for t in procs if q != t))
                variables = internal - blocked
                # rootedness is monotone in the variable set: try the largest,
                # then drop variables that are not needed
                if not _rooted(a, procs, variables):
                    continue
                for x in sorted(variables):
                    if _rooted(a, procs, variables - {x}):
                        variables = variables - {x}
                return InformationFork(procs, variables, p, p2)
    return None


def is_weakly_ordered(a: Architecture) -> bool:
    return find_information_fork(a) is None


A1 = Architecture.build(["a", "b"], {"p1": (["a"], ["c"]), "p2": (["b"], ["d"])})
A2 = Architecture.build(["a"], {"p1": (["a"], ["b"]), "p2": (["b"], ["c"])})
