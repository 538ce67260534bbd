"""Size bounds for the processes of an architecture."""

from __future__ import annotations

from dataclasses import dataclass
from math import prod
from typing import Iterator, Mapping, Sequence


@dataclass(frozen=True)
class BoundFamily:
    """A positive bound ``b_p`` per process, kept in architecture order."""

    items: tuple[tuple[str, int], ...]

    def __post_init__(self):
        object.__setattr__(self, "items", tuple((p, int(b)) for p, b in self.items))
        if any(b < 1 for _, b in self.items):
            raise ValueError("process bounds must be positive")

    @classmethod
    def of(cls, bounds: Mapping[str, int] | Sequence[tuple[str, int]]) -> "BoundFamily":
        return cls(tuple(bounds.items()) if isinstance(bounds, Mapping) else tuple(bounds))

    def __getitem__(self, p: str) -> int:
        for q, b in self.items:
            if q == p:
                return b
        raise KeyError(p)

    @property
    def processes(self) -> tuple[str, ...]:
        return tuple(p for p, _ in self.items)

    @property
    def values(self) -> tuple[int, ...]:
        return tuple(b for _, b in self.items)

    @property
    def total(self) -> int:
        return prod(self.values)

    def weight(self, p: str) -> int:
        """Mixed-radix weight of ``p``; the first process is most significant."""
        i = self.processes.index(p)
        return prod(self.values[i + 1:])

    def digits(self, s: int) -> dict[str, int]:
        """Local states (1-based) of the global state ``s`` (1-based)."""
        return {p: (s - 1) // self.weight(p) % b + 1 for p, b in self.items}

    def compose(self, digits: Mapping[str, int]) -> int:
        return 1 + sum((digits[p] - 1) * self.weight(p) for p in self.processes)

    def __str__(self) -> str:
        return "(" + ",".join(str(b) for b in self.values) + ")"


def _compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    if parts == 1:
        yield (total,)
        return
    for first in range(1, total - parts + 2):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def enumerate_bounds(processes: Sequence[str], cap_total: int,
                     cap_each: int | None = None) -> list[BoundFamily]:
    """All families with sum at most ``cap_total``: ascending sum, then lexicographic."""
    processes = tuple(processes)
    if cap_total < len(processes):
        raise ValueError(f"cap {cap_total} is below the number of processes {len(processes)}")
    out = []
    for total in range(len(processes), cap_total + 1):
        for values in _compositions(total, len(processes)):
            if cap_each is None or max(values) <= cap_each:
                out.append(BoundFamily(tuple(zip(processes, values))))
    return out
