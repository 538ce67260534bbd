from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable

Letter = frozenset


def _letters(seq: Iterable[Iterable[str]]) -> tuple[frozenset[str], ...]:
    return tuple(frozenset(x) for x in seq)


@dataclass(frozen=True)
class LassoWord:
    """Ultimately periodic word ``stem . loop^omega`` over sets of propositions.

    ``alphabet`` is optional; when given, every letter must be a subset of it
    and evaluation rejects formulas mentioning other propositions.
    """

    stem: tuple[frozenset[str], ...]
    loop: tuple[frozenset[str], ...]
    alphabet: frozenset[str] | None = None

    def __post_init__(self):
        object.__setattr__(self, "stem", _letters(self.stem))
        object.__setattr__(self, "loop", _letters(self.loop))
        if not self.loop:
            raise ValueError("loop of a lasso word must be nonempty")
        if self.alphabet is not None:
            alphabet = frozenset(self.alphabet)
            object.__setattr__(self, "alphabet", alphabet)
            for letter in self.stem + self.loop:
                if not letter <= alphabet:
                    raise ValueError(
                        f"letter {sorted(letter)} not over alphabet {sorted(alphabet)}")

    def __len__(self) -> int:
        return len(self.stem) + len(self.loop)

    @cached_property
    def letters(self) -> tuple[frozenset[str], ...]:
        """``stem + loop`` as one tuple, indexed like :meth:`successor`."""
        return self.stem + self.loop

    @cached_property
    def successors(self) -> tuple[int, ...]:
        n = len(self)
        return tuple(i + 1 if i + 1 < n else len(self.stem) for i in range(n))

    def successor(self, i: int) -> int:
        return i + 1 if i + 1 < len(self) else len(self.stem)

    def position(self, n: int) -> int:
        """Index in stem+loop of absolute position ``n`` of the infinite word."""
        if n < len(self.stem):
            return n
        return len(self.stem) + (n - len(self.stem)) % len(self.loop)

    def __getitem__(self, n: int) -> frozenset[str]:
        i = self.position(n)
        return self.stem[i] if i < len(self.stem) else self.loop[i - len(self.stem)]

    def prefix(self, length: int) -> list[frozenset[str]]:
        return [self[n] for n in range(length)]

    def propositions(self) -> frozenset[str]:
        out = frozenset().union(*self.stem, *self.loop)
        return out if self.alphabet is None else self.alphabet

    def project(self, props: Iterable[str]) -> "LassoWord":
        keep = frozenset(props)
        alphabet = None if self.alphabet is None else self.alphabet & keep
        return LassoWord(
            tuple(x & keep for x in self.stem),
            tuple(x & keep for x in self.loop),
            alphabet,
        )

    def erase(self, prop: str) -> "LassoWord":
        return self.project(self.propositions() - {prop})

    def canonical(self) -> "LassoWord":
        """Shortest stem and primitive loop describing the same infinite word."""
        loop = list(self.loop)
        n = len(loop)
        for d in range(1, n + 1):
            if n % d == 0 and loop == loop[:d] * (n // d):
                loop = loop[:d]
                break
        stem = list(self.stem)
        while stem and stem[-1] == loop[-1]:
            stem.pop()
            loop = [loop[-1]] + loop[:-1]
        return LassoWord(tuple(stem), tuple(loop), self.alphabet)

    def same_word(self, other: "LassoWord") -> bool:
        a, b = self.canonical(), other.canonical()
        return a.stem == b.stem and a.loop == b.loop

    def __str__(self) -> str:
        def fmt(xs):
            return " ".join("{" + ",".join(sorted(x)) + "}" for x in xs)

        return f"{fmt(self.stem)} ({fmt(self.loop)})^w".strip()


def lasso(stem: Iterable[Iterable[str]], loop: Iterable[Iterable[str]],
          alphabet: Iterable[str] | None = None) -> LassoWord:
    return LassoWord(_letters(stem), _letters(loop),
                     None if alphabet is None else frozenset(alphabet))
