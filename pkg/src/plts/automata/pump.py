"""The pumping automaton and its composition with a specification automaton.

Colors are coded as two-bit integers: bit 0 is ``r``, bit 1 is ``r'``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Hashable, Iterable, Sequence

from plts.automata.nba import NBA, AutomatonError

R_BIT = 1
RP_BIT = 2
COLOR_CODES = range(4)

# pump states: ("s0",), ("s", v, x), ("s'", v, y), ("s''", z)
S0 = ("s0",)


def color_code(colors: Iterable[str], r: str, rp: str) -> int:
    colors = set(colors)
    return (R_BIT if r in colors else 0) | (RP_BIT if rp in colors else 0)


def color_set(code: int, r: str, rp: str) -> frozenset[str]:
    return frozenset(x for x, b in ((r, R_BIT), (rp, RP_BIT)) if code & b)


def pump_step(state: tuple, v: Hashable, x: int) -> tuple[tuple, ...]:
    """Successors of a pump state on the letter ``(v, x)``."""
    kind = state[0]
    if kind == "s0":
        return (("s", v, x),)
    if kind == "s":
        _, u, ux = state
        if (ux ^ x) & RP_BIT:
            return ()
        out = [state]
        if (v, x) != (u, ux):
            out.append(("s", v, x))
        if (ux ^ x) & R_BIT:
            out.append(("s'", u, x))
        return tuple(out)
    if kind == "s'":
        _, u, y = state
        if (y ^ x) & RP_BIT:
            return ()
        if v == u:
            return (("s''", y & RP_BIT),)
        return (state,)
    _, z = state
    if (z ^ x) & RP_BIT:
        return (("s", v, x),)
    return (state,)


@dataclass(frozen=True, eq=False)
class PumpAutomaton:
    """Nondeterministic safety automaton over ``vertices x 2^{r,r'}``.

    Between adjacent ``r'``-change points it guesses a vertex and its
    ``r``-value, waits for ``r`` to flip, then waits for the vertex to
    repeat before the next ``r'``-change.  Every state is accepting; a word
    is accepted iff some run is infinite.
    """

    vertices: tuple
    r: str = "r"
    rp: str = "rp"
    _index: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        if not self.vertices:
            raise AutomatonError("pump automaton needs at least one vertex")
        self._index.update({v: i for i, v in enumerate(self.vertices)})

    init = S0

    @property
    def states(self) -> list[tuple]:
        out = [S0]
        out += [("s", v, x) for v in self.vertices for x in COLOR_CODES]
        out += [("s'", v, y) for v in self.vertices for y in COLOR_CODES]
        out += [("s''", z) for z in (0, RP_BIT)]
        return out

    @property
    def size(self) -> int:
        return 1 + 8 * len(self.vertices) + 2

    def is_accepting(self, state) -> bool:
        return True

    def step(self, state: tuple, letter: tuple[Hashable, Iterable[str] | int]) -> tuple[tuple, ...]:
        v, colors = letter
        if v not in self._index:
            raise AutomatonError(f"unknown vertex {v!r}")
        x = colors if isinstance(colors, int) else color_code(colors, self.r, self.rp)
        return pump_step(state, v, x)

    def accepts(self, word: Sequence[tuple[Hashable, Iterable[str] | int]], loop_start: int) -> bool:
        """Membership of the lasso ``word[:loop_start] (word[loop_start:])^ω``."""
        from plts.graphs import is_nontrivial, tarjan
        n = len(word)
        if not 0 <= loop_start < n:
            raise AutomatonError("loop start out of range")

        def succ(node):
            i, s = node
            j = i + 1 if i + 1 < n else loop_start
            return [(j, t) for t in self.step(s, word[i])]

        return any(is_nontrivial(c, succ) for c in tarjan([(0, S0)], succ))


def build_n_pump(vertices: Iterable[Hashable], r: str = "r", rp: str = "rp") -> PumpAutomaton:
    return PumpAutomaton(tuple(sorted(set(vertices), key=repr)), r, rp)


@dataclass(frozen=True, eq=False)
class ComposedAutomaton:
    """Spec automaton running in lockstep with the pump automaton.

    Letters are pairs ``(σ, x)`` with ``σ`` a set of propositions and ``x``
    an implementation state.  The pump reads the vertex ``(x, q)`` together
    with the colors of ``σ``.  States are pairs ``(q, pump state)``,
    accepting when ``q`` is.
    """

    spec: NBA
    xs: tuple
    r: str = "r"
    rp: str = "rp"
    _rbit: int = field(default=0, repr=False, compare=False)
    _rpbit: int = field(default=0, repr=False, compare=False)

    def __post_init__(self):
        for c in (self.r, self.rp):
            if c not in self.spec.props:
                raise AutomatonError(f"specification alphabet lacks color {c!r}")
        object.__setattr__(self, "_rbit", 1 << self.spec.props.index(self.r))
        object.__setattr__(self, "_rpbit", 1 << self.spec.props.index(self.rp))

    @property
    def props(self) -> tuple[str, ...]:
        return self.spec.props

    @property
    def init(self) -> tuple:
        return (self.spec.init, S0)

    @property
    def pump(self) -> PumpAutomaton:
        return build_n_pump([(x, q) for x in self.xs for q in self.spec.states], self.r, self.rp)

    @property
    def size(self) -> int:
        return self.spec.size * (8 * len(self.xs) * self.spec.size + 3)

    def is_accepting(self, state) -> bool:
        return state[0] in self.spec.accepting

    def successors(self, state: tuple, m: int, x) -> tuple[tuple, ...]:
        """Successors on the letter with spec bitmask ``m`` at implementation state ``x``."""
        q, s = state
        code = (R_BIT if m & self._rbit else 0) | (RP_BIT if m & self._rpbit else 0)
        pumps = pump_step(s, (x, q), code)
        if not pumps:
            return ()
        return tuple((q2, s2) for q2 in self.spec.successors(q, m) for s2 in pumps)

    def step(self, state: tuple, letter: tuple[Iterable[str], Hashable]) -> tuple[tuple, ...]:
        sigma, x = letter
        return self.successors(state, self.spec.mask(sigma), x)


def compose_spec_pump(spec: NBA, xs: Iterable[Hashable], r: str = "r",
                      rp: str = "rp") -> ComposedAutomaton:
    return ComposedAutomaton(spec, tuple(xs), r, rp)
