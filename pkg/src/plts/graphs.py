"""Graph helpers over implicit successor functions."""

from __future__ import annotations

from collections import deque
from typing import Callable, Hashable, Iterable, Iterator, TypeVar

V = TypeVar("V", bound=Hashable)
Successors = Callable[[V], Iterable[V]]


def tarjan(roots: Iterable[V], succ: Successors) -> list[list[V]]:
    """Strongly connected components reachable from ``roots``.

    Components come out in reverse topological order (sinks first).
    """
    return list(iter_sccs(roots, succ))


def iter_sccs(roots: Iterable[V], succ: Successors) -> Iterator[list[V]]:
    """Lazy variant of :func:`tarjan`: each component is yielded once complete."""
    index: dict = {}
    low: dict = {}
    on_stack: set = set()
    stack: list = []
    counter = 0
    for root in roots:
        if root in index:
            continue
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        work = [(root, iter(succ(root)))]
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if w not in index:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(succ(w))))
                    advanced = True
                    break
                if w in on_stack and index[w] < low[v]:
                    low[v] = index[w]
            if advanced:
                continue
            work.pop()
            if work:
                u = work[-1][0]
                if low[v] < low[u]:
                    low[u] = low[v]
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.append(w)
                    if w == v:
                        break
                yield comp


def is_nontrivial(comp: list[V], succ: Successors) -> bool:
    """Whether a component contains a cycle (more than one vertex or a self-loop)."""
    return len(comp) > 1 or comp[0] in set(succ(comp[0]))


def reachable(roots: Iterable[V], succ: Successors) -> set[V]:
    seen = set(roots)
    stack = list(seen)
    while stack:
        v = stack.pop()
        for w in succ(v):
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return seen


def shortest_path(sources: Iterable[V], targets: Callable[[V], bool], succ: Successors,
                  within: Callable[[V], bool] | None = None) -> list[V] | None:
    """BFS path from some source to a vertex satisfying ``targets``.

    The path has at least one edge when ``targets`` rejects every source only;
    sources themselves count as targets.
    """
    parent: dict = {}
    queue: deque = deque()
    for s in sources:
        if s not in parent:
            parent[s] = None
            queue.append(s)
    while queue:
        v = queue.popleft()
        if targets(v):
            path = [v]
            while parent[path[-1]] is not None:
                path.append(parent[path[-1]])
            return path[::-1]
        for w in succ(v):
            if w not in parent and (within is None or within(w)):
                parent[w] = v
                queue.append(w)
    return None


def path_between(src: V, dst: V, succ: Successors,
                 within: Callable[[V], bool] | None = None) -> list[V] | None:
    """Nonempty path (at least one edge) from ``src`` to ``dst``."""
    firsts = [w for w in succ(src) if within is None or within(w)]
    tail = shortest_path(firsts, lambda v: v == dst, succ, within)
    return None if tail is None else [src] + tail
