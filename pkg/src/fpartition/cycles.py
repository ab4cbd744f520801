"""Cycle and path searches in the underlying graph of a block."""

from __future__ import annotations

from collections import deque
from itertools import combinations
from typing import Iterable, Optional

from .digraph import Digraph


def _bfs_path(D: Digraph, allowed: set[int], s: int, t: int) -> Optional[list[int]]:
    prev = {s: s}
    queue = deque([s])
    while queue:
        x = queue.popleft()
        if x == t:
            path = [t]
            while path[-1] != s:
                path.append(prev[path[-1]])
            return path[::-1]
        for y in D.nbrs[x]:
            if y in allowed and y not in prev:
                prev[y] = x
                queue.append(y)
    return None


def _even_path(D: Digraph, allowed: set[int], s: int, t: int) -> Optional[list[int]]:
    """Some simple s-t path with an even number of edges, by exhaustive DFS."""
    path = [s]
    on_path = {s}
    iters = [iter(D.nbrs[s])]
    while iters:
        advanced = False
        for y in iters[-1]:
            if y not in allowed or y in on_path:
                continue
            if y == t:
                if len(path) % 2 == 0:
                    return path + [t]
                continue
            path.append(y)
            on_path.add(y)
            iters.append(iter(D.nbrs[y]))
            advanced = True
            break
        if not advanced:
            iters.pop()
            on_path.discard(path.pop())
    return None


def even_cycle_with_free_vertex(
    D: Digraph, vertices: Iterable[int]
) -> Optional[list[int]]:
    """Even cycle C of G(D[vertices]) listed so that C[0] lies on no chord.

    The returned list is in cyclic order; the only neighbours of ``C[0]`` on
    C are ``C[1]`` and ``C[-1]``. Chordless even cycles are tried first via
    shortest paths; otherwise simple paths of even length are enumerated.
    Returns None if no such cycle exists (blocks that are complete graphs or
    odd cycles).
    """
    vs = set(vertices)
    order = sorted(vs)
    nbrs = {v: [y for y in D.nbrs[v] if y in vs] for v in order}
    # shortest u-w paths avoiding the rest of N[v] give induced cycles
    for v in order:
        for u, w in combinations(nbrs[v], 2):
            if D.adjacent(u, w):
                continue
            allowed = vs - {v} - (set(nbrs[v]) - {u, w})
            path = _bfs_path(D, allowed, u, w)
            if path is not None and len(path) % 2 == 1:
                return [v] + path
    for v in order:
        for u, w in combinations(nbrs[v], 2):
            allowed = vs - {v} - (set(nbrs[v]) - {u, w})
            path = _even_path(D, allowed, u, w)
            if path is not None:
                return [v] + path
    return None


def fan_paths(
    D: Digraph, vertices: Iterable[int], source: int, targets: Iterable[int], k: int = 2
) -> Optional[list[list[int]]]:
    """k paths from ``source`` to distinct vertices of ``targets``.

    The paths share only ``source`` and meet ``targets`` only at their last
    vertex. Unit-capacity augmenting paths on the vertex-split graph.
    """
    vs = set(vertices)
    ts = set(targets)
    if source in ts:
        raise ValueError("source must not be a target")
    sink = ("sink", -1)
    src = ("out", source)
    cap: dict[tuple, dict[tuple, int]] = {}
    arcs: set[tuple[tuple, tuple]] = set()

    def add(a: tuple, b: tuple) -> None:
        cap.setdefault(a, {})[b] = 1
        cap.setdefault(b, {}).setdefault(a, 0)
        arcs.add((a, b))

    for x in sorted(vs):
        if x == source:
            continue
        if x in ts:
            add(("in", x), sink)
            continue
        add(("in", x), ("out", x))
        for y in D.nbrs[x]:
            if y in vs and y != source:
                add(("out", x), ("in", y))
    for y in D.nbrs[source]:
        if y in vs:
            add(src, ("in", y))

    for _ in range(k):
        prev: dict[tuple, Optional[tuple]] = {src: None}
        queue = deque([src])
        while queue and sink not in prev:
            a = queue.popleft()
            for b, c in cap.get(a, {}).items():
                if c > 0 and b not in prev:
                    prev[b] = a
                    queue.append(b)
        if sink not in prev:
            return None
        b = sink
        while prev[b] is not None:
            a = prev[b]
            cap[a][b] -= 1
            cap[b][a] += 1
            b = a

    def carries(a: tuple, b: tuple) -> bool:
        return (a, b) in arcs and cap[a][b] == 0

    # every vertex carries at most one unit, so following the flow is unambiguous
    paths = []
    for y in D.nbrs[source]:
        if y not in vs or not carries(src, ("in", y)):
            continue
        path = [source, y]
        while path[-1] not in ts:
            x = path[-1]
            path.append(next(z for z in D.nbrs[x] if carries(("out", x), ("in", z))))
        paths.append(path)
    return paths
