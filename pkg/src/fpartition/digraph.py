"""Digraphs without loops or parallel arcs, plus the structural queries the
solver needs: degrees, underlying graph, components and blocks.

Vertices are the integers ``0..n-1``. Most queries accept an optional
``vertices`` argument restricting them to the induced subdigraph on that set,
which lets the solver work on ``D - v`` or on a single block without
re-indexing anything.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Optional


class Digraph:
    """Immutable loop-free digraph; opposite arcs allowed, parallel arcs not."""

    __slots__ = ("n", "arcs", "succ", "pred", "nbrs", "labels")

    def __init__(
        self,
        n: int,
        arcs: Iterable[tuple[int, int]] = (),
        labels: Optional[Iterable[int]] = None,
    ) -> None:
        if n < 0:
            raise ValueError("vertex count must be non-negative")
        arc_set: set[tuple[int, int]] = set()
        for u, v in arcs:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"arc ({u}, {v}) has an endpoint outside 0..{n - 1}")
            if u == v:
                raise ValueError(f"loop at vertex {u}")
            if (u, v) in arc_set:
                raise ValueError(f"duplicate arc ({u}, {v})")
            arc_set.add((u, v))
        succ: list[list[int]] = [[] for _ in range(n)]
        pred: list[list[int]] = [[] for _ in range(n)]
        for u, v in arc_set:
            succ[u].append(v)
            pred[v].append(u)
        self.n = n
        self.arcs = frozenset(arc_set)
        self.succ = tuple(tuple(sorted(s)) for s in succ)
        self.pred = tuple(tuple(sorted(s)) for s in pred)
        self.nbrs = tuple(
            tuple(sorted(set(s) | set(t))) for s, t in zip(self.succ, self.pred)
        )
        self.labels = tuple(range(n)) if labels is None else tuple(labels)
        if len(self.labels) != n:
            raise ValueError("labels must have one entry per vertex")

    def __repr__(self) -> str:
        return f"Digraph({self.n}, {sorted(self.arcs)})"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Digraph):
            return NotImplemented
        return self.n == other.n and self.arcs == other.arcs

    def __hash__(self) -> int:
        return hash((self.n, self.arcs))

    def __len__(self) -> int:
        return self.n

    @property
    def vertices(self) -> range:
        return range(self.n)

    def has_arc(self, u: int, v: int) -> bool:
        return (u, v) in self.arcs

    def adjacent(self, u: int, v: int) -> bool:
        return (u, v) in self.arcs or (v, u) in self.arcs

    def out_degree(self, v: int, within: Optional[Iterable[int]] = None) -> int:
        if within is None:
            return len(self.succ[v])
        return sum(1 for w in self.succ[v] if w in within)

    def in_degree(self, v: int, within: Optional[Iterable[int]] = None) -> int:
        if within is None:
            return len(self.pred[v])
        return sum(1 for w in self.pred[v] if w in within)

    def max_degree(self) -> int:
        """max over v of max{d+(v), d-(v)}; 0 for the empty digraph."""
        return max(
            (max(len(s), len(t)) for s, t in zip(self.succ, self.pred)), default=0
        )

    def reverse(self) -> "Digraph":
        return Digraph(self.n, ((v, u) for u, v in self.arcs), self.labels)

    def is_bidirected(self, vertices: Optional[Iterable[int]] = None) -> bool:
        vs = _vertex_set(self, vertices)
        return all((v, u) in self.arcs for u, v in self.arcs if u in vs and v in vs)


# -- constructors used throughout tests and reductions -----------------------


def directed_cycle(n: int) -> Digraph:
    return Digraph(n, ((i, (i + 1) % n) for i in range(n)) if n >= 2 else ())


def bidirected(n: int, edges: Iterable[tuple[int, int]]) -> Digraph:
    arcs: set[tuple[int, int]] = set()
    for u, v in edges:
        arcs.add((u, v))
        arcs.add((v, u))
    return Digraph(n, arcs)


def bidirected_cycle(n: int) -> Digraph:
    if n == 2:
        return bidirected(2, [(0, 1)])
    return bidirected(n, ((i, (i + 1) % n) for i in range(n)) if n >= 3 else ())


def bidirected_complete(n: int) -> Digraph:
    return bidirected(n, ((i, j) for i in range(n) for j in range(i + 1, n)))


def disjoint_union(*graphs: Digraph) -> Digraph:
    arcs = []
    offset = 0
    for g in graphs:
        arcs.extend((u + offset, v + offset) for u, v in g.arcs)
        offset += g.n
    return Digraph(offset, arcs)


# -- derived views ------------------------------------------------------------


@dataclass(frozen=True)
class UnderlyingGraph:
    """Simple undirected graph G(D): {u, v} is an edge iff some arc joins them."""

    n: int
    adj: tuple[tuple[int, ...], ...]

    @property
    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in self.adj[u] if u < v]

    def degree(self, v: int) -> int:
        return len(self.adj[v])


def underlying_graph(D: Digraph) -> UnderlyingGraph:
    return UnderlyingGraph(D.n, D.nbrs)


def _vertex_set(D: Digraph, vertices: Optional[Iterable[int]]) -> frozenset[int]:
    if vertices is None:
        return frozenset(range(D.n))
    vs = frozenset(vertices)
    for v in vs:
        if not 0 <= v < D.n:
            raise ValueError(f"vertex {v} outside 0..{D.n - 1}")
    return vs


def induced_subdigraph(D: Digraph, X: Iterable[int]) -> Digraph:
    """D[X] re-indexed to 0..|X|-1 in ascending order of X.

    ``result.labels[i]`` is the label the i-th new vertex carried in ``D``, so
    nested restrictions keep pointing at the original vertices.
    """
    xs = sorted(_vertex_set(D, X))
    index = {v: i for i, v in enumerate(xs)}
    arcs = [(index[u], index[v]) for u, v in D.arcs if u in index and v in index]
    return Digraph(len(xs), arcs, [D.labels[v] for v in xs])


def components(D: Digraph, vertices: Optional[Iterable[int]] = None) -> list[frozenset[int]]:
    """Connected components of G(D[vertices]), ordered by smallest vertex."""
    vs = _vertex_set(D, vertices)
    seen: set[int] = set()
    out = []
    for s in sorted(vs):
        if s in seen:
            continue
        comp = {s}
        seen.add(s)
        queue = deque([s])
        while queue:
            x = queue.popleft()
            for y in D.nbrs[x]:
                if y in vs and y not in seen:
                    seen.add(y)
                    comp.add(y)
                    queue.append(y)
        out.append(frozenset(comp))
    return out


def is_connected(D: Digraph, vertices: Optional[Iterable[int]] = None) -> bool:
    return len(components(D, vertices)) == 1


def is_eulerian_vertex(D: Digraph, v: int, vertices: Optional[Iterable[int]] = None) -> bool:
    vs = None if vertices is None else _vertex_set(D, vertices)
    return D.out_degree(v, vs) == D.in_degree(v, vs)


def is_eulerian(D: Digraph, vertices: Optional[Iterable[int]] = None) -> bool:
    vs = _vertex_set(D, vertices)
    return all(D.out_degree(v, vs) == D.in_degree(v, vs) for v in vs)


@dataclass(frozen=True)
class BlockDecomposition:
    """Blocks of G(D) with the block/cut-vertex tree.

    ``blocks`` are ordered by their smallest vertex. An isolated vertex forms
    a block of its own.
    """

    blocks: tuple[frozenset[int], ...]
    cut_vertices: frozenset[int]
    blocks_of: dict[int, tuple[int, ...]] = field(compare=False)

    @property
    def block_tree(self) -> list[tuple[int, int]]:
        """Edges (block index, cut vertex) of the bipartite block-cut tree."""
        return [
            (b, c) for c in sorted(self.cut_vertices) for b in self.blocks_of[c]
        ]

    def cut_vertices_of(self, b: int) -> list[int]:
        return sorted(self.blocks[b] & self.cut_vertices)

    def end_blocks(self) -> list[int]:
        return [b for b in range(len(self.blocks)) if len(self.cut_vertices_of(b)) <= 1]


def block_decomposition(
    D: Digraph, vertices: Optional[Iterable[int]] = None
) -> BlockDecomposition:
    """Biconnected components of G(D[vertices]) by iterative Hopcroft-Tarjan."""
    vs = _vertex_set(D, vertices)
    disc: dict[int, int] = {}
    low: dict[int, int] = {}
    blocks: list[frozenset[int]] = []
    cuts: set[int] = set()
    counter = 0
    for root in sorted(vs):
        if root in disc:
            continue
        disc[root] = low[root] = counter
        counter += 1
        if not any(y in vs for y in D.nbrs[root]):
            blocks.append(frozenset([root]))
            continue
        root_children = 0
        edge_stack: list[tuple[int, int]] = []
        stack = [(root, -1, iter(D.nbrs[root]))]
        while stack:
            x, parent, it = stack[-1]
            advanced = False
            for y in it:
                if y not in vs or y == parent:
                    continue
                if y not in disc:
                    disc[y] = low[y] = counter
                    counter += 1
                    edge_stack.append((x, y))
                    stack.append((y, x, iter(D.nbrs[y])))
                    advanced = True
                    break
                if disc[y] < disc[x]:
                    edge_stack.append((x, y))
                    low[x] = min(low[x], disc[y])
            if advanced:
                continue
            stack.pop()
            if parent == -1:
                continue
            low[parent] = min(low[parent], low[x])
            if low[x] >= disc[parent]:
                comp: set[int] = set()
                while True:
                    e = edge_stack.pop()
                    comp.update(e)
                    if e == (parent, x):
                        break
                blocks.append(frozenset(comp))
                if parent == root:
                    root_children += 1
                else:
                    cuts.add(parent)
        if root_children >= 2:
            cuts.add(root)
    blocks.sort(key=lambda b: (min(b), sorted(b)))
    blocks_of: dict[int, list[int]] = {v: [] for v in vs}
    for i, b in enumerate(blocks):
        for v in b:
            blocks_of[v].append(i)
    return BlockDecomposition(
        tuple(blocks), frozenset(cuts), {v: tuple(bs) for v, bs in blocks_of.items()}
    )


def is_cycle(D: Digraph, vertices: Optional[Iterable[int]] = None) -> bool:
    """True iff G(D[vertices]) is a cycle (at least three vertices)."""
    vs = _vertex_set(D, vertices)
    if len(vs) < 3:
        return False
    if any(sum(1 for y in D.nbrs[x] if y in vs) != 2 for x in vs):
        return False
    return is_connected(D, vs)


def is_complete(D: Digraph, vertices: Optional[Iterable[int]] = None) -> bool:
    """True iff G(D[vertices]) is a complete graph."""
    vs = _vertex_set(D, vertices)
    k = len(vs)
    return all(sum(1 for y in D.nbrs[x] if y in vs) == k - 1 for x in vs)


def cycle_order(D: Digraph, vertices: Iterable[int]) -> list[int]:
    """Vertices of an underlying cycle in cyclic order, starting at the
    smallest vertex and continuing to its smaller neighbour."""
    vs = _vertex_set(D, vertices)
    start = min(vs)
    order = [start]
    prev, cur = start, min(y for y in D.nbrs[start] if y in vs)
    while cur != start:
        order.append(cur)
        nxt = [y for y in D.nbrs[cur] if y in vs and y != prev]
        prev, cur = cur, nxt[0]
    return order
