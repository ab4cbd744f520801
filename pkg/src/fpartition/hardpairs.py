"""Hard pairs: recognising the (M)/(K)/(C) block types, building and checking
certificates for merged hard pairs, and generating random hard pairs."""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterable, Mapping, Optional, Sequence

from .digraph import (
    Digraph,
    _vertex_set,
    block_decomposition,
    components,
    is_complete,
    is_cycle,
)

Vector = tuple[int, ...]
# Anything indexable by vertex: a VectorFunction, a list, or a dict.
VectorMap = Mapping[int, Sequence[int]] | Sequence[Sequence[int]]


@dataclass(frozen=True)
class BlockType:
    """Type of a hard block.

    ``params`` holds ``(j,)`` for M, ``(n_1, ..., n_p)`` for K and ``(k, l)``
    for C, with class indices counted from 0.
    """

    kind: str
    params: tuple[int, ...]

    def __str__(self) -> str:
        if self.kind == "K":
            return f"K{self.params}"
        return f"{self.kind}{tuple(i + 1 for i in self.params)}"


@dataclass(frozen=True)
class CertificateBlock:
    vertices: tuple[int, ...]
    values: tuple[Vector, ...]
    type: BlockType

    @property
    def f_B(self) -> dict[int, Vector]:
        return dict(zip(self.vertices, self.values))


@dataclass(frozen=True)
class HardPairCertificate:
    """Leaves (block, f_B, type) and merge edges (cut vertex, block, block)."""

    p: int
    blocks: tuple[CertificateBlock, ...]
    merges: tuple[tuple[int, int, int], ...]

    @property
    def vertices(self) -> frozenset[int]:
        return frozenset(v for b in self.blocks for v in b.vertices)


@dataclass(frozen=True)
class CertificateCheck:
    ok: bool
    message: str = ""

    def __bool__(self) -> bool:
        return self.ok


def _degrees(D: Digraph, v: int, vs: frozenset[int]) -> tuple[int, int]:
    return D.out_degree(v, vs), D.in_degree(v, vs)


def check_block_type(
    D: Digraph, g: VectorMap, vertices: Optional[Iterable[int]] = None
) -> Optional[BlockType]:
    """Type of the hard pair (D[vertices], g) if it is one of M, K, C.

    Precedence M > K > C when several patterns fit.
    """
    vs = _vertex_set(D, vertices)
    if not vs:
        return None
    order = sorted(vs)
    try:
        vecs = {v: tuple(g[v]) for v in order}
    except (KeyError, IndexError):
        raise ValueError("function is not defined on every block vertex") from None
    p = len(vecs[order[0]])
    if any(len(x) != p for x in vecs.values()):
        raise ValueError("inconsistent vector lengths")

    degs = {v: _degrees(D, v, vs) for v in order}
    eulerian = all(a == b for a, b in degs.values())

    # (M): one colour carries the whole (Eulerian) degree.
    if eulerian:
        j: Optional[int] = None
        ok = True
        for v in order:
            d = degs[v][0]
            support = [i for i, x in enumerate(vecs[v]) if x]
            if d == 0:
                if support:
                    ok = False
                    break
                continue
            if len(support) != 1 or vecs[v][support[0]] != d or (j is not None and support[0] != j):
                ok = False
                break
            j = support[0]
        if ok:
            return BlockType("M", (0 if j is None else j,))

    first = vecs[order[0]]
    constant = all(vecs[v] == first for v in order)
    if not constant or not D.is_bidirected(vs):
        return None

    # (K): bidirected complete graph with constant f summing to |B| - 1.
    if is_complete(D, vs):
        if sum(first) == len(vs) - 1 and sum(1 for x in first if x) >= 2:
            return BlockType("K", first)

    # (C): bidirected odd cycle with f the indicator of two classes.
    if len(vs) % 2 == 1 and is_cycle(D, vs):
        support = [i for i, x in enumerate(first) if x]
        if len(support) == 2 and all(first[i] == 1 for i in support):
            return BlockType("C", tuple(support))
    return None


def _candidate_cut_values(
    D: Digraph, block: frozenset[int], cut: int, f: Mapping[int, Vector]
) -> list[Vector]:
    """Possible f_B(cut) implied by the non-cut vertices of an end-block."""
    others = sorted(block - {cut})
    p = len(f[cut])
    out: list[Vector] = []
    # M: all others carry their degree on a single coordinate j.
    supports = {i for w in others for i, x in enumerate(f[w]) if x}
    if len(supports) == 1:
        (j,) = supports
        dplus, dminus = _degrees(D, cut, block)
        if dplus == dminus:
            out.append(tuple(dplus if i == j else 0 for i in range(p)))
    # K and C: f is constant on the block.
    vals = {f[w] for w in others}
    if len(vals) == 1:
        (vec,) = vals
        if vec not in out:
            out.append(vec)
    return out


def _merge_edges(blocks: Sequence[frozenset[int]] | Sequence[Sequence[int]]) -> tuple[tuple[int, int, int], ...]:
    by_vertex: dict[int, list[int]] = {}
    for i, b in enumerate(blocks):
        for v in b:
            by_vertex.setdefault(v, []).append(i)
    merges = []
    for v in sorted(by_vertex):
        ids = by_vertex[v]
        merges.extend((v, ids[0], other) for other in ids[1:])
    return tuple(merges)


def make_certificate(
    p: int, leaves: Iterable[tuple[Iterable[int], Mapping[int, Sequence[int]], BlockType]]
) -> HardPairCertificate:
    """Assemble a certificate; block order is by smallest vertex."""
    blocks = []
    for vs, g, t in leaves:
        order = tuple(sorted(vs))
        blocks.append(CertificateBlock(order, tuple(tuple(g[v]) for v in order), t))
    blocks.sort(key=lambda b: (b.vertices[0], b.vertices))
    return HardPairCertificate(p, tuple(blocks), _merge_edges([b.vertices for b in blocks]))


def recognize_hard_pair(
    D: Digraph, f: VectorMap, vertices: Optional[Iterable[int]] = None
) -> Optional[HardPairCertificate]:
    """Certificate for (D[vertices], f) if it is a hard pair, else None.

    Detaches end-blocks one at a time (the one holding the smallest vertex
    first), inferring f_B at the cut vertex from the block's type.
    """
    vs = _vertex_set(D, vertices)
    if len(components(D, vs)) != 1:
        raise ValueError("hard pairs are defined for connected digraphs")
    fcur: dict[int, Vector] = {v: tuple(f[v]) for v in vs}
    p = len(next(iter(fcur.values())))
    remaining = set(vs)
    leaves = []
    while True:
        bd = block_decomposition(D, remaining)
        if len(bd.blocks) == 1:
            t = check_block_type(D, fcur, remaining)
            if t is None:
                return None
            leaves.append((frozenset(remaining), dict(fcur), t))
            break
        ends = bd.end_blocks()
        b = min(ends, key=lambda i: min(bd.blocks[i]))
        block = bd.blocks[b]
        (cut,) = bd.cut_vertices_of(b)
        for cand in _candidate_cut_values(D, block, cut, fcur):
            if any(c > x for c, x in zip(cand, fcur[cut])):
                continue
            g = {w: fcur[w] for w in block}
            g[cut] = cand
            t = check_block_type(D, g, block)
            if t is not None:
                break
        else:
            return None
        leaves.append((block, g, t))
        remaining -= block - {cut}
        fcur = {w: fcur[w] for w in remaining}
        fcur[cut] = tuple(x - c for x, c in zip(fcur[cut], cand))
    return make_certificate(p, leaves)


def validate_certificate(
    D: Digraph, f: VectorMap, cert: HardPairCertificate
) -> CertificateCheck:
    """Independently re-check a certificate against (D, f).

    The certificate's blocks must be exactly the blocks of a connected
    component of D, each leaf must have its recorded type, the per-block
    functions must add up to f, and the merge edges must form a tree over the
    blocks through shared cut vertices.
    """
    if not cert.blocks:
        return CertificateCheck(False, "certificate has no blocks")
    us = cert.vertices
    for v in us:
        if not 0 <= v < D.n:
            return CertificateCheck(False, f"vertex {v} not in digraph")
        if any(w not in us for w in D.nbrs[v]):
            return CertificateCheck(False, f"vertex {v} has neighbours outside the certificate")
    if len(components(D, us)) != 1:
        return CertificateCheck(False, "certificate vertices are not connected")
    bd = block_decomposition(D, us)
    declared = [frozenset(b.vertices) for b in cert.blocks]
    if len(set(declared)) != len(declared) or set(declared) != set(bd.blocks):
        return CertificateCheck(False, "blocks differ from the block decomposition")

    totals: dict[int, list[int]] = {v: [0] * cert.p for v in us}
    for idx, blk in enumerate(cert.blocks):
        if len(blk.values) != len(blk.vertices):
            return CertificateCheck(False, f"block {idx}: f_B not defined on every vertex")
        for vec in blk.values:
            if len(vec) != cert.p or any(x < 0 for x in vec):
                return CertificateCheck(False, f"block {idx}: malformed f_B vector {vec}")
        t = check_block_type(D, blk.f_B, blk.vertices)
        if t != blk.type:
            return CertificateCheck(False, f"block {idx}: recorded type {blk.type}, found {t}")
        for v, vec in zip(blk.vertices, blk.values):
            acc = totals[v]
            for i, x in enumerate(vec):
                acc[i] += x
    for v in sorted(us):
        if tuple(totals[v]) != tuple(f[v]):
            return CertificateCheck(
                False, f"vertex {v}: block functions sum to {tuple(totals[v])}, f is {tuple(f[v])}"
            )

    k = len(cert.blocks)
    if len(cert.merges) != k - 1:
        return CertificateCheck(False, f"expected {k - 1} merge edges, got {len(cert.merges)}")
    parent = list(range(k))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for c, a, b in cert.merges:
        if not (0 <= a < k and 0 <= b < k) or a == b:
            return CertificateCheck(False, f"merge ({c}, {a}, {b}) names invalid blocks")
        if c not in bd.cut_vertices or c not in declared[a] or c not in declared[b]:
            return CertificateCheck(False, f"merge ({c}, {a}, {b}) is not at a shared cut vertex")
        ra, rb = find(a), find(b)
        if ra == rb:
            return CertificateCheck(False, "merge edges contain a cycle")
        parent[ra] = rb
    return CertificateCheck(True)


# -- random hard pairs -------------------------------------------------------


def _random_eulerian_block(rng: random.Random, size: int) -> set[tuple[int, int]]:
    """Hamiltonian directed cycle plus a few arc-disjoint extra cycles."""
    order = list(range(size))
    rng.shuffle(order)
    arcs = {(order[i], order[(i + 1) % size]) for i in range(size)}
    for _ in range(rng.randint(0, 2) if size >= 3 else 0):
        length = rng.randint(2, size)
        cyc = rng.sample(range(size), length)
        extra = {(cyc[i], cyc[(i + 1) % length]) for i in range(length)}
        if not extra & arcs:
            arcs |= extra
    return arcs


def _random_composition(rng: random.Random, total: int, p: int) -> list[int]:
    """Random (n_1..n_p) summing to total with at least two non-zero parts."""
    while True:
        parts = [0] * p
        for _ in range(total):
            parts[rng.randrange(p)] += 1
        if sum(1 for x in parts if x) >= 2:
            return parts


def _random_block(
    rng: random.Random, p: int, max_size: int
) -> tuple[int, set[tuple[int, int]], list[Vector], BlockType]:
    kinds = ["M"]
    if p >= 2 and max_size >= 3:
        kinds += ["K", "C"]
    kind = rng.choice(kinds)
    if kind == "M":
        size = rng.randint(1 if max_size == 1 else 2, min(max_size, 5))
        arcs = _random_eulerian_block(rng, size) if size >= 2 else set()
        j = rng.randrange(p)
        outdeg = [0] * size
        for u, _ in arcs:
            outdeg[u] += 1
        vals = [tuple(outdeg[v] if i == j else 0 for i in range(p)) for v in range(size)]
        return size, arcs, vals, BlockType("M", (j,))
    if kind == "K":
        size = rng.randint(3, min(max_size, 5))
        arcs = {(a, b) for a in range(size) for b in range(size) if a != b}
        parts = tuple(_random_composition(rng, size - 1, p))
        return size, arcs, [parts] * size, BlockType("K", parts)
    odd = [s for s in (3, 5, 7) if s <= max_size]
    size = rng.choice(odd)
    arcs = set()
    for i in range(size):
        arcs |= {(i, (i + 1) % size), ((i + 1) % size, i)}
    k, l = sorted(rng.sample(range(p), 2))
    vec = tuple(1 if i in (k, l) else 0 for i in range(p))
    return size, arcs, [vec] * size, BlockType("C", (k, l))


def generate_hard_pair(
    seed: int, p: int, block_budget: int, max_vertices: Optional[int] = None
) -> tuple[Digraph, list[Vector], HardPairCertificate]:
    """Random hard pair made of ``block_budget`` blocks merged at single vertices.

    ``max_vertices`` bounds the order of the result; blocks are shrunk to fit.
    """
    if p < 1 or block_budget < 1:
        raise ValueError("p and block_budget must be at least 1")
    if max_vertices is not None and max_vertices < block_budget + 1 and block_budget > 1:
        raise ValueError("max_vertices too small for the requested number of blocks")
    rng = random.Random(seed)
    n = 0
    arcs: set[tuple[int, int]] = set()
    f: list[list[int]] = []
    leaves: list[tuple[list[int], list[Vector], BlockType]] = []
    for k in range(block_budget):
        blocks_left = block_budget - k - 1
        if max_vertices is None:
            cap = 7
        else:
            # each later block needs at least one new vertex
            cap = max_vertices - n - blocks_left + (1 if k else 0)
            cap = min(cap, 7)
        size, barcs, vals, t = _random_block(rng, p, max(cap, 1 if k == 0 else 2))
        if k == 0:
            mapping = list(range(size))
            n = size
            f = [list(v) for v in vals]
        else:
            anchor = rng.randrange(n)
            joined = rng.randrange(size)
            mapping = []
            for x in range(size):
                if x == joined:
                    mapping.append(anchor)
                else:
                    mapping.append(n)
                    n += 1
                    f.append([0] * p)
            for i in range(p):
                f[anchor][i] += vals[joined][i]
            for x in range(size):
                if x != joined:
                    f[mapping[x]] = list(vals[x])
        arcs |= {(mapping[a], mapping[b]) for a, b in barcs}
        leaves.append((mapping, vals, t))
    D = Digraph(n, arcs)
    fvec = [tuple(v) for v in f]
    built = []
    for m, vals, _ in leaves:
        g = {m[x]: vals[x] for x in range(len(m))}
        # a bidirected triangle drawn as C reads as K under the precedence rule
        built.append((m, g, check_block_type(D, g, m)))
    return D, fvec, make_certificate(p, built)
