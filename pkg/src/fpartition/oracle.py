"""Exhaustive reference solver and small-digraph generators.

``oracle_solve`` decides f-partitionability straight from the definition and
shares no code with the constructive solver beyond the weak-core check.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import combinations, permutations, product
from typing import Iterator, Optional, Sequence

import numpy as np

from .degeneracy import Partition, VectorFunction, is_weakly_degenerate
from .digraph import Digraph, is_connected, is_eulerian

DEFAULT_BUDGET = 8192
PRUNING_THRESHOLD = 10**6
EXHAUSTIVE_MAX_N = 6


class BudgetExceeded(ValueError):
    pass


@dataclass(frozen=True)
class OracleResult:
    """``partition`` is the first valid assignment in lexicographic order,
    or None when none exists (proven infeasible)."""

    partition: Optional[Partition]
    assignments_checked: int

    @property
    def feasible(self) -> bool:
        return self.partition is not None


def oracle_solve(
    D: Digraph, f: VectorFunction | Sequence[Sequence[int]], budget: int = DEFAULT_BUDGET
) -> OracleResult:
    """Search all p^n class assignments for an f-partition.

    Below ``PRUNING_THRESHOLD`` assignments every assignment is tried in
    lexicographic order. The degeneracy of each class depends only on its
    vertex set, so verdicts are memoised per (class, vertex set). Above the
    threshold a depth-first search abandons any prefix whose partial class is
    already non-degenerate, which is sound because adding vertices to a
    non-degenerate set cannot make it degenerate.
    """
    if not isinstance(f, VectorFunction):
        f = VectorFunction(f) if len(f) else VectorFunction([], p=1)
    n, p = D.n, f.p
    total = p**n
    if total > budget:
        raise BudgetExceeded(f"{p}^{n} = {total} assignments exceed the budget {budget}")
    coords = [list(f.coordinate(i)) for i in range(p)]
    memo: dict[tuple[int, int], bool] = {}

    def class_ok(i: int, mask: int) -> bool:
        key = (i, mask)
        if key not in memo:
            members = [v for v in range(n) if mask >> v & 1]
            memo[key] = is_weakly_degenerate(D, coords[i], members)
        return memo[key]

    if total <= PRUNING_THRESHOLD:
        checked = 0
        for assignment in product(range(p), repeat=n):
            checked += 1
            masks = [0] * p
            for v, c in enumerate(assignment):
                masks[c] |= 1 << v
            if all(class_ok(i, masks[i]) for i in range(p)):
                return OracleResult(Partition.from_list(p, assignment), checked)
        return OracleResult(None, checked)

    checked = 0
    assignment = [0] * n
    masks = [0] * p

    def extend(v: int) -> bool:
        nonlocal checked
        if v == n:
            checked += 1
            return True
        for c in range(p):
            masks[c] |= 1 << v
            if class_ok(c, masks[c]):
                assignment[v] = c
                if extend(v + 1):
                    return True
            masks[c] &= ~(1 << v)
        return False

    if extend(0):
        return OracleResult(Partition.from_list(p, assignment), checked)
    return OracleResult(None, checked)


# -- enumeration ------------------------------------------------------------

_PAIR_STATES = 4  # none, u->v, v->u, both


def _pairs(n: int) -> list[tuple[int, int]]:
    return list(combinations(range(n), 2))


def _decode(n: int, states: Sequence[int]) -> Digraph:
    arcs = []
    for (u, v), s in zip(_pairs(n), states):
        if s in (1, 3):
            arcs.append((u, v))
        if s in (2, 3):
            arcs.append((v, u))
    return Digraph(n, arcs)


def _canonical_codes(n: int, codes: np.ndarray) -> np.ndarray:
    """Smallest code over all vertex relabellings, for a batch of codes.

    A code is the base-4 number whose k-th digit is the state of the k-th
    pair of ``_pairs(n)``. Relabelling moves each digit to the position of
    the image pair, swapping the two one-way states when the pair flips.
    """
    pairs = _pairs(n)
    m = len(pairs)
    index = {pr: k for k, pr in enumerate(pairs)}
    digits = [((codes // _PAIR_STATES**k) % _PAIR_STATES).astype(np.intp) for k in range(m)]
    states = np.arange(_PAIR_STATES, dtype=np.int64)
    swapped = np.array([0, 2, 1, 3], dtype=np.int64)
    best = codes.astype(np.int64)
    for perm in permutations(range(n)):
        relabelled = np.zeros(len(codes), dtype=np.int64)
        for k, (u, v) in enumerate(pairs):
            a, b = perm[u], perm[v]
            table = states if a < b else swapped
            target = index[(min(a, b), max(a, b))]
            relabelled += (table * _PAIR_STATES**target)[digits[k]]
        np.minimum(best, relabelled, out=best)
    return best


def canonical_code(D: Digraph) -> int:
    """Isomorphism invariant: the smallest code of any relabelling of D."""
    pairs = _pairs(D.n)
    code = 0
    for k, (u, v) in enumerate(pairs):
        code += (D.has_arc(u, v) + 2 * D.has_arc(v, u)) * _PAIR_STATES**k
    if D.n > EXHAUSTIVE_MAX_N:
        raise ValueError(f"canonical codes are limited to n <= {EXHAUSTIVE_MAX_N}")
    return int(_canonical_codes(D.n, np.array([code], dtype=np.int64))[0])


def enumerate_digraphs(
    n: int,
    *,
    connected: bool = False,
    eulerian: bool = False,
    bidirected: bool = False,
    up_to_isomorphism: bool = False,
) -> Iterator[Digraph]:
    """All loop-free digraphs on vertices 0..n-1 meeting the constraints.

    Each unordered pair is absent, one of two one-way arcs, or both arcs, so
    there are 4^(n choose 2) labelled digraphs; the order is by base-4 code.
    With ``up_to_isomorphism`` only the smallest code of each isomorphism
    class is produced.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    if n > EXHAUSTIVE_MAX_N:
        raise ValueError(f"exhaustive enumeration is limited to n <= {EXHAUSTIVE_MAX_N}")
    m = n * (n - 1) // 2
    states = (0, 3) if bidirected else range(_PAIR_STATES)
    if up_to_isomorphism and m:
        codes = np.arange(_PAIR_STATES**m, dtype=np.int64)
        if bidirected:
            digits = np.stack([(codes // 4**k) % 4 for k in range(m)], axis=1)
            codes = codes[np.all((digits == 0) | (digits == 3), axis=1)]
        canon = _canonical_codes(n, codes)
        keep = codes[canon == codes]
        candidates = (
            tuple(int(c) // 4**k % 4 for k in range(m)) for c in keep.tolist()
        )
    else:
        candidates = (tuple(reversed(s)) for s in product(states, repeat=m))
    for st in candidates:
        D = _decode(n, st)
        if connected and not is_connected(D):
            continue
        if eulerian and not is_eulerian(D):
            continue
        yield D


def automorphisms(D: Digraph) -> list[tuple[int, ...]]:
    """Vertex permutations mapping D onto itself, identity first."""
    if D.n > EXHAUSTIVE_MAX_N:
        raise ValueError(f"automorphism search is limited to n <= {EXHAUSTIVE_MAX_N}")
    return [
        perm
        for perm in permutations(range(D.n))
        if all((perm[u], perm[v]) in D.arcs for u, v in D.arcs)
    ]


def enumerate_functions(
    D: Digraph,
    p: int,
    max_entry: int,
    *,
    degree_condition: bool = True,
    up_to_symmetry: bool = False,
) -> Iterator[VectorFunction]:
    """All f with entries in 0..max_entry, optionally only those meeting the
    degree condition sum_i f_i(v) >= max{d+(v), d-(v)}.

    With ``up_to_symmetry`` one f is kept per orbit under automorphisms of D
    combined with permutations of the p coordinates; both preserve whether
    (D, f) is partitionable.
    """
    vectors = list(product(range(max_entry + 1), repeat=p))
    per_vertex = []
    for v in range(D.n):
        need = max(D.out_degree(v), D.in_degree(v)) if degree_condition else 0
        per_vertex.append([k for k, x in enumerate(vectors) if sum(x) >= need])
    if not up_to_symmetry or D.n == 0:
        for choice in product(*per_vertex):
            yield VectorFunction([vectors[k] for k in choice], p=p)
        return
    rows = np.array(list(product(*per_vertex)), dtype=np.int64).reshape(-1, D.n)
    base = len(vectors)
    weights = base ** np.arange(D.n, dtype=np.int64)
    codes = rows @ weights
    best = codes.copy()
    position = {x: k for k, x in enumerate(vectors)}
    for cperm in permutations(range(p)):
        table = np.array([position[tuple(x[cperm[i]] for i in range(p))] for x in vectors])
        recoloured = table[rows]
        for perm in automorphisms(D):
            # f'(perm[v]) = f(v)
            np.minimum(best, recoloured @ weights[list(perm)], out=best)
    for row in rows[best == codes].tolist():
        yield VectorFunction([vectors[k] for k in row], p=p)


# -- random instances -------------------------------------------------------


def _random_pair_arcs(rng: random.Random, u: int, v: int) -> list[tuple[int, int]]:
    s = rng.randrange(1, 4)
    return ([(u, v)] if s in (1, 3) else []) + ([(v, u)] if s in (2, 3) else [])


def random_digraph(rng: random.Random, n: int, density: float = 0.4) -> Digraph:
    """Each unordered pair independently absent or carrying one/both arcs."""
    arcs = []
    for u, v in combinations(range(n), 2):
        if rng.random() < density:
            arcs.extend(_random_pair_arcs(rng, u, v))
    return Digraph(n, arcs)


def random_connected_digraph(rng: random.Random, n: int, density: float = 0.4) -> Digraph:
    """A random spanning tree of pairs plus further pairs with probability
    ``density``; every pair carries one or both arcs."""
    order = list(range(n))
    rng.shuffle(order)
    tree = {tuple(sorted((order[k], order[rng.randrange(k)]))) for k in range(1, n)}
    arcs = []
    for u, v in combinations(range(n), 2):
        if (u, v) in tree or rng.random() < density:
            arcs.extend(_random_pair_arcs(rng, u, v))
    return Digraph(n, arcs)


def random_eulerian_digraph(
    rng: random.Random, n: int, cycles: int, max_len: Optional[int] = None
) -> Digraph:
    """Union of random directed cycles, skipping arcs already present.

    Each cycle contributes one in- and one out-arc per vertex, so the result
    is Eulerian; it need not be connected.
    """
    arcs: set[tuple[int, int]] = set()
    max_len = n if max_len is None else max_len
    if n < 2:
        return Digraph(n)
    for _ in range(cycles):
        k = rng.randint(2, max(2, min(n, max_len)))
        cyc = rng.sample(range(n), k)
        new = [(cyc[i], cyc[(i + 1) % k]) for i in range(k)]
        if any(a in arcs for a in new):
            continue
        arcs.update(new)
    return Digraph(n, arcs)


def random_connected_eulerian_digraph(
    rng: random.Random, n: int, cycles: int, max_len: Optional[int] = None, bidirected_rate: float = 0.0
) -> Digraph:
    """A directed Hamiltonian cycle plus random arc-disjoint cycles.

    With ``bidirected_rate`` > 0 that fraction of the extra cycles are
    instead added as bidirected edges, which keeps the digraph Eulerian.
    """
    if n < 2:
        return Digraph(n)
    order = list(range(n))
    rng.shuffle(order)
    arcs = {(order[i], order[(i + 1) % n]) for i in range(n)} if n > 2 else {(0, 1), (1, 0)}
    max_len = n if max_len is None else max_len
    for _ in range(cycles):
        if rng.random() < bidirected_rate:
            u, v = rng.sample(range(n), 2)
            if (u, v) not in arcs and (v, u) not in arcs:
                arcs.update({(u, v), (v, u)})
            continue
        k = rng.randint(2, max(2, min(n, max_len)))
        cyc = rng.sample(range(n), k)
        new = [(cyc[i], cyc[(i + 1) % k]) for i in range(k)]
        if not any(a in arcs for a in new):
            arcs.update(new)
    return Digraph(n, arcs)


def random_tight_function(rng: random.Random, D: Digraph, p: int) -> VectorFunction:
    """Random f with sum_i f_i(v) = max{d+(v), d-(v)} at every vertex.

    Mass is sometimes concentrated on one or two colours, which makes hard
    blocks and near-hard instances likely.
    """
    vecs = []
    mode = rng.random()
    for v in range(D.n):
        d = max(D.out_degree(v), D.in_degree(v))
        vec = [0] * p
        if mode < 0.3:
            vec[0 if p == 1 else rng.randrange(min(2, p))] += d
        else:
            for _ in range(d):
                vec[rng.randrange(p)] += 1
        vecs.append(tuple(vec))
    return VectorFunction(vecs, p=p)


def random_function(
    rng: random.Random, D: Digraph, p: int, max_entry: int, slack_rate: float = 0.2
) -> VectorFunction:
    """Random f meeting the degree condition, tight at most vertices."""
    vecs = []
    for v in range(D.n):
        d = max(D.out_degree(v), D.in_degree(v))
        target = d + (1 if rng.random() < slack_rate else 0)
        target = min(target, p * max_entry) if p * max_entry >= d else d
        vec = [0] * p
        for _ in range(target):
            choices = [i for i in range(p) if vec[i] < max_entry] or list(range(p))
            vec[rng.choice(choices)] += 1
        vecs.append(tuple(vec))
    return VectorFunction(vecs, p=p)
