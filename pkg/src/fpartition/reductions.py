"""Colouring problems reduced to f-partitions.

* list colouring: f_i(v) = 1 iff colour i is in L(v);
* colouring with p colours (Brooks-type bound): f = (1, ..., 1);
* partition into weakly s-degenerate parts: f = (s, ..., s);
* list colouring with s-degenerate classes: f_i(v) = s iff i is in L(v).

Colours are renamed to 0..p-1 in sorted order before solving and mapped
back afterwards.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import ceil
from typing import Hashable, Iterable, Optional, Sequence

from .degeneracy import VectorFunction
from .digraph import Digraph, block_decomposition, is_complete, is_cycle, is_eulerian
from .engine import DegreeConditionError, PreconditionError, SolveOutcome, solve
from .hardpairs import HardPairCertificate


@dataclass(frozen=True)
class ListAssignment:
    """Per-vertex colour lists over an ordered colour universe.

    The universe defaults to the union of the lists; an explicit universe
    may add colours nobody uses (they become all-zero coordinates).
    """

    lists: tuple[frozenset, ...]
    universe: tuple

    def __init__(self, lists: Iterable[Iterable[Hashable]], universe: Optional[Iterable[Hashable]] = None):
        ls = tuple(frozenset(x) for x in lists)
        used = set().union(*ls) if ls else set()
        uni = tuple(sorted(used if universe is None else set(universe)))
        if not used <= set(uni):
            raise ValueError(f"colours {sorted(used - set(uni))} are missing from the universe")
        object.__setattr__(self, "lists", ls)
        object.__setattr__(self, "universe", uni)

    def __len__(self) -> int:
        return len(self.lists)

    def __getitem__(self, v: int) -> frozenset:
        return self.lists[v]


def lists_to_vector_function(
    D: Digraph, L: ListAssignment, weight: int = 1
) -> tuple[VectorFunction, tuple]:
    """f_i(v) = weight if the i-th colour of the universe is in L(v), else 0.

    Returns f and the colour of each coordinate. An empty universe still
    yields p = 1 (an all-zero coordinate) because f needs p >= 1.
    """
    if len(L) != D.n:
        raise ValueError(f"list assignment has {len(L)} lists for {D.n} vertices")
    colours = L.universe
    p = max(1, len(colours))
    vecs = [
        tuple(weight if i < len(colours) and colours[i] in L[v] else 0 for i in range(p))
        for v in range(D.n)
    ]
    return VectorFunction(vecs, p=p), colours


# -- evidence for non-colourability ------------------------------------------

DIRECTED_CYCLE = "directed cycle"
BIDIRECTED_COMPLETE = "bidirected complete graph"
BIDIRECTED_ODD_CYCLE = "bidirected odd cycle"


def block_shape(D: Digraph, block: Iterable[int]) -> Optional[str]:
    """Which of the three exceptional shapes the block has, if any.

    A bidirected K2 is a directed 2-cycle and reported as such; a bidirected
    triangle is reported as complete.
    """
    vs = frozenset(block)
    if len(vs) >= 2 and all(
        D.out_degree(v, vs) == 1 and D.in_degree(v, vs) == 1 for v in vs
    ) and len(block_decomposition(D, vs).blocks) == 1:
        return DIRECTED_CYCLE
    if D.is_bidirected(vs) and is_complete(D, vs):
        return BIDIRECTED_COMPLETE
    if D.is_bidirected(vs) and len(vs) % 2 == 1 and is_cycle(D, vs):
        return BIDIRECTED_ODD_CYCLE
    return None


@dataclass(frozen=True)
class BlockEvidence:
    vertices: tuple[int, ...]
    shape: Optional[str]
    colours: frozenset


@dataclass(frozen=True)
class ListEvidence:
    """Facts read off a hard-pair certificate of a list-colouring instance.

    ``eulerian_tight``: the component is Eulerian with |L(v)| = d+ = d-.
    ``shapes_ok``: every block has one of the three exceptional shapes.
    ``union_ok``: at every vertex the colour sets of its blocks are pairwise
    disjoint and their union is L(v), and each block has as many colours as
    its maximum out-degree.
    """

    component: frozenset[int]
    certificate: HardPairCertificate
    blocks: tuple[BlockEvidence, ...]
    eulerian_tight: bool
    shapes_ok: bool
    union_ok: bool

    @property
    def ok(self) -> bool:
        return self.eulerian_tight and self.shapes_ok and self.union_ok


def _list_evidence(
    D: Digraph, L: ListAssignment, colours: tuple, comp: frozenset[int], cert: HardPairCertificate
) -> ListEvidence:
    tight = is_eulerian(D, comp) and all(
        len(L[v]) == D.out_degree(v, comp) == D.in_degree(v, comp) for v in comp
    )
    blocks = []
    for b in cert.blocks:
        support: set = set()
        for vec in b.values:
            support.update(colours[i] for i, x in enumerate(vec) if x and i < len(colours))
        blocks.append(BlockEvidence(b.vertices, block_shape(D, b.vertices), frozenset(support)))
    shapes_ok = all(b.shape is not None for b in blocks)
    union_ok = True
    for b in blocks:
        vs = frozenset(b.vertices)
        if len(b.colours) != max(D.out_degree(v, vs) for v in vs):
            union_ok = False
    for v in comp:
        mine = [b.colours for b in blocks if v in b.vertices]
        if sum(len(c) for c in mine) != len(frozenset().union(*mine)):
            union_ok = False
        if frozenset().union(*mine) != L[v]:
            union_ok = False
    return ListEvidence(comp, cert, tuple(blocks), tight, shapes_ok, union_ok)


@dataclass(frozen=True)
class ListColoringResult:
    """Either ``coloring`` (vertex -> colour) or one evidence item per
    non-colourable component."""

    outcome: SolveOutcome
    colours: tuple
    coloring: Optional[dict[int, Hashable]]
    evidence: tuple[ListEvidence, ...]

    @property
    def colorable(self) -> bool:
        return self.coloring is not None


def _check_list_sizes(D: Digraph, L: ListAssignment, weight: int, need: Sequence[int]) -> None:
    bad = [v for v in range(D.n) if weight * len(L[v]) < need[v]]
    if bad:
        raise DegreeConditionError(bad)


def list_color(D: Digraph, L: ListAssignment) -> ListColoringResult:
    """L-colouring with acyclic colour classes, assuming |L(v)| >= max{d+(v), d-(v)}."""
    _check_list_sizes(D, L, 1, [max(D.out_degree(v), D.in_degree(v)) for v in range(D.n)])
    f, colours = lists_to_vector_function(D, L)
    return _interpret_lists(D, L, f, colours)


def _interpret_lists(D: Digraph, L: ListAssignment, f: VectorFunction, colours: tuple) -> ListColoringResult:
    out = solve(D, f)
    P = out.partition()
    if P is not None:
        coloring = {v: colours[c] for v, c in P.class_of.items()}
        return ListColoringResult(out, colours, coloring, ())
    evidence = tuple(
        _list_evidence(D, L, colours, c.vertices, c.certificate)
        for c in out.components
        if c.certificate is not None
    )
    return ListColoringResult(out, colours, None, evidence)


def max_degree_bound(D: Digraph) -> int:
    """max over v of max{d+(v), d-(v)}."""
    return D.max_degree()


def dichromatic_partition(D: Digraph, p: Optional[int] = None) -> SolveOutcome:
    """Colour D with p colours (default max{Delta+, Delta-}, at least 1).

    A certificate for a connected D at the default p means D is a directed
    cycle, a bidirected odd cycle or a bidirected complete graph.
    """
    m = D.max_degree()
    if p is None:
        p = max(1, m)
    if p < 1 or p < m:
        raise PreconditionError(f"p = {p} is below max{{Delta+, Delta-}} = {m}")
    return solve(D, VectorFunction.constant(D.n, (1,) * p))


def s_degenerate_partition(D: Digraph, s: int, p: Optional[int] = None) -> SolveOutcome:
    """Partition into p weakly s-degenerate parts (default p = ceil(m/s))."""
    if s < 1:
        raise PreconditionError("s must be at least 1")
    m = D.max_degree()
    if p is None:
        p = max(1, ceil(m / s))
    if p < 1 or p * s < m:
        raise PreconditionError(f"p*s = {p * s} is below max{{Delta+, Delta-}} = {m}")
    return solve(D, VectorFunction.constant(D.n, (s,) * p))


@dataclass(frozen=True)
class ListSEvidence:
    """The two conditions characterising non-(L,s)-colourable components.

    ``shape_ok``: bidirected complete with |D|-1 divisible by s, bidirected
    odd cycle with s = 1, or Eulerian with all degrees equal to s.
    ``lists_ok``: all lists equal one set of size m/s.
    """

    component: frozenset[int]
    certificate: HardPairCertificate
    shape_ok: bool
    lists_ok: bool

    @property
    def ok(self) -> bool:
        return self.shape_ok and self.lists_ok


@dataclass(frozen=True)
class ListSColoringResult:
    outcome: SolveOutcome
    colours: tuple
    coloring: Optional[dict[int, Hashable]]
    evidence: tuple[ListSEvidence, ...]

    @property
    def colorable(self) -> bool:
        return self.coloring is not None


def _list_s_evidence(
    D: Digraph, L: ListAssignment, s: int, comp: frozenset[int], cert: HardPairCertificate
) -> ListSEvidence:
    m = max((max(D.out_degree(v, comp), D.in_degree(v, comp)) for v in comp), default=0)
    bidirected = D.is_bidirected(comp)
    shape_ok = (
        (bidirected and is_complete(D, comp) and (len(comp) - 1) % s == 0)
        or (bidirected and len(comp) % 2 == 1 and is_cycle(D, comp) and s == 1)
        or all(D.out_degree(v, comp) == D.in_degree(v, comp) == s for v in comp)
    )
    lists = {L[v] for v in comp}
    lists_ok = len(lists) == 1 and len(next(iter(lists))) * s == m
    return ListSEvidence(comp, cert, shape_ok, lists_ok)


def list_s_color(D: Digraph, L: ListAssignment, s: int) -> ListSColoringResult:
    """L-colouring whose colour classes are weakly s-degenerate.

    Requires s * |L(v)| >= m for every v, with m = max{Delta+, Delta-}.
    """
    if s < 1:
        raise PreconditionError("s must be at least 1")
    m = D.max_degree()
    _check_list_sizes(D, L, s, [m] * D.n)
    f, colours = lists_to_vector_function(D, L, weight=s)
    out = solve(D, f)
    P = out.partition()
    if P is not None:
        return ListSColoringResult(out, colours, {v: colours[c] for v, c in P.class_of.items()}, ())
    evidence = tuple(
        _list_s_evidence(D, L, s, c.vertices, c.certificate)
        for c in out.components
        if c.certificate is not None
    )
    return ListSColoringResult(out, colours, None, evidence)
