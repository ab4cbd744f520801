"""Weak degeneracy by peeling, vector functions, and f-partition checking."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Optional, Sequence

from .digraph import Digraph, _vertex_set


class VectorFunction:
    """Per-vertex vectors ``(f_1(v), ..., f_p(v))`` of non-negative integers.

    Coordinates are indexed from 0 in code; files and reports use 1-based
    class numbers.
    """

    __slots__ = ("p", "values")

    def __init__(self, values: Iterable[Iterable[int]], p: Optional[int] = None) -> None:
        vals = tuple(tuple(map(int, vec)) for vec in values)
        if p is None:
            if not vals:
                raise ValueError("p must be given for an empty vector function")
            p = len(vals[0])
        if p < 1:
            raise ValueError("p must be at least 1")
        if any(len(vec) != p or min(vec) < 0 for vec in vals):
            for v, vec in enumerate(vals):
                if len(vec) != p:
                    raise ValueError(f"vector at vertex {v} has length {len(vec)}, expected {p}")
                if min(vec) < 0:
                    raise ValueError(f"negative entry at vertex {v}")
        self.p = p
        self.values = vals

    @classmethod
    def constant(cls, n: int, vec: Sequence[int]) -> "VectorFunction":
        return cls([tuple(vec)] * n, p=len(vec))

    def __getitem__(self, v: int) -> tuple[int, ...]:
        return self.values[v]

    def __len__(self) -> int:
        return len(self.values)

    def __iter__(self):
        return iter(self.values)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, VectorFunction):
            return NotImplemented
        return self.p == other.p and self.values == other.values

    def __hash__(self) -> int:
        return hash((self.p, self.values))

    def __repr__(self) -> str:
        return f"VectorFunction({list(self.values)!r})"

    def total(self, v: int) -> int:
        return sum(self.values[v])

    def coordinate(self, i: int) -> tuple[int, ...]:
        return tuple(vec[i] for vec in self.values)


@dataclass(frozen=True)
class Partition:
    """Assignment of vertices to classes ``0..p-1``.

    Usually total on V(D); the solver also uses partitions of ``D - v``.
    """

    p: int
    class_of: Mapping[int, int]

    def __post_init__(self) -> None:
        for v, c in self.class_of.items():
            if not 0 <= c < self.p:
                raise ValueError(f"class {c} of vertex {v} outside 0..{self.p - 1}")

    @classmethod
    def from_list(cls, p: int, classes: Sequence[int]) -> "Partition":
        return cls(p, dict(enumerate(classes)))

    @property
    def vertices(self) -> frozenset[int]:
        return frozenset(self.class_of)

    def classes(self) -> list[frozenset[int]]:
        out: list[set[int]] = [set() for _ in range(self.p)]
        for v, c in self.class_of.items():
            out[c].add(v)
        return [frozenset(s) for s in out]

    def as_list(self, n: int) -> list[int]:
        return [self.class_of[v] for v in range(n)]


def weak_core(
    D: Digraph, h: Sequence[int], vertices: Optional[Iterable[int]] = None
) -> frozenset[int]:
    """Largest X inside ``vertices`` with min{d+, d-} >= h(v) for all v in D[X].

    Peels violating vertices until none is left; empty iff the induced
    subdigraph is weakly h-degenerate.
    """
    if len(h) != D.n:
        raise ValueError("degeneracy function must have one value per vertex")
    alive = set(_vertex_set(D, vertices))
    succ, pred = D.succ, D.pred
    outd = {v: len(alive.intersection(succ[v])) for v in alive}
    ind = {v: len(alive.intersection(pred[v])) for v in alive}
    work = sorted(v for v in alive if outd[v] < h[v] or ind[v] < h[v])
    queued = set(work)
    work.reverse()
    while work:
        v = work.pop()
        alive.discard(v)
        for w in succ[v]:
            if w in alive:
                ind[w] -= 1
                if w not in queued and ind[w] < h[w]:
                    queued.add(w)
                    work.append(w)
        for w in pred[v]:
            if w in alive:
                outd[w] -= 1
                if w not in queued and outd[w] < h[w]:
                    queued.add(w)
                    work.append(w)
    return frozenset(alive)


def is_weakly_degenerate(
    D: Digraph, h: Sequence[int], vertices: Optional[Iterable[int]] = None
) -> bool:
    return not weak_core(D, h, vertices)


@dataclass(frozen=True)
class PartitionCheck:
    ok: bool
    violations: tuple[tuple[int, frozenset[int]], ...] = ()
    message: str = ""

    def __bool__(self) -> bool:
        return self.ok

    @property
    def witness(self) -> Optional[tuple[int, frozenset[int]]]:
        """First violating (class index, non-empty weak core), if any."""
        return self.violations[0] if self.violations else None


def validate_partition(
    D: Digraph,
    f: VectorFunction | Sequence[Sequence[int]],
    P: Partition | Mapping[int, int],
    vertices: Optional[Iterable[int]] = None,
) -> PartitionCheck:
    """Check that every class of ``P`` is weakly f_i-degenerate.

    ``P`` must cover exactly ``vertices`` (default: all of V(D)).
    """
    if isinstance(P, Partition):
        class_of, p = P.class_of, P.p
    else:
        class_of, p = P, None
    fp = f.p if isinstance(f, VectorFunction) else (len(f[0]) if len(f) else None)
    if p is not None and fp is not None and p != fp:
        return PartitionCheck(False, message=f"partition has p={p}, function has p={fp}")
    if p is None:
        p = fp or 1
    vs = _vertex_set(D, vertices)
    if set(class_of) != vs:
        missing = sorted(vs - set(class_of))
        extra = sorted(set(class_of) - vs)
        return PartitionCheck(False, message=f"not total: missing {missing}, extra {extra}")
    members: list[list[int]] = [[] for _ in range(p)]
    for v, c in class_of.items():
        if not 0 <= c < p:
            return PartitionCheck(False, message=f"vertex {v} has class {c} outside 0..{p - 1}")
        members[c].append(v)
    violations = []
    for i in range(p):
        if not members[i]:
            continue
        core = weak_core(D, [vec[i] for vec in f], members[i])
        if core:
            violations.append((i, core))
    if violations:
        i, core = violations[0]
        return PartitionCheck(
            False, tuple(violations), f"class {i + 1} contains the non-degenerate core {sorted(core)}"
        )
    return PartitionCheck(True)
