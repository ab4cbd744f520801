"""Constructive solver: an f-partition of (D, f) or a hard-pair certificate.

The public functions mirror the building blocks of the construction:

* ``greedy_partition`` colours a connected digraph that has a slack vertex;
* ``greedy_partition_minus`` colours ``D - v`` one component at a time;
* ``shift`` either adds the uncoloured vertex or passes that status on to a
  neighbour;
* ``cycle_partition``, ``complete_partition`` and ``block_partition`` handle
  a single Eulerian block in the tight regime (sum of f equal to the degree);
* ``solve`` runs the whole thing per component, peeling hard end-blocks and
  reassembling the partition afterwards.

All of them work on vertex subsets of the caller's digraph, so vertex
numbers in results always refer to the original ``D``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Sequence

from .cycles import even_cycle_with_free_vertex, fan_paths
from .degeneracy import Partition, VectorFunction, validate_partition
from .digraph import (
    Digraph,
    _vertex_set,
    block_decomposition,
    components,
    cycle_order,
    is_complete,
    is_cycle,
)
from .hardpairs import (
    BlockType,
    HardPairCertificate,
    check_block_type,
    make_certificate,
    validate_certificate,
)

Vector = tuple[int, ...]


class InvariantError(RuntimeError):
    """An internal guarantee failed; always a defect, never bad input."""


class SafetyCapExceeded(InvariantError):
    """A shifting loop ran past its iteration cap."""


class PreconditionError(ValueError):
    """The input does not satisfy the requirements of the called operation."""


class DegreeConditionError(PreconditionError):
    """sum_i f_i(v) < max{d+(v), d-(v)} at the listed vertices."""

    def __init__(self, vertices: Sequence[int]) -> None:
        self.vertices = tuple(vertices)
        shown = ", ".join(str(v + 1) for v in self.vertices[:10])
        more = "" if len(self.vertices) <= 10 else ", ..."
        super().__init__(f"degree condition violated at vertices {shown}{more}")


@dataclass(frozen=True)
class ComponentOutcome:
    vertices: frozenset[int]
    partition: Optional[Partition] = None
    certificate: Optional[HardPairCertificate] = None

    @property
    def partitionable(self) -> bool:
        return self.partition is not None


@dataclass(frozen=True)
class SolveOutcome:
    """Per-component results of ``solve``.

    ``shifts`` counts shifting steps across the whole run and
    ``checked_states`` the intermediate states validated in debug mode.
    """

    p: int
    components: tuple[ComponentOutcome, ...]
    shifts: int = 0
    checked_states: int = 0

    @property
    def partitionable(self) -> bool:
        return all(c.partitionable for c in self.components)

    def partition(self) -> Optional[Partition]:
        """The union of the component partitions, or None if any is hard."""
        if not self.partitionable:
            return None
        merged: dict[int, int] = {}
        for c in self.components:
            assert c.partition is not None
            merged.update(c.partition.class_of)
        return Partition(self.p, dict(sorted(merged.items())))

    @property
    def certificates(self) -> list[HardPairCertificate]:
        return [c.certificate for c in self.components if c.certificate is not None]


@dataclass(frozen=True)
class ShiftResult:
    """Outcome of one shift: either the partition is complete or
    ``uncolored`` names the vertex left out."""

    partition: Partition
    uncolored: Optional[int]

    @property
    def complete(self) -> bool:
        return self.uncolored is None


@dataclass
class _Engine:
    D: Digraph
    p: int
    debug: bool = False
    shifts: int = 0
    checked_states: int = 0
    max_cycle_shifts: int = field(default=0)

    # -- primitives ---------------------------------------------------------

    def _class_degrees(
        self, vs: frozenset[int] | set[int], class_of: Mapping[int, int], v: int
    ) -> tuple[list[int], list[int]]:
        outd = [0] * self.p
        ind = [0] * self.p
        for w in self.D.succ[v]:
            if w in vs and w in class_of:
                outd[class_of[w]] += 1
        for w in self.D.pred[v]:
            if w in vs and w in class_of:
                ind[class_of[w]] += 1
        return outd, ind

    def addable_class(
        self, vs, f: Mapping[int, Vector] | VectorFunction, class_of: Mapping[int, int], v: int
    ) -> Optional[int]:
        """Smallest class that can take ``v`` without losing degeneracy."""
        outd, ind = self._class_degrees(vs, class_of, v)
        fv = f[v]
        for i in range(self.p):
            if min(outd[i], ind[i]) < fv[i]:
                return i
        return None

    def greedy(self, vs, f, v_star: int) -> dict[int, int]:
        # reverse BFS order from v_star: every vertex has a later neighbour
        order = [v_star]
        seen = {v_star}
        k = 0
        while k < len(order):
            x = order[k]
            k += 1
            for y in self.D.nbrs[x]:
                if y in vs and y not in seen:
                    seen.add(y)
                    order.append(y)
        if len(order) != len(vs):
            raise PreconditionError("greedy colouring needs a connected vertex set")
        class_of: dict[int, int] = {}
        for x in reversed(order):
            j = self.addable_class(vs, f, class_of, x)
            if j is None:
                raise InvariantError(f"greedy colouring found no class for vertex {x}")
            class_of[x] = j
        return class_of

    def greedy_minus(self, vs, f, v: int) -> dict[int, int]:
        rest = set(vs) - {v}
        class_of: dict[int, int] = {}
        for comp in components(self.D, rest):
            slack = min(y for y in self.D.nbrs[v] if y in comp)
            class_of.update(self.greedy(comp, f, slack))
        return class_of

    def _check_state(self, vs, f, class_of: Mapping[int, int], uncolored: Optional[int]) -> None:
        scope = set(vs) - ({uncolored} if uncolored is not None else set())
        fvals = [f[x] if x in scope else (0,) * self.p for x in range(self.D.n)]
        check = validate_partition(self.D, fvals, Partition(self.p, dict(class_of)), scope)
        self.checked_states += 1
        if not check:
            raise InvariantError(f"shift produced an invalid state: {check.message}")

    def shift(self, vs, f, class_of: dict[int, int], v: int, w: int) -> bool:
        """Add ``v`` if possible (True); otherwise give v the class of w and
        uncolour w (False). ``class_of`` is updated in place."""
        i = self.addable_class(vs, f, class_of, v)
        if i is not None:
            class_of[v] = i
            return True
        outd, ind = self._class_degrees(vs, class_of, v)
        if not all(outd[i] == ind[i] == f[v][i] for i in range(self.p)):
            raise InvariantError(
                f"vertex {v} is blocked without the equality d+ = d- = f_i in every class"
            )
        if w not in self.D.nbrs[v]:
            raise InvariantError(f"shift target {w} is not a neighbour of {v}")
        class_of[v] = class_of.pop(w)
        self.shifts += 1
        if self.debug:
            self._check_state(vs, f, class_of, w)
        return False

    def _cap(self, vs) -> int:
        n = len(vs)
        return 4 * n * (n + self.p)

    def rotate(self, vs, f, class_of: dict[int, int], ring: Sequence[int], start: int, cap: int) -> None:
        """Shift around ``ring`` from ``ring[start]`` until v is added."""
        k = start
        for _ in range(cap):
            if self.shift(vs, f, class_of, ring[k], ring[(k + 1) % len(ring)]):
                return
            k = (k + 1) % len(ring)
        raise SafetyCapExceeded(f"no partition after {cap} shifts around a ring of {len(ring)}")

    # -- single blocks --------------------------------------------------------

    def cycle_partition(self, vs, f) -> dict[int, int]:
        order = cycle_order(self.D, vs)
        L = len(order)
        start = next((k for k in range(L) if tuple(f[order[k]]) != tuple(f[order[(k + 1) % L]])), 0)
        ring = order[start:] + order[:start]
        class_of = self.greedy_minus(vs, f, ring[0])
        before = self.shifts
        self.rotate(vs, f, class_of, ring, 0, L + 1)
        self.max_cycle_shifts = max(self.max_cycle_shifts, self.shifts - before)
        return class_of

    def complete_partition(self, vs, f) -> dict[int, int]:
        order = sorted(vs)
        one_way = next(
            ((v, u) for v in order for u in self.D.succ[v] if u in vs and not self.D.has_arc(u, v)),
            None,
        )
        if one_way is not None:
            v, u = one_way
            class_of = self.greedy_minus(vs, f, v)
            j = self.addable_class(vs, f, class_of, v)
            if j is not None:
                class_of[v] = j
                return class_of
            used = sorted(set(class_of.values()))
            if len(used) == 1:
                (i,) = used
                for w in [v] + [x for x in order if x != v]:
                    js = [j for j in range(self.p) if j != i and f[w][j] > 0]
                    if js:
                        break
                else:
                    raise InvariantError("no vertex can leave the only non-empty class")
                class_of[v] = i
                class_of[w] = js[0]
                return class_of
            i = class_of[u]
            w = min(x for x, c in class_of.items() if c != i)
            self.rotate(vs, f, class_of, [v, u, w], 0, self._cap(vs))
            return class_of

        v = order[0]
        class_of = self.greedy_minus(vs, f, v)
        sizes = [0] * self.p
        for c in class_of.values():
            sizes[c] += 1
        fv = f[v]
        for i in range(self.p):
            if fv[i] > sizes[i]:
                class_of[v] = i
                return class_of
        for w in order[1:]:
            i = class_of[w]
            if f[w][i] >= sizes[i] + 1:
                class_of[v] = i
                return class_of
        for w in order[1:]:
            i = class_of[w]
            for j in range(self.p):
                if j != i and f[w][j] > sizes[j]:
                    class_of[v] = i
                    class_of[w] = j
                    return class_of
        raise InvariantError("bidirected complete block admits no rebalancing move")

    def general_block_partition(self, vs, f) -> dict[int, int]:
        C = even_cycle_with_free_vertex(self.D, vs)
        if C is None:
            raise InvariantError("block is neither a cycle nor complete but has no suitable even cycle")
        v = C[0]
        class_of = self.greedy_minus(vs, f, v)
        j = self.addable_class(vs, f, class_of, v)
        if j is not None:
            class_of[v] = j
            return class_of
        used = set(class_of.values())
        if len(used) == 1:
            (i,) = used
            for w in sorted(class_of):
                js = [j for j in range(self.p) if j != i and f[w][j] > 0]
                if js:
                    class_of[w] = js[0]
                    break
            else:
                raise InvariantError("no vertex can leave the only non-empty class")
            if self.debug:
                self._check_state(vs, f, class_of, v)
        u, w = C[-1], C[1]
        if class_of[u] == class_of[w]:
            i = class_of[u]
            z = min(x for x, c in class_of.items() if c != i)
            paths = fan_paths(self.D, vs, z, {u, v, w})
            if paths is None:
                raise InvariantError("block is not 2-connected around the chosen cycle")
            ends = {P[-1]: P for P in paths}
            if set(ends) == {u, w}:
                ring = [v] + ends[w][::-1] + ends[u][1:]
            elif set(ends) == {v, w}:
                ring = [v] + ends[w][::-1] + ends[v][1:-1]
            else:
                ring = [v] + ends[u][::-1] + ends[v][1:-1]
            k = 0
            cap = self._cap(vs)
            steps = 0
            while class_of.get(u) == class_of.get(w) or ring[k] != v:
                if steps >= cap:
                    raise SafetyCapExceeded(f"auxiliary ring did not separate after {cap} shifts")
                steps += 1
                if self.shift(vs, f, class_of, ring[k], ring[(k + 1) % len(ring)]):
                    return class_of
                k = (k + 1) % len(ring)
        self.rotate(vs, f, class_of, C, 0, self._cap(vs))
        return class_of

    def block_partition(self, vs, f) -> dict[int, int] | BlockType:
        t = check_block_type(self.D, f, vs)
        if t is not None:
            return t
        if is_cycle(self.D, vs):
            return self.cycle_partition(vs, f)
        if is_complete(self.D, vs):
            return self.complete_partition(vs, f)
        return self.general_block_partition(vs, f)

    # -- whole components -----------------------------------------------------

    def solve_component(self, comp: frozenset[int], f: VectorFunction) -> ComponentOutcome:
        D = self.D
        for x in sorted(comp):
            if sum(f[x]) > min(D.out_degree(x, comp), D.in_degree(x, comp)):
                class_of = self.greedy(comp, f, x)
                return self._finish_partition(comp, f, class_of)

        S = set(comp)
        fcur: dict[int, Vector] = {x: tuple(f[x]) for x in comp}
        leaves: list[tuple[frozenset[int], dict[int, Vector], BlockType]] = []
        peeled: list[tuple[frozenset[int], dict[int, Vector], int]] = []
        while True:
            bd = block_decomposition(D, S)
            if len(bd.blocks) == 1:
                res = self.block_partition(frozenset(S), fcur)
                if isinstance(res, BlockType):
                    leaves.append((frozenset(S), dict(fcur), res))
                    cert = make_certificate(self.p, leaves)
                    check = validate_certificate(D, f, cert)
                    if not check:
                        raise InvariantError(f"produced an invalid certificate: {check.message}")
                    return ComponentOutcome(comp, certificate=cert)
                class_of = res
                break
            b = min(bd.end_blocks(), key=lambda i: min(bd.blocks[i]))
            B = bd.blocks[b]
            (c,) = bd.cut_vertices_of(b)
            part = self.greedy_minus(S, fcur, c)
            j = self.addable_class(S, fcur, part, c)
            if j is not None:
                part[c] = j
                class_of = part
                break
            fB_c = [0] * self.p
            for y in D.succ[c]:
                if y in B:
                    fB_c[part[y]] += 1
            fB = {x: fcur[x] for x in B}
            fB[c] = tuple(fB_c)
            res = self.block_partition(B, fB)
            if not isinstance(res, BlockType):
                class_of = {x: part[x] for x in S - B}
                class_of.update(res)
                break
            leaves.append((B, fB, res))
            peeled.append((B, fB, c))
            S -= B - {c}
            rest = tuple(a - b_ for a, b_ in zip(fcur[c], fB_c))
            if min(rest) < 0:
                raise InvariantError(f"negative remainder at cut vertex {c}")
            fcur = {x: fcur[x] for x in S}
            fcur[c] = rest
        for B, fB, c in reversed(peeled):
            class_of.update(self.greedy_minus(B, fB, c))
        return self._finish_partition(comp, f, class_of)

    def _finish_partition(self, comp, f, class_of: dict[int, int]) -> ComponentOutcome:
        P = Partition(self.p, dict(sorted(class_of.items())))
        check = validate_partition(self.D, f, P, comp)
        if not check:
            raise InvariantError(f"produced an invalid partition: {check.message}")
        return ComponentOutcome(comp, partition=P)


# -- precondition helpers ------------------------------------------------------


def _as_function(D: Digraph, f: VectorFunction | Sequence[Sequence[int]]) -> VectorFunction:
    if not isinstance(f, VectorFunction):
        f = VectorFunction(f)
    if len(f) != D.n:
        raise PreconditionError(f"function has {len(f)} vectors for {D.n} vertices")
    return f


def degree_condition_violations(
    D: Digraph, f: VectorFunction | Sequence[Sequence[int]], vertices: Optional[Iterable[int]] = None
) -> list[int]:
    """Vertices with sum_i f_i(v) < max{d+(v), d-(v)} inside D[vertices]."""
    if vertices is None:
        return [
            v for v in range(D.n) if sum(f[v]) < max(len(D.succ[v]), len(D.pred[v]))
        ]
    vs = _vertex_set(D, vertices)
    return [
        v for v in sorted(vs) if sum(f[v]) < max(D.out_degree(v, vs), D.in_degree(v, vs))
    ]


def _require_tight(D: Digraph, f: VectorFunction, vs: frozenset[int]) -> None:
    for v in sorted(vs):
        dp, dm = D.out_degree(v, vs), D.in_degree(v, vs)
        if not sum(f[v]) == dp == dm:
            raise PreconditionError(
                f"vertex {v + 1} needs sum f = d+ = d- (have {sum(f[v])}, {dp}, {dm})"
            )


def _require_block(D: Digraph, vs: frozenset[int]) -> None:
    if len(vs) > 1 and len(block_decomposition(D, vs).blocks) != 1:
        raise PreconditionError("the vertex set does not induce a block")


def _require_connected(D: Digraph, vs: frozenset[int]) -> None:
    if len(components(D, vs)) != 1:
        raise PreconditionError("the digraph must be connected")


# -- public operations ----------------------------------------------------------


def greedy_partition(
    D: Digraph, f, v_star: int, vertices: Optional[Iterable[int]] = None
) -> Partition:
    """Greedy f-partition of a connected digraph ending at a slack vertex."""
    f = _as_function(D, f)
    vs = _vertex_set(D, vertices)
    _require_connected(D, vs)
    if v_star not in vs:
        raise PreconditionError(f"vertex {v_star} not in the vertex set")
    bad = degree_condition_violations(D, f, vs)
    if bad:
        raise DegreeConditionError(bad)
    if sum(f[v_star]) <= min(D.out_degree(v_star, vs), D.in_degree(v_star, vs)):
        raise PreconditionError(f"vertex {v_star + 1} has no slack")
    eng = _Engine(D, f.p)
    return Partition(f.p, eng.greedy(vs, f, v_star))


def greedy_partition_minus(
    D: Digraph, f, v: int, vertices: Optional[Iterable[int]] = None
) -> Partition:
    """Greedy f-partition of D - v, component by component."""
    f = _as_function(D, f)
    vs = _vertex_set(D, vertices)
    _require_connected(D, vs)
    if v not in vs:
        raise PreconditionError(f"vertex {v} not in the vertex set")
    bad = degree_condition_violations(D, f, vs)
    if bad:
        raise DegreeConditionError(bad)
    eng = _Engine(D, f.p)
    return Partition(f.p, eng.greedy_minus(vs, f, v))


def shift(
    D: Digraph,
    f,
    v: int,
    w: int,
    P: Partition,
    vertices: Optional[Iterable[int]] = None,
) -> ShiftResult:
    """One shifting step on an Eulerian block in the tight regime."""
    f = _as_function(D, f)
    vs = _vertex_set(D, vertices)
    _require_tight(D, f, vs)
    if not D.adjacent(v, w) or w not in vs:
        raise PreconditionError(f"{w + 1} is not a neighbour of {v + 1}")
    scope = vs - {v}
    check = validate_partition(D, f, P, scope)
    if not check:
        raise PreconditionError(f"not an f-partition of D - v: {check.message}")
    class_of = dict(P.class_of)
    eng = _Engine(D, f.p)
    done = eng.shift(vs, f, class_of, v, w)
    return ShiftResult(Partition(f.p, dict(sorted(class_of.items()))), None if done else w)


def _block_entry(D: Digraph, f, vertices) -> tuple[VectorFunction, frozenset[int]]:
    f = _as_function(D, f)
    vs = _vertex_set(D, vertices)
    _require_block(D, vs)
    _require_tight(D, f, vs)
    return f, vs


def cycle_partition(D: Digraph, f, vertices: Optional[Iterable[int]] = None) -> Partition:
    """f-partition of a non-hard Eulerian block whose underlying graph is a cycle."""
    f, vs = _block_entry(D, f, vertices)
    if not is_cycle(D, vs):
        raise PreconditionError("underlying graph is not a cycle")
    if check_block_type(D, f, vs) is not None:
        raise PreconditionError("(D, f) is a hard pair")
    return Partition(f.p, dict(sorted(_Engine(D, f.p).cycle_partition(vs, f).items())))


def complete_partition(D: Digraph, f, vertices: Optional[Iterable[int]] = None) -> Partition:
    """f-partition of a non-hard Eulerian block whose underlying graph is complete."""
    f, vs = _block_entry(D, f, vertices)
    if not is_complete(D, vs):
        raise PreconditionError("underlying graph is not complete")
    if check_block_type(D, f, vs) is not None:
        raise PreconditionError("(D, f) is a hard pair")
    return Partition(f.p, dict(sorted(_Engine(D, f.p).complete_partition(vs, f).items())))


def block_partition(
    D: Digraph, f, vertices: Optional[Iterable[int]] = None, *, debug: bool = False
) -> Partition | HardPairCertificate:
    """f-partition of an Eulerian block, or its single-leaf certificate."""
    f, vs = _block_entry(D, f, vertices)
    res = _Engine(D, f.p, debug=debug).block_partition(vs, f)
    if isinstance(res, BlockType):
        return make_certificate(f.p, [(vs, {x: f[x] for x in vs}, res)])
    return Partition(f.p, dict(sorted(res.items())))


def solve(D: Digraph, f, *, debug: bool = False) -> SolveOutcome:
    """Partition every component of D or certify it as a hard pair.

    Requires sum_i f_i(v) >= max{d+(v), d-(v)} everywhere. With ``debug`` set,
    every intermediate shifting state is re-validated.
    """
    f = _as_function(D, f)
    bad = degree_condition_violations(D, f)
    if bad:
        raise DegreeConditionError(bad)
    eng = _Engine(D, f.p, debug=debug)
    outs = tuple(eng.solve_component(comp, f) for comp in components(D))
    return SolveOutcome(f.p, outs, eng.shifts, eng.checked_states)
