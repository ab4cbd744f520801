from __future__ import annotations

import random

import pytest
from hypothesis import given, settings, strategies as st

from fpartition.degeneracy import Partition, VectorFunction, validate_partition
from fpartition.digraph import (
    Digraph,
    bidirected,
    bidirected_complete,
    bidirected_cycle,
    block_decomposition,
    directed_cycle,
    disjoint_union,
    induced_subdigraph,
    is_eulerian,
)
from fpartition.engine import (
    DegreeConditionError,
    InvariantError,
    PreconditionError,
    SafetyCapExceeded,
    _Engine,
    block_partition,
    complete_partition,
    cycle_partition,
    degree_condition_violations,
    greedy_partition,
    greedy_partition_minus,
    shift,
    solve,
)
from fpartition.hardpairs import BlockType, HardPairCertificate, check_block_type, validate_certificate
from fpartition.oracle import oracle_solve, random_connected_eulerian_digraph, random_tight_function
from instances import hard_pair_chain

# K4 whose pairs {0,1}, {1,2}, {2,0} carry one arc each (0 -> 1 -> 2 -> 0) and
# whose pairs with vertex 3 are bidirected; Eulerian with degrees 2, 2, 2, 3.
MIXED_K4 = Digraph(4, [(0, 1), (1, 2), (2, 0)] + [(a, 3) for a in range(3)] + [(3, a) for a in range(3)])
# bidirected K4 minus the edge {2, 3}
DIAMOND = bidirected(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3)])


def assert_partition(D, f, P, vertices=None):
    check = validate_partition(D, f, P, vertices)
    assert check, check.message


class TestGreedy:
    def test_single_arc(self):
        P = greedy_partition(Digraph(2, [(0, 1)]), [(1,), (1,)], 0)
        assert P.class_of == {0: 0, 1: 0}

    @pytest.mark.parametrize("v_star", range(4))
    def test_directed_four_cycle(self, v_star):
        D, f = directed_cycle(4), VectorFunction.constant(4, (1, 1))
        assert_partition(D, f, greedy_partition(D, f, v_star))
        assert oracle_solve(D, f).feasible

    def test_bidirected_triangle(self):
        D, f = bidirected_complete(3), VectorFunction.constant(3, (1, 2))
        P = greedy_partition(D, f, 2)
        sizes = [len(c) for c in P.classes()]
        assert sizes[0] <= 1 and sizes[1] <= 2
        assert_partition(D, f, P)
        assert oracle_solve(D, f).feasible

    def test_requires_slack(self):
        with pytest.raises(PreconditionError, match="slack"):
            greedy_partition(directed_cycle(3), [(1,)] * 3, 0)

    def test_requires_connected(self):
        with pytest.raises(PreconditionError):
            greedy_partition(Digraph(2), [(1,), (1,)], 0)

    def test_requires_degree_condition(self):
        with pytest.raises(DegreeConditionError) as err:
            greedy_partition(directed_cycle(3), [(1,), (0,), (1,)], 0)
        assert list(err.value.vertices) == [1]


class TestGreedyMinus:
    def test_directed_triangle(self):
        P = greedy_partition_minus(directed_cycle(3), [(1,)] * 3, 0)
        assert P.class_of == {1: 0, 2: 0}

    @pytest.mark.parametrize("v", range(4))
    def test_bidirected_k4_gives_singletons(self, v):
        D, f = bidirected_complete(4), VectorFunction.constant(4, (1, 1, 1))
        P = greedy_partition_minus(D, f, v)
        assert sorted(len(c) for c in P.classes()) == [1, 1, 1]
        assert_partition(D, f, P, set(range(4)) - {v})

    @pytest.mark.parametrize("v", range(5))
    def test_bidirected_five_cycle_alternates(self, v):
        D, f = bidirected_cycle(5), VectorFunction.constant(5, (1, 1))
        P = greedy_partition_minus(D, f, v)
        path = [(v + k) % 5 for k in range(1, 5)]
        for a, b in zip(path, path[1:]):
            assert P.class_of[a] != P.class_of[b]

    def test_separating_vertex(self):
        # v = 2 splits two triangles; each side is coloured on its own
        D = Digraph(5, [(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 2)])
        P = greedy_partition_minus(D, [(1, 0)] * 2 + [(2, 0)] + [(1, 0)] * 2, 2)
        assert P.vertices == {0, 1, 3, 4}


class TestShift:
    def test_bidirected_five_cycle_swaps(self):
        D, f = bidirected_cycle(5), VectorFunction.constant(5, (1, 1))
        P = Partition(2, {1: 0, 2: 1, 3: 0, 4: 1})
        res = shift(D, f, 0, 1, P)
        assert not res.complete and res.uncolored == 1
        assert res.partition.class_of == {0: 0, 2: 1, 3: 0, 4: 1}
        assert_partition(D, f, res.partition, {0, 2, 3, 4})

    def test_directed_four_cycle_swaps(self):
        D, f = directed_cycle(4), VectorFunction.constant(4, (1, 0))
        P = Partition(2, {1: 0, 2: 0, 3: 0})
        res = shift(D, f, 0, 1, P)
        assert res.uncolored == 1 and res.partition.class_of[0] == 0

    def test_add_branch(self):
        D, f = bidirected_cycle(4), VectorFunction.constant(4, (1, 1))
        P = Partition(2, {1: 0, 2: 1, 3: 0})
        res = shift(D, f, 0, 1, P)
        assert res.complete and res.partition.class_of[0] == 1
        assert_partition(D, f, res.partition)

    def test_rejects_invalid_partition(self):
        D, f = bidirected_cycle(5), VectorFunction.constant(5, (1, 1))
        with pytest.raises(PreconditionError):
            shift(D, f, 0, 1, Partition(2, {1: 0, 2: 0, 3: 0, 4: 1}))

    def test_rejects_non_neighbour(self):
        D, f = bidirected_cycle(5), VectorFunction.constant(5, (1, 1))
        with pytest.raises(PreconditionError):
            shift(D, f, 0, 2, Partition(2, {1: 0, 2: 1, 3: 0, 4: 1}))

    def test_requires_tight_function(self):
        with pytest.raises(PreconditionError):
            shift(directed_cycle(3), [(1, 1)] * 3, 0, 1, Partition(2, {1: 0, 2: 0}))


class TestCyclePartition:
    def test_bidirected_five_cycle_with_one_heavy_vertex(self):
        D = bidirected_cycle(5)
        f = [(1, 1, 0)] * 4 + [(2, 0, 0)]
        P = cycle_partition(D, f)
        assert_partition(D, f, P)
        assert oracle_solve(D, f).feasible

    def test_directed_triangle_is_hard(self):
        with pytest.raises(PreconditionError, match="hard"):
            cycle_partition(directed_cycle(3), [(1, 0)] * 3)

    def test_even_bidirected_cycle(self):
        D, f = bidirected_cycle(4), [(1, 1)] * 4
        assert_partition(D, f, cycle_partition(D, f))
        assert oracle_solve(D, f).feasible

    def test_rejects_non_cycle(self):
        with pytest.raises(PreconditionError):
            cycle_partition(bidirected_complete(4), [(1, 2)] * 4)

    def test_shift_count_within_length_plus_one(self):
        rng = random.Random(4)
        for _ in range(300):
            L = rng.randint(3, 9)
            D = bidirected_cycle(L) if rng.random() < 0.5 else directed_cycle(L)
            p = rng.randint(1, 3)
            f = random_tight_function(rng, D, p)
            if check_block_type(D, f) is not None:
                continue
            eng = _Engine(D, p, debug=True)
            P = Partition(p, eng.cycle_partition(frozenset(range(L)), f))
            assert_partition(D, f, P)
            assert eng.max_cycle_shifts <= L + 1


class TestCompletePartition:
    def test_constant_function_on_k4_is_hard(self):
        with pytest.raises(PreconditionError, match="hard"):
            complete_partition(bidirected_complete(4), [(2, 1)] * 4)

    def test_one_heavy_vertex_on_k4(self):
        D, f = bidirected_complete(4), [(2, 1)] * 3 + [(3, 0)]
        assert_partition(D, f, complete_partition(D, f))
        assert oracle_solve(D, f).feasible

    def test_mixed_orientation_uses_the_triangle(self):
        f = [(1, 1), (0, 2), (0, 2), (1, 2)]
        assert oracle_solve(MIXED_K4, f).feasible
        eng = _Engine(MIXED_K4, 2, debug=True)
        P = Partition(2, eng.complete_partition(frozenset(range(4)), f))
        assert_partition(MIXED_K4, f, P)
        assert eng.shifts >= 1 and eng.checked_states >= 1
        assert complete_partition(MIXED_K4, f) == Partition(2, dict(sorted(P.class_of.items())))

    def test_rejects_non_complete(self):
        with pytest.raises(PreconditionError):
            complete_partition(bidirected_cycle(4), [(1, 1)] * 4)


class TestBlockPartition:
    def test_bidirected_five_cycle_is_c(self):
        cert = block_partition(bidirected_cycle(5), [(1, 1)] * 5)
        assert isinstance(cert, HardPairCertificate)
        assert cert.blocks[0].type == BlockType("C", (0, 1))

    def test_directed_six_cycle_is_m(self):
        cert = block_partition(directed_cycle(6), [(1, 0)] * 6)
        assert cert.blocks[0].type == BlockType("M", (0,))

    @pytest.mark.parametrize(
        "g", [[(2, 1), (2, 1), (1, 1), (1, 1)], [(3, 0), (2, 1), (1, 1), (1, 1)], [(1, 2), (3, 0), (2, 0), (0, 2)]]
    )
    def test_diamond(self, g):
        P = block_partition(DIAMOND, g, debug=True)
        assert isinstance(P, Partition)
        assert_partition(DIAMOND, g, P)
        assert oracle_solve(DIAMOND, g).feasible

    def test_rejects_non_block(self):
        with pytest.raises(PreconditionError, match="block"):
            block_partition(Digraph(3, [(0, 1), (1, 0), (1, 2), (2, 1)]), [(1,), (2,), (1,)])


class TestSolve:
    def test_chain_gives_three_leaves(self):
        D, f, blocks = hard_pair_chain()
        out = solve(D, f)
        assert not out.partitionable and out.partition() is None
        (cert,) = out.certificates
        assert {frozenset(b.vertices): b.type.kind for b in cert.blocks} == {
            blocks["M"]: "M", blocks["K"]: "K", blocks["C"]: "C",
        }
        assert validate_certificate(D, f, cert)

    def test_directed_four_cycle(self):
        D, f = directed_cycle(4), [(1, 1)] * 4
        out = solve(D, f)
        assert out.partitionable
        assert_partition(D, f, out.partition())

    def test_k4_and_triangle_sharing_a_vertex(self):
        # K4 on 0..3 with (2, 1), directed triangle 3 -> 4 -> 5 -> 3 with (1, 0)
        D = Digraph(6, list(bidirected_complete(4).arcs) + [(3, 4), (4, 5), (5, 3)])
        f = [(2, 1)] * 3 + [(3, 1)] + [(1, 0)] * 2
        out = solve(D, f)
        (cert,) = out.certificates
        assert sorted(b.type.kind for b in cert.blocks) == ["K", "M"]
        assert not oracle_solve(D, f).feasible
        for i in range(2):
            g = list(f)
            g[3] = tuple(x + (k == i) for k, x in enumerate(f[3]))
            out = solve(D, g)
            assert out.partitionable
            assert_partition(D, g, out.partition())
            assert oracle_solve(D, g).feasible

    def test_components_solved_separately(self):
        D = disjoint_union(directed_cycle(3), directed_cycle(4))
        f = [(1, 0)] * 3 + [(1, 1)] * 4
        out = solve(D, f)
        assert [c.partitionable for c in out.components] == [False, True]
        assert not out.partitionable
        assert out.components[0].vertices == {0, 1, 2}

    def test_empty_digraph(self):
        out = solve(Digraph(0), VectorFunction([], p=1))
        assert out.partitionable and out.partition().class_of == {}

    def test_isolated_vertex(self):
        assert not solve(Digraph(1), [(0,)]).partitionable
        assert solve(Digraph(1), [(1,)]).partitionable

    def test_degree_condition(self):
        assert degree_condition_violations(directed_cycle(3), [(1,), (0,), (0,)]) == [1, 2]
        with pytest.raises(DegreeConditionError):
            solve(directed_cycle(3), [(1,), (0,), (0,)])

    def test_wrong_length(self):
        with pytest.raises(PreconditionError):
            solve(directed_cycle(3), [(1,)] * 2)

    def test_debug_counts_states(self):
        f = [(1, 2), (0, 3), (0, 2), (1, 1)]
        out = solve(DIAMOND, f, debug=True)
        assert out.partitionable and out.shifts == 3 and out.checked_states == 3
        assert_partition(DIAMOND, f, out.partition())
        assert solve(DIAMOND, f).checked_states == 0

    def test_error_hierarchy(self):
        assert issubclass(SafetyCapExceeded, InvariantError)
        assert issubclass(DegreeConditionError, PreconditionError)
        assert issubclass(PreconditionError, ValueError)


def test_tight_cap_is_reported(monkeypatch):
    # a cap of zero turns any shifting run into a loud failure
    monkeypatch.setattr(_Engine, "_cap", lambda self, vs: 0)
    with pytest.raises(SafetyCapExceeded):
        solve(MIXED_K4, [(1, 1), (0, 2), (0, 2), (1, 2)])


@st.composite
def eulerian_blocks(draw):
    seed = draw(st.integers(0, 10**9))
    rng = random.Random(seed)
    n = draw(st.integers(3, 8))
    D = random_connected_eulerian_digraph(rng, n, rng.randint(1, 5), bidirected_rate=rng.random())
    p = draw(st.integers(1, 3))
    return D, p, rng


@settings(max_examples=300, deadline=None)
@given(eulerian_blocks())
def test_blocks_match_oracle(case):
    D, p, rng = case
    B = max(block_decomposition(D).blocks, key=len)
    if len(B) < 3:
        return
    H = induced_subdigraph(D, B)
    if not is_eulerian(H):
        return
    f = VectorFunction([_spread(rng, H.out_degree(v), p) for v in range(H.n)], p=p)
    res = block_partition(H, f, debug=True)
    feasible = oracle_solve(H, f, budget=10**6).feasible
    if isinstance(res, Partition):
        assert_partition(H, f, res)
        assert feasible
    else:
        assert validate_certificate(H, f, res)
        assert not feasible


def _spread(rng: random.Random, d: int, p: int) -> tuple[int, ...]:
    vec = [0] * p
    for _ in range(d):
        vec[rng.randrange(p)] += 1
    return tuple(vec)
