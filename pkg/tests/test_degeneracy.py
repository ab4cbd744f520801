from __future__ import annotations

from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

from fpartition.degeneracy import (
    Partition,
    VectorFunction,
    is_weakly_degenerate,
    validate_partition,
    weak_core,
)
from fpartition.digraph import Digraph, bidirected_complete, directed_cycle
from test_digraph import digraphs


def brute_force_degenerate(D: Digraph, h, members) -> bool:
    """Every non-empty subset has a vertex with min{d+, d-} < h inside it."""
    members = list(members)
    for k in range(1, len(members) + 1):
        for S in combinations(members, k):
            s = set(S)
            if all(min(D.out_degree(v, s), D.in_degree(v, s)) >= h[v] for v in S):
                return False
    return True


class TestVectorFunction:
    def test_constant_and_access(self):
        f = VectorFunction.constant(3, (1, 2))
        assert f.p == 2 and f[1] == (1, 2) and f.total(2) == 3
        assert f.coordinate(1) == (2, 2, 2)

    def test_rejects_bad_vectors(self):
        with pytest.raises(ValueError, match="length"):
            VectorFunction([(1, 0), (1,)])
        with pytest.raises(ValueError, match="negative"):
            VectorFunction([(1, -1)])
        with pytest.raises(ValueError):
            VectorFunction([], p=0)
        with pytest.raises(ValueError):
            VectorFunction([])

    def test_equality(self):
        assert VectorFunction([(1, 0)]) == VectorFunction([[1, 0]])
        assert len({VectorFunction([(1, 0)]), VectorFunction([(1, 0)])}) == 1


class TestPartition:
    def test_classes(self):
        P = Partition.from_list(2, [0, 1, 0])
        assert P.classes() == [frozenset({0, 2}), frozenset({1})]
        assert P.as_list(3) == [0, 1, 0]

    def test_rejects_class_out_of_range(self):
        with pytest.raises(ValueError):
            Partition.from_list(2, [0, 2])


class TestWeakCore:
    def test_directed_triangle(self):
        assert weak_core(directed_cycle(3), [1, 1, 1]) == {0, 1, 2}
        assert not is_weakly_degenerate(directed_cycle(3), [1, 1, 1])

    def test_path_cascades_to_empty(self):
        assert weak_core(Digraph(3, [(0, 1), (1, 2)]), [1, 1, 1]) == frozenset()

    def test_bidirected_k4(self):
        K = bidirected_complete(4)
        assert weak_core(K, [3] * 4) == set(range(4))
        assert weak_core(K, [4] * 4) == frozenset()

    def test_acyclic_is_weakly_one_degenerate(self):
        D = Digraph(4, [(0, 1), (0, 2), (1, 3), (2, 3), (0, 3)])
        assert is_weakly_degenerate(D, [1] * 4)

    def test_zero_threshold_never_degenerate(self):
        assert not is_weakly_degenerate(Digraph(1), [0])

    def test_restricted_to_vertices(self):
        D = directed_cycle(4)
        assert weak_core(D, [1] * 4, {0, 1, 2}) == frozenset()

    def test_rejects_short_h(self):
        with pytest.raises(ValueError):
            weak_core(directed_cycle(3), [1, 1])


class TestValidatePartition:
    def test_directed_four_cycle_split(self):
        P = Partition.from_list(2, [0, 0, 0, 1])
        assert validate_partition(directed_cycle(4), VectorFunction.constant(4, (1, 1)), P)

    def test_directed_triangle_single_class(self):
        check = validate_partition(directed_cycle(3), VectorFunction.constant(3, (1,)), Partition.from_list(1, [0, 0, 0]))
        assert not check
        assert check.witness == (0, frozenset({0, 1, 2}))

    def test_three_vertices_in_first_class_of_k4(self):
        check = validate_partition(
            bidirected_complete(4), VectorFunction.constant(4, (2, 0, 1)), Partition.from_list(3, [0, 0, 0, 2])
        )
        assert not check and check.witness == (0, frozenset({0, 1, 2}))

    def test_not_total(self):
        check = validate_partition(directed_cycle(3), VectorFunction.constant(3, (1,)), {0: 0, 1: 0})
        assert not check and "not total" in check.message

    def test_p_mismatch(self):
        check = validate_partition(directed_cycle(3), VectorFunction.constant(3, (1,)), Partition.from_list(2, [0, 1, 1]))
        assert not check

    def test_class_out_of_range_in_mapping(self):
        check = validate_partition(directed_cycle(2), [(1, 1), (1, 1)], {0: 0, 1: 5})
        assert not check


@settings(max_examples=200, deadline=None)
@given(digraphs(max_n=7), st.data())
def test_weak_core_is_maximal_violator(D, data):
    h = data.draw(st.lists(st.integers(0, 3), min_size=D.n, max_size=D.n))
    X = weak_core(D, h)
    for v in X:
        assert min(D.out_degree(v, X), D.in_degree(v, X)) >= h[v]
    # any other violating set lies inside X
    for k in range(1, D.n + 1):
        for S in combinations(range(D.n), k):
            s = set(S)
            if all(min(D.out_degree(v, s), D.in_degree(v, s)) >= h[v] for v in S):
                assert s <= X
    assert is_weakly_degenerate(D, h) == brute_force_degenerate(D, h, range(D.n))


@settings(max_examples=200, deadline=None)
@given(digraphs(max_n=8), st.data())
def test_degeneracy_monotone_in_h(D, data):
    h = data.draw(st.lists(st.integers(0, 3), min_size=D.n, max_size=D.n))
    if not D.n:
        return
    v = data.draw(st.integers(0, D.n - 1))
    raised = list(h)
    raised[v] += 1
    if is_weakly_degenerate(D, h):
        assert is_weakly_degenerate(D, raised)


@settings(max_examples=200, deadline=None)
@given(digraphs(max_n=8), st.data())
def test_core_independent_of_relabelling(D, data):
    h = data.draw(st.lists(st.integers(0, 3), min_size=D.n, max_size=D.n))
    perm = data.draw(st.permutations(range(D.n)))
    E = Digraph(D.n, [(perm[u], perm[v]) for u, v in D.arcs])
    g = [0] * D.n
    for v in range(D.n):
        g[perm[v]] = h[v]
    assert weak_core(E, g) == {perm[v] for v in weak_core(D, h)}


@settings(max_examples=150, deadline=None)
@given(digraphs(max_n=7), st.data())
def test_valid_partitions_are_hereditarily_degenerate(D, data):
    p = data.draw(st.integers(1, 3))
    f = VectorFunction(
        [data.draw(st.lists(st.integers(0, 2), min_size=p, max_size=p)) for _ in range(D.n)], p=p
    )
    P = Partition.from_list(p, data.draw(st.lists(st.integers(0, p - 1), min_size=D.n, max_size=D.n)))
    expected = all(
        brute_force_degenerate(D, f.coordinate(i), cls) for i, cls in enumerate(P.classes())
    )
    assert bool(validate_partition(D, f, P)) == expected
