import time

import pytest
from hypothesis import given, settings

from tangleduality.blocks import (
    Block,
    block_number,
    block_of_orientation,
    connectivity_matrix,
    find_k_blocks,
    find_k_blocks_bruteforce,
    is_inseparable,
    orientation_from_block,
)
from tangleduality.families import (
    BlockFamily,
    Orientation,
    ProfileFamily,
    all_f_tangles,
    avoids,
    orientation_flags,
)
from tangleduality.graphsep import Graph, complete_graph, cycle_graph, enumerate_Sk, path_graph
from tangleduality.sepsys import DomainError

from _support import C4, K3, P3, P5, graphs, grid, label, system
from strategies import small_graphs


def test_inseparable_examples():
    assert is_inseparable(P3, set(), 5)
    assert is_inseparable(P3, {2}, 5)
    assert not is_inseparable(P3, {0, 1, 2}, 2)
    assert is_inseparable(complete_graph(5), set(range(5)), 4)


def test_block_examples():
    for n in range(1, 7):
        assert find_k_blocks(complete_graph(n), n) == [Block(frozenset(range(n)), n)]
    edges = [frozenset(e) for e in path_graph(5).edges]
    assert sorted(b.vertices for b in find_k_blocks(P5, 2)) == sorted(edges, key=sorted)
    with pytest.raises(DomainError):
        find_k_blocks(P3, 0)
    assert find_k_blocks(P3, 4) == []


def test_no_five_block_in_h5():
    t = time.perf_counter()
    assert find_k_blocks(grid(5), 5) == []
    assert time.perf_counter() - t < 60


def test_connectivity_matrix_is_capped_and_symmetric():
    kappa = connectivity_matrix(C4, 5)
    assert (kappa == kappa.T).all()
    assert kappa[0, 2] == 2 and kappa[0, 1] == 5


def test_block_orientation_examples():
    S = system(K3, 3)
    O = orientation_from_block(Block(frozenset(range(3)), 3), S)
    for i in range(len(S)):
        if S.Bm[i] == K3.full and S.inv[i] != i:
            assert S.elements[i] in O
    S2 = system(P3, 2)
    b = next(b for b in find_k_blocks(P3, 2) if b.vertices == {0, 1})
    assert label(S2, [2, 3], [1, 2]) in orientation_from_block(b, S2)
    # (V, V) sits in S_3 of K2 and every orientation chooses it as itself
    G = complete_graph(2)
    S3 = system(G, 3)
    d = S3.lookup(G.full, G.full)
    assert d >= 0
    for O in all_f_tangles(S3, BlockFamily(3), False):
        assert O >> d & 1


def test_block_orientation_errors():
    S = system(P3, 2)
    with pytest.raises(DomainError):
        orientation_from_block(Block(frozenset({0, 1, 2}), 2), S)
    with pytest.raises(DomainError):
        orientation_from_block(Block(frozenset({0, 1}), 3), S)


def test_block_number_examples():
    for n in range(1, 7):
        assert block_number(complete_graph(n)) == n
    assert block_number(cycle_graph(4)) == 2
    assert block_number(P5) == 2
    with pytest.raises(DomainError):
        block_number(Graph(0, frozenset()))


def test_grid_block_numbers_stay_small():
    for k in (3, 4):
        assert block_number(grid(k)) <= 4


def test_block_tangles_are_exactly_the_block_orientations():
    for G in graphs(6):
        for k in (1, 2, 3, 4):
            S = system(G, k)
            blocks = find_k_blocks(G, k)
            want = {orientation_from_block(b, S).mask for b in blocks}
            assert len(want) == len(blocks)
            got = set(all_f_tangles(S, BlockFamily(k), True))
            assert got == want, (G, k)
            for m in got:
                O = Orientation(S, m)
                assert Block(block_of_orientation(O), k) in blocks
                assert avoids(O, ProfileFamily())
                assert all(orientation_flags(O).values())


def test_clique_reduction_matches_oracle_small():
    for G in graphs(6):
        for k in range(1, G.n + 1):
            assert find_k_blocks(G, k) == find_k_blocks_bruteforce(G, k)


@settings(max_examples=40, deadline=None)
@given(small_graphs(max_n=8))
def test_clique_reduction_matches_oracle_random(G):
    for k in range(1, G.n + 1):
        assert find_k_blocks(G, k) == find_k_blocks_bruteforce(G, k)


@settings(max_examples=30, deadline=None)
@given(small_graphs(max_n=7))
def test_blocks_are_inseparable_and_maximal(G):
    for k in range(1, G.n + 1):
        blocks = find_k_blocks(G, k)
        for b in blocks:
            assert len(b.vertices) >= k
            assert is_inseparable(G, b.vertices, k)
            for v in set(range(G.n)) - b.vertices:
                assert not is_inseparable(G, b.vertices | {v}, k)
        assert len({b.vertices for b in blocks}) == len(blocks)


@settings(max_examples=20, deadline=None)
@given(small_graphs(max_n=6))
def test_block_existence_is_monotone(G):
    present = [bool(find_k_blocks(G, k)) for k in range(1, G.n + 2)]
    assert present == sorted(present, reverse=True)
    S = enumerate_Sk(G, 1)
    assert all_f_tangles(S, BlockFamily(1), True)
