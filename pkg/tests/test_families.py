from itertools import combinations

import pytest
from hypothesis import given, settings

from tangleduality.blocks import orientation_from_block, find_k_blocks
from tangleduality.families import (
    BlockFamily,
    Orientation,
    ProfileFamily,
    StarListFamily,
    TangleFamily,
    TangleStarFamily,
    all_f_tangles,
    avoids,
    cutvertices,
    family_Bk,
    family_P,
    family_Sn,
    family_T,
    family_Tstar,
    find_f_tangle,
    irregular_two_profile,
    iter_consistent_orientations,
    orientation_flags,
    tables,
    two_profile,
)
from tangleduality.graphsep import Graph, enumerate_Sk, grid_graph, mask_of, system_of
from tangleduality.sepsys import DomainError
from tangleduality.widths import tree_width

from _support import C4, K3, P3, graphs, label, naive_consistent, naive_flags, sep, system
from strategies import connected_graphs, small_graphs


def _block(G, k, verts):
    return next(b for b in find_k_blocks(G, k) if b.vertices == frozenset(verts))


# -- orientations -----------------------------------------------------------


def test_block_orientation_flags():
    S = system(P3, 2)
    O = orientation_from_block(_block(P3, 2, {0, 1}), S)
    assert orientation_flags(O) == {"consistent": True, "strongly_consistent": True, "regular": True}


def test_irregular_two_profile():
    for G, x in ((P3, 0), (K3, 1), (C4, 2)):
        O = irregular_two_profile(G, x)
        f = orientation_flags(O)
        assert f["consistent"] and not f["regular"] and not f["strongly_consistent"]
        assert avoids(O, ProfileFamily())
    with pytest.raises(DomainError):
        irregular_two_profile(P3, 1)


def test_injected_inconsistency():
    S = system(P3, 2)
    O = orientation_from_block(_block(P3, 2, {0, 1}), S)
    empty = S.lookup(0, P3.full)
    bad = Orientation(S, O.mask & ~(1 << empty) | 1 << int(S.inv[empty]))
    assert orientation_flags(bad)["consistent"] is False


def test_orientation_must_be_total_and_proper():
    S = system(P3, 2)
    with pytest.raises(DomainError):
        Orientation(S, 1)
    with pytest.raises(DomainError):
        Orientation(S, (1 << len(S)) - 1)


def test_orientation_json():
    S = system(P3, 2)
    O = orientation_from_block(_block(P3, 2, {0, 1}), S)
    data = O.to_json()
    assert len(data) == S.n_seps
    assert {"A": [1, 2], "B": [0, 1]} in data
    assert all(sorted(d["A"]) == d["A"] and sorted(d["B"]) == d["B"] for d in data)


# -- avoidance and membership -----------------------------------------------


def test_avoid_examples():
    S = system(P3, 2)
    O = orientation_from_block(_block(P3, 2, {0, 1}), S)
    assert avoids(O, StarListFamily([]))
    assert avoids(O, [])
    assert avoids(O, BlockFamily(2))
    S3 = system(P3, 3)
    orientations = list(iter_consistent_orientations(S3))
    assert orientations
    for m in orientations:
        assert not avoids(Orientation(S3, m), TangleFamily())


def test_tangle_member_with_repetition():
    S = system(P3, 3)
    a = S.idx(label(S, [1, 2], [1, 2, 3]))
    b = S.idx(label(S, [2, 3], [1, 2, 3]))
    T = family_T(P3)
    assert T.contains(S, [a, b])
    assert T.contains(S, [a, b, b])
    assert not T.contains(S, [a])


def test_profile_member_with_equal_pair():
    S = system(P3, 2)
    r = S.idx(label(S, [1], [1, 2, 3]))
    c = int(S.meet[S.inv[r], S.inv[r]])
    assert c == S.inv[r]
    assert family_P().contains(S, [r, c])


def test_b5_member_on_the_grid():
    H = grid_graph(5)
    nb = lambda v: {v} | {u for u in range(25) if H.adjacent(u, v)}
    V = set(range(25))
    v, u, corner = 12, 13, 0
    seps = [(V - {w}, nb(w)) for w in (v, u, corner)]
    S = system_of(H, 5, seps)
    idx = [S.lookup(mask_of(A), mask_of(B)) for A, B in seps]
    assert all(S.order[i] < 5 for i in idx)
    B5 = family_Bk(H, 5)
    assert B5.contains(S, idx[:2])
    assert B5.contains(S, idx[2:])
    assert not B5.contains(S, idx[:1])


def test_family_constructors():
    assert family_Tstar(P3).name == "Tstar"
    assert family_Sn(None, 3).parameter == 3
    assert repr(family_Bk(P3, 4)) == "Bk(4)"


# -- search -----------------------------------------------------------------


def test_search_examples():
    assert find_f_tangle(system(P3, 2), TangleFamily(), True) is not None
    assert find_f_tangle(system(P3, 3), TangleFamily(), True) is None
    assert find_f_tangle(system(C4, 3), BlockFamily(3), True) is None


def test_found_tangles_verify():
    for G in graphs(5):
        for k in (2, 3):
            S = system(G, k)
            for F in (TangleFamily(), ProfileFamily(), BlockFamily(k)):
                for m in all_f_tangles(S, F, True):
                    O = Orientation(S, m)
                    assert orientation_flags(O)["strongly_consistent"]
                    assert avoids(O, F)


def test_search_enumerates_every_consistent_orientation():
    for G in graphs(5):
        for k in (1, 2, 3):
            S = system(G, k)
            assert sorted(iter_consistent_orientations(S)) == sorted(naive_consistent(S))


def test_flags_match_definitions():
    for G in graphs(4):
        for k in (2, 3, 4):
            S = system(G, k)
            for m in naive_consistent(S):
                assert orientation_flags(Orientation(S, m)) == naive_flags(S, m)


def _naive_avoids(S, F, mask):
    chosen = [i for i in range(len(S)) if mask >> i & 1]
    for size in range(1, min(len(chosen), 4) + 1):
        for combo in combinations(chosen, size):
            if F.contains(S, combo):
                return False
    return True


def test_find_member_agrees_with_membership():
    for G in graphs(4):
        for k in (2, 3):
            S = system(G, k)
            for F in (TangleFamily(), TangleStarFamily(), ProfileFamily(), BlockFamily(k)):
                for m in naive_consistent(S):
                    if isinstance(F, BlockFamily):
                        # members of any size: the running intersection decides
                        want = F.find_member(S, m) is None
                        inter = G.full
                        for i in range(len(S)):
                            if m >> i & 1:
                                inter &= S.Bm[i]
                        assert want == (bin(inter).count("1") >= k)
                    else:
                        assert (F.find_member(S, m) is None) == _naive_avoids(S, F, m)


def test_minimal_members_generate_the_same_avoidance():
    for G in graphs(5):
        for k in (2, 3):
            S = system(G, k)
            deg = tables(S).degenerate_mask
            for F in (TangleFamily(), ProfileFamily(), BlockFamily(k)):
                mins = StarListFamily(F.minimal_members(S))
                for m in iter_consistent_orientations(S):
                    # degenerate elements are stripped from the minimal members
                    # and sit in every orientation
                    assert (F.find_member(S, m) is None) == (mins.find_member(S, m & ~deg | deg) is None)


# -- 2-profiles ---------------------------------------------------------------


def test_two_profile_of_p3_is_the_block_orientation():
    O = two_profile(P3, x=0)
    assert O.mask == orientation_from_block(_block(P3, 2, {0, 1}), system(P3, 2)).mask


def test_two_profile_k3():
    for x in range(3):
        O = two_profile(K3, x=x)
        assert all(orientation_flags(O).values())
        assert avoids(O, ProfileFamily())


def test_two_profile_single_vertex():
    G = Graph(1, frozenset())
    O = two_profile(G)
    assert orientation_flags(O)["regular"]
    # (V, V) lies in every orientation and {(V, V)} is a member of P, so K1 has
    # no 2-profile at all (see the ledger)
    assert not avoids(O, ProfileFamily())
    with pytest.raises(DomainError):
        two_profile(Graph(0, frozenset()))


def test_regular_two_profile_on_corpus():
    for G in graphs(6):
        if G.n == 1:
            continue
        cuts = cutvertices(G)
        assert len(cuts) < G.n
        O = two_profile(G)
        assert all(orientation_flags(O).values())
        assert avoids(O, ProfileFamily())


# -- lemmas over the corpus -------------------------------------------------------


def test_profiles_above_two_are_regular():
    for G in graphs(6):
        for k in (3, 4):
            S = system(G, k)
            for m in all_f_tangles(S, ProfileFamily(), False):
                assert orientation_flags(Orientation(S, m))["regular"]


def test_tangles_avoid_profile_triples():
    for G in graphs(6):
        for k in (2, 3, 4):
            S = system(G, k)
            for m in all_f_tangles(S, TangleFamily(), False):
                assert avoids(Orientation(S, m), ProfileFamily())


def test_tangles_equal_star_tangles():
    for G in graphs(5):
        for k in (2, 3, 4):
            S = system(G, k)
            assert set(all_f_tangles(S, TangleFamily(), False)) == set(
                all_f_tangles(S, TangleStarFamily(), False)
            )


def _sk_tangle(G, k):
    return find_f_tangle(system(G, k), family_Sn(None, k), False) is not None


def test_star_interior_tangles_match_tree_width():
    for G in graphs(6):
        tw = tree_width(G)
        for k in range(1, G.n + 2):
            assert _sk_tangle(G, k) == (k <= tw + 1), (G, k)


@settings(max_examples=25, deadline=None)
@given(connected_graphs(max_n=6))
def test_block_tangles_are_block_orientations(G):
    for k in (1, 2, 3):
        S = enumerate_Sk(G, k)
        want = {orientation_from_block(b, S).mask for b in find_k_blocks(G, k)}
        assert set(all_f_tangles(S, BlockFamily(k), True)) == want


@settings(max_examples=25, deadline=None)
@given(small_graphs(min_n=2, max_n=6))
def test_search_is_deterministic(G):
    S1, S2 = enumerate_Sk(G, 3), enumerate_Sk(G, 3)
    assert all_f_tangles(S1, ProfileFamily(), True) == all_f_tangles(S2, ProfileFamily(), True)
