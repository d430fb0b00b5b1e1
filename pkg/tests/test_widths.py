from itertools import permutations

import pytest
from hypothesis import given, settings

from tangleduality.graphsep import Graph, complete_graph, cycle_graph, path_graph
from tangleduality.sepsys import DomainError
from tangleduality.widths import (
    adjusted_branch_width,
    block_width,
    dual_flip,
    has_structure,
    interior_bound,
    profile_width,
    tree_width,
    tree_width_via_tangles,
    verify_inequalities,
    width_report,
)

from _support import C4, K3, P3, graphs, grid
from strategies import connected_graphs, small_graphs


def _tw_by_orderings(G):
    """Tree-width as the best elimination ordering, tried exhaustively."""
    if not G.edges:
        return 0
    best = G.n
    for order in permutations(range(G.n)):
        nb = {v: set(u for u in range(G.n) if G.adjacent(u, v)) for v in range(G.n)}
        width = 0
        for v in order:
            width = max(width, len(nb[v]))
            for a in nb[v]:
                nb[a] |= nb[v] - {a}
                nb[a].discard(v)
            del nb[v]
            for a in nb:
                nb[a].discard(v)
        best = min(best, width)
    return best


def test_tree_width_examples():
    assert tree_width(path_graph(5)) == 1
    for n in range(2, 7):
        assert tree_width(complete_graph(n)) == n - 1
    assert tree_width(grid(3)) == 3
    assert tree_width(grid(4)) == 4
    assert tree_width(Graph(3, frozenset())) == 0
    with pytest.raises(DomainError):
        tree_width(Graph(0, frozenset()))


def test_tree_width_matches_orderings():
    for G in graphs(6):
        assert tree_width(G) == _tw_by_orderings(G), G


def test_small_width_examples():
    assert adjusted_branch_width(P3) == 2
    assert adjusted_branch_width(K3) == 2
    K4 = complete_graph(4)
    assert profile_width(K4) == 4 and block_width(K4) == 4
    assert block_width(C4) == 2 and profile_width(C4) == 2
    assert adjusted_branch_width(C4) == 2


def test_structure_kind_is_checked():
    with pytest.raises(DomainError):
        has_structure(P3, 2, "bramble")


def test_tree_width_via_star_tangles():
    for G in graphs(5):
        assert tree_width_via_tangles(G) == tree_width(G)


def test_interior_bound_values():
    assert [interior_bound(k) for k in range(1, 7)] == [0, 1, 3, 4, 6, 7]


def _named():
    out = [complete_graph(n) for n in range(2, 7)]
    out += [path_graph(n) for n in range(2, 7)]
    out += [cycle_graph(n) for n in range(3, 7)]
    out += [grid(2), grid(3)]
    return out


def test_inequalities_on_named_graphs():
    for G in _named():
        res = verify_inequalities(G)
        assert all(res["chains"].values())


def test_inequalities_on_corpus():
    for G in graphs(6):
        assert all(verify_inequalities(G)["chains"].values())


def test_flips_sit_one_past_the_values():
    for G in graphs(5):
        rep = width_report(G, check_duality=False)
        assert dual_flip(G, "block") == rep.bw + 1
        assert dual_flip(G, "profile") == rep.pw + 1
        if G.n > 1:
            assert dual_flip(G, "tangle") == rep.brw + 1


def test_grid_block_number_is_small():
    assert block_width(grid(3)) <= 4
    assert block_width(grid(4)) <= 4


def test_report_formats():
    rep = width_report(C4)
    data = rep.to_json()
    assert data["schema"] == "1" and data["tw"] == 2
    assert data["checks"]["flips"] == {"block": 3, "profile": 3, "tangle": 3}
    assert rep.to_csv().splitlines() == ["n,m,tw,brw,pw,bw", "4,4,2,2,2,2"]
    assert rep.dumps() == width_report(C4).dumps()


def test_large_graphs_skip_the_search():
    rep = width_report(grid(4))
    assert rep.brw is None and rep.pw is None and rep.tw == 4
    with pytest.raises(DomainError):
        verify_inequalities(grid(4), rep)


@settings(max_examples=20, deadline=None)
@given(connected_graphs(min_n=2, max_n=6))
def test_existence_flips_once(G):
    for kind, val in (("tangle", adjusted_branch_width(G)), ("profile", profile_width(G))):
        got = [has_structure(G, k, kind) for k in range(1, G.n + 2)]
        assert got == [k <= val for k in range(1, G.n + 2)]


@settings(max_examples=25, deadline=None)
@given(small_graphs(min_n=1, max_n=7))
def test_tree_width_bounds(G):
    tw = tree_width(G)
    assert 0 <= tw <= max(G.n - 1, 0)
    if G.edges:
        assert tw >= 1
