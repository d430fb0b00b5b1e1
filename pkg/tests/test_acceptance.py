"""The nine acceptance criteria, one test each.

Every test prints a single ``criterion N: PASS`` or ``criterion N: FAIL``
line (visible under ``pytest -s`` and in ``pytest -v`` output) before its
assertion.  Run this file directly for the same lines without pytest's
report around them.
"""

from __future__ import annotations

import sys
import time
from functools import lru_cache

import pytest

from tangleduality.blocks import find_k_blocks, find_k_blocks_bruteforce, orientation_from_block
from tangleduality.corpus import KNOWN_COUNTS, corpus
from tangleduality.duality import (
    StarFamily,
    family_for,
    induced_separations,
    reconstruction_mismatches,
    stree_to_treedec,
    verify_duality,
    verify_stree,
)
from tangleduality.families import (
    Orientation,
    ProfileFamily,
    TangleFamily,
    TangleStarFamily,
    all_f_tangles,
    avoids,
    orientation_flags,
    two_profile,
)
from tangleduality.graphsep import complete_graph, cycle_graph, enumerate_Sk, enumerate_Sk_bruteforce, path_graph
from tangleduality.widths import dual_tree_exists, interior_bound, tree_width, verify_inequalities, width_report

from _support import graphs, grid, naive_consistent, naive_flags, pipeline, system

MODES = ("canonical_all", "lean")
INSTANCES = [("block", k) for k in (1, 2, 3, 4)] + [(f, k) for f in ("profile", "tangle") for k in (3, 4)]


def _report(n, ok, detail=""):
    line = f"criterion {n}: {'PASS' if ok else 'FAIL'}"
    if detail:
        line += f" ({detail})"
    print(line, flush=True)


@pytest.fixture
def emit(capsys):
    def _emit(n, ok, detail=""):
        with capsys.disabled():
            _report(n, ok, detail)

    return _emit


@lru_cache(maxsize=None)
def duality_sweep():
    """verify_duality on every corpus instance; (G, kind, k, mode) -> report or error text."""
    out = {}
    for G in graphs(6):
        for kind, k in INSTANCES:
            for mode in MODES:
                try:
                    out[G, kind, k, mode] = verify_duality(G, k, kind, mode)
                except Exception as e:  # recorded as a failure of the criterion
                    out[G, kind, k, mode] = f"{type(e).__name__}: {e}"
    return out


def check_1():
    assert len(graphs(6)) == sum(KNOWN_COUNTS[n] for n in range(1, 7)) == 143
    bad = []
    for key, r in duality_sweep().items():
        if isinstance(r, str) or (r.tangle is None) == (r.tree is None):
            bad.append((key, r if isinstance(r, str) else "both or neither"))
    return not bad, f"{len(duality_sweep())} instances, {len(bad)} failures"


def _flip(G, kind, upto):
    for k in range(1, upto + 1):
        if dual_tree_exists(G, k, kind, "lean"):
            return k
    return None


def check_2():
    bad = []
    for G in graphs(6):
        rep = width_report(G, check_duality=False)
        for kind, val in (("block", rep.bw), ("profile", rep.pw)):
            if _flip(G, kind, val + 1) != val + 1:
                bad.append((G, kind))
    return not bad, f"{len(bad)} mismatches"


def check_3():
    bad = []
    # strongly consistent <=> consistent and regular; inconsistent orientations
    # satisfy neither side, so the consistent ones (all enumerated) decide it
    for G in graphs(5):
        for k in (2, 3):
            S = system(G, k)
            strong = set(all_f_tangles(S, None, True))
            for m in naive_consistent(S):
                f = naive_flags(S, m)
                if f["strongly_consistent"] != f["regular"] or (m in strong) != f["regular"]:
                    bad.append(("strong consistency", G, k))
    for G in graphs(6):
        for k in (3, 4):
            S = system(G, k)
            for m in all_f_tangles(S, ProfileFamily(), False):
                if not orientation_flags(Orientation(S, m))["regular"]:
                    bad.append(("profile regularity", G, k))
        if G.n > 1:
            # K1 has no 2-profile: (V, V) is forced and is itself a member of P
            O = two_profile(G)
            if not (all(orientation_flags(O).values()) and avoids(O, ProfileFamily())):
                bad.append(("2-profile", G))
        for kind in ("block", "profile"):
            for k in (1, 2, 3, 4):
                want = set(all_f_tangles(system(G, k), family_for(kind, k), True))
                for mode in MODES:
                    S, _, Fstar, Fhat, _ = pipeline(G, k, kind, mode)
                    for fam, stage in ((Fstar, "uncrossed"), (Fhat, "shift closed")):
                        if set(all_f_tangles(S, fam.as_family(), True)) != want:
                            bad.append((stage, G, kind, k, mode))
    return not bad, f"{len(bad)} violations"


def check_4():
    bad = []
    for G in graphs(5):
        for k in (2, 3):
            S = system(G, k)
            if set(all_f_tangles(S, TangleFamily(), False)) != set(all_f_tangles(S, TangleStarFamily(), False)):
                bad.append((G, k))
    return not bad, f"{len(bad)} mismatches"


def check_5():
    t = time.perf_counter()
    none = find_k_blocks(grid(5), 5) == []
    dt = time.perf_counter() - t
    ok = none and dt < 60 and tree_width(grid(3)) == 3 and tree_width(grid(4)) == 4
    return ok, f"H5 block search {dt:.1f}s"


def check_6():
    named = [complete_graph(n) for n in range(2, 7)] + [path_graph(n) for n in range(2, 7)]
    named += [cycle_graph(n) for n in range(3, 7)] + [grid(2), grid(3)]
    bad = []
    for G in list(graphs(6)) + named:
        try:
            if not all(verify_inequalities(G)["chains"].values()):
                bad.append(G)
        except Exception as e:
            bad.append((G, str(e)))
    return not bad, f"{len(graphs(6)) + len(named)} graphs, {len(bad)} failures"


def check_7():
    bad = []
    for G in graphs(6):
        for k in (1, 2, 3, 4):
            for mode in MODES:
                S, _, Fstar, _, _ = pipeline(G, k, "profile", mode)
                for t in Fstar.stars:
                    size = bin(S.interior_mask(t)).count("1")
                    if size > interior_bound(k):
                        bad.append((G, k, t))
    return not bad, f"{len(bad)} stars over the bound"


def check_8():
    bad = []
    for G in graphs(6):
        for k in range(1, G.n + 2):
            S = enumerate_Sk(G, k)
            if set(zip(S.Am, S.Bm)) != enumerate_Sk_bruteforce(G, k):
                bad.append(("Sk", G, k))
    for G in corpus(8, min_n=1):
        for k in range(1, G.n + 1):
            if find_k_blocks(G, k) != find_k_blocks_bruteforce(G, k):
                bad.append(("blocks", G, k))
    return not bad, f"{len(bad)} mismatches"


def check_9():
    bad = []
    trees = 0
    for (G, kind, k, mode), r in duality_sweep().items():
        if isinstance(r, str):
            bad.append((G, kind, k, mode, r))
            continue
        if r.tree is not None:
            trees += 1
            S = r.tree.system
            Fbar = StarFamily(S, set(pipeline(G, k, kind, mode)[4].stars))
            td = stree_to_treedec(r.tree, G)
            seps = induced_separations(td)
            if reconstruction_mismatches(r.tree, td) or not verify_stree(r.tree, S, Fbar):
                bad.append((G, kind, k, mode, "tree"))
            if len(seps) != 2 * len(td.edges):
                bad.append((G, kind, k, mode, "edges"))
        else:
            O = r.tangle
            F = family_for(kind, k)
            if not (all(orientation_flags(O).values()) and avoids(O, F)):
                bad.append((G, kind, k, mode, "tangle"))
            if kind == "block":
                blocks = find_k_blocks(G, k)
                if O.mask not in {orientation_from_block(b, O.system).mask for b in blocks}:
                    bad.append((G, kind, k, mode, "block"))
    return not bad, f"{trees} trees, {len(bad)} failures"


CHECKS = [check_1, check_2, check_3, check_4, check_5, check_6, check_7, check_8, check_9]


@pytest.mark.parametrize("n", range(1, 10))
def test_criterion(n, emit):
    ok, detail = CHECKS[n - 1]()
    emit(n, ok, detail)
    assert ok, detail


if __name__ == "__main__":
    failed = 0
    for i, check in enumerate(CHECKS, 1):
        ok, detail = check()
        _report(i, ok, detail)
        failed += not ok
    sys.exit(1 if failed else 0)
