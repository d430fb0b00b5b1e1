"""Width parameters tw, brw, pw, bw and the inequalities linking them."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import asdict, dataclass, field
from fractions import Fraction

import numpy as np

from . import kernels
from .blocks import block_number
from .duality import build_fbar, family_for, stree_exists
from .families import (
    BlockFamily,
    ProfileFamily,
    StarInteriorFamily,
    TangleFamily,
    find_f_tangle,
)
from .graphsep import Graph, enumerate_Sk
from .sepsys import DomainError, InvariantError

# subset DP tables take 2^n bytes
MAX_TW_N = 25
# full separation-system machinery (tangle search, dual trees)
MAX_SEARCH_N = 9


def _nonempty(G: Graph):
    if G.n == 0:
        raise DomainError("the empty graph has no width parameters")


def heuristic_tw_upper(G: Graph) -> int:
    if G.n <= 1 or not G.edges:
        return 0
    from networkx.algorithms.approximation import treewidth_min_degree, treewidth_min_fill_in

    H = G.to_networkx()
    return min(treewidth_min_degree(H)[0], treewidth_min_fill_in(H)[0])


def tree_width(G: Graph) -> int:
    """Exact tree-width by the elimination-ordering subset DP."""
    _nonempty(G)
    if G.n > MAX_TW_N:
        raise DomainError(f"exact tree-width is limited to {MAX_TW_N} vertices")
    if not G.edges:
        return 0
    upper = heuristic_tw_upper(G)
    adj = np.array(G.adj, dtype=np.uint64)
    tw = int(kernels.treewidth_dp(adj, G.n, upper))
    if tw > upper:
        raise InvariantError("tree-width DP exceeded the heuristic upper bound")
    return tw


def has_structure(G: Graph, k: int, kind: str, S=None) -> bool:
    """Does G have a k-tangle / k-profile / k-block / S^k-tangle of S_k?"""
    S = S if S is not None else enumerate_Sk(G, k)
    if kind == "tangle":
        return find_f_tangle(S, TangleFamily(), True) is not None
    if kind == "profile":
        return find_f_tangle(S, ProfileFamily(), True) is not None
    if kind == "block":
        return find_f_tangle(S, BlockFamily(k), True) is not None
    if kind == "Sk":
        return find_f_tangle(S, StarInteriorFamily(k), False) is not None
    raise DomainError(f"unknown structure {kind!r}")


def _max_k(G, kind, start=1):
    """Largest k with the structure; existence is checked to be monotone."""
    k = start
    best = start - 1
    while k <= G.n + 1:
        if has_structure(G, k, kind):
            if best != k - 1:
                raise InvariantError(f"{kind} existence is not monotone in k")
            best = k
        else:
            # one more probe past the flip to catch non-monotone behaviour
            if k + 1 <= G.n + 1 and has_structure(G, k + 1, kind):
                raise InvariantError(f"{kind} existence is not monotone in k")
            break
        k += 1
    return best


def tree_width_via_tangles(G: Graph) -> int:
    """tw(G) + 1 is the largest k admitting an S^k-tangle of S_k."""
    _nonempty(G)
    return _max_k(G, "Sk") - 1


def adjusted_branch_width(G: Graph) -> int:
    """Largest k such that G has a k-tangle."""
    _nonempty(G)
    return _max_k(G, "tangle")


def profile_width(G: Graph) -> int:
    """Largest k such that G has a regular k-profile."""
    _nonempty(G)
    return _max_k(G, "profile")


def block_width(G: Graph) -> int:
    """The block number: largest k such that G has a k-block."""
    return block_number(G)


def dual_tree_exists(G: Graph, k: int, kind: str, mode: str = "lean") -> bool:
    S = enumerate_Sk(G, k)
    _, Fbar = build_fbar(S, family_for(kind, k), mode)
    return stree_exists(S, Fbar) is not None


def dual_flip(G: Graph, kind: str, mode: str = "lean", upto: int | None = None) -> int:
    """Least k such that S_k has a tree over the closed uncrossed family."""
    last = upto if upto is not None else G.n + 1
    for k in range(1, last + 1):
        if dual_tree_exists(G, k, kind, mode):
            return k
    raise InvariantError(f"no dual tree up to k={last}")


@dataclass
class WidthReport:
    n: int
    m: int
    tw: int
    brw: int | None
    pw: int | None
    bw: int
    per_k: dict = field(default_factory=dict)
    checks: dict = field(default_factory=dict)

    def to_json(self):
        d = asdict(self)
        d["per_k"] = {str(k): v for k, v in self.per_k.items()}
        d["schema"] = "1"
        return d

    def dumps(self):
        return json.dumps(self.to_json(), sort_keys=True, indent=2)

    CSV_FIELDS = ("n", "m", "tw", "brw", "pw", "bw")

    def csv_row(self) -> dict:
        return {f: getattr(self, f) for f in self.CSV_FIELDS}

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=self.CSV_FIELDS, lineterminator="\n")
        w.writeheader()
        w.writerow(self.csv_row())
        return buf.getvalue()


def width_report(G: Graph, check_duality: bool | None = None, mode: str = "lean") -> WidthReport:
    """All four parameters; with ``check_duality`` the dual-tree flips are verified."""
    _nonempty(G)
    tw = tree_width(G)
    bw = block_width(G)
    search = G.n <= MAX_SEARCH_N
    brw = adjusted_branch_width(G) if search else None
    pw = profile_width(G) if search else None
    if check_duality is None:
        check_duality = G.n <= 6
    per_k = {}
    if search:
        for k in range(1, (pw or 0) + 2):
            per_k[k] = {
                "tangle": k <= brw,
                "profile": k <= pw,
                "block": k <= bw,
            }
    rep = WidthReport(G.n, len(G.edges), tw, brw, pw, bw, per_k)
    if check_duality and search:
        flips = {
            "block": dual_flip(G, "block", mode, bw + 1),
            "profile": dual_flip(G, "profile", mode, pw + 1),
            "tangle": dual_flip(G, "tangle", mode, brw + 1),
        }
        for kind, val in (("block", bw), ("profile", pw), ("tangle", brw)):
            if flips[kind] != val + 1:
                raise InvariantError(f"{kind}: value {val} but dual trees start at k={flips[kind]}")
        for k in per_k:
            for kind, val in (("block", bw), ("profile", pw), ("tangle", brw)):
                per_k[k][f"tree_{kind}"] = k >= flips[kind]
        rep.checks["flips"] = flips
    return rep


def verify_inequalities(G: Graph, rep: WidthReport | None = None) -> dict:
    """The three chains relating pw, brw and tw+1; a failure is an invariant error."""
    rep = rep if rep is not None else width_report(G, check_duality=False)
    t = rep.tw + 1
    pw, brw = rep.pw, rep.brw
    if pw is None or brw is None:
        raise DomainError("profile and tangle numbers are unavailable for this graph size")
    half = Fraction(3, 2)
    chains = {
        "pw <= tw+1 <= 3/2 pw": pw <= t <= half * pw,
        "brw <= tw+1 <= 3/2 brw": brw <= t <= half * brw,
        "brw <= pw <= 3/2 brw": brw <= pw <= half * brw,
        "bw <= pw": rep.bw <= pw,
    }
    bad = [name for name, ok in chains.items() if not ok]
    if bad:
        raise InvariantError(f"inequalities fail: {bad} (tw={rep.tw}, brw={brw}, pw={pw}, bw={rep.bw})")
    return {"tw": rep.tw, "brw": brw, "pw": pw, "bw": rep.bw, "chains": chains}


def interior_bound(k: int) -> int:
    return (3 * (k - 1)) // 2
