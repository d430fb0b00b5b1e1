"""Uncrossing, shift closure, standardization and S-trees.

The pipeline for a forbidden family F of a submodular system S:

    F (inclusion-minimal members)  --uncross-->  F*  --shift closure-->  F^*
    --add co-small singletons-->  Fbar*  --least fixpoint-->  S-tree or nothing

All heavy lifting is done on element indices; the label-level helpers at the
bottom of each section translate for callers that hold separations.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from . import kernels
from .families import (
    BlockFamily,
    ForbiddenFamily,
    ProfileFamily,
    StarListFamily,
    TangleFamily,
    find_f_tangle,
)
from .graphsep import Graph, GraphSeparation, GraphSystem, enumerate_Sk, mask_of, vertices_of
from .sepsys import DomainError, InvariantError, SepSystem, is_star_idx

MODES = ("canonical_all", "lean")
FAMILIES = ("block", "profile", "tangle")


# ---------------------------------------------------------------------------
# star families


@dataclass
class StarFamily:
    """A set of stars of ``system``, each a sorted tuple of element indices."""

    system: SepSystem
    stars: set = field(default_factory=set)
    standard: bool = False
    # star -> (stage, parent star, x1, s) for shifts; (0, source member) for uncrossings
    provenance: dict = field(default_factory=dict)
    violations: list = field(default_factory=list)

    def __len__(self):
        return len(self.stars)

    def __contains__(self, star):
        return tuple(sorted(set(star))) in self.stars

    def __iter__(self):
        return iter(sorted(self.stars, key=lambda t: (len(t), t)))

    def labels(self):
        E = self.system.elements
        return [frozenset(E[i] for i in t) for t in self]

    def as_family(self, name="custom") -> StarListFamily:
        return StarListFamily(self.stars, name=name)

    def forced(self) -> set[int]:
        """Elements r with {r*} in the family."""
        inv = self.system.inv
        return {int(inv[t[0]]) for t in self.stars if len(t) == 1}


def _star_key(S, members):
    return tuple(sorted(set(int(i) for i in members)))


# ---------------------------------------------------------------------------
# uncrossing


def _uncross_options(S: SepSystem, a: int, b: int) -> list[tuple[int, int, int, int]]:
    """Replacements for the pair (a, b): list of (old, new) swaps.

    Option 1 replaces a by a ^ b*, option 2 replaces b by b ^ a*.  Options
    whose corner leaves S or is degenerate are dropped.
    """
    out = []
    m1 = int(S.meet[a, S.inv[b]])
    if m1 >= 0 and S.inv[m1] != m1:
        out.append((a, m1))
    m2 = int(S.meet[b, S.inv[a]])
    if m2 >= 0 and S.inv[m2] != m2:
        out.append((b, m2))
    return out


def uncross_pair(x1, x2, S: SepSystem) -> list[frozenset]:
    """Admissible uncrossings of two separations, as 2-element (or collapsed) stars."""
    a, b = S.idx(x1), S.idx(x2)
    if S.inv[a] == a or S.inv[b] == b:
        raise DomainError("cannot uncross a degenerate separation")
    out = []
    for old, new in _uncross_options(S, a, b):
        pair = {new, b} if old == a else {a, new}
        fs = frozenset(S.elements[i] for i in pair)
        if fs not in out:
            out.append(fs)
    return out


def _crossing_pairs(S, state):
    inv = S.inv
    leq = S.leq
    for a, b in combinations(state, 2):
        if not leq[a, inv[b]]:
            yield a, b


def _replace(state, old, new):
    return tuple(sorted(set(new if i == old else i for i in state)))


def _uncross_all(S, state, memo):
    got = memo.get(state)
    if got is not None:
        return got
    res = set()
    crossing = False
    for a, b in _crossing_pairs(S, state):
        crossing = True
        for old, new in _uncross_options(S, a, b):
            res |= _uncross_all(S, _replace(state, old, new), memo)
    if not crossing:
        res = {state}
    got = frozenset(res)
    memo[state] = got
    return got


def _uncross_lean(S, state):
    steps = 0
    while True:
        pair = next(_crossing_pairs(S, state), None)
        if pair is None:
            return state
        opts = _uncross_options(S, *pair)
        if not opts:
            return None
        old, new = opts[0]
        state = _replace(state, old, new)
        steps += 1
        if steps > 10_000:
            raise InvariantError("uncrossing does not terminate")


def uncross_members(S: SepSystem, members, mode: str = "canonical_all") -> StarFamily:
    """Uncross each given member (index tuples) into stars."""
    if mode not in MODES:
        raise DomainError(f"mode must be one of {MODES}")
    out = StarFamily(S)
    memo: dict = {}
    for sigma in members:
        sigma = _star_key(S, sigma)
        if any(S.inv[i] == i for i in sigma):
            raise DomainError("members must not contain the degenerate separation")
        if mode == "canonical_all":
            stars = _uncross_all(S, sigma, memo)
        else:
            t = _uncross_lean(S, sigma)
            stars = () if t is None else (t,)
        if not stars:
            raise InvariantError(f"member {sigma} admits no uncrossing into a star")
        for t in stars:
            if not is_star_idx(S, t):
                raise InvariantError(f"uncrossing produced a non-star {t}")
            if t not in out.stars:
                out.stars.add(t)
                out.provenance[t] = (0, sigma)
    return out


def uncross_family(F: ForbiddenFamily, S: SepSystem, mode: str = "canonical_all") -> StarFamily:
    """An uncrossing F* of ``F & 2^S``.

    Predicate families are first cut down to their inclusion-minimal members;
    explicit star lists are used as given.
    """
    if isinstance(F, StarListFamily):
        members = F.members
    else:
        members = F.minimal_members(S)
    return uncross_members(S, members, mode)


# ---------------------------------------------------------------------------
# shifting


def _eligible(S: SepSystem, exclude=()):
    N = len(S)
    elig = ~S.trivial & (S.inv != np.arange(N))
    for r in exclude:
        elig[r] = False
    return elig


def emulation_matrix(S: SepSystem, exclude=()) -> np.ndarray:
    """emul[r, s]: s emulates r in S (only rows of eligible r are filled)."""
    elig = _eligible(S, exclude)
    key = ("emul", tuple(sorted(exclude)))
    cache = S.__dict__.setdefault("_emul_cache", {})
    if key not in cache:
        cache[key] = kernels.emulation_table(
            np.ascontiguousarray(S.leq),
            np.ascontiguousarray(S.join, dtype=np.int32),
            np.ascontiguousarray(S.inv, dtype=np.int64),
            elig,
        )
    return cache[key]


def _shift_targets(S: SepSystem, emul: np.ndarray, elig: np.ndarray):
    """For each x1, the s reachable as shift targets through some r <= x1.

    Returns (full, no_self): ``no_self`` forbids r = x1 (needed when the star
    also contains x1*).
    """
    N = len(S)
    ar = np.arange(N)
    R = S.leq.T & elig[None, :]  # R[x, r]: r <= x and r eligible
    R[ar, S.inv] = False  # r = x* is excluded
    E = emul.astype(np.int32)
    full = (R.astype(np.int32) @ E) > 0
    R2 = R.copy()
    R2[ar, ar] = False
    no_self = (R2.astype(np.int32) @ E) > 0
    return full, no_self


def _apply_shift(S, star, i, svec):
    """Rows of the shifts of ``star`` with star[i] as the element >= r."""
    star = np.asarray(star, dtype=np.int64)
    out = np.empty((svec.size, star.size), dtype=np.int64)
    for j, x in enumerate(star):
        if j == i:
            out[:, j] = S.join[x, svec]
        else:
            out[:, j] = S.meet[x, S.inv[svec]]
    return out


def _rows_to_stars(S, rows):
    """Deduplicate rows into star tuples; also return rows that are not stars."""
    good, bad = [], []
    inv = S.inv
    leq = S.leq
    for row in {tuple(sorted(set(r))) for r in rows.tolist()}:
        if row and row[0] < 0:
            bad.append(row)
            continue
        ok = all(inv[i] != i for i in row)
        if ok:
            for a, b in combinations(row, 2):
                if not leq[a, inv[b]]:
                    ok = False
                    break
        (good if ok else bad).append(row)
    return good, bad


def close_under_shifting(Fstar: StarFamily, strict: bool = False) -> StarFamily:
    """The least family containing ``Fstar`` and all shifts of its members.

    With ``strict``, shifts from separations forced by ``Fstar`` are skipped.
    Shifts that are not stars inside S are recorded in ``violations``.
    """
    S = Fstar.system
    exclude = tuple(sorted(Fstar.forced())) if strict else ()
    elig = _eligible(S, exclude)
    emul = emulation_matrix(S, exclude)
    full, no_self = _shift_targets(S, emul, elig)
    inv = S.inv
    out = StarFamily(S, set(Fstar.stars), provenance=dict(Fstar.provenance))
    stage = 0
    frontier = sorted(Fstar.stars)
    while frontier:
        stage += 1
        nxt = []
        for star in frontier:
            members = set(star)
            for i, x1 in enumerate(star):
                row = no_self[x1] if inv[x1] in members else full[x1]
                svec = np.flatnonzero(row)
                if svec.size == 0:
                    continue
                good, bad = _rows_to_stars(S, _apply_shift(S, star, i, svec))
                for b in bad:
                    out.violations.append({"star": star, "x1": int(x1), "shift": b})
                for t in good:
                    if t not in out.stars:
                        out.stars.add(t)
                        out.provenance[t] = (stage, star, int(x1))
                        nxt.append(t)
        frontier = nxt
    out.stages = stage
    return out


def standardize(F: StarFamily) -> StarFamily:
    """Add every singleton {x} with x* small."""
    S = F.system
    out = StarFamily(S, set(F.stars), standard=True, provenance=dict(F.provenance))
    out.violations = list(F.violations)
    small = S.small
    for x in range(len(S)):
        if S.inv[x] != x and small[S.inv[x]]:
            t = (x,)
            if t not in out.stars:
                out.stars.add(t)
                out.provenance[t] = ("standard",)
    return out


def close_and_standardize(Fstar: StarFamily, S: SepSystem | None = None, strict: bool = False):
    """Fbar*: shift closure of ``Fstar`` plus co-small singleton stars."""
    if S is not None and S is not Fstar.system:
        raise DomainError("star family belongs to a different system")
    closed = close_under_shifting(Fstar, strict=strict)
    out = standardize(closed)
    out.stages = getattr(closed, "stages", 0)
    return out


def shift_sep(x, r, s, S: SepSystem):
    """Image of ``x`` under the shift from ``r`` to ``s``.

    Returns ``(image, in_system)``; the image is computed in the ambient
    universe and may lie outside S.
    """
    xi, ri, si = S.idx(x), S.idx(r), S.idx(s)
    _check_shift_base(S, ri, si)
    if xi == S.inv[ri]:
        raise DomainError("the shift is not defined on the inverse of r")
    if S.leq[ri, xi]:
        img = _corner_label(S, xi, si, "join")
    elif S.leq[ri, S.inv[xi]]:
        up = _corner_label(S, int(S.inv[xi]), si, "join")
        img = up.inverse() if hasattr(up, "inverse") else _inverse_label(S, up)
    else:
        raise DomainError("x has no orientation above r")
    return img, img in S


def _inverse_label(S, x):
    if S.universe is not None:
        return S.universe.inverse(x)
    return S.elements[S.inv[S.idx(x)]]


def _corner_label(S, i, j, which):
    if isinstance(S, GraphSystem):
        return S.corner_sep(i, j, which)
    if S.universe is not None:
        op = S.universe.join if which == "join" else S.universe.meet
        return op(S.elements[i], S.elements[j])
    z = (S.join if which == "join" else S.meet)[i, j]
    if z < 0:
        raise DomainError("corner undefined")
    return S.elements[z]


def _check_shift_base(S, ri, si):
    if S.inv[ri] == ri:
        raise DomainError("r must be nondegenerate")
    if S.trivial[ri]:
        raise DomainError("r must be nontrivial in S")
    if not S.leq[ri, si]:
        raise DomainError("r must lie below s")


def _shift_of_star(S, star, ri, si):
    """Elementwise image of a star under the shift from r to s (indices, -1 if outside S)."""
    out = []
    for y in star:
        if y == S.inv[ri]:
            return None
        if S.leq[ri, y]:
            out.append(int(S.join[y, si]))
        elif S.leq[ri, S.inv[y]]:
            z = S.join[S.inv[y], si]
            out.append(int(S.inv[z]) if z >= 0 else -1)
        else:
            return None
    return out


def emulates(s, r, S: SepSystem, for_family: StarFamily | None = None) -> bool:
    """Does ``s`` emulate ``r`` in S (and, optionally, for a star family)?"""
    ri, si = S.idx(r), S.idx(s)
    _check_shift_base(S, ri, si)
    return _emulates_idx(S, ri, si, for_family)


def _emulates_idx(S, ri, si, for_family):
    inv = S.inv
    for y in np.flatnonzero(S.leq[ri]):
        if y != inv[ri] and S.join[y, si] < 0:
            return False
    if for_family is None:
        return True
    for star in for_family.stars:
        if not any(S.leq[ri, y] for y in star):
            continue
        img = _shift_of_star(S, star, ri, si)
        if img is None:
            continue
        if any(z < 0 for z in img) or _star_key(S, img) not in for_family.stars:
            return False
    return True


def is_separable(S: SepSystem, for_family: StarFamily | None = None) -> bool:
    """Exhaustive (F-)separability check."""
    return separability_witness(S, for_family) is None


def separability_witness(S: SepSystem, for_family: StarFamily | None = None):
    """A pair (r, r') with no separating s, or None when S is separable."""
    N = len(S)
    exclude = tuple(sorted(for_family.forced())) if for_family is not None else ()
    elig = _eligible(S, exclude)
    emul = emulation_matrix(S, exclude).copy()
    if for_family is not None:
        for r in np.flatnonzero(elig):
            for s in np.flatnonzero(emul[r]):
                if not _emulates_idx(S, r, s, for_family):
                    emul[r, s] = False
    inv = S.inv
    for r in np.flatnonzero(elig):
        for rp in np.flatnonzero(S.leq[r]):
            if not elig[inv[rp]]:
                continue
            # need s with s emulating r and s* emulating r'*
            if not (emul[r] & emul[inv[rp]][inv]).any():
                return (S.elements[r], S.elements[rp])
    return None


def closed_under_shifting(F: StarFamily) -> bool:
    """Whether F already contains every shift of its members (F-emulation = emulation)."""
    S = F.system
    exclude = tuple(sorted(F.forced()))
    elig = _eligible(S, exclude)
    emul = emulation_matrix(S, exclude)
    for r in np.flatnonzero(elig):
        for s in np.flatnonzero(emul[r]):
            if not _emulates_idx(S, r, s, F):
                return False
    return True


# ---------------------------------------------------------------------------
# S-trees


@dataclass
class STree:
    system: SepSystem
    nodes: list
    edges: list  # (u, v) pairs
    alpha: dict  # (u, v) -> element index; alpha[(v, u)] = inv alpha[(u, v)]
    stars: dict = field(default_factory=dict)  # node -> in-star (tuple of indices)

    def label(self, u, v):
        return self.system.elements[self.alpha[(u, v)]]

    def in_star(self, t) -> tuple:
        return tuple(sorted({self.alpha[(u, v)] for (u, v) in self.alpha if v == t}))

    def to_json(self):
        E = self.system.elements

        def lab(i):
            x = E[i]
            return x.to_json() if hasattr(x, "to_json") else repr(x)

        return {
            "nodes": list(self.nodes),
            "edges": [
                {"from": u, "to": v, "label": lab(self.alpha[(u, v)])} for u, v in self.edges
            ],
        }


def _check_tree(nodes, edges):
    nodes = list(nodes)
    if not nodes:
        raise DomainError("a tree needs at least one node")
    if len(edges) != len(nodes) - 1:
        raise DomainError("not a tree: wrong number of edges")
    nbr = {t: [] for t in nodes}
    for u, v in edges:
        if u not in nbr or v not in nbr or u == v:
            raise DomainError(f"bad tree edge {(u, v)}")
        nbr[u].append(v)
        nbr[v].append(u)
    seen = {nodes[0]}
    todo = [nodes[0]]
    while todo:
        t = todo.pop()
        for w in nbr[t]:
            if w not in seen:
                seen.add(w)
                todo.append(w)
    if len(seen) != len(nodes):
        raise DomainError("not a tree: disconnected")
    return nbr


def frag_fixpoint(S: SepSystem, Fbar: StarFamily):
    """Least fixpoint of the fragment rules.

    frag[s] is the star deriving s (Frag(s) holds), or absent.  Returns
    (frag, root_star or None).
    """
    inv = S.inv
    stars = sorted(Fbar.stars, key=lambda t: (len(t), t))
    if () in Fbar.stars:
        return {}, ()
    # premises of star t: Frag(x*) for x in t
    waiting = [len(t) for t in stars]
    by_premise: dict[int, list[int]] = {}
    for si, t in enumerate(stars):
        for x in t:
            by_premise.setdefault(int(inv[x]), []).append(si)
    frag: dict[int, tuple] = {}
    order: dict[int, int] = {}
    queue = deque()

    def fire(si):
        t = stars[si]
        # the element x whose premise Frag(x*) is still open becomes derivable
        open_x = [x for x in t if int(inv[x]) not in frag]
        if len(open_x) == 1:
            x = open_x[0]
            if x not in frag:
                frag[x] = t
                order[x] = len(order)
                queue.append(x)

    for si, t in enumerate(stars):
        if len(t) == 1:
            fire(si)
    root = None
    while queue and root is None:
        y = queue.popleft()  # Frag(y) is now true: premise y of stars containing y*
        for si in by_premise.get(y, ()):
            waiting[si] -= 1
            if waiting[si] == 0:
                root = stars[si]
                break
            if waiting[si] == 1:
                fire(si)
    if root is None:
        for si, t in enumerate(stars):
            if all(int(inv[x]) in frag for x in t):
                root = t
                break
    frag_order = {x: order[x] for x in frag}
    return {x: (frag[x], frag_order[x]) for x in frag}, root


def stree_exists(S: SepSystem, Fbar: StarFamily) -> STree | None:
    """An S-tree over ``Fbar`` or None; decided by the least fixpoint."""
    frag, root = frag_fixpoint(S, Fbar)
    if root is None:
        return None
    inv = S.inv
    nodes = [0]
    edges = []
    alpha = {}
    stars = {0: root}
    # node t with in-star sigma; each x in sigma (except the parent edge label)
    # gets a child c with alpha(c, t) = x, whose subtree realises Frag(x*)
    todo = [(0, root, None)]
    while todo:
        t, sigma, parent_label = todo.pop()
        for x in sigma:
            if x == parent_label:
                continue
            y = int(inv[x])
            derived = frag.get(y)
            if derived is None:
                raise InvariantError("fragment derivation is incomplete")
            c = len(nodes)
            nodes.append(c)
            edges.append((c, t))
            alpha[(c, t)] = int(x)
            alpha[(t, c)] = y
            stars[c] = derived[0]
            todo.append((c, derived[0], y))
            if len(nodes) > 200_000:
                raise InvariantError("S-tree extraction runaway")
    return STree(S, nodes, edges, alpha, stars)


def verify_stree(t: STree, S: SepSystem, F) -> bool:
    """Tree shape, involution labels and membership of every in-star."""
    _check_tree(t.nodes, t.edges)
    inv = S.inv
    for u, v in t.edges:
        if (u, v) not in t.alpha or (v, u) not in t.alpha:
            raise DomainError(f"edge {(u, v)} is not labelled in both directions")
        if t.alpha[(v, u)] != inv[t.alpha[(u, v)]]:
            raise DomainError(f"labels of edge {(u, v)} are not inverse to each other")
    for node in t.nodes:
        star = t.in_star(node)
        if isinstance(F, StarFamily):
            if star not in F.stars:
                return False
        elif isinstance(F, ForbiddenFamily):
            if isinstance(F, StarListFamily):
                if star not in set(F.members):
                    return False
            elif not F.contains(S, star):
                return False
        else:
            if frozenset(S.elements[i] for i in star) not in F:
                return False
    return True


# ---------------------------------------------------------------------------
# tree-decompositions


@dataclass
class TreeDecomposition:
    G: Graph
    nodes: list
    edges: list
    bags: dict  # node -> int mask

    def __post_init__(self):
        problem = treedec_problem(self.G, self.nodes, self.edges, self.bags)
        if problem:
            raise InvariantError(f"not a tree-decomposition: {problem}")

    @property
    def width(self) -> int:
        return max(bin(b).count("1") for b in self.bags.values()) - 1

    def bag(self, t) -> frozenset:
        return vertices_of(self.bags[t])

    def to_json(self):
        return {
            "bags": {str(t): sorted(vertices_of(self.bags[t])) for t in self.nodes},
            "edges": [[u, v] for u, v in self.edges],
            "width": self.width,
        }

    def to_dot(self) -> str:
        lines = ["graph treedec {"]
        for t in self.nodes:
            label = ",".join(str(v) for v in sorted(vertices_of(self.bags[t])))
            lines.append(f'  n{t} [label="{{{label}}}"];')
        for u, v in self.edges:
            lines.append(f"  n{u} -- n{v};")
        lines.append("}")
        return "\n".join(lines) + "\n"


def treedec_problem(G: Graph, nodes, edges, bags) -> str | None:
    """The first violated tree-decomposition axiom, or None."""
    try:
        nbr = _check_tree(nodes, edges)
    except DomainError as e:
        return str(e)
    cover = 0
    for t in nodes:
        cover |= bags[t]
    if cover != G.full:
        return "some vertex lies in no bag"
    for u, v in G.edges:
        e = (1 << u) | (1 << v)
        if not any(bags[t] & e == e for t in nodes):
            return f"edge {(u, v)} lies in no bag"
    for v in range(G.n):
        holding = [t for t in nodes if bags[t] >> v & 1]
        seen = {holding[0]}
        todo = [holding[0]]
        while todo:
            t = todo.pop()
            for w in nbr[t]:
                if w not in seen and bags[w] >> v & 1:
                    seen.add(w)
                    todo.append(w)
        if len(seen) != len(holding):
            return f"the bags containing vertex {v} are not connected"
    return None


def stree_to_treedec(t: STree, G: Graph) -> TreeDecomposition:
    """Bags V_t = intersection of the B-sides of the separations pointing to t."""
    S = t.system
    if not isinstance(S, GraphSystem):
        raise DomainError("the S-tree must be labelled by graph separations")
    bags = {v: G.full for v in t.nodes}
    for (u, v), i in t.alpha.items():
        bags[v] &= S.Bm[i]
    return TreeDecomposition(G, list(t.nodes), list(t.edges), bags)


def induced_separations(td: TreeDecomposition) -> dict:
    """(u, v) -> (union of bags on u's side, union of bags on v's side) as masks."""
    nbr = {t: [] for t in td.nodes}
    for u, v in td.edges:
        nbr[u].append(v)
        nbr[v].append(u)

    def side(start, banned):
        seen = {start}
        todo = [start]
        m = 0
        while todo:
            x = todo.pop()
            m |= td.bags[x]
            for w in nbr[x]:
                if w != banned and w not in seen:
                    seen.add(w)
                    todo.append(w)
        return m

    out = {}
    for u, v in td.edges:
        a, b = side(u, v), side(v, u)
        out[(u, v)] = (a, b)
        out[(v, u)] = (b, a)
    return out


def reconstruction_mismatches(t: STree, td: TreeDecomposition) -> list:
    """Directed edges whose induced separation differs from the S-tree label."""
    S = t.system
    bad = []
    for e, (a, b) in induced_separations(td).items():
        i = t.alpha[e]
        if (S.Am[i], S.Bm[i]) != (a, b):
            bad.append((e, (S.Am[i], S.Bm[i]), (a, b)))
    return bad


# ---------------------------------------------------------------------------
# the duality check


def family_for(kind: str, k: int) -> ForbiddenFamily:
    if kind == "block":
        return BlockFamily(k)
    if kind == "profile":
        return ProfileFamily()
    if kind == "tangle":
        return TangleFamily()
    raise DomainError(f"family must be one of {FAMILIES}")


@dataclass
class DualityReport:
    graph: Graph
    k: int
    family: str
    mode: str
    tangle: object  # Orientation or None
    tree: STree | None
    treedec: TreeDecomposition | None
    bar_tangle_exists: bool | None
    sizes: dict
    block: frozenset | None = None
    shift_violations: int = 0

    @property
    def side(self) -> str:
        return "tangle" if self.tangle is not None else "tree"

    def to_json(self):
        return {
            "schema": "1",
            "graph": self.graph.to_json(),
            "k": self.k,
            "family": self.family,
            "mode": self.mode,
            "holds": self.side,
            "tangle": None if self.tangle is None else self.tangle.to_json(),
            "block": None if self.block is None else sorted(self.block),
            "stree": None if self.tree is None else self.tree.to_json(),
            "treedec": None if self.treedec is None else self.treedec.to_json(),
            "bar_tangle_exists": self.bar_tangle_exists,
            "sizes": self.sizes,
            "shift_violations": self.shift_violations,
        }


def build_fbar(S: SepSystem, F: ForbiddenFamily, mode: str, strict: bool = False):
    Fstar = uncross_family(F, S, mode)
    Fbar = close_and_standardize(Fstar, strict=strict)
    return Fstar, Fbar


def verify_duality(
    G: Graph,
    k: int,
    family: str = "block",
    mode: str = "canonical_all",
    check_bar_tangle: bool = True,
    strict: bool = False,
) -> DualityReport:
    """Run both sides of the duality for ``G`` at order ``k``.

    Raises :class:`InvariantError` unless exactly one of "regular F-tangle"
    and "S-tree over Fbar*" holds (and, when checked, unless Fbar*-tangles
    exist exactly when regular F-tangles do).
    """
    if family not in FAMILIES:
        raise DomainError(f"family must be one of {FAMILIES}")
    if mode not in MODES:
        raise DomainError(f"mode must be one of {MODES}")
    if k < 1:
        raise DomainError("k must be positive")
    S = enumerate_Sk(G, k)
    F = family_for(family, k)
    tangle = find_f_tangle(S, F, require_regular=True)
    Fstar, Fbar = build_fbar(S, F, mode, strict)
    tree = stree_exists(S, Fbar)
    if (tangle is None) == (tree is None):
        raise InvariantError(
            f"duality fails for k={k}, {family}, {mode}: tangle={tangle is not None}, tree={tree is not None}"
        )
    bar = None
    if check_bar_tangle:
        bar = find_f_tangle(S, Fbar.as_family(), require_regular=False) is not None
        if bar != (tangle is not None):
            raise InvariantError("Fbar*-tangles disagree with regular F-tangles")
    td = None
    if tree is not None:
        if not verify_stree(tree, S, Fbar):
            raise InvariantError("extracted S-tree is not over Fbar*")
        td = stree_to_treedec(tree, G)
        bad = reconstruction_mismatches(tree, td)
        if bad:
            raise InvariantError(f"tree-decomposition does not recover the S-tree: {bad[:3]}")
    block = None
    if tangle is not None and family == "block":
        m = G.full
        for i in tangle.indices:
            m &= S.Bm[i]
        block = vertices_of(m)
    sizes = {"S": len(S), "F_star": len(Fstar), "F_bar": len(Fbar)}
    return DualityReport(
        G, k, family, mode, tangle, tree, td, bar, sizes, block, len(Fbar.violations)
    )


def stree_to_dot(t: STree) -> str:
    lines = ["digraph stree {"]
    for v in t.nodes:
        lines.append(f"  n{v};")
    for u, v in t.edges:
        lab = repr(t.label(u, v)).replace('"', "'")
        lines.append(f'  n{u} -> n{v} [label="{lab}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2)
