"""Separations of a finite graph as a concrete separation universe.

Vertex sets are bitmasks internally.  :class:`GraphSeparation` is the public
value type; :class:`GraphSystem` is the indexed system ``S_k`` used by the
search and duality code.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from pathlib import Path

import numpy as np

from . import kernels
from .sepsys import DomainError, SepSystem, SepUniverse


class GraphParseError(ValueError):
    """Malformed graph input; ``where`` names the offending line or field."""

    def __init__(self, message, where=None):
        self.where = where
        self.message = message
        super().__init__(f"{where}: {message}" if where else message)


def mask_of(vertices) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


def vertices_of(mask: int) -> frozenset:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return frozenset(out)


def popcount(mask: int) -> int:
    return bin(mask).count("1")


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on vertices ``0..n-1``."""

    n: int
    edges: frozenset

    def __post_init__(self):
        if self.n < 0:
            raise DomainError("negative vertex count")
        if self.n > kernels.MAX_N:
            raise DomainError(f"at most {kernels.MAX_N} vertices are supported")
        clean = set()
        for e in self.edges:
            u, v = e
            if u == v:
                raise DomainError(f"loop at vertex {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise DomainError(f"edge {e} has a vertex outside 0..{self.n - 1}")
            clean.add((min(u, v), max(u, v)))
        object.__setattr__(self, "edges", frozenset(clean))

    @classmethod
    def from_edges(cls, n, edges):
        edges = list(edges)
        seen = set()
        for u, v in edges:
            key = (min(u, v), max(u, v))
            if key in seen:
                raise DomainError(f"duplicate edge {key}")
            seen.add(key)
        return cls(n, frozenset(seen))

    @cached_property
    def adj(self) -> list[int]:
        adj = [0] * self.n
        for u, v in self.edges:
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        return adj

    @property
    def full(self) -> int:
        return (1 << self.n) - 1

    @cached_property
    def edge_list(self) -> list[tuple[int, int]]:
        return sorted(self.edges)

    def adjacent(self, u, v) -> bool:
        return bool(self.adj[u] >> v & 1)

    def is_connected(self) -> bool:
        if self.n == 0:
            return True
        seen = frontier = 1
        while frontier:
            nxt = 0
            f = frontier
            while f:
                b = f & -f
                nxt |= self.adj[b.bit_length() - 1]
                f ^= b
            frontier = nxt & ~seen
            seen |= frontier
        return seen == self.full

    def induced_edge_mask(self, A: int) -> int:
        """Bitmask over ``edge_list`` of the edges of G[A]."""
        out = 0
        for i, (u, v) in enumerate(self.edge_list):
            if A >> u & 1 and A >> v & 1:
                out |= 1 << i
        return out

    def to_json(self) -> dict:
        return {"n": self.n, "edges": [list(e) for e in self.edge_list]}

    def to_networkx(self):
        import networkx as nx

        g = nx.Graph()
        g.add_nodes_from(range(self.n))
        g.add_edges_from(self.edge_list)
        return g


# ---------------------------------------------------------------------------
# named graphs


def complete_graph(n):
    return Graph(n, frozenset(combinations(range(n), 2)))


def path_graph(n):
    return Graph(n, frozenset((i, i + 1) for i in range(n - 1)))


def cycle_graph(n):
    if n < 3:
        raise DomainError("cycles need at least 3 vertices")
    return Graph(n, frozenset((i, (i + 1) % n) for i in range(n)))


def grid_graph(k):
    """The k x k grid H_k; vertex (i, j) is numbered i*k + j."""
    edges = set()
    for i in range(k):
        for j in range(k):
            v = i * k + j
            if j + 1 < k:
                edges.add((v, v + 1))
            if i + 1 < k:
                edges.add((v, v + k))
    return Graph(k * k, frozenset(edges))


# ---------------------------------------------------------------------------
# parsing


def parse_graph_json(text: str) -> Graph:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GraphParseError(exc.msg, where=f"line {exc.lineno}") from None
    if not isinstance(data, dict):
        raise GraphParseError("expected a JSON object", where="$")
    if "n" not in data:
        raise GraphParseError("missing field", where="n")
    n = data["n"]
    if not isinstance(n, int) or isinstance(n, bool) or n < 0:
        raise GraphParseError("must be a non-negative integer", where="n")
    raw = data.get("edges", [])
    if not isinstance(raw, list):
        raise GraphParseError("must be a list of pairs", where="edges")
    edges = []
    for i, e in enumerate(raw):
        where = f"edges[{i}]"
        if not (isinstance(e, list) and len(e) == 2 and all(isinstance(x, int) and not isinstance(x, bool) for x in e)):
            raise GraphParseError("expected [u, v] with integer vertices", where=where)
        edges.append((e[0], e[1]))
    return _build(n, edges, [f"edges[{i}]" for i in range(len(edges))])


def parse_edge_list(text: str, n: int | None = None) -> Graph:
    """Plain text, one ``u v`` pair per line; ``#`` starts a comment.

    Without ``n`` the vertex count is one more than the largest vertex seen.
    """
    edges, wheres = [], []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise GraphParseError("expected two vertices", where=f"line {lineno}")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise GraphParseError("vertices must be integers", where=f"line {lineno}") from None
        edges.append((u, v))
        wheres.append(f"line {lineno}")
    if n is None:
        n = 1 + max((max(e) for e in edges), default=-1)
    return _build(n, edges, wheres)


def _build(n, edges, wheres) -> Graph:
    if n > kernels.MAX_N:
        raise GraphParseError(f"at most {kernels.MAX_N} vertices supported", where="n")
    seen = set()
    for (u, v), where in zip(edges, wheres):
        if u < 0 or v < 0 or u >= n or v >= n:
            raise GraphParseError(f"vertex out of range 0..{n - 1}", where=where)
        if u == v:
            raise GraphParseError("loops are not allowed", where=where)
        key = (min(u, v), max(u, v))
        if key in seen:
            raise GraphParseError("duplicate edge", where=where)
        seen.add(key)
    return Graph(n, frozenset(seen))


def load_graph(path) -> Graph:
    path = Path(path)
    text = path.read_text()
    if path.suffix == ".json" or text.lstrip().startswith("{"):
        return parse_graph_json(text)
    return parse_edge_list(text)


# ---------------------------------------------------------------------------
# separations


@dataclass(frozen=True)
class GraphSeparation:
    """Oriented separation ``(A, B)``; it points towards ``B``."""

    A: frozenset
    B: frozenset

    @classmethod
    def of(cls, A, B):
        return cls(frozenset(A), frozenset(B))

    @classmethod
    def from_masks(cls, a: int, b: int):
        return cls(vertices_of(a), vertices_of(b))

    @property
    def masks(self) -> tuple[int, int]:
        return mask_of(self.A), mask_of(self.B)

    @property
    def separator(self) -> frozenset:
        return self.A & self.B

    @property
    def order(self) -> int:
        return len(self.A & self.B)

    def inverse(self) -> "GraphSeparation":
        return GraphSeparation(self.B, self.A)

    def __le__(self, other):
        return self.A <= other.A and self.B >= other.B

    def __lt__(self, other):
        return self <= other and self != other

    def join(self, other):
        return GraphSeparation(self.A | other.A, self.B & other.B)

    def meet(self, other):
        return GraphSeparation(self.A & other.A, self.B | other.B)

    def to_json(self) -> dict:
        return {"A": sorted(self.A), "B": sorted(self.B)}

    def __repr__(self):
        fmt = lambda s: "{" + ",".join(map(str, sorted(s))) + "}"
        return f"({fmt(self.A)},{fmt(self.B)})"


def components_mask(G: Graph, allowed: int) -> list[int]:
    """Vertex masks of the components of G[allowed]."""
    out = []
    adj = G.adj
    left = allowed
    while left:
        comp = frontier = left & -left
        while frontier:
            low = frontier & -frontier
            frontier ^= low
            new = adj[low.bit_length() - 1] & allowed & ~comp
            comp |= new
            frontier |= new
        out.append(comp)
        left &= ~comp
    return out


def is_separation(G: Graph, A, B) -> bool:
    """``A | B = V`` and no edge between ``A - B`` and ``B - A``."""
    a = A if isinstance(A, int) else mask_of(A)
    b = B if isinstance(B, int) else mask_of(B)
    if a | b != G.full:
        return False
    only_a, only_b = a & ~b, b & ~a
    f = only_a
    while f:
        low = f & -f
        if G.adj[low.bit_length() - 1] & only_b:
            return False
        f ^= low
    return True


class GraphSystem(SepSystem):
    """The system ``S_k`` of oriented separations of order < k of a graph.

    Elements are ordered by order, then by canonical separation, with the two
    orientations of each separation adjacent.  The ambient universe (all
    separations of ``G``) is implicit; corners are computed on masks.
    """

    def __init__(self, G: Graph, k: int, A, B):
        self.G = G
        self.k = k
        self.A = np.asarray(A, dtype=np.uint64)
        self.B = np.asarray(B, dtype=np.uint64)
        self.Am = [int(a) for a in self.A]
        self.Bm = [int(b) for b in self.B]
        N = len(self.Am)
        self._pos = {(a, b): i for i, (a, b) in enumerate(zip(self.Am, self.Bm))}
        inv = np.array([self._pos[(b, a)] for a, b in zip(self.Am, self.Bm)], dtype=np.int64)
        order = [popcount(a & b) for a, b in zip(self.Am, self.Bm)]
        self.elements = tuple(GraphSeparation.from_masks(a, b) for a, b in zip(self.Am, self.Bm))
        self.index = {x: i for i, x in enumerate(self.elements)}
        self.inv = inv
        self.order = order
        self.universe = None
        sep = np.minimum(np.arange(N), inv)
        _, self.sep = np.unique(sep, return_inverse=True)
        self.sep = self.sep.astype(np.int64)
        self.n_seps = int(self.sep.max()) + 1 if N else 0
        self._flags = None

    # tables are built lazily: large systems only need some of them

    @cached_property
    def leq(self):
        return kernels.leq_matrix(self.A, self.B)

    @cached_property
    def _corners(self):
        return kernels.corner_tables(self.A, self.B, self.G.n)

    @property
    def join(self):
        return self._corners[0]

    @property
    def meet(self):
        return self._corners[1]

    def lookup(self, a: int, b: int) -> int:
        """Index of the separation with masks ``(a, b)``, or -1."""
        return self._pos.get((a, b), -1)

    def corner_sep(self, i, j, which) -> GraphSeparation:
        """Corner in the universe of all separations (may lie outside S_k)."""
        if which == "join":
            return GraphSeparation.from_masks(self.Am[i] | self.Am[j], self.Bm[i] & self.Bm[j])
        return GraphSeparation.from_masks(self.Am[i] & self.Am[j], self.Bm[i] | self.Bm[j])

    def _compute_flags(self):
        full = self.G.full
        N = len(self)
        ar = np.arange(N)
        small = self.B == np.uint64(full)
        degenerate = self.inv == ar
        # (A, V) is trivial iff A lies inside C & D for some other separation {C, D}
        separators = np.array(
            [int(self.Am[i] & self.Bm[i]) for i in range(N)], dtype=np.uint64
        )
        trivial = np.zeros(N, dtype=bool)
        for i in np.flatnonzero(small & ~degenerate):
            a = self.A[i]
            cand = ((a & ~separators) == 0) & (self.sep != self.sep[i])
            trivial[i] = bool(cand.any())
        self._flags = {
            "degenerate": degenerate,
            "small": small,
            "trivial": trivial,
            "cotrivial": trivial[self.inv],
        }

    def interior_mask(self, sigma) -> int:
        m = self.G.full
        for i in sigma:
            m &= self.Bm[i]
        return m

    def describe(self, i) -> str:
        return repr(self.elements[i])


def enumerate_Sk(G: Graph, k: int) -> GraphSystem:
    """All oriented separations of ``G`` of order < k.

    Each candidate separator X is split off and the components of G - X are
    distributed over the two sides in every way; (V, V) appears when n < k.
    """
    if k < 1:
        raise DomainError("k must be a positive integer")
    adj = np.array(G.adj, dtype=np.uint64) if G.n else np.zeros(0, dtype=np.uint64)
    seps = kernels.separator_candidates(G.n, k)
    A, B = kernels.enumerate_separations(adj, G.n, k, seps)
    A = [int(a) for a in A]
    B = [int(b) for b in B]
    full = G.full
    if G.n < k and not any(a == full and b == full for a, b in zip(A, B)):
        A.append(full)
        B.append(full)
    pairs = sorted(set(zip(A, B)), key=lambda ab: _canonical_key(ab, full))
    return GraphSystem(G, k, [p[0] for p in pairs], [p[1] for p in pairs])


def _canonical_key(ab, full):
    a, b = ab
    lo = min((a, b), (b, a))
    return (popcount(a & b), popcount(lo[0]), lo, (a, b) != lo)


def enumerate_Sk_bruteforce(G: Graph, k: int) -> set[tuple[int, int]]:
    """Oracle: scan all pairs of vertex subsets.  Exponential (4^n)."""
    out = set()
    full = G.full
    for a in range(full + 1):
        # B must contain V - A
        rest = full & ~a
        sub = a
        while True:
            b = rest | sub
            if popcount(a & b) < k and is_separation(G, a, b):
                out.add((a, b))
            if sub == 0:
                break
            sub = (sub - 1) & a
    return out


def system_of(G: Graph, k: int, seps) -> GraphSystem:
    """A graph system holding exactly ``seps`` (pairs of vertex sets) and their inverses."""
    pairs = set()
    for A, B in seps:
        if not is_separation(G, A, B):
            raise DomainError(f"({sorted(A)}, {sorted(B)}) is not a separation")
        a, b = mask_of(A), mask_of(B)
        pairs.add((a, b))
        pairs.add((b, a))
    full = G.full
    pairs = sorted(pairs, key=lambda ab: _canonical_key(ab, full))
    return GraphSystem(G, k, [p[0] for p in pairs], [p[1] for p in pairs])


def abstract_universe(S: GraphSystem) -> SepUniverse:
    """The explicit-table form of a graph system (only sensible for small S)."""
    E = S.elements
    leq = [(E[i], E[j]) for i, j in zip(*np.nonzero(S.leq))]
    join, meet = {}, {}
    for i in range(len(E)):
        for j in range(i + 1, len(E)):
            if S.join[i, j] >= 0:
                join[(E[i], E[j])] = E[S.join[i, j]]
            if S.meet[i, j] >= 0:
                meet[(E[i], E[j])] = E[S.meet[i, j]]
    order = {x: x.order for x in E}
    return SepUniverse(E, leq, join, meet, order)


def universe(G: Graph) -> GraphSystem:
    """All separations of ``G`` (order at most n), a lattice under corners."""
    return enumerate_Sk(G, G.n + 1)


def interior(sigma, G: Graph | None = None) -> frozenset:
    """Intersection of the B-sides of a star; the empty star has interior V."""
    sigma = list(sigma)
    if not sigma:
        if G is None:
            raise DomainError("the interior of the empty star needs the graph")
        return frozenset(range(G.n))
    out = sigma[0].B
    for s in sigma[1:]:
        out = out & s.B
    return out
