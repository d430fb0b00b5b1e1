"""k-blocks: maximal (<k)-inseparable vertex sets, and their orientations O(b).

Inseparability is a pairwise property, so the k-blocks are the maximal
cliques of size >= k in the graph joining u, v when they are adjacent or no
set of fewer than k other vertices separates them.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import networkx as nx
import numpy as np

from . import kernels
from .families import Orientation, tables
from .graphsep import Graph, GraphSystem, components_mask, mask_of, popcount, vertices_of
from .sepsys import DomainError


@dataclass(frozen=True)
class Block:
    vertices: frozenset
    k: int

    @property
    def mask(self) -> int:
        return mask_of(self.vertices)

    def to_json(self):
        return sorted(self.vertices)

    def __repr__(self):
        return f"Block(k={self.k}, {sorted(self.vertices)})"


def connectivity_matrix(G: Graph, cap: int) -> np.ndarray:
    """kappa[u, v]: size of a smallest u-v separator, capped at ``cap``.

    Adjacent pairs (which no vertex set separates) get ``cap``.
    """
    if G.n == 0:
        return np.zeros((0, 0), dtype=np.int64)
    adj = np.array(G.adj, dtype=np.uint64)
    return kernels.local_connectivity(adj, G.n, int(cap))


def is_inseparable(G: Graph, I, k: int) -> bool:
    """No set of fewer than k vertices separates two vertices of I outside it."""
    I = sorted(I if not isinstance(I, int) else vertices_of(I))
    if len(I) <= 1:
        return True
    kappa = connectivity_matrix(G, k)
    return all(kappa[u, v] >= k for u, v in combinations(I, 2))


def find_k_blocks(G: Graph, k: int) -> list[Block]:
    """All k-blocks of G, sorted by vertex list."""
    if k < 1:
        raise DomainError("k must be positive")
    if G.n < k:
        return []
    kappa = connectivity_matrix(G, k)
    H = nx.Graph()
    H.add_nodes_from(range(G.n))
    for u, v in combinations(range(G.n), 2):
        if kappa[u, v] >= k:
            H.add_edge(u, v)
    found = {frozenset(c) for c in nx.find_cliques(H) if len(c) >= k}
    return [Block(b, k) for b in sorted(found, key=sorted)]


def find_k_blocks_bruteforce(G: Graph, k: int) -> list[Block]:
    """Oracle: test every vertex subset against every small separator."""
    n = G.n
    if n < k:
        return []
    # components of G - Z for every Z of fewer than k vertices
    cuts = [components_mask(G, G.full & ~z) for z in range(1 << n) if popcount(z) < k]

    def separated(I):
        return any(sum(1 for c in comps if c & I) > 1 for comps in cuts)

    insep = [I for I in range(1 << n) if popcount(I) >= k and not separated(I)]
    maximal = [I for I in insep if not any(J != I and J & I == I for J in insep)]
    return [Block(vertices_of(b), k) for b in sorted(maximal, key=lambda m: sorted(vertices_of(m)))]


def orientation_from_block(b: Block, S: GraphSystem) -> Orientation:
    """O(b): every separation of S oriented so that b lies in its B-side."""
    if b.k != S.k:
        raise DomainError("block order differs from the system's k")
    if b not in find_k_blocks(S.G, b.k):
        raise DomainError(f"{b!r} is not a {b.k}-block")
    bm = b.mask
    mask = 0
    for i, B in enumerate(S.Bm):
        if B & bm == bm:
            mask |= 1 << i
    return Orientation(S, mask)


def block_of_orientation(O: Orientation) -> frozenset:
    """Intersection of the B-sides of an orientation."""
    S = O.system
    m = S.G.full
    for i in O.indices:
        m &= S.Bm[i]
    return vertices_of(m)


def block_number(G: Graph) -> int:
    """The largest k such that G has a k-block."""
    if G.n == 0:
        raise DomainError("the empty graph has no blocks")
    for k in range(G.n, 0, -1):
        if find_k_blocks(G, k):
            return k
    raise AssertionError("every nonempty graph has a 1-block")
