"""Connected graphs up to isomorphism, for corpus sweeps.

Every connected graph on n vertices arises from a connected graph on n - 1
vertices by adding a vertex (drop a non-cutvertex, e.g. a leaf of a spanning
tree), so the classes are grown level by level and filtered by an exact
isomorphism test inside Weisfeiler-Lehman hash buckets.
"""

from __future__ import annotations

import json
import random
from functools import lru_cache
from itertools import combinations

import networkx as nx

from .graphsep import Graph, GraphParseError, parse_graph_json

# connected graphs on 1..8 vertices, up to isomorphism
KNOWN_COUNTS = {1: 1, 2: 1, 3: 2, 4: 6, 5: 21, 6: 112, 7: 853, 8: 11117}


def _wl(H) -> str:
    return nx.weisfeiler_lehman_graph_hash(H, iterations=3)


@lru_cache(maxsize=None)
def _level(n: int) -> tuple:
    if n == 1:
        return (Graph.from_edges(1, []),)
    buckets: dict[tuple, list] = {}
    out = []
    for G in _level(n - 1):
        v = n - 1
        for r in range(1, n):
            for nbrs in combinations(range(n - 1), r):
                H = Graph.from_edges(n, list(G.edges) + [(u, v) for u in nbrs])
                X = H.to_networkx()
                key = (len(H.edges), tuple(sorted(d for _, d in X.degree())), _wl(X))
                bucket = buckets.setdefault(key, [])
                if any(nx.is_isomorphic(X, Y) for Y in bucket):
                    continue
                bucket.append(X)
                out.append(H)
    out.sort(key=lambda g: (len(g.edges), g.edges))
    return tuple(out)


def connected_graphs(n: int) -> list[Graph]:
    """All connected graphs on ``n`` vertices up to isomorphism."""
    if n < 1:
        return []
    return list(_level(n))


def corpus(max_n: int, min_n: int = 1) -> list[Graph]:
    out = []
    for n in range(min_n, max_n + 1):
        out.extend(connected_graphs(n))
    return out


def atlas_connected(n: int) -> list[Graph]:
    """Oracle for n <= 7: the connected graphs of the networkx graph atlas."""
    if n > 7:
        raise ValueError("the graph atlas stops at 7 vertices")
    out = []
    for X in nx.graph_atlas_g():
        if X.number_of_nodes() == n and n and nx.is_connected(X):
            out.append(Graph.from_edges(n, list(X.edges())))
    return out


def random_graph(n: int, p: float, seed: int = 0) -> Graph:
    rng = random.Random(seed)
    edges = [(u, v) for u, v in combinations(range(n), 2) if rng.random() < p]
    return Graph.from_edges(n, edges)


def load_manifest(text: str) -> list[dict]:
    """A manifest is a JSON list of {"name", "graph", "expect"?} entries."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise GraphParseError(f"manifest is not valid JSON: {e.msg}", f"line {e.lineno}") from None
    if not isinstance(data, list):
        raise GraphParseError("manifest must be a JSON list", "manifest")
    out = []
    for i, entry in enumerate(data):
        if not isinstance(entry, dict) or "graph" not in entry:
            raise GraphParseError("entry needs a 'graph' object", f"manifest[{i}]")
        try:
            G = parse_graph_json(json.dumps(entry["graph"]))
        except GraphParseError as e:
            raise GraphParseError(e.message, f"manifest[{i}].graph.{e.where}") from None
        out.append({"name": entry.get("name", f"g{i}"), "graph": G, "expect": entry.get("expect", {})})
    return out
