"""Abstract separation systems: posets with an order-reversing involution.

A :class:`SepUniverse` is given extensionally (elements, order relation,
corner maps, order function).  A :class:`SepSystem` is an inverse-closed
subset of a universe, stored as integer indices with precomputed tables so
the search code downstream never touches the labels.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Hashable, Iterable, NamedTuple

import numpy as np


class DomainError(ValueError):
    """An argument lies outside the domain of an operation."""


class InvariantError(AssertionError):
    """An internal consistency check failed; this signals a bug, not bad input."""


FORWARD = "forward"
BACKWARD = "backward"


@dataclass(frozen=True, order=True)
class OrientedSep:
    """One orientation of an abstract separation."""

    sep_id: Hashable
    side: str = FORWARD

    def flipped(self) -> "OrientedSep":
        return OrientedSep(self.sep_id, BACKWARD if self.side == FORWARD else FORWARD)

    def __repr__(self):
        arrow = "->" if self.side == FORWARD else "<-"
        return f"{arrow}{self.sep_id}"


class Violation(NamedTuple):
    axiom: str
    witnesses: tuple


class SepUniverse:
    """A finite universe of oriented separations given by explicit tables.

    ``leq`` is an iterable of pairs ``(x, y)`` meaning ``x <= y``; reflexive
    pairs are added automatically.  ``join`` and ``meet`` map unordered pairs
    (given as 2-tuples in either order) to elements; missing entries mean the
    corner is undefined.  ``degenerate`` lists separation ids whose single
    orientation is its own inverse.
    """

    def __init__(self, elements, leq, join=None, meet=None, order_of=None, degenerate=()):
        self.elements = tuple(elements)
        self.index = {x: i for i, x in enumerate(self.elements)}
        if len(self.index) != len(self.elements):
            raise DomainError("duplicate elements in universe")
        self.degenerate_ids = frozenset(degenerate)
        N = len(self.elements)
        self._leq = np.zeros((N, N), dtype=bool)
        np.fill_diagonal(self._leq, True)
        for x, y in leq:
            self._leq[self.index[x], self.index[y]] = True
        self._join = {}
        self._meet = {}
        for table, src in ((self._join, join or {}), (self._meet, meet or {})):
            for (x, y), z in src.items():
                table[(x, y)] = z
                table[(y, x)] = z
        self.order_of = {x: Fraction(v) for x, v in (order_of or {}).items()}

    def __len__(self):
        return len(self.elements)

    def __contains__(self, x):
        return x in self.index

    def inverse(self, x):
        if x not in self.index:
            raise DomainError(f"{x!r} is not in the universe")
        if getattr(x, "sep_id", None) in self.degenerate_ids:
            return x
        if hasattr(x, "flipped"):
            return x.flipped()
        # other label types (graph separations) carry their own inverse
        return x.inverse()

    def leq(self, x, y) -> bool:
        return bool(self._leq[self.index[x], self.index[y]])

    def join(self, x, y):
        if x == y:
            return x
        try:
            return self._join[(x, y)]
        except KeyError:
            raise DomainError(f"join of {x!r} and {y!r} is undefined") from None

    def meet(self, x, y):
        if x == y:
            return x
        try:
            return self._meet[(x, y)]
        except KeyError:
            raise DomainError(f"meet of {x!r} and {y!r} is undefined") from None

    def system(self, members=None) -> "SepSystem":
        """The separation system on ``members`` (default: everything)."""
        members = self.elements if members is None else tuple(members)
        closed = set(members)
        for x in members:
            closed.add(self.inverse(x))
        ordered = [x for x in self.elements if x in closed]
        return SepSystem.from_universe(self, ordered)


class SepSystem:
    """Inverse-closed set of oriented separations, held as index tables.

    Attributes are numpy arrays over element indices ``0..N-1``:
    ``inv`` (index of the inverse), ``leq`` (N x N order relation), ``join``
    and ``meet`` (index of the corner, or -1 when it is not in the system),
    ``order`` (order function values) and ``sep`` (id of the unoriented
    separation).
    """

    def __init__(self, elements, inv, leq, join, meet, order, universe=None):
        self.elements = tuple(elements)
        self.index = {x: i for i, x in enumerate(self.elements)}
        self.inv = np.asarray(inv, dtype=np.int64)
        self.leq = np.asarray(leq, dtype=bool)
        self.join = np.asarray(join, dtype=np.int32)
        self.meet = np.asarray(meet, dtype=np.int32)
        self.order = list(order)
        self.universe = universe
        N = len(self.elements)
        sep = np.minimum(np.arange(N), self.inv)
        _, self.sep = np.unique(sep, return_inverse=True)
        self.sep = self.sep.astype(np.int64)
        self.n_seps = int(self.sep.max()) + 1 if N else 0
        self._flags = None

    @classmethod
    def from_universe(cls, U: SepUniverse, members):
        idx = {x: i for i, x in enumerate(members)}
        N = len(members)
        inv = [idx[U.inverse(x)] for x in members]
        uidx = [U.index[x] for x in members]
        leq = U._leq[np.ix_(uidx, uidx)]
        join = np.full((N, N), -1, dtype=np.int32)
        meet = np.full((N, N), -1, dtype=np.int32)
        for i, x in enumerate(members):
            for j, y in enumerate(members):
                for table, op in ((join, U.join), (meet, U.meet)):
                    try:
                        z = op(x, y)
                    except DomainError:
                        continue
                    table[i, j] = idx.get(z, -1)
        order = [U.order_of.get(x, Fraction(0)) for x in members]
        return cls(members, inv, leq, join, meet, order, universe=U)

    def __len__(self):
        return len(self.elements)

    def __contains__(self, x):
        return x in self.index

    def __iter__(self):
        return iter(self.elements)

    def idx(self, x) -> int:
        try:
            return self.index[x]
        except KeyError:
            raise DomainError(f"{x!r} is not in the separation system") from None

    # -- element classification, vectorised over the whole system -------------

    def _compute_flags(self):
        N = len(self)
        ar = np.arange(N)
        lt = self.leq & ~np.eye(N, dtype=bool)
        degenerate = self.inv == ar
        small = self.leq[ar, self.inv]
        other_sep = self.sep[None, :] != self.sep[:, None]
        # r trivial: r < s and r < s* for some separation s other than r's own
        trivial = (lt & lt[:, self.inv] & other_sep).any(axis=1)
        self._flags = {
            "degenerate": degenerate,
            "small": small,
            "trivial": trivial,
            "cotrivial": trivial[self.inv],
        }

    @property
    def flags(self):
        if self._flags is None:
            self._compute_flags()
        return self._flags

    @property
    def small(self):
        return self.flags["small"]

    @property
    def trivial(self):
        return self.flags["trivial"]

    @property
    def degenerate(self):
        return self.flags["degenerate"]

    def is_submodular(self) -> bool:
        """Every two elements have their join or their meet in the system."""
        return bool(((self.join >= 0) | (self.meet >= 0)).all())

    def describe(self, i) -> str:
        return repr(self.elements[i])


# ---------------------------------------------------------------------------
# operations on labels


def classify(x, S: SepSystem) -> dict:
    """Small / trivial / degenerate / co-trivial flags of ``x`` relative to ``S``."""
    i = S.idx(x)
    f = S.flags
    return {
        "small": bool(f["small"][i]),
        "trivial_in_S": bool(f["trivial"][i]),
        "degenerate": bool(f["degenerate"][i]),
        "cotrivial_in_S": bool(f["cotrivial"][i]),
    }


def is_nested(r, s, S: SepSystem) -> bool:
    """True iff some orientation of ``r`` is comparable with some orientation of ``s``."""
    i, j = S.idx(r), S.idx(s)
    ri, sj = (i, S.inv[i]), (j, S.inv[j])
    return any(S.leq[a, b] or S.leq[b, a] for a in ri for b in sj)


def is_star_idx(S: SepSystem, sigma: Iterable[int]) -> bool:
    sigma = list(set(sigma))
    if any(S.inv[i] == i for i in sigma):
        return False
    for a, b in combinations(sigma, 2):
        if not S.leq[a, S.inv[b]]:
            return False
    return True


def is_star(sigma, S: SepSystem) -> bool:
    """Nondegenerate elements pairwise pointing towards each other: r <= s* for r != s."""
    return is_star_idx(S, [S.idx(x) for x in sigma])


def corner(r, s, which: str, S: SepSystem):
    """Join or meet of ``r`` and ``s``.

    The corner is computed in the ambient universe when one is attached, so
    the result may lie outside ``S``.
    """
    if which not in ("join", "meet"):
        raise DomainError(f"which must be 'join' or 'meet', got {which!r}")
    U = S.universe
    if U is not None:
        return getattr(U, which)(r, s)
    i, j = S.idx(r), S.idx(s)
    z = (S.join if which == "join" else S.meet)[i, j]
    if z < 0:
        raise DomainError(f"{which} of {r!r} and {s!r} is undefined")
    return S.elements[z]


def validate_universe(U) -> list[Violation]:
    """Check the universe axioms; returns one report per violated instance."""
    if isinstance(U, SepUniverse):
        S = U.system()
        order = [U.order_of.get(x, Fraction(0)) for x in S.elements]
    else:
        S = U
        order = list(U.order)
    out: list[Violation] = []
    N = len(S)
    E = S.elements
    inv, leq, join, meet = S.inv, S.leq, S.join, S.meet
    for i in range(N):
        if inv[inv[i]] != i:
            out.append(Violation("involution", (E[i],)))
        if order[i] < 0:
            out.append(Violation("order non-negative", (E[i],)))
        if i < inv[i] and order[i] != order[inv[i]]:
            out.append(Violation("order symmetric", (E[i], E[inv[i]])))
        if not leq[i, i]:
            out.append(Violation("reflexivity", (E[i],)))
    for i in range(N):
        for j in range(N):
            if i < j and leq[i, j] and leq[j, i]:
                out.append(Violation("antisymmetry", (E[i], E[j])))
            if leq[i, j] and not leq[inv[j], inv[i]]:
                out.append(Violation("order reversal", (E[i], E[j])))
    # transitivity: leq @ leq must not reach outside leq
    reach = (leq.astype(np.int64) @ leq.astype(np.int64)) > 0
    bad = np.argwhere(reach & ~leq)
    for i, j in bad:
        mids = np.flatnonzero(leq[i] & leq[:, j])
        out.append(Violation("transitivity", (E[i], E[int(mids[0])], E[j])))
    for i in range(N):
        for j in range(i + 1, N):
            a, b = join[i, j], meet[i, j]
            if a < 0 or b < 0:
                out.append(Violation("lattice", (E[i], E[j])))
                continue
            ups = np.flatnonzero(leq[i] & leq[j])
            if not (leq[i, a] and leq[j, a] and leq[a, ups].all()):
                out.append(Violation("join is supremum", (E[i], E[j], E[a])))
            downs = np.flatnonzero(leq[:, i] & leq[:, j])
            if not (leq[b, i] and leq[b, j] and leq[downs, b].all()):
                out.append(Violation("meet is infimum", (E[i], E[j], E[b])))
            if inv[a] != meet[inv[i], inv[j]]:
                out.append(Violation("De Morgan", (E[i], E[j])))
            if order[a] + order[b] > order[i] + order[j]:
                out.append(Violation("submodularity", (E[i], E[j])))
    return out
