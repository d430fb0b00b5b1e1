"""Orientations, forbidden families and exhaustive F-tangle search.

Orientations are bitsets (python ints) over element indices of a
:class:`~tangleduality.sepsys.SepSystem`.  Each family knows how to test a
whole orientation, how to check incrementally during backtracking, and how to
list its inclusion-minimal members inside ``2^S`` for the uncrossing step.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import combinations

import numpy as np

from .graphsep import GraphSystem, popcount
from .sepsys import DomainError, InvariantError, SepSystem


def bits(mask: int):
    """Indices of the set bits of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def to_mask(indices) -> int:
    m = 0
    for i in indices:
        m |= 1 << int(i)
    return m


class SystemTables:
    """Bitset views of a system's order relation, cached per system."""

    def __init__(self, S: SepSystem):
        self.S = S
        N = len(S)
        leq = S.leq
        inv = S.inv
        self.N = N
        self.inv = [int(x) for x in inv]
        self.degenerate_mask = to_mask(i for i in range(N) if inv[i] == i)
        self.small_mask = to_mask(np.flatnonzero(S.small))
        weights = [1 << i for i in range(N)]
        # down[x]: all y <= x;  down_con[x]: y < x of a different separation, plus x
        self.down = []
        self.down_con = []
        sep = S.sep
        for x in range(N):
            col = np.flatnonzero(leq[:, x])
            self.down.append(sum(weights[y] for y in col))
            con = [y for y in col if y == x or sep[y] != sep[x]]
            self.down_con.append(sum(weights[y] for y in con))
        self.inv_of_down = [self.inverse_mask(m) for m in self.down]

    def inverse_mask(self, m: int) -> int:
        out = 0
        inv = self.inv
        for i in bits(m):
            out |= 1 << inv[i]
        return out

    def closure(self, m: int, regular: bool) -> int:
        """Smallest superset of ``m`` closed downwards (strongly or plainly consistent)."""
        table = self.down if regular else self.down_con
        out = m
        todo = m
        while todo:
            new = 0
            for i in bits(todo):
                new |= table[i]
            todo = new & ~out
            out |= new
        return out


def tables(S: SepSystem) -> SystemTables:
    t = getattr(S, "_bit_tables", None)
    if t is None:
        t = SystemTables(S)
        S._bit_tables = t
    return t


# ---------------------------------------------------------------------------
# orientations


@dataclass(frozen=True)
class Orientation:
    system: SepSystem
    mask: int

    def __post_init__(self):
        t = tables(self.system)
        inv = t.inv
        seen = set()
        for i in bits(self.mask):
            s = int(self.system.sep[i])
            if s in seen and inv[i] != i:
                raise DomainError("an orientation contains both orientations of a separation")
            seen.add(s)
        if len(seen) != self.system.n_seps:
            raise DomainError("an orientation must orient every separation")

    @classmethod
    def from_elements(cls, S: SepSystem, elements):
        return cls(S, to_mask(S.idx(x) for x in elements))

    @property
    def indices(self) -> list[int]:
        return list(bits(self.mask))

    @property
    def chosen(self) -> dict:
        """Map from separation id to the chosen oriented element."""
        return {int(self.system.sep[i]): self.system.elements[i] for i in bits(self.mask)}

    def __contains__(self, x):
        return bool(self.mask >> self.system.idx(x) & 1)

    def __iter__(self):
        return (self.system.elements[i] for i in bits(self.mask))

    def __len__(self):
        return popcount(self.mask)

    def to_json(self):
        out = []
        for x in self:
            out.append(x.to_json() if hasattr(x, "to_json") else repr(x))
        return out


def flags_of_mask(S: SepSystem, mask: int) -> dict:
    t = tables(S)
    consistent = all(t.down_con[i] & ~mask == 0 for i in bits(mask))
    strongly = all(t.down[i] & ~mask == 0 for i in bits(mask))
    regular = t.small_mask & ~mask == 0
    return {"consistent": consistent, "strongly_consistent": strongly, "regular": regular}


def orientation_flags(O: Orientation) -> dict:
    """Consistency, strong consistency and regularity, computed independently.

    Strong consistency must coincide with consistency plus regularity; a
    mismatch raises :class:`InvariantError`.
    """
    f = flags_of_mask(O.system, O.mask)
    if f["strongly_consistent"] != (f["consistent"] and f["regular"]):
        raise InvariantError(f"strong consistency mismatch: {f}")
    return f


# ---------------------------------------------------------------------------
# forbidden families


class ForbiddenFamily:
    """Base class.  Subclasses define membership on index sets of a system."""

    name = "custom"
    parameter = None

    def contains(self, S: SepSystem, members) -> bool:
        raise NotImplementedError

    def find_member(self, S: SepSystem, mask: int):
        """Some member of the family contained in ``mask``, or ``None``."""
        raise NotImplementedError

    def checker(self, S: SepSystem) -> "Checker":
        return _FullChecker(self, S)

    def minimal_members(self, S: SepSystem) -> list[tuple]:
        """Inclusion-minimal members of ``F & 2^S`` with degenerate elements removed."""
        raise NotImplementedError

    def contains_seps(self, S: SepSystem, seps) -> bool:
        return self.contains(S, [S.idx(x) for x in seps])

    def __repr__(self):
        p = "" if self.parameter is None else f"({self.parameter})"
        return f"{self.name}{p}"


class Checker:
    """Incremental avoidance test with a stack of undo records."""

    def push(self, mask: int, added: int) -> bool:
        raise NotImplementedError

    def pop(self):
        raise NotImplementedError


class _FullChecker(Checker):
    def __init__(self, family, S):
        self.family, self.S = family, S

    def push(self, mask, added):
        return self.family.find_member(self.S, mask) is None

    def pop(self):
        pass


def _nondegenerate(S, members):
    return tuple(sorted(i for i in set(members) if S.inv[i] != i))


def _minimalise(sets) -> list[tuple]:
    """Drop every set that strictly contains another one."""
    masks = sorted({to_mask(s) for s in sets}, key=lambda m: (popcount(m), m))
    kept: list[int] = []
    for m in masks:
        if any(k & m == k for k in kept):
            continue
        kept.append(m)
    return [tuple(bits(m)) for m in kept]


class ProfileFamily(ForbiddenFamily):
    """P: all sets {r, s, r* ^ s*}; members inside S need the corner in S."""

    name = "P"

    def contains(self, S, members):
        m = set(int(i) for i in members)
        if not m:
            return False
        for r in m:
            for s in m:
                c = S.meet[S.inv[r], S.inv[s]]
                if c >= 0 and {r, s, int(c)} == m:
                    return True
        return False

    def find_member(self, S, mask):
        idx = np.array(list(bits(mask)), dtype=np.int64)
        if idx.size == 0:
            return None
        inO = np.zeros(len(S), dtype=bool)
        inO[idx] = True
        M = S.meet[np.ix_(S.inv[idx], S.inv[idx])]
        hit = (M >= 0) & inO[np.maximum(M, 0)]
        if hit.any():
            a, b = np.argwhere(hit)[0]
            return tuple(sorted({int(idx[a]), int(idx[b]), int(M[a, b])}))
        return None

    def checker(self, S):
        return _ProfileChecker(S)

    def triples(self, S):
        """All members of P_S as (r, s, corner) with r <= s."""
        N = len(S)
        M = S.meet[np.ix_(S.inv, S.inv)]
        r, s = np.nonzero((M >= 0) & np.triu(np.ones((N, N), dtype=bool)))
        return r, s, M[r, s]

    def minimal_members(self, S):
        r, s, c = self.triples(S)
        sets = {_nondegenerate(S, (int(a), int(b), int(x))) for a, b, x in zip(r, s, c)}
        return _minimalise(sets)


class _ProfileChecker(Checker):
    def __init__(self, S):
        self.S = S
        N = len(S)
        self.meetinv = S.meet[np.ix_(S.inv, S.inv)]
        # pairs (r, s) whose corner r* ^ s* is a given element
        r, s = np.nonzero(self.meetinv >= 0)
        c = self.meetinv[r, s]
        order = np.argsort(c, kind="stable")
        self.pr, self.ps, cs = r[order], s[order], c[order]
        self.starts = np.searchsorted(cs, np.arange(N + 1))
        self.inO = np.zeros(N, dtype=bool)
        self.stack = []

    def push(self, mask, added):
        inO = self.inO
        new = [i for i in bits(added) if not inO[i]]
        self.stack.append(new)
        inO[new] = True
        if not new:
            return True
        cur = np.flatnonzero(inO)
        M = self.meetinv[np.ix_(new, cur)]
        if (inO[M[M >= 0]]).any():
            return False
        for c in new:
            a, b = self.starts[c], self.starts[c + 1]
            if a < b and (inO[self.pr[a:b]] & inO[self.ps[a:b]]).any():
                return False
        return True

    def pop(self):
        self.inO[self.stack.pop()] = False


def _need_graph(S):
    if not isinstance(S, GraphSystem):
        raise DomainError("this family is defined for graph separation systems only")
    return S


class BlockFamily(ForbiddenFamily):
    """B_k: sets of separations whose B-sides meet in fewer than k vertices."""

    name = "Bk"

    def __init__(self, k: int):
        if k < 1:
            raise DomainError("k must be positive")
        self.parameter = k

    def _inter(self, S, members):
        m = S.G.full
        for i in members:
            m &= S.Bm[i]
        return m

    def contains(self, S, members):
        _need_graph(S)
        return popcount(self._inter(S, members)) < self.parameter

    def find_member(self, S, mask):
        _need_graph(S)
        members = list(bits(mask))
        if popcount(self._inter(S, members)) >= self.parameter:
            return None
        # shrink to a minimal witness
        keep = list(members)
        for i in members:
            trial = [j for j in keep if j != i]
            if popcount(self._inter(S, trial)) < self.parameter:
                keep = trial
        return tuple(keep)

    def checker(self, S):
        return _BlockChecker(_need_graph(S), self.parameter)

    def minimal_members(self, S):
        S = _need_graph(S)
        n, k = S.G.n, self.parameter
        if n < k:
            return [()]
        need = n - k + 1  # vertices that must be cut away from the common big side
        full = S.G.full
        cand = [i for i in range(len(S)) if S.inv[i] != i and S.Bm[i] != full]
        away = {i: full & ~S.Bm[i] for i in cand}
        out = []

        def rec(start, chosen, union):
            if popcount(union) >= need:
                # minimal iff every chosen element owns a vertex no other covers
                for i in chosen:
                    rest = 0
                    for j in chosen:
                        if j != i:
                            rest |= away[j]
                    if away[i] & ~rest == 0:
                        return
                out.append(tuple(chosen))
                return
            for pos in range(start, len(cand)):
                i = cand[pos]
                if away[i] & ~union:
                    chosen.append(i)
                    rec(pos + 1, chosen, union | away[i])
                    chosen.pop()

        rec(0, [], 0)
        return out


class _BlockChecker(Checker):
    def __init__(self, S, k):
        self.S, self.k = S, k
        self.inter = [S.G.full]

    def push(self, mask, added):
        m = self.inter[-1]
        for i in bits(added):
            m &= self.S.Bm[i]
        self.inter.append(m)
        return popcount(m) >= self.k

    def pop(self):
        self.inter.pop()


class TangleFamily(ForbiddenFamily):
    """T: up to three separations whose small sides' induced subgraphs cover G."""

    name = "T"

    @staticmethod
    def covers(S):
        S = _need_graph(S)
        cached = getattr(S, "_cover_words", None)
        if cached is None:
            G = S.G
            n = G.n
            words = [a | (G.induced_edge_mask(a) << n) for a in S.Am]
            full = G.full | (((1 << len(G.edges)) - 1) << n)
            cached = (words, full)
            S._cover_words = cached
        return cached

    def contains(self, S, members):
        words, full = self.covers(S)
        members = set(members)
        if not 1 <= len(members) <= 3:
            return False
        u = 0
        for i in members:
            u |= words[i]
        return u == full

    def find_member(self, S, mask):
        words, full = self.covers(S)
        idx = list(bits(mask))
        for size in (1, 2, 3):
            for combo in combinations(idx, size):
                u = 0
                for i in combo:
                    u |= words[i]
                if u == full and self._admissible(S, combo):
                    return combo
        return None

    def _admissible(self, S, combo):
        return True

    def checker(self, S):
        return _TangleChecker(self, S)

    def minimal_members(self, S):
        words, full = self.covers(S)
        N = len(S)
        cand = [i for i in range(N) if S.inv[i] != i]
        degenerate_covers = any(words[i] == full for i in range(N) if S.inv[i] == i)
        if degenerate_covers:
            return [()]
        out = []
        singles = {i for i in cand if words[i] == full and self._admissible(S, (i,))}
        out.extend((i,) for i in sorted(singles))
        rest = [i for i in cand if i not in singles]
        pairs = set()
        for a, b in combinations(rest, 2):
            if words[a] | words[b] == full and self._admissible(S, (a, b)):
                pairs.add((a, b))
        out.extend(sorted(pairs))
        for x in range(len(rest)):
            for y in range(x + 1, len(rest)):
                a, b = rest[x], rest[y]
                if (a, b) in pairs:
                    continue
                wab = words[a] | words[b]
                for z in range(y + 1, len(rest)):
                    c = rest[z]
                    if wab | words[c] != full:
                        continue
                    if (a, c) in pairs or (b, c) in pairs:
                        continue
                    if self._admissible(S, (a, b, c)):
                        out.append((a, b, c))
        return out


class TangleStarFamily(TangleFamily):
    """T*: the members of T that are stars."""

    name = "Tstar"

    def _admissible(self, S, combo):
        # (V, V) is in every orientation and never in a star; it is ignored
        # here so that {(V, V)} in T stays forbidden when n < k
        combo = [i for i in combo if S.inv[i] != i]
        return all(S.leq[a, S.inv[b]] for a, b in combinations(combo, 2))

    def contains(self, S, members):
        return super().contains(S, members) and self._admissible(S, tuple(set(members)))

    def minimal_members(self, S):
        words, full = self.covers(S)
        N = len(S)
        out = []
        for size in (1, 2, 3):
            for combo in combinations(range(N), size):
                u = 0
                for i in combo:
                    u |= words[i]
                if u == full and self._admissible(S, combo):
                    out.append(_nondegenerate(S, combo))
        return _minimalise(out)


class _TangleChecker(Checker):
    """Keeps the cover words of all chosen singletons and pairs."""

    def __init__(self, family, S):
        self.family = family
        self.S = S
        words, full = family.covers(S)
        self.words = words
        self.full = full
        self.star = isinstance(family, TangleStarFamily)
        N = len(S)
        self.pairs = np.zeros(max(16, N * N // 2 + N + 1), dtype=np.uint64)
        self.pair_a = np.zeros(self.pairs.shape, dtype=np.int64)
        self.pair_b = np.zeros(self.pairs.shape, dtype=np.int64)
        self.n_pairs = 0
        self.chosen: list[int] = []
        self.stack = []
        if self.star:
            deg = S.inv == np.arange(N)
            self.starok = S.leq[:, S.inv] | deg[:, None] | deg[None, :]
        self.use_np = full < (1 << 64)

    def _grow(self):
        size = self.pairs.shape[0] * 2
        for name in ("pairs", "pair_a", "pair_b"):
            old = getattr(self, name)
            new = np.zeros(size, dtype=old.dtype)
            new[: old.shape[0]] = old
            setattr(self, name, new)

    def push(self, mask, added):
        self.stack.append((self.n_pairs, len(self.chosen)))
        for a in bits(added):
            if a in self.chosen:
                continue
            if not self._add(a):
                return False
        return True

    def _add(self, a):
        w = self.words[a]
        full = self.full
        star = self.star
        if w == full:
            return False
        m = self.n_pairs
        if m:
            if self.use_np:
                hit = (self.pairs[:m] | np.uint64(w)) == np.uint64(full)
            else:
                hit = np.array([(int(p) | w) == full for p in self.pairs[:m]], dtype=bool)
            if star:
                hit &= self.starok[a, self.pair_a[:m]] & self.starok[a, self.pair_b[:m]]
            if hit.any():
                return False
        # record singleton {a} and pairs {a, b}
        chosen = self.chosen
        need = m + len(chosen) + 1
        while need > self.pairs.shape[0]:
            self._grow()
        self.pairs[m] = w
        self.pair_a[m] = a
        self.pair_b[m] = a
        m += 1
        if chosen:
            ch = np.array(chosen, dtype=np.int64)
            ws = np.array([self.words[b] | w for b in chosen], dtype=np.uint64)
            if star:
                keep = self.starok[a, ch]
                ch, ws = ch[keep], ws[keep]
            c = len(ch)
            self.pairs[m : m + c] = ws
            self.pair_a[m : m + c] = a
            self.pair_b[m : m + c] = ch
            m += c
        self.n_pairs = m
        chosen.append(a)
        return True

    def pop(self):
        self.n_pairs, nc = self.stack.pop()
        del self.chosen[nc:]


class StarInteriorFamily(ForbiddenFamily):
    """S^n: stars whose interior has fewer than n vertices."""

    name = "Sn"

    def __init__(self, n: int):
        self.parameter = n

    def contains(self, S, members):
        S = _need_graph(S)
        members = list(set(members))
        from .sepsys import is_star_idx

        if not is_star_idx(S, members):
            return False
        return popcount(S.interior_mask(members)) < self.parameter

    def _compat(self, S):
        c = getattr(S, "_star_compat", None)
        if c is None:
            N = len(S)
            ok = S.leq[:, S.inv].copy()
            nondeg = S.inv != np.arange(N)
            ok &= nondeg[:, None] & nondeg[None, :]
            np.fill_diagonal(ok, False)
            c = [to_mask(np.flatnonzero(ok[i])) for i in range(N)]
            S._star_compat = c
        return c

    def star_with(self, S, a, mask):
        """A star containing ``a`` inside ``mask`` with small interior, or None."""
        S = _need_graph(S)
        if S.inv[a] == a:
            return None
        compat = self._compat(S)
        n = self.parameter
        Bm = S.Bm
        seen = set()

        def rec(inter, cand, chosen):
            if popcount(inter) < n:
                return list(chosen)
            key = (inter, cand)
            if key in seen:
                return None
            seen.add(key)
            for b in bits(cand):
                nxt = inter & Bm[b]
                if nxt == inter:
                    continue
                chosen.append(b)
                hit = rec(nxt, cand & compat[b] & ~((2 << b) - 1), chosen)
                if hit is not None:
                    return hit
                chosen.pop()
            return None

        return rec(Bm[a], compat[a] & mask, [a])

    def find_member(self, S, mask):
        S = _need_graph(S)
        if popcount(S.G.full) < self.parameter:
            return ()
        for a in bits(mask):
            hit = self.star_with(S, a, mask)
            if hit is not None:
                return tuple(sorted(hit))
        return None

    def checker(self, S):
        return _StarInteriorChecker(self, _need_graph(S))

    def minimal_members(self, S):
        raise DomainError("S^n is only used for tangle search, not for uncrossing")


class _StarInteriorChecker(Checker):
    def __init__(self, family, S):
        self.family, self.S = family, S
        self.empty_member = popcount(S.G.full) < family.parameter

    def push(self, mask, added):
        if self.empty_member:
            return False
        for a in bits(added):
            if self.family.star_with(self.S, a, mask) is not None:
                return False
        return True

    def pop(self):
        pass


class StarListFamily(ForbiddenFamily):
    """An explicit list of index sets (typically stars)."""

    name = "custom"

    def __init__(self, members, name="custom"):
        self.name = name
        self.members = sorted({tuple(sorted(set(int(i) for i in m))) for m in members})
        self.masks = [to_mask(m) for m in self.members]
        self.has_empty = () in self.members

    def contains(self, S, members):
        return tuple(sorted(set(int(i) for i in members))) in set(self.members)

    def find_member(self, S, mask):
        for m, t in zip(self.masks, self.members):
            if m & ~mask == 0:
                return t
        return None

    def checker(self, S):
        return _StarListChecker(self, len(S))

    def minimal_members(self, S):
        return _minimalise(self.members)

    def __len__(self):
        return len(self.members)


class _StarListChecker(Checker):
    def __init__(self, family, N):
        self.family = family
        self.by_elem = [[] for _ in range(N)]
        for m in family.masks:
            for i in bits(m):
                self.by_elem[i].append(m)

    def push(self, mask, added):
        if self.family.has_empty:
            return False
        for a in bits(added):
            for m in self.by_elem[a]:
                if m & ~mask == 0:
                    return False
        return True

    def pop(self):
        pass


def family_T(G=None):
    return TangleFamily()


def family_Tstar(G=None):
    return TangleStarFamily()


def family_Bk(G, k):
    return BlockFamily(k)


def family_P(U=None):
    return ProfileFamily()


def family_Sn(U, n):
    return StarInteriorFamily(n)


def avoids(O: Orientation, F: ForbiddenFamily) -> bool:
    """True iff no member of ``F`` is a subset of ``O``."""
    if isinstance(F, (set, frozenset, list, tuple)) and not F:
        return True
    return F.find_member(O.system, O.mask) is None


# ---------------------------------------------------------------------------
# search


def iter_f_tangles(S: SepSystem, F: ForbiddenFamily | None, require_regular: bool, limit=None):
    """Yield every consistent (strongly consistent if ``require_regular``)
    orientation avoiding ``F``, as a bitmask.

    Separations are branched in system order (increasing order); choosing an
    element adds its down-closure before the avoidance check runs.
    """
    t = tables(S)
    N = len(S)
    checker = F.checker(S) if F is not None else None
    inv = t.inv
    # one representative per separation, in element order
    reps = []
    seen = set()
    for i in range(N):
        s = int(S.sep[i])
        if s not in seen:
            seen.add(s)
            reps.append(i)
    count = 0

    def conflict(mask):
        return t.inverse_mask(mask & ~t.degenerate_mask) & mask

    start = t.closure(t.degenerate_mask, require_regular)
    if conflict(start):
        return
    if checker is not None and not checker.push(start, start):
        return
    def rec(pos, mask):
        nonlocal count
        while pos < len(reps):
            i = reps[pos]
            if mask >> i & 1 or mask >> inv[i] & 1:
                pos += 1
                continue
            break
        else:
            yield mask
            return
        i = reps[pos]
        # try the orientation pointing to the larger side first
        options = (inv[i], i) if inv[i] != i else (i,)
        for x in options:
            new = t.closure(mask | (1 << x), require_regular)
            if conflict(new):
                continue
            ok = True
            if checker is not None:
                ok = checker.push(new, new & ~mask)
            if ok:
                yield from rec(pos + 1, new)
            if checker is not None:
                checker.pop()

    for m in rec(0, start):
        count += 1
        yield m
        if limit is not None and count >= limit:
            return


def find_f_tangle(S: SepSystem, F: ForbiddenFamily | None, require_regular: bool = True):
    """A consistent F-avoiding orientation (regular if asked), or ``None``."""
    for m in iter_f_tangles(S, F, require_regular, limit=1):
        return Orientation(S, m)
    return None


def all_f_tangles(S, F, require_regular=True) -> list[int]:
    return list(iter_f_tangles(S, F, require_regular))


def iter_consistent_orientations(S: SepSystem):
    """Every consistent orientation of ``S`` (as bitmasks)."""
    return iter_f_tangles(S, None, require_regular=False)


# ---------------------------------------------------------------------------
# the regular 2-profile O'_x


def cutvertices(G) -> set[int]:
    """Vertices x such that some separation {A, B} of order 1 has separator {x}
    and neither side equals V."""
    out = set()
    full = G.full
    from .graphsep import components_mask

    for x in range(G.n):
        comps = components_mask(G, full & ~(1 << x))
        if len(comps) >= 2:
            out.add(x)
    return out


def two_profile(G, S2: GraphSystem | None = None, x: int | None = None) -> Orientation:
    """The orientation O'_x of S_2 for a vertex x that is not a cutvertex.

    O'_x = {(A, B) in S_2 : x in B, (A, B) != (V, {x})}.  In the one-vertex
    graph the degenerate separation (V, V) is the excluded (V, {x}); it is
    put back, since every orientation must contain it.
    """
    from .graphsep import enumerate_Sk

    if G.n == 0:
        raise DomainError("the empty graph has no 2-profile")
    S2 = S2 if S2 is not None else enumerate_Sk(G, 2)
    if x is None:
        cuts = cutvertices(G)
        x = min(v for v in range(G.n) if v not in cuts)
    full = G.full
    bit = 1 << x
    mask = 0
    for i, (a, b) in enumerate(zip(S2.Am, S2.Bm)):
        if b & bit and not (a == full and b == bit):
            mask |= 1 << i
    mask |= tables(S2).degenerate_mask
    return Orientation(S2, mask)


def irregular_two_profile(G, x: int, S2: GraphSystem | None = None) -> Orientation:
    """O_x = {(A, B) in S_2 : x in B, (A, B) != ({x}, V)}: a 2-profile missing
    the small separation ({x}, V), so it is consistent but not regular.

    ``x`` must not be a cutvertex and G needs at least two vertices.
    """
    from .graphsep import enumerate_Sk

    if G.n < 2:
        raise DomainError("O_x needs at least two vertices")
    if x in cutvertices(G):
        raise DomainError(f"{x} is a cutvertex")
    S2 = S2 if S2 is not None else enumerate_Sk(G, 2)
    full = G.full
    bit = 1 << x
    mask = 0
    for i, (a, b) in enumerate(zip(S2.Am, S2.Bm)):
        if b & bit and not (a == bit and b == full):
            mask |= 1 << i
    return Orientation(S2, mask | tables(S2).degenerate_mask)
