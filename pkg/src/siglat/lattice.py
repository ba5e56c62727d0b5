"""Finite lattices over subgroup families, stored as meet/join index tables.

All law checks are exhaustive and return the lexicographically least failing
tuple of indices as witness.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Any, Callable, Sequence

from .errors import ElementNotInLattice, NotComparable, NotJoinClosed, NotMeetClosed
from .perm import SubgroupHandle
from .subgroups import SubgroupFamily


@dataclass(frozen=True)
class LawCheck:
    holds: bool
    witness: tuple[int, ...] | None = None

    def __bool__(self) -> bool:
        return self.holds


@dataclass(frozen=True, eq=False)
class SigmaLattice:
    family: tuple[Any, ...]
    meet: tuple[tuple[int, ...], ...]
    join: tuple[tuple[int, ...], ...]
    bottom: int
    top: int

    def __len__(self) -> int:
        return len(self.family)

    @cached_property
    def positions(self) -> dict:
        return {_key(x): i for i, x in enumerate(self.family)}

    def index_of(self, x) -> int:
        if isinstance(x, int) and not isinstance(x, bool):
            if 0 <= x < len(self.family):
                return x
            raise ElementNotInLattice(x)
        try:
            return self.positions[_key(x)]
        except KeyError:
            raise ElementNotInLattice(x) from None

    def leq(self, a: int, b: int) -> bool:
        return self.meet[a][b] == a

    def covers(self) -> list[tuple[int, int]]:
        n = len(self)
        out = []
        for y in range(n):
            below = [x for x in range(n) if x != y and self.leq(x, y)]
            for x in below:
                if not any(z != x and self.leq(x, z) for z in below):
                    out.append((x, y))
        out.sort()
        return out

    def members(self, idxs) -> list:
        return [self.family[i] for i in idxs]


def _key(x):
    return ("sub", x.members) if isinstance(x, SubgroupHandle) else ("label", x)


def build_lattice(family: SubgroupFamily | Sequence[SubgroupHandle]) -> SigmaLattice:
    """Meet/join tables for a family of subgroups of one group.

    Raises NotMeetClosed / NotJoinClosed with the first offending pair.
    """
    items = tuple(family)
    if not items:
        raise ValueError("empty family")
    G = items[0].parent
    pos = {h.members: i for i, h in enumerate(items)}
    n = len(items)
    meet = [[0] * n for _ in range(n)]
    join = [[0] * n for _ in range(n)]
    for i, A in enumerate(items):
        a = A.members
        for j in range(i, n):
            b = items[j].members
            m = a & b
            k = pos.get(m)
            if k is None:
                raise NotMeetClosed(A, items[j], SubgroupHandle(G, m))
            jn = G.join_mask(a, b)
            t = pos.get(jn)
            if t is None:
                raise NotJoinClosed(A, items[j], SubgroupHandle(G, jn))
            meet[i][j] = meet[j][i] = k
            join[i][j] = join[j][i] = t
    bottom = min(range(n), key=lambda i: items[i].order)
    top = max(range(n), key=lambda i: items[i].order)
    return SigmaLattice(items, tuple(map(tuple, meet)), tuple(map(tuple, join)), bottom, top)


def lattice_from_order(labels: Sequence[Any], leq: Callable[[Any, Any], bool]) -> SigmaLattice:
    """Tables for an abstract finite lattice given by its order relation."""
    n = len(labels)
    le = [[leq(labels[a], labels[b]) for b in range(n)] for a in range(n)]

    def extremum(cands: list[int], above: bool) -> int:
        for c in cands:
            if all((le[d][c] if above else le[c][d]) for d in cands):
                return c
        raise ValueError("order is not a lattice")

    meet = [[0] * n for _ in range(n)]
    join = [[0] * n for _ in range(n)]
    for a in range(n):
        for b in range(n):
            lower = [c for c in range(n) if le[c][a] and le[c][b]]
            upper = [c for c in range(n) if le[a][c] and le[b][c]]
            meet[a][b] = extremum(lower, above=True)
            join[a][b] = extremum(upper, above=False)
    everything = list(range(n))
    bottom = next(c for c in everything if all(le[c][d] for d in everything))
    top = next(c for c in everything if all(le[d][c] for d in everything))
    return SigmaLattice(tuple(labels), tuple(map(tuple, meet)), tuple(map(tuple, join)), bottom, top)


def is_distributive(L: SigmaLattice) -> LawCheck:
    """``a & (b | c) == (a & b) | (a & c)`` for every triple."""
    n = len(L)
    M, J = L.meet, L.join
    for a in range(n):
        Ma = M[a]
        for b in range(n):
            Jab = J[Ma[b]]
            Jb = J[b]
            for c in range(b + 1, n):
                if Ma[Jb[c]] != Jab[Ma[c]]:
                    return LawCheck(False, (a, b, c))
    return LawCheck(True)


def is_modular(L: SigmaLattice) -> LawCheck:
    """``a <= c`` implies ``a | (b & c) == (a | b) & c``."""
    n = len(L)
    M, J = L.meet, L.join
    for a in range(n):
        for b in range(n):
            ab = J[a][b]
            for c in range(n):
                if c != a and M[a][c] == a and J[a][M[b][c]] != M[ab][c]:
                    return LawCheck(False, (a, b, c))
    return LawCheck(True)


def meet_distributive_witness(L: SigmaLattice, a) -> tuple[int, int] | None:
    a = L.index_of(a)
    n = len(L)
    M, J = L.meet, L.join
    Ma = M[a]
    for b in range(n):
        for c in range(b + 1, n):
            if Ma[J[b][c]] != J[Ma[b]][Ma[c]]:
                return (b, c)
    return None


def is_meet_distributive_element(L: SigmaLattice, a) -> bool:
    return meet_distributive_witness(L, a) is None


def find_diamond(L: SigmaLattice) -> tuple[int, int, int] | None:
    """Distinct ``a, b, c`` with equal pairwise joins and equal pairwise meets."""
    n = len(L)
    M, J = L.meet, L.join
    for a in range(n):
        for b in range(a + 1, n):
            j, m = J[a][b], M[a][b]
            if j in (a, b):
                continue
            for c in range(b + 1, n):
                if J[a][c] == j and J[b][c] == j and M[a][c] == m and M[b][c] == m:
                    return (a, b, c)
    return None


def is_distributive_by_forbidden(L: SigmaLattice) -> bool:
    """Distributivity as modular and diamond-free (independent of the triple law)."""
    return bool(is_modular(L)) and find_diamond(L) is None


def interval(L: SigmaLattice, a, b) -> SigmaLattice:
    """The sublattice ``{x : a <= x <= b}``."""
    a, b = L.index_of(a), L.index_of(b)
    if not L.leq(a, b):
        raise NotComparable(f"element {a} is not below element {b}")
    keep = [x for x in range(len(L)) if L.leq(a, x) and L.leq(x, b)]
    where = {x: i for i, x in enumerate(keep)}
    meet = tuple(tuple(where[L.meet[x][y]] for y in keep) for x in keep)
    join = tuple(tuple(where[L.join[x][y]] for y in keep) for x in keep)
    return SigmaLattice(tuple(L.family[x] for x in keep), meet, join, where[a], where[b])
