"""Isomorphism search between small groups given by Cayley tables.

Used for operator-group isomorphisms between sections ``H/K`` and ``L/K`` and
for the automorphism enumeration behind characteristic subgroups. The search
backtracks over images of a greedy generating set, matching element orders.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterator, Sequence

from . import caps
from .errors import ActorDoesNotNormalize, NotContained, OrderCapExceeded, OrderMismatch, ParentMismatch
from .perm import Group, Permutation, SubgroupHandle, bits

Table = Sequence[Sequence[int]]


def table_orders(table: Table) -> list[int]:
    out = []
    for i in range(len(table)):
        k, x = 1, i
        while x != 0:
            x = table[x][i]
            k += 1
        out.append(k)
    return out


def table_generators(table: Table, orders: Sequence[int] | None = None) -> list[int]:
    """Greedy generating set, preferring elements of large order."""
    n = len(table)
    orders = orders or table_orders(table)
    seen = bytearray(n)
    seen[0] = 1
    span = [0]
    gens: list[int] = []
    for x in sorted(range(1, n), key=lambda i: (-orders[i], i)):
        if len(span) == n:
            break
        if seen[x]:
            continue
        gens.append(x)
        span = _table_closure(table, gens)
        seen = bytearray(n)
        for y in span:
            seen[y] = 1
    return gens


def _table_closure(table: Table, gens: Sequence[int]) -> list[int]:
    seen = {0}
    queue = [0]
    for x in queue:
        row = table[x]
        for g in gens:
            y = row[g]
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return queue


def _extend(t1: Table, t2: Table, gens: Sequence[int], imgs: Sequence[int]) -> dict[int, int] | None:
    """Word map on <gens> sending gens to imgs, or None if not a well-defined injection."""
    fwd = {0: 0}
    used = {0}
    queue = [0]
    for x in queue:
        fx = fwd[x]
        row1, row2 = t1[x], t2[fx]
        for g, h in zip(gens, imgs):
            y, fy = row1[g], row2[h]
            got = fwd.get(y)
            if got is None:
                if fy in used:
                    return None
                fwd[y] = fy
                used.add(fy)
                queue.append(y)
            elif got != fy:
                return None
    return fwd


def iter_isomorphisms(
    t1: Table,
    t2: Table,
    actions1: Sequence[Sequence[int]] = (),
    actions2: Sequence[Sequence[int]] = (),
) -> Iterator[list[int]]:
    """Yield every isomorphism ``f`` (as a list) commuting with the paired actions.

    ``actions1[k]`` and ``actions2[k]`` are automorphisms of the two tables
    induced by the same operator; equivariance means
    ``f[actions1[k][x]] == actions2[k][f[x]]``.
    """
    n = len(t1)
    if n != len(t2):
        return
    if n == 1:
        yield [0]
        return
    o1, o2 = table_orders(t1), table_orders(t2)
    if sorted(o1) != sorted(o2):
        return
    gens = table_generators(t1, o1)
    by_order: dict[int, list[int]] = {}
    for y in range(n):
        by_order.setdefault(o2[y], []).append(y)
    cands = [by_order.get(o1[g], []) for g in gens]
    imgs: list[int] = []

    def rec(depth: int) -> Iterator[list[int]]:
        if depth == len(gens):
            fwd = _extend(t1, t2, gens, imgs)
            if fwd is None or len(fwd) != n:
                return
            f = [fwd[x] for x in range(n)]
            for a1, a2 in zip(actions1, actions2):
                if any(f[a1[g]] != a2[f[g]] for g in gens):
                    return
            yield f
            return
        for c in cands[depth]:
            imgs.append(c)
            if _extend(t1, t2, gens[: depth + 1], imgs) is not None:
                yield from rec(depth + 1)
            imgs.pop()

    yield from rec(0)


def find_isomorphism(t1: Table, t2: Table, actions1=(), actions2=()) -> list[int] | None:
    return next(iter_isomorphisms(t1, t2, actions1, actions2), None)


@dataclass(frozen=True, eq=False)
class Section:
    """The quotient ``top/bottom`` of two subgroups of a common group."""

    top: SubgroupHandle
    bottom: SubgroupHandle

    def __post_init__(self):
        if self.top.parent is not self.bottom.parent:
            raise ParentMismatch("section ends live in different groups")
        if not self.bottom <= self.top:
            raise NotContained("section bottom must lie in its top")
        G = self.group
        if not G.normalizes(self.top.generators, self.bottom.members):
            raise ValueError("section bottom must be normal in its top")

    @property
    def group(self) -> Group:
        return self.top.parent

    @property
    def order(self) -> int:
        return self.top.order // self.bottom.order

    @cached_property
    def cosets(self) -> list[int]:
        """Cosets as masks, ordered by least element (the bottom comes first)."""
        G = self.group
        mul = G.mul
        left = self.top.members
        k_members = self.bottom.indices
        out = []
        while left:
            h = (left & -left).bit_length() - 1
            c = 0
            for k in k_members:
                c |= 1 << mul[k][h]
            out.append(c)
            left &= ~c
        return out

    @cached_property
    def coset_of(self) -> dict[int, int]:
        return {x: i for i, c in enumerate(self.cosets) for x in bits(c)}

    @cached_property
    def reps(self) -> list[int]:
        return [(c & -c).bit_length() - 1 for c in self.cosets]

    @cached_property
    def table(self) -> list[list[int]]:
        mul = self.group.mul
        where = self.coset_of
        return [[where[mul[a][b]] for b in self.reps] for a in self.reps]

    def action(self, a: int) -> list[int]:
        """Permutation of cosets induced by conjugation with ``a``."""
        conj = self.group.conj(a)
        where = self.coset_of
        return [where[conj[r]] for r in self.reps]


def _actor_index(G: Group, a: int | Permutation) -> int:
    return G.index[a.images] if isinstance(a, Permutation) else a


def find_equivariant_isomorphism(
    first: Section, second: Section, actors: Sequence[int | Permutation] = ()
) -> list[int] | None:
    """An isomorphism ``first -> second`` commuting with conjugation by ``actors``.

    The result maps coset index to coset index (see ``Section.cosets``).
    Equivariance is checked on the given actors only, so pass a generating
    set of the acting group.
    """
    G = first.group
    if second.group is not G:
        raise ParentMismatch("sections live in different groups")
    if first.order != second.order:
        raise OrderMismatch(f"section orders differ: {first.order} vs {second.order}")
    acts = [_actor_index(G, a) for a in actors]
    for a in acts:
        for S in (first.top, first.bottom, second.top, second.bottom):
            if G.conjugate_mask(S.members, a) != S.members:
                raise ActorDoesNotNormalize(f"actor {G.elements[a]} does not normalise a section end")
    return find_isomorphism(
        first.table,
        second.table,
        [first.action(a) for a in acts],
        [second.action(a) for a in acts],
    )


def automorphisms(G: Group) -> list[list[int]]:
    """Every automorphism of ``G`` as a list over its element table."""
    limit = caps.current().max_aut_order
    if G.order > limit:
        raise OrderCapExceeded(f"automorphism search capped at order {limit}, got {G.order}")
    return list(iter_isomorphisms(G.mul, G.mul))


def characteristic_subgroups(A: Group | SubgroupHandle) -> list[SubgroupHandle]:
    """Subgroups of ``A`` fixed by every automorphism of ``A``, in family order."""
    from .subgroups import all_subgroups

    if isinstance(A, SubgroupHandle):
        parent = A.parent
        key = ("characteristic", A.members)
        got = parent.cache.get(key)
        if got is not None:
            return got
        H, embed = A.as_group()
        back = {own: idx for idx, own in enumerate(embed) if own >= 0}
        out = []
        for S in characteristic_subgroups(H):
            mask = 0
            for own in S.indices:
                mask |= 1 << back[own]
            out.append(SubgroupHandle(parent, mask))
        parent.cache[key] = out
        return out
    got = A.cache.get("characteristic")
    if got is not None:
        return got
    auts = automorphisms(A)
    out = []
    for S in all_subgroups(A).members:
        idx = S.indices
        if all(_maps_into(f, idx, S.members) for f in auts):
            out.append(S)
    A.cache["characteristic"] = out
    return out


def _maps_into(f: Sequence[int], idx: Sequence[int], mask: int) -> bool:
    return all((mask >> f[x]) & 1 for x in idx)
