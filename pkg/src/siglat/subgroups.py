"""Subgroup enumeration and cover relations."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Sequence

from . import caps
from .errors import OrderCapExceeded, SubgroupCountCapExceeded
from .perm import Group, SubgroupHandle, is_normal


def _is_prime_power(n: int) -> bool:
    if n < 2:
        return False
    p = 2
    while p * p <= n and n % p:
        p += 1
    if n % p:
        return True  # n itself is prime
    while n % p == 0:
        n //= p
    return n == 1


@dataclass(frozen=True, eq=False)
class SubgroupFamily:
    """Deduplicated subgroups of one group, sorted by (order, bit-vector)."""

    parent: Group
    members: tuple[SubgroupHandle, ...]

    @classmethod
    def of(cls, parent: Group, handles: Iterable[SubgroupHandle]) -> "SubgroupFamily":
        uniq = {h.members: h for h in handles}
        ordered = sorted(uniq.values(), key=lambda h: (h.order, h.members))
        return cls(parent, tuple(ordered))

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self) -> Iterator[SubgroupHandle]:
        return iter(self.members)

    def __getitem__(self, i: int) -> SubgroupHandle:
        return self.members[i]

    def __contains__(self, H: SubgroupHandle) -> bool:
        return H.members in self.positions

    @cached_property
    def positions(self) -> dict[int, int]:
        return {h.members: i for i, h in enumerate(self.members)}

    @property
    def masks(self) -> list[int]:
        return [h.members for h in self.members]

    def index(self, H: SubgroupHandle) -> int:
        return self.positions[H.members]

    def filter(self, keep) -> "SubgroupFamily":
        return SubgroupFamily(self.parent, tuple(h for h in self.members if keep(h)))


def all_subgroups(G: Group) -> SubgroupFamily:
    """Every subgroup of ``G``, as the join-closure of its cyclic subgroups.

    Only cyclic subgroups of prime-power order are used as atoms: every
    element is a product of commuting prime-power powers of itself, so they
    already generate every subgroup.
    """
    got = G.cache.get("all_subgroups")
    if got is not None:
        return got
    limits = caps.current()
    if G.order > limits.max_order:
        raise OrderCapExceeded(f"{G.name} has order {G.order} > cap {limits.max_order}")
    orders = G.element_orders
    atoms: dict[int, int] = {}
    for x in range(1, G.order):
        if _is_prime_power(orders[x]):
            m = G.closure(1, [x])
            atoms.setdefault(m, x)
    atom_list = sorted(atoms.items())
    gens: dict[int, list[int]] = {1: []}
    queue = [1]
    pos = 0
    while pos < len(queue):
        S = queue[pos]
        pos += 1
        base = gens[S]
        for C, g in atom_list:
            if C & S == C:
                continue
            J = G.grow(S, base + [g])
            if J not in gens:
                gens[J] = base + [g]
                queue.append(J)
                if len(queue) > limits.max_subgroups:
                    raise SubgroupCountCapExceeded(
                        f"{G.name} has more than {limits.max_subgroups} subgroups"
                    )
    family = SubgroupFamily.of(G, (SubgroupHandle(G, m) for m in queue))
    G.register_lattice(family.masks)
    G.cache["all_subgroups"] = family
    return family


def all_normal_subgroups(G: Group) -> SubgroupFamily:
    got = G.cache.get("normal_subgroups")
    if got is None:
        got = G.cache["normal_subgroups"] = all_subgroups(G).filter(lambda H: is_normal(G, H))
    return got


def subgroups_of(H: SubgroupHandle) -> SubgroupFamily:
    """Subgroups of ``G`` contained in ``H`` (needs the parent's full family)."""
    fam = all_subgroups(H.parent)
    return fam.filter(lambda S: S.members & H.members == S.members)


def hasse_covers(family: SubgroupFamily | Sequence[SubgroupHandle]) -> list[tuple[SubgroupHandle, SubgroupHandle]]:
    """Pairs ``(X, Y)`` with ``X < Y`` and nothing from the family strictly between."""
    items = list(family)
    items.sort(key=lambda h: (h.order, h.members))
    out = []
    for j, Y in enumerate(items):
        y = Y.members
        below = [X for X in items[:j] if X.members & y == X.members and X.members != y]
        for X in below:
            x = X.members
            if not any(
                Z.members != x and Z.members & x == x for Z in below
            ):
                out.append((X, Y))
    out.sort(key=lambda p: (p[0].order, p[0].members, p[1].order, p[1].members))
    return out
