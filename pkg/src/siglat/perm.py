"""Finite permutation groups by full element enumeration.

Elements live in a canonical table sorted by image tuple, so the identity is
always index 0 and two constructions of the same group give the same table.
Subgroups are Python ints used as bit-vectors over that table.

Products compose left to right: ``(p * q)[k] == q[p[k]]``, and conjugation is
``x^g = g^-1 x g``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

from . import caps
from .errors import (
    InvalidPermutation,
    NotContained,
    NotNormal,
    OrderCapExceeded,
    ParentMismatch,
    ParseError,
)


def bits(mask: int) -> list[int]:
    """Indices of the set bits of ``mask``, ascending."""
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def mask_of(indices: Iterable[int]) -> int:
    mask = 0
    for i in indices:
        mask |= 1 << i
    return mask


@dataclass(frozen=True, order=True)
class Permutation:
    images: tuple[int, ...]

    def __post_init__(self):
        if sorted(self.images) != list(range(len(self.images))):
            raise InvalidPermutation(f"not a bijection on 0..{len(self.images) - 1}: {self.images}")

    @classmethod
    def identity(cls, degree: int) -> "Permutation":
        return cls(tuple(range(degree)))

    @classmethod
    def from_cycles(cls, text: str, degree: int | None = None) -> "Permutation":
        return parse_cycles(text, degree)

    @property
    def degree(self) -> int:
        return len(self.images)

    def __mul__(self, other: "Permutation") -> "Permutation":
        if self.degree != other.degree:
            raise InvalidPermutation("degree mismatch in product")
        return Permutation(tuple(other.images[i] for i in self.images))

    def inverse(self) -> "Permutation":
        inv = [0] * self.degree
        for i, j in enumerate(self.images):
            inv[j] = i
        return Permutation(tuple(inv))

    def cycles(self) -> list[tuple[int, ...]]:
        seen = set()
        out = []
        for start in range(self.degree):
            if start in seen or self.images[start] == start:
                continue
            cyc = [start]
            seen.add(start)
            k = self.images[start]
            while k != start:
                cyc.append(k)
                seen.add(k)
                k = self.images[k]
            out.append(tuple(cyc))
        return out

    def __str__(self) -> str:
        cyc = self.cycles()
        if not cyc:
            return "()"
        return "".join("(" + " ".join(str(k + 1) for k in c) + ")" for c in cyc)


_CYCLE_TOKEN = re.compile(r"\s*\(([^()]*)\)")


def parse_cycles(text: str, degree: int | None = None) -> Permutation:
    """Parse 1-based cycle notation such as ``"(1 2 3)(4 5)"``; ``"()"`` is the identity.

    Without ``degree`` the permutation acts on the largest point mentioned.
    """
    pos = 0
    cycles: list[list[int]] = []
    stripped = text.rstrip()
    if not stripped.strip():
        raise ParseError("empty permutation text", 1, 1)
    while pos < len(stripped):
        m = _CYCLE_TOKEN.match(stripped, pos)
        if m is None:
            raise ParseError(f"expected '(' in permutation {text!r}", 1, pos + 1)
        cycle = []
        for tok in re.finditer(r"[^\s,]+", m.group(1)):
            if not tok.group(0).isdigit():
                raise ParseError(f"non-integer point {tok.group(0)!r} in {text!r}", 1, m.start(1) + tok.start() + 1)
            cycle.append(int(tok.group(0)))
        cycles.append(cycle)
        pos = m.end()
    points = [p for c in cycles for p in c]
    if any(p < 1 for p in points):
        raise InvalidPermutation(f"points are 1-based: {text!r}")
    if len(points) != len(set(points)):
        raise InvalidPermutation(f"point repeated in {text!r}")
    top = max(points, default=0)
    if degree is None:
        degree = top
    elif top > degree:
        raise InvalidPermutation(f"point {top} exceeds degree {degree} in {text!r}")
    images = list(range(degree))
    for c in cycles:
        for a, b in zip(c, c[1:] + c[:1]):
            images[a - 1] = b - 1
    return Permutation(tuple(images))


class Group:
    """A finite permutation group with its full element table.

    Build instances with :func:`generate_group`; the constructor trusts its
    arguments. Tables are filled eagerly, everything else is memoised.
    """

    def __init__(self, degree: int, generators: Sequence[Permutation], elements: Sequence[tuple], name: str = ""):
        self.degree = degree
        self.generators = tuple(generators)
        self.name = name or f"G{len(elements)}"
        table = sorted(elements)
        self.elements: tuple[Permutation, ...] = tuple(Permutation(t) for t in table)
        self.index: dict[tuple, int] = {t: i for i, t in enumerate(table)}
        idx = self.index
        self.mul: list[list[int]] = [[idx[tuple(b[k] for k in a)] for b in table] for a in table]
        self.inv: list[int] = [row.index(0) for row in self.mul]
        self.gen_indices: tuple[int, ...] = tuple(sorted({idx[g.images] for g in self.generators} - {0}))
        self._members: dict[int, list[int]] = {}
        self._conj: dict[int, list[int]] = {}
        self._gens: dict[int, tuple[int, ...]] = {}
        self._join: dict[tuple[int, int], int] = {}
        self._lattice_index: tuple[dict[int, int], list[int], list[int]] | None = None
        self.cache: dict = {}

    def __repr__(self) -> str:
        return f"<Group {self.name} order={self.order} degree={self.degree}>"

    def __len__(self) -> int:
        return len(self.elements)

    @property
    def order(self) -> int:
        return len(self.elements)

    @cached_property
    def full_mask(self) -> int:
        return (1 << self.order) - 1

    @cached_property
    def element_orders(self) -> list[int]:
        out = []
        mul = self.mul
        for i in range(self.order):
            k, x = 1, i
            while x != 0:
                x = mul[x][i]
                k += 1
            out.append(k)
        return out

    @cached_property
    def is_abelian(self) -> bool:
        gens = self.gen_indices
        return all(self.mul[a][b] == self.mul[b][a] for a in gens for b in gens)

    @cached_property
    def is_cyclic(self) -> bool:
        return self.order in self.element_orders

    def whole(self) -> "SubgroupHandle":
        return SubgroupHandle(self, self.full_mask)

    def trivial(self) -> "SubgroupHandle":
        return SubgroupHandle(self, 1)

    def subgroup(self, mask: int) -> "SubgroupHandle":
        return SubgroupHandle(self, mask)

    def members(self, mask: int) -> list[int]:
        got = self._members.get(mask)
        if got is None:
            got = self._members[mask] = bits(mask)
        return got

    def conj(self, g: int) -> list[int]:
        """Table ``x -> g^-1 x g``."""
        got = self._conj.get(g)
        if got is None:
            gi = self.inv[g]
            mul = self.mul
            got = self._conj[g] = [mul[mul[gi][x]][g] for x in range(self.order)]
        return got

    def conjugate_mask(self, mask: int, g: int) -> int:
        table = self.conj(g)
        out = 0
        for x in self.members(mask):
            out |= 1 << table[x]
        return out

    def closure(self, start: int, gens: Iterable[int]) -> int:
        """Subgroup generated by the subgroup ``start`` (a mask) and ``gens``."""
        gens = list(gens)
        if start & ~1:
            gens = list(self.gens_of(start)) + gens
        return self.grow(start, gens)

    def grow(self, start: int, gens: Iterable[int]) -> int:
        """Like ``closure`` but ``gens`` must already generate ``start``."""
        gens = [g for g in gens if g != 0]
        seen = bytearray(self.order)
        queue = self.members(start | 1)
        queue = list(queue)
        for x in queue:
            seen[x] = 1
        mask = start | 1
        mul = self.mul
        limit = 0
        while limit < len(queue):
            row = mul[queue[limit]]
            limit += 1
            for g in gens:
                y = row[g]
                if not seen[y]:
                    seen[y] = 1
                    mask |= 1 << y
                    queue.append(y)
        return mask

    def generated(self, seed: Iterable[int]) -> int:
        return self.closure(1, seed)

    def gens_of(self, mask: int) -> tuple[int, ...]:
        """A small deterministic generating set of the subgroup ``mask``."""
        got = self._gens.get(mask)
        if got is not None:
            return got
        orders = self.element_orders
        cand = sorted(self.members(mask), key=lambda i: (-orders[i], i))
        cur, gens = 1, []
        for x in cand:
            if cur == mask:
                break
            if not (cur >> x) & 1:
                gens.append(x)
                cur = self.grow(cur, gens)
        got = self._gens[mask] = tuple(gens)
        return got

    def register_lattice(self, masks: Sequence[int]) -> None:
        """Record the complete subgroup list so joins become bitset lookups."""
        pos = {m: i for i, m in enumerate(masks)}
        ups = []
        for m in masks:
            up = 0
            for j, other in enumerate(masks):
                if other & m == m:
                    up |= 1 << j
            ups.append(up)
        self._lattice_index = (pos, ups, list(masks))

    def join_mask(self, a: int, b: int) -> int:
        if a & b == b:
            return a
        if a & b == a:
            return b
        key = (a, b) if a < b else (b, a)
        got = self._join.get(key)
        if got is not None:
            return got
        if self._lattice_index is not None:
            pos, ups, masks = self._lattice_index
            both = ups[pos[a]] & ups[pos[b]]
            got = masks[(both & -both).bit_length() - 1]
        else:
            got = self.closure(a, self.gens_of(b))
        self._join[key] = got
        return got

    def normalizes(self, gens: Iterable[int], mask: int) -> bool:
        return all(self.conjugate_mask(mask, g) == mask for g in gens)

    def permutes_masks(self, a: int, b: int) -> bool:
        # AB = BA iff AB is a subgroup iff |A||B| = |A meet B| |<A, B>|
        j = self.join_mask(a, b)
        return a.bit_count() * b.bit_count() == (a & b).bit_count() * j.bit_count()

    def cycle_strings(self, idxs: Iterable[int]) -> list[str]:
        return [str(self.elements[i]) for i in idxs]


@dataclass(frozen=True)
class SubgroupHandle:
    parent: Group
    members: int

    def __post_init__(self):
        if not self.members & 1:
            raise ValueError("subgroup mask must contain the identity")

    def __repr__(self) -> str:
        return f"<Subgroup order={self.order} of {self.parent.name}>"

    def __hash__(self) -> int:
        return hash(self.members)

    @property
    def order(self) -> int:
        return self.members.bit_count()

    @property
    def indices(self) -> list[int]:
        return self.parent.members(self.members)

    def __contains__(self, idx: int) -> bool:
        return bool((self.members >> idx) & 1)

    def __le__(self, other: "SubgroupHandle") -> bool:
        _same_parent(self, other)
        return self.members & other.members == self.members

    def __lt__(self, other: "SubgroupHandle") -> bool:
        return self <= other and self.members != other.members

    def __and__(self, other: "SubgroupHandle") -> "SubgroupHandle":
        _same_parent(self, other)
        return SubgroupHandle(self.parent, self.members & other.members)

    def __or__(self, other: "SubgroupHandle") -> "SubgroupHandle":
        _same_parent(self, other)
        return SubgroupHandle(self.parent, self.parent.join_mask(self.members, other.members))

    @property
    def generators(self) -> tuple[int, ...]:
        return self.parent.gens_of(self.members)

    def describe(self) -> dict:
        return {"order": self.order, "generators": self.parent.cycle_strings(self.generators)}

    def as_group(self, name: str | None = None) -> tuple[Group, list[int]]:
        """The subgroup as a standalone group, plus the map parent index -> own index.

        Parent indices outside the subgroup map to -1.
        """
        G = self.parent
        key = ("as_group", self.members)
        got = G.cache.get(key)
        if got is None:
            elems = [G.elements[i].images for i in self.indices]
            gens = [G.elements[i] for i in self.generators]
            H = Group(G.degree, gens, elems, name or f"{G.name}[{self.order}]")
            embed = [-1] * G.order
            for i in self.indices:
                embed[i] = H.index[G.elements[i].images]
            got = G.cache[key] = (H, embed)
        return got


def _same_parent(a: SubgroupHandle, b: SubgroupHandle) -> None:
    if a.parent is not b.parent:
        raise ParentMismatch("subgroups belong to different parent groups")


def generate_group(degree: int, generators: Sequence[Permutation | str], name: str = "", max_order: int | None = None) -> Group:
    """Close ``generators`` under composition.

    Raises OrderCapExceeded once the closure grows past the configured cap.
    """
    cap = max_order if max_order is not None else caps.current().max_order
    perms = []
    for g in generators:
        p = parse_cycles(g, degree) if isinstance(g, str) else g
        if p.degree != degree:
            raise InvalidPermutation(f"generator {p} has degree {p.degree}, expected {degree}")
        perms.append(p)
    gens = [p.images for p in perms]
    ident = tuple(range(degree))
    seen = {ident}
    queue = [ident]
    pos = 0
    while pos < len(queue):
        x = queue[pos]
        pos += 1
        for g in gens:
            y = tuple(g[k] for k in x)
            if y not in seen:
                seen.add(y)
                queue.append(y)
                if len(seen) > cap:
                    raise OrderCapExceeded(f"group {name or '?'} exceeds order cap {cap}")
    return Group(degree, perms, queue, name)


def subgroup_generated(parent: Group, seed: Iterable[int]) -> SubgroupHandle:
    return SubgroupHandle(parent, parent.generated(seed))


def set_product(A: SubgroupHandle, B: SubgroupHandle) -> int:
    """The element set ``AB`` as a mask (not necessarily a subgroup)."""
    _same_parent(A, B)
    mul = A.parent.mul
    out = 0
    bs = B.indices
    for a in A.indices:
        row = mul[a]
        for b in bs:
            out |= 1 << row[b]
    return out


def permutes(A: SubgroupHandle, B: SubgroupHandle) -> bool:
    _same_parent(A, B)
    return A.parent.permutes_masks(A.members, B.members)


def permutes_literal(A: SubgroupHandle, B: SubgroupHandle) -> bool:
    """``AB == BA`` by explicit set comparison."""
    return set_product(A, B) == set_product(B, A)


def _element_index(G: Group, g: int | Permutation) -> int:
    if isinstance(g, Permutation):
        return G.index[g.images]
    return g


def conjugate_subgroup(H: SubgroupHandle, g: int | Permutation) -> SubgroupHandle:
    G = H.parent
    return SubgroupHandle(G, G.conjugate_mask(H.members, _element_index(G, g)))


def is_normal(parent: Group, H: SubgroupHandle) -> bool:
    if H.parent is not parent:
        raise ParentMismatch("subgroup does not belong to this group")
    return parent.normalizes(parent.gen_indices, H.members)


def normalizes_subgroup(Y: SubgroupHandle, H: SubgroupHandle) -> bool:
    """True when every element of ``Y`` normalises ``H``."""
    _same_parent(Y, H)
    return Y.parent.normalizes(Y.generators, H.members)


def core_mask(G: Group, x: int, gens: Sequence[int]) -> int:
    core = x
    while True:
        nxt = core
        for g in gens:
            nxt &= G.conjugate_mask(core, g)
        if nxt == core:
            return core
        core = nxt


def core_in(H: SubgroupHandle, Y: SubgroupHandle) -> SubgroupHandle:
    """Largest subgroup of ``H`` normal in ``Y``, i.e. the meet of all ``H^y``."""
    if not H <= Y:
        raise NotContained("core_in needs H <= Y")
    G = H.parent
    return SubgroupHandle(G, core_mask(G, H.members, Y.generators))


@dataclass(frozen=True, eq=False)
class QuotientGroup:
    base: Group
    kernel: SubgroupHandle
    quotient: Group
    projection: tuple[int, ...]

    def image(self, H: SubgroupHandle | int) -> SubgroupHandle:
        mask = H.members if isinstance(H, SubgroupHandle) else H
        proj = self.projection
        out = 0
        for i in self.base.members(mask):
            out |= 1 << proj[i]
        return SubgroupHandle(self.quotient, out)

    def preimage(self, Hbar: SubgroupHandle | int) -> SubgroupHandle:
        mask = Hbar.members if isinstance(Hbar, SubgroupHandle) else Hbar
        out = 0
        for i, q in enumerate(self.projection):
            if (mask >> q) & 1:
                out |= 1 << i
        return SubgroupHandle(self.base, out)


def quotient_group(G: Group, R: SubgroupHandle) -> QuotientGroup:
    """``G/R`` acting faithfully by right multiplication on the right cosets ``Rg``."""
    if not is_normal(G, R):
        raise NotNormal("quotient needs a normal subgroup")
    key = ("quotient", R.members)
    got = G.cache.get(key)
    if got is not None:
        return got
    mul = G.mul
    coset = [-1] * G.order
    reps = []
    r_members = R.indices
    for g in range(G.order):
        if coset[g] < 0:
            c = len(reps)
            reps.append(g)
            for r in r_members:
                coset[mul[r][g]] = c
    action = [tuple(coset[mul[rep][g]] for rep in reps) for g in range(G.order)]
    m = len(reps)
    gens = [Permutation(action[g]) for g in G.gen_indices]
    name = G.name if R.order == 1 else f"{G.name}/N{R.order}"
    Q = generate_group(m, gens, name=name, max_order=G.order)
    projection = tuple(Q.index[a] for a in action)
    got = G.cache[key] = QuotientGroup(G, R, Q, projection)
    return got
