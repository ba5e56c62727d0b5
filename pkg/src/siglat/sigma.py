"""Prime partitions and the sigma-local group theory built on them.

A partition is a list of explicit disjoint prime blocks plus a rule for every
other prime: each is its own block (``singletons``) or all of them form one
complementary block (``one_block``).
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import NotSigmaFull, OracleDisagreement, ParseError
from .perm import Group, SubgroupHandle, core_mask, is_normal, permutes_literal, quotient_group
from .subgroups import SubgroupFamily, all_normal_subgroups, all_subgroups


def prime_factors(n: int) -> list[int]:
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


def is_prime(n: int) -> bool:
    return n >= 2 and prime_factors(n) == [n]


@dataclass(frozen=True, order=True)
class Block:
    """A set of primes; with ``complement`` set it is every prime *not* listed."""

    primes: frozenset = frozenset()
    complement: bool = False

    def __contains__(self, p: int) -> bool:
        return (p in self.primes) != self.complement

    def __str__(self) -> str:
        body = "{" + ",".join(str(p) for p in sorted(self.primes)) + "}"
        return "P\\" + body if self.complement else body


@dataclass(frozen=True)
class PrimePartition:
    blocks: tuple[frozenset, ...] = ()
    leftover_rule: str = "singletons"
    name: str = field(default="", compare=False)

    def __post_init__(self):
        if self.leftover_rule not in ("singletons", "one_block"):
            raise ValueError(f"unknown leftover rule {self.leftover_rule!r}")
        seen: set[int] = set()
        for b in self.blocks:
            if not b:
                raise ValueError("empty block")
            for p in b:
                if not is_prime(p):
                    raise ValueError(f"{p} is not prime")
            if seen & b:
                raise ValueError(f"blocks overlap on {sorted(seen & b)}")
            seen |= b
        if not self.name:
            object.__setattr__(self, "name", format_partition(self))

    @property
    def listed(self) -> frozenset:
        return frozenset().union(*self.blocks)

    def classify(self, p: int) -> Block:
        for b in self.blocks:
            if p in b:
                return Block(b)
        if self.leftover_rule == "singletons":
            return Block(frozenset({p}))
        return Block(self.listed, complement=True)


def format_partition(sigma: PrimePartition) -> str:
    if not sigma.blocks and sigma.leftover_rule == "singletons":
        return "sigma0"
    if len(sigma.blocks) == 1 and sigma.leftover_rule == "one_block":
        return "pi:" + ",".join(str(p) for p in sorted(sigma.blocks[0]))
    body = "".join("[" + ",".join(str(p) for p in sorted(b)) + "]" for b in sigma.blocks)
    return f"blocks:{body};rest={sigma.leftover_rule}"


SIGMA0 = PrimePartition(name="sigma0")


def is_sigma0(sigma: PrimePartition) -> bool:
    """Every prime is its own block."""
    return sigma.leftover_rule == "singletons" and all(len(b) == 1 for b in sigma.blocks)

_BLOCK = re.compile(r"\[([^\[\]]*)\]")


def _primes(text: str, offset: int) -> frozenset:
    out = set()
    for m in re.finditer(r"[^,\s]+", text):
        tok = m.group(0)
        if not tok.isdigit() or not is_prime(int(tok)):
            raise ParseError(f"expected a prime, got {tok!r}", 1, offset + m.start() + 1)
        out.add(int(tok))
    if not out:
        raise ParseError("empty prime list", 1, offset + 1)
    return frozenset(out)


def parse_partition(text: str) -> PrimePartition:
    """Parse ``sigma0``, ``pi:2,3`` or ``blocks:[2,5][3];rest=singletons``."""
    raw = text.strip()
    if raw == "sigma0":
        return PrimePartition(name="sigma0")
    try:
        if raw.startswith("pi:"):
            return PrimePartition((_primes(raw[3:], 3),), "one_block", raw)
        if raw.startswith("blocks:"):
            body, _, rest = raw[7:].partition(";")
            rule = "singletons"
            if rest:
                if not rest.startswith("rest="):
                    raise ParseError("expected 'rest=' after ';'", 1, 8 + len(body) + 1)
                rule = rest[5:]
                if rule not in ("singletons", "one_block"):
                    raise ParseError(f"unknown leftover rule {rule!r}", 1, 8 + len(body) + 6)
            pos = 0
            blocks = []
            while pos < len(body):
                m = _BLOCK.match(body, pos)
                if m is None:
                    raise ParseError("expected '[' starting a block", 1, 7 + pos + 1)
                blocks.append(_primes(m.group(1), 7 + m.start(1)))
                pos = m.end()
            if not blocks:
                raise ParseError("no blocks given", 1, 8)
            return PrimePartition(tuple(blocks), rule, raw)
    except ValueError as exc:
        if isinstance(exc, ParseError):
            raise
        raise ParseError(str(exc), 1, 1) from None
    raise ParseError(f"unknown partition syntax {text!r}", 1, 1)


def is_sigma_number(n: int, block) -> bool:
    return all(p in block for p in prime_factors(n))


def _order(X) -> int:
    if isinstance(X, int):
        return X
    return X.order


def sigma_of_group(G: Group | SubgroupHandle | int, sigma: PrimePartition) -> list[Block]:
    """Blocks meeting the prime divisors of the order, by least such prime."""
    out: list[Block] = []
    for p in prime_factors(_order(G)):
        b = sigma.classify(p)
        if b not in out:
            out.append(b)
    return out


def sigma_part(n: int, block) -> int:
    out = 1
    for p in prime_factors(n):
        if p in block:
            while n % p == 0:
                n //= p
                out *= p
    return out


def is_sigma_primary(H: Group | SubgroupHandle | int, sigma: PrimePartition) -> bool:
    return len(sigma_of_group(H, sigma)) <= 1


def _family(G: Group, subgroups: SubgroupFamily | None) -> SubgroupFamily:
    return subgroups if subgroups is not None else all_subgroups(G)


def hall_subgroups(G: Group, block, subgroups: SubgroupFamily | None = None) -> list[SubgroupHandle]:
    n = G.order
    return [
        H
        for H in _family(G, subgroups)
        if is_sigma_number(H.order, block) and not any(p in block for p in prime_factors(n // H.order))
    ]


@dataclass(frozen=True)
class HallSet:
    members: tuple[SubgroupHandle, ...]
    blocks: tuple[Block, ...]


def _hall_by_block(G: Group, sigma: PrimePartition, subgroups=None) -> list[tuple[Block, list[SubgroupHandle]]]:
    key = ("hall", sigma)
    got = G.cache.get(key)
    if got is None:
        got = G.cache[key] = [(b, hall_subgroups(G, b, subgroups)) for b in sigma_of_group(G, sigma)]
    return got


def complete_hall_sets(G: Group, sigma: PrimePartition, subgroups=None) -> list[HallSet]:
    per = _hall_by_block(G, sigma, subgroups)
    blocks = tuple(b for b, _ in per)
    return [HallSet(tuple(choice), blocks) for choice in itertools.product(*(hs for _, hs in per))]


def is_sigma_full(G: Group, sigma: PrimePartition, subgroups=None) -> bool:
    return all(hs for _, hs in _hall_by_block(G, sigma, subgroups))


def _require_full(G: Group, sigma: PrimePartition) -> None:
    if not is_sigma_full(G, sigma):
        raise NotSigmaFull(f"{G.name} has no complete Hall set for {sigma.name}")


def is_sigma_permutable(G: Group, A: SubgroupHandle, sigma: PrimePartition, subgroups=None) -> bool:
    """``G`` is sigma-full and ``A`` permutes with every Hall subgroup of every block."""
    _require_full(G, sigma)
    a = A.members
    return all(G.permutes_masks(a, H.members) for _, hs in _hall_by_block(G, sigma) for H in hs)


def sigma_permutable_family(G: Group, sigma: PrimePartition) -> SubgroupFamily:
    key = ("sigma_perm", sigma)
    got = G.cache.get(key)
    if got is None:
        _require_full(G, sigma)
        got = G.cache[key] = all_subgroups(G).filter(lambda A: is_sigma_permutable(G, A, sigma))
    return got


def sigma_i_permutable_family(G: Group, sigma: PrimePartition, block) -> SubgroupFamily:
    """The sigma-permutable subgroups whose order is a number of ``block``."""
    return sigma_permutable_family(G, sigma).filter(lambda A: is_sigma_number(A.order, block))


def _step(G: Group, x: int, y: int, ygens: Sequence[int], sigma: PrimePartition) -> bool:
    core = core_mask(G, x, ygens)
    return core == x or is_sigma_primary(y.bit_count() // core.bit_count(), sigma)


def sigma_subnormal_masks(G: Group, sigma: PrimePartition) -> frozenset[int]:
    """Masks of all sigma-subnormal subgroups, by backward reachability from ``G``."""
    key = ("sigma_subnormal", sigma)
    got = G.cache.get(key)
    if got is not None:
        return got
    family = all_subgroups(G).masks
    found = {G.full_mask}
    work = [G.full_mask]
    while work:
        y = work.pop()
        ygens = G.gens_of(y)
        for x in family:
            if x in found or x == y or x & y != x:
                continue
            if _step(G, x, y, ygens, sigma):
                found.add(x)
                work.append(x)
    got = G.cache[key] = frozenset(found)
    return got


def is_sigma_subnormal(G: Group, A: SubgroupHandle, sigma: PrimePartition, subgroups=None) -> bool:
    return A.members in sigma_subnormal_masks(G, sigma)


def _group_of(X: Group | SubgroupHandle) -> Group:
    return X.as_group()[0] if isinstance(X, SubgroupHandle) else X


def sigma_core(G: Group, block) -> SubgroupHandle:
    """Largest normal subgroup whose order is a number of ``block``."""
    out = 1
    for N in all_normal_subgroups(G):
        if is_sigma_number(N.order, block):
            out = G.join_mask(out, N.members)
    if not is_sigma_number(out.bit_count(), block):
        raise OracleDisagreement(f"join of normal {block}-subgroups of {G.name} is not a {block}-group")
    return SubgroupHandle(G, out)


def sigma_residual(G: Group, block) -> SubgroupHandle:
    """Smallest normal subgroup with quotient a ``block``-group.

    Generated by the elements whose order has no prime in ``block``, and
    checked against the meet of all normal subgroups with such a quotient.
    """
    key = ("residual", block)
    got = G.cache.get(key)
    if got is not None:
        return got
    orders = G.element_orders
    seeds = [x for x in range(G.order) if not any(p in block for p in prime_factors(orders[x]))]
    by_generation = G.generated(seeds)
    if by_generation != sigma_residual_by_normals(G, block).members:
        raise OracleDisagreement(f"two residual computations differ in {G.name} for {block}")
    got = G.cache[key] = SubgroupHandle(G, by_generation)
    return got


def sigma_residual_by_normals(G: Group, block) -> SubgroupHandle:
    out = G.full_mask
    for N in all_normal_subgroups(G):
        if is_sigma_number(G.order // N.order, block):
            out &= N.members
    return SubgroupHandle(G, out)


def is_sigma_nilpotent(X: Group | SubgroupHandle, sigma: PrimePartition) -> bool:
    """Each block's core ``O_block`` is a Hall subgroup."""
    G = _group_of(X)
    key = ("sigma_nilpotent", sigma)
    got = G.cache.get(key)
    if got is None:
        got = G.cache[key] = all(
            sigma_core(G, b).order == sigma_part(G.order, b) for b in sigma_of_group(G, sigma)
        )
    return got


def is_sigma_nilpotent_direct(X: Group | SubgroupHandle, sigma: PrimePartition) -> bool:
    """Literal reading: ``G`` is the internal direct product of a complete Hall set."""
    G = _group_of(X)
    mul = G.mul
    for hs in complete_hall_sets(G, sigma):
        members = hs.members
        if not all(is_normal(G, H) for H in members):
            continue
        if any(
            mul[a][b] != mul[b][a]
            for H, K in itertools.combinations(members, 2)
            for a in H.generators
            for b in K.generators
        ):
            continue
        prod = 1
        span = 1
        for H in members:
            prod *= H.order
            span = G.join_mask(span, H.members)
        if prod == G.order and span == G.full_mask:
            return True
    return False


def sigma_nilpotent_residual(G: Group, sigma: PrimePartition) -> SubgroupHandle:
    """Meet of all normal ``N`` with ``G/N`` sigma-nilpotent."""
    key = ("nilpotent_residual", sigma)
    got = G.cache.get(key)
    if got is not None:
        return got
    out = G.full_mask
    for N in all_normal_subgroups(G):
        if is_sigma_nilpotent(quotient_group(G, N).quotient, sigma):
            out &= N.members
    D = SubgroupHandle(G, out)
    if not is_sigma_nilpotent(quotient_group(G, D).quotient, sigma):
        raise OracleDisagreement(f"{G.name}/residual is not sigma-nilpotent")
    G.cache[key] = D
    return D


def conjugacy_class(H: SubgroupHandle) -> list[int]:
    """Masks of all conjugates of ``H``, sorted."""
    G = H.parent
    seen = {H.members}
    work = [H.members]
    while work:
        x = work.pop()
        for g in G.gen_indices:
            y = G.conjugate_mask(x, g)
            if y not in seen:
                seen.add(y)
                work.append(y)
    return sorted(seen)


def is_fully_permutable(G: Group, A: SubgroupHandle, sigma: PrimePartition) -> bool:
    """Some complete Hall set has every conjugate of every member permuting with ``A``.

    Choices are independent per block, so it is enough that each block has a
    Hall subgroup all of whose conjugates permute with ``A``.
    """
    _require_full(G, sigma)
    a = A.members
    for _, hs in _hall_by_block(G, sigma):
        if not any(all(G.permutes_masks(a, c) for c in conjugacy_class(H)) for H in hs):
            return False
    return True


def sylow_subgroups(G: Group, p: int) -> list[SubgroupHandle]:
    n = G.order
    pp = 1
    while n % p == 0:
        n //= p
        pp *= p
    return [H for H in all_subgroups(G) if H.order == pp]


def is_s_permutable(G: Group, A: SubgroupHandle) -> bool:
    """Permutes with every Sylow subgroup, by explicit product sets."""
    return all(permutes_literal(A, P) for p in prime_factors(G.order) for P in sylow_subgroups(G, p))


def s_permutable_family(G: Group) -> SubgroupFamily:
    return all_subgroups(G).filter(lambda A: is_s_permutable(G, A))
