"""Executable verdicts for the distributivity characterisation and its companions.

Every check returns plain JSON-ready data. Subgroups in witnesses are
described by order and generators; subgroups of a factor group ``G/R`` are
described by their full preimage in ``G``.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from typing import Iterable, Sequence

from .errors import CapExceeded, NotClosed
from .iso import Section, characteristic_subgroups, find_equivariant_isomorphism
from .lattice import SigmaLattice, build_lattice, find_diamond, is_distributive, is_modular, meet_distributive_witness
from .perm import Group, QuotientGroup, SubgroupHandle, quotient_group
from .sigma import (
    PrimePartition,
    hall_subgroups,
    is_sigma_full,
    is_sigma_nilpotent,
    is_sigma_number,
    is_sigma_permutable,
    s_permutable_family,
    sigma_nilpotent_residual,
    sigma_of_group,
    sigma_part,
    sigma_permutable_family,
    sigma_residual,
)
from .subgroups import all_normal_subgroups, all_subgroups

CONSISTENT = "consistent"
VIOLATION = "VIOLATION"


@dataclass
class Verdict:
    holds: bool
    witness: dict | None = None

    def __bool__(self) -> bool:
        return self.holds

    def to_json(self) -> dict:
        return {"holds": self.holds, "witness": self.witness}


def describe(H: SubgroupHandle, quotient: QuotientGroup | None = None) -> dict:
    if quotient is not None and H.parent is quotient.quotient:
        H = quotient.preimage(H)
    return H.describe()


def describe_triple(L: SigmaLattice, triple: Sequence[int] | None) -> list[dict] | None:
    if triple is None:
        return None
    return [L.family[i].describe() for i in triple]


def sigma_lattice(G: Group, sigma: PrimePartition) -> SigmaLattice:
    key = ("sigma_lattice", sigma)
    got = G.cache.get(key)
    if got is None:
        got = G.cache[key] = build_lattice(sigma_permutable_family(G, sigma))
    return got


def normal_lattice(G: Group) -> SigmaLattice:
    got = G.cache.get("normal_lattice")
    if got is None:
        got = G.cache["normal_lattice"] = build_lattice(all_normal_subgroups(G))
    return got


def full_lattice(G: Group) -> SigmaLattice:
    got = G.cache.get("full_lattice")
    if got is None:
        got = G.cache["full_lattice"] = build_lattice(all_subgroups(G))
    return got


def check_conditions_i_to_iii(G: Group, sigma: PrimePartition, L: SigmaLattice | None = None) -> tuple[Verdict, Verdict, Verdict]:
    L = L if L is not None else sigma_lattice(G, sigma)
    fam = L.family
    cond_i = Verdict(True)
    for i, A in enumerate(fam):
        for B in fam[i + 1:]:
            if not G.permutes_masks(A.members, B.members):
                cond_i = Verdict(False, {"pair": [A.describe(), B.describe()]})
                break
        if not cond_i:
            break

    Ln = normal_lattice(G)
    dist = is_distributive(Ln)
    cond_ii = Verdict(dist.holds, None if dist else {"triple": describe_triple(Ln, dist.witness)})

    D = sigma_nilpotent_residual(G, sigma)
    cyclic = quotient_group(G, D).quotient.is_cyclic
    bad = meet_distributive_witness(L, D)
    cond_iii = Verdict(cyclic and bad is None)
    if not cond_iii:
        cond_iii.witness = {
            "residual": D.describe(),
            "quotient_cyclic": cyclic,
            "meet_distributive_failure": None if bad is None else [fam[b].describe() for b in bad],
        }
    return cond_i, cond_ii, cond_iii


def _iv_candidates(Gb: Group, sigma: PrimePartition, block, covers: set[tuple[int, int]] | None, positions):
    """(H, L, Ks) in witness order: pairs ascending, K from largest to smallest."""
    fam = [A for A in sigma_permutable_family(Gb, sigma) if is_sigma_number(A.order, block)]
    for h, H in enumerate(fam):
        for L in fam[h + 1:]:
            if H.order != L.order:
                continue
            meet = H.members & L.members
            ks = []
            for K in reversed(fam):
                k = K.members
                if k & meet != k or k == H.members:
                    continue
                if covers is not None:
                    pk = positions[k]
                    if (pk, positions[H.members]) not in covers or (pk, positions[L.members]) not in covers:
                        continue
                if Gb.normalizes(H.generators, k) and Gb.normalizes(L.generators, k):
                    ks.append(K)
            if ks:
                yield H, L, ks


def check_condition_iv(G: Group, sigma: PrimePartition, mode: str = "full") -> Verdict:
    """Scan every factor group for a pair of distinct operator-isomorphic sections.

    ``mode="covers"`` restricts to sections whose tops cover the common
    bottom in the sigma-permutable lattice of the factor group.
    """
    if mode not in ("full", "covers"):
        raise ValueError(f"unknown mode {mode!r}")
    for R in all_normal_subgroups(G):
        Q = quotient_group(G, R)
        Gb = Q.quotient
        covers = positions = None
        if mode == "covers":
            Lb = sigma_lattice(Gb, sigma)
            covers = set(Lb.covers())
            positions = {A.members: i for i, A in enumerate(Lb.family)}
        for block in sigma_of_group(Gb, sigma):
            actors = sigma_residual(Gb, block).generators
            for H, L, ks in _iv_candidates(Gb, sigma, block, covers, positions):
                for K in ks:
                    f = find_equivariant_isomorphism(Section(H, K), Section(L, K), actors)
                    if f is not None:
                        return Verdict(
                            False,
                            {
                                "R": R.describe(),
                                "block": str(block),
                                "K": describe(K, Q),
                                "H": describe(H, Q),
                                "L": describe(L, Q),
                            },
                        )
    return Verdict(True)


@dataclass
class TheoremAReport:
    group: str
    partition: str
    sigma_full: bool
    mode: str = "full"
    lattice_size: int = 0
    direct_distributive: Verdict | None = None
    cond_i: Verdict | None = None
    cond_ii: Verdict | None = None
    cond_iii: Verdict | None = None
    cond_iv_full: Verdict | None = None
    cond_iv_covers: Verdict | None = None
    verdict: str = "skipped"
    sufficiency_covers: str = "skipped"
    skip_reason: str | None = None

    @property
    def violations(self) -> list[str]:
        out = []
        if self.verdict == VIOLATION:
            out.append(f"theorem A biconditional fails for {self.group} / {self.partition}")
        if self.sufficiency_covers == VIOLATION:
            out.append(f"covers-mode sufficiency fails for {self.group} / {self.partition}")
        return out

    def to_json(self) -> dict:
        out = {}
        for k, v in asdict(self).items():
            out[k] = v
        for k in ("direct_distributive", "cond_i", "cond_ii", "cond_iii", "cond_iv_full", "cond_iv_covers"):
            val = getattr(self, k)
            out[k] = None if val is None else val.to_json()
        return out


def check_theorem_A(G: Group, sigma: PrimePartition, mode: str = "full") -> TheoremAReport:
    rep = TheoremAReport(G.name, sigma.name, is_sigma_full(G, sigma), mode)
    if not rep.sigma_full:
        rep.skip_reason = "not sigma-full"
        return rep
    try:
        L = sigma_lattice(G, sigma)
        rep.lattice_size = len(L)
        dist = is_distributive(L)
        rep.direct_distributive = Verdict(dist.holds, None if dist else {"triple": describe_triple(L, dist.witness)})
        rep.cond_i, rep.cond_ii, rep.cond_iii = check_conditions_i_to_iii(G, sigma, L)
        first_three = bool(rep.cond_i) and bool(rep.cond_ii) and bool(rep.cond_iii)
        rep.cond_iv_covers = check_condition_iv(G, sigma, "covers")
        if mode == "full":
            rep.cond_iv_full = check_condition_iv(G, sigma, "full")
            predicted = first_three and bool(rep.cond_iv_full)
        else:
            predicted = first_three and bool(rep.cond_iv_covers)
    except CapExceeded as exc:
        rep.skip_reason = str(exc)
        rep.verdict = rep.sufficiency_covers = "skipped"
        return rep
    rep.verdict = CONSISTENT if predicted == dist.holds else VIOLATION
    sufficient = first_three and bool(rep.cond_iv_covers)
    rep.sufficiency_covers = VIOLATION if sufficient and not dist.holds else CONSISTENT
    return rep


def check_theorem_B(G: Group, sigma: PrimePartition) -> Verdict:
    """The sigma-permutable family is closed under intersection and join."""
    try:
        sigma_lattice(G, sigma)
    except NotClosed as exc:
        return Verdict(
            False,
            {"operation": exc.operation, "a": exc.a.describe(), "b": exc.b.describe(), "result": exc.result.describe()},
        )
    return Verdict(True)


def kegel_closure(G: Group) -> Verdict:
    """S-permutable subgroups are closed under meet and join (checked by closure, not tables)."""
    fam = s_permutable_family(G)
    masks = set(fam.masks)
    items = list(fam)
    for i, A in enumerate(items):
        for B in items[i:]:
            m = A.members & B.members
            j = G.closure(A.members, B.generators)
            for op, res in (("meet", m), ("join", j)):
                if res not in masks:
                    return Verdict(
                        False,
                        {"operation": op, "a": A.describe(), "b": B.describe(), "result": SubgroupHandle(G, res).describe()},
                    )
    return Verdict(True)


def hall_subgroups_of(A: SubgroupHandle, sigma: PrimePartition) -> list[SubgroupHandle]:
    """Hall subgroups of ``A`` for every block meeting its order."""
    G = A.parent
    out = []
    for block in sigma_of_group(A, sigma):
        want = sigma_part(A.order, block)
        out.extend(S for S in all_subgroups(G) if S.order == want and S.members & A.members == S.members)
    return out


def theorem_c_statements(G: Group, A: SubgroupHandle, sigma: PrimePartition) -> tuple[bool, bool, bool]:
    perm = is_sigma_permutable(G, A, sigma)
    halls = all(is_sigma_permutable(G, H, sigma) for H in hall_subgroups_of(A, sigma))
    chars = all(is_sigma_permutable(G, V, sigma) for V in characteristic_subgroups(A))
    return perm, halls, chars


@dataclass
class TheoremCReport:
    holds: bool = True
    checked: int = 0
    skipped: int = 0
    witness: dict | None = None
    skip_reasons: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return asdict(self)


def check_theorem_C(G: Group, sigma: PrimePartition) -> TheoremCReport:
    """The three statements agree for every sigma-nilpotent subgroup."""
    rep = TheoremCReport()
    if not is_sigma_full(G, sigma):
        return rep
    for A in all_subgroups(G):
        if not is_sigma_nilpotent(A, sigma):
            continue
        try:
            s = theorem_c_statements(G, A, sigma)
        except CapExceeded as exc:
            rep.skipped += 1
            rep.skip_reasons.append(str(exc))
            continue
        rep.checked += 1
        if len(set(s)) != 1 and rep.holds:
            rep.holds = False
            rep.witness = {
                "A": A.describe(),
                "sigma_permutable": s[0],
                "halls_sigma_permutable": s[1],
                "characteristic_sigma_permutable": s[2],
            }
    return rep


def lattice_summary(L: SigmaLattice) -> dict:
    mod = is_modular(L)
    dist = is_distributive(L)
    diamond = find_diamond(L)
    return {
        "size": len(L),
        "modular": mod.holds,
        "modular_witness": describe_triple(L, mod.witness),
        "distributive": dist.holds,
        "distributive_witness": describe_triple(L, dist.witness),
        "diamond": describe_triple(L, diamond),
        "oracle_agrees": dist.holds == (mod.holds and diamond is None),
    }


def hunt_modularity(groups: Iterable[Group], partitions: Sequence[PrimePartition]) -> list[dict]:
    """Modularity of the sigma-permutable lattice for every sigma-full pair."""
    findings = []
    for G in groups:
        for sigma in partitions:
            if not is_sigma_full(G, sigma):
                continue
            L = sigma_lattice(G, sigma)
            mod = is_modular(L)
            findings.append(
                {
                    "group": G.name,
                    "order": G.order,
                    "partition": sigma.name,
                    "lattice_size": len(L),
                    "modular": mod.holds,
                    "witness": describe_triple(L, mod.witness),
                }
            )
    return findings
