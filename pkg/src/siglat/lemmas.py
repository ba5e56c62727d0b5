"""Instance-by-instance checks of the supporting lemmas.

Each lemma is instantiated over every admissible tuple of the group's
subgroups. A tally records instance counts, the first few failing tuples and
cap-induced skips.
"""

from __future__ import annotations

import itertools
from dataclasses import asdict, dataclass, field

from .errors import CapExceeded, NotSigmaFull
from .iso import Section, characteristic_subgroups, find_equivariant_isomorphism, iter_isomorphisms
from .lattice import is_distributive, is_modular
from .perm import Group, SubgroupHandle, core_in, quotient_group, set_product
from .sigma import (
    PrimePartition,
    hall_subgroups,
    is_fully_permutable,
    is_sigma_full,
    is_sigma_nilpotent,
    is_sigma_nilpotent_direct,
    is_sigma_number,
    is_sigma_permutable,
    is_sigma_primary,
    is_sigma0,
    s_permutable_family,
    sigma_core,
    sigma_nilpotent_residual,
    sigma_of_group,
    sigma_part,
    sigma_permutable_family,
    sigma_residual,
    sigma_subnormal_masks,
)
from .subgroups import all_normal_subgroups, all_subgroups
from .theorems import hall_subgroups_of, normal_lattice, sigma_lattice

MAX_RECORDED = 5
MAX_ISOMORPHISMS = 500


@dataclass
class Tally:
    instances: int = 0
    violations: int = 0
    skipped: int = 0
    failures: list = field(default_factory=list)

    def check(self, ok: bool, detail) -> None:
        self.instances += 1
        if not ok:
            self.violations += 1
            if len(self.failures) < MAX_RECORDED:
                self.failures.append(detail() if callable(detail) else detail)

    def to_json(self) -> dict:
        return asdict(self)


def _d(*subgroups: SubgroupHandle) -> list[dict]:
    return [S.describe() for S in subgroups]


def _in_subgroup(A: SubgroupHandle, mask: int) -> tuple[Group, int]:
    """``mask`` (inside ``A``) rewritten over ``A``'s own element table."""
    H, embed = A.as_group()
    out = 0
    for i in A.parent.members(mask):
        out |= 1 << embed[i]
    return H, out


def lemma_2_1(G: Group) -> Tally:
    t = Tally()
    fam = all_subgroups(G)
    for H in fam:
        h = H.members
        ok = [A for A in fam if G.permutes_masks(A.members, h)]
        for i, A in enumerate(ok):
            for B in ok[i:]:
                j = G.join_mask(A.members, B.members)
                t.check(G.permutes_masks(j, h), lambda: _d(A, B, H))
    return t


def lemma_2_2_and_prop_3_1(G: Group, sigma: PrimePartition) -> tuple[Tally, Tally]:
    sub, perm = Tally(), Tally()
    sn = sigma_subnormal_masks(G, sigma)
    for A in all_subgroups(G):
        if is_fully_permutable(G, A, sigma):
            sub.check(A.members in sn, lambda: _d(A))
            perm.check(is_sigma_permutable(G, A, sigma), lambda: _d(A))
    return sub, perm


def lemma_2_3(G: Group, sigma: PrimePartition) -> dict[str, Tally]:
    parts = {k: Tally() for k in ("1", "2", "3", "4", "5", "6")}
    fam = all_subgroups(G)
    sn = sigma_subnormal_masks(G, sigma)
    subnormal = [A for A in fam if A.members in sn]
    blocks = sigma_of_group(G, sigma)
    halls = {b: hall_subgroups(G, b) for b in blocks}
    normals = all_normal_subgroups(G)
    nilp = {A.members: is_sigma_nilpotent(A, sigma) for A in subnormal}

    for K in fam:
        Kg, _ = K.as_group()
        k_sn = sigma_subnormal_masks(Kg, sigma)
        for A in subnormal:
            _, m = _in_subgroup(K, A.members & K.members)
            parts["1"].check(m in k_sn, lambda: _d(A, K))

    for A in subnormal:
        index = G.order // A.order
        if index > 1 and is_sigma_primary(index, sigma):
            block = sigma.classify(next(p for p in range(2, index + 1) if index % p == 0))
            Ag, _ = A.as_group()
            top = sigma_residual(G, block).members
            ok = top & A.members == top and sigma_residual(Ag, block).members == _in_subgroup(A, top)[1]
            parts["2"].check(ok, lambda: _d(A) + [str(block)])
        for N in normals:
            Q = quotient_group(G, N)
            parts["3"].check(
                Q.image(A).members in sigma_subnormal_masks(Q.quotient, sigma), lambda: _d(A, N)
            )
        if A.order > 1 and is_sigma_primary(A, sigma):
            block = sigma_of_group(A, sigma)[0]
            core = sigma_core(G, block).members
            parts["4"].check(A.members & core == A.members, lambda: _d(A) + [str(block)])
        a_blocks = sigma_of_group(A, sigma)
        for b in blocks:
            if b not in a_blocks:
                continue
            for H in halls[b]:
                if H.order == 1:
                    continue
                m = A.members & H.members
                ok = m != 1 and m.bit_count() == sigma_part(A.order, b)
                parts["5"].check(ok, lambda: _d(A, H))
    sn_nilp = [A for A in subnormal if nilp[A.members]]
    for i, A in enumerate(sn_nilp):
        for K in sn_nilp[i:]:
            J = SubgroupHandle(G, G.join_mask(A.members, K.members))
            parts["6"].check(is_sigma_nilpotent(J, sigma), lambda: _d(A, K))
    return parts


def lemma_2_4(G: Group, sigma: PrimePartition) -> dict[str, Tally]:
    parts = {k: Tally() for k in ("1", "2", "3")}
    fam = all_subgroups(G)
    whole = G.whole()
    blocks = sigma_of_group(G, sigma)
    residual = {b: sigma_residual(G, b) for b in blocks}
    for A in fam:
        fully = is_fully_permutable(G, A, sigma)
        for b in blocks:
            if not is_sigma_number(A.order, b):
                continue
            normalised = G.normalizes(residual[b].generators, A.members)
            if fully:
                parts["1"].check(normalised, lambda: _d(A) + [str(b)])
            if normalised:
                parts["3"].check(fully, lambda: _d(A) + [str(b)])
        if fully:
            core = core_in(A, whole)
            Ag, c = _in_subgroup(A, core.members)
            Q = quotient_group(Ag, SubgroupHandle(Ag, c))
            parts["2"].check(is_sigma_nilpotent(Q.quotient, sigma), lambda: _d(A))
    return parts


def proposition_2_5(G: Group, sigma: PrimePartition) -> Tally:
    t = Tally()
    sn = sigma_subnormal_masks(G, sigma)
    halls = [H for b in sigma_of_group(G, sigma) for H in hall_subgroups(G, b)]
    for A in all_subgroups(G):
        if A.members not in sn or not is_sigma_nilpotent(A, sigma):
            continue
        try:
            chars = characteristic_subgroups(A)
        except CapExceeded:
            t.skipped += 1
            continue
        for H in halls:
            if not G.permutes_masks(A.members, H.members):
                continue
            for V in chars:
                t.check(G.permutes_masks(V.members, H.members), lambda: _d(A, V, H))
    return t


def lemma_3_2(G: Group, sigma: PrimePartition) -> dict[str, Tally]:
    parts = {"1": Tally(), "2": Tally()}
    fam = all_subgroups(G)
    perm = sigma_permutable_family(G, sigma)
    for R in all_normal_subgroups(G):
        Q = quotient_group(G, R)
        Gb = Q.quotient
        try:
            for V in fam:
                if V.members & R.members != R.members:
                    continue
                if is_sigma_permutable(Gb, Q.image(V), sigma):
                    parts["1"].check(V in perm, lambda: _d(V, R))
            for H in perm:
                parts["2"].check(is_sigma_permutable(Gb, Q.image(H), sigma), lambda: _d(H, R))
        except NotSigmaFull:
            parts["2"].check(False, lambda: {"factor_not_sigma_full": R.describe()})
    return parts


def lemma_3_3(G: Group, sigma: PrimePartition) -> Tally:
    t = Tally()
    L = sigma_lattice(G, sigma)
    if not is_modular(L):
        return t
    fam = L.family
    n = len(fam)
    for u, v, w in itertools.product(range(n), repeat=3):
        U, V, N = fam[u], fam[v], fam[w]
        top = L.join[u][v]
        if not G.normalizes(fam[top].generators, N.members):
            continue
        un = fam[L.join[u][w]].members
        vn = fam[L.join[v][w]].members
        if G.permutes_masks(U.members, V.members & un) and G.permutes_masks(U.members, vn):
            t.check(G.permutes_masks(U.members, V.members), lambda: _d(U, V, N))
    return t


def proposition_3_4(G: Group, sigma: PrimePartition) -> dict[str, Tally]:
    parts = {"i": Tally(), "ii": Tally()}
    perm = sigma_permutable_family(G, sigma)
    for b in sigma_of_group(G, sigma):
        fam = [A for A in perm if is_sigma_number(A.order, b)]
        masks = {A.members for A in fam}
        pairs = list(itertools.combinations_with_replacement(fam, 2))
        for A, B in pairs:
            j = G.join_mask(A.members, B.members)
            parts["i"].check(A.members & B.members in masks and j in masks, lambda: _d(A, B) + [str(b)])
        if all(A.members & B.members in masks and G.join_mask(A.members, B.members) in masks for A, B in pairs):
            from .lattice import build_lattice

            if is_distributive(build_lattice(fam)):
                for A, B in pairs:
                    parts["ii"].check(G.permutes_masks(A.members, B.members), lambda: _d(A, B) + [str(b)])
    return parts


def corollary_3_5(G: Group, sigma: PrimePartition) -> Tally:
    t = Tally()
    L = sigma_lattice(G, sigma)
    if is_distributive(L):
        for A, B in itertools.combinations(L.family, 2):
            t.check(G.permutes_masks(A.members, B.members), lambda: _d(A, B))
    return t


def lemma_3_7(G: Group) -> Tally:
    t = Tally()
    normals = [N for N in all_normal_subgroups(G) if N.order > 1]
    for A, B in itertools.permutations(normals, 2):
        if A.members & B.members != 1 or A.order * B.order != G.order or A.order != B.order:
            continue
        Ag, a_embed = A.as_group()
        Bg, b_embed = B.as_group()
        a_back = {own: i for i, own in enumerate(a_embed) if own >= 0}
        b_back = {own: i for i, own in enumerate(b_embed) if own >= 0}
        for count, f in enumerate(iter_isomorphisms(Ag.mul, Bg.mul)):
            if count >= MAX_ISOMORPHISMS:
                t.skipped += 1
                break
            c = 0
            for own_a, own_b in enumerate(f):
                c |= 1 << G.mul[a_back[own_a]][b_back[own_b]]
            C = SubgroupHandle(G, c)
            ok = (
                G.generated(G.members(c)) == c
                and set_product(A, C) == G.full_mask
                and set_product(B, C) == G.full_mask
                and A.members & c == 1
                and B.members & c == 1
            )
            t.check(ok, lambda: _d(A, B, C))
    return t


def lemma_3_8(G: Group, sigma: PrimePartition) -> dict[str, Tally]:
    parts = {"products": Tally(), "images": Tally(), "subgroups": Tally()}
    normals = all_normal_subgroups(G)
    nilp = [N for N in normals if is_sigma_nilpotent(N, sigma)]
    for i, N in enumerate(nilp):
        for M in nilp[i:]:
            J = SubgroupHandle(G, G.join_mask(N.members, M.members))
            parts["products"].check(is_sigma_nilpotent(J, sigma), lambda: _d(N, M))
    if is_sigma_nilpotent(G, sigma):
        for N in normals:
            parts["images"].check(is_sigma_nilpotent(quotient_group(G, N).quotient, sigma), lambda: _d(N))
        for A in all_subgroups(G):
            parts["subgroups"].check(is_sigma_nilpotent(A, sigma), lambda: _d(A))
    return parts


def lemma_3_9(G: Group, sigma: PrimePartition) -> Tally:
    t = Tally()
    D = sigma_nilpotent_residual(G, sigma)
    for N in all_normal_subgroups(G):
        Q = quotient_group(G, N)
        lhs = sigma_nilpotent_residual(Q.quotient, sigma)
        t.check(lhs.members == Q.image(D).members, lambda: _d(N))
    return t


def normal_lattice_criterion(G: Group) -> Tally:
    """Distributive normal lattice iff no factor group has two distinct isomorphic-as-operator normal subgroups."""
    t = Tally()
    distributive = bool(is_distributive(normal_lattice(G)))
    no_twins = True
    for R in all_normal_subgroups(G):
        Gb = quotient_group(G, R).quotient
        ns = all_normal_subgroups(Gb)
        one = Gb.trivial()
        for M, N in itertools.combinations(ns, 2):
            if M.order != N.order or M.order == 1:
                continue
            if find_equivariant_isomorphism(Section(M, one), Section(N, one), Gb.gen_indices) is not None:
                no_twins = False
                break
        if not no_twins:
            break
    t.check(distributive == no_twins, lambda: {"distributive": distributive, "no_twins": no_twins})
    return t


def remark_1_2(G: Group, sigma: PrimePartition) -> dict[str, Tally]:
    parts = {"ii": Tally(), "iii": Tally(), "nilpotent_direct": Tally()}
    nilp = is_sigma_nilpotent(G, sigma)
    parts["nilpotent_direct"].check(nilp == is_sigma_nilpotent_direct(G, sigma), lambda: {"group": G.name})
    if is_sigma_full(G, sigma):
        everything = len(sigma_permutable_family(G, sigma)) == len(all_subgroups(G))
        parts["ii"].check(nilp == everything, lambda: {"nilpotent": nilp, "all_permutable": everything})
        if is_sigma0(sigma):
            same = sigma_permutable_family(G, sigma).masks == s_permutable_family(G).masks
            parts["iii"].check(same, lambda: {"group": G.name})
    return parts


def _guard(name: str, out: dict, fn, *args) -> None:
    try:
        res = fn(*args)
    except CapExceeded as exc:
        t = Tally(skipped=1)
        t.failures.append({"skip": str(exc)})
        out[name] = t
        return
    if isinstance(res, Tally):
        out[name] = res
    else:
        for k, v in res.items():
            out[f"{name}({k})"] = v


def check_lemma_suite(G: Group, sigma: PrimePartition) -> dict[str, Tally]:
    """Every lemma instance for ``(G, sigma)``; sigma-full-only lemmas are left out otherwise."""
    out: dict[str, Tally] = {}
    full = is_sigma_full(G, sigma)
    _guard("lemma_2_1", out, lemma_2_1, G)
    _guard("lemma_2_3", out, lemma_2_3, G, sigma)
    if full:
        sub, perm = lemma_2_2_and_prop_3_1(G, sigma)
        out["lemma_2_2"] = sub
        out["proposition_3_1"] = perm
        _guard("lemma_2_4", out, lemma_2_4, G, sigma)
        _guard("proposition_2_5", out, proposition_2_5, G, sigma)
        _guard("lemma_3_2", out, lemma_3_2, G, sigma)
        _guard("lemma_3_3", out, lemma_3_3, G, sigma)
        _guard("proposition_3_4", out, proposition_3_4, G, sigma)
        _guard("corollary_3_5", out, corollary_3_5, G, sigma)
    _guard("lemma_3_7", out, lemma_3_7, G)
    _guard("lemma_3_8", out, lemma_3_8, G, sigma)
    _guard("lemma_3_9", out, lemma_3_9, G, sigma)
    _guard("normal_lattice_criterion", out, normal_lattice_criterion, G)
    _guard("remark_1_2", out, remark_1_2, G, sigma)
    return dict(sorted(out.items()))
