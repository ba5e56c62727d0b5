"""Per-(group, partition) analysis reports.

A report holds only JSON-native values (ints, bools, strings, lists, dicts),
so ``from_json(to_json(r))`` reproduces it exactly. Wall-clock time is
returned alongside the report rather than stored in it; that keeps report
files byte-identical across runs.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field, fields

from .errors import CapExceeded, NotClosed
from .lattice import find_diamond, is_distributive, is_modular
from .lemmas import check_lemma_suite
from .perm import Group
from .sigma import PrimePartition, is_sigma0, is_sigma_full, s_permutable_family, sigma_permutable_family
from .theorems import (
    CONSISTENT,
    VIOLATION,
    check_theorem_A,
    check_theorem_B,
    check_theorem_C,
    describe,
    full_lattice,
    kegel_closure,
    lattice_summary,
    normal_lattice,
    sigma_lattice,
)

SCHEMA_VERSION = 1
SKIPPED = "skipped"


@dataclass
class AnalysisReport:
    group: str
    order: int
    partition: str
    mode: str = "full"
    sigma_full: bool = False
    lattice: dict | None = None
    theorem_a: dict | None = None
    theorem_b: dict | None = None
    sigma0_specialization: dict | None = None
    theorem_c: dict | None = None
    lattice_oracles: dict = field(default_factory=dict)
    lemmas: dict = field(default_factory=dict)
    skips: list = field(default_factory=list)
    violations: list = field(default_factory=list)
    verdict: str = CONSISTENT
    schema_version: int = SCHEMA_VERSION

    def to_json(self) -> dict:
        return asdict(self)

    @classmethod
    def from_json(cls, data: dict) -> "AnalysisReport":
        if data.get("schema_version") != SCHEMA_VERSION:
            raise ValueError(f"unsupported schema_version {data.get('schema_version')!r}")
        known = {f.name for f in fields(cls)}
        extra = set(data) - known
        if extra:
            raise ValueError(f"unknown report keys {sorted(extra)}")
        return cls(**data)

    def dumps(self) -> str:
        return dumps(self.to_json())

    @classmethod
    def loads(cls, text: str) -> "AnalysisReport":
        return cls.from_json(json.loads(text))


def dumps(data) -> str:
    return json.dumps(data, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def _oracle(L) -> dict:
    dist = bool(is_distributive(L))
    mod = bool(is_modular(L))
    diamond = find_diamond(L) is not None
    return {"size": len(L), "distributive": dist, "modular": mod, "diamond": diamond, "agrees": dist == (mod and not diamond)}


def _finish(rep: AnalysisReport) -> AnalysisReport:
    if rep.violations:
        rep.verdict = VIOLATION
    elif rep.skips:
        rep.verdict = SKIPPED
    else:
        rep.verdict = CONSISTENT
    return rep


def analyze(G: Group, sigma: PrimePartition, mode: str = "full", lemmas: bool = True) -> AnalysisReport:
    """Run every check for one pair. Caps become skip entries, never exceptions."""
    rep = AnalysisReport(G.name, G.order, sigma.name, mode)
    try:
        rep.sigma_full = is_sigma_full(G, sigma)
    except CapExceeded as exc:
        rep.skips.append(f"subgroup enumeration: {exc}")
        return _finish(rep)

    try:
        full = full_lattice(G)
        ore = _oracle(full)
        ore["cyclic"] = G.is_cyclic
        rep.lattice_oracles = {"subgroups": ore, "normal": _oracle(normal_lattice(G))}
        if ore["cyclic"] != ore["distributive"]:
            rep.violations.append("cyclic iff distributive subgroup lattice fails")
    except CapExceeded as exc:
        rep.skips.append(f"lattice oracles: {exc}")

    if rep.sigma_full:
        b = check_theorem_B(G, sigma)
        rep.theorem_b = b.to_json()
        if not b.holds:
            rep.violations.append("sigma-permutable family is not a sublattice")
        else:
            L = sigma_lattice(G, sigma)
            rep.lattice = lattice_summary(L)
            rep.lattice["members"] = [describe(H) for H in L.family]
            rep.lattice_oracles["sigma_permutable"] = _oracle(L)
            if not rep.lattice["oracle_agrees"]:
                rep.violations.append("distributive iff modular and diamond-free fails")

            a = check_theorem_A(G, sigma, mode)
            rep.theorem_a = a.to_json()
            rep.violations.extend(a.violations)
            if a.verdict == SKIPPED:
                rep.skips.append(f"theorem A: {a.skip_reason}")

        c = check_theorem_C(G, sigma)
        rep.theorem_c = c.to_json()
        if not c.holds:
            rep.violations.append("three-way equivalence for sigma-nilpotent subgroups fails")
        rep.skips.extend(f"theorem C: {r}" for r in c.skip_reasons)
    else:
        rep.theorem_a = check_theorem_A(G, sigma, mode).to_json()

    if is_sigma0(sigma):
        try:
            same = sigma_permutable_family(G, sigma).masks == s_permutable_family(G).masks
            kegel = kegel_closure(G)
            b_closed = rep.theorem_b is not None and rep.theorem_b["holds"]
            rep.sigma0_specialization = {
                "families_equal": same,
                "kegel_closed": kegel.holds,
                "kegel_witness": kegel.witness,
                "agrees": same and kegel.holds == b_closed,
            }
            if not rep.sigma0_specialization["agrees"]:
                rep.violations.append("sigma0 family differs from the S-permutable family")
        except CapExceeded as exc:
            rep.skips.append(f"S-permutability: {exc}")

    if lemmas:
        try:
            suite = check_lemma_suite(G, sigma)
        except NotClosed as exc:
            rep.violations.append(f"lemma suite aborted: {exc}")
            suite = {}
        for name, tally in suite.items():
            rep.lemmas[name] = tally.to_json()
            if tally.violations:
                rep.violations.append(f"{name}: {tally.violations} failing instance(s)")
            if tally.skipped:
                rep.skips.append(f"{name}: {tally.skipped} capped instance(s)")
    return _finish(rep)


def _yn(flag) -> str:
    return "yes" if flag else "no"


def render_markdown(rep: AnalysisReport) -> str:
    lines = [f"# {rep.group} (order {rep.order}) under {rep.partition}", ""]
    lines.append(f"- verdict: **{rep.verdict}**")
    lines.append(f"- sigma-full: {_yn(rep.sigma_full)}")
    if rep.lattice:
        lines.append(
            f"- sigma-permutable lattice: {rep.lattice['size']} members, "
            f"modular {_yn(rep.lattice['modular'])}, distributive {_yn(rep.lattice['distributive'])}"
        )
        orders = ", ".join(str(m["order"]) for m in rep.lattice["members"])
        lines.append(f"- member orders: {orders}")
    a = rep.theorem_a or {}
    if a.get("verdict") not in (None, SKIPPED):
        lines += ["", "## Distributivity criterion", "", "| check | holds |", "|---|---|"]
        for key in ("direct_distributive", "cond_i", "cond_ii", "cond_iii", "cond_iv_full", "cond_iv_covers"):
            if a.get(key) is not None:
                lines.append(f"| {key} | {_yn(a[key]['holds'])} |")
        lines.append("")
        lines.append(f"biconditional: {a['verdict']}; covers-mode sufficiency: {a['sufficiency_covers']}")
        w = (a.get("cond_iv_full") or a.get("cond_iv_covers") or {}).get("witness")
        if w:
            lines.append("")
            lines.append(f"condition (iv) witness: block {w['block']}, R of order {w['R']['order']}, "
                         f"K {w['K']['generators'] or ['()']}, H {w['H']['generators']}, L {w['L']['generators']}")
    elif a.get("skip_reason"):
        lines.append(f"- distributivity criterion skipped: {a['skip_reason']}")
    if rep.theorem_b is not None:
        lines.append("")
        lines.append(f"sublattice closure: {_yn(rep.theorem_b['holds'])}")
    if rep.theorem_c is not None:
        lines.append(f"sigma-nilpotent equivalence: {_yn(rep.theorem_c['holds'])} ({rep.theorem_c['checked']} subgroups)")
    if rep.sigma0_specialization is not None:
        lines.append(f"S-permutable agreement: {_yn(rep.sigma0_specialization['agrees'])}")
    if rep.lemmas:
        lines += ["", "## Lemma instances", "", "| lemma | instances | violations | skipped |", "|---|---|---|---|"]
        for name, t in rep.lemmas.items():
            lines.append(f"| {name} | {t['instances']} | {t['violations']} | {t['skipped']} |")
    for title, items in (("Violations", rep.violations), ("Skips", rep.skips)):
        if items:
            lines += ["", f"## {title}", ""] + [f"- {x}" for x in items]
    return "\n".join(lines) + "\n"
