"""Acceptance run: the full corpus sweep through the command line.

Each test prints one ``criterion N: PASS|FAIL`` line; the lines are repeated
in the pytest terminal summary.
"""

import json
import subprocess
import sys
import time

import pytest

from _acceptance_lines import record
from _groups import group, sub
from siglat.corpus import builtin_corpus
from siglat.sigma import SIGMA0, is_sigma_full, parse_partition, sigma_permutable_family
from siglat.subgroups import all_normal_subgroups, all_subgroups
from siglat.theorems import check_condition_iv, check_theorem_A, sigma_lattice

PARTITIONS = "sigma0,pi:2,pi:2,3,blocks:[2,5][3];rest=singletons"
PARTITION_NAMES = ["sigma0", "pi:2", "pi:2,3", "blocks:[2,5][3];rest=singletons"]
TIME_LIMIT = 600


def _corpus_run(out, jobs):
    start = time.perf_counter()
    proc = subprocess.run(
        [sys.executable, "-m", "siglat.cli", "corpus", "--partitions", PARTITIONS, "--jobs", str(jobs), "--out", str(out)],
        capture_output=True,
        text=True,
    )
    return proc, time.perf_counter() - start


@pytest.fixture(scope="module")
def sweep(tmp_path_factory):
    first_dir = tmp_path_factory.mktemp("jobs1")
    second_dir = tmp_path_factory.mktemp("jobs2")
    first, seconds = _corpus_run(first_dir, 1)
    second, _ = _corpus_run(second_dir, 2)
    reports = [json.loads(p.read_text()) for p in sorted((first_dir / "reports").glob("*.json"))]
    return {
        "first": first,
        "second": second,
        "seconds": seconds,
        "dirs": (first_dir, second_dir),
        "reports": reports,
        "full": [r for r in reports if r["sigma_full"]],
    }


def test_criterion_1_theorem_a_biconditional(sweep):
    specs = builtin_corpus()
    orders = [s.order for s in specs]
    reports = sweep["reports"]
    verdicts = [r["theorem_a"]["verdict"] for r in sweep["full"]]
    violations = sum(len(r["violations"]) for r in reports)
    skips = sum(len(r["skips"]) for r in reports)
    ok = (
        sweep["first"].returncode == 0
        and len(specs) >= 25
        and min(orders) == 1
        and max(orders) == 120
        and len(reports) == len(specs) * len(PARTITION_NAMES)
        and all(v == "consistent" for v in verdicts)
        and violations == 0
        and skips == 0
        and sweep["seconds"] < TIME_LIMIT
    )
    record(
        1,
        ok,
        f"{len(specs)} groups x {len(PARTITION_NAMES)} partitions, {len(verdicts)} sigma-full pairs consistent "
        f"{verdicts.count('consistent')}/{len(verdicts)}, {violations} violations, {skips} skips, {sweep['seconds']:.1f}s",
    )
    assert ok, sweep["first"].stdout[-2000:] + sweep["first"].stderr[-2000:]


def test_criterion_2_covers_mode_sufficiency(sweep):
    full = sweep["full"]
    bad = [(r["group"], r["partition"]) for r in full if r["theorem_a"]["sufficiency_covers"] != "consistent"]
    premise = [
        r for r in full
        if all(r["theorem_a"][k]["holds"] for k in ("cond_i", "cond_ii", "cond_iii", "cond_iv_covers"))
    ]
    implied = all(r["theorem_a"]["direct_distributive"]["holds"] for r in premise)
    ok = not bad and implied and bool(full)
    record(2, ok, f"{len(premise)} pairs satisfy (i)-(iii) with covers-mode (iv), all distributive: {implied}; failures {bad}")
    assert ok


def test_criterion_3_theorem_b(sweep):
    full = sweep["full"]
    closed = [r for r in full if r["theorem_b"]["holds"]]
    ok = len(closed) == len(full) > 0
    record(3, ok, f"sigma-permutable family closed under meet and join in {len(closed)}/{len(full)} sigma-full pairs")
    assert ok


def test_criterion_4_sigma0_specialization(sweep):
    rows = [r for r in sweep["reports"] if r["partition"] == "sigma0"]
    agree = [r for r in rows if r["sigma0_specialization"]["agrees"] and r["sigma0_specialization"]["families_equal"]]
    kegel = [r for r in rows if r["sigma0_specialization"]["kegel_closed"] == r["theorem_b"]["holds"]]
    ok = len(rows) == len(builtin_corpus()) and len(agree) == len(rows) and len(kegel) == len(rows)
    record(4, ok, f"S-permutable family equal in {len(agree)}/{len(rows)} groups, closure verdicts agree in {len(kegel)}/{len(rows)}")
    assert ok


def test_criterion_5_theorem_c(sweep):
    full = sweep["full"]
    good = [r for r in full if r["theorem_c"]["holds"] and r["theorem_c"]["skipped"] == 0]
    checked = sum(r["theorem_c"]["checked"] for r in full)
    ok = len(good) == len(full) > 0
    record(5, ok, f"three-way equivalence over {checked} sigma-nilpotent subgroups, {len(good)}/{len(full)} pairs clean")
    assert ok


def test_criterion_6_nilpotency_and_residuals(sweep):
    full = sweep["full"]
    remark = [r["lemmas"]["remark_1_2(ii)"] for r in full]
    remark_ok = all(t["instances"] == 1 and t["violations"] == 0 for t in remark)
    residual_pairs = 0
    residual_ok = True
    for r in sweep["reports"]:
        if r["partition"] not in ("sigma0", "pi:2"):
            continue
        t = r["lemmas"]["lemma_3_9"]
        normals = len(all_normal_subgroups(group(r["group"])))
        residual_ok &= t["instances"] == normals and t["violations"] == 0
        residual_pairs += 1
    ok = remark_ok and residual_ok and residual_pairs == 2 * len(builtin_corpus())
    record(6, ok, f"nilpotent iff all subgroups permutable in {len(remark)} pairs; residual identity over every normal subgroup in {residual_pairs} pairs")
    assert ok


def test_criterion_7_golden_values():
    S3, Q8, A5 = group("S3"), group("Q8"), group("A5")
    checks = {}
    s3 = sigma_lattice(S3, SIGMA0)
    checks["S3 lattice {1, A3, S3}"] = [H for H in s3.family] == [S3.trivial(), sub(S3, "(1 2 3)"), S3.whole()]
    checks["S3 distributive"] = check_theorem_A(S3, SIGMA0).direct_distributive.holds
    q8 = sigma_lattice(Q8, SIGMA0)
    checks["Q8 lattice is all 6 subgroups"] = list(q8.family) == list(all_subgroups(Q8)) and len(q8) == 6
    checks["Q8 not distributive"] = not check_theorem_A(Q8, SIGMA0).direct_distributive.holds
    w = check_condition_iv(Q8, SIGMA0).witness or {}
    checks["Q8 (iv) witness R=1, {2}, K=center"] = (
        w.get("R", {}).get("order") == 1
        and w.get("block") == "{2}"
        and w.get("K") == {"order": 2, "generators": ["(1 5)(2 6)(3 7)(4 8)"]}
    )
    checks["A5 lattice {1, A5}"] = [H.order for H in sigma_permutable_family(A5, SIGMA0)] == [1, 60]
    checks["A5 not sigma-full for [3];one_block"] = not is_sigma_full(A5, parse_partition("blocks:[3];rest=one_block"))
    ok = all(checks.values())
    record(7, ok, "; ".join(f"{k}: {'ok' if v else 'WRONG'}" for k, v in checks.items()))
    assert ok


def test_criterion_8_lattice_oracles(sweep):
    lattices = 0
    agree = 0
    ore = 0
    groups = set()
    for r in sweep["reports"]:
        for name, o in r["lattice_oracles"].items():
            lattices += 1
            agree += o["agrees"]
        sub_lattice = r["lattice_oracles"]["subgroups"]
        if r["group"] not in groups:
            groups.add(r["group"])
            ore += sub_lattice["cyclic"] == sub_lattice["distributive"]
    ok = lattices > 0 and agree == lattices and ore == len(groups) == len(builtin_corpus())
    record(8, ok, f"triple law vs modular-and-diamond-free agree on {agree}/{lattices} lattices; cyclic iff distributive in {ore}/{len(groups)} groups")
    assert ok


def test_criterion_9_determinism(sweep):
    a, b = sweep["dirs"]
    names_a = sorted(p.name for p in (a / "reports").iterdir())
    names_b = sorted(p.name for p in (b / "reports").iterdir())
    same = names_a == names_b and all(
        (a / "reports" / n).read_bytes() == (b / "reports" / n).read_bytes() for n in names_a
    )
    same = same and (a / "summary.json").read_bytes() == (b / "summary.json").read_bytes()
    ok = same and sweep["second"].returncode == 0 and len(names_a) > 0
    record(9, ok, f"--jobs 1 and --jobs 2 wrote {len(names_a)} byte-identical reports plus summary: {same}")
    assert ok
