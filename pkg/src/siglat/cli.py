"""Command line front end: ``siglat analyze | corpus | verify | hunt``.

Exit codes: 0 all consistent, 1 a theorem violation was found, 2 usage or
parse error, 3 capped skips under ``--strict`` (``verify`` is always strict).
"""

from __future__ import annotations

import re
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import click

from . import caps
from .corpus import GroupSpec, builtin_corpus, corpus_by_name, parse_group_file
from .errors import CapExceeded, ParseError
from .report import AnalysisReport, analyze, dumps, render_markdown
from .sigma import parse_partition
from .theorems import hunt_modularity

DEFAULT_PARTITIONS = "sigma0,pi:2,pi:2,3,blocks:[2,5][3];rest=singletons"

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE, EXIT_CAPPED = 0, 1, 2, 3


def split_partitions(text: str) -> list[str]:
    """Split a comma list of partitions.

    Commas inside ``[...]`` stay put, and a bare number continues the previous
    item, so ``sigma0,pi:2,pi:2,3`` is three partitions.
    """
    items: list[str] = []
    depth = 0
    cur = ""
    for ch in text:
        if ch == "[":
            depth += 1
        elif ch == "]":
            depth -= 1
        if ch == "," and depth == 0:
            items.append(cur)
            cur = ""
        else:
            cur += ch
    items.append(cur)
    out: list[str] = []
    for raw in items:
        tok = raw.strip()
        if not tok:
            continue
        if tok.isdigit() and out:
            out[-1] += "," + tok
        else:
            out.append(tok)
    return out


def slug(text: str) -> str:
    return re.sub(r"[^A-Za-z0-9]+", "_", text).strip("_")


def report_name(group: str, partition: str) -> str:
    return f"{slug(group)}__{slug(partition)}"


def run_job(job: tuple) -> tuple[str, str, str, float]:
    """Analyze one pair; returns (group, partition, report text, seconds)."""
    spec_json, partition, mode, lemmas, cap_values = job
    caps.set_caps(**cap_values)
    spec = GroupSpec(spec_json["name"], spec_json["degree"], tuple(spec_json["generators"]), spec_json.get("order"))
    sigma = parse_partition(partition)
    start = time.perf_counter()
    try:
        G = spec.build()
    except CapExceeded as exc:
        rep = AnalysisReport(spec.name, spec.order or 0, sigma.name, mode, skips=[f"group generation: {exc}"])
        rep.verdict = "skipped"
    else:
        rep = analyze(G, sigma, mode, lemmas=lemmas)
    return spec.name, sigma.name, rep.dumps(), time.perf_counter() - start


def run_jobs(jobs: list[tuple], workers: int) -> list[tuple[str, str, str, float]]:
    if workers <= 1 or len(jobs) <= 1:
        results = [run_job(j) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run_job, jobs))
    return sorted(results, key=lambda r: (r[0], r[1]))


def exit_code(violations: int, skips: int, strict: bool) -> int:
    if violations:
        return EXIT_VIOLATION
    if skips and strict:
        return EXIT_CAPPED
    return EXIT_OK


def _partitions(text: str) -> list[str]:
    names = split_partitions(text)
    if not names:
        raise click.BadParameter("no partitions given", param_hint="--partitions")
    out = []
    for name in names:
        try:
            out.append(parse_partition(name).name)
        except ParseError as exc:
            raise click.BadParameter(f"{name!r}: {exc}", param_hint="--partitions") from None
    return out


def _cap_values() -> dict:
    c = caps.current()
    return {"max_order": c.max_order, "max_subgroups": c.max_subgroups, "max_aut_order": c.max_aut_order}


@click.group()
@click.option("--max-order", type=click.IntRange(min=1), default=None, help="Largest group order analyzed (env SIGLAT_MAX_ORDER).")
@click.option("--max-subgroups", type=click.IntRange(min=1), default=None, help="Largest subgroup count enumerated.")
@click.option("--strict", is_flag=True, help="Exit 3 when any instance was skipped by a cap.")
@click.pass_context
def main(ctx: click.Context, max_order, max_subgroups, strict):
    """Check sigma-permutable subgroup lattices against the distributivity criteria."""
    caps.reset()
    caps.set_caps(max_order=max_order, max_subgroups=max_subgroups)
    ctx.obj = {"strict": strict}


def _load_group(text: str) -> GroupSpec:
    path = Path(text)
    if path.is_file():
        try:
            return parse_group_file(path)
        except ParseError as exc:
            raise click.BadParameter(f"{text}: {exc}", param_hint="--group") from None
    known = corpus_by_name()
    if text in known:
        return known[text]
    raise click.BadParameter(f"{text!r} is neither a group file nor a builtin group", param_hint="--group")


@main.command("analyze")
@click.option("--group", "group", required=True, help="Group JSON file or builtin corpus name.")
@click.option("--partition", required=True, help="sigma0 | pi:2,3 | blocks:[2,5][3];rest=singletons")
@click.option("--mode", type=click.Choice(["full", "covers"]), default="full", show_default=True)
@click.option("--out", type=click.Path(file_okay=False, path_type=Path), default=None, help="Write the report here instead of stdout.")
@click.option("--format", "fmt", type=click.Choice(["json", "md"]), default="json", show_default=True)
@click.option("--skip-lemmas", is_flag=True, help="Leave the lemma suite out.")
@click.pass_context
def analyze_cmd(ctx, group, partition, mode, out, fmt, skip_lemmas):
    """Analyze one group under one partition."""
    spec = _load_group(group)
    try:
        sigma = parse_partition(partition)
    except ParseError as exc:
        raise click.BadParameter(str(exc), param_hint="--partition") from None
    _, _, text, _ = run_job((spec.to_json(), sigma.name, mode, not skip_lemmas, _cap_values()))
    rep = AnalysisReport.loads(text)
    body = text if fmt == "json" else render_markdown(rep)
    if out is None:
        click.echo(body, nl=False)
    else:
        out.mkdir(parents=True, exist_ok=True)
        target = out / f"{report_name(rep.group, rep.partition)}.{fmt}"
        target.write_text(body)
        click.echo(f"{rep.group} {rep.partition}: {rep.verdict} -> {target}")
    ctx.exit(exit_code(len(rep.violations), len(rep.skips), ctx.obj["strict"]))


def _sweep(ctx, partitions, jobs, mode, out, groups, lemmas, strict) -> int:
    names = _partitions(partitions)
    specs = builtin_corpus()
    if groups:
        wanted = [g.strip() for g in groups.split(";") if g.strip()]
        known = {s.name: s for s in specs}
        missing = [g for g in wanted if g not in known]
        if missing:
            raise click.BadParameter(f"unknown groups {missing}", param_hint="--groups")
        specs = [known[g] for g in wanted]
    cap_values = _cap_values()
    work = [(s.to_json(), p, mode, lemmas, cap_values) for s in specs for p in names]
    start = time.perf_counter()
    results = run_jobs(work, jobs)
    elapsed = time.perf_counter() - start

    rows, timings = [], {}
    n_viol = n_skip = 0
    if out is not None:
        (out / "reports").mkdir(parents=True, exist_ok=True)
    for group, partition, text, seconds in results:
        rep = AnalysisReport.loads(text)
        name = report_name(group, partition)
        if out is not None:
            (out / "reports" / f"{name}.json").write_text(text)
        timings[name] = round(seconds * 1000)
        n_viol += len(rep.violations)
        n_skip += len(rep.skips)
        ta = rep.theorem_a or {}
        rows.append(
            {
                "group": group,
                "order": rep.order,
                "partition": partition,
                "sigma_full": rep.sigma_full,
                "distributive": None if rep.lattice is None else rep.lattice["distributive"],
                "theorem_a": ta.get("verdict", "skipped"),
                "verdict": rep.verdict,
                "violations": rep.violations,
                "skips": rep.skips,
            }
        )
        click.echo(f"{rep.verdict:<10} {group:<10} {partition:<34} sigma_full={str(rep.sigma_full).lower()}")
    summary = {
        "schema_version": 1,
        "mode": mode,
        "partitions": names,
        "pairs": len(rows),
        "sigma_full_pairs": sum(r["sigma_full"] for r in rows),
        "violations": n_viol,
        "skips": n_skip,
        "results": rows,
    }
    if out is not None:
        (out / "summary.json").write_text(dumps(summary))
        (out / "timings.json").write_text(dumps({"total_ms": round(elapsed * 1000), "per_pair_ms": timings}))
    click.echo(
        f"{len(rows)} pairs, {summary['sigma_full_pairs']} sigma-full, "
        f"{n_viol} violations, {n_skip} skips, {elapsed:.1f}s"
    )
    return exit_code(n_viol, n_skip, strict)


_sweep_options = [
    click.option("--partitions", default=DEFAULT_PARTITIONS, show_default=True, help="Comma-separated partitions."),
    click.option("--jobs", type=click.IntRange(min=1), default=1, show_default=True, help="Worker processes."),
    click.option("--mode", type=click.Choice(["full", "covers"]), default="full", show_default=True),
    click.option("--groups", default=None, help="Semicolon-separated subset of the builtin corpus."),
    click.option("--skip-lemmas", is_flag=True, help="Leave the lemma suite out."),
]


def sweep_options(fn):
    for opt in reversed(_sweep_options):
        fn = opt(fn)
    return fn


@main.command("corpus")
@sweep_options
@click.option("--out", type=click.Path(file_okay=False, path_type=Path), default=Path("siglat-reports"), show_default=True)
@click.pass_context
def corpus_cmd(ctx, partitions, jobs, mode, groups, skip_lemmas, out):
    """Run every check over the builtin corpus and write one report per pair."""
    ctx.exit(_sweep(ctx, partitions, jobs, mode, out, groups, not skip_lemmas, ctx.obj["strict"]))


@main.command("verify")
@sweep_options
@click.option("--out", type=click.Path(file_okay=False, path_type=Path), default=None)
@click.pass_context
def verify_cmd(ctx, partitions, jobs, mode, groups, skip_lemmas, out):
    """Like ``corpus`` but succeeds only with zero violations and zero skips."""
    ctx.exit(_sweep(ctx, partitions, jobs, mode, out, groups, not skip_lemmas, True))


@main.command("hunt")
@click.option("--partitions", default=DEFAULT_PARTITIONS, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False, path_type=Path), default=None, help="Write findings JSON here.")
@click.pass_context
def hunt_cmd(ctx, partitions, out):
    """Record modularity of each sigma-permutable lattice in the corpus."""
    sigmas = [parse_partition(p) for p in _partitions(partitions)]
    findings, skipped = [], []
    for spec in builtin_corpus():
        try:
            findings.extend(hunt_modularity([spec.build()], sigmas))
        except CapExceeded as exc:
            skipped.append({"group": spec.name, "reason": str(exc)})
    data = {"schema_version": 1, "findings": findings, "skipped": skipped}
    non_modular = [f for f in findings if not f["modular"]]
    if out is not None:
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text(dumps(data))
    else:
        click.echo(dumps(data), nl=False)
    click.echo(f"{len(findings)} lattices, {len(non_modular)} non-modular, {len(skipped)} skipped", err=True)
    ctx.exit(exit_code(0, len(skipped), ctx.obj["strict"]))


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
