"""Command-line interface for the benchmark pipeline.

Subcommands cover the whole flow: fmt/eval/seq for single programs,
cover/build/verify/filter/export for benchmark construction, run/report
for the solver harness, and pipeline to compose build through export.
Every limit flag can also be set through a LOOPBENCH_* environment
variable (the flag wins when both are present).
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from . import harness, induction, oeis, smt, verify as verify_mod
from .interp import (
    CHECK_LIMIT,
    VERIFY_LIMIT,
    VALUE_BOUND,
    Budget,
    EvalConfig,
    evaluate,
    generate_seq,
)
from .lang import parse, to_text


def _env_int(name: str, default: int) -> int:
    raw = os.environ.get(name)
    return int(raw) if raw else default


def _env_str(name: str, default: str) -> str:
    return os.environ.get(name) or default


def _cfg(args: argparse.Namespace, limit_attr: str = "limit") -> EvalConfig:
    return EvalConfig(
        per_call_limit=getattr(args, limit_attr),
        value_bound=args.value_bound,
    )


def _add_limit_flags(sub: argparse.ArgumentParser, verify_limit: bool = False) -> None:
    sub.add_argument(
        "--limit",
        type=int,
        default=_env_int("LOOPBENCH_LIMIT", CHECK_LIMIT),
        help="abstract time budget per call (LOOPBENCH_LIMIT)",
    )
    if verify_limit:
        sub.add_argument(
            "--verify-limit",
            type=int,
            default=_env_int("LOOPBENCH_VERIFY_LIMIT", VERIFY_LIMIT),
            help="abstract time budget per call during verification (LOOPBENCH_VERIFY_LIMIT)",
        )
    sub.add_argument(
        "--value-bound",
        type=int,
        default=_env_int("LOOPBENCH_VALUE_BOUND", VALUE_BOUND),
        help="largest value magnitude before overflow (LOOPBENCH_VALUE_BOUND)",
    )


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(prog="loopbench")
    subs = top.add_subparsers(dest="command", required=True)

    p = subs.add_parser("fmt", help="parse a program and print it canonically")
    p.add_argument("program")
    p.add_argument(
        "--if-cond",
        action="store_true",
        help="print conditionals as 'if a <= 0 then b else c'",
    )

    p = subs.add_parser("eval", help="evaluate a program at (x, y)")
    p.add_argument("program")
    p.add_argument("x", type=int)
    p.add_argument("y", type=int)
    _add_limit_flags(p)

    p = subs.add_parser("seq", help="print the first n values of a program")
    p.add_argument("program")
    p.add_argument("n", type=int)
    _add_limit_flags(p)

    p = subs.add_parser("cover", help="check that a program generates a sequence's terms")
    p.add_argument("program")
    p.add_argument("--anum", required=True)
    p.add_argument("--stripped", required=True, type=Path)
    _add_limit_flags(p)

    p = subs.add_parser("build", help="group solutions into a problem manifest")
    p.add_argument("--stripped", required=True, type=Path)
    p.add_argument("--solutions", required=True, type=Path)
    p.add_argument("--out", required=True, type=Path)

    p = subs.add_parser("verify", help="check each problem's equality on x = 0..99")
    p.add_argument("--problems", required=True, type=Path)
    p.add_argument("--reports", type=Path, help="verify report JSON-lines output")
    p.add_argument("--nonverified", type=Path, help="all_nonverified100 manifest output")
    _add_limit_flags(p, verify_limit=True)

    p = subs.add_parser("filter", help="apply the induction-likelihood filters")
    p.add_argument("--problems", required=True, type=Path)
    p.add_argument("--syn", required=True, type=Path, help="aind_syn manifest output")
    p.add_argument("--sem", required=True, type=Path, help="aind_sem manifest output")
    p.add_argument(
        "--filter-mode",
        choices=("per-loop", "per-test"),
        default=_env_str("LOOPBENCH_FILTER_MODE", "per-loop"),
    )
    _add_limit_flags(p)

    p = subs.add_parser("export", help="write SMT-LIB scripts for a problem manifest")
    p.add_argument("--problems", required=True, type=Path)
    p.add_argument("--outdir", required=True, type=Path)
    p.add_argument("--variant", default="base", help="base, c1..c8, c2x or strong")
    p.add_argument(
        "--c2x-appendix",
        action="store_true",
        help="use the 2c / 2(c+1) form of the c2x conjecture",
    )

    p = subs.add_parser("run", help="run solvers over an exported directory")
    p.add_argument("--config", required=True, type=Path)
    p.add_argument("--dir", required=True, type=Path)
    p.add_argument("--variant", default="base")
    p.add_argument("--log", required=True, type=Path)
    p.add_argument("--jobs", type=int, default=_env_int("LOOPBENCH_JOBS", 1))

    p = subs.add_parser("report", help="aggregate solver results into a table")
    p.add_argument("--results", required=True, type=Path)
    p.add_argument("--index", required=True, type=Path, help="index.tsv of exported problems")
    p.add_argument("--syn", required=True, type=Path)
    p.add_argument("--sem", required=True, type=Path)
    p.add_argument("--nonverified", required=True, type=Path)
    p.add_argument("--out", type=Path, help="write the text table here as well")
    p.add_argument("--csv", type=Path, help="write a CSV copy here")

    p = subs.add_parser("pipeline", help="compose build, verify, filter and export")
    p.add_argument("--stripped", required=True, type=Path)
    p.add_argument("--solutions", required=True, type=Path)
    p.add_argument("--outdir", required=True, type=Path)
    p.add_argument("--variant", default="base")
    p.add_argument("--c2x-appendix", action="store_true")
    p.add_argument(
        "--filter-mode",
        choices=("per-loop", "per-test"),
        default=_env_str("LOOPBENCH_FILTER_MODE", "per-loop"),
    )
    p.add_argument(
        "--dry-run",
        action="store_true",
        help="print the stage counts without writing anything",
    )
    _add_limit_flags(p, verify_limit=True)

    return top


def _read_index(path: Path) -> list[str]:
    return [
        line.split("\t")[0]
        for line in path.read_text().splitlines()
        if line.strip()
    ]


def _cmd_fmt(args) -> int:
    print(to_text(parse(args.program), if_style=args.if_cond))
    return 0


def _cmd_eval(args) -> int:
    cfg = _cfg(args)
    outcome = evaluate(parse(args.program), args.x, args.y, Budget(cfg.per_call_limit), cfg)
    if not outcome.ok:
        print(f"error: {outcome.error.value}", file=sys.stderr)
        return 1
    print(f"{outcome.value} (cost {outcome.cost})")
    return 0


def _cmd_seq(args) -> int:
    outcomes = generate_seq(parse(args.program), args.n, _cfg(args))
    values = [o.value for o in outcomes if o.ok]
    if values:
        print(" ".join(str(v) for v in values))
    failed = [o for o in outcomes if not o.ok]
    if failed:
        print(f"error: {failed[0].error.value} at index {len(outcomes) - 1}", file=sys.stderr)
        return 1
    return 0


def _cmd_cover(args) -> int:
    sequences = oeis.load_stripped(args.stripped)
    if args.anum not in sequences:
        print(f"error: no sequence {args.anum} in {args.stripped}", file=sys.stderr)
        return 1
    ok = oeis.covers(parse(args.program), sequences[args.anum], _cfg(args))
    print("true" if ok else "false")
    return 0 if ok else 1


def _cmd_build(args) -> int:
    sequences = oeis.load_stripped(args.stripped)
    solutions = oeis.load_solutions(args.solutions)
    problems = oeis.build_problems(solutions, sequences)
    oeis.save_problems(problems, args.out)
    print(f"{len(problems)} problems from {len(solutions)} solutions -> {args.out}")
    return 0


def _cmd_verify(args) -> int:
    problems = oeis.load_problems(args.problems)
    cfg = EvalConfig(per_call_limit=args.verify_limit, value_bound=args.value_bound)
    reports = verify_mod.verify_all(problems, cfg)
    oeis.save_problems(problems, args.problems)
    if args.reports:
        verify_mod.save_reports(reports, args.reports)
    if args.nonverified:
        verify_mod.emit_nonverified(reports, args.nonverified)
    counts = {status: sum(1 for r in reports if r.status == status)
              for status in ("verified", "nonverified", "refuted")}
    print(" ".join(f"{k}={v}" for k, v in counts.items()))
    return 0


def _cmd_filter(args) -> int:
    problems = oeis.load_problems(args.problems)
    syn_ids, sem_ids = induction.classify_all(problems, _cfg(args), args.filter_mode)
    oeis.save_problems(problems, args.problems)
    induction.write_manifest(syn_ids, args.syn)
    induction.write_manifest(sem_ids, args.sem)
    print(f"syn={len(syn_ids)} sem={len(sem_ids)}")
    return 0


def _cmd_export(args) -> int:
    problems = oeis.load_problems(args.problems)
    variant = smt.parse_variant(args.variant, appendix_twox=args.c2x_appendix)
    index = smt.export_all(problems, args.outdir, variant)
    print(f"{len(index)} scripts -> {args.outdir}")
    return 0


def _cmd_run(args) -> int:
    solvers = harness.load_solver_config(args.config)
    ids = _read_index(args.dir / "index.tsv")
    files = [(pid, args.dir / f"{pid}.smt2") for pid in ids]
    results = harness.run_campaign(solvers, files, args.variant, args.log, args.jobs)
    print(f"{len(results)} new results -> {args.log}")
    return 0


def _cmd_report(args) -> int:
    results = harness.load_results(args.results)
    table = harness.aggregate(
        results,
        all_ids=_read_index(args.index),
        syn_ids=induction.read_manifest(args.syn),
        sem_ids=induction.read_manifest(args.sem),
        nonver_ids=induction.read_manifest(args.nonverified),
    )
    text = table.render_text()
    print(text, end="")
    if args.out:
        args.out.write_text(text)
    if args.csv:
        args.csv.write_text(table.render_csv())
    return 0


def _cmd_pipeline(args) -> int:
    sequences = oeis.load_stripped(args.stripped)
    solutions = oeis.load_solutions(args.solutions)
    problems = oeis.build_problems(solutions, sequences)

    verify_cfg = EvalConfig(per_call_limit=args.verify_limit, value_bound=args.value_bound)
    reports = verify_mod.verify_all(problems, verify_cfg)

    check_cfg = EvalConfig(per_call_limit=args.limit, value_bound=args.value_bound)
    syn_ids, sem_ids = induction.classify_all(problems, check_cfg, args.filter_mode)

    exported = [p for p in problems if p.status != "refuted"]
    counts = [
        ("solutions", len(solutions)),
        ("problems", len(problems)),
        ("verified", sum(1 for p in problems if p.status == "verified")),
        ("nonverified", sum(1 for p in problems if p.status == "nonverified")),
        ("refuted", sum(1 for p in problems if p.status == "refuted")),
        ("aind_syn", len(syn_ids)),
        ("aind_sem", len(sem_ids)),
        ("exported", len(exported)),
    ]
    for name, value in counts:
        print(f"{name}: {value}")
    if args.dry_run:
        return 0

    outdir = args.outdir
    outdir.mkdir(parents=True, exist_ok=True)
    oeis.save_problems(problems, outdir / "problems.jsonl")
    verify_mod.save_reports(reports, outdir / "verify_reports.jsonl")
    verify_mod.emit_nonverified(reports, outdir / "all_nonverified100")
    induction.write_manifest(syn_ids, outdir / "aind_syn")
    induction.write_manifest(sem_ids, outdir / "aind_sem")
    variant = smt.parse_variant(args.variant, appendix_twox=args.c2x_appendix)
    smt.export_all(problems, outdir / variant.label(), variant)
    print(f"pipeline outputs -> {outdir}")
    return 0


_COMMANDS = {
    "fmt": _cmd_fmt,
    "eval": _cmd_eval,
    "seq": _cmd_seq,
    "cover": _cmd_cover,
    "build": _cmd_build,
    "verify": _cmd_verify,
    "filter": _cmd_filter,
    "export": _cmd_export,
    "run": _cmd_run,
    "report": _cmd_report,
    "pipeline": _cmd_pipeline,
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
