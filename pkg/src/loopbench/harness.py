"""Running external solvers over exported problems and tallying results.

Solvers are described by a command template with a {file} placeholder.
A solver's verdict is read from its stdout: each trimmed line is matched
exactly against the solver's token map (by default unsat/sat/unknown).
Results append to a JSON-lines log keyed by (problem, solver, variant),
so an interrupted campaign resumes where it stopped.
"""

from __future__ import annotations

import json
import logging
import shlex
import subprocess
import time
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

log = logging.getLogger(__name__)

DEFAULT_TIMEOUT = 60.0


class Verdict(Enum):
    PROVED = "proved"
    COUNTERSAT = "countersat"
    UNKNOWN = "unknown"
    TIMEOUT = "timeout"
    ERROR = "error"


DEFAULT_TOKENS = {
    "unsat": Verdict.PROVED,
    "sat": Verdict.COUNTERSAT,
    "unknown": Verdict.UNKNOWN,
}


@dataclass(frozen=True)
class SolverSpec:
    name: str
    command: str
    timeout: float = DEFAULT_TIMEOUT
    tokens: dict[str, Verdict] = field(default_factory=lambda: dict(DEFAULT_TOKENS))

    def __post_init__(self) -> None:
        if self.command.count("{file}") != 1:
            raise ValueError(
                f"solver {self.name!r}: command must contain {{file}} exactly once"
            )


def load_solver_config(path: str | Path) -> list[SolverSpec]:
    """Solver specs from a JSON config: {"solvers": [{name, cmd, ...}]}."""
    data = json.loads(Path(path).read_text())
    entries = data["solvers"] if isinstance(data, dict) else data
    specs = []
    for entry in entries:
        tokens = {
            token: Verdict(verdict)
            for token, verdict in entry.get("tokens", {}).items()
        } or dict(DEFAULT_TOKENS)
        specs.append(
            SolverSpec(
                name=entry["name"],
                command=entry["cmd"],
                timeout=float(entry.get("timeout", DEFAULT_TIMEOUT)),
                tokens=tokens,
            )
        )
    return specs


@dataclass(frozen=True)
class RunResult:
    problem_id: str
    solver: str
    variant: str
    verdict: Verdict
    wall_time: float

    def to_json(self) -> str:
        return json.dumps(
            {
                "id": self.problem_id,
                "solver": self.solver,
                "variant": self.variant,
                "verdict": self.verdict.value,
                "wall_time": round(self.wall_time, 4),
            }
        )


def result_from_json(line: str) -> RunResult:
    d = json.loads(line)
    return RunResult(d["id"], d["solver"], d["variant"], Verdict(d["verdict"]), d["wall_time"])


def load_results(path: str | Path) -> list[RunResult]:
    p = Path(path)
    if not p.exists():
        return []
    return [result_from_json(line) for line in p.read_text().splitlines() if line.strip()]


def run_solver(spec: SolverSpec, file: Path) -> tuple[Verdict, float]:
    """One solver invocation; the process is killed at the timeout."""
    argv = [
        arg.replace("{file}", str(file)) for arg in shlex.split(spec.command)
    ]
    start = time.perf_counter()
    try:
        proc = subprocess.run(
            argv, capture_output=True, text=True, timeout=spec.timeout
        )
    except subprocess.TimeoutExpired:
        return Verdict.TIMEOUT, time.perf_counter() - start
    except OSError:
        return Verdict.ERROR, time.perf_counter() - start
    elapsed = time.perf_counter() - start
    for line in proc.stdout.splitlines():
        verdict = spec.tokens.get(line.strip())
        if verdict is not None:
            return verdict, elapsed
    return (Verdict.UNKNOWN if proc.returncode == 0 else Verdict.ERROR), elapsed


def run_campaign(
    solvers: list[SolverSpec],
    files: list[tuple[str, Path]],
    variant: str,
    log_path: str | Path,
    jobs: int = 1,
) -> list[RunResult]:
    """Run every solver on every file, appending results to log_path.

    (problem, solver, variant) triples already present in the log are
    skipped, so a rerun after an interruption resumes cleanly.  Workers
    only execute solvers; all results funnel through this thread for the
    append.
    """
    log_path = Path(log_path)
    done = {(r.problem_id, r.solver, r.variant) for r in load_results(log_path)}
    tasks = [
        (spec, pid, path)
        for spec in solvers
        for pid, path in files
        if (pid, spec.name, variant) not in done
    ]
    results: list[RunResult] = []
    with log_path.open("a") as sink, ThreadPoolExecutor(max_workers=max(jobs, 1)) as pool:
        futures = {
            pool.submit(run_solver, spec, path): (spec, pid)
            for spec, pid, path in tasks
        }
        for future in as_completed(futures):
            spec, pid = futures[future]
            verdict, wall = future.result()
            result = RunResult(pid, spec.name, variant, verdict, wall)
            sink.write(result.to_json() + "\n")
            sink.flush()
            results.append(result)
    return results


@dataclass
class ReportTable:
    """Solved-problem counts per population row and solver/variant column."""

    rows: list[str]
    methods: list[str]  # "solver/variant" labels; an "All" union column is appended
    cells: dict[str, dict[str, int]]
    anomalies: list[RunResult]

    def render_text(self) -> str:
        headers = ["", *self.methods, "All"]
        table = [headers]
        for row in self.rows:
            table.append([row] + [str(self.cells[row][m]) for m in headers[1:]])
        widths = [max(len(r[c]) for r in table) for c in range(len(headers))]
        lines = [
            "  ".join(cell.ljust(width) for cell, width in zip(row, widths)).rstrip()
            for row in table
        ]
        if self.anomalies:
            lines.append("")
            lines.append(f"anomalies: {len(self.anomalies)} countersat on verified problems")
            for a in self.anomalies:
                lines.append(f"  {a.problem_id} by {a.solver}/{a.variant}")
        return "\n".join(lines) + "\n"

    def render_csv(self) -> str:
        headers = ["row", *self.methods, "All"]
        lines = [",".join(headers)]
        for row in self.rows:
            lines.append(",".join([row] + [str(self.cells[row][m]) for m in headers[1:]]))
        return "\n".join(lines) + "\n"


def aggregate(
    results: list[RunResult],
    all_ids: list[str],
    syn_ids: list[str],
    sem_ids: list[str],
    nonver_ids: list[str],
) -> ReportTable:
    """Tally proved counts for the four benchmark subsets.

    Raises if the manifests are inconsistent: sem must be a subset of
    syn, and every manifest id must belong to the full id set.
    CounterSat verdicts on verified problems are collected as anomalies
    (a counterexample to a verified identity means something is wrong).
    """
    universe = set(all_ids)
    syn, sem, nonver = set(syn_ids), set(sem_ids), set(nonver_ids)
    if not sem <= syn:
        raise ValueError(f"sem manifest is not a subset of syn: {sorted(sem - syn)}")
    for label, ids in (("syn", syn), ("sem", sem), ("nonver", nonver)):
        orphans = ids - universe
        if orphans:
            raise ValueError(f"{label} manifest ids not in the problem set: {sorted(orphans)}")

    populations = {
        "NoFilt": universe,
        "SynFilt": syn,
        "SemFilt": sem,
        "NonVer": nonver,
    }
    methods = sorted({(r.solver, r.variant) for r in results})
    labels = [f"{solver}/{variant}" for solver, variant in methods]
    proved: dict[str, set[str]] = {label: set() for label in labels}
    anomalies = []
    for r in results:
        label = f"{r.solver}/{r.variant}"
        if r.verdict == Verdict.PROVED:
            proved[label].add(r.problem_id)
        elif r.verdict == Verdict.COUNTERSAT and r.problem_id not in nonver:
            anomalies.append(r)
            log.warning(
                "countersat on verified problem %s by %s/%s",
                r.problem_id, r.solver, r.variant,
            )
    union = set().union(*proved.values()) if proved else set()

    rows = list(populations)
    cells = {
        row: {
            **{label: len(populations[row] & proved[label]) for label in labels},
            "All": len(populations[row] & union),
        }
        for row in rows
    }
    return ReportTable(rows, labels, cells, anomalies)
