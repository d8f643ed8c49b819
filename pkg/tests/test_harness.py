import json
import stat
import time

import pytest

from loopbench.harness import (
    DEFAULT_TIMEOUT,
    DEFAULT_TOKENS,
    RunResult,
    SolverSpec,
    Verdict,
    aggregate,
    load_results,
    load_solver_config,
    result_from_json,
    run_campaign,
    run_solver,
)


def _script(tmp_path, name, body):
    path = tmp_path / name
    path.write_text("#!/bin/sh\n" + body)
    path.chmod(path.stat().st_mode | stat.S_IEXEC)
    return path


@pytest.fixture
def smt_file(tmp_path):
    path = tmp_path / "A1.smt2"
    path.write_text("(set-logic UFNIA)\n(check-sat)\n")
    return path


def test_default_timeout_is_one_minute():
    assert DEFAULT_TIMEOUT == 60.0
    assert SolverSpec("s", "solver {file}").timeout == 60.0


def test_spec_requires_single_file_placeholder():
    with pytest.raises(ValueError):
        SolverSpec("s", "solver")
    with pytest.raises(ValueError):
        SolverSpec("s", "solver {file} {file}")


def test_verdict_tokens(tmp_path, smt_file):
    cases = {
        "echo unsat\n": Verdict.PROVED,
        "echo sat\n": Verdict.COUNTERSAT,
        "echo unknown\n": Verdict.UNKNOWN,
        "echo something else\n": Verdict.UNKNOWN,  # exit 0, no token
        "echo unsatisfiable\n": Verdict.UNKNOWN,  # tokens match whole lines
        "echo broken; exit 3\n": Verdict.ERROR,
        "echo warming up; echo unsat\n": Verdict.PROVED,
        "printf '  unsat  \\n'\n": Verdict.PROVED,  # surrounding space is trimmed
    }
    for body, verdict in cases.items():
        runner = _script(tmp_path, f"s{len(body)}.sh", body)
        spec = SolverSpec("stub", f"{runner} {{file}}")
        got, wall = run_solver(spec, smt_file)
        assert got == verdict, body
        assert wall >= 0


def test_custom_tokens(tmp_path, smt_file):
    runner = _script(tmp_path, "prover.sh", "echo Theorem\n")
    spec = SolverSpec("p", f"{runner} {{file}}", tokens={"Theorem": Verdict.PROVED})
    assert run_solver(spec, smt_file)[0] == Verdict.PROVED


def test_timeout_kills_the_solver(tmp_path, smt_file):
    runner = _script(tmp_path, "slow.sh", "sleep 30\necho unsat\n")
    spec = SolverSpec("slow", f"{runner} {{file}}", timeout=0.3)
    start = time.monotonic()
    verdict, wall = run_solver(spec, smt_file)
    elapsed = time.monotonic() - start
    assert verdict == Verdict.TIMEOUT
    assert elapsed < 5


def test_missing_binary_is_an_error(smt_file):
    spec = SolverSpec("ghost", "/nonexistent/prover {file}")
    assert run_solver(spec, smt_file)[0] == Verdict.ERROR


def test_file_substitution_respects_quoting(tmp_path):
    smt = tmp_path / "A1.smt2"
    smt.write_text("x\n")
    runner = _script(tmp_path, "cat.sh", 'cat "$2" >/dev/null && echo unsat\n')
    spec = SolverSpec("s", f"{runner} --flag {{file}}")
    assert run_solver(spec, smt)[0] == Verdict.PROVED


def test_load_solver_config(tmp_path):
    config = tmp_path / "solvers.json"
    config.write_text(
        json.dumps(
            {
                "solvers": [
                    {"name": "a", "cmd": "a {file}"},
                    {
                        "name": "b",
                        "cmd": "b {file}",
                        "timeout": 5,
                        "tokens": {"Proof found": "proved"},
                    },
                ]
            }
        )
    )
    specs = load_solver_config(config)
    assert [s.name for s in specs] == ["a", "b"]
    assert specs[0].tokens == DEFAULT_TOKENS
    assert specs[1].timeout == 5.0
    assert specs[1].tokens == {"Proof found": Verdict.PROVED}
    config.write_text(json.dumps([{"name": "c", "cmd": "c {file}"}]))
    assert load_solver_config(config)[0].name == "c"


def test_result_json_round_trip():
    result = RunResult("A1", "s", "base", Verdict.PROVED, 1.23456)
    again = result_from_json(result.to_json())
    assert again.problem_id == "A1"
    assert again.verdict == Verdict.PROVED
    assert again.wall_time == pytest.approx(1.2346)


def _mk_files(tmp_path, ids):
    files = []
    for pid in ids:
        path = tmp_path / f"{pid}.smt2"
        path.write_text("(check-sat)\n")
        files.append((pid, path))
    return files


def test_run_campaign_and_resume(tmp_path):
    unsat = _script(tmp_path, "unsat.sh", "echo unsat\n")
    sat = _script(tmp_path, "sat.sh", "echo sat\n")
    solvers = [
        SolverSpec("yes", f"{unsat} {{file}}"),
        SolverSpec("no", f"{sat} {{file}}"),
    ]
    files = _mk_files(tmp_path, ["A1", "A2", "A3"])
    log = tmp_path / "results.jsonl"

    first = run_campaign(solvers, files, "base", log, jobs=2)
    assert len(first) == 6
    assert len(load_results(log)) == 6

    # A second run is a no-op; everything is already logged.
    assert run_campaign(solvers, files, "base", log) == []
    assert len(load_results(log)) == 6

    # New problems and new variants fill in the gaps only.
    more_files = _mk_files(tmp_path, ["A4"])
    assert len(run_campaign(solvers, files + more_files, "base", log)) == 2
    assert len(run_campaign(solvers, files[:1], "c1", log)) == 2
    assert len(load_results(log)) == 10


def _result(pid, solver, verdict, variant="base"):
    return RunResult(pid, solver, variant, verdict, 0.1)


def test_aggregate_counts_and_union():
    results = [
        _result("A1", "s1", Verdict.PROVED),
        _result("A2", "s1", Verdict.PROVED),
        _result("A3", "s1", Verdict.UNKNOWN),
        _result("A4", "s1", Verdict.TIMEOUT),
        _result("A1", "s2", Verdict.UNKNOWN),
        _result("A2", "s2", Verdict.PROVED),
        _result("A3", "s2", Verdict.PROVED),
        _result("A4", "s2", Verdict.COUNTERSAT),
    ]
    table = aggregate(
        results,
        all_ids=["A1", "A2", "A3", "A4"],
        syn_ids=["A1", "A2", "A3"],
        sem_ids=["A1"],
        nonver_ids=["A4"],
    )
    assert table.rows == ["NoFilt", "SynFilt", "SemFilt", "NonVer"]
    assert table.methods == ["s1/base", "s2/base"]
    assert table.cells["NoFilt"] == {"s1/base": 2, "s2/base": 2, "All": 3}
    assert table.cells["SynFilt"] == {"s1/base": 2, "s2/base": 2, "All": 3}
    assert table.cells["SemFilt"] == {"s1/base": 1, "s2/base": 0, "All": 1}
    assert table.cells["NonVer"] == {"s1/base": 0, "s2/base": 0, "All": 0}
    # sat on a non-verified problem is expected, not an anomaly.
    assert table.anomalies == []

    text = table.render_text()
    assert "s1/base" in text and "All" in text
    assert text.splitlines()[1].startswith("NoFilt")
    csv = table.render_csv()
    assert csv.splitlines()[0] == "row,s1/base,s2/base,All"
    assert csv.splitlines()[1] == "NoFilt,2,2,3"


def test_aggregate_flags_countersat_on_verified_problems(caplog):
    results = [_result("A1", "s1", Verdict.COUNTERSAT)]
    table = aggregate(results, ["A1"], [], [], [])
    assert len(table.anomalies) == 1
    assert "anomalies" in table.render_text()


def test_aggregate_validates_manifests():
    with pytest.raises(ValueError):
        aggregate([], ["A1"], [], ["A1"], [])  # sem not within syn
    with pytest.raises(ValueError):
        aggregate([], ["A1"], ["A2"], [], [])  # unknown id in syn
    with pytest.raises(ValueError):
        aggregate([], ["A1"], [], [], ["A9"])  # unknown id in nonver


def test_aggregate_with_no_results():
    table = aggregate([], ["A1"], ["A1"], [], [])
    assert table.methods == []
    assert table.cells["NoFilt"] == {"All": 0}
