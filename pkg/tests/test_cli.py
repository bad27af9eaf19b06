"""End-to-end checks of the command line interface."""
from __future__ import annotations

import json

import pytest

from madtn import (
    BehaviorProfile,
    compile_to_stn,
    packaged_example_path,
    parse_trace,
    run_cli,
    simulate,
    solve,
)

TASK = str(packaged_example_path())


def run(capsys, *argv):
    code = run_cli(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_validate_accepts_the_packaged_task(capsys):
    code, out, err = run(capsys, "validate", TASK)
    assert code == 0
    assert out == "ok\n"
    assert err == ""


def test_validate_rejects_an_unsound_model(tmp_path, capsys):
    doc = json.loads(packaged_example_path().read_text())
    doc["constraints"][0]["lower"] = 0.5  # handoffs must have a zero lower
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(doc))
    code, out, err = run(capsys, "validate", str(bad))
    assert code == 1
    assert out == ""
    assert "model: " in err
    assert "lower bound must be exactly 0" in err


def test_validate_warns_about_mid_petal_handoffs(tmp_path, capsys):
    doc = {
        "agents": [{"id": "x"}, {"id": "y"}],
        "petals": [
            {
                "name": "supply",
                "owner": "x",
                "actions": [
                    {"name": "fetch", "lower": 1.0, "upper": 2.0},
                    {"name": "stow", "lower": 1.0, "upper": 2.0},
                ],
            },
            {
                "name": "consume",
                "owner": "y",
                "actions": [{"name": "use", "lower": 1.0, "upper": 3.0}],
            },
        ],
        "constraints": [
            {
                "kind": "handoff",
                "source": "supply.fetch.end",
                "target": "consume.use.start",
                "lower": 0.0,
                "upper": None,
            }
        ],
    }
    path = tmp_path / "odd.json"
    path.write_text(json.dumps(doc))
    code, out, err = run(capsys, "validate", str(path))
    assert code == 0  # warnings do not fail validation
    assert out == "ok\n"
    assert err.startswith("warning:")
    assert "mid-petal" in err


def test_domain_failures_go_to_stderr(tmp_path, capsys):
    code, out, err = run(capsys, "validate", str(tmp_path / "missing.json"))
    assert code == 1
    assert out == ""
    assert err.startswith("error:")

    garbled = tmp_path / "garbled.json"
    garbled.write_text("{not json")
    code, out, err = run(capsys, "compile", str(garbled))
    assert code == 1
    assert out == ""
    assert "not valid JSON" in err


def test_usage_errors_exit_2(capsys):
    assert run(capsys)[0] == 2
    assert run(capsys, "frobnicate", TASK)[0] == 2
    assert run(capsys, "simulate", TASK)[0] == 2  # --seed is required
    code, out, _ = run(capsys, "--help")
    assert code == 0
    assert "usage: madtn" in out


def test_compile_reports_consistency_and_duration(capsys):
    code, out, err = run(capsys, "compile", TASK)
    assert code == 0
    assert err == ""
    assert out.splitlines() == [
        "timepoints: 36",
        "constraints: 51",
        "consistent: yes",
        "task duration: [7.5, 60]",
    ]


def test_compile_flags_an_impossible_deadline(tmp_path, capsys):
    doc = json.loads(packaged_example_path().read_text())
    doc["makespan"] = [0.0, 7.4]  # just under the handoff chain's 7.5
    tight = tmp_path / "tight.json"
    tight.write_text(json.dumps(doc))
    code, out, err = run(capsys, "compile", str(tight))
    assert code == 1
    assert out == ""  # a failed check leaves nothing on the result stream
    assert err.splitlines()[-1] == "consistent: no"


def test_schedule_prints_a_time_per_vertex(capsys):
    code, out, err = run(capsys, "schedule", TASK)
    assert code == 0
    assert err == ""
    lines = out.splitlines()
    assert len(lines) == 36
    times = {}
    for line in lines:
        time_text, name = line.split(maxsplit=1)
        times[name] = float(time_text)
    assert times["Vs"] == 0.0
    assert times["Ve"] == pytest.approx(7.5)
    assert times["Retrieve Object A.Place Object A.end"] == pytest.approx(3.0)
    assert times["Deliver Package.Set Down Package.end"] == pytest.approx(7.5)


def test_schedule_honors_an_ordering_override(capsys):
    detour = (
        "Retrieve Object A,Pack Object A,Prepare and Pack Object B,"
        "Pack Object C,Seal Package,Deliver Package"
    )
    code, out, _ = run(capsys, "schedule", TASK, "--ordering", detour)
    assert code == 0
    line = next(
        l for l in out.splitlines()
        if l.endswith("Prepare and Pack Object B.Wrap Object B.start")
    )
    assert float(line.split()[0]) == pytest.approx(5.0)

    code, _, err = run(capsys, "schedule", TASK, "--ordering", "Pack Object A,ghost")
    assert code == 1
    assert err.startswith("error:")


def test_compile_accounts_for_transition_time(capsys, packaging):
    # Small gaps hide inside existing handoff waits; 2 s does not.
    code, out, _ = run(capsys, "compile", TASK, "--transition", "2")
    assert code == 0
    daisy = packaging.daisy
    graph = solve(compile_to_stn(daisy, transition_lower=2.0))
    lower, upper = graph.bounds(daisy.start, daisy.end)
    assert f"task duration: [{lower:g}, {upper:g}]" in out.splitlines()
    assert lower > 7.5


def test_plan_lists_orders_then_the_assignment(capsys, packaging):
    code, out, err = run(capsys, "plan", TASK)
    assert code == 0
    assert err == ""
    lines = out.splitlines()
    marker = lines.index("assignment:")
    orders = lines[:marker]
    assert len(orders) == 12
    assert len(set(orders)) == 12
    assert orders[0] == (
        "Retrieve Object A, Prepare and Pack Object B, Pack Object A, "
        "Pack Object C, Seal Package, Deliver Package"
    )
    expected = [f"  {p.name}: {p.owner}" for p in packaging.daisy.petals]
    assert lines[marker + 1:] == expected

    code, out, _ = run(capsys, "plan", TASK, "--limit", "4")
    assert code == 0
    assert out.splitlines()[:4] == orders[:4]


def test_plan_without_capabilities_uses_the_declared_owners(tmp_path, capsys):
    doc = json.loads(packaged_example_path().read_text())
    del doc["capabilities"]
    plain = tmp_path / "plain.json"
    plain.write_text(json.dumps(doc))
    code, out, err = run(capsys, "plan", str(plain))
    assert code == 0
    assert err == ""
    lines = out.splitlines()
    assert len(lines) == 12
    assert "assignment:" not in lines


def test_plan_needs_capabilities_when_petals_are_unowned(tmp_path, capsys):
    doc = json.loads(packaged_example_path().read_text())
    del doc["capabilities"]
    doc["petals"][0]["owner"] = None
    orphan = tmp_path / "orphan.json"
    orphan.write_text(json.dumps(doc))
    code, out, err = run(capsys, "plan", str(orphan))
    assert code == 1
    assert out == ""
    assert "no capabilities table" in err
    assert "Retrieve Object A" in err


def test_simulate_writes_deterministic_trace_files(tmp_path, capsys):
    code, out, err = run(
        capsys, "simulate", TASK, "--seed", "5", "--out", str(tmp_path)
    )
    assert code == 0
    assert err == ""
    path = tmp_path / "trace-5.json"
    assert out == f"wrote {path}\n"
    first = path.read_text()
    doc = parse_trace(first)
    assert doc.trace.seed == 5
    assert doc.daisy == "packaging.daisy.json"

    run(capsys, "simulate", TASK, "--seed", "5", "--out", str(tmp_path))
    assert path.read_text() == first  # byte-for-byte reproducible


def test_simulate_seeds_runs_consecutively(tmp_path, capsys):
    code, out, _ = run(
        capsys, "simulate", TASK, "--seed", "7", "--runs", "3",
        "--out", str(tmp_path),
    )
    assert code == 0
    assert len(out.splitlines()) == 3
    seeds = []
    for name in ("trace-7.json", "trace-8.json", "trace-9.json"):
        seeds.append(parse_trace((tmp_path / name).read_text()).trace.seed)
    assert seeds == [7, 8, 9]

    code, out, err = run(capsys, "simulate", TASK, "--seed", "7", "--runs", "0")
    assert code == 2
    assert out == ""
    assert "--runs" in err


def test_simulate_out_dir_env_fallback(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv("MADTN_OUT_DIR", str(tmp_path))
    code, out, _ = run(capsys, "simulate", TASK, "--seed", "1")
    assert code == 0
    assert (tmp_path / "trace-1.json").exists()

    flagged = tmp_path / "flagged"
    flagged.mkdir()
    code, _, _ = run(capsys, "simulate", TASK, "--seed", "1", "--out", str(flagged))
    assert code == 0
    assert (flagged / "trace-1.json").exists()  # --out beats the environment


def test_simulate_reads_a_profiles_file(tmp_path, capsys, packaging):
    profiles_file = tmp_path / "profiles.json"
    profiles_file.write_text(json.dumps({"human": {"reaction_delay": 1.0}}))
    code, _, _ = run(
        capsys, "simulate", TASK, "--seed", "4",
        "--profiles", str(profiles_file), "--out", str(tmp_path),
    )
    assert code == 0
    written = parse_trace((tmp_path / "trace-4.json").read_text()).trace
    expected = simulate(
        packaging.daisy,
        profiles={"human": BehaviorProfile(reaction_delay=1.0)},
        seed=4,
    )
    assert written == expected


def test_analyze_emits_json_or_text(tmp_path, capsys):
    code, _, _ = run(capsys, "simulate", TASK, "--seed", "0", "--out", str(tmp_path))
    assert code == 0
    trace_file = str(tmp_path / "trace-0.json")

    code, out, err = run(capsys, "analyze", TASK, trace_file)
    assert code == 0
    assert err == ""
    report = json.loads(out)
    assert report["agents"] == ["human", "robot"]
    assert report["window"]["makespan"] == pytest.approx(7.5)
    assert len(report["handoffs"]) == 4

    code, out, _ = run(capsys, "analyze", TASK, trace_file, "--output", "text")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "agents: human, robot"
    assert any("makespan 7.5s" in l for l in lines)
    assert any(l.startswith("concurrent activity: 2.4s") for l in lines)
    assert any("Prepare and Pack Object B" in l and "stale" in l for l in lines)

    code, _, _ = run(capsys, "analyze", TASK, trace_file, "--output", "yaml")
    assert code == 2  # not a supported format
