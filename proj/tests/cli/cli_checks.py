"""End-to-end checks of the cscp driver: exit codes and the files it writes."""

import argparse
import csv
import json
import pathlib
import subprocess
import sys
import tempfile


def run(cscp, *args, expect):
    proc = subprocess.run([cscp, *map(str, args)], capture_output=True, text=True)
    if proc.returncode != expect:
        sys.exit(f"{' '.join(map(str, args))}: exit {proc.returncode}, expected {expect}\n"
                 f"stdout:\n{proc.stdout}\nstderr:\n{proc.stderr}")
    return proc


def solve_static(cscp, scenarios, work):
    out = work / "solve"
    run(cscp, "solve", "--mode", "momentum", scenarios / "static_stand.json", "--out", out, expect=0)
    report = json.loads((out / "report.json").read_text())
    assert report["converged"] is True, report["status"]
    assert report["final_eps"] <= 1e-4, report["final_eps"]
    assert report["violations"]["max"] <= 1e-6, report["violations"]
    assert (out / "trajectory.csv").exists()


def check_after_solve(cscp, scenarios, work):
    out = work / "solve"
    scenario = scenarios / "flat_walk.json"
    run(cscp, "solve", scenario, "--out", out, expect=0)
    proc = run(cscp, "check", scenario, out / "trajectory.csv", "--out", out, expect=0)
    report = json.loads(proc.stdout)
    assert report["ok"] is True and report["max"] <= 1e-6, report
    assert report["eps"] <= 1e-4, report
    # A trajectory with an impossible sideways push must be flagged.
    rows = list(csv.reader((out / "trajectory.csv").open()))
    header = rows[0]
    fx = header.index("lf_fx")
    for row in rows[2:]:
        if row[header.index("lf_active")] == "1":
            row[fx] = "1e4"
    bad = out / "bad.csv"
    with bad.open("w", newline="") as f:
        csv.writer(f, lineterminator="\n").writerows(rows)
    proc = run(cscp, "check", scenario, bad, expect=2)
    assert json.loads(proc.stdout)["friction"] > 1.0


def bench_rows(cscp, scenarios, work):
    out = work / "bench"
    run(cscp, "bench", scenarios / "static_stand.json", "--horizons", "20,40,60,80,100", "--out", out, expect=0)
    rows = list(csv.DictReader((out / "bench.csv").open()))
    assert [int(r["horizon"]) for r in rows] == [20, 40, 60, 80, 100], rows
    assert all(r["converged"] == "1" for r in rows), rows


def input_errors(cscp, scenarios, work):
    doc = json.loads((scenarios / "static_stand.json").read_text())
    doc["robot"]["endeffectors"][0]["reach"] = 1.0
    bad = work / "bad.json"
    bad.write_text(json.dumps(doc))
    proc = run(cscp, "solve", bad, expect=1)
    assert "/robot/endeffectors/0/reach" in proc.stderr, proc.stderr
    run(cscp, "solve", work / "missing.json", expect=1)
    run(cscp, "solve", "--mode", "sideways", scenarios / "static_stand.json", expect=1)
    run(cscp, "solve", scenarios / "stepping_stones.json", expect=1)
    run(cscp, "solve", "--torque-limits", scenarios / "static_stand.json", expect=1)


def infeasible(cscp, scenarios, work):
    out = work / "infeasible"
    run(cscp, "solve", "--mode", "momentum", scenarios / "tilted_stairs_mu025.json", "--out", out, expect=3)
    report = json.loads((out / "report.json").read_text())
    assert report["status"] == "infeasible", report["status"]


def plan_stones(cscp, scenarios, work):
    out = work / "plan"
    run(cscp, "plan", scenarios / "stepping_stones.json", "--refine", "--out", out, expect=0)
    plan = json.loads((out / "plan.json").read_text())
    assert plan["status"] == "optimal" and plan["gap"] <= 1e-4, plan["status"]
    assert all(s["surface"] is not None for s in plan["footsteps"])
    refined = json.loads((out / "refined_report.json").read_text())
    assert refined["converged"] is True


def canon_fixed_point(cscp, scenarios, work):
    for path in sorted(scenarios.glob("*.json")):
        if path.name.endswith(".schema.json"):
            continue
        first = run(cscp, "canon", path, expect=0).stdout
        again = work / path.name
        again.write_text(first)
        second = run(cscp, "canon", again, expect=0).stdout
        assert first == second, path.name


CASES = {f.__name__: f for f in (solve_static, check_after_solve, bench_rows, input_errors, infeasible,
                                 plan_stones, canon_fixed_point)}


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("cscp")
    ap.add_argument("scenarios", type=pathlib.Path)
    ap.add_argument("case", choices=sorted(CASES))
    args = ap.parse_args()
    with tempfile.TemporaryDirectory() as tmp:
        CASES[args.case](args.cscp, args.scenarios, pathlib.Path(tmp))


if __name__ == "__main__":
    main()
