import csv
import io
import json

import pytest

from capvrp.cli import main


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def make_instance_file(tmp_path, capsys, n=9, seed=3):
    path = tmp_path / "inst.tsp"
    code, _, _ = run_cli(
        capsys, "gen", "--n", str(n), "--seed", str(seed), "--out", str(path)
    )
    assert code == 0
    return path


def solve_args(path, *extra):
    return (
        "solve", str(path), "--capacity", "3", "--pop-size", "8",
        "--iterations", "12", "--sa-steps", "15", "--seed", "5", *extra,
    )


def test_solve_emits_replayable_json(tmp_path, capsys):
    path = make_instance_file(tmp_path, capsys)
    code, out, _ = run_cli(capsys, *solve_args(path))
    assert code == 0
    record = json.loads(out)
    assert record["command"] == "solve"
    assert record["instance"] == "random-n9-s3"
    assert record["params"]["seed"] == 5
    assert record["params"]["capacity"] == 3
    assert record["iterations_used"] == 12
    assert sorted(record["perm"] if "perm" in record else record["best_perm"]) == list(range(1, 9))


def test_solve_same_seed_identical_modulo_wall_time(tmp_path, capsys):
    path = make_instance_file(tmp_path, capsys)
    _, out1, _ = run_cli(capsys, *solve_args(path))
    _, out2, _ = run_cli(capsys, *solve_args(path))
    a, b = json.loads(out1), json.loads(out2)
    a.pop("wall_time")
    b.pop("wall_time")
    assert json.dumps(a, sort_keys=True) == json.dumps(b, sort_keys=True)


def test_solve_history_csv(tmp_path, capsys):
    path = make_instance_file(tmp_path, capsys)
    hist = tmp_path / "hist.csv"
    code, _, _ = run_cli(capsys, *solve_args(path, "--history", str(hist)))
    assert code == 0
    rows = list(csv.DictReader(hist.open()))
    assert len(rows) == 12
    assert rows[0]["iteration"] == "1"
    weights = [int(r["best_weight"]) for r in rows]
    assert all(a >= b for a, b in zip(weights, weights[1:]))


def test_exact_flag_dispatches(tmp_path, capsys):
    path = make_instance_file(tmp_path, capsys)  # 8 clients, even
    code, out, _ = run_cli(
        capsys, "solve", str(path), "--capacity", "2", "--exact", "--optimum", "1"
    )
    assert code == 0
    record = json.loads(out)
    assert record["params"] == {"capacity": 2, "exact": True}
    assert record["iterations_used"] == 0
    assert len(record["cycles"]) == 4
    assert record["prd_value"] == pytest.approx(100.0 * (record["weight"] - 1))


def test_exact_flag_requires_capacity_two(tmp_path, capsys):
    path = make_instance_file(tmp_path, capsys)
    with pytest.raises(SystemExit):
        main(["solve", str(path), "--capacity", "3", "--exact"])


def test_exact2_matches_exact_solve(tmp_path, capsys):
    path = make_instance_file(tmp_path, capsys)
    _, out1, _ = run_cli(capsys, "exact2", str(path))
    _, out2, _ = run_cli(capsys, "solve", str(path), "--capacity", "2", "--exact")
    assert json.loads(out1)["weight"] == json.loads(out2)["weight"]


def test_oracle_lower_bounds_solver(tmp_path, capsys):
    path = make_instance_file(tmp_path, capsys)
    _, oracle_out, _ = run_cli(capsys, "oracle", str(path), "--capacity", "3")
    _, solve_out, _ = run_cli(capsys, *solve_args(path))
    assert json.loads(oracle_out)["weight"] <= json.loads(solve_out)["weight"]


def test_oracle_plain_agrees(tmp_path, capsys):
    path = make_instance_file(tmp_path, capsys, n=7)
    _, a, _ = run_cli(capsys, "oracle", str(path), "--capacity", "2")
    _, b, _ = run_cli(capsys, "oracle", str(path), "--capacity", "2", "--plain")
    assert json.loads(a)["weight"] == json.loads(b)["weight"]


def test_gen_solve_random_equivalence(tmp_path, capsys):
    # Solving the generated file equals solving --random with the same seed.
    path = make_instance_file(tmp_path, capsys, n=9, seed=3)
    _, from_file, _ = run_cli(capsys, *solve_args(path))
    _, from_flag, _ = run_cli(
        capsys,
        "solve", "--random", "9", "--instance-seed", "3", "--capacity", "3",
        "--pop-size", "8", "--iterations", "12", "--sa-steps", "15", "--seed", "5",
    )
    a, b = json.loads(from_file), json.loads(from_flag)
    assert a["weight"] == b["weight"]
    assert a["best_perm"] == b["best_perm"]


def test_bench_crossover_csv_schema(capsys):
    code, out, _ = run_cli(
        capsys,
        "bench-crossover", "--sizes", "5", "--seeds", "1", "--pop-size", "8",
        "--iterations", "6", "--sa-steps", "8",
    )
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert [r["operator"] for r in rows] == ["cx", "ox", "pmx"]
    assert all(r["n"] == "5" for r in rows)
    for r in rows:
        # Censored cells sit at budget+1 and are counted explicitly.
        assert 0 <= int(r["censored"]) <= 1
        assert float(r["median_iterations"]) <= 7


def test_bench_mutation_csv_schema(capsys):
    code, out, _ = run_cli(
        capsys,
        "bench-mutation", "--values", "0.0,0.5", "--seeds", "1", "--size", "8",
        "--pop-size", "6", "--iterations", "4", "--sa-steps", "6",
    )
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 8
    assert {r["pr_mut"] for r in rows} == {"0.0", "0.5"}


def test_tsp_prd_missing_optimum_warns(tmp_path, capsys):
    make_instance_file(tmp_path, capsys)
    optima = tmp_path / "optima.csv"
    optima.write_text("# none match\nother,100\n")
    code, out, err = run_cli(
        capsys,
        "tsp-prd", "--instances", str(tmp_path), "--optima", str(optima),
        "--budget", "0.5", "--islands", "1", "--pop-size", "6",
    )
    assert code == 0
    assert "no known optimum" in err
    rows = list(csv.DictReader(io.StringIO(out)))
    assert rows[0]["prd"] == ""
    assert rows[0]["optimum"] == ""


def test_tsp_prd_formats_two_decimals(tmp_path, capsys):
    path = make_instance_file(tmp_path, capsys)
    _, oracle_out, _ = run_cli(capsys, "oracle", str(path), "--capacity", "8")
    optimum = json.loads(oracle_out)["weight"]
    optima = tmp_path / "optima.csv"
    optima.write_text(f"random-n9-s3,{optimum}\n")
    code, out, err = run_cli(
        capsys,
        "tsp-prd", "--instances", str(tmp_path), "--optima", str(optima),
        "--budget", "5", "--islands", "1", "--pop-size", "8",
    )
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert rows[0]["prd"] == "0.00"  # tiny instance reaches its optimum
    assert err == ""


def test_speedup_curve_values(capsys):
    code, out, _ = run_cli(capsys, "speedup-curve", "--g-max", "4")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert [r["g"] for r in rows] == ["1", "2", "3", "4"]
    assert float(rows[0]["s_theoretical"]) == 1.0
    assert float(rows[3]["s_theoretical"]) == pytest.approx(50 / 13)


def test_speedup_measured_smoke(capsys):
    code, out, _ = run_cli(
        capsys,
        "speedup", "--random", "10", "--g-max", "2", "--iterations", "4",
        "--repeats", "1", "--pop-size", "6", "--sa-steps", "6", "--backend", "serial",
    )
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert [r["g"] for r in rows] == ["1", "2"]
    assert float(rows[0]["s_measured"]) > 0


def test_out_dir_env_resolves_relative_paths(tmp_out_env, capsys):
    code, out, _ = run_cli(
        capsys, "gen", "--n", "5", "--seed", "1", "--out", "sub/inst.tsp"
    )
    assert code == 0
    assert (tmp_out_env / "sub" / "inst.tsp").exists()
    assert out == ""


def test_missing_file_exits_nonzero(capsys):
    code, _, err = run_cli(capsys, "exact2", "/nonexistent/file.tsp")
    assert code == 1
    assert "error:" in err


def test_both_sources_rejected(tmp_path, capsys):
    path = make_instance_file(tmp_path, capsys)
    with pytest.raises(SystemExit):
        main(["oracle", str(path), "--random", "5", "--capacity", "2"])


def test_bad_subcommand_usage_exits_two():
    with pytest.raises(SystemExit) as exc:
        main(["solve", "--capacity"])
    assert exc.value.code == 2
