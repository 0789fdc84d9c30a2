import json

import pytest

from faultde.cli import main

DE_FLAGS = ["--dv", "3", "--dc", "6", "--alpha", "1e-3", "--n", "2", "--k", "1", "--jobs", "1"]


def _run(argv, capsys=None):
    code = main(argv)
    if capsys is not None:
        return code, capsys.readouterr()
    return code


def test_curve_writes_csv_and_manifest(tmp_path):
    out = tmp_path / "curve.csv"
    argv = [
        "curve", *DE_FLAGS,
        "--eps-start", "0.1", "--eps-end", "0.3", "--eps-step", "0.1",
        "--out", str(out),
    ]
    assert main(argv) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "epsilon,gamma,converged,iterations"
    assert len(lines) == 4

    manifest = json.loads((tmp_path / "curve.csv.manifest.json").read_text())
    assert manifest["subcommand"] == "curve"
    assert manifest["argv"] == argv
    assert str(out) in manifest["outputs"]
    assert "version" in manifest and "timestamp" in manifest


def test_manifest_round_trip_regenerates_identical_csv(tmp_path):
    out = tmp_path / "curve.csv"
    argv = [
        "curve", *DE_FLAGS,
        "--eps-start", "0.2", "--eps-end", "0.4", "--eps-step", "0.05",
        "--out", str(out),
    ]
    assert main(argv) == 0
    first = out.read_bytes()
    recorded = json.loads((tmp_path / "curve.csv.manifest.json").read_text())["argv"]
    assert main(recorded) == 0
    assert out.read_bytes() == first


def test_curve_empty_grid_fails(tmp_path, capsys):
    code, err = _run(
        [
            "curve", *DE_FLAGS,
            "--eps-start", "0.5", "--eps-end", "0.1", "--eps-step", "0.1",
            "--out", str(tmp_path / "x.csv"),
        ],
        capsys,
    )
    assert code == 2
    assert "empty epsilon grid" in err.err


def test_threshold_prints_json(capsys):
    argv = [
        "threshold", *DE_FLAGS,
        "--bracket-lo", "0.2", "--bracket-hi", "0.5", "--tol", "1e-3",
    ]
    code, cap = _run(argv, capsys)
    assert code == 0
    result = json.loads(cap.out)
    assert abs(result["epsilon_star"] - 0.36207) < 2e-3
    assert result["bisection_steps"] > 0


def test_threshold_bad_bracket_exits_nonzero(capsys):
    argv = [
        "threshold", *DE_FLAGS,
        "--bracket-lo", "0.9", "--bracket-hi", "0.95", "--tol", "1e-3",
    ]
    code, cap = _run(argv, capsys)
    assert code == 2
    assert "bracket" in cap.err


def test_threshold_optional_json_file(tmp_path, capsys):
    out = tmp_path / "th.json"
    argv = [
        "threshold", *DE_FLAGS,
        "--bracket-lo", "0.2", "--bracket-hi", "0.5", "--tol", "1e-2",
        "--out", str(out),
    ]
    code, _ = _run(argv, capsys)
    assert code == 0
    assert json.loads(out.read_text())["bracket_high"] <= 0.5


def test_trajectory_record_cap(tmp_path):
    out = tmp_path / "traj.csv"
    argv = [
        "trajectory", *DE_FLAGS,
        "--eps-start", "0.2", "--eps-end", "0.4", "--eps-step", "0.2",
        "--record", "15", "--out", str(out),
    ]
    assert main(argv) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "epsilon,iter,p0,p1"
    iters = [int(line.split(",")[1]) for line in lines[1:]]
    assert max(iters) <= 15


def test_majority_bound_squares_the_curve(tmp_path):
    grid = ["--eps-start", "0.2", "--eps-end", "0.3", "--eps-step", "0.05"]
    curve_out = tmp_path / "curve.csv"
    bound_out = tmp_path / "bound.csv"
    assert main(["curve", *DE_FLAGS, *grid, "--out", str(curve_out)]) == 0
    assert main(["majority-bound", *DE_FLAGS, *grid, "--out", str(bound_out)]) == 0

    curve_lines = curve_out.read_text().splitlines()
    bound_lines = bound_out.read_text().splitlines()
    assert bound_lines[0] == "epsilon,gamma,converged,iterations,bound"
    for cl, bl in zip(curve_lines[1:], bound_lines[1:]):
        gamma = float(cl.split(",")[1])
        bound = float(bl.split(",")[1])
        assert bound == pytest.approx(gamma * gamma, rel=1e-12)
        assert bl.split(",")[4] == "1"


MC_FLAGS = [
    "--num-vars", "120", "--iters", "5", "--trials", "2", "--seed", "7",
    "--epsilon", "0.3",
]


def test_mc_outputs(tmp_path, capsys):
    out = tmp_path / "mc.csv"
    gout = tmp_path / "graph.txt"
    argv = ["mc", *DE_FLAGS, *MC_FLAGS, "--out", str(out), "--graph-out", str(gout)]
    code, cap = _run(argv, capsys)
    assert code == 0
    result = json.loads(cap.out)
    assert len(result["per_trial"]) == 2
    lines = out.read_text().splitlines()
    assert lines[0] == "trial,error_prob"
    assert len(lines) == 3
    header = gout.read_text().splitlines()[0].split()
    assert header == ["120", "60", "3", "6"]


def test_mc_deterministic_given_seed(tmp_path, capsys):
    argv = ["mc", *DE_FLAGS, *MC_FLAGS]
    _, cap1 = _run(argv, capsys)
    _, cap2 = _run(argv, capsys)
    assert cap1.out == cap2.out


def test_mc_seed_env_default(tmp_path, capsys, monkeypatch):
    no_seed = [f for f in MC_FLAGS if f not in ("--seed", "7")]
    monkeypatch.setenv("FAULTDE_SEED", "7")
    _, cap_env = _run(["mc", *DE_FLAGS, *no_seed], capsys)
    _, cap_explicit = _run(["mc", *DE_FLAGS, *MC_FLAGS], capsys)
    assert cap_env.out == cap_explicit.out


def test_compare_table(tmp_path):
    out = tmp_path / "cmp.csv"
    argv = [
        "compare", *DE_FLAGS,
        "--num-vars", "3000", "--iters", "20", "--trials", "4", "--seed", "11",
        "--eps", "0.2", "--eps", "0.3",
        "--out", str(out),
    ]
    assert main(argv) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "epsilon,de_gamma,mc_mean,mc_stddev,flag"
    assert len(lines) == 3
    for line in lines[1:]:
        fields = line.split(",")
        assert fields[4] == "0"  # agreement expected far from threshold


def test_compare_single_trial_blank_stddev(tmp_path):
    out = tmp_path / "cmp1.csv"
    argv = [
        "compare", *DE_FLAGS,
        "--num-vars", "600", "--iters", "5", "--trials", "1", "--seed", "3",
        "--eps", "0.2",
        "--out", str(out),
    ]
    assert main(argv) == 0
    row = out.read_text().splitlines()[1].split(",")
    assert row[3] == ""


def test_plots_render(tmp_path):
    grid = ["--eps-start", "0.2", "--eps-end", "0.3", "--eps-step", "0.1"]
    curve_png = tmp_path / "curve.png"
    traj_png = tmp_path / "traj.png"
    cmp_png = tmp_path / "cmp.png"
    assert main(["curve", *DE_FLAGS, *grid, "--out", str(tmp_path / "c.csv"),
                 "--plot", str(curve_png)]) == 0
    assert main(["trajectory", *DE_FLAGS, *grid, "--record", "10",
                 "--out", str(tmp_path / "t.csv"), "--plot", str(traj_png)]) == 0
    assert main(["compare", *DE_FLAGS, "--num-vars", "120", "--iters", "5",
                 "--trials", "2", "--seed", "7", "--eps", "0.3",
                 "--out", str(tmp_path / "m.csv"), "--plot", str(cmp_png)]) == 0
    for png in (curve_png, traj_png, cmp_png):
        assert png.stat().st_size > 0


def test_plot_listed_in_manifest(tmp_path):
    out = tmp_path / "c.csv"
    png = tmp_path / "c.png"
    argv = [
        "curve", *DE_FLAGS,
        "--eps-start", "0.2", "--eps-end", "0.2", "--eps-step", "0.1",
        "--out", str(out), "--plot", str(png),
    ]
    assert main(argv) == 0
    manifest = json.loads((tmp_path / "c.csv.manifest.json").read_text())
    assert manifest["outputs"] == [str(out), str(png)]
