"""File formats and the command-line interface."""

import json
import subprocess
import sys

import numpy as np

from torspec.cli import load_config, main
from torspec.constructions import lacunary_field, random_band_limited
from torspec.fields import SparseField, delta_field, sparse_to_dense
from torspec.operator import apply, max_coeff_diff
from torspec.serialize import (
    load_dense,
    load_sparse,
    load_symbol,
    save_dense,
    save_sparse,
    save_symbol,
    sparse_to_json,
)
from torspec.symbols import ching_symbol, identity_symbol


def test_sparse_json_round_trip(tmp_path, rng):
    u = random_band_limited(1, 12, 100, rng)
    path = tmp_path / "u.json"
    save_sparse(u, path)
    assert load_sparse(path).coeffs == u.coeffs


def test_sparse_json_is_sorted(rng):
    u = random_band_limited(1, 12, 100, rng)
    obj = sparse_to_json(u)
    xs = [tuple(e["xi"]) for e in obj["coeffs"]]
    assert xs == sorted(xs)


def test_dense_round_trip_complex64(tmp_path, rng):
    u = random_band_limited(2, 6, 5, rng)
    g = sparse_to_dense(u, 16)
    save_dense(g, tmp_path / "g")
    back = load_dense(tmp_path / "g")
    assert back.M == 16 and back.n == 2
    # complex64 interchange loses precision but not structure
    assert float(np.max(np.abs(back.samples - g.samples))) <= 1e-6 * float(
        np.max(np.abs(g.samples))
    )


def test_symbol_round_trip_preserves_action(tmp_path, rng):
    _, a = ching_symbol(0.5, (1,), 4, 9)
    save_symbol(a, tmp_path / "a.json")
    b = load_symbol(tmp_path / "a.json")
    u = lacunary_field((1,), 0.5, 4, 9, delta_field((0,)))
    assert apply(a, u).coeffs == apply(b, u).coeffs


def test_identity_symbol_round_trip(tmp_path):
    save_symbol(identity_symbol(1), tmp_path / "i.json")
    b = load_symbol(tmp_path / "i.json")
    u = SparseField(1, {(2,): 1.5, (-3,): 1j})
    assert apply(b, u).coeffs == u.coeffs


def test_atomic_write_leaves_no_temp_files(tmp_path, rng):
    u = random_band_limited(1, 5, 10, rng)
    for k in range(4):
        save_sparse(u, tmp_path / "u.json")
    leftovers = [p for p in tmp_path.iterdir() if p.name != "u.json"]
    assert leftovers == []


# -- configuration ---------------------------------------------------------------


def test_config_parsing(tmp_path):
    cfg_file = tmp_path / "run.cfg"
    cfg_file.write_text(
        """
# comment
out = my_runs
seed = 42
grid.M = 8192
profile.main = {"r": 1.2, "R": 2.1, "kind": "exp"}
flip.d = 0.5
flip.J = 14
unclosable.n_list = [5, 6]
"""
    )
    cfg = load_config(str(cfg_file))
    assert str(cfg.out) == "my_runs"
    assert cfg.seed == 42
    assert cfg.grid_m == 8192
    assert cfg.profile("main").r == 1.2
    assert cfg.overrides["flip"] == {"d": 0.5, "J": 14}
    assert cfg.overrides["unclosable"]["n_list"] == [5, 6]


def test_env_var_sets_output_root(tmp_path, monkeypatch):
    monkeypatch.setenv("TORSPEC_OUT", str(tmp_path / "envroot"))
    cfg = load_config(None)
    assert cfg.out == tmp_path / "envroot"


def test_bad_profile_rejected_before_running(tmp_path):
    cfg_file = tmp_path / "bad.cfg"
    cfg_file.write_text('profile.main = {"r": 3.0, "R": 1.0}\n')
    code = main(["suite", "--config", str(cfg_file), "--out", str(tmp_path / "o")])
    assert code == 2


# -- CLI behaviour ------------------------------------------------------------------


def test_run_flip_exits_zero(tmp_path):
    code = main(
        ["run", "flip", "--d", "0.5", "--j0", "5", "--J", "12", "--out", str(tmp_path)]
    )
    assert code == 0
    report = json.loads((tmp_path / "flip" / "report.json").read_text())
    assert report["name"] == "flip"
    assert all(a["pass"] for a in report["assertions"])


def test_run_unknown_experiment_exits_two(tmp_path):
    assert main(["run", "unknown-name", "--out", str(tmp_path)]) == 2


def test_run_unclosable_with_list_flag(tmp_path):
    code = main(
        ["run", "unclosable", "--n-list", "5,6", "--d", "0", "--out", str(tmp_path)]
    )
    assert code == 0


def test_resource_error_exits_three(tmp_path):
    code = main(["run", "unclosable", "--n-list", "8", "--out", str(tmp_path)])
    assert code == 3


def test_bad_parameter_exits_two(tmp_path):
    code = main(["run", "weierstrass", "--trials", "5", "--out", str(tmp_path)])
    assert code == 2


def test_partition_check_subcommand(tmp_path):
    code = main(["partition-check", "--m", "6", "--n-samples", "500", "--out", str(tmp_path)])
    assert code == 0


def test_apply_subcommand_round_trip(tmp_path, rng):
    u = random_band_limited(1, 8, 50, rng)
    save_sparse(u, tmp_path / "u.json")
    save_symbol(identity_symbol(1), tmp_path / "id.json")
    code = main(
        [
            "apply",
            "--symbol",
            str(tmp_path / "id.json"),
            "--field",
            str(tmp_path / "u.json"),
            "--out-field",
            str(tmp_path / "out.json"),
        ]
    )
    assert code == 0
    assert load_sparse(tmp_path / "out.json").coeffs == u.coeffs


def test_apply_flip_through_files(tmp_path):
    _, a2 = ching_symbol(0.5, (2,), 5, 10)
    save_symbol(a2, tmp_path / "a2.json")
    w = lacunary_field((1,), 0.5, 5, 10, delta_field((0,)))
    save_sparse(w, tmp_path / "w.json")
    code = main(
        [
            "apply",
            "--symbol",
            str(tmp_path / "a2.json"),
            "--field",
            str(tmp_path / "w.json"),
            "--out-field",
            str(tmp_path / "out.json"),
        ]
    )
    assert code == 0
    out = load_sparse(tmp_path / "out.json")
    expected = lacunary_field((-1,), 0.0, 5, 10, delta_field((0,)))
    assert max_coeff_diff(out, expected) <= 1e-12


def test_apply_modulate_zero_empties_high_frequencies(tmp_path):
    save_symbol(identity_symbol(1), tmp_path / "id.json")
    save_sparse(SparseField(1, {(100,): 1.0}), tmp_path / "hf.json")
    code = main(
        [
            "apply",
            "--symbol",
            str(tmp_path / "id.json"),
            "--field",
            str(tmp_path / "hf.json"),
            "--out-field",
            str(tmp_path / "out.json"),
            "--modulate",
            "0",
        ]
    )
    assert code == 0
    assert len(load_sparse(tmp_path / "out.json")) == 0


def test_apply_parse_failure_exits_two(tmp_path):
    (tmp_path / "broken.json").write_text("{not json")
    save_sparse(delta_field((0,)), tmp_path / "u.json")
    code = main(
        [
            "apply",
            "--symbol",
            str(tmp_path / "broken.json"),
            "--field",
            str(tmp_path / "u.json"),
            "--out-field",
            str(tmp_path / "o.json"),
        ]
    )
    assert code == 2


def test_emit_plots_writes_scripts(tmp_path):
    code = main(
        ["run", "weierstrass", "--d", "0.5", "--J", "6", "--M", "4096",
         "--out", str(tmp_path), "--emit-plots"]
    )
    assert code == 0
    assert (tmp_path / "weierstrass" / "plot_weierstrass.py").exists()


def test_console_entry_point_runs():
    proc = subprocess.run(
        [sys.executable, "-m", "torspec.cli", "run", "support", "--trials", "20",
         "--out", "/tmp/torspec_cli_entry"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert "PASS" in proc.stdout


def test_assertion_failure_exits_one(tmp_path, monkeypatch):
    import torspec.cli as cli
    from torspec.experiments import ExperimentReport

    def failing(outdir=None):
        report = ExperimentReport("stub", {})
        report.check("always-fails", 1.0, 0.0)
        return report

    monkeypatch.setitem(cli.REGISTRY, "stub", failing)
    assert cli.main(["run", "stub", "--out", str(tmp_path)]) == 1
