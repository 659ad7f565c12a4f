"""Command-line interface, config handling, and report files."""

import json
from pathlib import Path

import pytest

from coxdiv.cli import main
from coxdiv.divergence import DivergenceQuery, divergence_function
from coxdiv.errors import ConfigError
from coxdiv.oracles import grid_oracle
from coxdiv.reports import emit_plot, parse_csv, sha256_digest

CONFIGS = Path(__file__).resolve().parent.parent / "configs"


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_divergence_stdout(capsys):
    code, out, _ = run_cli(capsys, "divergence", "--oracle", "grid",
                           "--d", "2", "--n", "4")
    assert code == 0
    rows = parse_csv(out)
    assert rows[0]["n"] == "1"
    last = rows[-1]
    assert (last["n"], last["div_value"], last["status"]) == ("4", "8", "ok")
    assert last["unbounded_flag"] == "0"


def test_pencil_stdout(capsys):
    code, out, err = run_cli(capsys, "pencil", "--system",
                             "infinite-dihedral", "--radius", "6")
    assert code == 0
    assert "C_hat = 1" in err
    rows = parse_csv(out)
    assert [r["min_parallel"] for r in rows] == [str(k) for k in range(1, 7)]


def test_pwt_stdout(capsys):
    code, out, _ = run_cli(capsys, "pwt", "--system", "infinite-dihedral",
                           "--radius", "6")
    assert code == 0
    rows = parse_csv(out)
    assert {r["wall_id"] for r in rows} == {"s0", "s1"}
    assert all(r["Cpp_hat"] == "1" for r in rows)


def test_automaton_stats(capsys):
    code, out, _ = run_cli(capsys, "automaton-stats", "--system", "A2")
    assert code == 0
    row = parse_csv(out)[0]
    assert row["group_order"] == "6"
    assert row["finite_language"] == "1"
    assert row["small_roots"] == "3"


def test_malformed_delta(capsys):
    code, _, err = run_cli(capsys, "divergence", "--oracle", "grid",
                           "--d", "2", "--n", "2", "--delta", "0")
    assert code == 2
    assert "(0, 1)" in err


def test_bad_rational(capsys):
    code, _, err = run_cli(capsys, "divergence", "--oracle", "grid",
                           "--d", "2", "--n", "2", "--delta", "half")
    assert code == 2
    assert "rational" in err


def test_missing_oracle(capsys):
    code, _, err = run_cli(capsys, "divergence", "--n", "2")
    assert code == 2
    assert "oracle" in err


def test_no_command(capsys):
    assert main([]) == 2


def test_budget_exit_code(capsys):
    code, _, err = run_cli(capsys, "divergence", "--oracle", "grid",
                           "--d", "2", "--n", "4", "--max-vertices", "20")
    assert code == 3
    assert "budget" in err


def test_missing_config_file(capsys):
    code, _, err = run_cli(capsys, "divergence", "--config", "/no/such.ini")
    assert code == 2
    assert "config" in err


def test_output_dir_and_manifest(tmp_path, capsys):
    out = tmp_path / "run"
    code, stdout, _ = run_cli(capsys, "divergence", "--oracle", "grid",
                              "--d", "2", "--n", "3",
                              "--output-dir", str(out))
    assert code == 0
    assert stdout == ""  # reports go to files, not stdout
    csv_bytes = (out / "divergence.csv").read_bytes()
    manifest = json.loads((out / "manifest.json").read_text())
    entry = manifest["outputs"]["divergence.csv"]
    assert entry["sha256"] == sha256_digest(csv_bytes)
    assert entry["bytes"] == len(csv_bytes)
    assert manifest["config"]["oracle"] == "grid"
    assert manifest["seed"] is None


def test_config_file_with_override(tmp_path, capsys):
    code, out, _ = run_cli(capsys, "divergence", "--config",
                           str(CONFIGS / "grid-divergence.ini"),
                           "--output-dir", str(tmp_path), "--n", "2")
    assert code == 0
    rows = parse_csv((tmp_path / "divergence.csv").read_text())
    assert len(rows) == 2  # the flag wins over n = 4 in the config
    assert (tmp_path / "divergence.svg").exists()  # plot = true from config


def test_gap_marker_in_svg(tmp_path, capsys):
    # the line Z disconnects, so its chart needs gap markers
    code, _, _ = run_cli(capsys, "divergence", "--oracle", "grid",
                         "--d", "1", "--n", "3", "--plot",
                         "--output-dir", str(tmp_path))
    assert code == 0
    svg = (tmp_path / "divergence.svg").read_text()
    assert 'class="gap-marker"' in svg
    assert "&#8734;" in svg


def test_byte_stable_across_workers(tmp_path, capsys):
    outs = []
    for i, workers in enumerate(("1", "2")):
        d = tmp_path / f"w{workers}"
        code, _, _ = run_cli(capsys, "divergence", "--config",
                             str(CONFIGS / "grid-divergence.ini"),
                             "--workers", workers, "--output-dir", str(d))
        assert code == 0
        outs.append({p.name: p.read_bytes() for p in sorted(d.iterdir())
                     if p.name != "manifest.json"})
    assert outs[0] == outs[1]


def test_system_file_input(tmp_path, capsys):
    path = tmp_path / "sys.cox"
    path.write_text("rank=2\ninf\n")
    code, out, err = run_cli(capsys, "pencil", "--system", str(path),
                             "--radius", "4")
    assert code == 0
    assert "C_hat = 1" in err


def test_sampled_seed_in_manifest(tmp_path, capsys):
    code, _, _ = run_cli(capsys, "divergence", "--oracle", "grid", "--d", "2",
                         "--n", "3", "--mode", "sampled", "--pair-count", "9",
                         "--seed", "17", "--output-dir", str(tmp_path))
    assert code == 0
    manifest = json.loads((tmp_path / "manifest.json").read_text())
    assert manifest["seed"] == 17


def test_parse_csv_round_trip():
    report = divergence_function(grid_oracle(2), DivergenceQuery(n=3))
    from coxdiv.reports import divergence_csv
    text = divergence_csv(report)
    rows = parse_csv(text)
    assert len(rows) == 3
    assert rows[1]["div_value"] == "4"
    assert rows[0]["witness_c"] == "(0,0)"


def test_plot_requires_rows():
    report = divergence_function(grid_oracle(2), DivergenceQuery(n=2))
    empty = type(report)(oracle=report.oracle, query=report.query, rows=(),
                         lower_bound_only=False)
    with pytest.raises(ConfigError):
        emit_plot(empty)
