import csv
import io
import math

import pytest

from zenotherm import analytic, cli


def run_cli(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def rows(text):
    return list(csv.reader(io.StringIO(text)))


def test_parse_number_pi_forms():
    assert cli.parse_number("pi/6") == math.pi / 6
    assert cli.parse_number("3pi/16") == 3 * math.pi / 16
    assert cli.parse_number("3*pi/16") == 3 * math.pi / 16
    assert cli.parse_number("pi") == math.pi
    assert cli.parse_number("0.25") == 0.25
    with pytest.raises(cli.ConfigError):
        cli.parse_number("tau/2")
    assert cli.parse_int_list("0:3,7") == [0, 1, 2, 3, 7]


def test_simulate_example(capsys):
    code, out, err = run_cli(capsys, "simulate", "--theta", "pi/6", "--p", "0.9", "--tau", "1",
                             "--delta", "0.1", "--steps", "50", "--bit", "0")
    assert code == 0
    table = rows(out)
    assert table[0] == ["step", "time", "a_simulated", "a_analytic", "abs_error"]
    assert len(table) == 52
    assert max(float(r[4]) for r in table[1:]) <= 1e-10
    assert err.startswith("max_abs_error=")


def test_simulate_bit_one_starts_empty(capsys):
    code, out, _ = run_cli(capsys, "simulate", "--bit", "1", "--steps", "3")
    assert code == 0
    assert float(rows(out)[1][2]) == 0.0


def test_simulate_t_flag(capsys):
    code, out, _ = run_cli(capsys, "simulate", "--delta", "0.25", "--t", "2")
    assert code == 0 and len(rows(out)) == 10
    code, _, err = run_cli(capsys, "simulate", "--delta", "0.3", "--t", "1")
    assert code == 2 and "multiple" in err


@pytest.mark.parametrize(
    "argv",
    [
        ["simulate", "--steps", "0"],
        ["simulate", "--p", "0.2"],
        ["simulate", "--theta", "2"],
        ["simulate", "--bit", "3"],
        ["analytic", "--delta", "-1"],
        ["figures", "--which", "5"],
        ["validate", "--samples", "0"],
        ["simulate", "--precision", "30"],
        ["simulate", "--steps", "abc"],
    ],
)
def test_config_errors_exit_2_with_one_line(capsys, argv):
    code, _, err = run_cli(capsys, *argv)
    assert code == 2
    assert len(err.strip().splitlines()) == 1


def test_unknown_subcommand_is_usage_error(capsys):
    code, _, _ = run_cli(capsys, "plot")
    assert code == 2


def test_analytic_columns(capsys):
    code, out, _ = run_cli(capsys, "analytic", "--theta", "0", "--delta", "0.5", "--steps", "4")
    assert code == 0
    table = rows(out)
    assert table[0][:3] == ["step", "time", "a_general"]
    for r in table[1:]:
        # pointer basis: all four success probabilities agree
        vals = [float(x) for x in r[6:]]
        assert max(vals) - min(vals) <= 1e-14


def test_config_file_and_flag_precedence(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# recipe\ntheta = pi/4\ndelta = 0.5  # comment\nsteps = 2\nbit = 1\n", encoding="utf-8")
    code, out, _ = run_cli(capsys, "analytic", "--config", str(cfg))
    assert code == 0
    table = rows(out)
    assert len(table) == 4
    assert float(table[1][2]) == 0.0
    assert float(table[2][2]) == pytest.approx(0.5 - 0.5 * math.exp(-0.25), abs=1e-15)
    code, out, _ = run_cli(capsys, "analytic", "--config", str(cfg), "--steps", "5")
    assert len(rows(out)) == 7


def test_bad_config_file(tmp_path, capsys):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("colour = blue\n", encoding="utf-8")
    code, _, err = run_cli(capsys, "simulate", "--config", str(cfg))
    assert code == 2 and "unknown key" in err
    code, _, _ = run_cli(capsys, "simulate", "--config", str(tmp_path / "missing.cfg"))
    assert code == 2


def test_csv_round_trip_at_17_digits():
    values = [math.pi / 7, 1 / 3, 0.1 + 0.2, 1e-300, 5e-324, 0.82]
    t = cli.CsvTable(["x"])
    for v in values:
        t.add(v)
    parsed = [float(r[0]) for r in rows(t.render())[1:]]
    assert parsed == values


def test_csv_rejects_ragged_rows():
    t = cli.CsvTable(["a", "b"])
    with pytest.raises(ValueError):
        t.add(1)


def test_figures_written(tmp_path, capsys):
    code, _, _ = run_cli(capsys, "figures", "--out", str(tmp_path))
    assert code == 0
    names = sorted(p.name for p in tmp_path.iterdir())
    assert names == ["figure1.csv", "figure2.csv", "figure3.csv", "figure4.csv", "figure4_general.csv"]
    fig1 = rows((tmp_path / "figure1.csv").read_text())
    assert fig1[0] == ["t", "a_zeno_a0_1", "a_zeno_a0_0"]
    assert fig1[1][1:] == ["1", "0"]


def test_figure_selection(tmp_path, capsys):
    code, _, _ = run_cli(capsys, "figures", "--which", "4", "--out", str(tmp_path))
    assert code == 0
    assert sorted(p.name for p in tmp_path.iterdir()) == ["figure4.csv", "figure4_general.csv"]


def test_figure3_coincides_in_pointer_basis():
    # figure recipe at theta = 0: zeno and free columns agree
    t = cli._time_grid(5.0, 1.0)
    for a0 in (0, 1):
        z = analytic.a_zeno(t, 0.0, 0.9, 1.0, a0)
        f = analytic.a_free(t, 0.0, 0.9, 1.0, a0)
        assert max(abs(z - f)) <= 1e-12


def test_figure4_general_only_at_commensurate_times():
    table = cli.figure_tables()["figure4_general.csv"]
    for theta, delta, step, t, _ in table.rows:
        assert t == step * delta
        assert theta in cli.FIG4_THETAS


def test_figure4_coincides_at_diagonal_angle():
    t = cli._time_grid(5.0, 1.0)
    z = analytic.p_suc_zeno(t, math.pi / 4)
    f = analytic.p_suc_free(t, math.pi / 4)
    assert max(abs(z - f)) <= 1e-12


def test_sweep_default_grid_within_bounds(capsys):
    code, out, _ = run_cli(capsys, "sweep")
    assert code == 0
    table = rows(out)
    assert table[0] == ["theta", "delta", "t", "p_suc_general", "p_suc_zeno", "p_suc_free", "within_bounds"]
    assert all(r[-1] == "1" for r in table[1:])
    coincide = [r for r in table[1:] if float(r[0]) in (0.0, math.pi / 4)]
    assert coincide
    for r in coincide:
        vals = [float(x) for x in r[3:6]]
        assert max(vals) - min(vals) <= 1e-12


def test_sweep_empty_grid_is_header_only(capsys):
    code, out, _ = run_cli(capsys, "sweep", "--thetas", "")
    assert code == 0
    assert out == "theta,delta,t,p_suc_general,p_suc_zeno,p_suc_free,within_bounds\n"


def test_sweep_grid_limit(capsys):
    code, _, err = run_cli(capsys, "sweep", "--deltas", ",".join(["0.1"] * 1000), "--steps-list", "0:1000")
    assert code == 2 and "limit" in err


def test_validate_report(capsys, tmp_path):
    code, out, _ = run_cli(capsys, "validate", "--seed", "7", "--samples", "20")
    assert code == 0
    lines = out.strip().splitlines()
    assert all(l.startswith("PASS") for l in lines[:-1])
    assert lines[-1].startswith("SUMMARY seed=7 samples=20")
    semigroup = next(l for l in lines if "semigroup" in l)
    assert float(semigroup.split("worst=")[1].split()[0]) <= 1e-12
    target = tmp_path / "report.txt"
    assert run_cli(capsys, "validate", "--seed", "7", "--samples", "20", "--out", str(target))[0] == 0
    assert target.read_text() == out


def test_validate_failure_exit_code(monkeypatch, capsys):
    from zenotherm import validate

    def broken(rng, samples):
        return validate._result("always_fails", 1.0, 0.0)

    monkeypatch.setattr(validate, "CHECKS", [broken])
    code, out, _ = run_cli(capsys, "validate", "--samples", "1")
    assert code == 1
    assert out.startswith("FAIL always_fails")
