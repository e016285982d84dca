"""CLI parsing, config precedence, deterministic outputs, report schema,
figure generation and exit codes."""

import json

import pytest

from hypmax import cli
from hypmax.report import ExperimentReport


def run_cli(argv):
    return cli.run(cli.resolve_config(argv))


# ----------------------------------------------------------------- parsing

def test_parse_grid():
    window, res = cli.parse_grid("-6:6:-2.5:2.5:100:60")
    assert window == (-6.0, 6.0, -2.5, 2.5) and res == (100, 60)
    with pytest.raises(ValueError):
        cli.parse_grid("1:2:3")


def test_parse_alpha_ladder():
    vals, m_range = cli.parse_alpha_ladder("2^-3..2^-5")
    assert vals == [2.0**-3, 2.0**-4, 2.0**-5]
    assert list(m_range) == [3, 4, 5]
    vals, m_range = cli.parse_alpha_ladder("0.5,0.25")
    assert vals == [0.5, 0.25] and m_range is None


def test_config_precedence(tmp_path):
    cfg_file = tmp_path / "run.cfg"
    cfg_file.write_text("R=2\nseed=7\n")
    cfg = cli.resolve_config(["areas", "--config", str(cfg_file), "--R", "3"])
    assert cfg.R == "3"  # flag beats config
    assert int(cfg.seed) == 7  # config beats default
    assert cfg.space == "h2"  # default


# ------------------------------------------------------------ determinism

def test_byte_identical_output():
    status1, body1 = run_cli(["vitali", "--seed", "5", "--samples", "20000", "--count", "10"])
    status2, body2 = run_cli(["vitali", "--seed", "5", "--samples", "20000", "--count", "10"])
    assert status1 == status2 == 0
    assert body1 == body2


# ----------------------------------------------------------------- schema

def test_json_schema():
    status, body = run_cli(["areas", "--R", "1,2"])
    assert status == 0
    doc = json.loads(body)
    assert set(doc) == {"meta", "tables", "assertions"}
    assert {"seed", "version", "config"} <= set(doc["meta"])
    for t in doc["tables"]:
        assert {"name", "columns", "rows"} == set(t)
    for a in doc["assertions"]:
        assert {"name", "bound", "observed", "pass"} == set(a)


def test_csv_levelset_columns():
    status, body = run_cli(
        ["levelset", "--alpha-ladder", "2^-1..2^-4", "--grid=-3:3:-1.5:1.5:40:24", "--format", "csv"]
    )
    assert status == 0
    assert "alpha,measure,rhs_bound,pass" in body


# ------------------------------------------------------------- subcommands

@pytest.mark.parametrize(
    "argv",
    [
        ["validate", "--space", "dr-heisenberg:1"],
        ["validate", "--space", "dr-abelian:2"],
        ["areas", "--R", "1,2,3"],
        ["volume", "--samples", "40000", "--R", "1"],
        ["volume", "--space", "dr-abelian:1", "--samples", "40000"],
        ["maxfn", "--grid=-3:3:-1.5:1.5:40:24", "--family", "half_ball"],
        ["overlap", "--count", "20", "--seed", "3"],
        ["vitali", "--count", "15", "--samples", "20000"],
        ["eta", "--alpha-ladder", "2^-6..2^-12"],
        ["pack", "--levels", "3", "--samples", "60000"],
    ],
)
def test_subcommands_pass(argv):
    status, body = run_cli(argv)
    assert status == 0, body


def test_exit_code_on_failure(monkeypatch):
    def failing(cfg):
        rep = ExperimentReport("stub", meta={})
        rep.check("always_fails", 1.0, 2.0, False)
        return rep

    monkeypatch.setitem(cli.COMMANDS, "areas", failing)
    status, _body = run_cli(["areas"])
    assert status == 1


def test_out_file_and_env_dir(tmp_path, monkeypatch, capsys):
    out = tmp_path / "areas.json"
    status, _ = run_cli(["areas", "--out", str(out)])
    assert status == 0 and json.loads(out.read_text())["assertions"]
    monkeypatch.setenv("HYPMAX_OUT", str(tmp_path / "env"))
    status, _ = run_cli(["areas"])
    assert status == 0
    assert (tmp_path / "env" / "areas.json").exists()


# ----------------------------------------------------------------- figures

def test_figure_rectangle_labels():
    status, svg = run_cli(["figures", "--figure", "rectangle", "--z", "1.5,2.0", "--R", "1"])
    assert status == 0
    assert svg.startswith("<svg")
    for label in ("Re z - Im z", "Re z + Im z", "e^-R Im z", "Q_R(z)"):
        assert label in svg


def test_figure_halfballs_level0_draws_two():
    status, svg = run_cli(["figures", "--figure", "halfballs", "--level", "0"])
    assert status == 0
    assert svg.count("<polygon") == 2


def test_figure_empty_params_minimal():
    from hypmax import figures

    svg = figures.emit_figure("")
    assert svg.startswith("<svg") and "<line" in svg
    with pytest.raises(ValueError):
        figures.emit_figure("nope")


def test_figure_deterministic():
    a = cli.cmd_figures(cli.resolve_config(["figures", "--figure", "packing", "--levels", "2"]))
    b = cli.cmd_figures(cli.resolve_config(["figures", "--figure", "packing", "--levels", "2"]))
    assert a == b
