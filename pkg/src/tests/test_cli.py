import numpy as np
import pandas as pd
import pytest

from src.api.cli_app import build_parser, main
from src.core.errors import (
    AcceptanceCheckError,
    ConfigError,
    DomainError,
    ExpansionError,
    IntegrationError,
    UsageError,
    exit_code_for,
)
from src.core.services.oracle import OracleSweepService
from src.models.records import OracleCheck, OracleReport

TINY_TRAIN = """
train.epochs = 3
train.batch_size = 64
train.data_count = 256
train.hidden_widths = [8]
"""

TINY_EXPAND = """
expander.mode = global
expander.iterations = 1
expander.gamma_base = 0.3
expander.eta = 0.5
expander.adjoint.outer_iters = 1
expander.adjoint.batch_size = 8
expander.adjoint.steps = 4
expander.adjoint.steps_per_round = 1
metrics.samples = 60
metrics.ode_steps = 5
metrics.vendi_samples = 30
"""

TINY_ORACLE = """
oracle.trials = 20
oracle.instances = 5
oracle.iterations = 10
oracle.max_cells = 20
oracle.fixed_point_iterations = 100
"""


def write_config(directory, body: str, name: str = "run.conf") -> str:
    path = directory / name
    path.write_text(f"seed = 1\noutput_dir = {directory / 'out'}\n{body}", encoding="utf-8")
    return str(path)


def test_exit_code_mapping():
    assert exit_code_for(UsageError("x")) == 1
    assert exit_code_for(ConfigError("x", key="seed")) == 1
    assert exit_code_for(FileNotFoundError("x")) == 1
    assert exit_code_for(DomainError("x")) == 2
    assert exit_code_for(IntegrationError("x", 3)) == 2
    assert exit_code_for(RuntimeError("x")) == 2
    assert exit_code_for(AcceptanceCheckError("x")) == 3
    assert exit_code_for(ExpansionError("x", [], cause=UsageError("y"))) == 1


def test_parser_knows_every_subcommand():
    parser = build_parser()
    for command in ("pretrain", "expand", "oracle", "eval", "plot"):
        args = parser.parse_args([command, "--config", "run.conf"])
        assert args.command == command
    assert parser.parse_args(["eval", "--config", "c", "--samples", "s.csv"]).samples == "s.csv"


def test_usage_errors_exit_with_one(tmp_path):
    assert main([]) == 1
    assert main(["expand"]) == 1
    assert main(["train", "--config", "x"]) == 1
    assert main(["pretrain", "--config", str(tmp_path / "absent.conf")]) == 1
    assert main(["pretrain", "--config", write_config(tmp_path, "expander.bogus = 1\n")]) == 1


def test_pretrain_is_deterministic(tmp_path):
    config = write_config(tmp_path, TINY_TRAIN)
    first_dir, second_dir = tmp_path / "a", tmp_path / "b"
    assert main(["pretrain", "--config", config, "--out", str(first_dir)]) == 0
    assert main(["pretrain", "--config", config, "--out", str(second_dir)]) == 0
    for name in ("pretrained.fexp", "data.csv", "train_loss.csv"):
        assert (first_dir / name).read_bytes() == (second_dir / name).read_bytes()


def test_seed_override_changes_data(tmp_path):
    config = write_config(tmp_path, TINY_TRAIN)
    assert main(["pretrain", "--config", config, "--out", str(tmp_path / "a"), "--seed", "1"]) == 0
    assert main(["pretrain", "--config", config, "--out", str(tmp_path / "b"), "--seed", "2"]) == 0
    assert (tmp_path / "a" / "data.csv").read_bytes() != (tmp_path / "b" / "data.csv").read_bytes()


def test_expand_writes_outputs(tmp_path):
    config = write_config(tmp_path, TINY_TRAIN + TINY_EXPAND)
    assert main(["expand", "--config", config]) == 0
    out = tmp_path / "out"
    frame = pd.read_csv(out / "metrics.csv")
    assert list(frame["phase"]) == ["pretrained", "expand", "iterate"]
    assert (out / "checkpoints" / "iterate_001.fexp").is_file()
    assert len(pd.read_csv(out / "samples.csv")) == 60


def test_oracle_success(tmp_path):
    config = write_config(tmp_path, TINY_ORACLE)
    assert main(["oracle", "--config", config]) == 0
    curve = pd.read_csv(tmp_path / "out" / "oracle_curve.csv")
    assert list(curve.columns) == ["k", "gap", "bound"]
    assert len(curve) == 11
    summary = pd.read_csv(tmp_path / "out" / "oracle_summary.csv")
    assert summary["passed"].all()


def test_failed_oracle_check_exits_with_three(tmp_path, monkeypatch):
    failing = OracleReport(checks=[OracleCheck("monotone_gap", False, 1.0)], curve=[])
    monkeypatch.setattr(OracleSweepService, "run", lambda self: failing)
    assert main(["oracle", "--config", write_config(tmp_path, TINY_ORACLE)]) == 3
    assert (tmp_path / "out" / "oracle_summary.csv").is_file()


def test_eval_single_row(tmp_path):
    samples = tmp_path / "one.csv"
    samples.write_text("x1,x2\n0.1,0.2\n", encoding="utf-8")
    config = write_config(tmp_path, "")
    assert main(["eval", "--config", config, "--samples", str(samples)]) == 0
    row = pd.read_csv(tmp_path / "out" / "eval.csv").iloc[0]
    assert row["samples"] == 1
    assert row["vendi"] == pytest.approx(1.0)
    assert np.isnan(row["entropy"])
    assert row["validity"] == pytest.approx(1.0)


def test_eval_reports_filter_acceptance(tmp_path):
    samples = tmp_path / "points.csv"
    samples.write_text("x1,x2\n0.0,0.0\n5.0,5.0\n", encoding="utf-8")
    body = "verifier.kind = box\nverifier.lo = (-1.0, -1.0)\nverifier.hi = (1.0, 1.0)\n"
    assert main(["eval", "--config", write_config(tmp_path, body), "--samples", str(samples)]) == 0
    row = pd.read_csv(tmp_path / "out" / "eval.csv").iloc[0]
    assert row["filter_acceptance"] == pytest.approx(0.5)


def test_eval_on_empty_samples_exits_with_one(tmp_path):
    samples = tmp_path / "empty.csv"
    samples.write_text("x1,x2\n", encoding="utf-8")
    config = write_config(tmp_path, "")
    assert main(["eval", "--config", config, "--samples", str(samples)]) == 1
    assert main(["eval", "--config", config]) == 1


def test_plot_needs_plot_section(tmp_path):
    assert main(["plot", "--config", write_config(tmp_path, "")]) == 1


def test_plot_histogram(tmp_path):
    samples = tmp_path / "points.csv"
    samples.write_text("x1,x2\n0.0,0.0\n1.0,0.5\n2.0,1.0\n", encoding="utf-8")
    body = f'plot.kind = histogram1d\nplot.inputs = ["{samples}"]\nplot.output = hist.svg\nplot.bins = 4\n'
    assert main(["plot", "--config", write_config(tmp_path, body)]) == 0
    assert (tmp_path / "out" / "hist.svg").is_file()
