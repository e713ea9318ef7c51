"""End-to-end tests for the command line."""

import json

import pytest

from tarstab.cli import EXIT_INCONCLUSIVE, EXIT_NEGATIVE, EXIT_OK, EXIT_USAGE, main

SMALL_RUN = {"n_steps": 20_000, "burn_in": 1_000, "replicates": 4}
SMALL_GROWTH = {
    "n_max": 20,
    "growth_replicates": 4,
    "particles": 500,
    "grid_size": 16,
    "stationary_starts": 0,
}
SMALL_MOMENTS = {**SMALL_GROWTH, "particles": 1000, "inner_samples": 200, "probes": 8}
SMALL_KAPPA = {**SMALL_GROWTH, "particles": 2000, "bracket": [1.0, 3.0]}
SMALL_CROSSCHECK = {
    **SMALL_RUN,
    "growth_replicates": 4,
    "matrix_steps": 10_000,
    "radii": [1.0, 1e8],
    "horizons": [20],
    "drift_replicates": 200,
}


def arch1(b, **regime):
    return {"p": 1, "regimes": [{"pattern": [], "bvec": [b], **regime}]}


@pytest.fixture
def write_config(tmp_path):
    def write(model, analysis=None, seed=11, errors=None):
        doc = {"seed": seed, "model": model, "analysis": analysis or {}}
        if errors is not None:
            doc["errors"] = errors
        path = tmp_path / "run.json"
        path.write_text(json.dumps(doc))
        return str(path)

    return write


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, (json.loads(out) if out else None)


class TestCheck:
    def test_passes(self, capsys, write_config):
        code, report = run(capsys, "check", "--config", write_config(arch1(0.5)))
        assert code == EXIT_OK
        assert report["command"] == "check"
        assert report["seed"] == 11

    def test_degenerate_volatility_fails(self, capsys, write_config):
        code, _ = run(capsys, "check", "--config", write_config(arch1(0.0, b0=0.0)))
        assert code == EXIT_NEGATIVE


class TestUsage:
    def test_missing_regime(self, capsys, write_config):
        model = {"p": 1, "hyperplanes": [[1]], "regimes": [{"pattern": [1], "bvec": [0.5]}]}
        code, report = run(capsys, "check", "--config", write_config(model))
        assert code == EXIT_USAGE
        assert report is None

    def test_unknown_command(self, capsys, write_config):
        assert main(["stabilize", "--config", write_config(arch1(0.5))]) == EXIT_USAGE

    def test_missing_config_file(self, capsys, tmp_path):
        assert main(["check", "--config", str(tmp_path / "nope.json")]) == EXIT_USAGE

    def test_bad_thread_count(self, capsys, write_config):
        assert main(["check", "--config", write_config(arch1(0.5)), "--threads", "0"]) == EXIT_USAGE


class TestOrder1:
    def test_transient(self, capsys, write_config):
        code, report = run(capsys, "order1", "--config", write_config(arch1(2.0)))
        assert code == EXIT_NEGATIVE
        assert report["verdict"] == "transient"
        assert report["result"]["log_rho"] == pytest.approx(0.057966, abs=1e-6)

    def test_threshold_model(self, capsys, write_config):
        model = {
            "p": 1,
            "hyperplanes": [[1]],
            "regimes": [
                {"pattern": [-1], "avec": [0.3], "bvec": [0.5]},
                {"pattern": [1], "avec": [-0.2], "bvec": [0.7]},
            ],
        }
        code, report = run(capsys, "order1", "--config", write_config(model))
        assert code == EXIT_OK
        assert report["verdict"] == "geometrically-ergodic"

    def test_needs_order_one(self, capsys, write_config):
        model = {"p": 2, "regimes": [{"pattern": [], "bvec": [0.5, 0.5]}]}
        code, _ = run(capsys, "order1", "--config", write_config(model))
        assert code == EXIT_USAGE


class TestLyapunov:
    def test_ergodic_arch1(self, capsys, write_config):
        code, report = run(capsys, "lyapunov", "--config", write_config(arch1(1.0), SMALL_RUN))
        assert code == EXIT_OK
        assert report["result"]["verdict"] == "geometrically-ergodic"
        assert report["result"]["log_rho"] == pytest.approx(-0.635, abs=0.05)
        diagnostics = report["result"]["diagnostics"]
        assert diagnostics["stationarity"]["identity_gap"] <= 1e-12
        assert diagnostics["near_equilibrium"]["max_abs_deviation"] < 0.1

    def test_refuses_failing_assumptions(self, capsys, write_config):
        config = write_config(arch1(0.0, b0=0.0), SMALL_RUN)
        code, report = run(capsys, "lyapunov", "--config", config)
        assert code == EXIT_NEGATIVE
        assert "--force" in report["error"]["message"]
        assert report["result"] is None

    def test_reruns_are_identical(self, capsys, write_config):
        config = write_config(arch1(0.8), SMALL_RUN)
        main(["lyapunov", "--config", config])
        first = capsys.readouterr().out
        main(["lyapunov", "--config", config, "--threads", "2"])
        assert capsys.readouterr().out == first

    def test_seed_override(self, capsys, write_config):
        code, report = run(
            capsys, "lyapunov", "--config", write_config(arch1(1.0), SMALL_RUN), "--seed", "99"
        )
        assert report["seed"] == 99
        assert report["config"]["seed"] == 99


class TestMoments:
    def test_finite_second_moment(self, capsys, write_config):
        code, report = run(capsys, "moments", "--config", write_config(arch1(0.5), SMALL_MOMENTS))
        assert code == EXIT_OK
        result = report["result"]
        assert result["verdict"] == "finite-r-moment"
        assert result["rate"] == pytest.approx(0.25, abs=0.05)
        assert "order1" in result["closed_form"]
        assert "check" in result["drift_condition"]

    def test_infinite_second_moment(self, capsys, write_config):
        code, report = run(capsys, "moments", "--config", write_config(arch1(1.2), SMALL_MOMENTS))
        assert code == EXIT_NEGATIVE
        assert report["result"]["verdict"] == "infinite-r-moment"


class TestKappa:
    def test_unit_coefficient(self, capsys, write_config):
        code, report = run(capsys, "kappa", "--config", write_config(arch1(1.0), SMALL_KAPPA))
        assert code == EXIT_OK
        assert report["result"]["kappa"] == pytest.approx(2.0, abs=0.1)
        assert report["result"]["converged"]
        assert report["result"]["log_rho"] < 0

    def test_transient_model_reports_error(self, capsys, write_config):
        code, report = run(capsys, "kappa", "--config", write_config(arch1(2.0)))
        assert code == EXIT_NEGATIVE
        assert report["error"]["type"] == "PreconditionError"
        assert report["error"]["log_rho"] > 0


class TestCrosscheck:
    def test_estimates_agree(self, capsys, write_config):
        config = write_config(arch1(0.5, b0=0.0), SMALL_CROSSCHECK)
        code, report = run(capsys, "crosscheck", "--config", config)
        assert code == EXIT_OK
        result = report["result"]
        assert all(result["agreement"].values())
        assert result["half_gamma"] == pytest.approx(result["log_rho"], abs=0.05)
        assert len(result["drift"]["table"]) == 2

    def test_matrix_skipped_for_threshold_model(self, capsys, write_config):
        model = {
            "p": 1,
            "hyperplanes": [[1]],
            "regimes": [
                {"pattern": [-1], "bvec": [0.5], "b0": 0.0},
                {"pattern": [1], "bvec": [0.7], "b0": 0.0},
            ],
        }
        code, report = run(capsys, "crosscheck", "--config", write_config(model, SMALL_CROSSCHECK))
        assert report["result"]["agreement"]["matrix"] is None
        assert report["result"]["matrix_note"].startswith("skipped")


class TestSimulate:
    def test_writes_csv(self, capsys, write_config, tmp_path):
        out = tmp_path / "out"
        config = write_config(arch1(0.5), {"length": 100})
        code = main(["simulate", "--config", config, "--out", str(out)])
        assert code == EXIT_OK
        lines = (out / "simulate.csv").read_text().splitlines()
        assert lines[0] == "t,xi,norm"
        assert len(lines) == 102
        report = json.loads((out / "simulate.json").read_text())
        assert report["result"]["n"] == 100
        assert capsys.readouterr().out == ""


def test_inconclusive_exit_code_is_distinct():
    assert len({EXIT_OK, EXIT_NEGATIVE, EXIT_USAGE, EXIT_INCONCLUSIVE}) == 4


@pytest.mark.parametrize(
    ("command", "model", "analysis"),
    [
        ("check", arch1(0.5), {}),
        ("lyapunov", arch1(0.8), SMALL_RUN),
        ("moments", arch1(0.5), SMALL_MOMENTS),
        ("kappa", arch1(1.0), SMALL_KAPPA),
        ("order1", arch1(0.5), {}),
        ("crosscheck", arch1(0.5, b0=0.0), SMALL_CROSSCHECK),
        ("simulate", arch1(0.5), {"length": 100}),
    ],
)
def test_reruns_are_byte_identical(
    capsys, write_config, tmp_path, monkeypatch, command, model, analysis
):
    monkeypatch.chdir(tmp_path)
    config = write_config(model, analysis)
    first_code = main([command, "--config", config])
    first = capsys.readouterr().out
    assert main([command, "--config", config]) == first_code
    assert capsys.readouterr().out == first
    assert first
