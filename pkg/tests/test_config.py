"""Tests for run configuration parsing."""

import json

import pytest

from tarstab.config import AnalysisParams, load_config, model_from_dict, parse_config
from tarstab.errors import ConfigError, MissingRegimeError
from tarstab.innovations import Gaussian, StudentT

TAR1 = {
    "p": 1,
    "hyperplanes": [[1]],
    "regimes": [
        {"pattern": [-1], "avec": [0.3], "bvec": [0.5]},
        {"pattern": [1], "avec": [-0.2], "bvec": [0.7]},
    ],
}


class TestParseConfig:
    def test_full_document(self):
        config = parse_config(
            {
                "seed": 7,
                "model": TAR1,
                "errors": {"family": "student-t", "df": 5},
                "analysis": {"n_steps": 20_000, "bracket": [1, 3], "radii": [1, 1e8]},
            }
        )
        assert config.seed == 7
        assert config.model.p == 1
        assert isinstance(config.errors, StudentT)
        assert config.analysis.n_steps == 20_000
        assert config.analysis.bracket == (1, 3)
        assert config.analysis.radii == (1, 1e8)

    def test_defaults(self):
        config = parse_config({"model": TAR1})
        assert config.seed == 0
        assert isinstance(config.errors, Gaussian)
        assert config.analysis == AnalysisParams()

    @pytest.mark.parametrize(
        "doc",
        [
            {"model": TAR1, "extra": 1},
            {"model": TAR1, "analysis": {"n_step": 10}},
            {"model": {**TAR1, "order": 1}},
            {"model": {"p": 1, "regimes": [{"pattern": [], "bvecs": [1.0]}]}},
        ],
    )
    def test_unknown_keys(self, doc):
        with pytest.raises(ConfigError, match="Unknown"):
            parse_config(doc)

    @pytest.mark.parametrize("seed", [-1, 2**64, 1.5, "7", True])
    def test_bad_seed(self, seed):
        with pytest.raises(ConfigError, match="seed"):
            parse_config({"model": TAR1, "seed": seed})

    def test_missing_model(self):
        with pytest.raises(ConfigError):
            parse_config({"seed": 1})

    def test_bad_analysis_values(self):
        with pytest.raises(ConfigError, match="bracket"):
            parse_config({"model": TAR1, "analysis": {"bracket": [3, 1]}})
        with pytest.raises(ConfigError):
            parse_config({"model": TAR1, "analysis": {"n_steps": 0}})

    def test_with_seed(self):
        config = parse_config({"model": TAR1, "seed": 3})
        assert config.with_seed(None) is config
        assert config.with_seed(11).seed == 11


class TestModelFromDict:
    def test_missing_regime(self):
        doc = {**TAR1, "regimes": TAR1["regimes"][:1]}
        with pytest.raises(MissingRegimeError):
            model_from_dict(doc)

    def test_duplicate_regime(self):
        doc = {**TAR1, "regimes": [TAR1["regimes"][0], TAR1["regimes"][0]]}
        with pytest.raises(ConfigError, match="duplicate"):
            model_from_dict(doc)

    def test_regime_defaults(self):
        spec = model_from_dict({"p": 2, "regimes": [{"pattern": []}]})
        (coeffs,) = spec.regimes.values()
        assert coeffs.b0 == 1.0
        assert coeffs.bvec.tolist() == [0.0, 0.0]


class TestLoadConfig:
    def test_round_trip_through_file(self, tmp_path):
        path = tmp_path / "run.json"
        path.write_text(json.dumps({"seed": 5, "model": TAR1}))
        assert load_config(path).seed == 5

    def test_unreadable(self, tmp_path):
        with pytest.raises(ConfigError, match="cannot read"):
            load_config(tmp_path / "missing.json")
        bad = tmp_path / "bad.json"
        bad.write_text("{not json")
        with pytest.raises(ConfigError, match="cannot read"):
            load_config(bad)
