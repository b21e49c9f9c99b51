import json

import pytest

from rankdiff.classify import ClassifierConfig
from rankdiff.errors import ConfigError
from rankdiff.metrics import RegimeConfig
from rankdiff.model import Group
from rankdiff.pipeline import RunConfig, parse_basis, parse_group, thread_count


def test_config_paths_resolve_relative_to_file(tmp_path):
    (tmp_path / "data").mkdir()
    config = tmp_path / "nested" / "config.json"
    config.parent.mkdir()
    config.write_text(json.dumps({
        "cases": "../data/cases.csv",
        "populations": "../data/pops.csv",
        "boundaries": "../data/b.geojson",
        "out": "../out",
    }), encoding="utf-8")
    cfg = RunConfig.from_file(config)
    assert cfg.cases == (tmp_path / "data" / "cases.csv").resolve()
    assert cfg.out == (tmp_path / "out").resolve()
    assert cfg.basis == "raw_daily"
    assert cfg.group is Group.BAA
    assert cfg.regime == RegimeConfig()
    assert cfg.classifier == ClassifierConfig()


def test_config_sections_parsed(tmp_path):
    config = tmp_path / "config.json"
    config.write_text(json.dumps({
        "cases": "c.csv", "populations": "p.csv", "boundaries": "b.geojson",
        "basis": "ma7",
        "group": "oth",
        "regime": {"min": 1.0, "max": 50.0},
        "classifier": {"g0_skew_max": 0.5},
        "cases_schema": "widhs-cumulative",
    }), encoding="utf-8")
    cfg = RunConfig.from_file(config)
    assert cfg.basis == "ma7"
    assert cfg.group is Group.OTH
    assert cfg.regime == RegimeConfig(1.0, 50.0)
    assert cfg.classifier.g0_skew_max == 0.5
    assert cfg.cases_schema == "widhs-cumulative"


def test_overrides_win(tmp_path):
    config = tmp_path / "config.json"
    config.write_text(json.dumps({
        "cases": "c.csv", "populations": "p.csv", "boundaries": "b.geojson",
        "basis": "ma7", "group": "hl", "regime": {"min": 0.0, "max": 10.0},
    }), encoding="utf-8")
    cfg = RunConfig.from_file(config).with_overrides(
        basis="cumulative", regime_min=2.0, group="w", out=str(tmp_path / "elsewhere")
    )
    assert cfg.basis == "cumulative"
    assert cfg.group is Group.W
    assert cfg.regime == RegimeConfig(2.0, 10.0)  # max kept from config
    assert cfg.out == (tmp_path / "elsewhere").resolve()


def test_missing_key_rejected(tmp_path):
    config = tmp_path / "config.json"
    config.write_text(json.dumps({"cases": "c.csv"}), encoding="utf-8")
    with pytest.raises(ConfigError, match="populations"):
        RunConfig.from_file(config)


def test_unknown_classifier_key_rejected(tmp_path):
    config = tmp_path / "config.json"
    config.write_text(json.dumps({
        "cases": "c.csv", "populations": "p.csv", "boundaries": "b.geojson",
        "classifier": {"nope": 1.0},
    }), encoding="utf-8")
    with pytest.raises(ConfigError, match="classifier"):
        RunConfig.from_file(config)


@pytest.mark.parametrize("text,expected", [("raw", "raw_daily"), ("MA7", "ma7"),
                                           ("cumulative", "cumulative")])
def test_parse_basis(text, expected):
    assert parse_basis(text) == expected


def test_parse_basis_rejects_unknown():
    with pytest.raises(ConfigError, match="basis"):
        parse_basis("weekly")


def test_parse_group():
    assert parse_group("baa") is Group.BAA
    assert parse_group("W") is Group.W
    with pytest.raises(ConfigError, match="group"):
        parse_group("all")


def test_thread_count(monkeypatch):
    monkeypatch.delenv("RANKDIFF_THREADS", raising=False)
    assert thread_count() == 1
    monkeypatch.setenv("RANKDIFF_THREADS", "6")
    assert thread_count() == 6
    monkeypatch.setenv("RANKDIFF_THREADS", "0")
    assert thread_count() == 1
    monkeypatch.setenv("RANKDIFF_THREADS", "lots")
    with pytest.raises(ConfigError, match="RANKDIFF_THREADS"):
        thread_count()
