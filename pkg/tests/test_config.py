"""Tests for config.py."""

import json

import pytest
import yaml
from pydantic import ValidationError

from detrepy.config import Settings, load_settings


def test_defaults():
    """Defaults match the library keyword defaults."""
    s = load_settings()
    assert s.field == "Q"
    assert s.seed == 0
    assert s.samples == 25
    assert s.retry_budget == 20
    assert s.search_bound == 6
    assert s.family_bound == 4
    assert s.certificate_points == 13


@pytest.mark.parametrize(
    "kwargs",
    [{"field": "R"}, {"samples": 0}, {"retry_budget": -1}, {"certificate_points": 12}, {"field": "Fp:4"}],
)
def test_validation(kwargs):
    """Unknown fields, non-positive bounds and short grids are rejected."""
    with pytest.raises(ValidationError):
        Settings(**kwargs)


def test_yaml(tmp_path):
    """YAML files override the defaults."""
    path = tmp_path / "detrepy.yaml"
    path.write_text("field: Fp:5\nseed: 7\n", encoding="utf-8")
    s = load_settings(path)
    assert s.field == "Fp:5"
    assert s.seed == 7
    assert s.samples == 25


def test_json(tmp_path):
    """JSON files are read by extension."""
    path = tmp_path / "detrepy.json"
    path.write_text(json.dumps({"search_bound": 5}), encoding="utf-8")
    assert load_settings(path).search_bound == 5


def test_empty_yaml(tmp_path):
    """An empty file gives the defaults."""
    path = tmp_path / "empty.yaml"
    path.write_text("", encoding="utf-8")
    assert load_settings(path) == Settings()


def test_unknown_keys(tmp_path):
    """Misspelled keys are reported."""
    path = tmp_path / "bad.yaml"
    path.write_text("sead: 3\n", encoding="utf-8")
    with pytest.raises(ValueError, match="sead"):
        load_settings(path)


def test_not_a_mapping(tmp_path):
    """The top level must be a mapping."""
    path = tmp_path / "list.yaml"
    path.write_text("- 1\n- 2\n", encoding="utf-8")
    with pytest.raises(ValueError):
        load_settings(path)


def test_merged():
    """Only non-None overrides apply."""
    s = Settings(seed=3).merged(seed=None, samples=4, field="F2")
    assert s.seed == 3
    assert s.samples == 4
    assert s.field == "F2"


def test_to_yaml(tmp_path):
    """The effective configuration round-trips through YAML."""
    s = Settings(field="Qi", seed=11)
    path = tmp_path / "nested" / "effective.yaml"
    s.to_yaml(path)
    with open(path, encoding="utf-8") as f:
        data = yaml.safe_load(f)
    assert data["field"] == "Qi"
    assert list(data)[0] == "field"
    assert load_settings(path) == s
