import pytest
from pydantic import ValidationError

from config import EngineSettings, VerifySettings, get_engine_config, get_verify_config, settings


def test_degree_bounds():
    assert settings.default_degree(2) == 6
    assert settings.default_degree(3) == 4
    assert settings.default_degree(9) == settings.verify.fallback_degree


def test_completion_caps():
    engine = EngineSettings()
    assert engine.completion_cap(3) == 6
    assert engine.completion_cap(7) == engine.default_completion_cap


def test_environment_overrides(monkeypatch):
    monkeypatch.setenv("QB_ENGINE_REDUCTION_BUDGET", "50")
    monkeypatch.setenv("QB_VERIFY_SEED", "11")
    assert EngineSettings().reduction_budget == 50
    assert VerifySettings().seed == 11


def test_budget_must_be_positive():
    with pytest.raises(ValidationError):
        EngineSettings(reduction_budget=0)


def test_config_dictionaries():
    assert set(get_engine_config()) == {"reduction_budget", "completion_caps", "max_completion_rounds"}
    assert get_verify_config()["seed"] == settings.verify.seed
