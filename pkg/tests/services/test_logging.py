import importlib
from datetime import datetime

import services.logging
from services.logging import logging_config_dict, timestamper


def test_timestamper_with_debug(monkeypatch, freezer):
    monkeypatch.setattr("services.logging.DEBUG", True)

    log = timestamper(None, None, {"event": "stability decided"})
    assert log == {
        "event": "stability decided",
        "timestamp": datetime.now().isoformat() + "Z",
    }


def test_timestamper_without_debug(monkeypatch):
    monkeypatch.setattr("services.logging.DEBUG", False)

    event = {"event": "stability decided"}
    assert timestamper(None, None, event) == {"event": "stability decided"}


def test_chowstab_logger_level_comes_from_env():
    # CHOWSTAB_LOG_LEVEL is pinned by pytest-env
    assert logging_config_dict["loggers"]["chowstab"]["level"] == "DEBUG"


def test_chowstab_logger_level_comes_from_settings(monkeypatch):
    monkeypatch.setattr("chowstab.settings.LOG_LEVEL", "WARNING")
    module = importlib.reload(services.logging)

    try:
        assert module.logging_config_dict["loggers"]["chowstab"]["level"] == "WARNING"
    finally:
        monkeypatch.undo()
        importlib.reload(services.logging)
