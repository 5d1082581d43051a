import logging

import pytest

from rationd import config


@pytest.fixture
def rationd_logger(monkeypatch, tmp_path):
    """Skip logging.ini and restore the rationd logger level afterwards"""
    monkeypatch.setattr(config, "LOGGING_CONFIG", tmp_path / "absent.ini")
    logger = logging.getLogger("rationd")
    level = logger.level
    logger.setLevel(logging.INFO)
    yield logger
    logger.setLevel(level)


def test_level_override(monkeypatch, rationd_logger):
    monkeypatch.setenv(config.LOG_LEVEL_ENV, "debug")
    config.configure_logging()
    assert rationd_logger.level == logging.DEBUG


def test_unknown_level_keeps_the_configured_one(monkeypatch, rationd_logger, caplog):
    monkeypatch.setenv(config.LOG_LEVEL_ENV, "verbose")
    config.configure_logging()
    assert rationd_logger.level == logging.INFO
    assert "Ignoring RATIOND_LOG='verbose'" in caplog.text


def test_unset_level(monkeypatch, rationd_logger):
    monkeypatch.delenv(config.LOG_LEVEL_ENV, raising=False)
    config.configure_logging()
    assert rationd_logger.level == logging.INFO
