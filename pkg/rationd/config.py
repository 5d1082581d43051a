"""Configuration file for rationd app."""
import os
import pathlib
import logging
import logging.config
from fractions import Fraction

ROOT_DIR = pathlib.Path(__file__).parents[1]
DATA_DIR = ROOT_DIR / "data"
CONFIG_DIR = ROOT_DIR / "config"
FIXTURES_DIR = DATA_DIR / "fixtures"
LOGGING_CONFIG = CONFIG_DIR / "logging.ini"

LOG_LEVEL_ENV = "RATIOND_LOG"

# Documents
SCHEMA_VERSION = 1

# Model defaults (age bands and priorities of the vaccination study)
DEFAULT_DISCOUNT = Fraction("0.95")
DEFAULT_GROUPS = (
    ("18-45", Fraction("0.96")),
    ("45-60", Fraction("0.97")),
    ("60+", Fraction("0.99")),
)

# Solvers
DEFAULT_ORACLE_BUDGET = 10**6
COST_BIT_BUDGET = 63

# Analysis
MAX_EXHAUSTIVE_DAYS = 20
DEVIATION_SAMPLE_SIZE = 256
MAX_DEVIATION_RUNS = 20000

# Display
DECIMAL_PLACES = 6


def configure_logging() -> None:
    """Load logging.ini and apply the RATIOND_LOG level override"""
    if LOGGING_CONFIG.exists():
        logging.config.fileConfig(LOGGING_CONFIG, disable_existing_loggers=False)
    else:
        logging.basicConfig(format="%(asctime)s %(name)s [%(levelname)s] %(message)s")

    level = os.environ.get(LOG_LEVEL_ENV)
    if not level:
        return
    logger = logging.getLogger("rationd")
    if level.upper() not in logging.getLevelNamesMapping():
        logger.warning(f"Ignoring {LOG_LEVEL_ENV}={level!r}; not a logging level")
        return
    logger.setLevel(level.upper())
