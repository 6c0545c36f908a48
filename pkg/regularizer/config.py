# =============================================================================
# CONFIGURATION
# =============================================================================
# Values come from the environment or a .env file next to the process;
# see env_example.txt for the full list.

import logging
import os

from dotenv import load_dotenv

load_dotenv()

logger = logging.getLogger(__name__)


def _int_setting(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        return int(raw)
    except ValueError:
        logger.warning("Ignoring %s=%r (not an integer); using %d", name, raw, default)
        return default


LOG_LEVEL = os.getenv("REGULARIZER_LOG_LEVEL", "WARNING").upper()

# Exhaustive enumerations are exponential; these caps keep them at desk scale
VULN_MAX_N = _int_setting("REGULARIZER_VULN_MAX_N", 20)
ORACLE_MAX_DIRECTED = _int_setting("REGULARIZER_ORACLE_MAX_DIRECTED", 8)
ORACLE_MAX_UNDIRECTED = _int_setting("REGULARIZER_ORACLE_MAX_UNDIRECTED", 10)
ALT_PATH_MAX_EDGES = _int_setting("REGULARIZER_ALT_PATH_MAX_EDGES", 12)
ROOK_CHECK_MAX_EDGES = _int_setting("REGULARIZER_ROOK_CHECK_MAX_EDGES", 64)

HOST = os.getenv("REGULARIZER_HOST", "127.0.0.1")
PORT = _int_setting("REGULARIZER_PORT", 8000)


def configure_logging(level: str = LOG_LEVEL) -> None:
    """Configure the root logger for the CLI and the HTTP service."""
    logging.basicConfig(
        level=getattr(logging, level, logging.WARNING),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
