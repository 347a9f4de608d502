"""Environment-driven settings and logging setup."""

import logging
import os
from pathlib import Path

from dotenv import load_dotenv

# Load environment variables from .env file
env_path = Path(__file__).parent.parent.parent / ".env"
if env_path.exists():
    load_dotenv(env_path)
else:
    load_dotenv()  # Try to load from current directory

LOG_LEVEL = os.getenv("EDGESPEC_LOG_LEVEL", "WARNING")
OUTPUT_DIR = os.getenv("EDGESPEC_OUTPUT_DIR", "output")
# Real seconds per simulated millisecond when the socket demo sleeps out costs
TIME_SCALE = float(os.getenv("EDGESPEC_TIME_SCALE", "0.001"))

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"

_configured = False


def setup_logging(level: str = LOG_LEVEL) -> None:
    """Attach a stream handler to the package logger (idempotent)."""
    global _configured
    root = logging.getLogger("edgespec")
    root.setLevel(level.upper() if isinstance(level, str) else level)
    if _configured:
        return
    handler = logging.StreamHandler()
    handler.setFormatter(logging.Formatter(LOG_FORMAT))
    root.addHandler(handler)
    _configured = True
