import logging
import os
from dataclasses import dataclass
from typing import Optional

from dotenv import load_dotenv

from errors import ConfigError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Settings:
    jobs: int = 1
    budget: Optional[int] = None
    log_level: str = "INFO"
    cache_path: Optional[str] = None
    progress: bool = False


def _int_setting(name: str, default: Optional[int], minimum: int) -> Optional[int]:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        value = int(raw)
    except ValueError:
        raise ConfigError(f"{name} must be an integer, got {raw!r}") from None
    if value < minimum:
        raise ConfigError(f"{name} must be >= {minimum}, got {value}")
    return value


def load_settings(env_file: Optional[str] = None) -> Settings:
    """Load settings from the environment, after reading a .env file if present"""
    load_dotenv(env_file)
    level = os.getenv("MORSECELL_LOG_LEVEL", "INFO").upper()
    if not isinstance(logging.getLevelName(level), int):
        raise ConfigError(f"MORSECELL_LOG_LEVEL {level!r} is not a logging level")
    return Settings(
        jobs=_int_setting("MORSECELL_JOBS", 1, 1),
        budget=_int_setting("MORSECELL_BUDGET", None, 0),
        log_level=level,
        cache_path=os.getenv("MORSECELL_CACHE") or None,
        progress=os.getenv("MORSECELL_PROGRESS", "0").lower() in ("1", "true", "yes", "on"),
    )
