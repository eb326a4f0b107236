# src/utils/settings.py
import os
import logging
from dataclasses import dataclass, replace
from functools import lru_cache

from dotenv import load_dotenv

logger = logging.getLogger(__name__)


def _env_int(name, default):
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        return int(raw)
    except ValueError:
        logger.warning("Ignoring non-integer %s=%r, using %s", name, raw, default)
        return default


def _env_flag(name):
    return os.getenv(name, "").strip().lower() in {"1", "true", "yes", "on"}


@dataclass(frozen=True)
class Settings:
    """Runtime configuration, read from the environment (and an optional .env file)."""
    max_size: int = 4096
    max_group_order: int = 64
    seed: int = 0
    trials: int = 50
    log_level: str = "WARNING"
    data_dir: str = "data"
    progress: bool = False

    def override(self, **changes):
        """Return a copy with every non-None keyword applied."""
        return replace(self, **{k: v for k, v in changes.items() if v is not None})


@lru_cache(maxsize=1)
def get_settings():
    """Load settings once per process."""
    load_dotenv()
    return Settings(
        max_size=_env_int("CRYSTAL_MAX_SIZE", 4096),
        max_group_order=_env_int("CRYSTAL_MAX_GROUP_ORDER", 64),
        seed=_env_int("CRYSTAL_SEED", 0),
        trials=_env_int("CRYSTAL_TRIALS", 50),
        log_level=os.getenv("CRYSTAL_LOG_LEVEL", "WARNING").upper(),
        data_dir=os.getenv("CRYSTAL_DATA_DIR", "data"),
        progress=_env_flag("CRYSTAL_PROGRESS"),
    )
