"""
Runtime settings for symspace, read from the environment.

An optional symspace.env file is loaded first so local runs can pin
parallelism and thresholds without exporting variables.
"""

import os
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Iterable, List, TypeVar

from dotenv import load_dotenv

# Load environment variables from symspace.env file
load_dotenv('symspace.env')

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")


def _env_int(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        return int(raw)
    except ValueError:
        logger.warning(f"Ignoring non-integer {name}={raw!r}, using {default}")
        return default


def _env_float(name: str, default: float) -> float:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        return float(raw)
    except ValueError:
        logger.warning(f"Ignoring non-numeric {name}={raw!r}, using {default}")
        return default


@dataclass(frozen=True)
class Settings:
    threads: int = 1
    log_level: str = "WARNING"
    tensor_cap: int = 2 ** 26
    sweep_cap: int = 256
    growth_rate: float = 0.05
    growth_run: int = 3
    log_growth_slope: float = 0.02
    saturation_decay: float = 1.0


@lru_cache(maxsize=1)
def get_settings() -> Settings:
    """Settings from the environment (cached; call get_settings.cache_clear() in tests)"""
    settings = Settings(
        threads=max(1, _env_int("SYMSPACE_THREADS", 1)),
        log_level=os.getenv("SYMSPACE_LOG_LEVEL", "WARNING").upper(),
        tensor_cap=_env_int("SYMSPACE_TENSOR_CAP", 2 ** 26),
        sweep_cap=_env_int("SYMSPACE_SWEEP_CAP", 256),
        growth_rate=_env_float("SYMSPACE_GROWTH_RATE", 0.05),
        growth_run=max(1, _env_int("SYMSPACE_GROWTH_RUN", 3)),
        log_growth_slope=_env_float("SYMSPACE_LOG_GROWTH_SLOPE", 0.02),
        saturation_decay=_env_float("SYMSPACE_SATURATION_DECAY", 1.0),
    )
    logger.debug(f"Loaded settings: {settings}")
    return settings


def parallel_map(fn: Callable[[T], R], items: Iterable[T]) -> List[R]:
    """Map over items with SYMSPACE_THREADS workers; results keep input order"""
    items = list(items)
    workers = min(get_settings().threads, len(items))
    if workers <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(fn, items))
