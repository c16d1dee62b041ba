"""
Runtime settings read from the environment (and a .env file when present).
"""

import os
from functools import lru_cache
from typing import Optional

from dotenv import load_dotenv
from pydantic import BaseModel, Field

load_dotenv()


class Settings(BaseModel):
    log_level: str = "WARNING"
    log_dir: Optional[str] = None
    jobs: int = Field(default=1, ge=1)
    api_max_n: int = Field(default=7, ge=1, le=10)
    port: int = 8000


@lru_cache(maxsize=1)
def get_settings() -> Settings:
    """
    Build the settings object from environment variables.

    Returns:
        Settings instance (cached; call get_settings.cache_clear() after
        changing the environment in tests)
    """
    return Settings(
        log_level=os.getenv("STACKSORT_LOG_LEVEL", "WARNING"),
        log_dir=os.getenv("STACKSORT_LOG_DIR") or None,
        jobs=int(os.getenv("STACKSORT_JOBS", "1")),
        api_max_n=int(os.getenv("STACKSORT_API_MAX_N", "7")),
        port=int(os.getenv("PORT", "8000")),
    )
