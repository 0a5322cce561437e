from pydantic_settings import BaseSettings
from functools import lru_cache
from typing import Optional
from dotenv import load_dotenv

load_dotenv()


class Settings(BaseSettings):
    LOG_LEVEL: str = "INFO"

    TIME_LIMIT: float = 600.0
    NODE_LIMIT: Optional[int] = None
    TIME_CHECK_INTERVAL: int = 1024

    CLIQUE_BOUND: bool = False
    AUDIT_PROPAGATION: bool = False
    ORACLE_MAX_ITEMS: int = 30

    MASTER_SEED: int = 0
    JOBS: Optional[int] = None

    class Config:
        env_prefix = "KPC_"
        env_file = ".env"
        case_sensitive = True
        extra = "ignore"  # Ignore extra environment variables


@lru_cache()
def get_settings() -> Settings:
    return Settings()
