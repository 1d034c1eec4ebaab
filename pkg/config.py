from __future__ import annotations

import logging
import os
from pathlib import Path
from typing import Optional

from exact_linalg import Field

try:
    from dotenv import load_dotenv
except Exception:
    load_dotenv = None


DEFAULT_FIELD = "Q"
DEFAULT_SEED = 0
SEED_LIMIT = 2**64


def load_env() -> None:
    if load_dotenv is None:
        return
    candidates = [
        Path(__file__).resolve().parent / ".env",
        Path.cwd() / ".env",
    ]
    for path in candidates:
        if path.exists():
            load_dotenv(dotenv_path=path)
            break


def resolve_field(label: Optional[str]) -> Field:
    if label:
        return Field.from_label(label)
    return Field.from_label(os.getenv("SMITH_FIELD") or DEFAULT_FIELD)


def resolve_max_workers(total: int, override: Optional[int] = None) -> int:
    """Worker count for batch checks; SMITH_MAX_WORKERS caps it when set."""
    total = max(1, total)
    if override:
        return max(1, min(total, override))
    env = os.getenv("SMITH_MAX_WORKERS")
    if env:
        try:
            return max(1, min(total, int(env)))
        except Exception:
            return total
    return total


def resolve_log_level(verbose: bool) -> int:
    if verbose:
        return logging.DEBUG
    name = (os.getenv("SMITH_LOG_LEVEL") or "WARNING").upper()
    level = logging.getLevelName(name)
    return level if isinstance(level, int) else logging.WARNING


def resolve_seed(seed: Optional[int]) -> int:
    if seed is None:
        env = os.getenv("SMITH_SEED")
        seed = int(env) if env else DEFAULT_SEED
    if not 0 <= seed < SEED_LIMIT:
        raise ValueError(f"seed {seed} outside [0, 2^64)")
    return seed
