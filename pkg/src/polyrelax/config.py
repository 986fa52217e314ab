# SPDX-FileCopyrightText: 2026 polyrelax contributors
#
# SPDX-License-Identifier: MIT

"""
Settings for the command line and the tool server.

Values come from PROJECT_ROOT/.env (if present) and then the process
environment. Invalid values print a warning to stderr and fall back to the
default, so a typo never stops the server from starting.
"""

import io
import os
import sys
from pathlib import Path

from dotenv import load_dotenv

# Assumes config.py lives in <root>/src/polyrelax/
PROJECT_ROOT = Path(__file__).resolve().parent.parent.parent

dotenv_path = PROJECT_ROOT / ".env"

if dotenv_path.is_file():
    try:
        # Some editors save .env as UTF-16; fall back to UTF-8 (with optional BOM)
        with open(dotenv_path, "r", encoding="utf-16") as f:
            load_dotenv(stream=io.StringIO(f.read()))
    except (UnicodeDecodeError, UnicodeError):
        load_dotenv(dotenv_path=dotenv_path, encoding="utf-8-sig")


def _warn(name: str, raw: str, default) -> None:
    print(f"Warning: invalid {name}={raw!r}; using default {default!r}.", file=sys.stderr)


def env_float(name: str, default: float | None, *, positive: bool = False) -> float | None:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        value = float(raw)
    except ValueError:
        _warn(name, raw, default)
        return default
    if positive and not value > 0:
        _warn(name, raw, default)
        return default
    return value


def env_int(name: str, default: int, *, minimum: int = 0) -> int:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        value = int(raw)
    except ValueError:
        _warn(name, raw, default)
        return default
    if value < minimum:
        _warn(name, raw, default)
        return default
    return value


def env_str(name: str, default: str) -> str:
    raw = os.getenv(name)
    return default if raw is None or raw.strip() == "" else raw.strip()


EPSILON = env_float("POLYRELAX_EPSILON", 1e-4, positive=True)
COVERING = env_str("POLYRELAX_COVERING", "equal:9")
MAX_ITERATIONS = env_int("POLYRELAX_MAX_ITERATIONS", 10_000, minimum=1)

# 0 disables the budget
TIME_BUDGET = env_float("POLYRELAX_TIME_BUDGET", 60.0)
if TIME_BUDGET is not None and TIME_BUDGET <= 0:
    TIME_BUDGET = None

SEED = env_int("POLYRELAX_SEED", 0)
WORKERS = env_int("POLYRELAX_WORKERS", 1, minimum=1)
OUTPUT_DIR = Path(env_str("POLYRELAX_OUTPUT_DIR", str(PROJECT_ROOT / "bench_results")))
LOG_LEVEL = env_str("POLYRELAX_LOG_LEVEL", "WARNING").upper()

_dump = os.getenv("POLYRELAX_LP_DUMP_DIR")
LP_DUMP_DIR = Path(_dump) if _dump and _dump.strip() else None

