"""
Defaults and environment-driven settings.

Module-level constants hold the defaults; ``Settings.from_env`` resolves the
effective values, letting explicit overrides (CLI flags) win over
environment variables, which win over the constants below.
"""

import os
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Mapping, Optional

from .errors import DomainError

# Largest polynomial degree is 2**MAX_DEGREE_LOG2
MAX_DEGREE_LOG2 = 14
# Largest |T_k| that may be listed explicitly
ENUMERATION_GUARD = 10**6
PRECISION_BITS = 256
CACHE_DIR = Path.home() / ".cache" / "chebytower"
CACHE_SCHEMA_VERSION = 1

ENV_CACHE_DIR = "CHEBYTOWER_CACHE_DIR"
ENV_MAX_DEGREE_LOG2 = "CHEBYTOWER_MAX_DEGREE_LOG2"
ENV_ENUMERATION_GUARD = "CHEBYTOWER_ENUM_GUARD"
ENV_PRECISION_BITS = "CHEBYTOWER_PRECISION_BITS"


def _int_from_env(env: Mapping[str, str], name: str, default: int, minimum: int) -> int:
    raw = env.get(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        value = int(raw)
    except ValueError:
        raise DomainError(f"{name} must be an integer, got {raw!r}") from None
    if value < minimum:
        raise DomainError(f"{name} must be at least {minimum}, got {value}")
    return value


@dataclass(frozen=True)
class Settings:
    max_degree_log2: int = MAX_DEGREE_LOG2
    enumeration_guard: int = ENUMERATION_GUARD
    precision_bits: int = PRECISION_BITS
    cache_dir: Path = CACHE_DIR

    @classmethod
    def from_env(
        cls,
        env: Optional[Mapping[str, str]] = None,
        **overrides,
    ) -> "Settings":
        """
        Build settings from environment variables, then apply overrides.

        Overrides whose value is None are ignored so that unset CLI flags
        fall through to the environment.
        """
        env = os.environ if env is None else env
        settings = cls(
            max_degree_log2=_int_from_env(env, ENV_MAX_DEGREE_LOG2, MAX_DEGREE_LOG2, 1),
            enumeration_guard=_int_from_env(env, ENV_ENUMERATION_GUARD, ENUMERATION_GUARD, 1),
            precision_bits=_int_from_env(env, ENV_PRECISION_BITS, PRECISION_BITS, 64),
            cache_dir=Path(env[ENV_CACHE_DIR]) if env.get(ENV_CACHE_DIR) else CACHE_DIR,
        )
        given = {key: value for key, value in overrides.items() if value is not None}
        if "cache_dir" in given:
            given["cache_dir"] = Path(given["cache_dir"])
        if given.get("precision_bits", 64) < 64:
            raise DomainError("precision_bits must be at least 64")
        return replace(settings, **given)
