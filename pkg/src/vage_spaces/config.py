import logging
import os
from dataclasses import dataclass, field
from typing import Mapping, Optional, Tuple

from src.vage_spaces.errors import UsageError

_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")


def parse_window(text: str) -> Tuple[int, int]:
    """Parse a ``K,N`` pair (max generator, max total degree)."""
    try:
        k_text, n_text = text.split(",")
        max_generator, max_degree = int(k_text), int(n_text)
    except ValueError as exc:
        raise UsageError(f"window must look like 'K,N', got {text!r}") from exc
    if max_generator < 1 or max_degree < 0:
        raise UsageError(f"window needs K >= 1 and N >= 0, got {text!r}")
    return max_generator, max_degree


@dataclass(frozen=True)
class Settings:
    """Process-wide defaults, read from the environment."""
    seed: int = 0
    log_level: str = "WARNING"
    default_window: Tuple[int, int] = field(default=(2, 4))

    @classmethod
    def from_env(cls, environ: Optional[Mapping[str, str]] = None) -> "Settings":
        environ = os.environ if environ is None else environ

        seed_text = environ.get("VAGE_SEED", "0")
        try:
            seed = int(seed_text)
        except ValueError as exc:
            raise UsageError(f"VAGE_SEED must be an integer, got {seed_text!r}") from exc

        log_level = environ.get("VAGE_LOG_LEVEL", "WARNING").upper()
        if log_level not in _LEVELS:
            raise UsageError(f"VAGE_LOG_LEVEL must be one of {', '.join(_LEVELS)}")

        window = parse_window(environ.get("VAGE_WINDOW", "2,4"))
        return cls(seed=seed, log_level=log_level, default_window=window)

    def configure_logging(self, level: Optional[str] = None) -> None:
        logging.basicConfig(
            level=getattr(logging, (level or self.log_level).upper()),
            format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        )
