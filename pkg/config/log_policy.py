"""
Log-level aware output utilities.

When LOG_LEVEL=prod, DEBUG lines are dropped and symbolic payloads in
metrics (long rational functions) are truncated; ids, orders, flags and
timings are always kept.
"""
import json
import os
from typing import Any, Dict

LOG_LEVEL = os.getenv("LOG_LEVEL", "dev")  # "dev" or "prod"

SYMBOLIC_KEYS = ("value", "diff", "expr")
MAX_SYMBOLIC_LENGTH = 80


def is_production() -> bool:
    """Check if running in production mode."""
    return LOG_LEVEL.lower() == "prod"


def truncate_symbolic(text: str, max_length: int = MAX_SYMBOLIC_LENGTH) -> str:
    """
    Shorten a rendered expression for production logs.

    In dev mode the text is returned unchanged.
    """
    if not is_production() or len(text) <= max_length:
        return text
    return text[:max_length] + "..."


def debug(message: str) -> None:
    if not is_production():
        print(f"DEBUG: {message}")


def sanitize_metrics(metrics: Dict[str, Any]) -> Dict[str, Any]:
    """Metric payload as logged: in prod mode rendered expressions under
    SYMBOLIC_KEYS are shortened, every other field passes through."""
    if not is_production():
        return metrics
    return {
        key: truncate_symbolic(value) if key in SYMBOLIC_KEYS and isinstance(value, str) else value
        for key, value in metrics.items()
    }


def emit_metric(metrics: Dict[str, Any]) -> None:
    """Print one METRICS line."""
    print(f"METRICS: {json.dumps(sanitize_metrics(metrics), default=str)}")
