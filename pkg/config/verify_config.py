"""
Frozen verification configuration: default truncation orders, sample
values and the version stamps that key cached reports.
"""
import hashlib
import os
from pathlib import Path
from typing import Optional

# Version tracking; bump either one to invalidate cached reports
ENGINE_VERSION = "1.0.0"
REGISTRY_VERSION = os.popen("git rev-parse --short HEAD 2>/dev/null").read().strip() or "dev"


def _source_digest() -> str:
    """sha256 of the verification sources, so uncommitted edits never reuse a report."""
    root = Path(__file__).resolve().parent.parent
    digest = hashlib.sha256()
    for path in sorted(list(root.glob("core/*.py")) + list(root.glob("integrations/*.py"))):
        digest.update(path.relative_to(root).as_posix().encode())
        digest.update(path.read_bytes())
    return digest.hexdigest()[:12]


SOURCE_DIGEST = _source_digest()

VERIFY_SEED = int(os.getenv("VERIFY_SEED", "20260101"))

# Truncation order by number of free symbolic parameters
DEFAULT_ORDERS = {
    0: 24,   # constant coefficients, one variable
    1: 16,   # Q(a)
    2: 12,   # Q(a, c) or Q(A, B)
}

DEFAULT_SAMPLES = {
    "a": "1/7",
    "c": "2/5",
}


def order_override() -> Optional[int]:
    """VERIFY_ORDER, when set, replaces every default order."""
    value = os.getenv("VERIFY_ORDER")
    return int(value) if value else None


def default_order(free_params: int) -> int:
    override = order_override()
    if override is not None:
        return override
    return DEFAULT_ORDERS[min(free_params, 2)]


def get_session_metadata() -> dict:
    """
    Get metadata to log with each verification run for reproducibility.

    Returns:
        Dict with engine and registry versions, source digest, seed and default orders
    """
    return {
        "engine_version": ENGINE_VERSION,
        "registry_version": REGISTRY_VERSION,
        "source_digest": SOURCE_DIGEST,
        "seed": VERIFY_SEED,
        "default_orders": DEFAULT_ORDERS,
        "order_override": order_override(),
    }
