"""
Verification-report cache.

Reports are stored as JSON envelopes under a key that names the identity,
mode, order and parameters together with the engine and registry versions,
so a version bump never serves a stale report. Envelopes are re-validated
as VerifyReport on load; anything unreadable counts as a miss.
"""
from abc import ABC, abstractmethod
from typing import Dict, Optional
import hashlib
import json
import os
import shutil
import time
from pathlib import Path

from pydantic import ValidationError

from config.log_policy import debug, emit_metric
from config.verify_config import ENGINE_VERSION, REGISTRY_VERSION, SOURCE_DIGEST
from core.schemas import VerifyReport

REPORT_TTL = 30 * 24 * 3600  # seconds


def report_key(ident: str, mode: str, order: int, params: Optional[Dict[str, str]] = None,
               samples: Optional[int] = None, seed: Optional[int] = None,
               engine_version: str = ENGINE_VERSION, registry_version: str = REGISTRY_VERSION,
               source_digest: str = SOURCE_DIGEST) -> str:
    """
    Versioned key of one verification request.

    `verify:<engine>:<registry>:<digest>:id=..:mode=..:order=..` followed by the
    parameter assignments in name order; sampled requests add their sample
    count and seed.
    """
    parts = ["verify", engine_version, registry_version, source_digest, f"id={ident}", f"mode={mode}", f"order={order}"]
    parts += [f"{name}={value}" for name, value in sorted((params or {}).items())]
    if samples is not None:
        parts.append(f"samples={samples}")
    if seed is not None:
        parts.append(f"seed={seed}")
    return ":".join(parts)


def _emit_cache_metric(backend: str, hit: bool, reason: str = "") -> None:
    metric = {"event": "cache", "backend": backend, "hit": hit}
    if reason:
        metric["reason"] = reason
    emit_metric(metric)


class ReportCache(ABC):
    """Where finished VerifyReports are kept between runs."""

    name = "abstract"

    @abstractmethod
    def load(self, key: str) -> Optional[VerifyReport]:
        """The stored report for key, marked cached, or None."""

    @abstractmethod
    def store(self, key: str, report: VerifyReport) -> None:
        ...

    @abstractmethod
    def evict(self, key: str) -> None:
        ...

    @abstractmethod
    def purge(self) -> None:
        """Drop every stored report."""


class DirectoryReportCache(ReportCache):
    """One JSON file per report, named by the sha256 of its key."""

    name = "local"

    def __init__(self, cache_dir: str = "cache", ttl: Optional[int] = REPORT_TTL):
        self.cache_dir = Path(cache_dir)
        self.ttl = ttl
        self.cache_dir.mkdir(parents=True, exist_ok=True)

    def path_for(self, key: str) -> Path:
        return self.cache_dir / f"{hashlib.sha256(key.encode()).hexdigest()}.json"

    def _miss(self, reason: str) -> None:
        _emit_cache_metric(self.name, False, reason)
        return None

    def load(self, key: str) -> Optional[VerifyReport]:
        path = self.path_for(key)
        if not path.exists():
            return self._miss("miss")
        try:
            envelope = json.loads(path.read_text(encoding="utf-8"))
            report = VerifyReport.model_validate({**envelope["report"], "cached": True})
        except (OSError, ValueError, KeyError, TypeError, ValidationError) as e:
            print(f"WARNING: Unreadable cached report {path.name[:12]}: {e}")
            return self._miss("error")

        if envelope.get("key") != key:
            return self._miss("collision")
        ttl = envelope.get("ttl")
        age = time.time() - envelope.get("stored_at", 0)
        if ttl and age > ttl:
            debug(f"cached report {report.id} expired (age {age:.0f}s, ttl {ttl}s)")
            path.unlink()
            return self._miss("expired")

        _emit_cache_metric(self.name, True)
        return report

    def store(self, key: str, report: VerifyReport) -> None:
        envelope = {
            "key": key,
            "report": report.to_json_dict(),
            "ttl": self.ttl,
            "stored_at": time.time(),
        }
        try:
            self.path_for(key).write_text(json.dumps(envelope, indent=2), encoding="utf-8")
        except OSError as e:
            print(f"WARNING: Could not store report {report.id}: {e}")

    def evict(self, key: str) -> None:
        self.path_for(key).unlink(missing_ok=True)

    def purge(self) -> None:
        shutil.rmtree(self.cache_dir, ignore_errors=True)
        self.cache_dir.mkdir(parents=True, exist_ok=True)


class DisabledReportCache(ReportCache):
    """CACHE_BACKEND=off or --no-cache: every lookup misses, nothing is kept."""

    name = "off"

    def load(self, key: str) -> Optional[VerifyReport]:
        _emit_cache_metric(self.name, False, "disabled")
        return None

    def store(self, key: str, report: VerifyReport) -> None:
        pass

    def evict(self, key: str) -> None:
        pass

    def purge(self) -> None:
        pass


_report_cache: Optional[ReportCache] = None


def get_report_cache() -> ReportCache:
    """The process-wide cache, chosen from CACHE_BACKEND / CACHE_DIR on first use."""
    global _report_cache
    if _report_cache is None:
        backend = os.getenv("CACHE_BACKEND", "local")
        if backend == "off":
            _report_cache = DisabledReportCache()
        else:
            if backend != "local":
                print(f"WARNING: Unknown CACHE_BACKEND {backend!r}, using local")
            _report_cache = DirectoryReportCache(os.getenv("CACHE_DIR", "cache"))
    return _report_cache


def set_report_cache(cache: Optional[ReportCache]) -> None:
    """Install a cache; None makes the next lookup re-read the environment."""
    global _report_cache
    _report_cache = cache
