"""
Tests for the verification-report cache: envelopes on disk, expiry,
backend selection and versioned keys.
"""
import json
import shutil
import tempfile
import time
from pathlib import Path
from unittest.mock import patch

import core.cache_interface
from config.verify_config import SOURCE_DIGEST
from core.cache_interface import (
    REPORT_TTL,
    DirectoryReportCache,
    DisabledReportCache,
    get_report_cache,
    report_key,
    set_report_cache,
)
from core.schemas import Mismatch, VerifyReport


def _report(ident="thm73-a", passed=True):
    mismatch = None if passed else Mismatch(order=2, value="a/3")
    return VerifyReport(id=ident, mode="parametric", order=12, passed=passed,
                        first_mismatch=mismatch, ring="Q(a)")


class TestDirectoryReportCache:
    """Test the one-file-per-report backend."""

    def setup_method(self):
        self.temp_dir = tempfile.mkdtemp()
        self.cache = DirectoryReportCache(self.temp_dir)

    def teardown_method(self):
        shutil.rmtree(self.temp_dir, ignore_errors=True)

    def test_store_and_load(self):
        """Test a stored report comes back equal and marked cached."""
        self.cache.store("k", _report())
        loaded = self.cache.load("k")

        assert loaded.id == "thm73-a"
        assert loaded.passed
        assert loaded.cached

    def test_failing_report_round_trip(self):
        """Test the first mismatch survives storage."""
        self.cache.store("k", _report(passed=False))
        assert self.cache.load("k").first_mismatch == Mismatch(order=2, value="a/3")

    def test_missing_key(self):
        """Test an unknown key is a miss."""
        assert self.cache.load("nothing") is None

    def test_envelope_on_disk(self):
        """Test the file holds the key and the report under its `pass` alias."""
        self.cache.store("k", _report())
        envelope = json.loads(self.cache.path_for("k").read_text())

        assert envelope["key"] == "k"
        assert envelope["report"]["pass"] is True
        assert envelope["ttl"] == REPORT_TTL

    def test_expired_entry_removed(self):
        """Test an entry older than its TTL is dropped along with its file."""
        cache = DirectoryReportCache(self.temp_dir, ttl=1)
        cache.store("k", _report())
        path = cache.path_for("k")
        envelope = json.loads(path.read_text())
        envelope["stored_at"] = time.time() - 10
        path.write_text(json.dumps(envelope))

        assert cache.load("k") is None
        assert not path.exists()

    def test_no_ttl_never_expires(self):
        """Test ttl=None keeps entries regardless of age."""
        cache = DirectoryReportCache(self.temp_dir, ttl=None)
        cache.store("k", _report())
        path = cache.path_for("k")
        envelope = json.loads(path.read_text())
        envelope["stored_at"] = 0
        path.write_text(json.dumps(envelope))

        assert cache.load("k") is not None

    def test_corrupt_file_is_a_miss(self, capsys):
        """Test unreadable JSON warns and misses."""
        self.cache.path_for("k").write_text("{not json")

        assert self.cache.load("k") is None
        out = capsys.readouterr().out
        assert "WARNING: Unreadable cached report" in out
        assert '"reason": "error"' in out

    def test_contract_violation_is_a_miss(self):
        """Test a stored report breaking the pass/mismatch contract is not served."""
        self.cache.store("k", _report())
        path = self.cache.path_for("k")
        envelope = json.loads(path.read_text())
        envelope["report"]["pass"] = False
        path.write_text(json.dumps(envelope))

        assert self.cache.load("k") is None

    def test_evict_and_purge(self):
        """Test eviction of one key and purging of all, leaving the directory usable."""
        self.cache.store("k1", _report("a"))
        self.cache.store("k2", _report("b"))
        self.cache.evict("k1")
        self.cache.evict("k1")
        assert self.cache.load("k1") is None
        assert self.cache.load("k2") is not None

        self.cache.purge()
        assert self.cache.load("k2") is None
        self.cache.store("k3", _report("c"))
        assert self.cache.load("k3").id == "c"

    def test_hit_and_miss_metrics(self, capsys):
        """Test cache METRICS lines for a miss then a hit."""
        self.cache.load("k")
        self.cache.store("k", _report())
        self.cache.load("k")

        lines = [line for line in capsys.readouterr().out.splitlines() if line.startswith("METRICS:")]
        first, second = (json.loads(line[len("METRICS: "):]) for line in lines[-2:])
        assert first == {"event": "cache", "backend": "local", "hit": False, "reason": "miss"}
        assert second == {"event": "cache", "backend": "local", "hit": True}


class TestDisabledReportCache:
    """Test the no-op backend."""

    def test_never_stores(self):
        """Test stored reports are not returned."""
        cache = DisabledReportCache()
        cache.store("k", _report())
        assert cache.load("k") is None

    def test_disabled_metric(self, capsys):
        """Test lookups report the backend as disabled."""
        DisabledReportCache().load("k")
        out = capsys.readouterr().out
        assert '"backend": "off"' in out
        assert '"reason": "disabled"' in out


class TestCacheSelection:
    """Test backend selection from the environment."""

    def setup_method(self):
        set_report_cache(None)
        self.temp_dir = tempfile.mkdtemp()

    def teardown_method(self):
        set_report_cache(None)
        shutil.rmtree(self.temp_dir, ignore_errors=True)

    def test_local_by_default(self):
        """Test CACHE_BACKEND=local uses CACHE_DIR."""
        with patch.dict('os.environ', {'CACHE_BACKEND': 'local', 'CACHE_DIR': self.temp_dir}):
            cache = get_report_cache()
        assert isinstance(cache, DirectoryReportCache)
        assert cache.cache_dir == Path(self.temp_dir)

    def test_off(self):
        """Test CACHE_BACKEND=off disables caching."""
        with patch.dict('os.environ', {'CACHE_BACKEND': 'off'}):
            assert isinstance(get_report_cache(), DisabledReportCache)

    def test_unknown_backend_warns(self, capsys):
        """Test an unknown backend name falls back to local files."""
        with patch.dict('os.environ', {'CACHE_BACKEND': 'redis', 'CACHE_DIR': self.temp_dir}):
            cache = get_report_cache()
        assert isinstance(cache, DirectoryReportCache)
        assert "WARNING: Unknown CACHE_BACKEND" in capsys.readouterr().out

    def test_memoized_until_reset(self):
        """Test the same instance is returned until set_report_cache(None)."""
        with patch.dict('os.environ', {'CACHE_BACKEND': 'off'}):
            first = get_report_cache()
            assert get_report_cache() is first
        set_report_cache(None)
        assert core.cache_interface._report_cache is None


class TestReportKey:
    """Test versioned request keys."""

    def test_layout(self):
        """Test prefix, versions, request fields and sorted parameters."""
        key = report_key("thm73-a", "parametric", 12, {"p": "1", "kappa": "0"},
                         engine_version="1.0.0", registry_version="abc", source_digest="0f1e")
        assert key == "verify:1.0.0:abc:0f1e:id=thm73-a:mode=parametric:order=12:kappa=0:p=1"

    def test_parameter_order_irrelevant(self):
        """Test parameter dict order does not change the key."""
        assert report_key("x", "parametric", 3, {"a": "1", "c": "2"}) == \
            report_key("x", "parametric", 3, {"c": "2", "a": "1"})

    def test_sampling_fields(self):
        """Test sampled requests carry their sample count and seed."""
        key = report_key("thm46-i", "sampled", 4, samples=5, seed=7)
        assert key.endswith(":samples=5:seed=7")
        assert report_key("thm46-i", "sampled", 4, samples=5, seed=8) != key

    def test_version_bump_changes_key(self):
        """Test an engine or registry bump never reuses a key."""
        base = report_key("thm88", "parametric", 8, engine_version="1.0.0", registry_version="abc")
        assert report_key("thm88", "parametric", 8, engine_version="1.0.1", registry_version="abc") != base
        assert report_key("thm88", "parametric", 8, engine_version="1.0.0", registry_version="def") != base

    def test_source_edit_changes_key(self):
        """Test a different source digest never reuses a key."""
        base = report_key("thm88", "parametric", 8, source_digest="0f1e")
        assert report_key("thm88", "parametric", 8, source_digest="a2b3") != base
        assert ":0f1e:id=thm88:" in base

    def test_default_digest(self):
        """Test the default key carries the digest of the current sources."""
        assert SOURCE_DIGEST in report_key("thm88", "parametric", 8).split(":")
        assert len(SOURCE_DIGEST) == 12
