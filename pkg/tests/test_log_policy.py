"""
Unit tests for log-level handling (LOG_LEVEL=prod).

Tests mode switching, DEBUG suppression and truncation of symbolic metric
payloads.
"""
import importlib
import json

import pytest
from unittest.mock import patch

import config.log_policy


def _reload():
    importlib.reload(config.log_policy)
    return config.log_policy


class TestProductionDetection:
    """Test production mode detection."""

    def teardown_method(self):
        with patch.dict('os.environ', {'LOG_LEVEL': 'dev'}):
            _reload()

    @patch.dict('os.environ', {'LOG_LEVEL': 'dev'})
    def test_dev_mode_detected(self):
        """Test dev mode is detected."""
        assert not _reload().is_production()

    @patch.dict('os.environ', {'LOG_LEVEL': 'prod'})
    def test_prod_mode_detected(self):
        """Test prod mode is detected."""
        assert _reload().is_production()

    @patch.dict('os.environ', {'LOG_LEVEL': 'PROD'})
    def test_case_insensitive(self):
        """Test LOG_LEVEL is case-insensitive."""
        assert _reload().is_production()


class TestDebugLines:
    """Test DEBUG output gating."""

    def teardown_method(self):
        with patch.dict('os.environ', {'LOG_LEVEL': 'dev'}):
            _reload()

    @patch.dict('os.environ', {'LOG_LEVEL': 'dev'})
    def test_debug_printed_in_dev(self, capsys):
        """Test debug lines appear in dev mode."""
        _reload().debug("rejected sample a=1/2")

        assert "DEBUG: rejected sample a=1/2" in capsys.readouterr().out

    @patch.dict('os.environ', {'LOG_LEVEL': 'prod'})
    def test_debug_dropped_in_prod(self, capsys):
        """Test debug lines are suppressed in prod mode."""
        _reload().debug("rejected sample a=1/2")

        assert capsys.readouterr().out == ""


class TestMetricsSanitization:
    """Test truncation of symbolic payloads."""

    def teardown_method(self):
        with patch.dict('os.environ', {'LOG_LEVEL': 'dev'}):
            _reload()

    @patch.dict('os.environ', {'LOG_LEVEL': 'dev'})
    def test_dev_mode_keeps_full_diff(self):
        """Test dev mode logs mismatch values in full."""
        diff = "(a**3 + 7*a + 1)/(a**2 - 4)" * 10
        metrics = {"event": "verify", "id": "thm73-a", "diff": diff}

        assert _reload().sanitize_metrics(metrics) == metrics

    @patch.dict('os.environ', {'LOG_LEVEL': 'prod'})
    def test_prod_mode_truncates_symbolic_keys(self):
        """Test value, diff and expr are shortened in prod mode."""
        module = _reload()
        long_text = "x" * 200
        result = module.sanitize_metrics({"value": long_text, "diff": long_text, "expr": long_text})

        for key in ("value", "diff", "expr"):
            assert result[key].endswith("...")
            assert len(result[key]) == module.MAX_SYMBOLIC_LENGTH + 3

    @patch.dict('os.environ', {'LOG_LEVEL': 'prod'})
    def test_prod_mode_keeps_identifiers(self):
        """Test ids, orders, flags and timings survive untouched."""
        metrics = {"event": "verify", "id": "thm812", "order": 40, "pass": True, "millis": 1234}

        assert _reload().sanitize_metrics(metrics) == metrics

    @patch.dict('os.environ', {'LOG_LEVEL': 'prod'})
    def test_short_payload_untouched(self):
        """Test short symbolic values are not truncated."""
        assert _reload().truncate_symbolic("-1/3") == "-1/3"


class TestEmitMetric:
    """Test the METRICS line format."""

    def test_single_json_line(self, capsys):
        """Test one parseable METRICS line per event."""
        config.log_policy.emit_metric({"event": "belyi", "map_id": "zeta_23", "degree": 10})

        out = capsys.readouterr().out.strip()
        assert out.startswith("METRICS: ")
        assert json.loads(out[len("METRICS: "):]) == {"event": "belyi", "map_id": "zeta_23", "degree": 10}
