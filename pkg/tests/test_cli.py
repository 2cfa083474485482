"""
Tests for helpers.cli.
"""

import json

import pytest

from helpers.cli import EXIT_FAILED, EXIT_OK, EXIT_USAGE, main
from helpers.db_helper import cache_db_path, get_cache_stats


@pytest.fixture(autouse=True)
def no_persistent_cache(monkeypatch):
    monkeypatch.delenv("IQUANTUM_CACHE_DIR", raising=False)


def write_config(tmp_path, text, name="run.conf"):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return path


class TestVerify:
    """Test the verify command."""

    def test_verified_run_writes_records(self, tmp_path):
        """Test a verified run exits 0 and writes one JSON line per case."""
        config = write_config(tmp_path, "cartan = A1xA1\ncases = iserre, iserre-bridge\n")
        output = tmp_path / "out" / "report.jsonl"
        assert main(["verify", "--config", str(config), "--output", str(output)]) == EXIT_OK
        records = [json.loads(line) for line in output.read_text(encoding="utf-8").splitlines()]
        assert [r["case"] for r in records] == ["thm42", "prop34"]
        assert all(r["outcome"] == "verified" and r["witness"] is None for r in records)
        assert set(records[0]) == {"case", "claim", "params", "outcome", "witness", "elapsed_ms"}

    def test_refuted_run_exits_one(self, tmp_path, capsys):
        """Test a refuted case exits 1 and prints its witness to stdout."""
        config = write_config(tmp_path, "cartan = A2\nserre_mode = off\n")
        assert main(["verify", "--config", str(config), "--cases", "iserre"]) == EXIT_FAILED
        record = json.loads(capsys.readouterr().out.strip())
        assert record["outcome"] == "refuted"
        assert "serre_mode=off" in record["params"]

    def test_output_from_config(self, tmp_path):
        """Test the config's output path is used when --output is absent."""
        output = tmp_path / "from-config.jsonl"
        config = write_config(tmp_path, f"cartan = A1xA1\ncases = iserre\noutput = {output}\n")
        assert main(["verify", "--config", str(config)]) == EXIT_OK
        assert output.exists()

    def test_run_is_logged_when_cache_enabled(self, tmp_path, monkeypatch):
        """Test finished records reach the run log in IQUANTUM_CACHE_DIR."""
        monkeypatch.setenv("IQUANTUM_CACHE_DIR", str(tmp_path / "cache"))
        config = write_config(tmp_path, "label = smoke\ncartan = A1xA1\ncases = iserre\n")
        assert main(["verify", "--config", str(config), "--output", str(tmp_path / "r.jsonl")]) == EXIT_OK
        assert get_cache_stats(cache_db_path())["runs"] == {"verified": 1}

    def test_bad_config_exits_two(self, tmp_path, capsys):
        """Test a config error exits 2 with the line number on stderr."""
        config = write_config(tmp_path, "cartan = A2\nvarsigma.1 = 0\n")
        assert main(["verify", "--config", str(config)]) == EXIT_USAGE
        assert "line 2" in capsys.readouterr().err

    def test_missing_config_exits_two(self, tmp_path):
        """Test a missing config file exits 2."""
        assert main(["verify", "--config", str(tmp_path / "none.conf")]) == EXIT_USAGE

    def test_unknown_case_exits_two(self, tmp_path):
        """Test an unknown --cases entry exits 2."""
        config = write_config(tmp_path, "cartan = A2\n")
        assert main(["verify", "--config", str(config), "--cases", "bogus"]) == EXIT_USAGE


class TestShow:
    """Test the show command."""

    def test_idiv(self, capsys):
        """Test B_1^(1) prints its normal form."""
        assert main(["show", "idiv", "i=1", "n=1"]) == EXIT_OK
        assert capsys.readouterr().out.strip() == "(q)*K(-1,0)*E1 + F1"

    def test_tcomp(self, capsys):
        """Test T_{1,2,0} = K~_1^-2."""
        assert main(["show", "tcomp", "i=1", "n=2", "r=0"]) == EXIT_OK
        assert capsys.readouterr().out.strip() == "K(-2,0)"

    def test_serre(self, capsys):
        """Test the q-Serre element prints as a word combination."""
        assert main(["show", "serre", "i=1", "j=2", "--cartan", "A2"]) == EXIT_OK
        assert "E1E2E1" in capsys.readouterr().out.replace("*", "")

    def test_missing_argument(self, capsys):
        """Test a missing assignment exits 2."""
        assert main(["show", "tcomp", "i=1", "n=2"]) == EXIT_USAGE
        assert "missing arguments: r" in capsys.readouterr().err

    def test_malformed_argument(self):
        """Test a token without '=' or with a non-integer value exits 2."""
        assert main(["show", "idiv", "i", "n=1"]) == EXIT_USAGE
        assert main(["show", "idiv", "i=one", "n=1"]) == EXIT_USAGE

    def test_unknown_cartan(self):
        """Test an unknown catalogue name exits 2."""
        assert main(["show", "idiv", "i=1", "n=1", "--cartan", "E8"]) == EXIT_USAGE


class TestCache:
    """Test the cache command."""

    def test_stats_without_cache_dir(self, capsys):
        """Test stats reports in-memory mode when IQUANTUM_CACHE_DIR is unset."""
        assert main(["cache", "stats"]) == EXIT_OK
        assert "IQUANTUM_CACHE_DIR is not set" in capsys.readouterr().out

    def test_stats_and_clear(self, tmp_path, monkeypatch, capsys):
        """Test stats and clear print JSON for the cache file."""
        monkeypatch.setenv("IQUANTUM_CACHE_DIR", str(tmp_path))
        assert main(["cache", "stats"]) == EXIT_OK
        stats = json.loads(capsys.readouterr().out)
        assert stats["ideal_bases"]["bases"] == 0
        assert main(["cache", "clear"]) == EXIT_OK
        assert json.loads(capsys.readouterr().out) == {"ideal_bases": 0, "runs": 0}
