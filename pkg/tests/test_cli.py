from __future__ import annotations

import json

import pandas as pd
import pytest

from src.cli import EXIT_FAIL, EXIT_OK, EXIT_USAGE, main
from src.designs import make_steiner, save_steiner


@pytest.fixture
def example_files(tmp_path):
    code, cert = tmp_path / "ex.json", tmp_path / "ex.cert.json"
    assert main(["example", "--out", str(code)]) == EXIT_OK
    assert cert.exists()
    return code, cert


def _json_out(capsys) -> dict:
    return json.loads(capsys.readouterr().out)


class TestExampleFlow:
    def test_certify_then_verify(self, example_files, capsys):
        code, cert = example_files
        capsys.readouterr()
        assert main(["certify", "--code", str(code), "--cert", str(cert)]) == EXIT_OK
        assert capsys.readouterr().out.strip() == "pass k=3 rate=3/4"
        assert main(["verify", "--code", str(code)]) == EXIT_OK
        out = capsys.readouterr().out
        assert out.strip().splitlines()[-1] == "k=3 (exact) rate=3/4"
        assert "x_12: 3" in out

    def test_verify_lower_bound_mode(self, example_files, capsys):
        code, _ = example_files
        capsys.readouterr()
        assert main(["verify", "--code", str(code), "--exact-limit", "0"]) == EXIT_OK
        assert "(lower bound)" in capsys.readouterr().out

    def test_mutated_certificate_fails(self, example_files, capsys):
        code, cert = example_files
        doc = json.loads(cert.read_text())
        doc["parts"][0] = [[1], [2], [3]]
        cert.write_text(json.dumps(doc))
        capsys.readouterr()
        assert main(["certify", "--code", str(code), "--cert", str(cert)]) == EXIT_FAIL
        assert capsys.readouterr().out.startswith("fail: non-spanning at x_1 set #2")

    def test_certify_json(self, example_files, capsys):
        code, cert = example_files
        capsys.readouterr()
        assert main(["--format", "json", "certify", "--code", str(code), "--cert", str(cert)]) == EXIT_OK
        doc = _json_out(capsys)
        assert doc == {"ok": True, "claimed_k": 3, "violation": None}

    def test_example_to_stdout(self, capsys):
        assert main(["example"]) == EXIT_OK
        doc = json.loads(capsys.readouterr().out)
        assert (doc["p"], doc["t"], doc["m"]) == (12, 7, 4)


class TestConstruct:
    def test_two_type(self, tmp_path, capsys):
        out = tmp_path / "c1.json"
        assert main(["construct", "--family", "c1", "--t", "2", "--d", "2", "--out", str(out)]) == EXIT_OK
        text = capsys.readouterr().out
        assert text.splitlines()[0] == "m=10 k=7 rate=7/10"
        assert "two-type construction" in text
        assert (tmp_path / "c1.cert.json").exists()

        assert main(["certify", "--code", str(out), "--cert", str(tmp_path / "c1.cert.json")]) == EXIT_OK
        assert capsys.readouterr().out.strip() == "pass k=7 rate=7/10"

    def test_multi_type(self, tmp_path, capsys):
        out = tmp_path / "g.json"
        assert main(["construct", "--family", "general", "--s", "3", "--t", "2", "--out", str(out)]) == EXIT_OK
        assert "rate=79/129" in capsys.readouterr().out

    def test_steiner_json(self, tmp_path, capsys):
        out = tmp_path / "c2.json"
        args = ["--format", "json", "construct", "--family", "c2", "--t", "5", "--d", "2", "--out", str(out)]
        assert main(args) == EXIT_OK
        doc = _json_out(capsys)
        assert (doc["m"], doc["k"], doc["rate"]) == (35, 29, "29/35")
        assert doc["cert"] == str(tmp_path / "c2.cert.json")

    def test_auto(self, tmp_path, capsys):
        out = tmp_path / "auto.json"
        assert main(["--format", "json", "construct", "--family", "auto", "--s", "7/3", "--t", "3", "--out", str(out)]) == EXIT_OK
        doc = _json_out(capsys)
        assert doc["family"]["name"] == "general-rational"
        assert doc["rate"] == "52/77"

    def test_d_above_t_is_usage_error(self, tmp_path):
        args = ["construct", "--family", "c1", "--t", "2", "--d", "3", "--out", str(tmp_path / "x.json")]
        assert main(args) == EXIT_USAGE

    @pytest.mark.parametrize("family,s", [("c1", "7/5"), ("auto", "2")])
    def test_steiner_file_needs_c2(self, tmp_path, family, s):
        design = tmp_path / "fano.json"
        design.write_bytes(save_steiner(make_steiner(2, 7)))
        out = tmp_path / "x.json"
        args = ["construct", "--family", family, "--s", s, "--t", "5", "--steiner", str(design), "--out", str(out)]
        assert main(args) == EXIT_USAGE
        assert not out.exists()

    def test_steiner_file_used_by_c2(self, tmp_path, capsys):
        design = tmp_path / "fano.json"
        design.write_bytes(save_steiner(make_steiner(2, 7)))
        args = ["construct", "--family", "c2", "--t", "5", "--d", "2", "--steiner", str(design), "--out", str(tmp_path / "c2.json")]
        assert main(args) == EXIT_OK
        assert capsys.readouterr().out.startswith("m=35 k=29 rate=29/35")

    def test_capacity_is_usage_error(self, tmp_path):
        args = ["construct", "--family", "general", "--s", "3", "--t", "2", "--max-servers", "100", "--out", str(tmp_path / "x.json")]
        assert main(args) == EXIT_USAGE


class TestBounds:
    def test_tight_row(self, capsys):
        assert main(["bounds", "--s", "2", "--t", "3"]) == EXIT_OK
        assert "tight g=5/7" in capsys.readouterr().out

    def test_seven_thirds(self, capsys):
        assert main(["bounds", "--s", "7/3", "--t", "3"]) == EXIT_OK
        out = capsys.readouterr().out
        assert "23/35" in out
        assert "52/77" in out
        assert "gap lower=52/77 upper=43/63" in out
        assert "limit over t (singleton counting): 5/7" in out

    def test_inadmissible_note(self, capsys):
        assert main(["--format", "json", "bounds", "--s", "5/2", "--t", "3"]) == EXIT_OK
        doc = _json_out(capsys)
        assert doc["lower"] == []
        assert doc["best_lower"] is None
        assert "not an integer" in doc["notes"]

    def test_bad_s(self):
        assert main(["bounds", "--s", "1", "--t", "3"]) == EXIT_USAGE

    def test_table_csv(self, tmp_path, capsys):
        path = tmp_path / "bounds.csv"
        assert main(["table", "--s-list", "3/2,2,3", "--t-max", "4", "--csv", str(path)]) == EXIT_OK
        df = pd.read_csv(path)
        assert len(df) == 12
        assert list(df.columns[:4]) == ["s", "t", "best_lower", "best_upper"]

    def test_table_json(self, capsys):
        assert main(["--format", "json", "table", "--s-list", "2", "--t-min", "2", "--t-max", "3"]) == EXIT_OK
        rows = _json_out(capsys)["rows"]
        assert [r["best_lower"] for r in rows] == ["7/10", "5/7"]
        assert all(r["tight"] for r in rows)


class TestEmulate:
    def test_deterministic_for_seed(self, example_files, capsys):
        code, cert = example_files
        capsys.readouterr()
        args = ["--format", "json", "emulate", "--code", str(code), "--cert", str(cert), "--seed", "3", "--trials", "5"]
        assert main(args) == EXIT_OK
        first = _json_out(capsys)
        assert main(args) == EXIT_OK
        assert _json_out(capsys) == first
        assert first["ok"] is True
        assert first["recoveries"] == 5 * 36

    def test_invalid_certificate(self, example_files, capsys):
        code, cert = example_files
        doc = json.loads(cert.read_text())
        doc["parts"][3] = [[1], [1, 4]]
        cert.write_text(json.dumps(doc))
        assert main(["emulate", "--code", str(code), "--cert", str(cert)]) == EXIT_FAIL

    def test_corrupt_code_file(self, tmp_path, example_files):
        _, cert = example_files
        bad = tmp_path / "bad.json"
        bad.write_text("{not json")
        assert main(["emulate", "--code", str(bad), "--cert", str(cert)]) == EXIT_USAGE

    def test_missing_file(self, tmp_path):
        assert main(["verify", "--code", str(tmp_path / "nope.json")]) == EXIT_USAGE


class TestGrid:
    def test_auto_grid(self, tmp_path, capsys):
        out = tmp_path / "grid.csv"
        args = ["--format", "json", "grid", "--s-list", "2,5/3", "--t-max", "2", "--verify-limit", "10", "--out", str(out)]
        assert main(args) == EXIT_OK
        rows = _json_out(capsys)["rows"]
        assert len(rows) == 2
        assert rows[0]["m"] == 10 and rows[0]["certified"] is True and rows[0]["exact_k"] == 7
        assert rows[1]["notes"].startswith("error=")
        assert len(pd.read_csv(out)) == 2
