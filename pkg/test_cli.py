#!/usr/bin/env python3
"""
Tests for the symspace command line: reports, exit codes and determinism
"""

import sys
import os
import json

# Add the current directory to Python path
sys.path.append(os.path.dirname(os.path.abspath(__file__)))

import pytest

from main import EXIT_HYPOTHESIS, EXIT_INPUT, EXIT_OK, EXIT_RESOURCE, main
from symspace.config import get_settings

LZ21 = '{"space":"lz","p":2,"q":1}'
QUARTER = '{"kind":"step","cells":[[0.25,1.0]]}'


@pytest.fixture(autouse=True)
def fresh_settings():
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


class TestReports:
    def test_norm_of_indicator(self, capsys):
        code, out = run(capsys, "norm", "--fn", QUARTER, "--space", LZ21)
        assert code == EXIT_OK
        doc = json.loads(out)
        # ||chi_(0,t)||_{p,q} = (p/q)^{1/q} t^{1/p}
        assert doc["result"]["value"] == pytest.approx(1.0, rel=1e-12)
        assert doc["report"] == "symspace-report v1"
        assert doc["command"] == "norm"

    def test_refined_weak_norm(self, capsys):
        code, out = run(capsys, "norm", "--fn", '{"kind":"psi","p":2,"alpha":0}',
                        "--space", '{"space":"lz","p":2,"q":"inf"}', "--refine",
                        "--levels", "10:13", "--cells-per-octave", "8")
        assert code == EXIT_OK
        doc = json.loads(out)
        assert doc["member"] is True
        assert doc["result"]["value"] <= 1.0 + 1e-6

    def test_refined_member_stays_finite(self, capsys):
        code, out = run(capsys, "norm", "--fn", '{"kind":"psi","p":2,"alpha":0.6}',
                        "--space", '{"space":"lz","p":2,"q":2}', "--refine",
                        "--levels", "10:16", "--cells-per-octave", "8")
        assert code == EXIT_OK
        doc = json.loads(out)
        assert doc["member"] is True
        assert doc["result"]["divergent"] is False
        assert doc["result"]["value"] <= 5.0 ** 0.5

    def test_timing_only_on_request(self, capsys):
        _, out = run(capsys, "norm", "--fn", QUARTER, "--space", LZ21)
        assert "wall_time" not in json.loads(out)
        _, out = run(capsys, "norm", "--fn", QUARTER, "--space", LZ21, "--timing")
        assert json.loads(out)["wall_time"] >= 0

    def test_csv_header(self, capsys):
        code, out = run(capsys, "rearrange", "--fn", '{"kind":"step","cells":[[0.25,1],[0.5,3]]}',
                        "--out", "csv")
        assert code == EXIT_OK
        lines = out.splitlines()
        assert lines[0] == "# symspace-report v1"
        assert lines[1] == "left,measure,value"
        assert lines[2] == "0,0.5,3"

    def test_oneil_verdict(self, capsys):
        code, out = run(capsys, "oneil", "--p", "2", "--q", "4", "--r", "4", "--s", "8")
        assert code == EXIT_OK
        doc = json.loads(out)
        assert doc["verdict"]["bounded"] == "no"
        assert doc["verdict"]["failing_condition"] == "cond2"

    def test_report_file(self, capsys, tmp_path):
        target = tmp_path / "report.json"
        code, out = run(capsys, "oneil", "--p", "2", "--q", "2", "--r", "2", "--s", "2",
                        "--output", str(target))
        assert code == EXIT_OK
        assert out == ""
        assert json.loads(target.read_text())["verdict"]["bounded"] == "yes"

    def test_identical_runs(self, capsys):
        argv = ("k-check", "--space", '{"space":"lz","p":2,"q":2}', "--m-max", "8", "--trials", "5")
        _, first = run(capsys, *argv)
        _, second = run(capsys, *argv)
        assert first == second

    def test_verify_critical_target(self, capsys):
        code, out = run(capsys, "verify", "thm21", "--levels", "10:14", "--cells-per-octave", "8")
        assert code == EXIT_OK
        doc = json.loads(out)
        assert doc["classification"] == "bounded"
        assert doc["holds"] is True
        assert [row["level"] for row in doc["levels"]] == [10, 11, 12, 13, 14]


class TestSweep:
    def test_verdicts_are_sorted(self, capsys):
        code, out = run(capsys, "sweep", "--p", "2", "--q", "4,2", "--r", "4", "--s", "8,4",
                        "--verdict-only")
        assert code == EXIT_OK
        rows = json.loads(out)["rows"]
        assert [(row["q"], row["s"]) for row in rows] == [(2.0, 4.0), (2.0, 8.0), (4.0, 4.0), (4.0, 8.0)]
        assert "ratio" not in rows[0]

    def test_empty_grid(self, capsys):
        code, _ = run(capsys, "sweep", "--p", "2", "--q", "4", "--r", "4", "--s", "", "--verdict-only")
        assert code == EXIT_RESOURCE

    def test_grid_above_cap(self, capsys, monkeypatch):
        monkeypatch.setenv("SYMSPACE_SWEEP_CAP", "1")
        get_settings.cache_clear()
        code, _ = run(capsys, "sweep", "--p", "2", "--q", "4", "--r", "4", "--s", "4,8", "--verdict-only")
        assert code == EXIT_RESOURCE


class TestExitCodes:
    def test_bad_space(self, capsys):
        code, out = run(capsys, "norm", "--fn", QUARTER, "--space", '{"space":"lz","p":0.5,"q":2}')
        assert code == EXIT_INPUT
        assert out == ""

    def test_malformed_json(self, capsys):
        code, _ = run(capsys, "norm", "--fn", '{"kind":', "--space", LZ21)
        assert code == EXIT_INPUT

    def test_missing_file(self, capsys, tmp_path):
        code, _ = run(capsys, "norm", "--fn", "@" + str(tmp_path / "absent.json"), "--space", LZ21)
        assert code == EXIT_INPUT

    def test_unknown_command(self, capsys):
        code, _ = run(capsys, "frobnicate")
        assert code == EXIT_INPUT

    def test_witness_outside_hypotheses(self, capsys):
        code, _ = run(capsys, "witness", "--p", "2", "--r", "4", "--q", "4", "--beta", "-0.3",
                      "--levels", "10:12")
        assert code == EXIT_HYPOTHESIS

    def test_bad_levels(self, capsys):
        code, _ = run(capsys, "witness", "--p", "2", "--r", "4", "--q", "4", "--beta", "0.1",
                      "--levels", "ten")
        assert code == EXIT_INPUT

    @pytest.mark.parametrize("theorem", ["thm21", "thm25", "cor27"])
    def test_verify_outside_ordering(self, capsys, theorem):
        # r < p breaks 1 < p <= r <= q
        code, out = run(capsys, "verify", theorem, "--p", "2", "--r", "1.5", "--q", "4",
                        "--levels", "10:13")
        assert code == EXIT_HYPOTHESIS
        assert out == ""


class TestConditionFourteenVerdicts:
    def test_lebesgue_constant_is_bounded(self, capsys):
        code, out = run(capsys, "verify", "thm114", "--space", '{"space":"lz","p":2,"q":2}',
                        "--m-max", "16", "--trials", "5")
        assert code == EXIT_OK
        doc = json.loads(out)
        assert doc["classification"] == "bounded"
        assert doc["growth"]["classification"] == "bounded"

    def test_growth_claim_uses_classification(self, capsys):
        code, out = run(capsys, "verify", "cor112", "--space", '{"space":"lz","p":2,"q":2}',
                        "--count", "3", "--m-max", "16", "--trials", "5")
        assert code == EXIT_OK
        doc = json.loads(out)
        assert doc["condition14"]["growth"]["classification"] == "bounded"
        assert doc["condition14_grows"] is False
        assert doc["holds"] is False
