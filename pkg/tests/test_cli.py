"""Command-line surface: dispatch, exit-code partition, deterministic
byte-identical reports, JSON emission, and the bundled reproductions."""

import json

import pytest

from formalpatch.cli import main
from formalpatch.instance import bundled_path
from formalpatch.repro import REPRO_IDS


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestExitCodes:
    def test_unknown_command(self, capsys):
        code, _, _ = run(capsys, "frobnicate")
        assert code == 2

    def test_depth_zero_is_usage_error(self, capsys):
        code, _, _ = run(capsys, "solve", bundled_path("a2-ideal-xy"), "--depth", "0")
        assert code == 2

    def test_unknown_repro_id(self, capsys):
        code, _, err = run(capsys, "repro", "bogus")
        assert code == 2
        assert "bogus" in err

    def test_missing_instance_file(self, capsys):
        code, _, err = run(capsys, "solve", "/nonexistent/nowhere.json")
        assert code == 3
        assert "cannot read" in err

    def test_empty_instance_file(self, capsys, tmp_path):
        p = tmp_path / "empty.json"
        p.write_text("")
        code, _, err = run(capsys, "solve", str(p))
        assert code == 3
        assert "missing key: ring" in err

    def test_semantic_error_carries_key_path(self, capsys, tmp_path):
        p = tmp_path / "bad.json"
        p.write_text(json.dumps({
            "ring": {"vars": ["x", "t"], "t": "t"},
            "primes": {"components": [["x"]], "separators": ["1"]},
        }))
        code, _, err = run(capsys, "solve", str(p))
        assert code == 3
        assert str(p) in err and "primes" in err

    def test_unstabilized_schedule_is_budget_exit(self, capsys):
        code, out, _ = run(
            capsys, "solve", bundled_path("a1-partial-fractions"), "--dmax", "0"
        )
        assert code == 4
        assert "UNSTABILIZED" in out

    def test_failed_check_is_exit_one(self, capsys):
        code, out, _ = run(
            capsys, "cover", bundled_path("a2-ideal-xy"), "--pool", "t"
        )
        assert code == 1
        assert "FAIL" in out


class TestSolve:
    def test_a2_report(self, capsys):
        code, out, _ = run(capsys, "solve", bundled_path("a2-ideal-xy"))
        assert code == 0
        assert "status: PASS" in out
        assert "denominator: 1" in out
        assert "sections: ((0, 1))/y ~ ((1, 0))/x" in out
        assert "check flatness level 0: PASS  [FLAT]" in out
        assert "summary: CERTIFIED-AT-DEPTH" in out

    def test_records_sorted_by_name_then_level(self, capsys):
        _, out, _ = run(capsys, "solve", bundled_path("a2-ideal-xy"))
        keys = []
        for line in out.splitlines():
            if line.startswith("check "):
                name, _, rest = line[len("check "):].partition(" level ")
                keys.append((name, int(rest.split(":")[0])))
        assert keys == sorted(keys)


class TestTowerVerify:
    def test_xmtn(self, capsys):
        code, out, _ = run(capsys, "tower-verify", bundled_path("xm-tn"))
        assert code == 0
        assert "stabilization-index: 2" in out
        assert "summary: PASS (24 checks)" in out


class TestSymbolicPower:
    def test_strict_on_surface_singularity(self, capsys):
        code, out, _ = run(
            capsys, "symbolic-power", bundled_path("a1-symbolic"),
            "--prime", "1", "--n", "2",
        )
        assert code == 0
        assert "STRICT; x in P^(2) but not in P^2" in out

    def test_defaults_from_instance(self, capsys):
        _, flagged, _ = run(
            capsys, "symbolic-power", bundled_path("a1-symbolic"),
            "--prime", "1", "--n", "2",
        )
        _, defaulted, _ = run(capsys, "symbolic-power", bundled_path("a1-symbolic"))
        assert flagged == defaulted

    def test_equal_for_first_power(self, capsys):
        code, out, _ = run(
            capsys, "symbolic-power", bundled_path("a1-symbolic"), "--n", "1"
        )
        assert code == 0
        assert "EQUAL" in out

    def test_prime_index_out_of_range(self, capsys):
        code, _, err = run(
            capsys, "symbolic-power", bundled_path("a1-symbolic"), "--prime", "7"
        )
        assert code == 3
        assert "out of range" in err


class TestCover:
    def test_two_planes_pool(self, capsys):
        code, out, _ = run(
            capsys, "cover", bundled_path("two-planes"), "--pool", "1 + x, 1 + y"
        )
        assert code == 0
        assert "f1 = x + 1, f2 = y + 1" in out


class TestCertify:
    def test_candidate_ideal(self, capsys):
        code, out, _ = run(
            capsys, "certify", bundled_path("a2-ideal-xy"), "--candidate", "I"
        )
        assert code == 0
        assert "summary: PASS (12 checks)" in out

    def test_unknown_candidate(self, capsys):
        code, _, err = run(
            capsys, "certify", bundled_path("a2-ideal-xy"), "--candidate", "nope"
        )
        assert code == 3
        assert "unknown candidate" in err


class TestReproDeterminism:
    @pytest.mark.parametrize("rid", sorted(REPRO_IDS))
    def test_byte_identical_runs(self, capsys, rid):
        code1, out1, _ = run(capsys, "repro", rid)
        code2, out2, _ = run(capsys, "repro", rid)
        assert code1 == code2 == 0
        assert out1 == out2
        assert out1.endswith("\n")

    def test_two_planes_is_demonstration(self, capsys):
        _, out, _ = run(capsys, "repro", "two-planes")
        assert "DEMONSTRATION  [strictly larger than the base image" in out
        assert "summary: DEMONSTRATION" in out


class TestJsonAndOut:
    def test_json_matches_text_records(self, capsys):
        _, text_out, _ = run(capsys, "repro", "a1-symbolic")
        _, json_out, _ = run(capsys, "repro", "a1-symbolic", "--json")
        doc = json.loads(json_out)
        assert doc["version"] and doc["command"] == "repro"
        text_checks = [l for l in text_out.splitlines() if l.startswith("check ")]
        assert len(doc["records"]) == len(text_checks)
        for rec in doc["records"]:
            assert rec["verdict"] == "PASS"

    def test_out_file_mirrors_stdout(self, capsys, tmp_path):
        target = tmp_path / "report.txt"
        _, out, _ = run(
            capsys, "repro", "a1-symbolic", "--out", str(target)
        )
        assert target.read_text() == out


def test_selftest_passes(capsys):
    code = main(["selftest"])
    out = capsys.readouterr().out
    assert code == 0
    assert "check schedule-independence level 0: PASS" in out
    assert "summary: PASS" in out
