import json

import pytest

from prckit.cli import main


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def run_json(capsys, *argv):
    code, out, err = run_cli(capsys, *argv)
    return code, json.loads(out), err


CHAIN_ARGS = (
    "chain",
    "--exps", "powfact:3",
    "--seed", "2",
    "--depth", "3",
    "--mode", "min",
    "--gap-policy", "empirical",
)


class TestChainCommand:
    def test_powfact3(self, capsys):
        code, doc, _ = run_json(capsys, *CHAIN_ARGS)
        assert code == 0
        assert doc["primes"] == ["2", "11", str(11**81 + 140)]
        assert doc["conditional"] is False
        assert doc["certainty"] == ["deterministic", "deterministic", "probable:32"]
        assert doc["manifest"]["command"] == "chain"
        assert doc["manifest"]["gap_policy"] == "empirical"

    def test_factorial_conditional(self, capsys):
        code, doc, _ = run_json(
            capsys,
            "chain", "--exps", "factorial", "--seed", "2", "--depth", "6",
            "--mode", "min", "--gap-policy", "rh-cms",
        )
        assert code == 0
        assert doc["conditional"] is True
        p5 = (127**4 + 22) ** 5 + 104
        assert doc["primes"][-1] == str(p5**6 + 700)

    def test_composite_seed_exits_65(self, capsys):
        code, out, err = run_cli(
            capsys, "chain", "--exps", "const:3", "--seed", "4", "--depth", "2"
        )
        assert code == 65 and out == "" and "composite" in err

    def test_truncation_exits_2_with_partial_chain(self, capsys):
        code, out, err = run_cli(
            capsys, "chain", "--exps", "powfact:3", "--seed", "2", "--depth", "4"
        )
        assert code == 2
        doc = json.loads(out)
        assert doc["truncated"] is True and len(doc["primes"]) == 3
        assert "refused" in err

    def test_window_budget_exhaustion_exits_2(self, capsys):
        code, out, err = run_cli(
            capsys, "chain", "--exps", "const:3", "--seed", "2", "--depth", "3",
            "--window-budget", "1",
        )
        assert code == 2
        doc = json.loads(out)
        assert doc["truncated"] is True
        assert doc["manifest"]["config"]["window_budget"] == "1"
        assert len(doc["primes"]) < 3

    def test_bad_flags_exit_64(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["chain", "--exps", "const:3"])  # missing required flags
        assert exc.value.code == 64
        with pytest.raises(SystemExit) as exc:
            main(["chain", "--exps", "const:3", "--seed", "2", "--depth", "2",
                  "--gap-policy", "nope"])
        assert exc.value.code == 64

    def test_bad_exps_exit_64(self, capsys):
        code, out, err = run_cli(
            capsys, "chain", "--exps", "const:1", "--seed", "2", "--depth", "2"
        )
        assert code == 64 and "term 2" in err


class TestDigitsCommand:
    def test_mills_prefix(self, capsys):
        code, doc, _ = run_json(
            capsys,
            "digits", "--exps", "const:3", "--seed", "2", "--depth", "4",
            "--max-digits", "12",
        )
        assert code == 0
        assert doc["digits"].startswith("1.3063")
        assert int(doc["agreed_places"]) >= 4
        assert doc["enclosure"]["lo_mantissa"].isdigit()

    def test_text_format(self, capsys):
        code, out, err = run_cli(
            capsys,
            "digits", "--exps", "const:3", "--seed", "2", "--depth", "4",
            "--max-digits", "6", "--format", "text",
        )
        assert code == 0
        lines = out.strip().split("\n")
        assert lines[0].startswith("1.3063")
        assert lines[1].startswith("agreed_places=")

    def test_env_ceiling_refusal(self, capsys, monkeypatch):
        monkeypatch.setenv("PRC_BIT_CEILING", "4096")
        code, out, err = run_cli(
            capsys,
            "digits", "--exps", "powfact:3", "--seed", "2", "--depth", "3",
        )
        assert code == 2 and "refused" in err


class TestVerifyCommand:
    def test_roundtrip(self, capsys, tmp_path):
        code, out, _ = run_cli(capsys, *CHAIN_ARGS)
        assert code == 0
        chain_file = tmp_path / "chain.json"
        chain_file.write_text(out)
        code, doc, _ = run_json(capsys, "verify", "--chain-file", str(chain_file))
        assert code == 0 and doc["passed"] is True
        assert all(s["extremality"] == "verified" for s in doc["steps"])

    def test_tampered_chain_fails(self, capsys, tmp_path):
        code, out, _ = run_cli(capsys, *CHAIN_ARGS)
        doc = json.loads(out)
        doc["primes"][1] = "13"  # 11 is the true window minimum
        chain_file = tmp_path / "tampered.json"
        chain_file.write_text(json.dumps(doc))
        code, report, _ = run_json(capsys, "verify", "--chain-file", str(chain_file))
        assert code == 1 and report["passed"] is False
        assert report["steps"][0]["extremality"] == "failed"

    def test_missing_file_exits_66(self, capsys):
        code, out, err = run_cli(capsys, "verify", "--chain-file", "/nonexistent.json")
        assert code == 66 and out == ""

    def test_schema_mismatch_exits_66(self, capsys, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text('{"primes": ["2"]}')
        code, out, err = run_cli(capsys, "verify", "--chain-file", str(bad))
        assert code == 66 and "schema" in err
        notjson = tmp_path / "notjson.json"
        notjson.write_text("{broken")
        code, out, err = run_cli(capsys, "verify", "--chain-file", str(notjson))
        assert code == 66


class TestExploreCommand:
    def test_json_output(self, capsys):
        code, doc, _ = run_json(
            capsys, "explore", "--exps", "const:3", "--seeds", "2:3", "--depth", "2"
        )
        assert code == 0
        assert doc["violations"] == []
        roots = doc["forest"]["roots"]
        assert len(roots) == 2
        assert len(roots[0]["children"]) == 5
        assert len(roots[1]["children"]) == 9
        assert doc["stats"]["total_leaves"] == "14"

    def test_csv_output(self, capsys):
        code, out, err = run_cli(
            capsys,
            "explore", "--exps", "const:3", "--seeds", "2:3", "--depth", "2",
            "--format", "csv",
        )
        assert code == 0
        lines = out.strip().split("\n")
        assert len(lines) == 1 + 16  # header + 2 roots + 5 + 9 children

    def test_gap_level(self, capsys):
        code, doc, _ = run_json(
            capsys,
            "explore", "--exps", "const:3", "--seeds", "2:2", "--depth", "2",
            "--gap-level", "1",
        )
        assert code == 0
        assert [g["right_value"] for g in doc["gaps"]][0] == "11"
        assert len(doc["gaps"]) == 6

    def test_bad_seed_range(self, capsys):
        code, out, err = run_cli(
            capsys, "explore", "--exps", "const:3", "--seeds", "nope", "--depth", "2"
        )
        assert code == 64


class TestApproxCommand:
    def test_powfact3_separations(self, capsys):
        code, doc, _ = run_json(
            capsys,
            "approx", "--exps", "powfact:3", "--seed", "2", "--depth", "3",
            "--max-den", "10",
        )
        assert code == 0
        assert len(doc["records"]) == 10
        assert all(r["inside"] is False for r in doc["records"])
        r10 = doc["records"][9]
        assert (r10["den"], r10["num"]) == ("10", "13")
        num, den = map(int, r10["separation"].split("/"))
        assert num * 10000 >= 52 * den  # separation >= 0.0052


class TestDeterminism:
    @pytest.mark.parametrize(
        "argv",
        [
            CHAIN_ARGS,
            ("digits", "--exps", "const:3", "--seed", "2", "--depth", "3"),
            ("explore", "--exps", "const:3", "--seeds", "2:3", "--depth", "2"),
            ("approx", "--exps", "const:3", "--seed", "2", "--depth", "3",
             "--max-den", "7"),
        ],
    )
    def test_stdout_byte_identical(self, capsys, argv):
        code1, out1, _ = run_cli(capsys, *argv)
        code2, out2, _ = run_cli(capsys, *argv)
        assert code1 == code2 and out1 == out2

    def test_fixture_dir(self, capsys, tmp_path):
        code, out, _ = run_cli(capsys, *CHAIN_ARGS, "--fixture-dir", str(tmp_path))
        files = list(tmp_path.iterdir())
        assert len(files) == 1
        assert files[0].read_text() == out


def _only_string_leaves(value):
    if isinstance(value, dict):
        return all(_only_string_leaves(v) for v in value.values())
    if isinstance(value, list):
        return all(_only_string_leaves(v) for v in value)
    return value is None or isinstance(value, (str, bool))


class TestJsonHygiene:
    @pytest.mark.parametrize(
        "argv",
        [
            CHAIN_ARGS,
            ("digits", "--exps", "const:3", "--seed", "2", "--depth", "3"),
            ("explore", "--exps", "const:3", "--seeds", "2:3", "--depth", "2",
             "--gap-level", "1"),
            ("approx", "--exps", "const:3", "--seed", "2", "--depth", "3",
             "--max-den", "5"),
        ],
    )
    def test_numbers_are_decimal_strings(self, capsys, argv):
        code, doc, _ = run_json(capsys, *argv)
        assert _only_string_leaves(doc)

    def test_truncated_digits_exits_2_with_artifact(self, capsys):
        code, out, err = run_cli(
            capsys, "digits", "--exps", "powfact:3", "--seed", "2", "--depth", "4"
        )
        assert code == 2
        doc = json.loads(out)
        assert doc["truncated"] is True
        assert doc["digits"].startswith("1.3052998807")
