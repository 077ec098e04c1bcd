"""End-to-end tests for the command-line front end.

Oracles: a hand-enumerated ensemble for (k=2, N=5), the hand-reduced
normalizing constant 96/35 for (k=2, N=10), the classical density value
rho(2) = 1 - ln 2, direct recomputation of region labels, and byte
comparison of re-emitted artifacts for the reproducibility guarantee.
"""

import json
import math

import pytest

import kfree
from kfree.cli import argv_of, run
from kfree.errors import DomainError
from kfree.smoothsum import error_region

# Hand enumeration: squarefree integers whose prime factors are at most 5.
SQUAREFREE_5_SMOOTH = [1, 2, 3, 5, 6, 10, 15, 30]

# Z(2, 1, 10) = (1 + 1/2)(1 + 1/3)(1 + 1/5)(1 + 1/7) = 96/35 by hand.
PARTITION_2_1_10 = 96.0 / 35.0


def invoke(argv, tmp_path, name="out.json"):
    """Run the CLI writing to a temp file; return (exit code, parsed text)."""
    path = tmp_path / name
    code = run([*argv, "--output", str(path)])
    text = path.read_text(encoding="utf-8") if path.exists() else ""
    return code, text


def invoke_json(argv, tmp_path, name="out.json"):
    code, text = invoke(argv, tmp_path, name)
    return code, (json.loads(text) if text else None)


class TestNamedExamples:
    def test_enumerate_squarefree_five_smooth(self, tmp_path):
        code, doc = invoke_json(["enumerate", "--k", "2", "--N", "5"], tmp_path)
        assert code == 0
        assert doc["result"]["elements"] == SQUAREFREE_5_SMOOTH
        assert doc["result"]["count"] == 8

    def test_charfn_at_zero_is_one(self, tmp_path):
        argv = ["charfn", "--k", "2", "--alpha", "1", "--N", "10", "--lambda", "0"]
        code, doc = invoke_json(argv, tmp_path)
        assert code == 0
        value = doc["result"]["value"]
        assert abs(value["re"] - 1.0) <= 1e-13
        assert abs(value["im"]) <= 1e-13

    def test_example_chain_passes(self, tmp_path):
        code, doc = invoke_json(["example", "--r", "5", "--M", "1000"], tmp_path)
        assert code == 0
        report = doc["result"]["report"]
        assert report["passed"] is True
        assert report["midpoint_sum"] == pytest.approx(0.23821680383626, abs=1e-9)

    def test_partition_matches_hand_product(self, tmp_path):
        code, doc = invoke_json(["partition", "--k", "2", "--alpha", "1", "--N", "10"], tmp_path)
        assert code == 0
        value = doc["result"]["value"]
        assert value["re"] == pytest.approx(PARTITION_2_1_10, abs=1e-14)
        assert value["im"] == pytest.approx(0.0, abs=1e-14)


class TestArtifactShape:
    def test_top_level_keys_and_version(self, tmp_path):
        code, doc = invoke_json(["partition", "--k", "2", "--N", "10"], tmp_path)
        assert code == 0
        assert sorted(doc) == ["result", "run_config", "version"]
        assert doc["version"] == kfree.__version__
        assert doc["run_config"]["command"] == "partition"
        assert doc["run_config"]["format"] == "json"

    def test_constant_report_serialized(self, tmp_path):
        argv = ["constant", "--k", "2", "--alpha-re", "1", "--N-list", "1000,10000,100000"]
        code, doc = invoke_json(argv, tmp_path)
        assert code == 0
        report = doc["result"]["report"]
        assert report["value"]["re"] == pytest.approx(1.0830924965, abs=1e-6)
        assert report["supported"]
        assert doc["run_config"]["N_list"] == [1000, 10000, 100000]

    def test_sum_routes_agree(self, tmp_path):
        base = ["sum", "--k", "2", "--N", "30", "--alpha-re", "1"]
        code_d, doc_d = invoke_json([*base, "--route", "direct"], tmp_path, "d.json")
        code_s, doc_s = invoke_json([*base, "--route", "spectral"], tmp_path, "s.json")
        assert code_d == 0 and code_s == 0
        direct = doc_d["result"]["value"]
        spectral = doc_s["result"]["value"]
        assert abs(complex(direct["re"], direct["im"]) - complex(spectral["re"], spectral["im"])) < 1e-9
        assert doc_s["result"]["declared_tolerance"] > 0.0

    def test_asymptotic_route_embeds_report(self, tmp_path):
        argv = ["sum", "--k", "2", "--N", "30", "--route", "asymptotic"]
        code, doc = invoke_json(argv, tmp_path)
        assert code == 0
        report = doc["result"]["report"]
        assert report["N"] == 30
        assert set(report["ratios"]) == {"direct_over_spectral", "spectral_over_asymptotic"}

    def test_limit_charfn_grid_rows(self, tmp_path):
        argv = ["limit-charfn", "--alpha-re", "1", "--lambda-grid", "0", "2", "5"]
        code, doc = invoke_json(argv, tmp_path)
        assert code == 0
        rows = doc["result"]["rows"]
        assert len(rows) == 5
        assert rows[0]["lambda"] == 0.0
        assert rows[0]["re"] == pytest.approx(1.0, abs=1e-12)


class TestRoundTrip:
    CASES = [
        ["enumerate", "--k", "2", "--N", "5"],
        ["partition", "--k", "2", "--alpha-re", "0.5", "--alpha-im", "0.25", "--N", "13"],
        ["constant", "--k", "2", "--N-list", "1000,10000,100000"],
        ["charfn", "--k", "2", "--alpha-re", "0.5", "--N", "100", "--lambda-grid", "0", "2", "4"],
        ["limit-charfn", "--alpha-re", "1", "--lambda", "0.5", "--lambda", "1"],
        ["dickman", "--alpha", "1", "--u-max", "3", "--points", "7"],
        ["sum", "--k", "2", "--N", "30", "--R-rule", "power", "--tau", "0.3"],
        ["compare", "--k", "2", "--N", "10"],
        ["regions", "--tau-grid", "0.1", "0.9", "3", "--eta-list", "1.5,2.5", "--delta", "0.25"],
        ["example", "--r", "4", "--M", "60"],
        ["appendix", "--k", "2", "--term", "2,1,1", "--N-list", "1000,10000", "--lambda", "1"],
    ]

    @pytest.mark.parametrize("argv", CASES, ids=lambda argv: argv[0])
    def test_reemitted_config_reproduces_bytes(self, argv, tmp_path):
        path = tmp_path / "first.json"
        first_code = run([*argv, "--output", str(path)])
        assert first_code in (0, 3)
        first = path.read_bytes()
        config = json.loads(first.decode("utf-8"))["run_config"]
        replay = argv_of(config)
        assert run(replay) == first_code
        assert path.read_bytes() == first

    def test_csv_round_trip(self, tmp_path):
        argv = [
            "charfn", "--k", "2", "--N", "50",
            "--lambda-grid", "0", "1", "3", "--format", "csv",
        ]
        path = tmp_path / "grid.csv"
        assert run([*argv, "--output", str(path)]) == 0
        first = path.read_bytes()
        header = first.decode("utf-8").splitlines()[1]
        config = json.loads(header.removeprefix("# run-config: "))
        assert run(argv_of(config)) == 0
        assert path.read_bytes() == first

    def test_argv_of_rejects_unknown_command(self):
        with pytest.raises(DomainError, match="unknown command"):
            argv_of({"command": "frobnicate"})


class TestCsvFormat:
    def test_charfn_columns(self, tmp_path):
        argv = [
            "charfn", "--k", "2", "--alpha-re", "1", "--N", "100",
            "--lambda-grid", "0", "2", "4", "--format", "csv",
        ]
        code, text = invoke(argv, tmp_path, "grid.csv")
        assert code == 0
        lines = text.splitlines()
        assert lines[0] == f"# kfree-version: {kfree.__version__}"
        assert lines[1].startswith("# run-config: ")
        assert lines[2] == "lambda,re,im"
        rows = [line.split(",") for line in lines[3:]]
        assert len(rows) == 4
        assert float(rows[0][0]) == 0.0
        assert float(rows[0][1]) == pytest.approx(1.0, abs=1e-13)

    def test_cells_round_trip_binary64(self, tmp_path):
        argv = ["charfn", "--k", "2", "--N", "100", "--lambda", "1.7", "--format", "csv"]
        code, text = invoke(argv, tmp_path, "one.csv")
        assert code == 0
        _, re_cell, im_cell = text.splitlines()[-1].split(",")
        code, doc = invoke_json(
            ["charfn", "--k", "2", "--N", "100", "--lambda", "1.7"], tmp_path, "one.json"
        )
        assert float(re_cell) == doc["result"]["value"]["re"]
        assert float(im_cell) == doc["result"]["value"]["im"]

    def test_dickman_density_values(self, tmp_path):
        argv = ["dickman", "--alpha", "1", "--u-max", "4", "--points", "5", "--format", "csv"]
        code, text = invoke(argv, tmp_path, "rho.csv")
        assert code == 0
        lines = text.splitlines()
        assert lines[2] == "u,rho,w"
        table = {float(u): float(rho) for u, rho, _ in (line.split(",") for line in lines[3:])}
        assert table[0.0] == pytest.approx(1.0, abs=1e-12)
        assert table[2.0] == pytest.approx(1.0 - math.log(2.0), abs=1e-6)

    def test_regions_rows_match_direct_evaluation(self, tmp_path):
        argv = [
            "regions", "--tau-list", "0.1,0.5,0.9", "--eta-list", "2,4",
            "--delta", "0.5", "--format", "csv",
        ]
        code, text = invoke(argv, tmp_path, "regions.csv")
        assert code == 0
        rows = [line.split(",") for line in text.splitlines()[3:]]
        assert len(rows) == 6
        for tau_cell, eta_cell, case in rows:
            assert case == error_region(float(tau_cell), float(eta_cell), 0.5)

    def test_appendix_rows_and_fit_comment(self, tmp_path):
        argv = [
            "appendix", "--k", "2", "--term", "2,1,1",
            "--N-list", "1000,10000", "--lambda", "1", "--format", "csv",
        ]
        code, text = invoke(argv, tmp_path, "scan.csv")
        assert code == 0
        lines = text.splitlines()
        assert any(line.startswith("# fit: model=") for line in lines)
        data = [line.split(",") for line in lines if line and not line.startswith("#")]
        assert data[0] == ["N", "lambda", "term", "magnitude"]
        assert [row[2] for row in data[1:]] == ["2-1-1", "2-1-1"]
        assert all(float(row[3]) > 0 for row in data[1:])

    def test_csv_unavailable_for_scalar_commands(self, tmp_path):
        code, _ = invoke(["partition", "--k", "2", "--N", "10", "--format", "csv"], tmp_path)
        assert code == 2


class TestExitCodes:
    def test_unknown_subcommand_usage(self, capsys):
        assert run(["frobnicate"]) == 2
        capsys.readouterr()

    def test_missing_required_flag(self, capsys):
        assert run(["charfn", "--N", "10", "--lambda", "1"]) == 2
        capsys.readouterr()

    def test_charfn_without_frequency(self, capsys):
        assert run(["charfn", "--k", "2", "--N", "10"]) == 2
        assert "--lambda" in capsys.readouterr().err

    def test_alpha_alias_conflicts_with_alpha_re(self, capsys):
        argv = ["partition", "--k", "2", "--N", "10", "--alpha", "1", "--alpha-re", "1"]
        assert run(argv) == 2
        capsys.readouterr()

    def test_lambda_conflicts_with_grid(self, capsys):
        argv = [
            "charfn", "--k", "2", "--N", "10",
            "--lambda", "1", "--lambda-grid", "0", "1", "3",
        ]
        assert run(argv) == 2
        capsys.readouterr()

    def test_unknown_cutoff_is_domain_error(self, capsys):
        assert run(["sum", "--k", "2", "--N", "10", "--cutoff", "nope"]) == 2
        assert "unknown cutoff" in capsys.readouterr().err

    def test_dickman_rejects_complex_weight(self, capsys):
        assert run(["dickman", "--alpha-re", "1", "--alpha-im", "0.5"]) == 2
        assert "real" in capsys.readouterr().err

    def test_enumeration_cap_refusal(self, capsys):
        assert run(["enumerate", "--k", "2", "--N", "5", "--cap", "4"]) == 4
        capsys.readouterr()

    def test_failed_chain_exits_three(self, tmp_path, capsys):
        code, doc = invoke_json(["example", "--r", "5", "--M", "40"], tmp_path)
        assert code == 3
        assert doc["result"]["report"]["passed"] is False
        assert "chain" in capsys.readouterr().err

    def test_compare_disagreement_exits_three(self, tmp_path, capsys, monkeypatch):
        import kfree.cli as cli_module

        real = cli_module.smooth_sum_direct
        monkeypatch.setattr(
            cli_module, "smooth_sum_direct", lambda cfg, f: real(cfg, f) + 1.0
        )
        code, doc = invoke_json(["compare", "--k", "2", "--N", "10"], tmp_path)
        assert code == 3
        assert doc["result"]["agree"] is False
        assert doc["result"]["difference"] > doc["result"]["declared_tolerance"]
        assert "disagree" in capsys.readouterr().err

    def test_compare_agreement_exits_zero(self, tmp_path):
        code, doc = invoke_json(["compare", "--k", "2", "--N", "13"], tmp_path)
        assert code == 0
        assert doc["result"]["agree"] is True
        assert doc["result"]["difference"] <= doc["result"]["declared_tolerance"]

    def test_unwritable_output_path(self, capsys):
        argv = ["partition", "--k", "2", "--N", "10", "--output", "/nonexistent-dir/x.json"]
        assert run(argv) == 2
        capsys.readouterr()

    def test_bad_threads_env(self, capsys, monkeypatch):
        monkeypatch.setenv("KFREE_THREADS", "abc")
        assert run(["partition", "--k", "2", "--N", "10"]) == 2
        assert "KFREE_THREADS" in capsys.readouterr().err

    def test_nonpositive_threads_flag(self, capsys):
        assert run(["partition", "--k", "2", "--N", "10", "--threads", "0"]) == 2
        capsys.readouterr()


class TestTruncationRules:
    def test_fixed_radius(self, tmp_path):
        argv = ["sum", "--k", "2", "--N", "30", "--R-rule", "fixed", "--R", "6"]
        code, doc = invoke_json(argv, tmp_path)
        assert code == 0
        assert doc["result"]["R"] == 6.0

    def test_log_over_loglog_radius(self, tmp_path):
        argv = ["sum", "--k", "2", "--N", "10000", "--R-rule", "logN/loglogN"]
        code, doc = invoke_json(argv, tmp_path)
        assert code == 0
        log_n = math.log(10000.0)
        assert doc["result"]["R"] == pytest.approx(log_n / math.log(log_n), rel=1e-12)

    def test_power_radius(self, tmp_path):
        argv = ["sum", "--k", "2", "--N", "10000", "--R-rule", "power", "--tau", "0.5"]
        code, doc = invoke_json(argv, tmp_path)
        assert code == 0
        assert doc["result"]["R"] == pytest.approx(math.sqrt(math.log(10000.0)), rel=1e-12)

    def test_fixed_rule_requires_radius(self, capsys):
        assert run(["sum", "--k", "2", "--N", "30", "--R-rule", "fixed"]) == 2
        assert "--R" in capsys.readouterr().err

    def test_power_rule_requires_tau(self, capsys):
        assert run(["sum", "--k", "2", "--N", "30", "--R-rule", "power"]) == 2
        assert "--tau" in capsys.readouterr().err


class TestThreads:
    def test_flag_recorded(self, tmp_path):
        code, doc = invoke_json(["partition", "--k", "2", "--N", "10", "--threads", "1"], tmp_path)
        assert code == 0
        assert doc["run_config"]["threads"] == 1

    def test_env_fallback(self, tmp_path, monkeypatch):
        monkeypatch.setenv("KFREE_THREADS", "3")
        code, doc = invoke_json(["partition", "--k", "2", "--N", "10"], tmp_path)
        assert code == 0
        assert doc["run_config"]["threads"] == 3

    def test_flag_beats_env(self, tmp_path, monkeypatch):
        monkeypatch.setenv("KFREE_THREADS", "3")
        code, doc = invoke_json(["partition", "--k", "2", "--N", "10", "--threads", "1"], tmp_path)
        assert code == 0
        assert doc["run_config"]["threads"] == 1


class TestHelp:
    def test_help_documents_csv_columns_and_exit_codes(self, capsys):
        assert run(["--help"]) == 0
        out = capsys.readouterr().out
        assert "lambda, re, im" in out
        assert "u, rho, w" in out
        assert "Exit codes" in out
        assert "KFREE_THREADS" in out

    def test_version_flag(self, capsys):
        assert run(["--version"]) == 0
        assert kfree.__version__ in capsys.readouterr().out
