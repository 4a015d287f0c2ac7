import json
import math

import numpy as np
import pytest

from gapcert import cli, experiments
from gapcert.experiments import (
    ExperimentReport,
    Verdict,
    derive_seed,
    haar_verify,
    make_verdict,
    mc_concentration,
    mc_delta3_frequency,
    mc_ed_crosscheck,
    moment_report,
    report_to_json,
    run_certification,
    trial_rng,
    verify_suite,
    write_report,
)
from gapcert.randmat import levy_tail_bound, trace_tail_bound


# --- seeding -----------------------------------------------------------------

def test_derive_seed_stable_and_distinct():
    assert derive_seed(42, 0) == derive_seed(42, 0)
    seeds = {derive_seed(42, i) for i in range(1000)}
    assert len(seeds) == 1000
    assert derive_seed(42, 1) != derive_seed(43, 1)


def test_trial_rng_independent_of_order():
    a = trial_rng(7, 3).standard_normal(4)
    _ = trial_rng(7, 9).standard_normal(10)
    b = trial_rng(7, 3).standard_normal(4)
    assert np.array_equal(a, b)


# --- report serialization -------------------------------------------------------

def test_json_float_format():
    report = ExperimentReport(
        experiment_kind="x", parameters={"a": 0.1}, statistics={}, verdicts=[],
    )
    text = report_to_json(report)
    assert '"a": 0.10000000000000001' in text


def test_json_is_valid_and_ordered():
    report = ExperimentReport(
        experiment_kind="x",
        parameters={"b": 1, "a": 2},
        statistics={"list": [1, 2.5, True], "nested": {"k": None}},
        verdicts=[make_verdict("v", 1.0, "<=", 2.0)],
    )
    text = report_to_json(report)
    parsed = json.loads(text)
    assert list(parsed) == ["experiment_kind", "parameters", "statistics",
                            "verdicts", "provenance"]
    assert list(parsed["parameters"]) == ["b", "a"]   # insertion order kept
    assert parsed["verdicts"][0]["passed"] is True


def test_statistics_reproducible_byte_for_byte():
    def stats_block():
        report = mc_delta3_frequency(3, 200, 0.25, seed=5)
        return report_to_json(report).split('"statistics"')[1].split('"verdicts"')[0]

    assert stats_block() == stats_block()


def test_threads_do_not_change_statistics():
    a = mc_delta3_frequency(3, 500, 0.3, seed=9, threads=1)
    b = mc_delta3_frequency(3, 500, 0.3, seed=9, threads=4)
    assert a.statistics == b.statistics


def test_write_report(tmp_path):
    report = moment_report(4, p_max=3)
    path = tmp_path / "report.json"
    write_report(report, path)
    parsed = json.loads(path.read_text())
    assert parsed["experiment_kind"] == "moments"


# --- monte carlo experiments -------------------------------------------------------

def test_mc_delta3_threshold_zero_gives_frequency_one():
    report = mc_delta3_frequency(3, 500, 0.0, seed=1)
    assert report.statistics["frequency"] == 1.0


def test_mc_delta3_rejects_tiny_n():
    with pytest.raises(ValueError):
        mc_delta3_frequency(3, 50, 0.5, seed=1)


def test_mc_crosscheck_no_violations():
    for d in (2, 4):
        report = mc_ed_crosscheck(d, 200, seed=3)
        assert report.statistics["max_violation"] <= 1e-9
        assert report.all_passed


def test_mc_crosscheck_product_controls():
    report = mc_ed_crosscheck(3, 20, seed=4, product_controls=2)
    assert report.statistics["product_controls_excluded"] == 2
    assert report.statistics["entangled_draws"] == 20
    assert len(report.statistics["control_dense_gaps"]) == 2
    # the product chain keeps gap 1; it is excluded from the closed-form check
    for gap in report.statistics["control_dense_gaps"]:
        assert gap == pytest.approx(1.0, abs=1e-8)


def test_mc_concentration_structure():
    report = mc_concentration(6, delta=0.4, epsilon=0.5, N=2000, seed=11)
    stats = report.statistics
    assert 0.0 <= stats["trace_tail_frequency"] <= 1.0
    assert stats["trace_tail_bound"] == pytest.approx(trace_tail_bound(6, 0.4))
    assert stats["norm_tail_claimed_bound"] == pytest.approx(levy_tail_bound(6, 0.5))
    assert stats["md_minimizing_p"] >= 1
    names = [v.name for v in report.verdicts]
    assert any("trace tail" in n for n in names)
    assert any("gaussian rate" in n for n in names)
    # the trace tail is the well-behaved one; assert it here
    trace_verdict = report.verdicts[0]
    assert trace_verdict.passed


def test_mc_concentration_extreme_tail_empty():
    report = mc_concentration(6, delta=0.9, epsilon=3.0, N=2000, seed=12)
    assert report.statistics["trace_tail_frequency"] == 0.0
    assert report.statistics["norm_tail_frequency"] == 0.0


# --- certification pipeline ---------------------------------------------------------

def test_run_certification_goe(tmp_path):
    graph_file = tmp_path / "path3.txt"
    graph_file.write_text("0 1\n1 2\n")
    out = tmp_path / "report.json"
    report, cert = run_certification(
        graph_file, {"kind": "goe", "d": 6, "seed": 1}, output=out,
    )
    assert cert.kind == "two-leg"
    parsed = json.loads(out.read_text())
    cross = parsed["statistics"]["dense_cross_check"]
    assert cross["total_dimension"] == 216
    if cert.valid:
        assert cert.bound <= cross["gap"] + 1e-8


def test_run_certification_haar_star(tmp_path):
    graph_file = tmp_path / "star3.txt"
    graph_file.write_text("0 1\n0 2\n")
    report, cert = run_certification(graph_file, {"kind": "haar", "q": 2, "t": 1})
    assert cert.kind == "star"
    assert report.statistics["dense_cross_check"]["total_dimension"] == 64


def test_run_certification_bad_model(tmp_path):
    graph_file = tmp_path / "g.txt"
    graph_file.write_text("0 1\n")
    with pytest.raises(ValueError):
        run_certification(graph_file, {"kind": "nope"})


# --- auxiliary experiment verbs ------------------------------------------------------

def test_haar_verify_passes():
    report = haar_verify(2, 1, max_chain=3)
    assert report.all_passed
    assert report.statistics["residual_path3"] <= 1e-10


def test_moment_report_passes():
    report = moment_report(15, p_max=4)
    assert report.all_passed
    assert report.statistics["unit_variance_trace_moments"]["4"] == 16764510


# --- verify-suite mechanics -----------------------------------------------------------

def test_verify_suite_level_validation():
    with pytest.raises(ValueError):
        verify_suite(level="medium")


def test_verify_suite_aggregation(monkeypatch):
    calls = []

    def fake_pass(seed=0):
        calls.append(("pass", seed))
        return [make_verdict("ok", 1.0, "<=", 2.0)]

    def fake_fail():
        calls.append(("fail", None))
        return [make_verdict("bad", 3.0, "<=", 2.0)]

    monkeypatch.setattr(experiments, "ACCEPTANCE_CHECKS", [
        ("A", fake_pass, True),
        ("B", fake_fail, True),
        ("C", fake_pass, False),    # full-only
    ])
    fast = verify_suite(level="fast", seed=7)
    assert fast.statistics["checks_run"] == ["A", "B"]
    assert fast.statistics["verdicts_passed"] == 1
    assert fast.statistics["verdicts_failed"] == 1
    assert not fast.all_passed
    full = verify_suite(level="full", seed=7)
    assert full.statistics["checks_run"] == ["A", "B", "C"]
    assert ("pass", 7) in calls


# --- CLI ------------------------------------------------------------------------------

def test_cli_mc_delta3(capsys):
    code = cli.main(["mc-delta3", "--d", "3", "--n", "200",
                     "--threshold", "0", "--seed", "3"])
    out = capsys.readouterr().out
    assert code == 0
    assert "PASS" in out


def test_cli_json_output(capsys):
    code = cli.main(["moments", "--d", "5", "--p-max", "3", "--json"])
    out = capsys.readouterr().out
    assert code == 0
    parsed = json.loads(out)
    assert parsed["experiment_kind"] == "moments"


def test_cli_certify_and_exit_codes(tmp_path, capsys):
    good = tmp_path / "path3.txt"
    good.write_text("0 1\n1 2\n")
    code = cli.main(["certify", str(good), "--model", "goe", "--d", "6",
                     "--seed", "1", "--out", str(tmp_path / "r.json")])
    capsys.readouterr()
    assert code in (0, 1)   # 1 if the random certificate came out invalid
    assert (tmp_path / "r.json").exists()


def test_cli_malformed_edge_list_exits_2(tmp_path, capsys):
    bad = tmp_path / "bad.txt"
    bad.write_text("0 1\n0 0\n")
    code = cli.main(["certify", str(bad), "--model", "goe", "--d", "4"])
    out = capsys.readouterr().out
    assert code == 2
    error = json.loads(out)["error"]
    assert "line 2" in error["message"]


def test_cli_missing_file_exits_2(tmp_path, capsys):
    code = cli.main(["certify", str(tmp_path / "nope.txt"),
                     "--model", "goe", "--d", "4"])
    out = capsys.readouterr().out
    assert code == 2
    assert "error" in json.loads(out)


def test_cli_haar_requires_q_t(capsys, tmp_path):
    g = tmp_path / "g.txt"
    g.write_text("0 1\n")
    code = cli.main(["certify", str(g), "--model", "haar"])
    assert code == 2
