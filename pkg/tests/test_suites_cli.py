import io
import json

import pytest

from osplax.checks import CheckReport, Witness
from osplax.cli import main, parse_ranks, read_config
from osplax.suites import (DEFAULT_RANKS, EXTENDED_RANKS, SUITES, SuiteOptions, UnknownSuiteError, emit_report,
                           exit_code, run_suite)


def _strip_times(reports):
    return [(r.check, r.family, r.n, r.m, r.verdict, r.witness) for r in reports]


# --------------------------------------------------------------------------- suites


def test_every_suite_has_default_ranks():
    assert set(DEFAULT_RANKS) == set(SUITES)
    assert set(EXTENDED_RANKS) <= set(SUITES)


def test_odd_conjecture_default_ranks_pass():
    reports = run_suite("odd-conjecture")
    assert {(r.n, r.m) for r in reports} == {(3, 1), (3, 2)}
    assert all(r.verdict == "pass" for r in reports)
    assert {r.check for r in reports} >= {"rtt-componentwise", "rtt-matrix-agree", "triple-vs-explicit"}


def test_ybe_single_rank():
    reports = run_suite("ybe", [(2, 0)])
    assert [r.verdict for r in reports] == ["pass", "pass"]
    assert reports[0].family.startswith("osp-R") and reports[1].family.startswith("gl-R")


def test_empty_rank_list():
    assert run_suite("ybe", []) == []


def test_unknown_suite():
    with pytest.raises(UnknownSuiteError):
        run_suite("nope")


def test_malformed_rank_is_an_error_report():
    reports = run_suite("odd-conjecture", [(4, 1)])
    assert len(reports) == 1 and reports[0].verdict == "error"
    assert "N odd" in reports[0].witness.detail
    assert exit_code(reports) == 2


def test_invariance_suite_passes_including_rejection():
    reports = run_suite("invariance", [(1, 1), (0, 1)])
    assert all(r.ok for r in reports)
    assert "invariance-generalized" in {r.check for r in reports}
    assert "invariance-Id_theta" in {r.check for r in reports}


def test_odd_flag_routes_quadratic_suite():
    reports = run_suite("osp-quadratic", [(1, 1)], SuiteOptions(odd=True))
    assert all(r.ok for r in reports)
    assert all("N=3" in r.family for r in reports)


def test_deterministic_up_to_timing():
    opt = SuiteOptions(seed=4)
    a = run_suite("twists", [(1, 1)], opt)
    b = run_suite("twists", [(1, 1)], opt)
    assert _strip_times(a) == _strip_times(b)
    assert all(r.ok for r in a)
    # the seed only changes the random twist sample
    c = run_suite("twists", [(1, 1)], SuiteOptions(seed=5))
    assert [r.check for r in a] != [r.check for r in c]


def test_workers_preserve_order():
    serial = run_suite("odd-conjecture", [(3, 1), (3, 2)])
    parallel = run_suite("odd-conjecture", [(3, 1), (3, 2)], SuiteOptions(workers=2))
    assert _strip_times(serial) == _strip_times(parallel)


# --------------------------------------------------------------------------- reports


def _sample_reports():
    return [CheckReport("rtt-componentwise", "fam", 1, 1, "pass", None, 1.5),
            CheckReport("rtt-componentwise", "fam", 2, 1, "fail", Witness("(i,j,k,l)=(1,2,2,1)", 3, "x\tc"), 2.0)]


def test_exit_codes():
    ok = CheckReport("c", verdict="pass")
    bad = CheckReport("c", verdict="fail", witness=Witness("w", 1))
    err = CheckReport("c", verdict="error", witness=Witness("exception", 0))
    assert exit_code([]) == 0
    assert exit_code([ok]) == 0
    assert exit_code([ok, bad]) == 1
    assert exit_code([bad, err]) == 2


def test_failing_report_needs_witness():
    with pytest.raises(ValueError):
        CheckReport("c", verdict="fail")
    with pytest.raises(ValueError):
        CheckReport("c", verdict="maybe")


def test_emit_json():
    buf = io.StringIO()
    emit_report(_sample_reports(), "json", buf, suite="demo")
    data = json.loads(buf.getvalue())
    assert data["schema"] == 1 and data["suite"] == "demo"
    assert [r["verdict"] for r in data["results"]] == ["pass", "fail"]
    assert data["results"][1]["witness"] == {"where": "(i,j,k,l)=(1,2,2,1)", "terms": 3, "detail": "x\tc"}


def test_emit_tsv():
    text = emit_report(_sample_reports(), "text")
    lines = text.splitlines()
    assert lines[0].split("\t") == ["check", "family", "n", "m", "verdict", "millis", "witness"]
    cols = lines[2].split("\t")
    assert len(cols) == 7
    assert cols[4] == "fail" and cols[6] == "(i,j,k,l)=(1,2,2,1); terms=3; x c"


def test_emit_unknown_format():
    with pytest.raises(ValueError):
        emit_report([], "xml")


# --------------------------------------------------------------------------- CLI


def test_parse_ranks():
    assert parse_ranks("1,1 2,1") == [(1, 1), (2, 1)]
    assert parse_ranks("3 1\n# comment\n3 2  # trailing\n") == [(3, 1), (3, 2)]
    assert parse_ranks("") == []
    with pytest.raises(ValueError):
        parse_ranks("1 2 3")


def test_read_config(tmp_path):
    p = tmp_path / "c.cfg"
    p.write_text("# defaults\nseed = 7\nranks.ybe = 2,0\n\nformat=json\n")
    assert read_config(str(p)) == {"seed": "7", "ranks.ybe": "2,0", "format": "json"}
    p.write_text("seed 7\n")
    with pytest.raises(ValueError):
        read_config(str(p))


def test_cli_text_to_stdout(capsys):
    assert main(["ybe", "--n", "2", "--m", "0"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[0].startswith("check\tfamily")
    assert len(out) == 3 and all("\tpass\t" in line for line in out[1:])


def test_cli_json_out_and_figure(tmp_path):
    out, fig = tmp_path / "r.json", tmp_path / "r.png"
    code = main(["odd-conjecture", "--n", "3", "--m", "1", "--format", "json", "--out", str(out),
                 "--figure", str(fig)])
    assert code == 0
    data = json.loads(out.read_text())
    assert data["suite"] == "odd-conjecture" and all(r["verdict"] == "pass" for r in data["results"])
    assert fig.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"


def test_cli_ranks_file_and_config(tmp_path, capsys):
    ranks = tmp_path / "ranks.txt"
    ranks.write_text("2 0\n0 1\n")
    assert main(["ybe", "--ranks", str(ranks)]) == 0
    assert len(capsys.readouterr().out.splitlines()) == 5
    cfg = tmp_path / "v.cfg"
    cfg.write_text("ranks.ybe = 2,0\nformat = json\n")
    assert main(["ybe", "--config", str(cfg)]) == 0
    data = json.loads(capsys.readouterr().out)
    assert {(r["n"], r["m"]) for r in data["results"]} == {(2, 0)}


def test_cli_error_exit(capsys):
    assert main(["odd-conjecture", "--n", "4", "--m", "1"]) == 2
    assert "\terror\t" in capsys.readouterr().out


def test_cli_fail_exit(monkeypatch, capsys):
    def broken(n, m, opt):
        return [CheckReport("demo", "x", n, m, "fail", Witness("entry (1,1)", 1, "residual"))]
    monkeypatch.setitem(SUITES, "demo", broken)
    monkeypatch.setitem(DEFAULT_RANKS, "demo", [(1, 1)])
    assert main(["demo"]) == 1
    assert "entry (1,1); terms=1; residual" in capsys.readouterr().out


def test_cli_rejects_half_rank():
    with pytest.raises(SystemExit) as exc:
        main(["ybe", "--n", "2"])
    assert exc.value.code == 2


def test_cli_extended_flag_appends_ranks(monkeypatch):
    seen = []

    def record(name, ranks, opt):
        seen.extend(ranks)
        return []
    monkeypatch.setattr("osplax.cli.run_suite", record)
    assert main(["odd-conjecture", "--extended"]) == 0
    assert seen == DEFAULT_RANKS["odd-conjecture"] + EXTENDED_RANKS["odd-conjecture"]

