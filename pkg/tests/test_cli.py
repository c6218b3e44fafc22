import json

import pytest

from ceei.cli import main


SEPARATION_DOC = '{"agents":2,"objects":4,"utilities":[[95,5,2,1],[1,2,5,95]]}'
BINARY_GAP_DOC = '{"agents":2,"objects":3,"utilities":[[1,1,0],[0,1,1]]}'


@pytest.fixture
def workdir(tmp_path):
    (tmp_path / "separation.json").write_text(SEPARATION_DOC)
    (tmp_path / "binary_gap.json").write_text(BINARY_GAP_DOC)
    (tmp_path / "lopsided.json").write_text('{"owner":[0,1,1,1]}')
    (tmp_path / "even.json").write_text('{"owner":[0,0,1,1]}')
    (tmp_path / "bad.json").write_text('{"agents":2,"objects":2,"utilities":[[1,0],[1,0]]}')
    return tmp_path


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    captured = capsys.readouterr()
    report = json.loads(captured.out) if captured.out else None
    return code, report, captured.err


class TestSolve:
    def test_solve_reports_exact_equilibrium(self, workdir, capsys):
        code, report, _ = run(capsys, "solve", workdir / "separation.json")
        assert code == 0
        result = report["result"]
        assert [u["exact"] for u in result["u_star"]] == ["100", "100"]
        assert [p["exact"] for p in result["p_star"]] == ["19/20", "1/20", "1/20", "19/20"]
        assert [p["decimal"] for p in result["p_star"]] == [0.95, 0.05, 0.05, 0.95]
        assert result["kkt_residual"] <= 1e-8

    def test_single_agent_prices_sum_to_one(self, workdir, capsys):
        (workdir / "solo.json").write_text('{"agents":1,"objects":2,"utilities":[[3,1]]}')
        code, report, _ = run(capsys, "solve", workdir / "solo.json")
        assert code == 0
        decimals = [p["decimal"] for p in report["result"]["p_star"]]
        assert sum(decimals) == 1.0

    def test_invalid_instance_exits_2(self, workdir, capsys):
        code, report, err = run(capsys, "solve", workdir / "bad.json")
        assert code == 2
        assert report is None
        assert "valued by no agent" in err

    def test_missing_file_exits_2(self, workdir, capsys):
        code, _, err = run(capsys, "solve", workdir / "absent.json")
        assert code == 2
        assert err

    def test_iteration_starved_solver_exits_3(self, workdir, capsys):
        code, report, err = run(
            capsys, "solve", workdir / "separation.json", "--max-iter", 1
        )
        assert code == 3
        assert report is None
        assert "no equilibrium" in err


class TestCheck:
    def test_lopsided_fails_fractional_support(self, workdir, capsys):
        code, report, _ = run(
            capsys, "check", workdir / "separation.json", workdir / "lopsided.json", "ceei-frac"
        )
        assert code == 1
        assert report["result"]["holds"] is False
        assert report["result"]["certificate"]["type"] == "ratio_gap"

    def test_lopsided_passes_envy_freeness(self, workdir, capsys):
        code, report, _ = run(
            capsys, "check", workdir / "separation.json", workdir / "lopsided.json", "ef"
        )
        assert code == 0
        assert report["result"]["certificate"] is None

    def test_even_passes_fractional_support(self, workdir, capsys):
        code, report, _ = run(
            capsys, "check", workdir / "separation.json", workdir / "even.json", "ceei-frac"
        )
        assert code == 0
        cert = report["result"]["certificate"]
        assert cert["type"] == "price_support"
        assert [p["exact"] for p in cert["prices"]] == ["19/20", "1/20", "1/20", "19/20"]

    def test_po_guard_exits_4(self, workdir, capsys):
        code, _, err = run(
            capsys,
            "check", workdir / "separation.json", workdir / "even.json", "po",
            "--limit-nodes", 10,
        )
        assert code == 4
        assert "limit" in err

    def test_malformed_assignment_exits_2(self, workdir, capsys):
        (workdir / "short.json").write_text('{"owner":[0,1]}')
        code, _, _ = run(
            capsys, "check", workdir / "separation.json", workdir / "short.json", "ef"
        )
        assert code == 2

    def test_discrete_support_check(self, workdir, capsys):
        (workdir / "ident.json").write_text('{"agents":2,"objects":3,"utilities":[[2,1,1],[2,1,1]]}')
        (workdir / "split.json").write_text('{"owner":[0,1,1]}')
        code, report, _ = run(
            capsys, "check", workdir / "ident.json", workdir / "split.json", "ceei-disc"
        )
        assert code == 0
        assert report["result"]["certificate"]["type"] == "price_support"


class TestSearch:
    def test_fractional_support_found(self, workdir, capsys):
        code, report, _ = run(capsys, "search", workdir / "separation.json", "ceei-frac")
        assert code == 0
        assert report["result"] == {"status": "found", "owner": [0, 0, 1, 1]}

    def test_fractional_support_none_exists(self, workdir, capsys):
        code, report, _ = run(capsys, "search", workdir / "binary_gap.json", "ceei-frac")
        assert code == 1
        assert report["result"]["status"] == "none"

    def test_odd_identical_split_none_exists(self, workdir, capsys):
        (workdir / "odd.json").write_text('{"agents":2,"objects":3,"utilities":[[3,1,1],[3,1,1]]}')
        code, report, _ = run(capsys, "search", workdir / "odd.json", "identical-ceei-disc")
        assert code == 1
        assert report["result"]["status"] == "none"

    def test_mnw_reports_welfare(self, workdir, capsys):
        code, report, _ = run(capsys, "search", workdir / "separation.json", "mnw")
        assert code == 0
        assert report["result"]["welfare"]["exact"] == "10000"
        assert report["result"]["status"] == "optimal"

    def test_truncated_search_exits_5(self, workdir, capsys):
        code, report, _ = run(
            capsys, "search", workdir / "separation.json", "ceei-frac", "--limit-nodes", 2
        )
        assert code == 5
        assert report["result"]["status"] == "inconclusive"

    def test_ceei_disc_search_reports_prices(self, workdir, capsys):
        code, report, _ = run(capsys, "search", workdir / "separation.json", "ceei-disc")
        assert code == 0
        assert report["result"]["status"] == "found"
        assert len(report["result"]["prices"]) == 4

    def test_binary_mnw_target(self, workdir, capsys):
        code, report, _ = run(capsys, "search", workdir / "binary_gap.json", "binary-mnw")
        assert code == 0
        assert report["result"]["welfare"]["exact"] == "2"

    def test_binary_mnw_on_general_instance_exits_2(self, workdir, capsys):
        code, _, err = run(capsys, "search", workdir / "separation.json", "binary-mnw")
        assert code == 2
        assert "not 0/1" in err


class TestGen:
    def test_partition_document(self, workdir, capsys):
        out = workdir / "part.json"
        code, report, _ = run(capsys, "gen", "partition", "--set", "2,1,1", "--out", out)
        assert code == 0
        assert out.read_text().strip() == '{"agents":2,"objects":3,"utilities":[[2,1,1],[2,1,1]]}'
        assert report["instance"]["digest"]

    def test_random_generation_is_deterministic(self, workdir, capsys):
        out1, out2 = workdir / "r1.json", workdir / "r2.json"
        code1, report1, _ = run(
            capsys, "gen", "random", "-n", 2, "-m", 4, "--max-util", 100, "--seed", 7, "--out", out1
        )
        code2, report2, _ = run(
            capsys, "gen", "random", "-n", 2, "-m", 4, "--max-util", 100, "--seed", 7, "--out", out2
        )
        assert code1 == code2 == 0
        assert out1.read_text() == out2.read_text()
        assert report1["instance"]["digest"] == report2["instance"]["digest"]

    def test_window_violation_exits_2(self, workdir, capsys):
        code, _, err = run(
            capsys,
            "gen", "3partition", "--weights", "2,4,4,3,3,4", "--bound", "10",
            "--out", workdir / "x.json",
        )
        assert code == 2
        assert "violates" in err

    def test_generated_instances_are_readable_by_solve(self, workdir, capsys):
        out = workdir / "g.json"
        run(capsys, "gen", "random", "-n", 3, "-m", 5, "--max-util", 9, "--seed", 3, "--out", out)
        code, report, _ = run(capsys, "solve", out)
        assert code == 0
        assert report["result"]["certified_exact"]


class TestReportShape:
    def test_reports_are_byte_identical_modulo_timings(self, workdir, capsys):
        reports = []
        for _ in range(2):
            code = main(["solve", str(workdir / "separation.json"), "--seed", "5"])
            out = capsys.readouterr().out
            body = json.loads(out)
            del body["timings"]
            reports.append(json.dumps(body, sort_keys=True))
            assert code == 0
        assert reports[0] == reports[1]

    def test_report_carries_instance_digest_and_config(self, workdir, capsys):
        code, report, _ = run(capsys, "solve", workdir / "separation.json")
        assert {"command", "instance", "config", "result", "timings"} <= set(report)
        assert report["instance"] == {
            "digest": report["instance"]["digest"],
            "agents": 2,
            "objects": 4,
        }
