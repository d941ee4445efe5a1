"""
Bench reports, the bench runner and the bench history.
"""

import shutil

import pytest

from cataverify.bench import BenchReport, ReportRow, runBench
from cataverify.models.models import db, initDb
from cataverify.models.data import getRuns, recordBenchRun, regressions

from .conftest import corpusPath


def report(verified: int, corpus: str = "corpus") -> BenchReport:
    return BenchReport(
        corpus,
        [
            ReportRow("append", 2, verified, 1500.2, 27790.4, "ok", solver="z3 4.13"),
            ReportRow("bubble", 3, 3, 310.0, 9.6, "ok"),
        ],
    )


def test_totals():
    totals = report(2).totals
    assert (totals.attempted, totals.verified, totals.status) == (5, 5, "ok")
    assert totals.transform_ms == pytest.approx(1810.2)
    failed = BenchReport("c", [ReportRow("x", status="failed"), ReportRow("y")])
    assert failed.totals.status == "failed"


def test_table():
    lines = report(1).table().splitlines()
    assert lines[0].split() == ["program", "attempted", "verified", "transform", "ms", "checksat", "ms", "status"]
    assert set(lines[1].replace(" ", "")) == {"-"}
    assert lines[2].split() == ["append", "2", "1", "1", "500", "27", "790", "ok"]
    assert lines[-1].startswith("total")
    assert len({len(line) for line in lines[:2]}) == 1


def test_csv():
    assert report(2).csv().splitlines() == [
        "program,attempted,verified,transform_ms,checksat_ms,status",
        "append,2,2,1500,27790,ok",
        "bubble,3,3,310,10,ok",
        "total,5,5,1810,27800,ok",
    ]


def test_empty_report():
    empty = BenchReport("corpus")
    assert len(empty.table().splitlines()) == 2
    assert empty.csv().splitlines() == [
        "program,attempted,verified,transform_ms,checksat_ms,status"
    ]
    assert empty.solver == ""


@pytest.fixture
def history(tmp_path):
    initDb(tmp_path / "history.db")
    yield
    db.close()


def test_history_regressions(history):
    first = recordBenchRun(report(2))
    assert first["success"], first["msg"]
    res = regressions(report(2), first["run_id"])
    assert res["success"]
    assert res["previous"] is None
    assert res["regressions"] == []

    second = recordBenchRun(report(1))
    res = regressions(report(1), second["run_id"])
    assert res["previous"] == first["run_id"]
    assert res["regressions"] == [("append", 2, 1)]


def test_history_runs(history):
    recordBenchRun(report(2))
    recordBenchRun(report(1))
    recordBenchRun(report(0, corpus="other"))
    runs = getRuns("corpus")
    assert [r["verified"] for r in runs] == [4, 5]
    assert isinstance(runs[0]["created"], str)
    assert runs[0]["solver"] == "z3 4.13"
    assert len(getRuns(limit=1)) == 1


def test_bench_empty_corpus(run_cfg, tmp_path):
    corpus = tmp_path / "empty"
    corpus.mkdir()
    res = runBench(run_cfg(), corpus)
    assert res.rows == []


def test_bench_with_stub_solver(run_cfg, stub_solver, tmp_path):
    corpus = tmp_path / "corpus"
    corpus.mkdir()
    shutil.copy(corpusPath("reverse"), corpus)
    (corpus / "broken.pl").write_text("p(X :- q.\n", encoding="utf-8")
    cfg = run_cfg(solver_path=stub_solver("sat"), baseline=True, jobs=2)

    res = runBench(cfg, corpus)
    assert [r.program for r in res.rows] == ["broken", "reverse"]
    broken, rev = res.rows
    assert broken.status == "failed"
    assert broken.msg
    assert (rev.status, rev.attempted, rev.verified) == ("ok", 2, 2)
    assert (cfg.output_dir / "reverse" / "reverse.verdicts").is_file()
    assert res.totals.status == "failed"
