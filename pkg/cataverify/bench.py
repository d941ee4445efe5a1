"""
The benchmark runner.

Every ``.pl`` file of the corpus directory is verified in a bounded worker
pool. The outcomes are collected in a `BenchReport`, rendered as an aligned
text table and as CSV.
"""

import csv
import io
import logging

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path

from cataverify.backend import verify, VerdictStatus
from cataverify.utils import alignedTable, fmtMs

__all__ = ["ReportRow", "BenchReport", "corpusFiles", "runProblem", "runBench"]

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ReportRow:
    """
    Outcome for one program.

    Attributes:
        program: The input file stem.
        attempted: Number of contracts.
        verified: Number of verified contracts.
        transform_ms: Transformation time.
        checksat_ms: Solver time.
        status: ``ok`` or ``failed``.
        msg: The error for failed rows.
        solver: The solver that answered.
    """

    program: str
    attempted: int = 0
    verified: int = 0
    transform_ms: float = 0.0
    checksat_ms: float = 0.0
    status: str = "ok"
    msg: str = ""
    solver: str = ""


@dataclass
class BenchReport:
    """
    The rows of a bench run, ordered by program name.
    """

    corpus: str
    rows: list[ReportRow] = field(default_factory=list)

    @property
    def totals(self) -> ReportRow:
        return ReportRow(
            "total",
            sum(r.attempted for r in self.rows),
            sum(r.verified for r in self.rows),
            sum(r.transform_ms for r in self.rows),
            sum(r.checksat_ms for r in self.rows),
            "ok" if all(r.status == "ok" for r in self.rows) else "failed",
        )

    @property
    def solver(self) -> str:
        return next((r.solver for r in self.rows if r.solver), "")

    def table(self) -> str:
        header = ["program", "attempted", "verified", "transform ms", "checksat ms", "status"]
        rows = [
            [r.program, r.attempted, r.verified, fmtMs(r.transform_ms), fmtMs(r.checksat_ms), r.status]
            for r in self.rows + ([self.totals] if self.rows else [])
        ]
        return alignedTable(header, rows, right={1, 2, 3, 4})

    def csv(self) -> str:
        out = io.StringIO()
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(["program", "attempted", "verified", "transform_ms", "checksat_ms", "status"])
        for r in self.rows + ([self.totals] if self.rows else []):
            writer.writerow(
                [
                    r.program,
                    r.attempted,
                    r.verified,
                    fmtMs(r.transform_ms, ""),
                    fmtMs(r.checksat_ms, ""),
                    r.status,
                ]
            )
        return out.getvalue()


def corpusFiles(corpus: Path) -> list[Path]:
    return sorted(p for p in Path(corpus).glob("*.pl") if p.is_file())


def runProblem(path: Path, cfg) -> ReportRow:
    """
    Verifies one corpus program. Errors are recorded in the row, never
    raised.
    """
    prob_cfg = replace(cfg, output_dir=Path(cfg.output_dir) / path.stem)
    res = verify(path, prob_cfg)
    verdicts = res["verdicts"]
    failed = res["exit_code"] >= 2 or any(
        v.status is VerdictStatus.FAILED for v in verdicts
    )
    row = ReportRow(
        path.stem,
        len(verdicts),
        sum(v.status is VerdictStatus.VERIFIED for v in verdicts),
        res["transform_ms"],
        res["checksat_ms"],
        "failed" if failed else "ok",
        res["msg"],
        next((v.solver for v in verdicts if v.solver), ""),
    )
    logger.info("%s: %s/%s verified", row.program, row.verified, row.attempted)
    return row


def runBench(cfg, corpus: Path) -> BenchReport:
    """
    Runs `verify` on every corpus program with ``cfg.jobs`` workers.

    Returns:
        The `BenchReport`. An empty corpus gives an empty report.
    """
    files = corpusFiles(corpus)
    logger.info("Running %s programs from %s with %s workers", len(files), corpus, cfg.jobs)
    report = BenchReport(str(corpus))
    if not files:
        return report
    with ThreadPoolExecutor(max_workers=cfg.jobs) as pool:
        rows = list(pool.map(lambda p: runProblem(p, cfg), files))
    report.rows = sorted(rows, key=lambda r: r.program)
    return report
