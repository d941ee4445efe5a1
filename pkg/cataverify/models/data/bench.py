"""
Data interface between the bench command and the bench history.

Attributes:
    logger: A logger instance for the local module.
"""

import logging

from cataverify.config import VERSION
from cataverify.utils import datesToStrings

from ..models import db, BenchRun, BenchRow, DatabaseError

logger = logging.getLogger(__name__)

__all__ = [
    "recordBenchRun",
    "previousRun",
    "regressions",
    "getRuns",
]


def recordBenchRun(report) -> dict:
    """
    Saves a `BenchReport` as a `BenchRun` with its rows.

    Args:
        report: The `BenchReport`.

    Returns:
        A dictionary as follows:

        .. python::

            {
                'success': bool,  # True if the run was saved
                'msg': str,       # Error message if not
                'run_id': int,    # The new BenchRun id, or None
            }
    """
    res = {"success": False, "msg": "", "run_id": None}
    totals = report.totals
    try:
        with db.connection_context():
            with db.atomic():
                run = BenchRun.create(
                    version=VERSION,
                    solver=report.solver,
                    corpus=report.corpus,
                    attempted=totals.attempted,
                    verified=totals.verified,
                    transform_ms=totals.transform_ms,
                    checksat_ms=totals.checksat_ms,
                )
                for r in report.rows:
                    BenchRow.create(
                        run=run,
                        program=r.program,
                        attempted=r.attempted,
                        verified=r.verified,
                        transform_ms=r.transform_ms,
                        checksat_ms=r.checksat_ms,
                        status=r.status,
                    )
    except DatabaseError as exc:
        res["msg"] = f"Error saving bench run: {exc}"
        logger.error(res["msg"])
        return res

    res["success"] = True
    res["run_id"] = run.id
    logger.debug("Saved bench run %s", run.id)
    return res


def previousRun(corpus: str, before_id: int | None = None) -> BenchRun | None:
    """
    The latest `BenchRun` for ``corpus``, optionally older than the run with
    id ``before_id``.
    """
    with db.connection_context():
        query = BenchRun.select().where(BenchRun.corpus == corpus)
        if before_id is not None:
            query = query.where(BenchRun.id < before_id)
        return query.order_by(BenchRun.id.desc()).first()


def regressions(report, before_id: int | None = None) -> dict:
    """
    Compares a report with the previous run over the same corpus.

    Args:
        report: The `BenchReport`.
        before_id: Only consider runs older than this id, normally the id of
            the run just saved for ``report``.

    Returns:
        A dictionary as follows:

        .. python::

            {
                'success': bool,     # False if the history could not be read
                'msg': str,          # Error message if not
                'previous': int,     # Id of the run compared with, or None
                'regressions': [     # Programs that verify fewer contracts
                    (program, previous_verified, verified),
                    ...
                ],
            }
    """
    res = {"success": False, "msg": "", "previous": None, "regressions": []}
    try:
        prev = previousRun(report.corpus, before_id)
        if prev is None:
            res["success"] = True
            return res
        with db.connection_context():
            before = {r.program: r.verified for r in prev.rows}
    except DatabaseError as exc:
        res["msg"] = f"Error reading bench history: {exc}"
        logger.error(res["msg"])
        return res

    res["previous"] = prev.id
    for r in report.rows:
        if r.program in before and r.verified < before[r.program]:
            res["regressions"].append((r.program, before[r.program], r.verified))
    res["success"] = True
    return res


def getRuns(corpus: str | None = None, limit: int = 20) -> list[dict]:
    """
    The most recent bench runs as dicts, newest first, with dates as strings.
    """
    with db.connection_context():
        query = BenchRun.select().order_by(BenchRun.id.desc()).limit(limit)
        if corpus:
            query = query.where(BenchRun.corpus == corpus)
        return [datesToStrings(row) for row in query.dicts()]
