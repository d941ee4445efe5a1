"""
Command line entry point.

Usage::

    cata-verify [-v|-q] [--config FILE] transform [options] INPUT...
    cata-verify [-v|-q] [--config FILE] verify [options] INPUT...
    cata-verify [-v|-q] [--config FILE] bench [options] [CORPUS]
    cata-verify [-v|-q] [--config FILE] check INPUT...
    cata-verify [-v|-q] [--config FILE] replay INPUT TRACE

Inputs may be files or directories, which stand for the ``.pl`` files in
them.

Exit codes: 0 when all contracts are verified, 1 when some are not, 2 for
usage and input errors, 3 for solver and other infrastructure errors.

Attributes:
    logger: The module level logger
"""

import argparse
import logging
import sys

from pathlib import Path

from cataverify.config import VERSION, CORPUS_DIR, loadRunConfig
from cataverify.errors import CataVerifyError, ConfigError
from cataverify.backend import verify, transformOnly, exitCode
from cataverify.bench import runBench
from cataverify.cata import classify, functionalityTotalityReport, tupleAll
from cataverify.constraints import ConstraintEngine
from cataverify.frontend import parseFile
from cataverify.smt import openSession
from cataverify.transform import replayStepLog
from cataverify.models.models import initDb
from cataverify.models.data import recordBenchRun, regressions

logger = logging.getLogger(__name__)


def _addRunOptions(p: argparse.ArgumentParser, solve: bool = True):
    p.add_argument("--output", dest="output_dir", help="Output directory")
    p.add_argument("--smt", dest="smt_path", help="SMT solver for constraint queries")
    p.add_argument("--iteration-cap", type=int, help="Transformation loop limit")
    p.add_argument("--query-timeout", dest="query_timeout_ms", type=int, help="ms")
    p.add_argument(
        "--tuple-zygo",
        action="store_true",
        default=None,
        help="Tuple zygomorphisms into plain catamorphisms first",
    )
    p.add_argument("--trace", action="store_true", default=None, help="Write the step log")
    p.add_argument(
        "--emit", choices=["both", "prolog", "smt2"], help="Which formats to write"
    )
    p.add_argument(
        "--baseline",
        action="store_true",
        default=None,
        help="Do not transform, emit the clauses with datatypes",
    )
    if solve:
        p.add_argument("--solver", dest="solver_path", help="CHC solver executable")
        p.add_argument("--timeout", dest="problem_timeout_s", type=int, help="Solver timeout (s)")
        p.add_argument(
            "--per-contract",
            action="store_true",
            default=None,
            help="One transformation and solve per contract",
        )


def parseArgs(argv=None) -> argparse.Namespace:
    parser = argparse.ArgumentParser(
        prog="cata-verify",
        description="Verify catamorphism contracts of constrained Horn clauses.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {VERSION}")
    level = parser.add_mutually_exclusive_group()
    level.add_argument("-v", "--verbose", action="store_true", help="Debug logging")
    level.add_argument("-q", "--quiet", action="store_true", help="Warnings only")
    parser.add_argument("--config", help="key=value config file")

    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("transform", help="Transform and write the clauses")
    _addRunOptions(p, solve=False)
    p.add_argument("inputs", nargs="+")

    p = sub.add_parser("verify", help="Transform and solve")
    _addRunOptions(p)
    p.add_argument("inputs", nargs="+")

    p = sub.add_parser("bench", help="Verify every program of a corpus")
    _addRunOptions(p)
    p.add_argument("--jobs", type=int, help="Worker pool size")
    p.add_argument("--csv", help="Also write the table as CSV to this file")
    p.add_argument("--no-history", action="store_true", help="Do not record the run")
    p.add_argument("corpus", nargs="?", default=CORPUS_DIR)

    p = sub.add_parser("check", help="Check the catamorphisms of a program")
    p.add_argument("inputs", nargs="+")

    p = sub.add_parser("replay", help="Compare a recorded step log with a new run")
    p.add_argument("--tuple-zygo", action="store_true", default=None, help="As for transform")
    p.add_argument("--iteration-cap", type=int, help="Transformation loop limit")
    p.add_argument("input")
    p.add_argument("trace_file", metavar="trace", help="A step log written by transform --trace")
    return parser.parse_args(argv)


def _inputFiles(inputs) -> list[Path]:
    files = []
    for name in inputs:
        path = Path(name)
        if path.is_dir():
            files.extend(sorted(path.glob("*.pl")))
        elif path.is_file():
            files.append(path)
        else:
            raise ConfigError(f"Input not found: {name}")
    return files


def _cmdVerify(cfg, files) -> int:
    code = 0
    for path in files:
        res = verify(path, cfg)
        for v in res["verdicts"]:
            extra = f"  {v.msg}" if v.msg else ""
            print(f"{path.name}\t{v.contract}\t{v.status.value}\t{v.wall_ms:.0f} ms{extra}")
        if not res["success"] and res["msg"]:
            print(f"{path.name}\terror\t{res['msg']}")
        code = max(code, res["exit_code"])
    return code


def _cmdTransform(cfg, files) -> int:
    code = 0
    for path in files:
        res = transformOnly(path, cfg)
        for art in res["artifacts"]:
            print(art)
        code = max(code, res["exit_code"])
    return code


def _cmdBench(cfg, args) -> int:
    corpus = Path(args.corpus)
    if not corpus.is_dir():
        raise ConfigError(f"Corpus directory not found: {corpus}")
    report = runBench(cfg, corpus)
    print(report.table(), end="")
    if args.csv:
        Path(args.csv).write_text(report.csv(), encoding="utf-8")

    if report.rows and not args.no_history:
        try:
            cfg.ensureOutputDir()
            initDb(cfg.bench_db)
        except Exception as exc:  # pylint: disable=broad-exception-caught
            logger.error("Can not open bench history %s: %s", cfg.bench_db, exc)
        else:
            saved = recordBenchRun(report)
            if saved["success"]:
                reg = regressions(report, saved["run_id"])
                for prog, before, now in reg["regressions"]:
                    print(f"regression: {prog} verified {now}, was {before}")
    return 0


def _cmdCheck(files) -> int:
    code = 0
    for path in files:
        program = parseFile(path)
        cls = classify(program)
        for pred, info in cls.catamorphisms.items():
            res = functionalityTotalityReport(info, program)
            state = "ok" if res["success"] else res["msg"]
            print(f"{path.name}\t{pred}\tschema {info.schema}\t{res['checked']} inputs\t{state}")
            if not res["success"]:
                code = 1
        for k in cls.contracts:
            print(f"{path.name}\tcontract {k.cid}\t{len(k.catas)} catamorphisms")
    return code


def _cmdReplay(cfg, args) -> int:
    program = parseFile(args.input)
    cls = classify(program)
    if cfg.tuple_zygo:
        tupleAll(cls, program)
    lines = Path(args.trace_file).read_text(encoding="utf-8").splitlines()
    with openSession(cfg) as session:
        res = replayStepLog(
            lines,
            program,
            cls,
            ConstraintEngine(session),
            iteration_cap=cfg.iteration_cap,
            time_limit_s=cfg.problem_timeout_s,
        )
    print("identical" if res["success"] else res["msg"])
    return 0 if res["success"] else 1


def main(argv=None) -> int:
    """
    Runs the command line tool.

    Returns:
        The exit code.
    """
    args = parseArgs(argv)
    if args.verbose:
        logging.getLogger().setLevel(logging.DEBUG)
    elif args.quiet:
        logging.getLogger().setLevel(logging.WARNING)

    try:
        overrides = {k: v for k, v in vars(args).items() if k not in ("inputs", "corpus")}
        cfg = loadRunConfig(overrides, args.config)
        if args.command == "bench":
            return _cmdBench(cfg, args)
        if args.command == "replay":
            return _cmdReplay(cfg, args)
        files = _inputFiles(args.inputs)
        cfg.inputs = files
        if args.command == "check":
            return _cmdCheck(files)
        if args.command == "transform":
            return _cmdTransform(cfg, files)
        return _cmdVerify(cfg, files)
    except (CataVerifyError, OSError) as exc:
        logger.error("%s", exc)
        return exitCode(exc)
    except Exception:  # pylint: disable=broad-exception-caught
        logger.exception("Unexpected error")
        return 3


if __name__ == "__main__":
    sys.exit(main())
