"""
Minimal CHC solver process on top of the z3 Python API.

Used by `cataverify.backend` when no solver executable is available::

    python -m cataverify.z3runner [-t SECONDS] problem.smt2

Prints ``sat``, ``unsat`` or ``unknown`` like a solver executable would.
"""

import argparse
import logging
import sys

logger = logging.getLogger(__name__)


def parseArgs(argv=None):
    parser = argparse.ArgumentParser(
        prog="cataverify.z3runner",
        description="Check satisfiability of an SMT-LIB HORN script with z3.",
    )
    parser.add_argument("script", help="The SMT-LIB script")
    parser.add_argument(
        "-t",
        "--timeout",
        type=int,
        default=0,
        help="Timeout in seconds, 0 for none",
    )
    return parser.parse_args(argv)


def run(script: str, timeout_s: int = 0) -> str:
    """
    Solves the script and returns the status word.
    """
    # Only needed when actually running, so @pylint: disable=import-outside-toplevel
    import z3

    solver = z3.SolverFor("HORN")
    if timeout_s:
        solver.set("timeout", timeout_s * 1000)
    with open(script, "r", encoding="utf-8") as f:
        solver.from_string(f.read())
    return str(solver.check())


def main(argv=None) -> int:
    args = parseArgs(argv)
    try:
        status = run(args.script, args.timeout)
    except ImportError:
        logger.error("The z3-solver package is not installed")
        return 3
    except OSError as exc:
        logger.error("Can not read %s: %s", args.script, exc)
        return 2
    except Exception as exc:  # pylint: disable=broad-exception-caught
        print(f'(error "{exc}")')
        return 1
    print(status)
    return 0


if __name__ == "__main__":
    sys.exit(main())
