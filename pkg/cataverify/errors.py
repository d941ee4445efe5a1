"""
Exceptions raised by the verifier.

All exceptions derive from `CataVerifyError` so that the command line entry
point can map them to exit codes in one place.
"""


class CataVerifyError(Exception):
    """
    Base class for all verifier errors.
    """


class ParseError(CataVerifyError):
    """
    Syntax error in an input program.

    Attributes:
        line: 1 based line number, or 0 if unknown.
        column: 1 based column number, or 0 if unknown.
    """

    def __init__(self, msg: str, line: int = 0, column: int = 0):
        self.line = line
        self.column = column
        super().__init__(f"{line}:{column}: {msg}" if line else msg)


class SortError(CataVerifyError):
    """
    Inconsistent use of sorts.

    Attributes:
        pred: The predicate involved, if any.
        index: The 0 based argument index involved, if any.
    """

    def __init__(self, msg: str, pred: str | None = None, index: int | None = None):
        self.pred = pred
        self.index = index
        where = f"{pred}/arg {index}: " if pred is not None and index is not None else ""
        super().__init__(f"{where}{msg}")


class ContractError(CataVerifyError):
    """
    A contract violating one of the well-formedness conditions.

    The conditions are numbered 1 to 6:

        1. the head is a program predicate applied to distinct variables
        2. the precondition only mentions parameters and head variables
        3. every body atom is a catamorphism
        4. parameters and outputs are distinct basic sorted variables, and
           outputs are not shared
        5. the ADT argument of every catamorphism atom is a head variable
        6. the postcondition only mentions parameters, outputs and head
           variables

    Attributes:
        condition: The violated condition number.
    """

    def __init__(self, msg: str, condition: int, line: int = 0):
        self.condition = condition
        self.line = line
        at = f"line {line}: " if line else ""
        super().__init__(f"{at}contract condition ({condition}): {msg}")


class ClassificationError(CataVerifyError):
    """
    A predicate that is required to be both a program predicate and a
    catamorphism, or a program predicate without a contract.
    """


class SchemaError(CataVerifyError):
    """
    A predicate used as catamorphism that does not fit any of the list or tree
    schemata.
    """

    def __init__(self, pred: str, reason: str):
        self.pred = pred
        self.reason = reason
        super().__init__(f"{pred} is not a catamorphism: {reason}")


class TransformError(CataVerifyError):
    """
    The transformation loop hit its iteration cap, or an internal invariant
    was violated.
    """


class OracleLimitError(CataVerifyError):
    """
    The bounded least model exceeded its atom cap.
    """


class SolverUnavailableError(CataVerifyError):
    """
    No usable solver could be found or started.
    """


class SmtProtocolError(CataVerifyError):
    """
    A solver produced output that could not be understood.
    """


class ConfigError(CataVerifyError):
    """
    Invalid configuration or command line usage.
    """
