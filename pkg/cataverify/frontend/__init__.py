"""
Frontend: concrete syntax, sorts, normalization and contracts.
"""

from .program import SourceProgram, parseProgram, parseFile, normalizeClause
from .contracts import (
    CataAtom,
    Contract,
    contractToGoal,
    goalToContract,
    trivialContract,
)
from .sorts import inferSorts
