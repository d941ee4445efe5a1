"""
Many-sorted constrained Horn clauses: terms, substitutions, printing and a
bounded least model oracle.
"""

from .terms import *
from .subst import *
from .pretty import showTerm, showConstraint, showAtom, showClause
