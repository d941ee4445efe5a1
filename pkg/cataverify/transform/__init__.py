"""
The transformation of programs with contracts into ADT free clauses.
"""

from .state import Definition, StepRecord, TransformState
from .define import cataNeighborhood, define
from .unfold import unfoldStep, unfold
from .contracts import applyContracts
from .fold import splitFoldable, fold
from .specialize import specializeConstructorCalls
from .driver import TransformResult, runTcata, replayStepLog
