"""Evaluation: unification, expressions, clause application, fixpoints."""
from .clauses import ClauseRunner, apply_clause, compile_clause
from .errors import EvalError, HardError, SoftFailure
from .evaluator import Evaluator, apply_op
from .fixpoint import (
    MAX_ITERATIONS, EvalStats, SemiNaive, make_world, naive_fixpoint, semi_naive_fixpoint,
)
from .typing import value_has_type, world_problems
from .unify import unify, value_unify
from .world import RelStore, World

__all__ = [
    "MAX_ITERATIONS", "ClauseRunner", "EvalError", "EvalStats", "Evaluator", "HardError",
    "RelStore", "SemiNaive", "SoftFailure", "World", "apply_clause", "apply_op",
    "compile_clause", "make_world", "naive_fixpoint", "semi_naive_fixpoint", "unify",
    "value_has_type", "value_unify", "world_problems",
]
