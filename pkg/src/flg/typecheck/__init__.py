"""Static semantics: well-formedness, bimodal type checking, stratification."""
from ..types import erase, to_smt
from .checker import TypeErr, check_program
from .validate import dependency_graph, stratify
from .wellformed import EXP, SMT, check_well_formed, well_formed

__all__ = [
    "EXP", "SMT", "TypeErr", "check_program", "check_well_formed", "dependency_graph", "erase",
    "stratify", "to_smt", "well_formed",
]
