"""SMT bridge: serialization, solver backends, memoization, model decoding."""
from .backends import (
    ProcessBackend, RecordingBackend, ReplayBackend, SolverError, find_solver,
)
from .model import ModelError, decode_bv, parse_model
from .serialize import Script, SerializeError, Serializer, drop_invalid_patterns, var_name
from .solver import SAT, UNKNOWN, UNSAT, Answer, SmtContext
from .truthtable import TruthTableBackend

__all__ = [
    "SAT", "UNKNOWN", "UNSAT", "Answer", "ModelError", "ProcessBackend", "RecordingBackend",
    "ReplayBackend", "Script", "SerializeError", "Serializer", "SmtContext", "SolverError",
    "TruthTableBackend", "decode_bv", "drop_invalid_patterns", "find_solver", "parse_model",
    "var_name",
]
