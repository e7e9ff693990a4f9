"""Entanglement-hierarchy classification and converse-monogamy checks for small quantum states."""

from .config import DEFAULT_TOL, Tolerances
from .criteria import ClassificationReport, CriterionClass, Value, Verdict, classify
from .linalg import PureVector, QuantumState, partial_trace, partial_transpose, purify
from .states import StateCertificate, builtin, reduce_all

__all__ = [
    "DEFAULT_TOL", "Tolerances", "ClassificationReport", "CriterionClass", "Value", "Verdict",
    "classify", "PureVector", "QuantumState", "partial_trace", "partial_transpose", "purify",
    "StateCertificate", "builtin", "reduce_all",
]
