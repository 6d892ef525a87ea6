# models/__init__.py
from .speed_vector import SpeedVector
from .gap_result import GapResult
from .trig_poly import CertifiedExtremum, TrigPoly
from .linear_program import Constraint, LinearProgram, LpOutcome, LpStatus, Relation
from .bound import BoundKind, BoundResult, BoundSpec, BoundStatus
from .equality_case import ChainValues, EqualityCase, EqualityKind, EqualityProbeReport, SlacknessReport
from .scan_row import CSV_COLUMNS, ScanRow


__all__ = [
    "SpeedVector",
    "GapResult",
    "TrigPoly",
    "CertifiedExtremum",
    "Constraint",
    "LinearProgram",
    "LpOutcome",
    "LpStatus",
    "Relation",
    "BoundKind",
    "BoundResult",
    "BoundSpec",
    "BoundStatus",
    "ChainValues",
    "EqualityCase",
    "EqualityKind",
    "EqualityProbeReport",
    "SlacknessReport",
    "CSV_COLUMNS",
    "ScanRow",
]
