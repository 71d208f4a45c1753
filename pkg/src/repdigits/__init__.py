"""Certified solver for (b±1)b^n±1 written as a sum or difference of two base-g repdigits."""

from .bounds import Mode, bound_report, theorem_bounds
from .enumeration import EquationSpec, SearchBox, SolutionTuple, check_solution, enumerate_box
from .numerics import PrecisionPolicy, RealInterval
from .reduction import FirstAboveSixM, ReductionProblem, RetryNext, apply_reduction
from .report import emit_report
from .solver import SolverReport, SuiteResult, run_suite, solve

__version__ = "0.1.0"

__all__ = [
    "EquationSpec",
    "FirstAboveSixM",
    "Mode",
    "PrecisionPolicy",
    "RealInterval",
    "ReductionProblem",
    "RetryNext",
    "SearchBox",
    "SolutionTuple",
    "SolverReport",
    "SuiteResult",
    "apply_reduction",
    "bound_report",
    "check_solution",
    "emit_report",
    "enumerate_box",
    "run_suite",
    "solve",
    "theorem_bounds",
]
