"""Interpreter and contextuality analyser for P-programs."""

from .distribution import PTable, marginal_distance, marginalize
from .evaluator import eval_exact, eval_sampled
from .feasibility import lp_feasible, verify_assignment
from .frontend import format_program, load, parse, validate
from .pipeline import analyze, verdict

__all__ = [
    "PTable",
    "analyze",
    "eval_exact",
    "eval_sampled",
    "format_program",
    "load",
    "lp_feasible",
    "marginal_distance",
    "marginalize",
    "parse",
    "validate",
    "verdict",
    "verify_assignment",
]
