"""Committed-choice rule engine with existential/universal quantifier rules."""

from .terms import (
    Variable, IntConst, SymConst, Expr, User, Eq, TRUE, FALSE, TOP, BOT,
    EqClasses, Store, eval_expr, QchrError, EvalError,
)
from .builtins import BuiltinRegistry, HostState, EmptyHost, BuiltinError
from .parser import (
    parse_program, parse_goal, Program, Rule, Quantifier, ParseError,
    program_to_text,
)
from .engine import Session, SolveOptions, SolveResult, Stats, solve, LimitExceeded

__version__ = "0.1.0"

__all__ = [
    "Variable", "IntConst", "SymConst", "Expr", "User", "Eq",
    "TRUE", "FALSE", "TOP", "BOT", "EqClasses", "Store", "eval_expr",
    "QchrError", "EvalError", "BuiltinRegistry", "HostState", "EmptyHost",
    "BuiltinError", "parse_program", "parse_goal", "Program", "Rule",
    "Quantifier", "ParseError", "program_to_text", "Session", "SolveOptions",
    "SolveResult", "Stats", "solve", "LimitExceeded",
]
