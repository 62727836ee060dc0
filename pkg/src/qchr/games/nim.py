"""Fibonacci-variant Nim as a three-rule preset.

State is carried entirely in constraint arguments, so the host is empty
and tabling keys need no digest.
"""

from __future__ import annotations

from ..parser import Program, Rule, Quantifier, parse_program
from ..terms import Variable, IntConst, Expr, User


NIM_DSL = """\
% Fibonacci nim: take 1..2*previous matches, taking the last one wins.
l @ nimfibo(R) ==> nimfiboe(R-1,R).
e @ nimfiboe(N,R) <=> exists It in [1..min(N,R)] | nimfibou(2*It,R-It).
u @ nimfibou(N,R) <=> forall It in [1..min(N,R)] | nimfiboe(2*It,R-It).
"""


def nim_program():
    """The three rules built directly, without going through the parser."""
    r = Variable("R")
    rule_l = Rule(
        name="l",
        kept=[User("nimfibo", [r])],
        deleted=[],
        body=[User("nimfiboe", [Expr("-", [r, IntConst(1)]), r])],
    )

    n, r2, it = Variable("N"), Variable("R"), Variable("It")
    rule_e = Rule(
        name="e",
        kept=[],
        deleted=[User("nimfiboe", [n, r2])],
        quantifier=Quantifier("exists", it, IntConst(1), Expr("min", [n, r2])),
        body=[User("nimfibou", [Expr("*", [IntConst(2), it]),
                                Expr("-", [r2, it])])],
    )

    n3, r3, it3 = Variable("N"), Variable("R"), Variable("It")
    rule_u = Rule(
        name="u",
        kept=[],
        deleted=[User("nimfibou", [n3, r3])],
        quantifier=Quantifier("forall", it3, IntConst(1), Expr("min", [n3, r3])),
        body=[User("nimfiboe", [Expr("*", [IntConst(2), it3]),
                                Expr("-", [r3, it3])])],
    )
    return Program([rule_l, rule_e, rule_u])


def nim_program_from_dsl():
    return parse_program(NIM_DSL)


def nim_goal(n):
    if n < 1:
        raise ValueError("nim needs at least one match")
    return [User("nimfibo", [IntConst(n)])]
