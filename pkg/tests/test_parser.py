import pytest

from qchr.parser import (
    parse_program, parse_goal, program_to_text, ParseError,
)
from qchr.terms import Variable, IntConst, SymConst, Expr, User, TRUE, FALSE
from qchr.games import NIM_DSL, MATRIX_DSL, connect4_dsl


def test_propagation_rule():
    p = parse_program("l @ nimfibo(R) ==> nimfiboe(R-1,R).")
    (rule,) = p.rules
    assert rule.name == "l"
    assert rule.is_propagation()
    assert [h.functor for h in rule.kept] == ["nimfibo"]
    assert rule.deleted == []
    assert rule.body[0].functor == "nimfiboe"


def test_existential_simplification_rule():
    p = parse_program(
        "e @ nimfiboe(N,R) <=> exists it in [1..min(N,R)] | nimfibou(2*it,R-it).")
    (rule,) = p.rules
    assert rule.kept == []
    assert len(rule.deleted) == 1
    assert rule.quantifier.kind == "exists"
    # lowercase iterator is still a variable, scoped to the body
    assert isinstance(rule.quantifier.iterator, Variable)
    body_arg = rule.body[0].args[0]
    assert isinstance(body_arg, Expr) and body_arg.op == "*"
    assert body_arg.args[1] is rule.quantifier.iterator


def test_simpagation_heads_split():
    p = parse_program("r @ a, b \\ c <=> d.")
    (rule,) = p.rules
    assert [h.functor for h in rule.kept] == ["a", "b"]
    assert [h.functor for h in rule.deleted] == ["c"]


def test_guard_parsing():
    p = parse_program("r @ p(N) <=> N > 0, N <= 9 | q(N).")
    (rule,) = p.rules
    assert len(rule.guard) == 2
    assert rule.guard[0][1] == ">"


def test_body_true_false():
    p = parse_program("r1 @ a <=> true.\nr2 @ b <=> false.")
    assert p.rules[0].body == [TRUE]
    assert p.rules[1].body == [FALSE]


def test_empty_head_is_syntax_error():
    with pytest.raises(ParseError):
        parse_program("x @ <=> true.")


def test_duplicate_rule_name_rejected():
    with pytest.raises(ParseError):
        parse_program("r @ a <=> true.\nr @ b <=> true.")


def test_error_carries_position():
    with pytest.raises(ParseError) as exc:
        parse_program("r @ a <=>\nq @@")
    assert exc.value.line >= 1 and exc.value.col >= 1


def test_comments_ignored():
    p = parse_program("% header\nr @ a <=> true. % trailing\n")
    assert len(p.rules) == 1


def test_wildcard_head_argument():
    p = parse_program("r @ ifrule(top,_) <=> true.")
    args = p.rules[0].deleted[0].args
    assert args[0] == SymConst("top")
    assert isinstance(args[1], Variable)


def test_head_expression_rejected():
    with pytest.raises(ParseError):
        parse_program("r @ p(N+1) <=> true.")


def test_nim_preset_rule_order():
    p = parse_program(NIM_DSL)
    assert [r.name for r in p.rules] == ["l", "e", "u"]


# ----------------------------------------------------------------- goals

def test_goal_single():
    (g,) = parse_goal("nimfibo(4)")
    assert g.functor == "nimfibo"
    assert g.args == [IntConst(4)]


def test_goal_sequence_order():
    goal = parse_goal("b,c,a")
    assert [g.functor for g in goal] == ["b", "c", "a"]
    assert all(g.args == [] for g in goal)


def test_goal_syntax_error():
    with pytest.raises(ParseError):
        parse_goal("nimfibo(")


def test_goal_unbound_variable_rejected():
    with pytest.raises(ParseError):
        parse_goal("p(X)")


# ------------------------------------------------------------- round trip

@pytest.mark.parametrize("text", [
    NIM_DSL,
    MATRIX_DSL,
    connect4_dsl(4),
    "r @ a, b \\ c <=> N > 2 | d(N).\n",
    "r @ p(X,Y) <=> forall K in [0..min(X,Y)] | q(K+1, X*Y).\n",
    "r @ p(3,top,_) <=> true.\n",
])
def test_pretty_print_round_trip(text):
    """pretty(parse(text)) is a fixpoint of parse-then-pretty."""
    once = program_to_text(parse_program(text))
    twice = program_to_text(parse_program(once))
    assert once == twice
    assert len(parse_program(once).rules) == len(parse_program(text).rules)


def test_round_trip_preserves_rule_names_and_order():
    p = parse_program(program_to_text(parse_program(NIM_DSL)))
    assert [r.name for r in p.rules] == ["l", "e", "u"]
