"""Rule-language parser: textual programs -> Program values.

Surface syntax (ASCII):

    name @ kept \\ deleted <=> exists It in [L..U] | guard | body .

`<=>` deletes the heads before it when no `\\` is present (simplification),
`==>` keeps them (propagation).  Uppercase identifiers are variables,
lowercase ones are functors/symbols, `_` is an anonymous variable.
Comments run from `%` to end of line.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .terms import (
    Variable, IntConst, SymConst, Expr, User, TRUE, FALSE, QchrError,
)


class ParseError(QchrError):
    def __init__(self, message, line, col):
        super().__init__(f"{message} at line {line}, column {col}")
        self.line = line
        self.col = col


@dataclass(slots=True)
class Quantifier:
    kind: str            # 'exists' | 'forall'
    iterator: Variable
    lower: object
    upper: object


@dataclass(slots=True)
class Rule:
    name: str
    kept: list
    deleted: list
    quantifier: Quantifier | None = None
    guard: list = field(default_factory=list)   # (lhs, op, rhs) triples
    body: list = field(default_factory=list)

    @property
    def heads(self):
        return self.kept + self.deleted

    def is_propagation(self):
        return not self.deleted


@dataclass(slots=True)
class Program:
    rules: list
    registry: object = None

    def rule_named(self, name):
        for r in self.rules:
            if r.name == name:
                return r
        raise KeyError(name)


# -------------------------------------------------------------- tokenizer

_TOKEN_RE = re.compile(r"""
    (?P<WS>\s+)
  | (?P<COMMENT>%[^\n]*)
  | (?P<ARROW><=>|==>)
  | (?P<DOTDOT>\.\.)
  | (?P<CMP><=|>=|!=|<|>|=)
  | (?P<INT>\d+)
  | (?P<VAR>[A-Z][A-Za-z0-9_]*)
  | (?P<NAME>[a-z][A-Za-z0-9_]*|_[A-Za-z0-9_]+)
  | (?P<WILD>_)
  | (?P<PUNCT>[@\\.,()\[\]|+\-*])
""", re.VERBOSE)

_KEYWORDS = {"exists", "forall", "in", "true", "false", "min"}


class Token:
    __slots__ = ("kind", "text", "line", "col")

    def __init__(self, kind, text, line, col):
        self.kind = kind
        self.text = text
        self.line = line
        self.col = col

    def __repr__(self):
        return f"Token({self.kind},{self.text!r})"


def _tokenize(text):
    tokens = []
    line, col = 1, 1
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        chunk = m.group()
        if kind not in ("WS", "COMMENT"):
            if kind == "PUNCT" or kind == "ARROW" or kind == "DOTDOT" or kind == "CMP":
                tokens.append(Token(chunk, chunk, line, col))
            elif kind == "NAME" and chunk in _KEYWORDS:
                tokens.append(Token(chunk, chunk, line, col))
            else:
                tokens.append(Token(kind, chunk, line, col))
        nl = chunk.count("\n")
        if nl:
            line += nl
            col = len(chunk) - chunk.rfind("\n")
        else:
            col += len(chunk)
        pos = m.end()
    tokens.append(Token("EOF", "", line, col))
    return tokens


class _Parser:
    def __init__(self, text):
        self.tokens = _tokenize(text)
        self.i = 0
        self.vars = {}       # per-rule: name -> Variable

    # --- token helpers

    def peek(self, ahead=0):
        return self.tokens[min(self.i + ahead, len(self.tokens) - 1)]

    def next(self):
        t = self.tokens[self.i]
        if t.kind != "EOF":
            self.i += 1
        return t

    def accept(self, kind):
        if self.peek().kind == kind:
            return self.next()
        return None

    def expect(self, kind, what=None):
        t = self.peek()
        if t.kind != kind:
            raise ParseError(f"expected {what or kind}, found {t.text or 'end of input'!r}",
                             t.line, t.col)
        return self.next()

    def error(self, message):
        t = self.peek()
        raise ParseError(message, t.line, t.col)

    # --- variables

    def var(self, name):
        if name not in self.vars:
            self.vars[name] = Variable(name)
        return self.vars[name]

    # --- grammar

    def program(self):
        rules = []
        names = set()
        while self.peek().kind != "EOF":
            r = self.rule()
            if r.name in names:
                self.error(f"duplicate rule name {r.name!r}")
            names.add(r.name)
            rules.append(r)
        if not rules:
            self.error("empty program")
        return Program(rules)

    def rule(self):
        self.vars = {}
        name_tok = self.expect("NAME", "rule name")
        self.expect("@")
        first = self.head_atoms()
        if self.accept("\\"):
            kept = first
            deleted = self.head_atoms()
            self.expect("<=>", "'<=>'")
        else:
            arrow = self.peek()
            if arrow.kind == "<=>":
                self.next()
                kept, deleted = [], first
            elif arrow.kind == "==>":
                self.next()
                kept, deleted = first, []
            else:
                self.error("expected '<=>', '==>' or '\\'")
        if not kept and not deleted:
            self.error("rule has an empty head")

        quant = None
        if self.peek().kind in ("exists", "forall"):
            quant = self.quantifier()

        guard = []
        if self.has_toplevel_bar():
            guard = self.guard()
            self.expect("|")

        body = self.body()
        self.expect(".", "'.'")
        return Rule(name_tok.text, kept, deleted, quant, guard, body)

    def head_atoms(self):
        atoms = [self.head_atom()]
        while self.peek().kind == "," :
            # stop at the kept/deleted separator and arrows
            self.next()
            atoms.append(self.head_atom())
        return atoms

    def head_atom(self):
        tok = self.expect("NAME", "head constraint")
        args = []
        if self.accept("("):
            while True:
                args.append(self.head_arg())
                if not self.accept(","):
                    break
            self.expect(")")
        return User(tok.text, args)

    def head_arg(self):
        t = self.peek()
        if t.kind == "VAR":
            self.next()
            return self.var(t.text)
        if t.kind == "WILD":
            self.next()
            return Variable("_")
        if t.kind == "INT":
            self.next()
            return IntConst(int(t.text))
        if t.kind == "-" and self.peek(1).kind == "INT":
            self.next()
            return IntConst(-int(self.next().text))
        if t.kind == "NAME":
            self.next()
            return SymConst(t.text)
        self.error("head arguments must be variables or constants")

    def quantifier(self):
        kind = self.next().kind
        it_tok = self.peek()
        if it_tok.kind not in ("VAR", "NAME"):
            self.error("expected iterator variable")
        self.next()
        self.expect("in", "'in'")
        self.expect("[")
        lower = self.expr()
        self.expect("..", "'..'")
        upper = self.expr()
        self.expect("]")
        self.expect("|")
        # the iterator binds its name inside bounds' scope exclusion: it is
        # introduced only now, so lowercase iterators shadow symbols in the
        # guard and body
        iterator = Variable(it_tok.text)
        self.vars[it_tok.text] = iterator
        return Quantifier(kind, iterator, lower, upper)

    def has_toplevel_bar(self):
        j = self.i
        while True:
            t = self.tokens[j]
            if t.kind in (".", "EOF"):
                return False
            if t.kind == "|":
                return True
            j += 1

    def guard(self):
        cmps = [self.comparison()]
        while self.accept(","):
            cmps.append(self.comparison())
        return cmps

    def comparison(self):
        lhs = self.expr()
        op_tok = self.peek()
        if op_tok.kind not in ("=", "!=", "<", "<=", ">", ">="):
            self.error("expected comparison operator in guard")
        self.next()
        rhs = self.expr()
        return (lhs, op_tok.kind, rhs)

    def body(self):
        if self.accept("true"):
            return [TRUE]
        if self.accept("false"):
            return [FALSE]
        atoms = [self.atom()]
        while self.accept(","):
            atoms.append(self.atom())
        return atoms

    def atom(self):
        tok = self.expect("NAME", "constraint")
        args = []
        if self.accept("("):
            while True:
                args.append(self.expr())
                if not self.accept(","):
                    break
            self.expect(")")
        return User(tok.text, args)

    # --- expressions: '*' binds tighter than '+'/'-'

    def expr(self):
        node = self.term()
        while self.peek().kind in ("+", "-"):
            op = self.next().kind
            node = Expr(op, [node, self.term()])
        return node

    def term(self):
        node = self.factor()
        while self.peek().kind == "*":
            self.next()
            node = Expr("*", [node, self.factor()])
        return node

    def factor(self):
        t = self.peek()
        if t.kind == "INT":
            self.next()
            return IntConst(int(t.text))
        if t.kind == "-":
            self.next()
            return Expr("-", [IntConst(0), self.factor()])
        if t.kind == "VAR":
            self.next()
            return self.var(t.text)
        if t.kind == "(":
            self.next()
            node = self.expr()
            self.expect(")")
            return node
        if t.kind == "min":
            self.next()
            self.expect("(")
            a = self.expr()
            self.expect(",")
            b = self.expr()
            self.expect(")")
            return Expr("min", [a, b])
        if t.kind == "NAME":
            self.next()
            if t.text in self.vars:
                # lowercase quantifier iterator in scope
                return self.vars[t.text]
            if self.accept("("):
                args = [self.expr()]
                while self.accept(","):
                    args.append(self.expr())
                self.expect(")")
                return Expr(t.text, args)
            return SymConst(t.text)
        self.error("expected expression")


def parse_program(text):
    return _Parser(text).program()


def parse_goal(text):
    """Parse a comma-separated ground goal."""
    p = _Parser(text)
    goal = []
    if p.peek().kind == "EOF":
        p.error("empty goal")
    while True:
        t = p.peek()
        if t.kind == "true":
            p.next()
            goal.append(TRUE)
        elif t.kind == "false":
            p.next()
            goal.append(FALSE)
        else:
            atom = p.atom()
            _check_ground(atom.args, p)
            goal.append(atom)
        if not p.accept(","):
            break
    p.expect("EOF", "end of goal")
    return goal


def _check_ground(args, p):
    for a in args:
        if isinstance(a, Variable):
            p.error(f"unbound variable {a.name} in goal")
        if isinstance(a, Expr):
            _check_ground(a.args, p)


# ------------------------------------------------------------ printing


def term_to_text(t):
    if isinstance(t, Variable):
        return t.name if t.name != "_" else "_"
    if isinstance(t, IntConst):
        return str(t.value)
    if isinstance(t, SymConst):
        return t.symbol
    if isinstance(t, Expr):
        if t.op in ("+", "-", "*"):
            return "(%s%s%s)" % (term_to_text(t.args[0]), t.op, term_to_text(t.args[1]))
        return "%s(%s)" % (t.op, ",".join(term_to_text(a) for a in t.args))
    raise TypeError(f"cannot print {t!r}")


def constraint_to_text(c):
    if c is TRUE or isinstance(c, type(TRUE)):
        return "true"
    if c is FALSE or isinstance(c, type(FALSE)):
        return "false"
    if isinstance(c, User):
        if not c.args:
            return c.functor
        return "%s(%s)" % (c.functor, ",".join(term_to_text(a) for a in c.args))
    raise TypeError(f"cannot print {c!r}")


def rule_to_text(r):
    parts = [r.name, "@"]
    if r.kept and r.deleted:
        parts.append(", ".join(constraint_to_text(a) for a in r.kept))
        parts.append("\\")
        parts.append(", ".join(constraint_to_text(a) for a in r.deleted))
        parts.append("<=>")
    elif r.deleted:
        parts.append(", ".join(constraint_to_text(a) for a in r.deleted))
        parts.append("<=>")
    else:
        parts.append(", ".join(constraint_to_text(a) for a in r.kept))
        parts.append("==>")
    if r.quantifier is not None:
        q = r.quantifier
        parts.append("%s %s in [%s..%s] |" % (
            q.kind, q.iterator.name, term_to_text(q.lower), term_to_text(q.upper)))
    if r.guard:
        parts.append(", ".join("%s %s %s" % (term_to_text(l), op, term_to_text(rr))
                               for l, op, rr in r.guard))
        parts.append("|")
    parts.append(", ".join(constraint_to_text(c) for c in r.body))
    return " ".join(parts) + "."


def program_to_text(p):
    return "\n".join(rule_to_text(r) for r in p.rules) + "\n"
