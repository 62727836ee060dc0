"""Terms, constraints, the equality classes and the constraint store."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field


class QchrError(Exception):
    pass


class EvalError(QchrError):
    """Raised when an expression cannot be reduced to a constant."""


# ---------------------------------------------------------------- terms

_var_counter = itertools.count(1)


class Variable:
    __slots__ = ("name", "id")

    def __init__(self, name):
        self.name = name
        self.id = next(_var_counter)

    def __repr__(self):
        return f"Variable({self.name}#{self.id})"

    def __str__(self):
        return self.name


@dataclass(frozen=True, slots=True)
class IntConst:
    value: int

    def __str__(self):
        return str(self.value)


@dataclass(frozen=True, slots=True)
class SymConst:
    symbol: str

    def __str__(self):
        return self.symbol


TOP = SymConst("top")
BOT = SymConst("bot")


class Expr:
    """Arithmetic / host-call expression node.

    op is one of '+', '-', '*', 'min' or a registered host-function name
    (disambiguated at evaluation time: arithmetic first, registry second).
    """

    __slots__ = ("op", "args")

    ARITH = {"+", "-", "*", "min"}

    def __init__(self, op, args):
        self.op = op
        self.args = list(args)

    def __repr__(self):
        return f"Expr({self.op}, {self.args})"


def is_const(t):
    return isinstance(t, (IntConst, SymConst))


# ---------------------------------------------------------- constraints


@dataclass(slots=True)
class User:
    functor: str
    args: list

    @property
    def arity(self):
        return len(self.args)

    def __str__(self):
        if not self.args:
            return self.functor
        return "%s(%s)" % (self.functor, ",".join(str(a) for a in self.args))


@dataclass(slots=True)
class Eq:
    left: object
    right: object


class TrueC:
    __slots__ = ()

    def __repr__(self):
        return "true"


class FalseC:
    __slots__ = ()

    def __repr__(self):
        return "false"


TRUE = TrueC()
FALSE = FalseC()


@dataclass(slots=True)
class Exists:
    iterator: Variable
    lower: object        # int, already evaluated
    upper: object
    body: list           # sequence of constraints, iterator still free


@dataclass(slots=True)
class Forall:
    iterator: Variable
    lower: object
    upper: object
    body: list


# ------------------------------------------------------------- eq classes


class EqClasses:
    """Union-find over variables and constants.

    Each class carries at most one constant; merging two classes holding
    distinct constants is an inconsistency.  No path compression, so a
    union can be undone from a two-entry trail record.
    """

    def __init__(self):
        self.parent = {}   # key -> key
        self.rank = {}     # root -> int
        self.const = {}    # root -> IntConst | SymConst

    @staticmethod
    def _key(t):
        if isinstance(t, Variable):
            return ("v", t.id)
        if isinstance(t, IntConst):
            return ("i", t.value)
        if isinstance(t, SymConst):
            return ("s", t.symbol)
        raise TypeError(f"not a variable or constant: {t!r}")

    def _ensure(self, t):
        k = self._key(t)
        if k not in self.parent:
            self.parent[k] = k
            self.rank[k] = 0
            if is_const(t):
                self.const[k] = t
        return k

    def _find(self, k):
        while self.parent[k] != k:
            k = self.parent[k]
        return k

    def find(self, t):
        return self._find(self._ensure(t))

    def constant_of(self, t):
        """The constant representative of t's class, or None."""
        if is_const(t):
            return t
        return self.const.get(self.find(t))

    def same(self, x, y):
        return self.find(x) == self.find(y)

    def union(self, x, y):
        """Merge the classes of x and y.

        Returns an undo record on success (pass it to undo()), or None if
        the merge would identify two distinct constants; in that case the
        classes are left untouched.
        """
        rx, ry = self.find(x), self.find(y)
        if rx == ry:
            return ()
        cx, cy = self.const.get(rx), self.const.get(ry)
        if cx is not None and cy is not None and cx != cy:
            return None
        if self.rank[rx] < self.rank[ry]:
            rx, ry = ry, rx
            cx, cy = cy, cx
        # ry is attached under rx
        self.parent[ry] = rx
        bumped = False
        if self.rank[rx] == self.rank[ry]:
            self.rank[rx] += 1
            bumped = True
        added_const = False
        if cx is None and cy is not None:
            self.const[rx] = cy
            added_const = True
        return (rx, ry, bumped, added_const)

    def undo(self, record):
        if record == ():
            return
        rx, ry, bumped, added_const = record
        self.parent[ry] = ry
        if bumped:
            self.rank[rx] -= 1
        if added_const:
            del self.const[rx]


def eq_union(eq, x, y):
    """Spec-level wrapper: 'ok' / 'inconsistent' without exposing the trail."""
    rec = eq.union(x, y)
    return "inconsistent" if rec is None else "ok"


# ----------------------------------------------------------------- store


class Store:
    """Identified multiset of suspended user constraints."""

    def __init__(self):
        self.tokens = {}       # token-id -> User
        self.index = {}        # (functor, arity) -> dict token-id -> None
        self._next = itertools.count(1)

    def add(self, c):
        if not isinstance(c, User):
            raise TypeError("only user constraints live in the store")
        tok = next(self._next)
        self.tokens[tok] = c
        self.index.setdefault((c.functor, c.arity), {})[tok] = None
        return tok

    def remove(self, tok):
        c = self.tokens.pop(tok)
        del self.index[(c.functor, c.arity)][tok]
        return c

    def reinsert(self, tok, c):
        """Undo of remove: restore the token under its original id."""
        self.tokens[tok] = c
        key = (c.functor, c.arity)
        bucket = self.index.setdefault(key, {})
        bucket[tok] = None
        if len(bucket) > 1 and tok < max(bucket):
            # keep buckets sorted by token id so partner search stays
            # deterministic after a rollback
            self.index[key] = dict(sorted(bucket.items()))

    def alive(self, tok):
        return tok in self.tokens

    def candidates(self, functor, arity):
        return self.index.get((functor, arity), {})

    def live_tokens(self):
        return self.tokens

    def __len__(self):
        return len(self.tokens)


# ----------------------------------------------------------- evaluation


def resolve(t, eq):
    """Replace a variable by its class constant when it has one."""
    if isinstance(t, Variable):
        c = eq.constant_of(t)
        return c if c is not None else t
    return t


def eval_expr(t, eq, host=None, registry=None):
    """Evaluate a term to a constant.

    Variables are replaced by their class constants; arithmetic is computed
    directly; any other operator is dispatched as a pure host call through
    the registry.
    """
    if isinstance(t, (IntConst, SymConst)):
        return t
    if isinstance(t, Variable):
        c = eq.constant_of(t) if eq is not None else None
        if c is None:
            raise EvalError(f"unbound variable {t.name}")
        return c
    if isinstance(t, Expr):
        op = t.op
        if op in Expr.ARITH:
            vals = []
            for a in t.args:
                v = eval_expr(a, eq, host, registry)
                if not isinstance(v, IntConst):
                    raise EvalError(f"non-integer operand for {op}: {v}")
                vals.append(v.value)
            if op == "+":
                return IntConst(vals[0] + vals[1])
            if op == "-":
                return IntConst(vals[0] - vals[1]) if len(vals) == 2 else IntConst(-vals[0])
            if op == "*":
                return IntConst(vals[0] * vals[1])
            return IntConst(min(vals))
        if registry is None or op not in registry:
            raise EvalError(f"unknown host function {op}")
        vals = [eval_expr(a, eq, host, registry) for a in t.args]
        return registry.call_pure(host, op, vals)
    raise TypeError(f"cannot evaluate {t!r}")
