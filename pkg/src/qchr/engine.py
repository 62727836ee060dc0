"""Goal-directed proof search over quantified rule programs.

One Session owns all mutable state (store, equality classes, host, trail)
and runs strictly sequentially.  Rule choice and partner choice are
committed (first match in textual/token order wins); backtracking happens
only over existential values, via the trail.
"""

from __future__ import annotations

import sys
import time
from dataclasses import dataclass, field

from .terms import (
    Variable, IntConst, SymConst, Expr, User, Eq, TrueC, FalseC, TRUE, FALSE,
    Exists, Forall, EqClasses, Store, eval_expr, is_const, QchrError, EvalError,
)
from .builtins import BuiltinRegistry, EmptyHost
from .parser import Program, Rule


class LimitExceeded(QchrError):
    def __init__(self, what, stats):
        super().__init__(f"{what} limit exceeded")
        self.what = what
        self.stats = stats


@dataclass(slots=True)
class SolveOptions:
    tabling: bool = False
    failure_limit: int | None = None
    time_limit_ms: int | None = None
    collect_witness: bool = True


@dataclass(slots=True)
class Stats:
    failures: int = 0
    rule_applications: int = 0
    inactivations: int = 0
    exists_nodes: int = 0
    forall_nodes: int = 0
    table_hits: int = 0
    elapsed_ms: float = 0.0

    def as_dict(self):
        return {
            "failures": self.failures,
            "rule_applications": self.rule_applications,
            "inactivations": self.inactivations,
            "exists_nodes": self.exists_nodes,
            "forall_nodes": self.forall_nodes,
            "table_hits": self.table_hits,
            "elapsed_ms": self.elapsed_ms,
        }


@dataclass(slots=True)
class SolveResult:
    valid: bool
    stats: Stats
    witness: int | None = None


def _substitute(term, binding):
    """Replace bound variables in a term; binding maps Variable -> term."""
    if isinstance(term, Variable):
        return binding.get(term, term)
    if isinstance(term, Expr):
        return Expr(term.op, [_substitute(a, binding) for a in term.args])
    return term


def _substitute_constraint(c, binding):
    if isinstance(c, User):
        return User(c.functor, [_substitute(a, binding) for a in c.args])
    if isinstance(c, Eq):
        return Eq(_substitute(c.left, binding), _substitute(c.right, binding))
    return c


class Session:
    """One solve run: program + goal + host, all state confined here."""

    def __init__(self, program, host=None, options=None):
        self.program = program
        self.registry = program.registry or BuiltinRegistry()
        self.host = host if host is not None else EmptyHost()
        self.opts = options or SolveOptions()
        self.store = Store()
        self.eq = EqClasses()
        self.trail = []            # undo records
        self.stats = Stats()
        self.fired = set()         # (rule name, head token tuple) for propagation
        self.table = {}
        self.witness = None
        self._witness_pending = self.opts.collect_witness
        self._deadline = None
        self._tick = 0
        # occurrence index: functor/arity -> ordered (rule, head position) pairs
        self.occurrences = {}
        for rule in program.rules:
            for pos, head in enumerate(rule.heads):
                key = (head.functor, head.arity)
                self.occurrences.setdefault(key, []).append((rule, pos))

    # ------------------------------------------------------------- trail

    def checkpoint(self):
        return (len(self.trail), self.host.checkpoint())

    def rollback(self, mark):
        depth, host_mark = mark
        trail = self.trail
        store = self.store
        eq = self.eq
        while len(trail) > depth:
            kind, a, b = trail.pop()
            if kind == 0:        # store add
                store.remove(a)
            elif kind == 1:      # store remove
                store.reinsert(a, b)
            elif kind == 2:      # eq union
                eq.undo(a)
            else:                # propagation fired record
                self.fired.discard(a)
        self.host.rollback(host_mark)

    # ------------------------------------------------------------ limits

    def _count_failure(self):
        self.stats.failures += 1
        limit = self.opts.failure_limit
        if limit is not None and self.stats.failures > limit:
            raise LimitExceeded("failure", self.stats)

    def _check_time(self):
        if self._deadline is not None:
            self._tick += 1
            if self._tick >= 256:
                self._tick = 0
                if time.monotonic() > self._deadline:
                    raise LimitExceeded("time", self.stats)

    # --------------------------------------------------------- top level

    def solve(self, goal):
        start = time.monotonic()
        if self.opts.time_limit_ms is not None:
            self._deadline = start + self.opts.time_limit_ms / 1000.0
        initial_mark = self.host.checkpoint()
        old_limit = sys.getrecursionlimit()
        sys.setrecursionlimit(max(old_limit, 100000))
        try:
            ok = self.solve_sequence(goal)
        finally:
            sys.setrecursionlimit(old_limit)
            self.host.rollback(initial_mark)
            self.stats.elapsed_ms = (time.monotonic() - start) * 1000.0
        witness = self.witness if (ok and self.opts.collect_witness) else None
        return SolveResult(valid=ok, stats=self.stats, witness=witness)

    # ----------------------------------------------------------- search

    def solve_sequence(self, goal):
        for c in goal:
            if not self.activate(c):
                return False
        return True

    def activate(self, c):
        self._check_time()
        if isinstance(c, User):
            return self.activate_user(c)
        if isinstance(c, TrueC):
            return True
        if isinstance(c, FalseC):
            self._count_failure()
            return False
        if isinstance(c, Eq):
            return self.add_equality(c.left, c.right)
        if isinstance(c, Exists):
            return self.eliminate_exists(c)
        if isinstance(c, Forall):
            return self.eliminate_forall(c)
        raise TypeError(f"cannot activate {c!r}")

    def activate_user(self, c):
        args = []
        for a in c.args:
            if isinstance(a, Variable) or is_const(a):
                args.append(a)
            else:
                args.append(eval_expr(a, self.eq, self.host, self.registry))
        functor = c.functor
        if functor in self.registry:
            if self.registry.kind_of(functor) == "effect":
                if self.registry.invoke_effect(self.host, functor, args):
                    return True
                self._count_failure()
                return False
        tok = self.store.add(User(functor, args))
        self.trail.append((0, tok, None))
        return self.run_occurrences(tok)

    def run_occurrences(self, tok):
        """Try rules on an active token in textual order; Inactivate if none."""
        c = self.store.tokens.get(tok)
        if c is None:
            return True
        for rule, pos in self.occurrences.get((c.functor, c.arity), ()):
            match = self.try_apply(tok, rule, pos)
            if match is not None:
                if rule.quantifier is None:
                    return self.apply_plain(rule, match)
                return self.apply_quantified(rule, match)
        self.stats.inactivations += 1
        return True

    # ---------------------------------------------------------- matching

    def _match_term(self, pattern, value, binding):
        """Match one head argument against a stored term, modulo eq classes."""
        if isinstance(pattern, Variable):
            bound = binding.get(pattern)
            if bound is None:
                binding[pattern] = value
                return True
            return self._terms_equal(bound, value)
        # pattern is a constant
        return self._terms_equal(pattern, value)

    def _terms_equal(self, a, b):
        if a is b:
            return True
        ca = a if is_const(a) else self.eq.constant_of(a)
        cb = b if is_const(b) else self.eq.constant_of(b)
        if ca is not None and cb is not None:
            return ca == cb
        if ca is None and cb is None:
            return self.eq.same(a, b)
        return False

    def _match_head(self, head, c, binding):
        if head.functor != c.functor or head.arity != c.arity:
            return False
        for p, v in zip(head.args, c.args):
            if not self._match_term(p, v, binding):
                return False
        return True

    def try_apply(self, active_tok, rule, active_pos):
        """Find partners for every head with the active token at active_pos.

        Returns (binding, head_tokens) on the first complete, guard-entailed
        match, searching partners exhaustively in ascending token order.
        """
        heads = rule.heads
        active_c = self.store.tokens[active_tok]
        binding = {}
        if not self._match_head(heads[active_pos], active_c, binding):
            return None
        n = len(heads)
        head_tokens = [None] * n
        head_tokens[active_pos] = active_tok

        def search(i, binding):
            if i == n:
                if not self._guard_holds(rule.guard, binding):
                    return None
                if rule.is_propagation():
                    if (rule.name, tuple(head_tokens)) in self.fired:
                        return None
                return dict(binding)
            if i == active_pos:
                return search(i + 1, binding)
            head = heads[i]
            for tok in self.store.candidates(head.functor, head.arity):
                if tok in head_tokens:
                    continue
                trial = dict(binding)
                if self._match_head(head, self.store.tokens[tok], trial):
                    head_tokens[i] = tok
                    result = search(i + 1, trial)
                    if result is not None:
                        return result
                    head_tokens[i] = None
            return None

        final = search(0, binding)
        if final is None:
            return None
        return final, list(head_tokens)

    def _guard_holds(self, guard, binding):
        for lhs, op, rhs in guard:
            try:
                lv = eval_expr(_substitute(lhs, binding), self.eq, self.host, self.registry)
                rv = eval_expr(_substitute(rhs, binding), self.eq, self.host, self.registry)
            except EvalError:
                return False    # unbound: entailment cannot be established
            if op == "=":
                ok = lv == rv
            elif op == "!=":
                ok = lv != rv
            else:
                if not (isinstance(lv, IntConst) and isinstance(rv, IntConst)):
                    return False
                x, y = lv.value, rv.value
                ok = {"<": x < y, "<=": x <= y, ">": x > y, ">=": x >= y}[op]
            if not ok:
                return False
        return True

    # ---------------------------------------------------------- applying

    def _consume(self, rule, match):
        binding, head_tokens = match
        self.stats.rule_applications += 1
        if rule.is_propagation():
            key = (rule.name, tuple(head_tokens))
            self.fired.add(key)
            self.trail.append((3, key, None))
        n_kept = len(rule.kept)
        for tok in head_tokens[n_kept:]:
            c = self.store.remove(tok)
            self.trail.append((1, tok, c))
        return binding, head_tokens[:n_kept]

    def apply_plain(self, rule, match):
        binding, kept_tokens = self._consume(rule, match)
        body = [_substitute_constraint(c, binding) for c in rule.body]
        if not self.solve_sequence(body):
            return False
        # surviving kept heads are re-activated in head order
        for tok in kept_tokens:
            if self.store.alive(tok):
                if not self.run_occurrences(tok):
                    return False
        return True

    def apply_quantified(self, rule, match):
        binding, _kept = self._consume(rule, match)
        q = rule.quantifier
        lo = eval_expr(_substitute(q.lower, binding), self.eq, self.host, self.registry)
        hi = eval_expr(_substitute(q.upper, binding), self.eq, self.host, self.registry)
        if not (isinstance(lo, IntConst) and isinstance(hi, IntConst)):
            raise EvalError(f"quantifier bounds of rule {rule.name} are not integers")
        body = [_substitute_constraint(c, binding) for c in rule.body]
        cls = Exists if q.kind == "exists" else Forall
        return self.activate(cls(q.iterator, lo.value, hi.value, body))

    # ------------------------------------------------------- quantifiers

    def eliminate_exists(self, q):
        self.stats.exists_nodes += 1
        own_witness = False
        if self._witness_pending:
            self._witness_pending = False
            own_witness = True
        it = q.iterator
        for x in range(q.lower, q.upper + 1):
            self._check_time()
            mark = self.checkpoint()
            ok = self._solve_branch(q.body, it, x)
            self.rollback(mark)   # production and consumption are local
            if ok:
                if own_witness:
                    self.witness = x
                return True
            self._count_failure()
        return False

    def eliminate_forall(self, q):
        self.stats.forall_nodes += 1
        it = q.iterator
        for x in range(q.lower, q.upper + 1):
            self._check_time()
            mark = self.checkpoint()
            ok = self._solve_branch(q.body, it, x)
            self.rollback(mark)
            if not ok:
                self._count_failure()
                return False
        return True

    def _solve_branch(self, body, it, x):
        binding = {it: IntConst(x)}
        inst = [_substitute_constraint(c, binding) for c in body]
        if self.opts.tabling and len(inst) == 1 and isinstance(inst[0], User):
            return self._solve_tabled(inst[0])
        return self.solve_sequence(inst)

    def _solve_tabled(self, c):
        try:
            args = tuple(eval_expr(a, self.eq, self.host, self.registry)
                         for a in c.args)
        except EvalError:
            return self.solve_sequence([c])
        key = (c.functor, args, self.host.digest())
        hit = self.table.get(key)
        if hit is not None:
            self.stats.table_hits += 1
            return hit
        verdict = self.solve_sequence([User(c.functor, list(args))])
        self.table[key] = verdict
        return verdict

    # ----------------------------------------------------------- equality

    def add_equality(self, x, y):
        rec = self.eq.union(x, y)
        if rec is None:
            return False
        self.trail.append((2, rec, None))
        merged_root = self.eq.find(x)
        touched = []
        for tok in sorted(self.store.live_tokens()):
            c = self.store.tokens[tok]
            for a in c.args:
                if isinstance(a, Variable) and self.eq.find(a) == merged_root:
                    touched.append(tok)
                    break
        for tok in touched:
            if self.store.alive(tok):
                if not self.run_occurrences(tok):
                    return False
        return True


def solve(program, goal, host=None, options=None):
    """Run one solve session over a program and a ground goal."""
    return Session(program, host, options).solve(goal)
