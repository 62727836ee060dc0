"""Host-state contract and the registry of callable built-ins."""

from __future__ import annotations

from .terms import IntConst, QchrError


class BuiltinError(QchrError):
    pass


class HostState:
    """Mutable per-session state that built-ins read and write.

    Subclasses must make rollback(checkpoint()) an observational identity
    and keep digest() faithful: equal digests, equal behaviour.
    """

    def checkpoint(self):
        return None

    def rollback(self, mark):
        pass

    def digest(self):
        return ""


class EmptyHost(HostState):
    """Host with no state at all (Nim needs none)."""


class BuiltinRegistry:
    """Named host functions: pure ones usable in expressions, effects
    usable as body constraints."""

    def __init__(self):
        self._entries = {}

    def register(self, name, kind, arity, handler):
        if kind not in ("pure", "effect"):
            raise BuiltinError(f"unknown builtin kind {kind!r}")
        if name in self._entries:
            raise BuiltinError(f"duplicate builtin name {name!r}")
        self._entries[name] = (kind, arity, handler)

    def __contains__(self, name):
        return name in self._entries

    def kind_of(self, name):
        entry = self._entries.get(name)
        return entry[0] if entry else None

    def call_pure(self, host, name, args):
        kind, arity, handler = self._entries[name]
        if kind != "pure":
            raise BuiltinError(f"{name} is not a pure builtin")
        if len(args) != arity:
            raise BuiltinError(f"{name} expects {arity} arguments, got {len(args)}")
        return handler(host, *args)

    def invoke_effect(self, host, name, args):
        """Run an effectful builtin; returns True on ok, False on failure."""
        if name not in self._entries:
            raise BuiltinError(f"unknown builtin {name!r}")
        kind, arity, handler = self._entries[name]
        if kind != "effect":
            raise BuiltinError(f"{name} is not an effect builtin")
        if len(args) != arity:
            raise BuiltinError(f"{name} expects {arity} arguments, got {len(args)}")
        ints = []
        for a in args:
            if not isinstance(a, IntConst):
                raise BuiltinError(f"effect {name} takes integer arguments, got {a}")
            ints.append(a.value)
        return bool(handler(host, *ints))
