"""Tracing interpreter for the mini-language.

Execution is deterministic: a run is a pure function of (program, invocation,
fuel). Every statement execution emits its statement ID; condition statements
(if/while) emit once per condition evaluation. Function calls emit enter/exit
events, or an unwind event when an exception propagates out, so emitted
traces always satisfy the trace-model nesting invariant.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from ..trace import TraceEvent
from .syntax import (
    ArrayLit,
    Assert,
    Assign,
    BinOp,
    BoolLit,
    Call,
    ExprStmt,
    If,
    Index,
    IndexAssign,
    IntLit,
    Let,
    Name,
    Program,
    Return,
    StrLit,
    Throw,
    TryCatch,
    UnaryOp,
    While,
)

DEFAULT_FUEL = 1_000_000
DEFAULT_MAX_DEPTH = 120

OUTCOME_PASSED = "passed"
OUTCOME_FAILED = "failed"
OUTCOME_CRASHED = "crashed"

TAG_DIV_BY_ZERO = "DivByZero"
TAG_INDEX = "IndexOutOfBounds"
TAG_TYPE = "TypeError"
TAG_ASSERT = "AssertFail"
TAG_UNDEF = "UndefVar"
TAG_UNKNOWN_FN = "UnknownFunction"
TAG_ARITY = "ArityError"
TAG_STACK = "StackOverflow"
TAG_FUEL = "FuelExhausted"


class MiniThrow(Exception):
    """An in-language exception value, identified by its tag."""

    def __init__(self, tag: str):
        self.tag = tag
        super().__init__(tag)


class FuelExhausted(Exception):
    """Statement budget ran out; deliberately not catchable in-language."""


class _ReturnSignal(Exception):
    def __init__(self, value):
        self.value = value


@dataclass(frozen=True)
class Oracle:
    kind: str  # "value" (expected return) or "completes" (crash-free run)
    value: object = None

    def __post_init__(self):
        if self.kind not in ("value", "completes"):
            raise ValueError(f"unknown oracle kind {self.kind!r}")


@dataclass(frozen=True)
class TestInvocation:
    __test__ = False

    entry: str
    args: tuple = ()
    expected: Oracle | None = None


@dataclass(frozen=True)
class RunResult:
    events: tuple[TraceEvent, ...]
    outcome: str  # passed | failed | crashed
    value: object = None
    error_tag: str | None = None
    fuel_exhausted: bool = False


def check_value(v, where: str = "value"):
    """Reject anything outside the language's value domain (notably floats)."""
    if type(v) in (int, bool, str):
        return v
    if type(v) is list:
        for item in v:
            check_value(item, where)
        return v
    raise ValueError(f"{where}: {v!r} is not a mini-language value")


def copy_value(v):
    if type(v) is list:
        return [copy_value(x) for x in v]
    return v


def values_equal(a, b) -> bool:
    """Deep equality with int/bool kept distinct (1 != true)."""
    if type(a) is not type(b):
        return False
    if type(a) is list:
        return len(a) == len(b) and all(values_equal(x, y) for x, y in zip(a, b))
    return a == b


def _type_name(v) -> str:
    return {int: "int", bool: "bool", str: "string", list: "array"}[type(v)]


class _Run:
    def __init__(self, program: Program, fuel: int, max_depth: int):
        self.functions = {f.name: f for f in program.functions}
        self.events: list[TraceEvent] = []
        self.fuel = fuel
        self.depth = 0
        self.max_depth = max_depth
        self._stmt_ev = [TraceEvent.statement(i) for i in range(program.n_statements)]
        self._enter = {n: TraceEvent.enter(n) for n in self.functions}
        self._exit = {n: TraceEvent.exit(n) for n in self.functions}
        self._unwind = {n: TraceEvent.unwind(n) for n in self.functions}

    def emit(self, stmt_id: int):
        if self.fuel <= 0:
            raise FuelExhausted()
        self.fuel -= 1
        self.events.append(self._stmt_ev[stmt_id])

    def call(self, name: str, args: Sequence):
        fn = self.functions.get(name)
        if fn is None:
            return self._builtin(name, args)
        if len(args) != len(fn.params):
            raise MiniThrow(TAG_ARITY)
        if self.depth >= self.max_depth:
            raise MiniThrow(TAG_STACK)
        self.depth += 1
        self.events.append(self._enter[name])
        try:
            env = dict(zip(fn.params, args))
            self.exec_block(fn.body, env)
        except _ReturnSignal as r:
            self.events.append(self._exit[name])
            return r.value
        except (MiniThrow, FuelExhausted):
            self.events.append(self._unwind[name])
            raise
        finally:
            self.depth -= 1
        self.events.append(self._exit[name])
        return 0  # falling off the end returns 0

    def _builtin(self, name: str, args: Sequence):
        if name == "len":
            if len(args) != 1:
                raise MiniThrow(TAG_ARITY)
            v = args[0]
            if type(v) in (str, list):
                return len(v)
            raise MiniThrow(TAG_TYPE)
        if name == "push":
            if len(args) != 2:
                raise MiniThrow(TAG_ARITY)
            arr = args[0]
            if type(arr) is not list:
                raise MiniThrow(TAG_TYPE)
            arr.append(args[1])
            return len(arr)
        raise MiniThrow(TAG_UNKNOWN_FN)

    def exec_block(self, stmts, env):
        for s in stmts:
            self.exec_stmt(s, env)

    def exec_stmt(self, s, env):
        self.emit(s.stmt_id)
        kind = type(s)
        if kind is Let:
            env[s.var] = self.eval(s.value, env)
        elif kind is Assign:
            if s.var not in env:
                raise MiniThrow(TAG_UNDEF)
            env[s.var] = self.eval(s.value, env)
        elif kind is IndexAssign:
            if s.var not in env:
                raise MiniThrow(TAG_UNDEF)
            arr = env[s.var]
            if type(arr) is not list:
                raise MiniThrow(TAG_TYPE)
            idx = self.eval(s.index, env)
            if type(idx) is not int:
                raise MiniThrow(TAG_TYPE)
            if not 0 <= idx < len(arr):
                raise MiniThrow(TAG_INDEX)
            arr[idx] = self.eval(s.value, env)
        elif kind is If:
            if self._bool(self.eval(s.cond, env)):
                self.exec_block(s.then, env)
            else:
                self.exec_block(s.orelse, env)
        elif kind is While:
            while True:
                if not self._bool(self.eval(s.cond, env)):
                    break
                self.exec_block(s.body, env)
                self.emit(s.stmt_id)  # one ID per condition evaluation
        elif kind is Return:
            raise _ReturnSignal(self.eval(s.value, env) if s.value is not None else 0)
        elif kind is Throw:
            raise MiniThrow(s.tag)
        elif kind is TryCatch:
            try:
                self.exec_block(s.body, env)
            except MiniThrow as e:
                if e.tag != s.tag:
                    raise
                self.exec_block(s.handler, env)
        elif kind is Assert:
            if not self._bool(self.eval(s.cond, env)):
                raise MiniThrow(TAG_ASSERT)
        elif kind is ExprStmt:
            self.eval(s.value, env)
        else:
            raise TypeError(f"not a statement: {s!r}")

    @staticmethod
    def _bool(v) -> bool:
        if type(v) is not bool:
            raise MiniThrow(TAG_TYPE)
        return v

    def eval(self, e, env):
        kind = type(e)
        if kind is Name:
            try:
                return env[e.ident]
            except KeyError:
                raise MiniThrow(TAG_UNDEF) from None
        if kind is IntLit or kind is BoolLit or kind is StrLit:
            return e.value
        if kind is BinOp:
            return self._binop(e, env)
        if kind is Call:
            return self.call(e.func, [self.eval(a, env) for a in e.args])
        if kind is Index:
            base = self.eval(e.base, env)
            idx = self.eval(e.index, env)
            if type(idx) is not int:
                raise MiniThrow(TAG_TYPE)
            if type(base) is list:
                if not 0 <= idx < len(base):
                    raise MiniThrow(TAG_INDEX)
                return base[idx]
            if type(base) is str:
                if not 0 <= idx < len(base):
                    raise MiniThrow(TAG_INDEX)
                return base[idx]
            raise MiniThrow(TAG_TYPE)
        if kind is UnaryOp:
            v = self.eval(e.operand, env)
            if e.op == "!":
                return not self._bool(v)
            if type(v) is not int:
                raise MiniThrow(TAG_TYPE)
            return -v
        if kind is ArrayLit:
            return [self.eval(x, env) for x in e.items]
        raise TypeError(f"not an expression: {e!r}")

    def _binop(self, e: BinOp, env):
        op = e.op
        left = self.eval(e.left, env)
        if op == "&&":
            if not self._bool(left):
                return False
            return self._bool(self.eval(e.right, env))
        if op == "||":
            if self._bool(left):
                return True
            return self._bool(self.eval(e.right, env))
        right = self.eval(e.right, env)
        if op == "==":
            return values_equal(left, right)
        if op == "!=":
            return not values_equal(left, right)
        if op in ("<", "<=", ">", ">="):
            if type(left) is not type(right) or type(left) not in (int, str):
                raise MiniThrow(TAG_TYPE)
            if op == "<":
                return left < right
            if op == "<=":
                return left <= right
            if op == ">":
                return left > right
            return left >= right
        if op == "+" and type(left) is str and type(right) is str:
            return left + right
        if type(left) is not int or type(right) is not int:
            raise MiniThrow(TAG_TYPE)
        if op == "+":
            return left + right
        if op == "-":
            return left - right
        if op == "*":
            return left * right
        if right == 0:
            raise MiniThrow(TAG_DIV_BY_ZERO)
        if op == "/":
            return left // right  # floor division
        return left % right


def run_traced(
    p: Program,
    t: TestInvocation,
    *,
    fuel: int = DEFAULT_FUEL,
    max_depth: int = DEFAULT_MAX_DEPTH,
) -> RunResult:
    """Execute one invocation, returning the event trace and the outcome.

    Outcome precedence: crashed (uncaught exception or fuel exhaustion)
    beats failed (oracle violated) beats passed. A missing oracle can only
    yield passed or crashed.
    """
    if p.function(t.entry) is None:
        raise ValueError(f"entry function {t.entry!r} not defined")
    args = [copy_value(check_value(a, "argument")) for a in t.args]
    run = _Run(p, fuel, max_depth)
    crashed = False
    error_tag = None
    fuel_exhausted = False
    value = None
    try:
        value = run.call(t.entry, args)
    except MiniThrow as exc:
        crashed = True
        error_tag = exc.tag
    except FuelExhausted:
        crashed = True
        fuel_exhausted = True
        error_tag = TAG_FUEL
    run.events.append(TraceEvent.end(crashed))

    if crashed:
        outcome = OUTCOME_CRASHED
    elif t.expected is not None and t.expected.kind == "value" and not values_equal(
        value, t.expected.value
    ):
        outcome = OUTCOME_FAILED
    else:
        outcome = OUTCOME_PASSED
    return RunResult(tuple(run.events), outcome, value, error_tag, fuel_exhausted)
