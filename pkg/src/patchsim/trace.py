"""Execution traces and the spectra derived from them.

A run of one test on one program version is recorded as a flat sequence of
trace events: statement executions, method enters/exits, exception unwinds,
and a final test-end marker. Spectra (ordered statement-ID sequences) are
extracted from these events, either over the whole run or restricted to the
calling context of a set of patched methods.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from typing import Iterable, Sequence

# Event kinds, chosen to match the wire format records directly.
STATEMENT = "S"
ENTER = "E"
EXIT = "X"
UNWIND = "U"  # method exit forced by an exception propagating out
TEST_END = "END"

VERSIONS = ("buggy", "patched")

RESULT_PASSING = "passing"
RESULT_FAILING = "failing"
RESULT_DISCARDED = "discarded"
RESULT_UNKNOWN = "unknown"

ORIGIN_ORIGINAL = "original"
ORIGIN_GENERATED = "generated"


class MalformedTrace(Exception):
    """Event stream violates nesting or ordering rules."""


class FormatError(Exception):
    """Trace file does not conform to the wire format."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


@dataclass(frozen=True)
class TraceEvent:
    kind: str
    stmt: int | None = None
    method: str | None = None
    crashed: bool | None = None  # only for test-end events

    @staticmethod
    def statement(stmt_id: int) -> "TraceEvent":
        if stmt_id < 0:
            raise ValueError(f"statement id must be non-negative, got {stmt_id}")
        return TraceEvent(STATEMENT, stmt=stmt_id)

    @staticmethod
    def enter(method: str) -> "TraceEvent":
        return TraceEvent(ENTER, method=method)

    @staticmethod
    def exit(method: str) -> "TraceEvent":
        return TraceEvent(EXIT, method=method)

    @staticmethod
    def unwind(method: str) -> "TraceEvent":
        return TraceEvent(UNWIND, method=method)

    @staticmethod
    def end(crashed: bool) -> "TraceEvent":
        return TraceEvent(TEST_END, crashed=crashed)


@dataclass(frozen=True)
class Spectrum:
    """Ordered statement IDs observed during one test execution."""

    events: tuple[int, ...]
    test_id: str = ""
    version: str = "buggy"
    crashed: bool = False

    def __post_init__(self):
        if self.version not in VERSIONS:
            raise ValueError(f"version must be one of {VERSIONS}, got {self.version!r}")

    def __len__(self) -> int:
        return len(self.events)


@dataclass(frozen=True)
class TestCase:
    __test__ = False  # domain class, not a pytest suite

    test_id: str
    origin: str = ORIGIN_ORIGINAL
    result: str = RESULT_UNKNOWN
    invocation: object = None

    def with_result(self, result: str) -> "TestCase":
        return TestCase(self.test_id, self.origin, result, self.invocation)


@dataclass(frozen=True)
class Alignment:
    """Partial bijection between statement IDs of two program versions.

    ``pairs`` holds (buggy_id, patched_id) for statements that are unchanged
    between versions. ``buggy_max`` is the largest ID in use on the buggy
    side; patched-only statements are remapped above it so they can never
    collide with a buggy ID.
    """

    pairs: tuple[tuple[int, int], ...]
    buggy_max: int = -1

    def __post_init__(self):
        b_ids = [b for b, _ in self.pairs]
        p_ids = [p for _, p in self.pairs]
        if len(set(b_ids)) != len(b_ids) or len(set(p_ids)) != len(p_ids):
            raise ValueError("alignment is not a partial bijection")

    @property
    def patched_to_buggy(self) -> dict[int, int]:
        return {p: b for b, p in self.pairs}

    def remap_patched(self, spectrum: Spectrum) -> Spectrum:
        """Rewrite a patched-version spectrum into buggy ID space.

        Aligned statements take their buggy ID; statements introduced by the
        patch get a fresh ID above every buggy ID.
        """
        back = self.patched_to_buggy
        base = self.buggy_max + 1
        events = tuple(back.get(e, base + e) for e in spectrum.events)
        return Spectrum(events, spectrum.test_id, spectrum.version, spectrum.crashed)


@dataclass(frozen=True)
class PatchSpec:
    buggy_source: str
    patched_source: str
    modified_methods: frozenset[str]
    alignment: Alignment

    def __post_init__(self):
        if not self.modified_methods:
            raise ValueError("a patch must modify at least one method")


@dataclass(frozen=True)
class TraceFile:
    """Parsed contents of one trace file."""

    test_id: str
    version: str
    events: tuple[TraceEvent, ...] = field(default=())


def _scan(events: Iterable[TraceEvent], patched: frozenset[str] | None):
    """Walk an event stream, validating nesting; collect statement IDs.

    With ``patched`` given, only statements executed while at least one
    patched-method frame is open are collected.
    """
    stack: list[str] = []
    patched_depth = 0
    out: list[int] = []
    crashed = False
    ended = False
    for ev in events:
        if ended:
            raise MalformedTrace("events after test-end marker")
        if ev.kind == STATEMENT:
            if patched is None or patched_depth > 0:
                out.append(ev.stmt)  # type: ignore[arg-type]
        elif ev.kind == ENTER:
            stack.append(ev.method or "")
            if patched is not None and ev.method in patched:
                patched_depth += 1
        elif ev.kind in (EXIT, UNWIND):
            if not stack or stack[-1] != ev.method:
                raise MalformedTrace(f"exit from {ev.method!r} does not match open frame")
            stack.pop()
            if patched is not None and ev.method in patched:
                patched_depth -= 1
            if ev.kind == UNWIND and not stack:
                crashed = True
        elif ev.kind == TEST_END:
            ended = True
        else:
            raise MalformedTrace(f"unknown event kind {ev.kind!r}")
    if stack:
        raise MalformedTrace(f"{len(stack)} method frame(s) never closed")
    return out, crashed


def extract_full_spectrum(
    raw: Sequence[TraceEvent], *, test_id: str = "", version: str = "buggy"
) -> Spectrum:
    """All executed statements in trace order; crashed iff an unwind reached top level."""
    out, crashed = _scan(raw, None)
    return Spectrum(tuple(out), test_id, version, crashed)


def extract_context_spectrum(
    raw: Sequence[TraceEvent],
    patched: Iterable[str],
    *,
    test_id: str = "",
    version: str = "buggy",
) -> Spectrum:
    """Statements executed within the calling context of any patched method.

    Statements inside callees of a patched method are included; disjoint
    context intervals are concatenated in trace order. An empty result means
    the test never entered a patched method and should be excluded from
    distance measurement by the caller.
    """
    patched_set = frozenset(patched)
    if not patched_set:
        raise ValueError("patched method set must be non-empty")
    out, crashed = _scan(raw, patched_set)
    return Spectrum(tuple(out), test_id, version, crashed)


_WIRE_HEADER = "CPSTRACE"
_WIRE_VERSION = "1"


def _check_token(value: str, what: str) -> str:
    if not value or any(c.isspace() for c in value):
        raise ValueError(f"{what} must be non-empty and contain no whitespace: {value!r}")
    return value


def write_trace_file(
    events: Sequence[TraceEvent],
    path: str | os.PathLike,
    *,
    test_id: str,
    version: str,
) -> None:
    if version not in VERSIONS:
        raise ValueError(f"version must be one of {VERSIONS}, got {version!r}")
    lines = [f"{_WIRE_HEADER} {_WIRE_VERSION} {_check_token(test_id, 'test id')} {version}"]
    for ev in events:
        if ev.kind == STATEMENT:
            lines.append(f"S {ev.stmt}")
        elif ev.kind in (ENTER, EXIT, UNWIND):
            lines.append(f"{ev.kind} {_check_token(ev.method or '', 'method name')}")
        elif ev.kind == TEST_END:
            lines.append(f"END {1 if ev.crashed else 0}")
        else:
            raise ValueError(f"cannot serialize event kind {ev.kind!r}")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


def read_trace_file(path: str | os.PathLike) -> TraceFile:
    with open(path, "r", encoding="utf-8") as fh:
        raw_lines = fh.read().splitlines()

    test_id = ""
    version = "buggy"
    events: list[TraceEvent] = []
    saw_end = False
    start = 0

    # Header is expected but a fully empty file is accepted as an empty trace.
    for i, line in enumerate(raw_lines):
        if line.strip():
            start = i
            break
    else:
        return TraceFile(test_id, version, ())

    header = raw_lines[start].split()
    if header[0] == _WIRE_HEADER:
        if len(header) != 4 or header[1] != _WIRE_VERSION:
            raise FormatError(f"bad header {raw_lines[start]!r}", line=start + 1)
        if header[3] not in VERSIONS:
            raise FormatError(f"unknown program version {header[3]!r}", line=start + 1)
        test_id, version = header[2], header[3]
        start += 1

    for i in range(start, len(raw_lines)):
        line = raw_lines[i].strip()
        if not line:
            continue
        if saw_end:
            raise FormatError("record after END", line=i + 1)
        parts = line.split()
        kind, args = parts[0], parts[1:]
        if kind == STATEMENT:
            if len(args) != 1 or not args[0].isdigit():
                raise FormatError(f"bad statement record {line!r}", line=i + 1)
            events.append(TraceEvent.statement(int(args[0])))
        elif kind in (ENTER, EXIT, UNWIND):
            if len(args) != 1:
                raise FormatError(f"bad method record {line!r}", line=i + 1)
            events.append(TraceEvent(kind, method=args[0]))
        elif kind == TEST_END:
            if len(args) != 1 or args[0] not in ("0", "1"):
                raise FormatError(f"bad END record {line!r}", line=i + 1)
            events.append(TraceEvent.end(args[0] == "1"))
            saw_end = True
        else:
            raise FormatError(f"unknown event kind {kind!r}", line=i + 1)

    return TraceFile(test_id, version, tuple(events))
