"""Line-event tracing of one callable, scoped to the files in an id map.

Only frames whose code lives in the id map are traced; every other frame
declines local tracing and runs at full speed. Unwind detection is
frame-local: an exception event marks the frame, a later line event unmarks
it (a handler caught the exception and execution resumed), and a marked
frame's return is recorded as an unwind instead of a normal exit.

An AssertionError escaping the test callable means the test's own check
tripped while the program under test ran to completion, so the run counts
as failed, not crashed. Any other escaping exception is a crash.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass
from pathlib import Path

OUTCOME_PASSED = "passed"
OUTCOME_FAILED = "failed"
OUTCOME_CRASHED = "crashed"

WIRE_HEADER = "CPSTRACE 1"


@dataclass(frozen=True)
class TraceRecord:
    events: tuple  # ("S", id) | ("E" | "X" | "U", name)
    outcome: str
    crashed: bool


class _Tracer:
    def __init__(self, line_ids: dict[str, dict[int, int]]):
        self.line_ids = line_ids
        self.events: list[tuple] = []
        self._raised: set[int] = set()

    def __call__(self, frame, event, arg):
        if event != "call":
            return None
        lines = self.line_ids.get(frame.f_code.co_filename)
        if lines is None:
            return None
        events = self.events
        raised = self._raised
        self.events.append(("E", frame.f_code.co_name))

        def local(frame, event, arg):
            key = id(frame)
            if event == "line":
                raised.discard(key)
                sid = lines.get(frame.f_lineno)
                if sid is not None:
                    events.append(("S", sid))
            elif event == "exception":
                raised.add(key)
            elif event == "return":
                kind = "U" if key in raised else "X"
                raised.discard(key)
                events.append((kind, frame.f_code.co_name))
            return local

        return local


def run_traced(fn, line_ids: dict[str, dict[int, int]]) -> TraceRecord:
    """Call ``fn()`` under the tracer and classify how the run ended."""
    tracer = _Tracer(line_ids)
    outcome = OUTCOME_PASSED
    crashed = False
    previous = sys.gettrace()
    sys.settrace(tracer)
    try:
        fn()
    except AssertionError:
        outcome = OUTCOME_FAILED
    except BaseException:
        outcome = OUTCOME_CRASHED
        crashed = True
    finally:
        sys.settrace(previous)
    return TraceRecord(tuple(tracer.events), outcome, crashed)


def write_trace(
    events,
    path: str | Path,
    *,
    test_id: str,
    version: str,
    crashed: bool,
) -> None:
    """Serialize one run into the line-delimited trace wire format."""
    lines = [f"{WIRE_HEADER} {test_id} {version}"]
    lines.extend(f"{kind} {value}" for kind, value in events)
    lines.append(f"END {1 if crashed else 0}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")
