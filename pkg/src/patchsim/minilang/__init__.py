"""A small deterministic imperative language with a statement-level tracer.

The execution substrate for the classification pipeline: programs in this
language stand in for real subjects, so the whole toolchain can run and be
verified at desk scale. No I/O, no randomness, no floating point.
"""

from .syntax import Function, ParseError, Program, parse, pretty_print  # noqa: F401
from .interp import (  # noqa: F401
    Oracle,
    RunResult,
    TestInvocation,
    run_traced,
)
from .align import align_versions, build_patch_spec, modified_methods  # noqa: F401
