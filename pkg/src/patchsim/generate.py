"""Random test generation targeting the patched methods.

Candidates are drawn from typed literal pools plus values harvested from the
original tests' arguments, run on the buggy version, and kept only when their
calling-context spectrum shows they actually entered a modified method. From
all covering candidates a seeded uniform sample of at most ``max_selected``
tests is returned. Generation is a pure function of its inputs: same seed,
program, and configuration give the same tests.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Sequence

from .minilang.interp import TestInvocation, check_value, copy_value, run_traced
from .minilang.syntax import Program
from .trace import (
    ORIGIN_GENERATED,
    RESULT_UNKNOWN,
    PatchSpec,
    TestCase,
    extract_context_spectrum,
)

DEFAULT_INTS = (-2, -1, 0, 1, 2, 3, 5, 10, 17, 42, 100)
DEFAULT_STRINGS = ("", "a", "ab", "test")
DEFAULT_ARRAYS = ((), (0,), (1, 2, 3), (5, 5, 5, 5))


@dataclass(frozen=True)
class ValuePools:
    ints: tuple[int, ...] = DEFAULT_INTS
    bools: tuple[bool, ...] = (False, True)
    strings: tuple[str, ...] = DEFAULT_STRINGS
    arrays: tuple[tuple, ...] = DEFAULT_ARRAYS  # arrays as nested tuples

    def materialize(self) -> list:
        values: list = list(self.ints) + list(self.bools) + list(self.strings)
        values.extend(_to_list(a) for a in self.arrays)
        return values


def _to_list(v):
    return [_to_list(x) for x in v] if isinstance(v, tuple) else v


@dataclass(frozen=True)
class GenConfig:
    seed: int = 0
    budget: int = 200  # candidate attempts, the determinism-friendly stand-in for wall time
    max_selected: int = 20
    pools: ValuePools = field(default_factory=ValuePools)
    entries: tuple[str, ...] | None = None  # None: any function is callable
    gen_fuel: int = 20_000

    def __post_init__(self):
        if self.max_selected < 0:
            raise ValueError("max_selected must be non-negative")
        if self.budget < 0:
            raise ValueError("budget must be non-negative")


def harvest_values(originals: Sequence[TestCase]) -> list:
    """Argument values of the original tests, plus array elements one level deep."""
    values: list = []
    for t in originals:
        inv = t.invocation
        if not isinstance(inv, TestInvocation):
            continue
        for arg in inv.args:
            values.append(copy_value(arg))
            if type(arg) is list:
                values.extend(copy_value(x) for x in arg)
    return values


def generate(
    program: Program,
    patch: PatchSpec,
    cfg: GenConfig = GenConfig(),
    originals: Sequence[TestCase] = (),
) -> list[TestCase]:
    """Generated tests whose buggy-version run enters ≥1 modified method.

    Returned tests carry no oracle; labeling them is the test classifier's
    job. May legitimately return an empty list when no candidate reaches a
    modified method.
    """
    if not patch.modified_methods:
        raise ValueError("patch has no modified methods to target")
    functions = {f.name: f for f in program.functions}
    if cfg.entries is not None:
        unknown = set(cfg.entries) - set(functions)
        if unknown:
            raise ValueError(f"entry functions not in program: {sorted(unknown)}")
        entry_names = tuple(cfg.entries)
    else:
        entry_names = tuple(functions)
    if not entry_names:
        return []

    pool = cfg.pools.materialize()
    pool.extend(harvest_values(originals))
    for v in pool:
        check_value(v, "pool value")

    rng = random.Random(cfg.seed)
    candidates: list[tuple[str, tuple]] = []
    seen: set[tuple[str, str]] = set()
    for _ in range(cfg.budget):
        name = rng.choice(entry_names)
        args = tuple(copy_value(rng.choice(pool)) for _ in functions[name].params)
        key = (name, repr(args))
        if key in seen:
            continue
        seen.add(key)
        result = run_traced(program, TestInvocation(name, args), fuel=cfg.gen_fuel)
        ctx = extract_context_spectrum(result.events, patch.modified_methods)
        if ctx.events:
            candidates.append((name, args))

    if len(candidates) > cfg.max_selected:
        candidates = rng.sample(candidates, cfg.max_selected)
    return [
        TestCase(f"gen-{i:04d}", ORIGIN_GENERATED, RESULT_UNKNOWN, TestInvocation(name, args))
        for i, (name, args) in enumerate(candidates)
    ]
