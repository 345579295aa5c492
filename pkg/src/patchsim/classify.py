"""The two classification heuristics over execution distances.

Test classification labels a generated test by nearest-neighbor distance to
the original tests' context spectra on the buggy version: similar executions
are assumed to share the same pass/fail result. Patch classification then
compares each test's full spectrum on the buggy and patched versions: a
correct patch should barely disturb passing tests (A_p below a threshold)
while changing failing-test behavior more (A_p < A_f).
"""

from __future__ import annotations

from dataclasses import dataclass
from statistics import fmean
from typing import Mapping, Sequence

from .distance import DEFAULT_CONFIG, DistanceConfig, spectrum_distance
from .trace import (
    RESULT_DISCARDED,
    RESULT_FAILING,
    RESULT_PASSING,
    Alignment,
    Spectrum,
    TestCase,
)

LABEL_CORRECT = "correct"
LABEL_INCORRECT = "incorrect"

RULE_THRESHOLD = "threshold-exceeded"
RULE_FAILING_NOT_LARGER = "failing-not-larger"
RULE_NO_PASSING = "no-passing-default"
RULE_OK = "ok"
RULE_ERROR = "error-passthrough"


class EmptyVector(Exception):
    """Distance vector has no entries to classify from."""


class NoFailingTests(Exception):
    """Every classification needs at least one failing test; none present."""


class NoCoveringOriginals(Exception):
    """No original test executes any patched method."""


class MissingTrace(Exception):
    """A test lacks a recorded spectrum on a required version."""


@dataclass(frozen=True)
class DistanceEntry:
    test_id: str
    result: str  # passing | failing
    value: float

    def __post_init__(self):
        if self.result not in (RESULT_PASSING, RESULT_FAILING):
            raise ValueError(f"entry result must be passing/failing, got {self.result!r}")
        if not 0.0 <= self.value <= 1.0:
            raise ValueError(f"distance out of range: {self.value}")


@dataclass(frozen=True)
class TestDistanceVector:
    __test__ = False

    """Distances from one generated test to covering original tests."""

    entries: tuple[DistanceEntry, ...]


@dataclass(frozen=True)
class PatchDistanceVector:
    """Per-test distance between buggy-version and patched-version runs."""

    entries: tuple[DistanceEntry, ...]


@dataclass(frozen=True)
class TestSimConfig:
    __test__ = False

    k_t: float = 0.4

    def __post_init__(self):
        if not 0.0 <= self.k_t <= 1.0:
            raise ValueError("k_t must be in [0, 1]")


@dataclass(frozen=True)
class PatchSimConfig:
    k_p: float = 0.25

    def __post_init__(self):
        if not 0.0 <= self.k_p <= 1.0:
            raise ValueError("k_p must be in [0, 1]")


@dataclass(frozen=True)
class TestVerdict:
    __test__ = False

    label: str  # passing | failing | discarded
    a_pass: float | None  # None when no passing original exists
    a_fail: float


@dataclass(frozen=True)
class Verdict:
    label: str  # correct | incorrect
    rule: str
    a_pass: float | None
    a_fail: float | None


def measure_test_distances(
    gen: TestCase,
    originals: Sequence[TestCase],
    spectra: Mapping[str, Spectrum],
    config: DistanceConfig = DEFAULT_CONFIG,
) -> TestDistanceVector:
    """Distances from a generated test to each covering original, buggy version.

    ``spectra`` maps test IDs to context spectra. Originals whose context
    spectrum is empty never reached a patched method and are omitted; an
    empty spectrum for the generated test itself is kept (its distance to
    any covering original is simply 1.0).
    """
    if gen.test_id not in spectra:
        raise MissingTrace(f"no buggy-version spectrum for generated test {gen.test_id!r}")
    gen_spectrum = spectra[gen.test_id]
    entries = []
    for orig in originals:
        if orig.result not in (RESULT_PASSING, RESULT_FAILING):
            raise ValueError(f"original test {orig.test_id!r} has result {orig.result!r}")
        if orig.test_id not in spectra:
            raise MissingTrace(f"no buggy-version spectrum for original {orig.test_id!r}")
        sp = spectra[orig.test_id]
        if not sp.events:
            continue
        entries.append(
            DistanceEntry(orig.test_id, orig.result, spectrum_distance(gen_spectrum, sp, config))
        )
    if not entries:
        raise NoCoveringOriginals("every original test was excluded from the vector")
    return TestDistanceVector(tuple(entries))


def label_from_aggregates(a_pass: float | None, a_fail: float, k_t: float) -> str:
    """Test label from its two aggregate distances alone.

    Factored out so stored aggregates can be relabeled under a different k_t
    without recomputing any distances.
    """
    if a_pass is None:
        return RESULT_PASSING if k_t <= a_fail else RESULT_FAILING
    if a_pass < a_fail:
        return RESULT_PASSING
    if a_pass > a_fail:
        return RESULT_FAILING
    return RESULT_DISCARDED


def classify_test(v: TestDistanceVector, cfg: TestSimConfig = TestSimConfig()) -> TestVerdict:
    """Nearest-neighbor label for one generated test.

    With passing originals present the nearer class wins and an exact tie is
    discarded. With only failing originals, the test is presumed passing iff
    it sits at least k_t away from every failing one.
    """
    if not v.entries:
        raise EmptyVector("cannot classify from an empty distance vector")
    passing = [e.value for e in v.entries if e.result == RESULT_PASSING]
    failing = [e.value for e in v.entries if e.result == RESULT_FAILING]
    if not failing:
        raise NoFailingTests("test distance vector has no failing original")
    a_fail = min(failing)
    a_pass = min(passing) if passing else None
    return TestVerdict(label_from_aggregates(a_pass, a_fail, cfg.k_t), a_pass, a_fail)


def measure_patch_distances(
    tests: Sequence[TestCase],
    buggy: Mapping[str, Spectrum],
    patched: Mapping[str, Spectrum],
    alignment: Alignment,
    config: DistanceConfig = DEFAULT_CONFIG,
) -> PatchDistanceVector:
    """Distance between each test's full spectra on the two versions.

    Patched-version spectra are remapped into buggy ID space first so that
    unchanged statements compare equal. Tests labeled discarded or unknown
    are skipped.
    """
    entries = []
    for t in tests:
        if t.result not in (RESULT_PASSING, RESULT_FAILING):
            continue
        if t.test_id not in buggy:
            raise MissingTrace(f"no buggy-version spectrum for test {t.test_id!r}")
        if t.test_id not in patched:
            raise MissingTrace(f"no patched-version spectrum for test {t.test_id!r}")
        after = alignment.remap_patched(patched[t.test_id])
        entries.append(
            DistanceEntry(t.test_id, t.result, spectrum_distance(buggy[t.test_id], after, config))
        )
    return PatchDistanceVector(tuple(entries))


def classify_patch(v: PatchDistanceVector, cfg: PatchSimConfig = PatchSimConfig()) -> Verdict:
    """Decide patch correctness from before/after distances.

    A_p is the worst (max) disturbance of a passing test, A_f the mean
    disturbance of failing tests. Excess disturbance of passing behavior, or
    failing behavior changing no more than passing behavior, marks the patch
    incorrect. With no passing tests there is nothing to compare against and
    the patch is accepted.
    """
    failing = [e.value for e in v.entries if e.result == RESULT_FAILING]
    if not failing:
        raise NoFailingTests("patch distance vector has no failing test")
    a_fail = fmean(failing)
    passing = [e.value for e in v.entries if e.result == RESULT_PASSING]
    if not passing:
        return Verdict(LABEL_CORRECT, RULE_NO_PASSING, None, a_fail)
    a_pass = max(passing)
    if a_pass >= cfg.k_p:
        return Verdict(LABEL_INCORRECT, RULE_THRESHOLD, a_pass, a_fail)
    if a_pass >= a_fail:
        return Verdict(LABEL_INCORRECT, RULE_FAILING_NOT_LARGER, a_pass, a_fail)
    return Verdict(LABEL_CORRECT, RULE_OK, a_pass, a_fail)
