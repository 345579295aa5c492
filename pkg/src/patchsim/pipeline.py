"""End-to-end patch classification and corpus evaluation.

``run_pipeline`` wires the stages together for one corpus entry: execute
original tests on both versions, optionally generate and label extra tests,
measure spectrum distances, and decide. Every per-test aggregate is kept on
the returned ``PipelineRun`` so a threshold sweep can relabel and redecide
without executing anything again.

The pipeline fails open: a component error downgrades the entry to a
``correct`` verdict with rule ``error-passthrough`` rather than aborting a
whole evaluation, and the cause is logged and recorded in the run notes.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from pathlib import Path
from statistics import fmean
from typing import Iterable, Sequence

from .classify import (
    LABEL_CORRECT,
    LABEL_INCORRECT,
    RULE_ERROR,
    DistanceEntry,
    EmptyVector,
    MissingTrace,
    NoCoveringOriginals,
    NoFailingTests,
    PatchDistanceVector,
    PatchSimConfig,
    TestSimConfig,
    Verdict,
    classify_patch,
    classify_test,
    label_from_aggregates,
    measure_patch_distances,
    measure_test_distances,
)
from .corpus import CorpusEntry, ManifestError
from .distance import DEFAULT_CONFIG, CapacityExceeded, DistanceConfig, spectrum_distance
from .generate import GenConfig, generate
from .minilang.interp import DEFAULT_FUEL, run_traced
from .minilang.syntax import ParseError, parse
from .trace import (
    RESULT_DISCARDED,
    RESULT_FAILING,
    RESULT_PASSING,
    FormatError,
    MalformedTrace,
    Spectrum,
    TestCase,
    extract_context_spectrum,
    extract_full_spectrum,
    read_trace_file,
)

log = logging.getLogger("patchsim")

# Errors any single stage may legitimately raise; anything else is a bug and
# propagates.
COMPONENT_ERRORS = (
    CapacityExceeded,
    EmptyVector,
    FormatError,
    MalformedTrace,
    ManifestError,
    MissingTrace,
    NoCoveringOriginals,
    NoFailingTests,
    ParseError,
)


@dataclass(frozen=True)
class PipelineConfig:
    patch_sim: PatchSimConfig = PatchSimConfig()
    test_sim: TestSimConfig = TestSimConfig()
    generation: GenConfig | None = GenConfig()  # None disables test generation entirely
    distance: DistanceConfig = DEFAULT_CONFIG
    fuel: int = DEFAULT_FUEL

    def gen_for(self, entry: CorpusEntry) -> GenConfig | None:
        """Entry-specific generation recipe; generation off stays off."""
        if self.generation is None:
            return None
        return entry.gen if entry.gen is not None else self.generation


@dataclass(frozen=True)
class OriginalRecord:
    """One original test: its label and before/after full-spectrum distance."""

    test_id: str
    result: str  # passing | failing
    distance: float


@dataclass(frozen=True)
class GeneratedRecord:
    """One generated test: nearest-original aggregates and patch distance.

    ``a_pass``/``a_fail`` are the minimum distances to passing and failing
    originals on the buggy version; the label follows from them and k_t.
    ``distance`` compares the test's own runs on the two versions.
    """

    test_id: str
    a_pass: float | None
    a_fail: float
    label: str  # passing | failing | discarded (at the run's own k_t)
    distance: float


@dataclass(frozen=True)
class PipelineRun:
    patch_id: str
    verdict: Verdict
    originals: tuple[OriginalRecord, ...] = ()
    generated: tuple[GeneratedRecord, ...] = ()
    notes: tuple[str, ...] = ()
    ground_truth: str | None = None
    group: str = ""


def _decide(
    originals: Sequence[OriginalRecord],
    generated: Sequence[GeneratedRecord],
    k_p: float,
    k_t: float,
) -> Verdict:
    """Patch verdict from stored records; the sweep-time half of the pipeline."""
    entries = [DistanceEntry(r.test_id, r.result, r.distance) for r in originals]
    for g in generated:
        label = label_from_aggregates(g.a_pass, g.a_fail, k_t)
        if label != RESULT_DISCARDED:
            entries.append(DistanceEntry(g.test_id, label, g.distance))
    return classify_patch(PatchDistanceVector(tuple(entries)), PatchSimConfig(k_p))


def reclassify(run: PipelineRun, k_p: float, k_t: float) -> Verdict:
    """Re-decide a cached run under different thresholds. Pure float work."""
    if run.verdict.rule == RULE_ERROR:
        return run.verdict
    return _decide(run.originals, run.generated, k_p, k_t)


def _spectra_for(
    program,
    tests: Sequence[TestCase],
    version: str,
    modified: frozenset,
    fuel: int,
) -> tuple[dict, dict]:
    """Run tests on one version; returns (full, context) spectra by test id."""
    full: dict[str, Spectrum] = {}
    context: dict[str, Spectrum] = {}
    for t in tests:
        result = run_traced(program, t.invocation, fuel=fuel)
        full[t.test_id] = extract_full_spectrum(
            result.events, test_id=t.test_id, version=version
        )
        context[t.test_id] = extract_context_spectrum(
            result.events, modified, test_id=t.test_id, version=version
        )
    return full, context


def run_pipeline(entry: CorpusEntry, config: PipelineConfig = PipelineConfig()) -> PipelineRun:
    """Classify one runnable corpus entry end to end."""
    notes: list[str] = []
    try:
        originals, generated = _run_stages(entry, config, notes)
        verdict = _decide(originals, generated, config.patch_sim.k_p, config.test_sim.k_t)
    except COMPONENT_ERRORS as exc:
        log.warning("%s: %s: %s; failing open", entry.patch_id, type(exc).__name__, exc)
        notes.append(f"{type(exc).__name__}: {exc}")
        return PipelineRun(
            patch_id=entry.patch_id,
            verdict=Verdict(LABEL_CORRECT, RULE_ERROR, None, None),
            notes=tuple(notes),
            ground_truth=entry.ground_truth,
            group=entry.group,
        )
    return PipelineRun(
        patch_id=entry.patch_id,
        verdict=verdict,
        originals=originals,
        generated=generated,
        notes=tuple(notes),
        ground_truth=entry.ground_truth,
        group=entry.group,
    )


def _run_stages(entry, config, notes):
    if not entry.runnable:
        raise ManifestError(
            f"{entry.patch_id}: entry has no sources; use classify_from_traces"
        )
    buggy = parse(entry.patch.buggy_source)
    patched = parse(entry.patch.patched_source)
    modified = entry.patch.modified_methods
    alignment = entry.patch.alignment

    buggy_full, buggy_ctx = _spectra_for(buggy, entry.originals, "buggy", modified, config.fuel)
    patched_full, _ = _spectra_for(patched, entry.originals, "patched", modified, config.fuel)

    vector = measure_patch_distances(
        entry.originals, buggy_full, patched_full, alignment, config.distance
    )
    by_id = {e.test_id: e for e in vector.entries}
    originals = tuple(
        OriginalRecord(t.test_id, t.result, by_id[t.test_id].value)
        for t in entry.originals
        if t.test_id in by_id
    )

    generated: tuple[GeneratedRecord, ...] = ()
    gen_cfg = config.gen_for(entry)
    if gen_cfg is not None:
        generated = _generate_and_label(
            entry, buggy, patched, buggy_ctx, gen_cfg, config, notes
        )
    return originals, generated


def _generate_and_label(entry, buggy, patched, buggy_ctx, gen_cfg, config, notes):
    covering = [t for t in entry.originals if buggy_ctx[t.test_id].events]
    if not covering:
        notes.append("generation skipped: no original test reaches a modified method")
        return ()
    if not any(t.result == RESULT_FAILING for t in covering):
        notes.append("generation skipped: no failing original reaches a modified method")
        return ()

    candidates = generate(buggy, entry.patch, gen_cfg, entry.originals)
    if not candidates:
        notes.append("generation produced no covering tests")
        return ()

    modified = entry.patch.modified_methods
    gen_full_b, gen_ctx = _spectra_for(
        buggy, candidates, "buggy", modified, gen_cfg.gen_fuel
    )
    gen_full_p, _ = _spectra_for(
        patched, candidates, "patched", modified, gen_cfg.gen_fuel
    )

    spectra = dict(gen_ctx)
    spectra.update({t.test_id: buggy_ctx[t.test_id] for t in covering})

    records = []
    for t in candidates:
        v = measure_test_distances(t, covering, spectra, config.distance)
        tv = classify_test(v, config.test_sim)
        after = entry.patch.alignment.remap_patched(gen_full_p[t.test_id])
        d = spectrum_distance(gen_full_b[t.test_id], after, config.distance)
        records.append(GeneratedRecord(t.test_id, tv.a_pass, tv.a_fail, tv.label, d))
    return tuple(records)


# Trace-backed classification ------------------------------------------------


def classify_from_traces(
    entry: CorpusEntry,
    trace_dir: str,
    config: PipelineConfig = PipelineConfig(),
) -> PipelineRun:
    """Classify an entry whose spectra come from trace files on disk.

    Expects ``<test-id>.buggy.trace`` and ``<test-id>.patched.trace`` in
    ``trace_dir`` for every original test. No generation happens here; the
    traces are whatever the external runner collected.
    """
    notes: list[str] = []
    try:
        originals = _records_from_traces(entry, Path(trace_dir), config)
        verdict = _decide(originals, (), config.patch_sim.k_p, config.test_sim.k_t)
    except COMPONENT_ERRORS as exc:
        log.warning("%s: %s: %s; failing open", entry.patch_id, type(exc).__name__, exc)
        notes.append(f"{type(exc).__name__}: {exc}")
        return PipelineRun(
            patch_id=entry.patch_id,
            verdict=Verdict(LABEL_CORRECT, RULE_ERROR, None, None),
            notes=tuple(notes),
            ground_truth=entry.ground_truth,
            group=entry.group,
        )
    return PipelineRun(
        patch_id=entry.patch_id,
        verdict=verdict,
        originals=originals,
        notes=tuple(notes),
        ground_truth=entry.ground_truth,
        group=entry.group,
    )


def _records_from_traces(entry, trace_dir, config):
    full = {"buggy": {}, "patched": {}}
    for t in entry.originals:
        for version in ("buggy", "patched"):
            path = trace_dir / f"{t.test_id}.{version}.trace"
            if not path.exists():
                raise MissingTrace(f"{path} not found")
            tf = read_trace_file(path)
            full[version][t.test_id] = extract_full_spectrum(
                tf.events, test_id=t.test_id, version=version
            )
    vector = measure_patch_distances(
        entry.originals,
        full["buggy"],
        full["patched"],
        entry.patch.alignment,
        config.distance,
    )
    by_id = {e.test_id: e for e in vector.entries}
    return tuple(
        OriginalRecord(t.test_id, t.result, by_id[t.test_id].value)
        for t in entry.originals
        if t.test_id in by_id
    )


# Corpus evaluation -----------------------------------------------------------


@dataclass(frozen=True)
class GroupStats:
    group: str
    total: int
    incorrect_total: int
    excluded: int  # ground-truth-incorrect classified incorrect
    correct_total: int
    correct_excluded: int  # ground-truth-correct classified incorrect (errors)


@dataclass(frozen=True)
class EvaluationReport:
    runs: tuple[PipelineRun, ...]
    k_p: float
    k_t: float

    @property
    def incorrect_excluded(self) -> int:
        return sum(
            1
            for r in self.runs
            if r.ground_truth == "incorrect" and r.verdict.label == LABEL_INCORRECT
        )

    @property
    def incorrect_total(self) -> int:
        return sum(1 for r in self.runs if r.ground_truth == "incorrect")

    @property
    def correct_excluded(self) -> int:
        return sum(
            1
            for r in self.runs
            if r.ground_truth == "correct" and r.verdict.label == LABEL_INCORRECT
        )

    @property
    def correct_total(self) -> int:
        return sum(1 for r in self.runs if r.ground_truth == "correct")

    @property
    def exclusion_rate(self) -> float:
        if not self.incorrect_total:
            return 0.0
        return self.incorrect_excluded / self.incorrect_total

    def group_stats(self) -> list[GroupStats]:
        groups: dict[str, list[PipelineRun]] = {}
        for r in self.runs:
            groups.setdefault(r.group, []).append(r)
        out = []
        for name in sorted(groups):
            rs = groups[name]
            out.append(
                GroupStats(
                    group=name or "(ungrouped)",
                    total=len(rs),
                    incorrect_total=sum(1 for r in rs if r.ground_truth == "incorrect"),
                    excluded=sum(
                        1
                        for r in rs
                        if r.ground_truth == "incorrect"
                        and r.verdict.label == LABEL_INCORRECT
                    ),
                    correct_total=sum(1 for r in rs if r.ground_truth == "correct"),
                    correct_excluded=sum(
                        1
                        for r in rs
                        if r.ground_truth == "correct"
                        and r.verdict.label == LABEL_INCORRECT
                    ),
                )
            )
        return out

    def to_json(self) -> dict:
        return {
            "k_p": self.k_p,
            "k_t": self.k_t,
            "totals": {
                "patches": len(self.runs),
                "incorrect_total": self.incorrect_total,
                "incorrect_excluded": self.incorrect_excluded,
                "correct_total": self.correct_total,
                "correct_excluded": self.correct_excluded,
                "exclusion_rate": self.exclusion_rate,
            },
            "groups": [
                {
                    "group": g.group,
                    "total": g.total,
                    "incorrect_total": g.incorrect_total,
                    "excluded": g.excluded,
                    "correct_total": g.correct_total,
                    "correct_excluded": g.correct_excluded,
                }
                for g in self.group_stats()
            ],
            "patches": [
                {
                    "patch_id": r.patch_id,
                    "group": r.group,
                    "ground_truth": r.ground_truth,
                    "label": r.verdict.label,
                    "rule": r.verdict.rule,
                    "a_pass": r.verdict.a_pass,
                    "a_fail": r.verdict.a_fail,
                    "generated_tests": len(r.generated),
                    "notes": list(r.notes),
                }
                for r in self.runs
            ],
        }

    def format_table(self) -> str:
        header = f"{'patch':<24} {'group':<12} {'truth':<10} {'verdict':<10} {'rule':<20} {'A_p':>7} {'A_f':>7} {'gen':>4}"
        lines = [header, "-" * len(header)]
        for r in self.runs:
            a_p = f"{r.verdict.a_pass:.3f}" if r.verdict.a_pass is not None else "-"
            a_f = f"{r.verdict.a_fail:.3f}" if r.verdict.a_fail is not None else "-"
            lines.append(
                f"{r.patch_id:<24} {r.group:<12} {r.ground_truth or '?':<10} "
                f"{r.verdict.label:<10} {r.verdict.rule:<20} {a_p:>7} {a_f:>7} "
                f"{len(r.generated):>4}"
            )
        lines.append("-" * len(header))
        lines.append(
            f"incorrect excluded: {self.incorrect_excluded}/{self.incorrect_total} "
            f"({self.exclusion_rate:.0%})   "
            f"correct excluded: {self.correct_excluded}/{self.correct_total}"
        )
        return "\n".join(lines)


def evaluate(
    entries: Iterable[CorpusEntry], config: PipelineConfig = PipelineConfig()
) -> EvaluationReport:
    runs = tuple(run_pipeline(e, config) for e in entries)
    return EvaluationReport(runs, config.patch_sim.k_p, config.test_sim.k_t)


@dataclass(frozen=True)
class SweepRow:
    k_p: float
    k_t: float
    incorrect_excluded: int
    incorrect_total: int
    correct_excluded: int
    correct_total: int


def sweep(
    runs: Sequence[PipelineRun],
    k_p_grid: Sequence[float],
    k_t_grid: Sequence[float],
) -> list[SweepRow]:
    """Re-decide cached runs over a threshold grid; no re-execution."""
    rows = []
    for k_p in k_p_grid:
        for k_t in k_t_grid:
            inc_ex = cor_ex = inc_n = cor_n = 0
            for r in runs:
                v = reclassify(r, k_p, k_t)
                if r.ground_truth == "incorrect":
                    inc_n += 1
                    inc_ex += v.label == LABEL_INCORRECT
                elif r.ground_truth == "correct":
                    cor_n += 1
                    cor_ex += v.label == LABEL_INCORRECT
            rows.append(SweepRow(k_p, k_t, inc_ex, inc_n, cor_ex, cor_n))
    return rows


def distance_summary(runs: Sequence[PipelineRun]) -> dict:
    """Aggregate passing/failing distances by ground-truth class.

    The separation between the two classes is what makes the whole approach
    work, so the harness reports it directly.
    """
    out = {}
    for truth in ("correct", "incorrect"):
        passing = []
        failing = []
        for r in runs:
            if r.ground_truth != truth:
                continue
            passing.extend(o.distance for o in r.originals if o.result == RESULT_PASSING)
            failing.extend(o.distance for o in r.originals if o.result == RESULT_FAILING)
        mean_pass = fmean(passing) if passing else 0.0
        mean_fail = fmean(failing) if failing else 0.0
        ratio = mean_fail / mean_pass if mean_pass > 0 else float("inf")
        out[truth] = {
            "mean_passing_distance": mean_pass,
            "mean_failing_distance": mean_fail,
            "failing_to_passing_ratio": ratio,
            "n_passing": len(passing),
            "n_failing": len(failing),
        }
    return out
