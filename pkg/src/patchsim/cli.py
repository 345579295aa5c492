"""Command-line front end for the classification toolchain.

One verb per pipeline stage: trace a single test, generate tests for a
manifest, label generated tests, classify one patch, evaluate a corpus,
sweep thresholds, score the comparison baselines, and measure the distance
between two trace files.

All verbs print machine-readable JSON unless noted; ``evaluate`` and
``sweep`` default to a plain-text table with ``--json`` available.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .baselines import (
    EmptyCoveringSet,
    crash_oracle,
    semantic_distance_led,
    syntactic_distance,
)
from .classify import (
    LABEL_CORRECT,
    PatchSimConfig,
    RULE_ERROR,
    TestSimConfig,
    classify_test,
    measure_test_distances,
)
from .corpus import _gen_from_json, entry_to_json, load_corpus, load_manifest
from .distance import DEFAULT_CONFIG, DistanceConfig, spectrum_distance
from .generate import GenConfig, generate
from .golden import golden_corpus
from .minilang import Oracle, ParseError, TestInvocation, parse, run_traced
from .pipeline import (
    COMPONENT_ERRORS,
    PipelineConfig,
    classify_from_traces,
    evaluate,
    run_pipeline,
    sweep,
)
from .trace import (
    extract_context_spectrum,
    extract_full_spectrum,
    read_trace_file,
    write_trace_file,
)

EXIT_CORRECT = 0
EXIT_INCORRECT = 1
EXIT_ERROR = 2


class CliError(Exception):
    """Operational failure reported on stderr with exit status 2."""


# Config files ----------------------------------------------------------------


def load_config(path: str | None, no_gen: bool = False) -> PipelineConfig:
    """PipelineConfig from a JSON config file.

    Schema (all keys optional): k_p, k_t, fuel, generation (seed, budget,
    max_selected, gen_fuel, entries, pools; null disables generation),
    distance (collapse_runs, cap, overflow).
    """
    doc = {}
    if path is not None:
        try:
            with open(path, "r", encoding="utf-8") as fh:
                doc = json.load(fh)
        except OSError as exc:
            raise CliError(f"cannot read config {path}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise CliError(f"config {path} is not valid JSON: {exc}") from exc

    generation: GenConfig | None
    if no_gen:
        generation = None
    elif "generation" in doc:
        generation = _gen_from_json(doc["generation"])
    else:
        generation = GenConfig()

    dist_doc = doc.get("distance", {})
    try:
        return PipelineConfig(
            patch_sim=PatchSimConfig(k_p=doc.get("k_p", 0.25)),
            test_sim=TestSimConfig(k_t=doc.get("k_t", 0.4)),
            generation=generation,
            distance=DistanceConfig(
                collapse_runs=dist_doc.get("collapse_runs", True),
                cap=dist_doc.get("cap", DEFAULT_CONFIG.cap),
                overflow=dist_doc.get("overflow", DEFAULT_CONFIG.overflow),
            ),
            fuel=doc.get("fuel", 1_000_000),
        )
    except ValueError as exc:
        raise CliError(f"bad config value: {exc}") from exc


def _entries_for(args) -> list:
    if getattr(args, "golden", False):
        return golden_corpus()
    if not args.corpus:
        raise CliError("give a corpus directory or --golden")
    return load_corpus(args.corpus)


def _manifest(path):
    try:
        return load_manifest(path)
    except OSError as exc:
        raise CliError(f"cannot read manifest {path}: {exc}") from exc


def _parse_values(raw: str, what: str):
    try:
        return json.loads(raw)
    except json.JSONDecodeError as exc:
        raise CliError(f"{what} must be JSON: {exc}") from exc


# Verbs ------------------------------------------------------------------------


def cmd_run(args) -> int:
    try:
        source = Path(args.source).read_text(encoding="utf-8")
    except OSError as exc:
        raise CliError(str(exc)) from exc
    try:
        program = parse(source)
    except ParseError as exc:
        raise CliError(f"{args.source}: {exc}") from exc

    call_args = tuple(_parse_values(args.args, "--args"))
    if args.completes:
        oracle = Oracle("completes")
    elif args.expect is not None:
        oracle = Oracle("value", _parse_values(args.expect, "--expect"))
    else:
        oracle = None

    result = run_traced(
        program, TestInvocation(args.entry, call_args, oracle), fuel=args.fuel
    )
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / f"{args.test_id}.{args.version}.trace"
    write_trace_file(result.events, path, test_id=args.test_id, version=args.version)
    print(
        json.dumps(
            {
                "test_id": args.test_id,
                "version": args.version,
                "outcome": result.outcome,
                "trace": str(path),
            }
        )
    )
    return EXIT_CORRECT


def cmd_gen_tests(args) -> int:
    entry, _ = _manifest(args.manifest)
    if not entry.runnable:
        raise CliError(f"{entry.patch_id}: cannot generate tests without sources")
    config = load_config(args.config)
    gen_cfg = config.gen_for(entry) or GenConfig()
    program = parse(entry.patch.buggy_source)
    tests = generate(program, entry.patch, gen_cfg, entry.originals)
    doc = entry_to_json(entry, tests)
    text = json.dumps(doc, indent=2) + "\n"
    if args.out == "-":
        sys.stdout.write(text)
    else:
        Path(args.out).write_text(text, encoding="utf-8")
    return EXIT_CORRECT


def _context_spectra_from_traces(entry, tests, trace_dir):
    spectra = {}
    for t in tests:
        path = Path(trace_dir) / f"{t.test_id}.buggy.trace"
        if not path.exists():
            raise CliError(f"missing trace {path}")
        tf = read_trace_file(path)
        spectra[t.test_id] = extract_context_spectrum(
            tf.events, entry.patch.modified_methods, test_id=t.test_id, version="buggy"
        )
    return spectra


def _context_spectra_by_running(entry, tests, fuel):
    program = parse(entry.patch.buggy_source)
    spectra = {}
    for t in tests:
        if not isinstance(t.invocation, TestInvocation):
            raise CliError(f"{t.test_id}: manifest test has no invocation to run")
        result = run_traced(program, t.invocation, fuel=fuel)
        spectra[t.test_id] = extract_context_spectrum(
            result.events,
            entry.patch.modified_methods,
            test_id=t.test_id,
            version="buggy",
        )
    return spectra


def cmd_classify_test(args) -> int:
    entry, generated = _manifest(args.manifest)
    if not generated:
        raise CliError(f"{entry.patch_id}: manifest carries no generated tests")
    config = load_config(args.config)

    everything = list(entry.originals) + list(generated)
    if args.traces:
        spectra = _context_spectra_from_traces(entry, everything, args.traces)
    elif entry.runnable:
        spectra = _context_spectra_by_running(entry, everything, config.fuel)
    else:
        raise CliError(f"{entry.patch_id}: no sources and no --traces directory")

    covering = [t for t in entry.originals if spectra[t.test_id].events]
    for t in generated:
        vector = measure_test_distances(t, covering, spectra, config.distance)
        verdict = classify_test(vector, config.test_sim)
        print(
            json.dumps(
                {
                    "test_id": t.test_id,
                    "verdict": verdict.label,
                    "a_p": verdict.a_pass,
                    "a_f": verdict.a_fail,
                }
            )
        )
    return EXIT_CORRECT


def cmd_classify_patch(args) -> int:
    entry, _ = _manifest(args.manifest)
    config = load_config(args.config, no_gen=args.no_gen)
    if args.traces:
        run = classify_from_traces(entry, args.traces, config)
    elif entry.runnable:
        run = run_pipeline(entry, config)
    else:
        raise CliError(f"{entry.patch_id}: no sources and no --traces directory")

    print(
        json.dumps(
            {
                "patch_id": run.patch_id,
                "label": run.verdict.label,
                "rule": run.verdict.rule,
                "a_p": run.verdict.a_pass,
                "a_f": run.verdict.a_fail,
                "notes": list(run.notes),
            }
        )
    )
    if run.verdict.rule == RULE_ERROR:
        return EXIT_ERROR
    return EXIT_CORRECT if run.verdict.label == LABEL_CORRECT else EXIT_INCORRECT


def cmd_evaluate(args) -> int:
    entries = _entries_for(args)
    config = load_config(args.config, no_gen=args.no_gen)
    report = evaluate(entries, config)
    if args.json:
        print(json.dumps(report.to_json(), indent=2))
    else:
        print(report.format_table())
    return EXIT_CORRECT


def _grid(raw: str, what: str) -> list[float]:
    try:
        values = [float(x) for x in raw.split(",") if x.strip()]
    except ValueError as exc:
        raise CliError(f"{what} must be comma-separated numbers: {raw!r}") from exc
    if not values:
        raise CliError(f"{what} is empty")
    return values


def cmd_sweep(args) -> int:
    entries = _entries_for(args)
    config = load_config(args.config, no_gen=args.no_gen)
    runs = [run_pipeline(e, config) for e in entries]
    rows = sweep(runs, _grid(args.k_p, "--k-p"), _grid(args.k_t, "--k-t"))
    if args.json:
        print(
            json.dumps(
                [
                    {
                        "k_p": r.k_p,
                        "k_t": r.k_t,
                        "incorrect_excluded": r.incorrect_excluded,
                        "incorrect_total": r.incorrect_total,
                        "correct_excluded": r.correct_excluded,
                        "correct_total": r.correct_total,
                    }
                    for r in rows
                ],
                indent=2,
            )
        )
    else:
        print(f"{'k_p':>6} {'k_t':>6} {'incorrect':>12} {'correct':>10}")
        for r in rows:
            print(
                f"{r.k_p:>6.2f} {r.k_t:>6.2f} "
                f"{f'{r.incorrect_excluded}/{r.incorrect_total}':>12} "
                f"{f'{r.correct_excluded}/{r.correct_total}':>10}"
            )
    return EXIT_CORRECT


def _full_spectra(entry, tests, version, fuel):
    program = parse(
        entry.patch.buggy_source if version == "buggy" else entry.patch.patched_source
    )
    spectra = {}
    for t in tests:
        if not isinstance(t.invocation, TestInvocation):
            raise CliError(f"{t.test_id}: manifest test has no invocation to run")
        result = run_traced(program, t.invocation, fuel=fuel)
        spectra[t.test_id] = extract_full_spectrum(
            result.events, test_id=t.test_id, version=version
        )
    return spectra


def cmd_baseline(args) -> int:
    entry, generated = _manifest(args.manifest)
    if not entry.runnable:
        raise CliError(f"{entry.patch_id}: baselines need runnable sources")
    config = load_config(args.config)
    out: dict = {"patch_id": entry.patch_id, "kind": args.kind}

    if args.kind == "syn":
        out["value"] = syntactic_distance(
            parse(entry.patch.buggy_source), parse(entry.patch.patched_source)
        )
    elif args.kind == "sem":
        originals = entry.originals
        buggy_full = _full_spectra(entry, originals, "buggy", config.fuel)
        patched_full = _full_spectra(entry, originals, "patched", config.fuel)
        buggy_ctx = _context_spectra_by_running(entry, originals, config.fuel)
        out["value"] = semantic_distance_led(
            originals,
            buggy_full,
            patched_full,
            buggy_ctx,
            entry.patch.alignment,
            config.distance,
        )
    else:  # crash
        tests = list(entry.originals) + [
            t for t in generated if isinstance(t.invocation, TestInvocation)
        ]
        buggy_full = _full_spectra(entry, tests, "buggy", config.fuel)
        patched_full = _full_spectra(entry, tests, "patched", config.fuel)
        out["value"] = crash_oracle(tests, buggy_full, patched_full)

    print(json.dumps(out))
    return EXIT_CORRECT


def cmd_distance(args) -> int:
    a = read_trace_file(args.trace_a)
    b = read_trace_file(args.trace_b)
    config = load_config(args.config)
    value = spectrum_distance(
        extract_full_spectrum(a.events, test_id=a.test_id or "a", version=a.version),
        extract_full_spectrum(b.events, test_id=b.test_id or "b", version=b.version),
        config.distance,
    )
    print(f"{value:.6f}")
    return EXIT_CORRECT


# Parser -----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="patchsim",
        description="Classify patch correctness from execution-trace similarity.",
    )
    sub = parser.add_subparsers(dest="verb", required=True)

    def with_config(p):
        p.add_argument("--config", help="JSON config file (k_p, k_t, seeds, caps)")
        return p

    p = sub.add_parser("run", help="run one test and write its trace file")
    p.add_argument("source", help="mini-language source file")
    p.add_argument("--entry", required=True, help="entry function name")
    p.add_argument("--args", default="[]", help="JSON array of arguments")
    p.add_argument("--test-id", required=True)
    p.add_argument("--version", choices=("buggy", "patched"), default="buggy")
    p.add_argument("--out", default=".", help="directory for the trace file")
    p.add_argument("--expect", help="JSON expected value oracle")
    p.add_argument("--completes", action="store_true", help="completion-only oracle")
    p.add_argument("--fuel", type=int, default=1_000_000)
    p.set_defaults(func=cmd_run)

    p = with_config(sub.add_parser("gen-tests", help="generate covering tests"))
    p.add_argument("manifest")
    p.add_argument("--out", default="-", help="output manifest path, - for stdout")
    p.set_defaults(func=cmd_gen_tests)

    p = with_config(
        sub.add_parser("classify-test", help="label a manifest's generated tests")
    )
    p.add_argument("manifest")
    p.add_argument("--traces", help="directory of buggy-version trace files")
    p.set_defaults(func=cmd_classify_test)

    p = with_config(sub.add_parser("classify-patch", help="classify one patch"))
    p.add_argument("manifest")
    p.add_argument("--traces", help="directory of trace files for the originals")
    p.add_argument("--no-gen", action="store_true", help="disable test generation")
    p.set_defaults(func=cmd_classify_patch)

    p = with_config(sub.add_parser("evaluate", help="evaluate a corpus"))
    p.add_argument("corpus", nargs="?", help="directory of manifest files")
    p.add_argument("--golden", action="store_true", help="use the bundled corpus")
    p.add_argument("--no-gen", action="store_true")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_evaluate)

    p = with_config(sub.add_parser("sweep", help="threshold sweep over a corpus"))
    p.add_argument("corpus", nargs="?")
    p.add_argument("--golden", action="store_true")
    p.add_argument("--k-p", default="0.05,0.1,0.15,0.25,0.3,0.4,0.5,0.6,0.8,1.0")
    p.add_argument("--k-t", default="0.4")
    p.add_argument("--no-gen", action="store_true")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_sweep)

    p = with_config(sub.add_parser("baseline", help="comparison classifiers"))
    p.add_argument("manifest")
    p.add_argument("--kind", choices=("syn", "sem", "crash"), required=True)
    p.set_defaults(func=cmd_baseline)

    p = with_config(sub.add_parser("distance", help="distance between two traces"))
    p.add_argument("trace_a")
    p.add_argument("trace_b")
    p.set_defaults(func=cmd_distance)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"patchsim: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except (EmptyCoveringSet, *COMPONENT_ERRORS) as exc:
        print(f"patchsim: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
