"""Corpus entries and their manifest files.

A corpus entry is one classification problem: a patch (buggy and patched
sources plus derived alignment), the original tests with their results, and
an optional ground-truth label used only by the evaluation harness. The
manifest is one JSON document per entry; generated tests may be appended to
it by the generation step.

Entries can also be trace-backed: no runnable sources, just modified methods
and an alignment, with spectra supplied externally as trace files. That is
how traces collected from real programs enter the toolchain.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Iterable

from .generate import GenConfig, ValuePools
from .minilang.align import build_patch_spec
from .minilang.interp import Oracle, TestInvocation, check_value, run_traced
from .trace import (
    ORIGIN_GENERATED,
    ORIGIN_ORIGINAL,
    RESULT_FAILING,
    RESULT_PASSING,
    Alignment,
    PatchSpec,
    TestCase,
)

GROUND_TRUTH_LABELS = ("correct", "incorrect")


class ManifestError(Exception):
    """Manifest file is malformed or violates corpus invariants."""


@dataclass(frozen=True)
class CorpusEntry:
    patch_id: str
    patch: PatchSpec
    originals: tuple[TestCase, ...]
    ground_truth: str | None = None  # evaluation only, never shown to classifiers
    group: str = ""
    gen: GenConfig | None = None  # generation recipe; None defers to harness default

    def __post_init__(self):
        if self.ground_truth is not None and self.ground_truth not in GROUND_TRUTH_LABELS:
            raise ValueError(f"bad ground truth {self.ground_truth!r}")
        results = {t.result for t in self.originals}
        if not results <= {RESULT_PASSING, RESULT_FAILING}:
            raise ValueError("original tests must be labeled passing or failing")
        if RESULT_FAILING not in results:
            raise ValueError("an entry needs at least one failing original test")
        ids = [t.test_id for t in self.originals]
        if len(set(ids)) != len(ids):
            raise ValueError("duplicate original test ids")

    @property
    def runnable(self) -> bool:
        """True when the entry carries sources the built-in runtime can execute."""
        return bool(self.patch.buggy_source)


def make_entry(
    patch_id: str,
    buggy_source: str,
    patched_source: str,
    originals: Iterable[TestCase],
    ground_truth: str | None = None,
    group: str = "",
    gen: GenConfig | None = None,
) -> CorpusEntry:
    return CorpusEntry(
        patch_id=patch_id,
        patch=build_patch_spec(buggy_source, patched_source),
        originals=tuple(originals),
        ground_truth=ground_truth,
        group=group,
        gen=gen,
    )


def original_test(test_id: str, result: str, entry: str, args: tuple, oracle: Oracle) -> TestCase:
    return TestCase(test_id, ORIGIN_ORIGINAL, result, TestInvocation(entry, args, oracle))


# Manifest (de)serialization -------------------------------------------------


def _oracle_to_json(o: Oracle | None):
    if o is None:
        return None
    if o.kind == "value":
        return {"kind": "value", "value": o.value}
    return {"kind": "completes"}


def _oracle_from_json(data) -> Oracle | None:
    if data is None:
        return None
    if data.get("kind") == "value":
        return Oracle("value", _from_json_value(data["value"]))
    if data.get("kind") == "completes":
        return Oracle("completes")
    raise ManifestError(f"bad oracle {data!r}")


def _from_json_value(v):
    # JSON arrays come back as lists, which is already the runtime shape.
    if isinstance(v, list):
        return [_from_json_value(x) for x in v]
    if isinstance(v, bool) or isinstance(v, int) or isinstance(v, str):
        return v
    raise ManifestError(f"{v!r} is not a mini-language value")


def _test_to_json(t: TestCase) -> dict:
    out: dict = {"test_id": t.test_id, "result": t.result}
    inv = t.invocation
    if isinstance(inv, TestInvocation):
        out["entry"] = inv.entry
        out["args"] = list(inv.args)
        out["oracle"] = _oracle_to_json(inv.expected)
    return out


def _test_from_json(data: dict, origin: str) -> TestCase:
    try:
        test_id = data["test_id"]
    except KeyError as exc:
        raise ManifestError("test record without test_id") from exc
    invocation = None
    if "entry" in data:
        args = tuple(_from_json_value(a) for a in data.get("args", []))
        for a in args:
            check_value(a, f"argument of {test_id}")
        invocation = TestInvocation(data["entry"], args, _oracle_from_json(data.get("oracle")))
    result = data.get("result", "unknown")
    return TestCase(test_id, origin, result, invocation)


def _gen_to_json(cfg: GenConfig | None):
    if cfg is None:
        return None
    return {
        "seed": cfg.seed,
        "budget": cfg.budget,
        "max_selected": cfg.max_selected,
        "gen_fuel": cfg.gen_fuel,
        "entries": list(cfg.entries) if cfg.entries is not None else None,
        "pools": {
            "ints": list(cfg.pools.ints),
            "bools": list(cfg.pools.bools),
            "strings": list(cfg.pools.strings),
            "arrays": [_nested_list(a) for a in cfg.pools.arrays],
        },
    }


def _nested_list(v):
    return [_nested_list(x) for x in v] if isinstance(v, tuple) else v


def _nested_tuple(v):
    return tuple(_nested_tuple(x) for x in v) if isinstance(v, list) else v


def _gen_from_json(data) -> GenConfig | None:
    if data is None:
        return None
    pools_doc = data.get("pools", {})
    pools = ValuePools(
        ints=tuple(pools_doc.get("ints", ())),
        bools=tuple(pools_doc.get("bools", ())),
        strings=tuple(pools_doc.get("strings", ())),
        arrays=tuple(_nested_tuple(a) for a in pools_doc.get("arrays", ())),
    )
    entries = data.get("entries")
    return GenConfig(
        seed=data.get("seed", 0),
        budget=data.get("budget", 200),
        max_selected=data.get("max_selected", 20),
        pools=pools,
        entries=tuple(entries) if entries is not None else None,
        gen_fuel=data.get("gen_fuel", 20_000),
    )


def entry_to_json(entry: CorpusEntry, generated: Iterable[TestCase] = ()) -> dict:
    doc: dict = {
        "patch_id": entry.patch_id,
        "buggy_source": entry.patch.buggy_source,
        "patched_source": entry.patch.patched_source,
        "modified_methods": sorted(entry.patch.modified_methods),
        "original_tests": [_test_to_json(t) for t in entry.originals],
    }
    if not entry.runnable:
        doc["alignment"] = {
            "pairs": [list(p) for p in entry.patch.alignment.pairs],
            "buggy_max": entry.patch.alignment.buggy_max,
        }
    if entry.ground_truth is not None:
        doc["ground_truth"] = entry.ground_truth
    if entry.group:
        doc["group"] = entry.group
    if entry.gen is not None:
        doc["generation"] = _gen_to_json(entry.gen)
    gen = [_test_to_json(t) for t in generated]
    if gen:
        doc["generated_tests"] = gen
    return doc


def entry_from_json(doc: dict) -> tuple[CorpusEntry, tuple[TestCase, ...]]:
    try:
        patch_id = doc["patch_id"]
    except KeyError as exc:
        raise ManifestError("manifest without patch_id") from exc
    buggy = doc.get("buggy_source", "")
    patched = doc.get("patched_source", "")
    if buggy:
        patch = build_patch_spec(buggy, patched)
        declared = doc.get("modified_methods")
        if declared and frozenset(declared) != patch.modified_methods:
            raise ManifestError(
                f"{patch_id}: declared modified methods {sorted(declared)} "
                f"do not match derived {sorted(patch.modified_methods)}"
            )
    else:
        # Trace-backed entry: alignment and modified methods must be explicit.
        try:
            align_doc = doc["alignment"]
            patch = PatchSpec(
                buggy_source="",
                patched_source="",
                modified_methods=frozenset(doc["modified_methods"]),
                alignment=Alignment(
                    pairs=tuple((int(b), int(p)) for b, p in align_doc["pairs"]),
                    buggy_max=int(align_doc["buggy_max"]),
                ),
            )
        except KeyError as exc:
            raise ManifestError(
                f"{patch_id}: trace-backed manifest needs modified_methods and alignment"
            ) from exc
    originals = tuple(
        _test_from_json(t, ORIGIN_ORIGINAL) for t in doc.get("original_tests", [])
    )
    generated = tuple(
        _test_from_json(t, ORIGIN_GENERATED) for t in doc.get("generated_tests", [])
    )
    try:
        entry = CorpusEntry(
            patch_id=patch_id,
            patch=patch,
            originals=originals,
            ground_truth=doc.get("ground_truth"),
            group=doc.get("group", ""),
            gen=_gen_from_json(doc.get("generation")),
        )
    except ValueError as exc:
        raise ManifestError(f"{patch_id}: {exc}") from exc
    return entry, generated


def save_manifest(entry: CorpusEntry, path: str | os.PathLike, generated=()) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(entry_to_json(entry, generated), fh, indent=2)
        fh.write("\n")


def load_manifest(path: str | os.PathLike) -> tuple[CorpusEntry, tuple[TestCase, ...]]:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ManifestError(f"{path}: not valid JSON: {exc}") from exc
    return entry_from_json(doc)


def load_corpus(directory: str | os.PathLike) -> list[CorpusEntry]:
    """All manifests in a directory, ordered by patch id."""
    entries = []
    for p in sorted(Path(directory).glob("*.json")):
        entry, _ = load_manifest(p)
        entries.append(entry)
    if not entries:
        raise ManifestError(f"no manifests found in {directory}")
    return sorted(entries, key=lambda e: e.patch_id)


def save_corpus(entries: Iterable[CorpusEntry], directory: str | os.PathLike) -> None:
    out = Path(directory)
    out.mkdir(parents=True, exist_ok=True)
    for e in entries:
        save_manifest(e, out / f"{e.patch_id}.json")


# Construction-time validation ----------------------------------------------


def validate_entry(entry: CorpusEntry, fuel: int = 1_000_000) -> list[str]:
    """Check a runnable entry's operational invariants; returns problem list.

    Original labels must match actual buggy-version outcomes, and the patch
    must be plausible: every original test passes on the patched version.
    """
    if not entry.runnable:
        return [f"{entry.patch_id}: not runnable, cannot validate"]
    from .minilang.syntax import parse

    problems = []
    buggy = parse(entry.patch.buggy_source)
    patched = parse(entry.patch.patched_source)
    for t in entry.originals:
        if not isinstance(t.invocation, TestInvocation):
            problems.append(f"{t.test_id}: no invocation")
            continue
        if t.invocation.expected is None:
            problems.append(f"{t.test_id}: original test without an oracle")
        before = run_traced(buggy, t.invocation, fuel=fuel)
        expected = RESULT_PASSING if before.outcome == "passed" else RESULT_FAILING
        if t.result != expected:
            problems.append(
                f"{t.test_id}: labeled {t.result} but buggy outcome is {before.outcome}"
            )
        after = run_traced(patched, t.invocation, fuel=fuel)
        if after.outcome != "passed":
            problems.append(
                f"{t.test_id}: patched version {after.outcome}; patch is not plausible"
            )
    return problems


def relabel_from_runs(entry: CorpusEntry, fuel: int = 1_000_000) -> CorpusEntry:
    """Entry with original-test labels rederived by running the buggy version."""
    from .minilang.syntax import parse

    buggy = parse(entry.patch.buggy_source)
    relabeled = []
    for t in entry.originals:
        out = run_traced(buggy, t.invocation, fuel=fuel)
        result = RESULT_PASSING if out.outcome == "passed" else RESULT_FAILING
        relabeled.append(t.with_result(result))
    return replace(entry, originals=tuple(relabeled))
