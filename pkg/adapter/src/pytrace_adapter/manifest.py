"""Emit a classification manifest in the layout the primary toolchain loads.

A trace-backed manifest carries no program sources: just the labeled
original tests, the id alignment between versions, and the modified-method
list. Everything else the classifier needs arrives as trace files next to
it.
"""

from __future__ import annotations

from .align import AlignmentError, align_trees
from .config import AdapterConfig
from .ids import build_id_map


def build_manifest(
    cfg: AdapterConfig,
    patch_id: str,
    *,
    ground_truth: str | None = None,
    group: str | None = None,
) -> dict:
    buggy_map = build_id_map(cfg.root("buggy"), cfg.package_paths, "buggy")
    patched_map = build_id_map(cfg.root("patched"), cfg.package_paths, "patched")
    alignment = align_trees(cfg.root("buggy"), cfg.root("patched"), buggy_map, patched_map)
    if not alignment.modified_methods:
        raise AlignmentError(
            "the two versions are identical under the diff; nothing to classify"
        )
    doc: dict = {
        "patch_id": patch_id,
        "modified_methods": list(alignment.modified_methods),
        "alignment": {
            "pairs": [list(p) for p in alignment.pairs],
            "buggy_max": alignment.buggy_max,
        },
        "original_tests": [
            {"test_id": t.test_id, "result": t.result} for t in cfg.tests
        ],
    }
    if ground_truth:
        doc["ground_truth"] = ground_truth
    if group:
        doc["group"] = group
    return doc
