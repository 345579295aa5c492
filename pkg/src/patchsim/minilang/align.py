"""Statement-ID alignment between a buggy and a patched program version.

Alignment is line-based: source lines are matched with a standard diff after
whitespace stripping, and statements anchored on matched lines are paired by
their in-line position. Aligned statements are therefore textually identical
modulo leading/trailing whitespace. Everything else (including statements
whose anchor line gained or lost a comment) counts as changed.
"""

from __future__ import annotations

import difflib

from ..trace import Alignment, PatchSpec
from .syntax import Program, parse


def _statements_by_line(p: Program) -> dict[int, list[int]]:
    by_line: dict[int, list[int]] = {}
    # IDs are dense in source order, so sorting by ID orders within a line too.
    for sid, line in sorted(p.statement_lines().items()):
        by_line.setdefault(line, []).append(sid)
    return by_line


def align_versions(buggy: Program, patched: Program) -> Alignment:
    """Partial bijection over statements unchanged between the versions."""
    b_lines = [ln.strip() for ln in buggy.source.splitlines()]
    p_lines = [ln.strip() for ln in patched.source.splitlines()]
    b_by_line = _statements_by_line(buggy)
    p_by_line = _statements_by_line(patched)
    matcher = difflib.SequenceMatcher(None, b_lines, p_lines, autojunk=False)
    pairs: list[tuple[int, int]] = []
    for block in matcher.get_matching_blocks():
        for k in range(block.size):
            b_stmts = b_by_line.get(block.a + k + 1, [])
            p_stmts = p_by_line.get(block.b + k + 1, [])
            pairs.extend(zip(b_stmts, p_stmts))
    return Alignment(tuple(pairs), buggy_max=buggy.n_statements - 1)


def modified_methods(
    buggy: Program, patched: Program, alignment: Alignment | None = None
) -> frozenset[str]:
    """Functions that differ between versions.

    A function is modified if it exists in only one version, its signature
    changed, or it contains an unaligned statement on either side.
    """
    if alignment is None:
        alignment = align_versions(buggy, patched)
    b_fns = {f.name: f for f in buggy.functions}
    p_fns = {f.name: f for f in patched.functions}
    modified = set(b_fns.keys() ^ p_fns.keys())
    for name in b_fns.keys() & p_fns.keys():
        if b_fns[name].params != p_fns[name].params:
            modified.add(name)

    aligned_b = {b for b, _ in alignment.pairs}
    aligned_p = {p for _, p in alignment.pairs}
    b_owner = buggy.statement_owners()
    p_owner = patched.statement_owners()
    modified.update(owner for sid, owner in b_owner.items() if sid not in aligned_b)
    modified.update(owner for sid, owner in p_owner.items() if sid not in aligned_p)
    return frozenset(modified)


def build_patch_spec(buggy_source: str, patched_source: str) -> PatchSpec:
    """Parse both versions and derive the alignment and modified-method set."""
    buggy = parse(buggy_source)
    patched = parse(patched_source)
    alignment = align_versions(buggy, patched)
    return PatchSpec(
        buggy_source=buggy_source,
        patched_source=patched_source,
        modified_methods=modified_methods(buggy, patched, alignment),
        alignment=alignment,
    )
