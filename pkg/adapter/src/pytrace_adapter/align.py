"""Line-diff alignment between two versions of a traced source tree.

The same (file, line) scheme that gives statements their ids gives the diff
its vocabulary: lines equal under a standard diff keep their identity across
versions, everything else stays version-private. A function whose span
touches any changed region counts as modified; a file present in only one
version marks all of its functions modified.
"""

from __future__ import annotations

import difflib
from dataclasses import dataclass
from pathlib import Path

from .ids import FileIds, IdMap, build_id_map


class AlignmentError(Exception):
    """The two versions cannot be related (or do not differ at all)."""


@dataclass(frozen=True)
class SourceAlignment:
    pairs: tuple[tuple[int, int], ...]  # (buggy id, patched id)
    buggy_max: int
    modified_methods: tuple[str, ...]


def _diff_lines(buggy_text: str, patched_text: str):
    """Equal-line pairs (1-based) plus changed spans on each side.

    A pure insertion has an empty span on the opposite side; it is kept as a
    zero-width marker so functions it lands inside still count as modified.
    """
    a = buggy_text.splitlines()
    b = patched_text.splitlines()
    sm = difflib.SequenceMatcher(None, a, b, autojunk=False)
    pairs = []
    changed_a = []
    changed_b = []
    for tag, a0, a1, b0, b1 in sm.get_opcodes():
        if tag == "equal":
            pairs.extend((a0 + k + 1, b0 + k + 1) for k in range(a1 - a0))
        else:
            changed_a.append((a0 + 1, a1))
            changed_b.append((b0 + 1, b1))
    return pairs, changed_a, changed_b


def _hit_functions(functions: dict[str, tuple[int, int]], changed) -> set[str]:
    hit = set()
    for name, (lo, hi) in functions.items():
        for c0, c1 in changed:
            if c0 > c1:  # zero-width insertion between lines c1 and c0
                if lo <= c1 and c0 <= hi:
                    hit.add(name)
            elif c0 <= hi and c1 >= lo:
                hit.add(name)
    return hit


def _file_ids(path: Path) -> FileIds:
    m = build_id_map(path.parent, (path.name,), "buggy")
    return m.files[path.name]


def align_sources(
    buggy_file: str | Path,
    patched_file: str | Path,
    buggy_ids: FileIds | None = None,
    patched_ids: FileIds | None = None,
) -> SourceAlignment:
    """Alignment for a single file pair.

    Without explicit id maps, each file is numbered on its own; inside a
    tree-level alignment the caller passes the slices of the global maps so
    ids stay tree-unique.
    """
    buggy_file = Path(buggy_file)
    patched_file = Path(patched_file)
    b = buggy_ids if buggy_ids is not None else _file_ids(buggy_file)
    p = patched_ids if patched_ids is not None else _file_ids(patched_file)

    line_pairs, changed_b, changed_p = _diff_lines(
        buggy_file.read_text(encoding="utf-8"), patched_file.read_text(encoding="utf-8")
    )
    pairs = []
    for lb, lp in line_pairs:
        ib = b.lines.get(lb)
        ip = p.lines.get(lp)
        if ib is not None and ip is not None:
            pairs.append((ib, ip))
    modified = _hit_functions(b.functions, changed_b) | _hit_functions(p.functions, changed_p)
    buggy_max = max(b.lines.values(), default=-1)
    return SourceAlignment(tuple(pairs), buggy_max, tuple(sorted(modified)))


def align_trees(
    buggy_root: str | Path,
    patched_root: str | Path,
    buggy_map: IdMap,
    patched_map: IdMap,
) -> SourceAlignment:
    """Alignment across every file the two id maps know about."""
    buggy_root = Path(buggy_root)
    patched_root = Path(patched_root)
    pairs: list[tuple[int, int]] = []
    modified: set[str] = set()
    for rel in sorted(set(buggy_map.files) | set(patched_map.files)):
        b = buggy_map.files.get(rel)
        p = patched_map.files.get(rel)
        if b is None or p is None:
            modified.update((b or p).functions)
            continue
        al = align_sources(buggy_root / rel, patched_root / rel, b, p)
        pairs.extend(al.pairs)
        modified.update(al.modified_methods)
    return SourceAlignment(tuple(pairs), buggy_map.max_id(), tuple(sorted(modified)))
