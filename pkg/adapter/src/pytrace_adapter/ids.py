"""Stable statement identity for traced files.

Statement IDs are the coordinate system every downstream comparison runs in,
so they must be a pure function of the source tree: files are walked in
sorted relative-path order and each function-body statement line gets the
next integer. Two builds over the same tree always agree; the buggy and
patched trees get separate maps that only an alignment can relate.

Module-level statements are deliberately unmapped. They execute at import
time, before any test body runs, and would only add version-neutral noise.
"""

from __future__ import annotations

import ast
import json
from dataclasses import dataclass
from pathlib import Path

from .config import ConfigError


@dataclass(frozen=True)
class FileIds:
    lines: dict[int, int]  # source line -> statement id
    functions: dict[str, tuple[int, int]]  # name -> (first line, last line)


@dataclass(frozen=True)
class IdMap:
    version: str
    files: dict[str, FileIds]  # root-relative posix path

    def max_id(self) -> int:
        ids = [i for f in self.files.values() for i in f.lines.values()]
        return max(ids, default=-1)

    def line_ids(self, root: str | Path) -> dict[str, dict[int, int]]:
        """Keyed by absolute filename, the lookup shape the tracer wants."""
        root = Path(root).resolve()
        return {str(root / rel): dict(f.lines) for rel, f in self.files.items()}


def _visit(node: ast.AST, current: str | None, lines: set[int], functions: dict) -> None:
    for child in ast.iter_child_nodes(node):
        if isinstance(child, (ast.FunctionDef, ast.AsyncFunctionDef)):
            # the def itself runs as a statement of the enclosing function
            if current is not None:
                lines.add(child.lineno)
            functions[child.name] = (child.lineno, child.end_lineno or child.lineno)
            _visit(child, child.name, lines, functions)
        else:
            if isinstance(child, ast.stmt) and current is not None:
                lines.add(child.lineno)
            _visit(child, current, lines, functions)


def build_id_map(root: str | Path, package_paths, version: str) -> IdMap:
    root = Path(root).resolve()
    rels: set[str] = set()
    for pkg in package_paths:
        base = root / pkg
        if base.is_file():
            rels.add(base.relative_to(root).as_posix())
        elif base.is_dir():
            rels.update(p.relative_to(root).as_posix() for p in base.rglob("*.py"))
        else:
            raise ConfigError(f"package path {pkg!r} not found under {root}")

    files: dict[str, FileIds] = {}
    next_id = 1
    for rel in sorted(rels):
        try:
            tree = ast.parse((root / rel).read_text(encoding="utf-8"))
        except SyntaxError as exc:
            raise ConfigError(f"{rel}: cannot assign statement ids: {exc}") from exc
        lines: set[int] = set()
        functions: dict[str, tuple[int, int]] = {}
        _visit(tree, None, lines, functions)
        mapped = {}
        for ln in sorted(lines):
            mapped[ln] = next_id
            next_id += 1
        files[rel] = FileIds(mapped, functions)
    return IdMap(version, files)


def save_id_map(id_map: IdMap, path: str | Path) -> None:
    doc = {
        "version": id_map.version,
        "files": {
            rel: {
                "lines": {str(ln): sid for ln, sid in sorted(f.lines.items())},
                "functions": {n: list(span) for n, span in sorted(f.functions.items())},
            }
            for rel, f in sorted(id_map.files.items())
        },
    }
    Path(path).write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def load_id_map(path: str | Path) -> IdMap:
    doc = json.loads(Path(path).read_text(encoding="utf-8"))
    files = {
        rel: FileIds(
            lines={int(ln): sid for ln, sid in f["lines"].items()},
            functions={n: (span[0], span[1]) for n, span in f["functions"].items()},
        )
        for rel, f in doc["files"].items()
    }
    return IdMap(doc["version"], files)
