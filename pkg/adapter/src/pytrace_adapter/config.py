"""Adapter configuration: what to trace, where, and which tests exist.

One JSON file describes a classification job: two project roots (the buggy
checkout and the patched one, paired file-by-file through identical relative
paths), the package directories whose statements should be traced, and the
original tests with their user-assigned pass/fail labels. Labels are an
input, not something the adapter decides: on the buggy version the user
knows which tests expose the bug.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

RESULT_LABELS = ("passing", "failing")
VERSIONS = ("buggy", "patched")


class ConfigError(Exception):
    """Adapter configuration is missing, malformed, or inconsistent."""


@dataclass(frozen=True)
class TestCommand:
    """One original test: a module-level callable plus its given label."""

    __test__ = False

    test_id: str
    module: str
    function: str
    result: str

    def __post_init__(self):
        if self.result not in RESULT_LABELS:
            raise ConfigError(
                f"test {self.test_id!r} must be labeled passing or failing, "
                f"got {self.result!r}"
            )
        if not self.test_id or any(c.isspace() for c in self.test_id):
            raise ConfigError(f"test id {self.test_id!r} must be a single token")


@dataclass(frozen=True)
class AdapterConfig:
    package_paths: tuple[str, ...]
    output_dir: Path
    roots: dict[str, Path]  # version -> project root
    tests: tuple[TestCommand, ...]

    def root(self, version: str) -> Path:
        try:
            return self.roots[version]
        except KeyError as exc:
            raise ConfigError(f"no {version!r} root configured") from exc


def load_config(path: str | Path) -> AdapterConfig:
    path = Path(path)
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise ConfigError(f"{path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: not valid JSON: {exc}") from exc

    base = path.resolve().parent
    try:
        roots = {v: (base / r).resolve() for v, r in doc["roots"].items()}
        tests = tuple(
            TestCommand(t["test_id"], t["module"], t["function"], t["result"])
            for t in doc["tests"]
        )
        package_paths = tuple(doc["package_paths"])
    except (KeyError, TypeError) as exc:
        raise ConfigError(f"{path}: missing or malformed field: {exc}") from exc

    if not package_paths:
        raise ConfigError(f"{path}: package_paths is empty, nothing to trace")
    if not tests:
        raise ConfigError(f"{path}: no tests configured")
    ids = [t.test_id for t in tests]
    if len(set(ids)) != len(ids):
        raise ConfigError(f"{path}: duplicate test ids")
    unknown = set(roots) - set(VERSIONS)
    if unknown:
        raise ConfigError(f"{path}: unknown version keys {sorted(unknown)}")

    return AdapterConfig(
        package_paths=package_paths,
        output_dir=(base / doc.get("output_dir", "traces")).resolve(),
        roots=roots,
        tests=tests,
    )
