"""Subprocess entry point: trace one labeled test in one program version.

Each invocation is an isolated interpreter, so traced imports, module-level
state, and the id map of one version never leak into another run. The parent
process (the `pytrace trace` verb) starts one of these per test command.

Import of the test module happens before the tracer is installed: import-time
execution of the target package is setup, not behavior under test.
"""

from __future__ import annotations

import importlib
import json
import sys

from .config import ConfigError, load_config
from .ids import build_id_map
from .tracer import run_traced, write_trace


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    if len(argv) != 3:
        print("usage: python -m pytrace_adapter.runner CONFIG TEST_ID VERSION", file=sys.stderr)
        return 2
    cfg_path, test_id, version = argv
    try:
        cfg = load_config(cfg_path)
    except ConfigError as exc:
        print(str(exc), file=sys.stderr)
        return 2
    test = next((t for t in cfg.tests if t.test_id == test_id), None)
    if test is None:
        print(f"unknown test id {test_id!r}", file=sys.stderr)
        return 2

    root = cfg.root(version)
    id_map = build_id_map(root, cfg.package_paths, version)
    sys.path.insert(0, str(root))
    module = importlib.import_module(test.module)
    fn = getattr(module, test.function)

    record = run_traced(fn, id_map.line_ids(root))

    cfg.output_dir.mkdir(parents=True, exist_ok=True)
    out = cfg.output_dir / f"{test.test_id}.{version}.trace"
    write_trace(record.events, out, test_id=test.test_id, version=version, crashed=record.crashed)
    print(
        json.dumps(
            {
                "test_id": test.test_id,
                "version": version,
                "outcome": record.outcome,
                "trace": str(out),
            }
        )
    )
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
