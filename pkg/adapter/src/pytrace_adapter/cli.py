"""Command-line front end: assign ids, trace tests, align versions, emit manifests.

The intended sequence for one patch is

    pytrace trace cfg.json --version buggy
    pytrace trace cfg.json --version patched
    pytrace manifest cfg.json --patch-id fix-1 --out fix-1.json

after which the primary toolchain takes over:

    patchsim classify-patch fix-1.json --traces traces/

Tracing runs one subprocess per test so runs cannot contaminate each other.
The classifier assumes deterministic tests; --check-determinism runs every
test twice and fails loudly on a byte difference instead of classifying
garbage later.
"""

from __future__ import annotations

import argparse
import json
import subprocess
import sys
from pathlib import Path

from .align import AlignmentError, align_trees
from .config import ConfigError, load_config
from .ids import build_id_map, save_id_map
from .manifest import build_manifest

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2


def cmd_ids(args) -> int:
    cfg = load_config(args.config)
    id_map = build_id_map(cfg.root(args.version), cfg.package_paths, args.version)
    cfg.output_dir.mkdir(parents=True, exist_ok=True)
    out = cfg.output_dir / f"ids.{args.version}.json"
    save_id_map(id_map, out)
    print(out)
    return EXIT_OK


def _run_once(config: str, test_id: str, version: str):
    return subprocess.run(
        [sys.executable, "-m", "pytrace_adapter.runner", config, test_id, version],
        capture_output=True,
        text=True,
    )


def cmd_trace(args) -> int:
    cfg = load_config(args.config)
    wanted = [t for t in cfg.tests if args.test in (None, t.test_id)]
    if not wanted:
        raise ConfigError(f"no test matches {args.test!r}")
    failures = 0
    for t in wanted:
        proc = _run_once(str(args.config), t.test_id, args.version)
        if proc.returncode != 0:
            # runner infrastructure failed; distinct from a failing assertion
            detail = proc.stderr.strip().splitlines()[-1] if proc.stderr.strip() else "runner failed"
            print(
                json.dumps(
                    {"test_id": t.test_id, "version": args.version, "outcome": "crashed", "error": detail}
                )
            )
            failures += 1
            continue
        status = json.loads(proc.stdout)
        if args.check_determinism:
            first = Path(status["trace"]).read_bytes()
            again = _run_once(str(args.config), t.test_id, args.version)
            if again.returncode != 0 or Path(status["trace"]).read_bytes() != first:
                status["error"] = "nondeterministic trace: two runs differ"
                failures += 1
        print(json.dumps(status))
    return EXIT_FAILURE if failures else EXIT_OK


def cmd_align(args) -> int:
    cfg = load_config(args.config)
    buggy_map = build_id_map(cfg.root("buggy"), cfg.package_paths, "buggy")
    patched_map = build_id_map(cfg.root("patched"), cfg.package_paths, "patched")
    al = align_trees(cfg.root("buggy"), cfg.root("patched"), buggy_map, patched_map)
    doc = {
        "pairs": [list(p) for p in al.pairs],
        "buggy_max": al.buggy_max,
        "modified_methods": list(al.modified_methods),
    }
    cfg.output_dir.mkdir(parents=True, exist_ok=True)
    out = cfg.output_dir / "alignment.json"
    out.write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")
    print(out)
    return EXIT_OK


def cmd_manifest(args) -> int:
    cfg = load_config(args.config)
    doc = build_manifest(cfg, args.patch_id, ground_truth=args.ground_truth, group=args.group)
    text = json.dumps(doc, indent=2) + "\n"
    if args.out and args.out != "-":
        Path(args.out).write_text(text, encoding="utf-8")
        print(args.out)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pytrace",
        description="statement-level tracing of Python test runs for patch classification",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ids", help="write the statement id map for one version")
    p.add_argument("config")
    p.add_argument("--version", choices=("buggy", "patched"), default="buggy")
    p.set_defaults(func=cmd_ids)

    p = sub.add_parser("trace", help="run labeled tests under the tracer")
    p.add_argument("config")
    p.add_argument("--version", choices=("buggy", "patched"), default="buggy")
    p.add_argument("--test", help="trace only this test id")
    p.add_argument("--check-determinism", action="store_true")
    p.set_defaults(func=cmd_trace)

    p = sub.add_parser("align", help="diff the two versions into an id alignment")
    p.add_argument("config")
    p.set_defaults(func=cmd_align)

    p = sub.add_parser("manifest", help="emit a trace-backed classification manifest")
    p.add_argument("config")
    p.add_argument("--patch-id", required=True)
    p.add_argument("--ground-truth", choices=("correct", "incorrect"))
    p.add_argument("--group")
    p.add_argument("--out", help="output path, - for stdout")
    p.set_defaults(func=cmd_manifest)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, AlignmentError, OSError) as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    raise SystemExit(main())
