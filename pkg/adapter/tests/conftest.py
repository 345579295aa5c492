import json
import shutil
import textwrap

import pytest

CHART_BUGGY = """\
def render(values):
    ticks = []
    i = 0
    while i < len(values):
        ticks.append(clip(values[i]))
        i = i + 1
    return len(ticks)


def clip(v):
    if v > 100:
        raise OverflowError("tick out of range")
    return v
"""

# deletes the tick computation wholesale; all original tests still pass
CHART_GUTTED = """\
def render(values):
    return len(values)


def clip(v):
    if v > 100:
        raise OverflowError("tick out of range")
    return v
"""

CHART_CLAMPED = CHART_BUGGY.replace(
    '        raise OverflowError("tick out of range")', "        return 100"
)

CHECKS = """\
from chartlib.chart import render


def check_small():
    assert render([1, 2, 3]) == 3


def check_mixed():
    assert render([10, 20]) == 2


def check_big():
    assert render([10, 500]) == 2
"""


def write_tree(root, chart_source):
    pkg = root / "chartlib"
    pkg.mkdir(parents=True)
    (pkg / "__init__.py").write_text("")
    (pkg / "chart.py").write_text(chart_source)
    (root / "tests_chart.py").write_text(CHECKS)


@pytest.fixture()
def toy_job(tmp_path):
    """Buggy chart project plus two patches: one gutted, one real fix."""
    write_tree(tmp_path / "buggy", CHART_BUGGY)
    write_tree(tmp_path / "patched-bad", CHART_GUTTED)
    write_tree(tmp_path / "patched-good", CHART_CLAMPED)

    def config(patched: str, out: str) -> str:
        doc = {
            "package_paths": ["chartlib"],
            "output_dir": out,
            "roots": {"buggy": "buggy", "patched": patched},
            "tests": [
                {"test_id": "t-small", "module": "tests_chart", "function": "check_small", "result": "passing"},
                {"test_id": "t-mixed", "module": "tests_chart", "function": "check_mixed", "result": "passing"},
                {"test_id": "t-big", "module": "tests_chart", "function": "check_big", "result": "failing"},
            ],
        }
        path = tmp_path / f"cfg-{patched}.json"
        path.write_text(json.dumps(doc, indent=2))
        return str(path)

    return tmp_path, config


@pytest.fixture()
def module_dir(tmp_path):
    """A standalone traced module plus an id map over just that tree."""

    def make(source: str, name: str = "mod"):
        root = tmp_path / "proj"
        pkg = root / "pkg"
        pkg.mkdir(parents=True, exist_ok=True)
        (pkg / "__init__.py").write_text("")
        (pkg / f"{name}.py").write_text(textwrap.dedent(source))
        return root

    yield make
    shutil.rmtree(tmp_path / "proj", ignore_errors=True)
