"""Whole-job flows: trace a real project, hand the output to the classifier."""

import json
import subprocess
import sys

from patchsim.trace import read_trace_file

TEST_IDS = ("t-small", "t-mixed", "t-big")


def pytrace(*argv):
    return subprocess.run(
        [sys.executable, "-m", "pytrace_adapter.cli", *argv],
        capture_output=True,
        text=True,
    )


def patchsim_cli(*argv):
    return subprocess.run(
        [sys.executable, "-m", "patchsim.cli", *argv],
        capture_output=True,
        text=True,
    )


def trace_both_versions(config):
    statuses = {}
    for version in ("buggy", "patched"):
        proc = pytrace("trace", config, "--version", version)
        assert proc.returncode == 0, proc.stderr
        for line in proc.stdout.splitlines():
            doc = json.loads(line)
            statuses[(doc["test_id"], version)] = doc
    return statuses


class TestToyProjectClassification:
    def test_gutted_patch_is_classified_incorrect(self, toy_job, tmp_path):
        root, config = toy_job
        cfg = config("patched-bad", "traces-bad")
        statuses = trace_both_versions(cfg)

        # the planted bug crashes only the failing test, only on buggy
        assert statuses[("t-big", "buggy")]["outcome"] == "crashed"
        assert statuses[("t-big", "patched")]["outcome"] == "passed"
        assert all(
            statuses[(t, v)]["outcome"] == "passed"
            for t in ("t-small", "t-mixed")
            for v in ("buggy", "patched")
        )

        manifest = root / "chart-gut.json"
        proc = pytrace(
            "manifest", cfg, "--patch-id", "chart-gut",
            "--ground-truth", "incorrect", "--out", str(manifest),
        )
        assert proc.returncode == 0, proc.stderr

        result = patchsim_cli(
            "classify-patch", str(manifest), "--traces", str(root / "traces-bad")
        )
        assert result.returncode == 1
        verdict = json.loads(result.stdout)
        assert verdict["label"] == "incorrect"
        assert verdict["rule"] == "threshold-exceeded"
        assert verdict["a_p"] == 1.0

    def test_real_fix_is_classified_correct(self, toy_job, tmp_path):
        root, config = toy_job
        cfg = config("patched-good", "traces-good")
        trace_both_versions(cfg)
        manifest = root / "chart-clamp.json"
        pytrace(
            "manifest", cfg, "--patch-id", "chart-clamp",
            "--ground-truth", "correct", "--out", str(manifest),
        )
        result = patchsim_cli(
            "classify-patch", str(manifest), "--traces", str(root / "traces-good")
        )
        assert result.returncode == 0
        verdict = json.loads(result.stdout)
        assert verdict["label"] == "correct"
        assert verdict["rule"] == "ok"
        assert verdict["a_p"] == 0.0
        assert verdict["a_f"] > 0.0

    def test_every_emitted_trace_parses_with_the_primary_reader(self, toy_job):
        root, config = toy_job
        cfg = config("patched-bad", "traces-bad")
        trace_both_versions(cfg)
        for test_id in TEST_IDS:
            for version in ("buggy", "patched"):
                tf = read_trace_file(root / "traces-bad" / f"{test_id}.{version}.trace")
                assert tf.test_id == test_id
                assert tf.version == version
                assert tf.events[-1].kind == "END"

    def test_determinism_check_passes_on_the_toy_project(self, toy_job):
        _, config = toy_job
        cfg = config("patched-good", "traces-good")
        proc = pytrace("trace", cfg, "--version", "buggy", "--check-determinism")
        assert proc.returncode == 0, proc.stdout + proc.stderr


class TestOperationalEdges:
    def test_ids_verb_writes_a_loadable_map(self, toy_job):
        from pytrace_adapter.ids import load_id_map

        root, config = toy_job
        cfg = config("patched-bad", "traces-bad")
        proc = pytrace("ids", cfg, "--version", "buggy")
        assert proc.returncode == 0
        id_map = load_id_map(proc.stdout.strip())
        assert id_map.version == "buggy"
        assert "chartlib/chart.py" in id_map.files

    def test_align_verb_reports_the_modified_method(self, toy_job):
        root, config = toy_job
        cfg = config("patched-bad", "traces-bad")
        proc = pytrace("align", cfg)
        assert proc.returncode == 0
        doc = json.loads((root / "traces-bad" / "alignment.json").read_text())
        assert doc["modified_methods"] == ["render"]
        assert doc["buggy_max"] == 9

    def test_broken_test_module_reports_crashed_and_fails(self, toy_job):
        root, config = toy_job
        cfg_path = config("patched-bad", "traces-bad")
        doc = json.loads(open(cfg_path).read())
        doc["tests"][0]["module"] = "no_such_module"
        open(cfg_path, "w").write(json.dumps(doc))
        proc = pytrace("trace", cfg_path, "--version", "buggy")
        assert proc.returncode == 1
        records = [json.loads(l) for l in proc.stdout.splitlines()]
        assert records[0]["outcome"] == "crashed"
        assert "error" in records[0]

    def test_identical_versions_cannot_be_classified(self, toy_job):
        root, config = toy_job
        cfg_path = config("patched-bad", "traces-bad")
        doc = json.loads(open(cfg_path).read())
        doc["roots"]["patched"] = "buggy"
        open(cfg_path, "w").write(json.dumps(doc))
        proc = pytrace("manifest", cfg_path, "--patch-id", "noop")
        assert proc.returncode == 2
        assert "identical" in proc.stderr

    def test_unlabeled_test_is_rejected_up_front(self, toy_job):
        root, config = toy_job
        cfg_path = config("patched-bad", "traces-bad")
        doc = json.loads(open(cfg_path).read())
        doc["tests"][0]["result"] = "flaky"
        open(cfg_path, "w").write(json.dumps(doc))
        proc = pytrace("trace", cfg_path, "--version", "buggy")
        assert proc.returncode == 2
        assert "labeled" in proc.stderr
