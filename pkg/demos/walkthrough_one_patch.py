"""
Classifying a single patch, step by step
========================================

Loads one bundled entry (a real off-by-one fix in a withdrawal routine),
runs the full pipeline on it, and prints every intermediate number the
final verdict is built from.
"""

from patchsim.golden import golden_corpus
from patchsim.pipeline import run_pipeline

entry = next(e for e in golden_corpus() if e.patch_id == "bank-fix")

print("patch:", entry.patch_id, f"(ground truth: {entry.ground_truth})")
print("modified methods:", ", ".join(sorted(entry.patch.modified_methods)))
print()
print("--- buggy source ---")
print(entry.patch.buggy_source)

# the pipeline: generate extra tests, label them by execution similarity,
# then compare each test's buggy-vs-patched trace
run = run_pipeline(entry)

print("--- per-test behavior change (original tests) ---")
for rec in run.originals:
    print(f"  {rec.test_id:<18} {rec.result:<8} distance {rec.distance:.3f}")

if run.generated:
    print("--- generated tests (labeled by nearest original) ---")
    for rec in run.generated:
        d = "dropped" if rec.label == "discarded" else f"distance {rec.distance:.3f}"
        print(f"  {rec.test_id:<18} {rec.label:<10} {d}")

v = run.verdict
print()
print(f"A_p (max over passing) = {v.a_pass:.3f}")
print(f"A_f (mean over failing) = {v.a_fail:.3f}")
print(f"verdict: {v.label} (rule: {v.rule})")
print()
print("A correct patch barely moves passing tests while visibly changing")
print("the failing ones; this fix sits well inside both margins.")
