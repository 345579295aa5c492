"""
Why deleting functionality never looks like a fix
=================================================

The classic cheap trick of automated repair: a test fails inside some
method, so the "patch" simply stops calling that method. Every test now
passes, but the program lost a feature. This demo shows the execution-trace
signature of that trick on a chart-rendering example.
"""

from patchsim.golden import golden_corpus
from patchsim.pipeline import run_pipeline

by_id = {e.patch_id: e for e in golden_corpus()}
gutted = by_id["chart-skip-draw"]
real_fix = by_id["chart-fix"]

print("--- the gutted patch ---")
print(gutted.patch.patched_source)

for entry in (gutted, real_fix):
    run = run_pipeline(entry)
    v = run.verdict
    print(f"{entry.patch_id} (truth: {entry.ground_truth})")
    for rec in run.originals:
        print(f"  {rec.test_id:<20} {rec.result:<8} distance {rec.distance:.3f}")
    print(f"  -> A_p={v.a_pass:.3f}  A_f={v.a_fail:.3f}  verdict: {v.label} ({v.rule})")
    print()

print("Skipping the draw method rewrites the passing tests' traces almost")
print("completely (distance near 1.0), so A_p blows through the 0.25 cap.")
print("The real fix leaves passing traces untouched and only moves the")
print("failing one, which is exactly the shape a correct patch should have.")
