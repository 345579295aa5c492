"""
Why not just measure the patch itself?
======================================

Two cheaper classifiers are bundled for comparison: syntactic distance
(tree edits between the two sources) and a crash oracle (a test that crashes
only on the patched version means incorrect). This demo prints both next to
the mean trace change and the pipeline verdict for every bundled patch, so
their failure modes are visible in one table.
"""

from patchsim.baselines import crash_oracle, syntactic_distance
from patchsim.golden import golden_corpus
from patchsim.minilang import parse, run_traced
from patchsim.pipeline import run_pipeline
from patchsim.trace import extract_full_spectrum


def full_spectra(source, tests):
    program = parse(source)
    return {
        t.test_id: extract_full_spectrum(run_traced(program, t.invocation).events)
        for t in tests
    }


print(f"{'patch':<24} {'truth':<10} {'syn':>4} {'sem':>6} {'crash':>9}  pipeline")
for entry in golden_corpus():
    syn = syntactic_distance(
        parse(entry.patch.buggy_source), parse(entry.patch.patched_source)
    )

    run = run_pipeline(entry)
    sem = sum(r.distance for r in run.originals) / len(run.originals)

    crash = crash_oracle(
        entry.originals,
        full_spectra(entry.patch.buggy_source, entry.originals),
        full_spectra(entry.patch.patched_source, entry.originals),
    )

    print(f"{entry.patch_id:<24} {entry.ground_truth:<10} {syn:>4} {sem:>6.3f} "
          f"{crash:>9}  {run.verdict.label}")

print()
print("Patterns to notice: small syntactic edits can be badly wrong (a")
print("flipped guard is a one-token change), large ones can be fine (a")
print("faithful rewrite), so no syn threshold separates the classes. The")
print("crash oracle never fires here because plausible patches already pass")
print("every original test. Mean trace change points the right way on")
print("average, but only the passing/failing split makes it decisive.")
