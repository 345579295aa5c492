"""
What test generation buys
=========================

Some incorrect patches survive the original test suite's scrutiny: no
original passing test ever drives an input into the broken region. Random
generation over the original tests' own argument values fills that gap.
This demo runs the bundled corpus twice, with and without generation, and
lists exactly which verdicts flip.
"""

from patchsim.golden import golden_corpus
from patchsim.pipeline import PipelineConfig, evaluate

entries = golden_corpus()

full = evaluate(entries)
bare = evaluate(entries, PipelineConfig(generation=None))

print(f"with generation:    {full.incorrect_excluded}/{full.incorrect_total} incorrect excluded, "
      f"{full.correct_excluded} correct excluded")
print(f"without generation: {bare.incorrect_excluded}/{bare.incorrect_total} incorrect excluded, "
      f"{bare.correct_excluded} correct excluded")
print()

flipped = []
for with_gen, without in zip(full.runs, bare.runs):
    if with_gen.verdict.label != without.verdict.label:
        flipped.append((with_gen.patch_id, without.verdict.label, with_gen.verdict.label))

print("verdicts that depend on generated tests:")
for patch_id, before, after in flipped:
    print(f"  {patch_id:<24} {before} -> {after}")
print()
print("Each of these patches passes its original suite by luck of coverage;")
print("a generated input reaches the patched region, gets labeled passing by")
print("similarity to original passing runs, and then exposes the behavior")
print("change the original tests never saw.")
