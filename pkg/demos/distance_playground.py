"""
Feeling out the trace distance
==============================

The classifiers never look at source code; everything rides on one number,
the normalized longest-common-subsequence distance between two statement-ID
sequences. This script pokes at the raw formula, then at the two
preprocessing knobs (run collapse and the length cap) that make it cheap
enough to run thousands of times.
"""

from patchsim.distance import DistanceConfig, distance, lcs_length, spectrum_distance

a = [1, 2, 3, 4, 5]
b = [1, 3, 5]
print(f"a = {a}")
print(f"b = {b}")
print(f"lcs_length(a, b) = {lcs_length(a, b)}")
print(f"distance(a, b)   = {distance(a, b)}")
print()
print(f"distance(a, a) = {distance(a, a)}")
print(f"distance(b, a) = {distance(b, a)} (subsequence, but shorter: 1 - 3/5)")
print()

# A loop that re-emits one statement ID with nothing in between produces a
# run, and runs carry iteration counts the classifier should not care about.
spin_short = [3, 4] + [7] * 5 + [9]
spin_long = [3, 4] + [7] * 400 + [9]
raw = DistanceConfig(collapse_runs=False)
print("same spin loop, 5 vs 400 repeats of one statement:")
print(f"  raw distance     = {spectrum_distance(spin_short, spin_long, raw):.4f}")
print(f"  default distance = {spectrum_distance(spin_short, spin_long):.4f}")
print()

# Alternating IDs never collapse: a two-statement loop body keeps its full
# length, so iteration-count changes there still register.
loop_a = [3] + [20, 21] * 50 + [9]
loop_b = [3] + [20, 21] * 49 + [20, 21, 22] + [9]
print("one extra statement appended to a 50-iteration two-statement loop:")
print(f"  raw distance     = {spectrum_distance(loop_a, loop_b, raw):.4f}")
print(f"  default distance = {spectrum_distance(loop_a, loop_b):.4f}")
print()
print("Collapse only merges immediate repeats of a single ID, so the 20,21")
print("alternation survives intact; only degenerate self-repeats are folded.")
print()

huge = list(range(50)) * 100
capped = DistanceConfig(cap=100)
print(f"5000-ID identical traces under a cap of 100: "
      f"{spectrum_distance(huge, list(huge), capped)}")
