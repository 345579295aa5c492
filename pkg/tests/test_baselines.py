import random
from functools import lru_cache

import pytest

from patchsim.baselines import (
    EmptyCoveringSet,
    ast_tree,
    crash_oracle,
    semantic_distance_led,
    syntactic_distance,
    tree_edit_distance,
)
from patchsim.classify import MissingTrace
from patchsim.minilang import parse
from patchsim.trace import Alignment, Spectrum, TestCase


def forest_dist_oracle(f1, f2):
    """Textbook recursive forest edit distance; exponential but obviously right."""

    @lru_cache(maxsize=None)
    def d(a, b):
        if not a and not b:
            return 0
        if not a:
            return d(a, b[:-1] + b[-1][1]) + 1
        if not b:
            return d(a[:-1] + a[-1][1], b) + 1
        (r1, c1), (r2, c2) = a[-1], b[-1]
        return min(
            d(a[:-1] + c1, b) + 1,
            d(a, b[:-1] + c2) + 1,
            d(c1, c2) + d(a[:-1], b[:-1]) + (0 if r1 == r2 else 2),
        )

    return d(f1, f2)


def random_tree(rng, max_nodes):
    labels = ["a", "b", "c"]

    def build(budget):
        label = rng.choice(labels)
        children = []
        budget -= 1
        while budget > 0 and rng.random() < 0.6:
            sub = build(rng.randrange(1, budget + 1))
            children.append(sub)
            budget -= _size(sub)
        return (label, tuple(children))

    return build(max_nodes)


def _size(t):
    return 1 + sum(_size(c) for c in t[1])


class TestTreeEditDistance:
    def test_against_oracle(self):
        rng = random.Random(41)
        for _ in range(150):
            t1 = random_tree(rng, rng.randrange(1, 9))
            t2 = random_tree(rng, rng.randrange(1, 9))
            assert tree_edit_distance(t1, t2) == forest_dist_oracle((t1,), (t2,))

    def test_identical_zero(self):
        rng = random.Random(42)
        for _ in range(50):
            t = random_tree(rng, 8)
            assert tree_edit_distance(t, t) == 0

    def test_symmetry(self):
        rng = random.Random(43)
        for _ in range(80):
            t1 = random_tree(rng, 7)
            t2 = random_tree(rng, 7)
            assert tree_edit_distance(t1, t2) == tree_edit_distance(t2, t1)

    def test_single_leaf_insertion(self):
        t1 = ("a", (("b", ()),))
        t2 = ("a", (("b", ()), ("c", ())))
        assert tree_edit_distance(t1, t2) == 1

    def test_relabel_counts_two(self):
        assert tree_edit_distance(("a", ()), ("b", ())) == 2


class TestSyntacticDistance:
    def test_worked_comparison_example(self):
        buggy = parse("fn check() { return a > b + 1; }")
        patched = parse("fn check() { return c < d + 1; }")
        assert syntactic_distance(buggy, patched) == 6

    def test_identical_programs(self):
        p = parse("fn f(a) { return a * 2; }")
        q = parse("fn f(a) { return a * 2; }")
        assert syntactic_distance(p, q) == 0

    def test_inserted_bare_return(self):
        buggy = parse("fn f() { let a = 1; }")
        patched = parse("fn f() { let a = 1; return; }")
        assert syntactic_distance(buggy, patched) == 1

    def test_symmetry_on_programs(self):
        a = parse("fn f(x) { if (x > 0) { return x; } return -x; }")
        b = parse("fn f(x) { while (x > 0) { x = x - 1; } return x; }")
        assert syntactic_distance(a, b) == syntactic_distance(b, a)

    def test_zero_only_when_isomorphic(self):
        a = parse("fn f(x) { return x + 1; }")
        b = parse("fn f(x) { return x + 2; }")
        assert syntactic_distance(a, b) == 2  # literal 1 out, literal 2 in
        assert ast_tree(a) != ast_tree(b)


def full(test_id, version, *ids, crashed=False):
    return Spectrum(tuple(ids), test_id=test_id, version=version, crashed=crashed)


IDENTITY = Alignment(pairs=tuple((i, i) for i in range(10)), buggy_max=9)


class TestLed:
    def test_behavior_preserving_patch(self):
        originals = [TestCase("t0", result="passing"), TestCase("t1", result="failing")]
        buggy = {"t0": full("t0", "buggy", 1, 2, 3), "t1": full("t1", "buggy", 1, 3)}
        patched = {"t0": full("t0", "patched", 1, 2, 3), "t1": full("t1", "patched", 1, 3)}
        context = {"t0": full("t0", "buggy", 2), "t1": full("t1", "buggy", 3)}
        led = semantic_distance_led(originals, buggy, patched, context, IDENTITY)
        assert led == 0.0

    def test_singleton_mean(self):
        originals = [TestCase("t0", result="failing")]
        buggy = {"t0": full("t0", "buggy", 1, 2, 3, 4, 5)}
        patched = {"t0": full("t0", "patched", 1, 3, 5)}
        context = {"t0": full("t0", "buggy", 1)}
        led = semantic_distance_led(originals, buggy, patched, context, IDENTITY)
        assert led == pytest.approx(0.4)

    def test_mean_of_two(self):
        originals = [TestCase("t0", result="passing"), TestCase("t1", result="failing")]
        buggy = {
            "t0": full("t0", "buggy", 1, 2, 3, 4, 5),
            "t1": full("t1", "buggy", 1, 2, 3, 4, 5),
        }
        patched = {
            "t0": full("t0", "patched", 1, 2, 3, 4),  # distance 0.2
            "t1": full("t1", "patched", 1, 3),  # distance 0.6
        }
        context = {"t0": full("t0", "buggy", 1), "t1": full("t1", "buggy", 1)}
        led = semantic_distance_led(originals, buggy, patched, context, IDENTITY)
        assert led == pytest.approx(0.4)

    def test_non_covering_excluded(self):
        originals = [TestCase("t0", result="passing"), TestCase("t1", result="failing")]
        buggy = {"t0": full("t0", "buggy", 1, 2), "t1": full("t1", "buggy", 1, 2, 3, 4, 5)}
        patched = {"t0": full("t0", "patched", 9, 8), "t1": full("t1", "patched", 1, 3, 5)}
        context = {"t0": full("t0", "buggy"), "t1": full("t1", "buggy", 1)}
        led = semantic_distance_led(originals, buggy, patched, context, IDENTITY)
        assert led == pytest.approx(0.4)  # t0 (distance 1.0) plays no part

    def test_no_covering_original_is_an_error(self):
        originals = [TestCase("t0", result="passing")]
        with pytest.raises(EmptyCoveringSet):
            semantic_distance_led(
                originals,
                {"t0": full("t0", "buggy", 1)},
                {"t0": full("t0", "patched", 1)},
                {"t0": full("t0", "buggy")},
                IDENTITY,
            )


class TestCrashOracle:
    def test_new_crash_is_incorrect(self):
        tests = [TestCase("t0", result="passing")]
        buggy = {"t0": full("t0", "buggy", 1)}
        patched = {"t0": full("t0", "patched", 1, crashed=True)}
        assert crash_oracle(tests, buggy, patched) == "incorrect"

    def test_no_new_crash_is_no_signal(self):
        tests = [TestCase("t0", result="passing")]
        buggy = {"t0": full("t0", "buggy", 1)}
        patched = {"t0": full("t0", "patched", 1)}
        assert crash_oracle(tests, buggy, patched) == "no-signal"

    def test_crash_on_both_versions_is_not_new(self):
        tests = [TestCase("t0", result="failing")]
        buggy = {"t0": full("t0", "buggy", 1, crashed=True)}
        patched = {"t0": full("t0", "patched", 1, crashed=True)}
        assert crash_oracle(tests, buggy, patched) == "no-signal"

    def test_fixed_crash_is_not_new(self):
        tests = [TestCase("t0", result="failing")]
        buggy = {"t0": full("t0", "buggy", 1, crashed=True)}
        patched = {"t0": full("t0", "patched", 1)}
        assert crash_oracle(tests, buggy, patched) == "no-signal"

    def test_adding_tests_is_monotone(self):
        rng = random.Random(44)
        for _ in range(100):
            tests = []
            buggy = {}
            patched = {}
            for i in range(rng.randrange(1, 8)):
                tid = f"t{i}"
                tests.append(TestCase(tid, result="passing"))
                buggy[tid] = full(tid, "buggy", 1, crashed=rng.random() < 0.3)
                patched[tid] = full(tid, "patched", 1, crashed=rng.random() < 0.3)
            verdicts = [
                crash_oracle(tests[: k + 1], buggy, patched) for k in range(len(tests))
            ]
            for a, b in zip(verdicts, verdicts[1:]):
                assert not (a == "incorrect" and b == "no-signal")

    def test_missing_trace(self):
        with pytest.raises(MissingTrace):
            crash_oracle([TestCase("t0", result="passing")], {}, {})
