import random

import pytest

from patchsim.distance import (
    CapacityExceeded,
    DistanceConfig,
    collapse_runs,
    distance,
    lcs_length,
    preprocess,
    spectrum_distance,
    subsample,
)
from patchsim.trace import Spectrum


def lcs_dp(a, b):
    """Independent quadratic two-row oracle."""
    if len(a) < len(b):
        a, b = b, a
    prev = [0] * (len(b) + 1)
    for x in a:
        cur = [0]
        for j, y in enumerate(b):
            cur.append(prev[j] + 1 if x == y else max(prev[j + 1], cur[j]))
        prev = cur
    return prev[-1]


class TestOracle:
    # Sanity-check the oracle itself against hand-computed values.
    def test_known_values(self):
        assert lcs_dp("ABCBDAB", "BDCABA") == 4
        assert lcs_dp([1, 2, 3, 4, 5], [1, 3, 5]) == 3
        assert lcs_dp("", "abc") == 0
        assert lcs_dp("abc", "abc") == 3


class TestLcsLength:
    def test_agrees_with_oracle(self):
        rng = random.Random(21)
        for _ in range(500):
            k = rng.choice([1, 2, 3, 5, 10, 40])
            a = [rng.randrange(k) for _ in range(rng.randrange(0, 60))]
            b = [rng.randrange(k) for _ in range(rng.randrange(0, 60))]
            assert lcs_length(a, b) == lcs_dp(a, b)

    def test_strings_and_tuples(self):
        assert lcs_length("ABCBDAB", "BDCABA") == 4
        assert lcs_length((7, 8, 9), (8, 9, 7)) == 2


class TestDistance:
    def test_interleaved_example(self):
        assert distance([1, 2, 3, 4, 5], [1, 3, 5]) == pytest.approx(0.4)

    def test_both_empty(self):
        assert distance([], []) == 0.0

    def test_one_empty(self):
        assert distance([], [1, 2]) == 1.0

    def test_disjoint(self):
        assert distance([1, 2], [3, 4]) == 1.0

    def test_identity(self):
        rng = random.Random(22)
        for _ in range(100):
            a = [rng.randrange(9) for _ in range(rng.randrange(0, 30))]
            assert distance(a, a) == 0.0

    def test_zero_only_for_equal(self):
        rng = random.Random(23)
        for _ in range(300):
            a = [rng.randrange(4) for _ in range(rng.randrange(0, 20))]
            b = [rng.randrange(4) for _ in range(rng.randrange(0, 20))]
            assert (distance(a, b) == 0.0) == (a == b)

    def test_symmetry_and_range(self):
        rng = random.Random(24)
        for _ in range(300):
            a = [rng.randrange(6) for _ in range(rng.randrange(0, 25))]
            b = [rng.randrange(6) for _ in range(rng.randrange(0, 25))]
            d = distance(a, b)
            assert 0.0 <= d <= 1.0
            assert d == distance(b, a)

    def test_subsequence_zero_law(self):
        # If a is a subsequence of b, the LCS is all of a.
        rng = random.Random(25)
        for _ in range(300):
            b = [rng.randrange(6) for _ in range(rng.randrange(1, 25))]
            idx = sorted(rng.sample(range(len(b)), rng.randrange(0, len(b) + 1)))
            a = [b[i] for i in idx]
            assert distance(a, b) == pytest.approx(1.0 - len(a) / len(b))


class TestPreprocess:
    def test_collapse_runs(self):
        assert collapse_runs([3, 3, 3, 5, 3]) == (3, 5, 3)
        assert collapse_runs([]) == ()
        assert collapse_runs([1, 2, 3]) == (1, 2, 3)

    def test_subsample_identity_under_cap(self):
        assert subsample([1, 2, 3], 5) == (1, 2, 3)

    def test_subsample_exact_cap_and_order(self):
        rng = random.Random(26)
        seq = [rng.randrange(50) for _ in range(997)]
        out = subsample(seq, 100)
        assert len(out) == 100
        it = iter(seq)
        assert all(x in it for x in out)  # subsequence of the input
        assert out == subsample(seq, 100)  # deterministic

    def test_preprocess_pipeline(self):
        cfg = DistanceConfig(cap=4)
        assert preprocess([1, 1, 2, 2, 3, 3], cfg) == (1, 2, 3)
        out = preprocess(list(range(10)) * 2, cfg)
        assert len(out) == 4


class TestSpectrumDistance:
    def test_accepts_spectra(self):
        a = Spectrum((1, 2, 3, 4, 5))
        b = Spectrum((1, 3, 5))
        assert spectrum_distance(a, b) == pytest.approx(0.4)

    def test_run_collapse_makes_loop_counts_irrelevant(self):
        a = Spectrum((7, 7, 7, 7, 8))
        b = Spectrum((7, 8))
        assert spectrum_distance(a, b) == 0.0
        cfg = DistanceConfig(collapse_runs=False)
        assert spectrum_distance(a, b, cfg) > 0.0

    def test_error_policy_needs_both_over_cap(self):
        cfg = DistanceConfig(cap=10, overflow="error")
        long = list(range(50))
        short = [1, 2, 3]
        # One long side is subsampled, not an error.
        assert 0.0 <= spectrum_distance(long, short, cfg) <= 1.0
        with pytest.raises(CapacityExceeded):
            spectrum_distance(long, list(range(50, 100)), cfg)

    def test_subsample_policy_never_raises(self):
        cfg = DistanceConfig(cap=10)
        d = spectrum_distance(list(range(50)), list(range(50, 100)), cfg)
        assert 0.0 <= d <= 1.0

    def test_cap_applies_after_collapse(self):
        # 30 raw events but only 3 distinct runs: no overflow at cap 10.
        cfg = DistanceConfig(cap=10, overflow="error")
        a = [1] * 10 + [2] * 10 + [3] * 10
        assert spectrum_distance(a, a, cfg) == 0.0

    def test_config_validation(self):
        with pytest.raises(ValueError):
            DistanceConfig(cap=0)
        with pytest.raises(ValueError):
            DistanceConfig(overflow="clamp")
