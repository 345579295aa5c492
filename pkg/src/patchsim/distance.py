"""Spectrum distance: normalized longest-common-subsequence dissimilarity.

distance(a, b) = 1 - |LCS(a, b)| / max(|a|, |b|), with two empty sequences at
distance 0. The LCS length is computed with a bit-parallel row encoding, so
one DP row lives in a single big integer and each input symbol costs one word
pass instead of a Python-level inner loop. Long spectra are run-length
collapsed and, past a hard cap, stride-subsampled before measurement.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Hashable, Sequence

from .trace import Spectrum

DEFAULT_CAP = 20_000

OVERFLOW_SUBSAMPLE = "subsample"
OVERFLOW_ERROR = "error"


class CapacityExceeded(Exception):
    """Both inputs exceed the length cap and the policy forbids subsampling."""


@dataclass(frozen=True)
class DistanceConfig:
    collapse_runs: bool = True
    cap: int = DEFAULT_CAP
    overflow: str = OVERFLOW_SUBSAMPLE

    def __post_init__(self):
        if self.cap <= 0:
            raise ValueError("cap must be positive")
        if self.overflow not in (OVERFLOW_SUBSAMPLE, OVERFLOW_ERROR):
            raise ValueError(f"unknown overflow policy {self.overflow!r}")


DEFAULT_CONFIG = DistanceConfig()


def lcs_length(a: Sequence[Hashable], b: Sequence[Hashable]) -> int:
    """Length of the longest common subsequence of two sequences.

    Bit-parallel formulation: the complemented match row is carried in one
    integer V of len(a) bits; set bits that survive all of b are non-matches.
    """
    if len(a) > len(b):
        a, b = b, a
    m = len(a)
    if m == 0:
        return 0
    pm: dict[Hashable, int] = {}
    bit = 1
    for x in a:
        pm[x] = pm.get(x, 0) | bit
        bit <<= 1
    mask = bit - 1
    v = mask
    for y in b:
        p = pm.get(y)
        if p is None:
            continue
        u = v & p
        v = ((v + u) | (v - u)) & mask
    return m - v.bit_count()


def distance(a: Sequence[Hashable], b: Sequence[Hashable]) -> float:
    """Normalized LCS distance in [0, 1]; 0.0 for two empty sequences."""
    longest = max(len(a), len(b))
    if longest == 0:
        return 0.0
    return 1.0 - lcs_length(a, b) / longest


def collapse_runs(seq: Sequence[Hashable]) -> tuple:
    """Drop consecutive duplicates: [3,3,3,5,3] -> [3,5,3]."""
    out = []
    prev = object()
    for x in seq:
        if x != prev:
            out.append(x)
            prev = x
    return tuple(out)


def subsample(seq: Sequence[Hashable], cap: int) -> tuple:
    """Deterministic uniform-stride reduction to exactly ``cap`` elements."""
    n = len(seq)
    if n <= cap:
        return tuple(seq)
    return tuple(seq[i * n // cap] for i in range(cap))


def preprocess(seq: Sequence[Hashable], config: DistanceConfig = DEFAULT_CONFIG) -> tuple:
    out = collapse_runs(seq) if config.collapse_runs else tuple(seq)
    return subsample(out, config.cap)


def _events(x) -> Sequence:
    return x.events if isinstance(x, Spectrum) else x


def spectrum_distance(a, b, config: DistanceConfig = DEFAULT_CONFIG) -> float:
    """Distance between two spectra (or raw ID sequences) after preprocessing.

    Under the "error" overflow policy the cap is still enforced, but a pair
    where both sides overflow it raises CapacityExceeded instead of being
    silently degraded on both ends.
    """
    ea, eb = _events(a), _events(b)
    if config.collapse_runs:
        ea, eb = collapse_runs(ea), collapse_runs(eb)
    if config.overflow == OVERFLOW_ERROR and len(ea) > config.cap and len(eb) > config.cap:
        raise CapacityExceeded(
            f"both spectra exceed cap {config.cap}: {len(ea)} and {len(eb)} events"
        )
    return distance(subsample(ea, config.cap), subsample(eb, config.cap))
