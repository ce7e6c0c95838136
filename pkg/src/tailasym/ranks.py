"""Validated paired samples and concomitant reverse ranks.

Sorting the pairs by decreasing second coordinate and ranking the first
coordinates in reverse (rank 1 = largest) is the combinatorial backbone of
every statistic in this package: all of them are functions of those ranks
alone, which is what buys invariance under strictly increasing transforms of
either margin.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, InvalidN, LengthMismatch, NonFinite, TiesPresent


def _as_checked_array(values, name):
    arr = np.asarray(values, dtype=np.float64)
    if arr.ndim != 1:
        raise DomainError(f"{name} must be one-dimensional, got shape {arr.shape}")
    bad = np.flatnonzero(~np.isfinite(arr))
    if bad.size:
        raise NonFinite(f"{name}[{bad[0]}] is not finite: {arr[bad[0]]!r}")
    return arr


def _tied_pair(arr):
    """Original indices of one tied pair, or None if all values are distinct."""
    order = np.argsort(arr, kind="stable")
    eq = np.flatnonzero(arr[order][1:] == arr[order][:-1])
    if eq.size == 0:
        return None
    return int(order[eq[0]]), int(order[eq[0] + 1])


def _jitter(arr, rng):
    """Break ties with seeded offsets smaller than half the smallest nonzero gap.

    Offsets are distinct multiples of a common step, so tied entries become
    distinct while the relative order of already-distinct values is preserved.
    A constant series has no nonzero gap; unit scale is used there.
    """
    n = arr.size
    gaps = np.diff(np.unique(arr))
    scale = float(gaps.min()) if gaps.size else 1.0
    offsets = (rng.permutation(n) + 1.0) / (n + 1.0) * (0.5 * scale)
    return arr + offsets


@dataclass(frozen=True, eq=False)
class PairedSample:
    """Immutable, validated pair of equal-length tie-free series."""

    x: np.ndarray
    y: np.ndarray
    jittered: bool = False

    @property
    def n(self) -> int:
        return int(self.x.size)

    def swapped(self) -> "PairedSample":
        """The same sample with the roles of the two series exchanged."""
        return PairedSample(x=self.y, y=self.x, jittered=self.jittered)


def make_sample(x, y, tie_policy="reject", seed=None):
    """Validate a pair of series into a PairedSample.

    tie_policy 'reject' raises TiesPresent on any within-series tie;
    'jitter' breaks ties with a seeded perturbation (applied only to a series
    that actually contains ties) and records that it did so.
    """
    xa = _as_checked_array(x, "x")
    ya = _as_checked_array(y, "y")
    if xa.size != ya.size:
        raise LengthMismatch(f"series lengths differ: {xa.size} vs {ya.size}")
    if xa.size < 2:
        raise InvalidN(f"need at least 2 paired observations, got {xa.size}")

    if tie_policy not in ("reject", "jitter"):
        raise DomainError(f"unknown tie policy: {tie_policy!r}")

    jittered = False
    if tie_policy == "jitter":
        if seed is None:
            raise DomainError("tie policy 'jitter' requires a seed")
        rng = np.random.Generator(
            np.random.Philox(np.random.SeedSequence(entropy=seed, spawn_key=(1,)))
        )
        # x first, then y, so the random stream layout is data-independent.
        if _tied_pair(xa) is not None:
            xa = _jitter(xa, rng)
            jittered = True
        if _tied_pair(ya) is not None:
            ya = _jitter(ya, rng)
            jittered = True

    for name, arr in (("x", xa), ("y", ya)):
        t = _tied_pair(arr)
        if t is not None:
            raise TiesPresent(f"{name} has equal values at indices {t[0]} and {t[1]}")

    xa = xa.copy()
    ya = ya.copy()
    xa.flags.writeable = False
    ya.flags.writeable = False
    return PairedSample(x=xa, y=ya, jittered=jittered)


def reverse_ranks(values):
    """Ranks in decreasing order: 1 for the largest value, n for the smallest.

    Equivalently, entry i counts how many values are >= values[i].  Input must
    be tie-free; output is a permutation of 1..n as an int64 array.
    """
    arr = _as_checked_array(values, "values")
    if arr.size == 0:
        raise InvalidN("cannot rank an empty sequence")
    t = _tied_pair(arr)
    if t is not None:
        raise TiesPresent(f"values has equal entries at indices {t[0]} and {t[1]}")
    order = np.argsort(arr, kind="stable")
    out = np.empty(arr.size, dtype=np.int64)
    out[order] = np.arange(arr.size, 0, -1, dtype=np.int64)
    return out


@dataclass(frozen=True, eq=False)
class ConcomitantRanks:
    """Reverse ranks of one series ordered by decreasing values of the other.

    rho[i] is the reverse rank (among all n first-coordinate values) of the
    first coordinate paired with the (i+1)-th largest second coordinate; rho is
    a permutation of 1..n.  y_order[i] is the original index of that pair.
    """

    rho: np.ndarray
    y_order: np.ndarray

    @property
    def n(self) -> int:
        return int(self.rho.size)


def concomitant_ranks(sample: PairedSample) -> ConcomitantRanks:
    """Concomitant reverse ranks of sample.x along decreasing sample.y."""
    y_order = np.argsort(-sample.y, kind="stable")
    rho = reverse_ranks(sample.x[y_order])
    rho.flags.writeable = False
    y_order = y_order.astype(np.int64)
    y_order.flags.writeable = False
    return ConcomitantRanks(rho=rho, y_order=y_order)
