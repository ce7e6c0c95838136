"""Pure-numpy evaluation kernels (fallback when the compiled extension is absent).

Both backends implement the same two primitives:

* ``eta_grid_sums`` -- integer double sums of the plain rank statistic over a k-grid,
* ``weighted_eta_grid_sums`` -- the multiplier-weighted double sums over a k-grid.

Callers own all validation and scaling; the kernels are pure array crunching.
The integer kernel must stay in exact integer arithmetic: several tests assert
bit-level agreement with literal double-sum evaluation.
"""

import numpy as np


def eta_grid_sums(pos, ks):
    """Integer sums S(k) = sum_{i,j <= k-1} (k+1 - max(rank_i, rank_j))_+.

    ``pos`` is the 0-based inverse of the concomitant rank permutation:
    pos[v-1] = i  <=>  the (i+1)-th concomitant has rank v.  For each k, the
    rank values v <= k sitting among the first k-1 concomitants are visited in
    ascending order; the a-th smallest contributes (2a-1)(k+1-v), the sorted
    form of the double sum.
    """
    out = np.empty(len(ks), dtype=np.int64)
    for t, k in enumerate(ks):
        k = int(k)
        vals = np.arange(1, k + 1, dtype=np.int64)
        kept = vals[pos[:k] < k - 1]
        a = np.arange(1, kept.size + 1, dtype=np.int64)
        out[t] = np.dot(2 * a - 1, (k + 1) - kept)
    return out


def weighted_eta_grid_sums(rx_sorted, ypos_sorted, w_sorted, taus, ks):
    """Weighted sums S(k) = sum_{i,j <= tau(k)} w_i w_j (k - max(R_i, R_j))_+.

    Inputs are pre-sorted by ascending weighted rank ``rx_sorted``;
    ``ypos_sorted`` holds each element's 0-based position in the ordering by
    decreasing second coordinate, and ``taus`` the per-k cutoffs.  Only
    elements with ypos < tau(k) and R < k contribute; with W the running
    included weight, the a-th included element adds (k - R_a) w_a (2W + w_a).
    """
    out = np.empty(len(ks), dtype=np.float64)
    for t, k in enumerate(ks):
        kf = float(k)
        hi = int(np.searchsorted(rx_sorted, kf, side="left"))
        keep = ypos_sorted[:hi] < taus[t]
        rx = rx_sorted[:hi][keep]
        w = w_sorted[:hi][keep]
        cw = np.cumsum(w)
        out[t] = float(np.dot((kf - rx) * w, 2.0 * cw - w))
    return out
