"""Hausdorff distances between finite clouds on a compactified space.

Two routes compute the same numbers:

* ``brute``: the full distance matrix, O(|A| |B|); the reference.
* ``grid``: nearest neighbours through a uniform spatial hash on the
  embedded (circle / sphere) coordinates, which are already in compact-metric
  units.  Near-infinity points need no special bucket there: they cluster at
  the poles, and the glue between the two ends of the cylinder is handled in
  closed form, because the glue term of the nearest neighbour of ``a`` is
  ``dinf(a) + min_b dinf(b)`` (just ``dinf(a)`` once infinity is in ``B``).

Both routes evaluate every candidate pair with the same kernel, so their
values agree exactly.  Ties are broken towards the lowest index, which is the
lexicographic order of the points.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple

import numpy as np

from chabauty.cloud import PointCloud
from chabauty.metric import CompactPoint, Space, SpaceMismatch, chord, pairwise

BRUTE_BLOCK_ENTRIES = 1 << 22
MIN_CELL = 1e-3


class Directed(NamedTuple):
    value: float
    witness_a: CompactPoint
    witness_b: CompactPoint


@dataclass(frozen=True)
class HausdorffResult:
    value: float
    directed_ab: float
    directed_ba: float
    witness_a: CompactPoint
    witness_b: CompactPoint
    method: str
    interval: tuple[float, float] | None = None

    def to_json(self) -> dict:
        out = {
            "value": self.value,
            "directed_ab": self.directed_ab,
            "directed_ba": self.directed_ba,
            "witness_a": self.witness_a.to_json(),
            "witness_b": self.witness_b.to_json(),
            "method": self.method,
        }
        if self.interval is not None:
            out["interval"] = list(self.interval)
        return out


def _check(a: PointCloud, b: PointCloud):
    if a.space is not b.space:
        raise SpaceMismatch(f"cannot compare a {a.space.value} cloud with a {b.space.value} cloud")
    if len(a) == 0 or len(b) == 0:
        raise ValueError("Hausdorff distance needs nonempty clouds")


def _nearest_from_infinity(b: PointCloud) -> tuple[float, int]:
    if b.has_infinity:
        return 0.0, b.n_finite
    dinf_b = b.packed[1]
    j = int(np.argmin(dinf_b))
    return float(dinf_b[j]), j


def _infinity_term(a_dinf: np.ndarray, b: PointCloud) -> tuple[np.ndarray, np.ndarray]:
    """Best distance from each finite ``a`` through the point at infinity (or the cylinder glue)."""
    n = len(a_dinf)
    if b.has_infinity:
        return a_dinf.copy(), np.full(n, b.n_finite)
    if b.space is Space.CYLINDER and b.n_finite:
        dinf_b = b.packed[1]
        j = int(np.argmin(dinf_b))
        return a_dinf + dinf_b[j], np.full(n, j)
    return np.full(n, math.inf), np.full(n, -1)


def nearest_brute(a: PointCloud, b: PointCloud) -> tuple[np.ndarray, np.ndarray]:
    """Distance from every point of ``a`` to ``b`` and the index of the nearest point."""
    _check(a, b)
    emb_a, dinf_a = a.packed
    emb_b, dinf_b = b.packed
    dist = np.empty(len(a))
    idx = np.empty(len(a), dtype=np.int64)
    ncols = b.n_finite + int(b.has_infinity)
    block = max(1, BRUTE_BLOCK_ENTRIES // max(ncols, 1))
    for lo in range(0, a.n_finite, block):
        hi = min(lo + block, a.n_finite)
        d = pairwise(a.space, emb_a[lo:hi], dinf_a[lo:hi], emb_b, dinf_b)
        if b.has_infinity:
            d = np.concatenate([d, dinf_a[lo:hi, None]], axis=1)
        j = np.argmin(d, axis=1)
        idx[lo:hi] = j
        dist[lo:hi] = d[np.arange(hi - lo), j]
    if a.has_infinity:
        dist[-1], idx[-1] = _nearest_from_infinity(b)
    return dist, idx


def _cells(emb: np.ndarray, size: float):
    keys = np.floor(emb / size).astype(np.int64)
    uniq, inverse = np.unique(keys, axis=0, return_inverse=True)
    inverse = inverse.ravel()
    order = np.argsort(inverse, kind="stable")
    counts = np.bincount(inverse, minlength=len(uniq))
    starts = np.concatenate([[0], np.cumsum(counts)])
    members = [order[starts[i] : starts[i + 1]] for i in range(len(uniq))]
    return uniq, members


@lru_cache(maxsize=None)
def _shell(dim: int, k: int) -> tuple[tuple[int, ...], ...]:
    """Cell offsets at Chebyshev distance exactly k."""
    return tuple(
        off for off in itertools.product(range(-k, k + 1), repeat=dim) if max(map(abs, off)) == k
    )


def default_cell_size(a: PointCloud, b: PointCloud) -> float:
    # aim for a handful of points of b per cell
    n = max(b.n_finite, 1)
    if b.space is Space.LINE:
        size = 8.0 * 2.0 * math.pi / n
    else:
        size = 2.0 * math.sqrt(4.0 * math.pi / n)
    return min(max(size, MIN_CELL), 2.0)


class _Search:
    """Nearest finite point of ``b`` for batches of points of ``a`` sharing one cell."""

    def __init__(self, emb_a, emb_b, inf_d, size):
        self.emb_a = emb_a
        self.emb_b = emb_b
        self.inf_d = inf_d
        self.size = size
        self.best = np.full(len(emb_a), math.inf)
        self.best_j = np.full(len(emb_a), -1, dtype=np.int64)
        self.b_cells, self.b_members = _cells(emb_b, size)
        self.lookup = {tuple(c): m for c, m in zip(self.b_cells.tolist(), self.b_members)}
        self.dim = emb_b.shape[1]

    def _absorb(self, pending, groups):
        if not groups:
            return
        cand = np.sort(np.concatenate(groups))
        d = chord(self.emb_a[pending], self.emb_b[cand])
        j = np.argmin(d, axis=1)
        dmin = d[np.arange(len(pending)), j]
        jmin = cand[j]
        old, old_j = self.best[pending], self.best_j[pending]
        better = (dmin < old) | ((dmin == old) & (jmin < old_j))
        self.best[pending] = np.where(better, dmin, old)
        self.best_j[pending] = np.where(better, jmin, old_j)

    def _unresolved(self, pending, level):
        # every point of b in a cell beyond this Chebyshev level is at least this far away
        bound = level * self.size * (1.0 - 1e-9)
        reach = np.minimum(self.best[pending], self.inf_d[pending])
        return pending[reach > bound]

    def run(self, cell, rows, near_shells=2):
        pending = rows
        key = tuple(cell.tolist())
        for k in range(near_shells + 1):
            groups = []
            for off in _shell(self.dim, k):
                m = self.lookup.get(tuple(c + o for c, o in zip(key, off)))
                if m is not None:
                    groups.append(m)
            self._absorb(pending, groups)
            if k:
                pending = self._unresolved(pending, k)
                if not len(pending):
                    return
        # far away: scan the remaining occupied cells in order of Chebyshev distance
        cheb = np.max(np.abs(self.b_cells - cell), axis=1)
        by_level = np.argsort(cheb, kind="stable")
        levels = cheb[by_level]
        ptr = int(np.searchsorted(levels, near_shells, side="right"))
        k = near_shells
        while len(pending) and ptr < len(levels):
            k = max(2 * k, int(levels[ptr]))
            hi = int(np.searchsorted(levels, k, side="right"))
            self._absorb(pending, [self.b_members[c] for c in by_level[ptr:hi]])
            ptr = hi
            pending = self._unresolved(pending, levels[ptr] - 1 if ptr < len(levels) else math.inf)


def _lowest_glue_index(dinf_a: np.ndarray, dinf_b: np.ndarray, value: np.ndarray) -> np.ndarray:
    """Lowest j with fl(dinf_a + dinf_b[j]) == value, or a huge sentinel when there is none.

    fl(dinf_a + y) is monotone in y, so the matching j form a prefix of b
    sorted by distance to infinity; a vectorised bisection finds its length.
    """
    order = np.argsort(dinf_b, kind="stable")
    ranked = dinf_b[order]
    prefix_min = np.minimum.accumulate(order)
    lo = np.zeros(len(dinf_a), dtype=np.int64)  # count of matches is in [lo, hi]
    hi = np.full(len(dinf_a), len(ranked), dtype=np.int64)
    while np.any(lo < hi):
        mid = (lo + hi + 1) // 2
        ok = dinf_a + ranked[np.maximum(mid - 1, 0)] <= value
        lo = np.where((lo < hi) & ok, mid, lo)
        hi = np.where((lo < hi) & ~ok, mid - 1, hi)
    none = np.iinfo(np.int64).max
    return np.where(lo > 0, prefix_min[np.maximum(lo - 1, 0)], none)


def _lowest_index(a: PointCloud, b: PointCloud, value, best, best_j) -> np.ndarray:
    """Brute force's tie-break: the lowest index of b attaining ``value``."""
    none = np.iinfo(np.int64).max
    dinf_a = a.packed[1]
    cand = np.where(best == value, best_j, none)
    if b.space is Space.CYLINDER and b.n_finite:
        cand = np.minimum(cand, _lowest_glue_index(dinf_a, b.packed[1], value))
    if b.has_infinity:
        cand = np.minimum(cand, np.where(dinf_a == value, b.n_finite, none))
    return cand


def nearest_grid(a: PointCloud, b: PointCloud, cell_size: float | None = None):
    """Same contract as :func:`nearest_brute`, through a spatial hash over ``b``."""
    _check(a, b)
    s = default_cell_size(a, b) if cell_size is None else max(float(cell_size), MIN_CELL)
    emb_a, dinf_a = a.packed
    emb_b, _ = b.packed
    dist = np.empty(len(a))
    idx = np.empty(len(a), dtype=np.int64)

    inf_d, inf_j = _infinity_term(dinf_a, b)
    best = np.full(a.n_finite, math.inf)
    best_j = np.full(a.n_finite, -1, dtype=np.int64)
    if b.n_finite and a.n_finite:
        search = _Search(emb_a, emb_b, inf_d, s)
        for cell, rows in zip(*_cells(emb_a, s)):
            search.run(cell, rows)
        best, best_j = search.best, search.best_j

    value = np.minimum(best, inf_d)
    dist[: a.n_finite] = value
    idx[: a.n_finite] = _lowest_index(a, b, value, best, best_j)
    if a.has_infinity:
        dist[-1], idx[-1] = _nearest_from_infinity(b)
    return dist, idx


def _directed_from(a: PointCloud, b: PointCloud, dist: np.ndarray, idx: np.ndarray) -> Directed:
    i = int(np.argmax(dist))
    return Directed(float(dist[i]), a.point(i), b.point(int(idx[i])))


def directed_hausdorff(a: PointCloud, b: PointCloud, method: str = "brute", cell_size=None) -> Directed:
    """sup over a of the distance to b, with the achieving pair."""
    if method == "brute":
        dist, idx = nearest_brute(a, b)
    elif method == "grid":
        dist, idx = nearest_grid(a, b, cell_size)
    else:
        raise ValueError(f"unknown method {method!r}")
    return _directed_from(a, b, dist, idx)


def _symmetric(a, b, method, cell_size=None) -> HausdorffResult:
    ab = directed_hausdorff(a, b, method, cell_size)
    ba = directed_hausdorff(b, a, method, cell_size)
    if ab.value >= ba.value:
        wa, wb = ab.witness_a, ab.witness_b
    else:
        wa, wb = ba.witness_b, ba.witness_a
    return HausdorffResult(max(ab.value, ba.value), ab.value, ba.value, wa, wb, method)


def hausdorff_brute(a: PointCloud, b: PointCloud) -> HausdorffResult:
    return _symmetric(a, b, "brute")


def hausdorff_grid(a: PointCloud, b: PointCloud, cell_size: float | None = None) -> HausdorffResult:
    return _symmetric(a, b, "grid", cell_size)


def hausdorff(a: PointCloud, b: PointCloud, method: str = "auto") -> HausdorffResult:
    """Symmetric distance; ``auto`` picks brute force for small clouds."""
    if method == "auto":
        method = "brute" if len(a) * len(b) <= 1 << 20 else "grid"
    return _symmetric(a, b, method)


def hausdorff_bound_true_sets(sa, sb, method: str = "auto") -> HausdorffResult:
    """Enclosure of the distance between the sampled (infinite) sets.

    Each sample is within its covering radius of its true set, so the true
    distance lies within ``d_H(samples) +- (cover_a + cover_b)``.
    """
    res = hausdorff(sa, sb, method)
    slack = sa.covering_radius + sb.covering_radius
    interval = (max(0.0, res.value - slack), res.value + slack)
    return HausdorffResult(
        res.value, res.directed_ab, res.directed_ba, res.witness_a, res.witness_b, res.method, interval
    )


__all__ = [
    "Directed",
    "HausdorffResult",
    "directed_hausdorff",
    "hausdorff",
    "hausdorff_bound_true_sets",
    "hausdorff_brute",
    "hausdorff_grid",
    "nearest_brute",
    "nearest_grid",
]
