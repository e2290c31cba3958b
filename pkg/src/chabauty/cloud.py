"""Finite point clouds on a compactified space."""

from __future__ import annotations

import io
import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from chabauty.metric import INFINITY, TWO_PI, CompactPoint, Space, embed, wrap_angle

DEDUPE_TOL = 1e-12


def _canonical_order(space, x, theta, tol):
    x = np.asarray(x, dtype=float).ravel()
    if space is Space.LINE:
        theta = np.zeros_like(x)
    else:
        theta = wrap_angle(np.asarray(theta, dtype=float).ravel())
        if tol is not None:
            theta = np.where(theta > TWO_PI - tol, 0.0, theta)
    if x.shape != theta.shape:
        raise ValueError("x and theta must have the same length")
    if not np.all(np.isfinite(x)):
        raise ValueError("finite coordinates required; use has_infinity for the point at infinity")
    order = np.lexsort((theta, x))
    x, theta = x[order], theta[order]
    if tol is not None and len(x) > 1:
        dx = np.abs(np.diff(x))
        dt = np.abs(np.diff(theta))
        dt = np.minimum(dt, TWO_PI - dt)
        keep = np.concatenate([[True], (dx > tol) | (dt > tol)])
        x, theta = x[keep], theta[keep]
    return x, theta


@dataclass(frozen=True, eq=False)
class PointCloud:
    """Finite points (sorted by x then theta) plus, optionally, the point at infinity.

    The point order is the lexicographic order of :class:`CompactPoint`, so
    index order doubles as the tie-break order for witnesses.
    """

    space: Space
    x: np.ndarray
    theta: np.ndarray | None = None
    has_infinity: bool = True
    dedupe_tol: float | None = DEDUPE_TOL

    def __post_init__(self):
        x, theta = _canonical_order(self.space, self.x, self.theta, self.dedupe_tol)
        x.flags.writeable = False
        theta.flags.writeable = False
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "theta", theta)

    @property
    def n_finite(self) -> int:
        return len(self.x)

    def __len__(self) -> int:
        return self.n_finite + int(self.has_infinity)

    @cached_property
    def packed(self) -> tuple[np.ndarray, np.ndarray]:
        return embed(self.space, self.x, self.theta)

    def point(self, i: int) -> CompactPoint:
        if i == self.n_finite:
            if not self.has_infinity:
                raise IndexError(i)
            return INFINITY
        return CompactPoint(False, float(self.x[i]), float(self.theta[i]))

    @property
    def points(self) -> list[CompactPoint]:
        return [self.point(i) for i in range(len(self))]

    @classmethod
    def from_points(cls, space: Space, points, dedupe_tol: float | None = DEDUPE_TOL) -> "PointCloud":
        finite = [p for p in points if not p.is_infinity]
        return cls(
            space,
            np.array([p.x for p in finite], dtype=float),
            np.array([p.theta for p in finite], dtype=float),
            has_infinity=any(p.is_infinity for p in points),
            dedupe_tol=dedupe_tol,
        )

    def to_csv(self) -> str:
        out = io.StringIO()
        out.write("x,theta,is_infinity\n")
        for xi, ti in zip(self.x, self.theta):
            if self.space is Space.LINE:
                out.write(f"{format_real(xi)},,0\n")
            else:
                out.write(f"{format_real(xi)},{format_real(ti)},0\n")
        if self.has_infinity:
            out.write(",,1\n")
        return out.getvalue()


def format_real(v: float) -> str:
    """17 significant digits, enough to round-trip a double."""
    v = float(v)
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    return format(v, ".17g")
