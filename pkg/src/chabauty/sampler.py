"""Finite samples of compactified subgroups with certified covering radii.

A sample keeps every discrete element within base radius ``R`` (plus the
point at infinity) and samples continuous parts at step ``delta``.  Its
``covering_radius`` bounds, in the compact metric, the distance from any
point of the true compactified subgroup to the sample:

* line: ``2/sqrt(1+R^2)`` for the tail, plus ``2*delta`` for a grid (the
  chordal metric is 2-Lipschitz in x);
* cylinder: points with |Re| > R are within ``2/sqrt(1+e^(2R))`` of
  infinity, and the sphere metric is 1-Lipschitz for the flat cylinder
  metric, so a grid contributes its flat half-diagonal.  The radius is the
  larger of the two.

Grids extend to ``ceil(R/delta)`` steps so that continuous parts are covered
up to ``|x| = R`` (this is ``floor`` whenever ``R`` is a multiple of ``delta``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any

import numpy as np

from chabauty import subgroups as sg
from chabauty.cloud import PointCloud
from chabauty.hausdorff import nearest_brute, nearest_grid
from chabauty.metric import TWO_PI, Space, dist_to_infinity_cylinder

_STEP_SLACK = 1e-9


@dataclass(frozen=True, eq=False)
class SubgroupSample(PointCloud):
    source: Any = None
    trunc_radius: float = math.inf
    step: float = math.inf
    covering_radius: float = 0.0


def _check_params(R, delta):
    if not (R > 0 and math.isfinite(R)):
        raise ValueError(f"truncation radius must be positive and finite, got {R!r}")
    if not (delta > 0 and math.isfinite(delta)):
        raise ValueError(f"step must be positive and finite, got {delta!r}")


def _symmetric_steps(extent: float, step: float) -> np.ndarray:
    """Integers j with |j*step| reaching at least ``extent``."""
    n = math.ceil(extent / step - _STEP_SLACK)
    return np.arange(-n, n + 1)


def _multiples_within(extent: float, gen: float) -> np.ndarray:
    """Integers k with |k*gen| <= extent."""
    n = math.floor(extent / gen)
    if (n + 1) * gen <= extent:
        n += 1
    return np.arange(-n, n + 1)


def _circle_steps(delta: float) -> tuple[np.ndarray, float]:
    n = math.ceil(TWO_PI / delta - _STEP_SLACK)
    return TWO_PI * np.arange(n) / n, TWO_PI / n


def line_tail(R: float) -> float:
    return 2.0 / math.hypot(1.0, R)


def cylinder_tail(R: float) -> float:
    return dist_to_infinity_cylinder(R)


def sample_r_subgroup(g, R: float, delta: float) -> SubgroupSample:
    _check_params(R, delta)
    if isinstance(g, sg.Trivial):
        x = np.zeros(1)
        cover = 0.0
    elif isinstance(g, sg.Cyclic):
        x = g.r * _multiples_within(R, g.r)
        cover = line_tail(R)
    elif isinstance(g, sg.FullLine):
        x = delta * _symmetric_steps(R, delta)
        cover = line_tail(R) + 2.0 * delta
    else:
        raise TypeError(f"not a subgroup of R: {g!r}")
    return SubgroupSample(
        Space.LINE, x, None, True, source=g, trunc_radius=R, step=delta, covering_radius=cover
    )


def sample_cstar_subgroup(g, R: float, delta: float) -> SubgroupSample:
    _check_params(R, delta)
    tail = cylinder_tail(R)

    if isinstance(g, sg.Discrete):
        theta = TWO_PI * np.arange(g.m) / g.m
        x = np.zeros_like(theta)
        cover = 0.0
    elif isinstance(g, sg.ImaginaryAxis):
        theta, dtheta = _circle_steps(delta)
        x = np.zeros_like(theta)
        cover = dtheta / 2
    elif isinstance(g, sg.WholePlane):
        theta, dtheta = _circle_steps(delta)
        cols = delta * _symmetric_steps(R, delta)
        x, theta = (a.ravel() for a in np.meshgrid(cols, theta, indexing="ij"))
        cover = max(tail, math.hypot(delta / 2, dtheta / 2))
    elif isinstance(g, sg.VerticalLines):
        theta, dtheta = _circle_steps(delta)
        cols = g.x * _multiples_within(R, g.x)
        x, theta = (a.ravel() for a in np.meshgrid(cols, theta, indexing="ij"))
        cover = max(tail, dtheta / 2)
    elif isinstance(g, sg.SlantedLines):
        stretch = math.hypot(1.0, g.t)
        arc = delta * _symmetric_steps(R * stretch, delta)
        along = arc / stretch
        offsets = TWO_PI * np.arange(g.m) / g.m
        xs, off = np.meshgrid(along, offsets, indexing="ij")
        x = xs.ravel()
        theta = g.t * x + off.ravel()
        cover = max(tail, delta / 2)
    elif isinstance(g, sg.Lattice):
        a = _multiples_within(R, g.z.real)
        b = np.arange(g.m)
        aa, bb = np.meshgrid(a, b, indexing="ij")
        x = (aa * g.z.real).ravel()
        theta = (aa * g.z.imag + TWO_PI * bb / g.m).ravel()
        cover = tail
    else:
        raise TypeError(f"not a subgroup of C*: {g!r}")

    return SubgroupSample(
        Space.CYLINDER, x, theta, True, source=g, trunc_radius=R, step=delta, covering_radius=cover
    )


def sample(g, R: float, delta: float) -> SubgroupSample:
    if sg.is_cstar(g):
        return sample_cstar_subgroup(g, R, delta)
    return sample_r_subgroup(g, R, delta)


# --- empirical check of the certificate ------------------------------------


def random_true_points(g, n: int, rng: np.random.Generator, extent: float) -> PointCloud:
    """``n`` random points of the true subgroup with |Re| up to ``extent`` (no infinity)."""
    if isinstance(g, sg.Trivial):
        return PointCloud(Space.LINE, np.zeros(n), None, False, dedupe_tol=None)
    if isinstance(g, sg.Cyclic):
        k = rng.integers(-int(extent / g.r) - 1, int(extent / g.r) + 2, size=n)
        return PointCloud(Space.LINE, k * g.r, None, False, dedupe_tol=None)
    if isinstance(g, sg.FullLine):
        return PointCloud(Space.LINE, rng.uniform(-extent, extent, n), None, False, dedupe_tol=None)

    u = rng.uniform(-extent, extent, n)
    angle = rng.uniform(0.0, TWO_PI, n)
    if isinstance(g, sg.WholePlane):
        x, theta = u, angle
    elif isinstance(g, sg.ImaginaryAxis):
        x, theta = np.zeros(n), angle
    elif isinstance(g, sg.Discrete):
        x, theta = np.zeros(n), TWO_PI * rng.integers(0, g.m, n) / g.m
    elif isinstance(g, sg.VerticalLines):
        kmax = int(extent / g.x) + 1
        x, theta = g.x * rng.integers(-kmax, kmax + 1, n), angle
    elif isinstance(g, sg.SlantedLines):
        x = u
        theta = g.t * u + TWO_PI * rng.integers(0, g.m, n) / g.m
    elif isinstance(g, sg.Lattice):
        amax = int(extent / g.z.real) + 1
        a = rng.integers(-amax, amax + 1, n)
        b = rng.integers(0, g.m, n)
        x = a * g.z.real
        theta = a * g.z.imag + TWO_PI * b / g.m
    else:
        raise TypeError(f"not a subgroup value: {g!r}")
    return PointCloud(Space.CYLINDER, x, theta, False, dedupe_tol=None)


def certify_covering(s: SubgroupSample, probes: int, seed: int) -> float:
    """Largest observed distance from random points of the true set to the sample.

    Probes reach 1.5 times past the truncation radius so the tail bound is
    exercised as well.  The result must not exceed ``s.covering_radius``.
    """
    if probes < 1:
        raise ValueError("probes must be >= 1")
    rng = np.random.default_rng(seed)
    extent = 1.5 * s.trunc_radius + 1.0
    cloud = random_true_points(s.source, probes, rng, extent)
    if len(cloud) * len(s) <= 1 << 22:
        dist, _ = nearest_brute(cloud, s)
    else:
        dist, _ = nearest_grid(cloud, s)
    return float(dist.max())
