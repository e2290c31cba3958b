"""Explicit metrics on the one-point compactifications of R and of the cylinder C/2*pi*i*Z.

Line: the chordal metric of the stereographic projection onto the unit
circle, so ``dist_line(0, inf) == 2``.

Cylinder: a point x + i*theta is sent to exp(x + i*theta) on the Riemann
sphere (chordal metric ``chi``).  The two ends of the cylinder go to 0 and
inf of the sphere; gluing them into one point gives the quotient metric

    d(p, q) = min(chi(P, Q), chi(P, 0) + chi(Q, inf), chi(P, inf) + chi(Q, 0))

and ``d(p, INF) = min(chi(P, 0), chi(P, inf))``.

Both metrics are also available in vectorised form on packed coordinate
arrays (:func:`embed`, :func:`pairwise`), which is what the Hausdorff engine
uses.  There the chordal term is a Euclidean distance between embedded
points and the glue term is ``dinf(p) + dinf(q)``; this equals the formula
above because the two extra glue combinations are never smaller than
``chi(P, Q)``.
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass, field

import numpy as np

TWO_PI = 2.0 * math.pi
# Past |x| = 700 a cylinder point is within 2e^-700 of infinity; a little further
# (|x| ~ 745) that distance underflows to 0.0, so such points are numerically
# indistinguishable from infinity and are represented as it.
CYLINDER_HORIZON = 700.0


class Space(enum.Enum):
    LINE = "line"
    CYLINDER = "cylinder"


@dataclass(frozen=True, order=True)
class CompactPoint:
    """A point of a compactified space; ``INFINITY`` sorts after every finite point.

    On the cylinder ``theta`` is stored in [0, 2*pi); on the line it is 0.
    """

    is_infinity: bool = False
    x: float = 0.0
    theta: float = 0.0

    @classmethod
    def line(cls, x: float) -> "CompactPoint":
        return cls(False, float(x), 0.0)

    @classmethod
    def cylinder(cls, x: float, theta: float) -> "CompactPoint":
        """A cylinder point; beyond ``CYLINDER_HORIZON`` it is the point at infinity."""
        x = float(x)
        if not abs(x) <= CYLINDER_HORIZON:
            return INFINITY
        return cls(False, x, wrap_angle(float(theta)))

    def to_json(self):
        if self.is_infinity:
            return "inf"
        return [self.x, self.theta]


INFINITY = CompactPoint(is_infinity=True)


def wrap_angle(theta):
    """Reduce angles into [0, 2*pi); works on floats and arrays."""
    w = np.mod(theta, TWO_PI)
    w = np.where(w >= TWO_PI, 0.0, w)
    if np.ndim(w) == 0:
        return float(w)
    return w


class SpaceMismatch(ValueError):
    pass


# --- scalar metrics --------------------------------------------------------


def dist_line(a: CompactPoint, b: CompactPoint) -> float:
    if a.is_infinity and b.is_infinity:
        return 0.0
    if a.is_infinity or b.is_infinity:
        x = b.x if a.is_infinity else a.x
        return 2.0 / math.hypot(1.0, x)
    ha = math.hypot(1.0, a.x)
    hb = math.hypot(1.0, b.x)
    # (x - y) / (ha * hb) without overflowing for huge |x|, |y|
    return 2.0 * abs(a.x / ha - b.x / ha) / hb


def _chi_zero(x: float) -> float:
    """Chordal distance from exp(x + i theta) to 0."""
    if x >= 0:
        e = math.exp(-2.0 * x)
        return 2.0 / math.sqrt(1.0 + e)
    e = math.exp(x)
    return 2.0 * e / math.sqrt(1.0 + e * e)


def _chi_inf(x: float) -> float:
    return _chi_zero(-x)


def _sphere(x: float, theta: float) -> tuple[float, float, float]:
    e = math.exp(-abs(x))
    sech = 2.0 * e / (1.0 + e * e)
    return sech * math.cos(theta), sech * math.sin(theta), math.tanh(x)


def _chi(a: CompactPoint, b: CompactPoint) -> float:
    pa = _sphere(a.x, a.theta)
    pb = _sphere(b.x, b.theta)
    return math.dist(pa, pb)


def dist_to_infinity_cylinder(x: float) -> float:
    return min(_chi_zero(x), _chi_inf(x))


def dist_cylinder(a: CompactPoint, b: CompactPoint) -> float:
    if a.is_infinity and b.is_infinity:
        return 0.0
    if a.is_infinity or b.is_infinity:
        p = b if a.is_infinity else a
        return dist_to_infinity_cylinder(p.x)
    return min(
        _chi(a, b),
        _chi_zero(a.x) + _chi_inf(b.x),
        _chi_inf(a.x) + _chi_zero(b.x),
    )


def distance(space: Space, a: CompactPoint, b: CompactPoint) -> float:
    if space is Space.LINE:
        return dist_line(a, b)
    if space is Space.CYLINDER:
        return dist_cylinder(a, b)
    raise SpaceMismatch(f"unknown space {space!r}")


# --- axiom checks ----------------------------------------------------------


@dataclass
class AxiomReport:
    space: Space
    n_points: int
    n_triples: int = 0
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def check_metric_axioms(space: Space, pts, tol: float = 1e-12) -> AxiomReport:
    """Check symmetry, identity of indiscernibles and the triangle inequality over all triples."""
    pts = list(pts)
    if len(pts) < 3:
        raise ValueError("need at least 3 points")
    n = len(pts)
    d = np.empty((n, n))
    for i, j in itertools.product(range(n), repeat=2):
        d[i, j] = distance(space, pts[i], pts[j])

    report = AxiomReport(space, n, n_triples=n**3)
    for i, j in zip(*np.nonzero(np.abs(d - d.T) > tol)):
        if i < j:
            report.violations.append(("symmetry", pts[i], pts[j], d[i, j], d[j, i]))
    for i in range(n):
        for j in range(n):
            same = pts[i] == pts[j]
            if same and d[i, j] > tol:
                report.violations.append(("identity", pts[i], pts[j], d[i, j]))
            elif not same and d[i, j] <= 0.0:
                report.violations.append(("separation", pts[i], pts[j], d[i, j]))
    # d[i,k] <= d[i,j] + d[j,k] for all i, j, k
    excess = d[:, None, :] - (d[:, :, None] + d[None, :, :]) - tol
    for i, j, k in zip(*np.nonzero(excess > 0)):
        report.violations.append(("triangle", pts[i], pts[j], pts[k], float(excess[i, j, k])))
    return report


# --- vectorised form -------------------------------------------------------


def embed(space: Space, x, theta=None) -> tuple[np.ndarray, np.ndarray]:
    """Embedded coordinates and distance-to-infinity for finite points.

    Returns ``(emb, dinf)``: ``emb`` has shape (n, 2) on the line (unit
    circle) and (n, 3) on the cylinder (unit sphere).
    """
    x = np.asarray(x, dtype=float)
    if space is Space.LINE:
        h = np.hypot(1.0, x)
        s = x / h
        c = 1.0 / h
        emb = np.stack([2.0 * s * c, (s - c) * (s + c)], axis=-1)
        return emb, 2.0 * c
    if space is Space.CYLINDER:
        theta = np.zeros_like(x) if theta is None else np.asarray(theta, dtype=float)
        e = np.exp(-np.abs(x))
        sech = 2.0 * e / (1.0 + e * e)
        emb = np.stack([sech * np.cos(theta), sech * np.sin(theta), np.tanh(x)], axis=-1)
        dinf = 2.0 * e / np.sqrt(1.0 + e * e)
        return emb, dinf
    raise SpaceMismatch(f"unknown space {space!r}")


def chord(emb_a: np.ndarray, emb_b: np.ndarray) -> np.ndarray:
    """Pairwise Euclidean distances, shape (len(a), len(b)).

    Written coordinate by coordinate so that any sub-block of a matrix is
    bit-identical to the same entries of the full matrix.
    """
    total = None
    for k in range(emb_a.shape[1]):
        diff = emb_a[:, None, k] - emb_b[None, :, k]
        # hypot rather than sqrt of squares: tiny separations must not underflow to 0
        total = np.abs(diff) if total is None else np.hypot(total, diff)
    return total


def pairwise(space: Space, emb_a, dinf_a, emb_b, dinf_b) -> np.ndarray:
    """Compact-metric distances between finite points of two packed clouds."""
    d = chord(emb_a, emb_b)
    if space is Space.CYLINDER:
        d = np.minimum(d, dinf_a[:, None] + dinf_b[None, :])
    return d
