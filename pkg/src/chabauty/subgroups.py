"""Closed subgroups of R and of C* (as closed subgroups of C containing 2*pi*i).

Every value here is an immutable, canonical parametrisation of one closed
subgroup.  Floating parameters compare with ``FLOAT_TOL``; exact rational
data lives in :class:`fractions.Fraction`.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Union

TWO_PI = 2.0 * math.pi
FLOAT_TOL = 1e-9


class IsoType(enum.Enum):
    TRIVIAL = "0"
    Z = "Z"
    Z2 = "Z2"
    R = "R"
    Z_X_R = "ZxR"
    C = "C"


# --- subgroups of R --------------------------------------------------------


@dataclass(frozen=True)
class Trivial:
    """The trivial subgroup {0}."""


@dataclass(frozen=True)
class Cyclic:
    """r*Z with r > 0."""

    r: float

    def __post_init__(self):
        if not self.r > 0 or math.isinf(self.r):
            raise ValueError(f"cyclic generator must be finite and > 0, got {self.r!r}")


@dataclass(frozen=True)
class FullLine:
    """R itself."""


RSubgroup = Union[Trivial, Cyclic, FullLine]


def r_subgroup(r: float) -> RSubgroup:
    """Subgroup generated by ``r``; the generator is stored positive and r=0 is trivial."""
    r = abs(float(r))
    if r == 0.0:
        return Trivial()
    return Cyclic(r)


# --- subgroups of C containing 2*pi*i --------------------------------------


def imaginary_period(m: int) -> float:
    return TWO_PI / m


def _check_m(m) -> int:
    if isinstance(m, bool) or not isinstance(m, int):
        raise TypeError(f"m must be an integer, got {m!r}")
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    return m


@dataclass(frozen=True)
class Discrete:
    """(2*pi/m) i Z."""

    m: int
    family = "A"

    def __post_init__(self):
        _check_m(self.m)


@dataclass(frozen=True)
class Lattice:
    """z Z + (2*pi/m) i Z, with Re z > 0 and Im z in [0, 2*pi/m).

    Build through :func:`canonicalize_b` unless ``z`` is already canonical.
    """

    m: int
    z: complex
    family = "B"

    def __post_init__(self):
        _check_m(self.m)
        if not self.z.real > 0 or not math.isfinite(self.z.real):
            raise ValueError(f"lattice generator needs 0 < Re z < inf, got {self.z!r}")
        if not 0.0 <= self.z.imag < imaginary_period(self.m):
            raise ValueError(f"Im z={self.z.imag!r} outside [0, 2pi/{self.m}); use canonicalize_b")


@dataclass(frozen=True)
class VerticalLines:
    """x Z + i R with x > 0."""

    x: float
    family = "C"

    def __post_init__(self):
        if not self.x > 0 or math.isinf(self.x):
            raise ValueError(f"line spacing must be finite and > 0, got {self.x!r}")


@dataclass(frozen=True)
class SlantedLines:
    """(2*pi/m) i Z + (1 + i t) R: m parallel lines of slope t on the cylinder."""

    m: int
    t: float
    family = "D"

    def __post_init__(self):
        _check_m(self.m)
        if not math.isfinite(self.t):
            raise ValueError(f"slope must be finite, got {self.t!r}")


@dataclass(frozen=True)
class ImaginaryAxis:
    """i R (the m=0 member of the discrete family)."""

    family = "Cinf"


@dataclass(frozen=True)
class WholePlane:
    """C."""

    family = "Full"


CStarSubgroup = Union[Discrete, Lattice, VerticalLines, SlantedLines, ImaginaryAxis, WholePlane]


def discrete(m: int) -> CStarSubgroup:
    if _check_m_allow_zero(m) == 0:
        return ImaginaryAxis()
    return Discrete(m)


def slanted(m: int, t: float) -> CStarSubgroup:
    if _check_m_allow_zero(m) == 0:
        # i R + (1+it) R spans the plane
        return WholePlane()
    return SlantedLines(m, float(t))


def _check_m_allow_zero(m) -> int:
    if m == 0 and not isinstance(m, bool):
        return 0
    return _check_m(m)


def _wrap(y: float, period: float) -> float:
    w = y % period
    # float modulo can round up to the period itself
    if w >= period:
        w = 0.0
    return w


def canonicalize_b(m: int, z: complex) -> CStarSubgroup:
    """Canonical form of z Z + (2*pi/m) i Z: Im z reduced into [0, 2*pi/m).

    ``m == 0`` means the imaginary part is all of i R, giving vertical lines.
    """
    z = complex(z)
    if not z.real > 0:
        raise ValueError(f"Re z must be > 0, got {z!r}")
    if _check_m_allow_zero(m) == 0:
        return VerticalLines(z.real)
    y = _wrap(z.imag, imaginary_period(m))
    return Lattice(m, complex(z.real, y))


def subgroups_equal(a, b, tol: float = FLOAT_TOL) -> bool:
    """Set equality of two canonical subgroup values."""
    if type(a) is not type(b):
        return False
    if isinstance(a, (Trivial, FullLine, ImaginaryAxis, WholePlane)):
        return True
    if isinstance(a, Cyclic):
        return abs(a.r - b.r) <= tol
    if isinstance(a, Discrete):
        return a.m == b.m
    if isinstance(a, VerticalLines):
        return abs(a.x - b.x) <= tol
    if isinstance(a, SlantedLines):
        return a.m == b.m and abs(a.t - b.t) <= tol
    if isinstance(a, Lattice):
        if a.m != b.m or abs(a.z.real - b.z.real) > tol:
            return False
        period = imaginary_period(a.m)
        dy = abs(a.z.imag - b.z.imag) % period
        return min(dy, period - dy) <= tol
    raise TypeError(f"not a subgroup value: {a!r}")


def _nearest_multiple_gap(y: float, period: float) -> float:
    return abs(y - period * round(y / period))


def distance_to(g, w) -> float:
    """Euclidean distance from ``w`` to the subgroup ``g`` (in R or C)."""
    if isinstance(g, Trivial):
        return abs(w)
    if isinstance(g, Cyclic):
        return _nearest_multiple_gap(float(w), g.r)
    if isinstance(g, FullLine):
        return 0.0

    w = complex(w)
    u, v = w.real, w.imag
    if isinstance(g, WholePlane):
        return 0.0
    if isinstance(g, ImaginaryAxis):
        return abs(u)
    if isinstance(g, VerticalLines):
        return _nearest_multiple_gap(u, g.x)
    if isinstance(g, Discrete):
        return math.hypot(u, _nearest_multiple_gap(v, imaginary_period(g.m)))
    if isinstance(g, SlantedLines):
        resid = v - g.t * u
        return _nearest_multiple_gap(resid, imaginary_period(g.m)) / math.hypot(1.0, g.t)
    if isinstance(g, Lattice):
        return _lattice_distance(g, u, v)
    raise TypeError(f"not a subgroup value: {g!r}")


def _lattice_distance(g: Lattice, u: float, v: float) -> float:
    # Each column a*z + (2pi/m) i Z is a 1D lattice; walk outwards from the
    # nearest column until the horizontal gap alone exceeds the best distance.
    x, y = g.z.real, g.z.imag
    period = imaginary_period(g.m)
    a0 = round(u / x)
    best = math.inf
    for direction in (1, -1):
        a = a0 if direction == 1 else a0 - 1
        while True:
            dx = abs(u - a * x)
            if dx > best:
                break
            d = math.hypot(dx, _nearest_multiple_gap(v - a * y, period))
            best = min(best, d)
            a += direction
    return best


def contains(g, w, tol: float = 0.0) -> bool:
    if tol < 0:
        raise ValueError("tol must be >= 0")
    return distance_to(g, w) <= tol


def classify_isomorphism_type(g) -> IsoType:
    if isinstance(g, Trivial):
        return IsoType.TRIVIAL
    if isinstance(g, (Cyclic, Discrete)):
        return IsoType.Z
    if isinstance(g, Lattice):
        return IsoType.Z2
    if isinstance(g, (FullLine, ImaginaryAxis)):
        return IsoType.R
    if isinstance(g, (VerticalLines, SlantedLines)):
        return IsoType.Z_X_R
    if isinstance(g, WholePlane):
        return IsoType.C
    raise TypeError(f"not a subgroup value: {g!r}")


def is_cstar(g) -> bool:
    return isinstance(g, (Discrete, Lattice, VerticalLines, SlantedLines, ImaginaryAxis, WholePlane))


# --- JSON ------------------------------------------------------------------

def to_json(g) -> dict:
    if isinstance(g, Trivial):
        return {"family": "Trivial"}
    if isinstance(g, Cyclic):
        return {"family": "Cyclic", "r": g.r}
    if isinstance(g, FullLine):
        return {"family": "Line"}
    if isinstance(g, Discrete):
        return {"family": "A", "m": g.m}
    if isinstance(g, Lattice):
        return {"family": "B", "m": g.m, "z": [g.z.real, g.z.imag]}
    if isinstance(g, VerticalLines):
        return {"family": "C", "x": g.x}
    if isinstance(g, SlantedLines):
        return {"family": "D", "m": g.m, "t": g.t}
    if isinstance(g, ImaginaryAxis):
        return {"family": "Cinf"}
    if isinstance(g, WholePlane):
        return {"family": "Full"}
    raise TypeError(f"not a subgroup value: {g!r}")


def from_json(obj: dict):
    family = obj.get("family")
    try:
        if family == "Trivial":
            return Trivial()
        if family == "Cyclic":
            return r_subgroup(obj["r"])
        if family == "Line":
            return FullLine()
        if family == "A":
            return discrete(int(obj["m"]))
        if family == "B":
            re, im = obj["z"]
            return canonicalize_b(int(obj["m"]), complex(float(re), float(im)))
        if family == "C":
            return VerticalLines(float(obj["x"]))
        if family == "D":
            return slanted(int(obj["m"]), float(obj["t"]))
        if family == "Cinf":
            return ImaginaryAxis()
        if family == "Full":
            return WholePlane()
    except KeyError as exc:
        raise ValueError(f"subgroup family {family!r} is missing field {exc}") from None
    raise ValueError(f"unknown subgroup family {family!r}")
