"""Symbolic limits of parametric sequences of closed subgroups.

A :class:`SequenceSpec` names a family and where its parameters go; the
classifier returns the limiting subgroup.  Rationality of the limiting angle
is arithmetic data: it must be given as an exact ``Fraction`` or as an
explicit :class:`Irrational` mark, never inferred from a float.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Union

from chabauty import subgroups as sg
from chabauty.cloud import format_real
from chabauty.hausdorff import HausdorffResult, hausdorff_bound_true_sets
from chabauty.sampler import sample

INF = math.inf
GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


class UnderdeterminedSequence(ValueError):
    """The limit depends on data the spec does not pin down."""


class UnsupportedSequence(ValueError):
    """A combination of parameter limits outside the known convergence results."""


@dataclass(frozen=True)
class Irrational:
    """Marks an irrational angle; ``approx`` is only used to instantiate sequences."""

    approx: float = GOLDEN


IRRATIONAL = Irrational()

Angle = Union[Fraction, float, Irrational]


@dataclass(frozen=True)
class RSeq:
    r_limit: float


@dataclass(frozen=True)
class ASeq:
    m_limit: Union[int, float]


@dataclass(frozen=True)
class BSeq:
    """z_n = x_n + 2*pi*i*theta_n with x_n -> re_limit and theta_n -> theta.

    ``t_limit`` is the limit of the slopes 2*pi*(theta_n - theta)/x_n; it is
    only consulted when re_limit is 0 and theta is rational.
    """

    m_limit: Union[int, float]
    re_limit: float
    theta: Angle = Fraction(0)
    t_limit: Optional[float] = None


@dataclass(frozen=True)
class CSeq:
    x_limit: float


@dataclass(frozen=True)
class DSeq:
    m_limit: Union[int, float]
    t_limit: float


SequenceSpec = Union[RSeq, ASeq, BSeq, CSeq, DSeq]


@dataclass(frozen=True)
class ChabautyLimit:
    subgroup: object
    rule: str


# --- arithmetic ------------------------------------------------------------


def lcm_rule(m: int, p: int, q: int) -> int:
    """Number of slanted lines in the limit of lattices pinching at theta = p/q."""
    if m < 1 or q < 1:
        raise ValueError("m and q must be positive")
    if math.gcd(p, q) != 1:
        raise ValueError(f"p={p} and q={q} are not coprime")
    lines = m * q // math.gcd(p * m, q)
    expected = math.lcm(m, q)
    assert lines == expected, (m, p, q)
    return expected


def slope_sequence(x_n: float, theta_n: float, theta: Fraction) -> float:
    """2*pi*(theta_n - theta)/x_n, the slope of the line through 0 and q*z_n - 2*pi*i*p."""
    if not x_n > 0:
        raise ValueError(f"x_n must be > 0, got {x_n!r}")
    # exact difference: theta stays rational until the last step
    return 2.0 * math.pi * float(Fraction(theta_n) - Fraction(theta)) / x_n


def normalize_angle(theta: Angle) -> Angle:
    """Reduce an angle (in turns) into [0, 1)."""
    if isinstance(theta, Irrational):
        return Irrational(theta.approx % 1.0)
    if isinstance(theta, Fraction):
        return theta % 1
    return float(theta) % 1.0


def angle_value(theta: Angle) -> float:
    if isinstance(theta, Irrational):
        return theta.approx
    return float(theta)


# --- classification --------------------------------------------------------


def _m_limit(m) -> Union[int, float]:
    if m == INF:
        return INF
    if isinstance(m, float) and m.is_integer():
        m = int(m)
    if not isinstance(m, int) or isinstance(m, bool) or m < 0:
        raise ValueError(f"m limit must be a nonnegative integer or inf, got {m!r}")
    return m


def _nonneg(v: float, name: str) -> float:
    v = float(v)
    if math.isnan(v) or v < 0:
        raise ValueError(f"{name} must lie in [0, inf], got {v!r}")
    return v


def classify_limit_r(s: RSeq) -> ChabautyLimit:
    r = _nonneg(s.r_limit, "r limit")
    if r == 0:
        return ChabautyLimit(sg.FullLine(), "G_r, r -> 0: the whole line")
    if r == INF:
        return ChabautyLimit(sg.Trivial(), "G_r, r -> inf: {0}")
    return ChabautyLimit(sg.Cyclic(r), "G_r, r -> r*: G_r*")


def classify_limit_cstar(s: SequenceSpec) -> ChabautyLimit:
    if isinstance(s, ASeq):
        m = _m_limit(s.m_limit)
        if m == INF or m == 0:
            return ChabautyLimit(sg.ImaginaryAxis(), "A^m, m -> inf: iR")
        return ChabautyLimit(sg.Discrete(m), "A^m, m -> m*: A^m*")

    if isinstance(s, CSeq):
        x = _nonneg(s.x_limit, "x limit")
        if x == 0:
            return ChabautyLimit(sg.WholePlane(), "C_x, x -> 0: C")
        if x == INF:
            return ChabautyLimit(sg.ImaginaryAxis(), "C_x, x -> inf: iR")
        return ChabautyLimit(sg.VerticalLines(x), "C_x, x -> x*: C_x*")

    if isinstance(s, DSeq):
        m = _m_limit(s.m_limit)
        t = float(s.t_limit)
        if math.isnan(t):
            raise ValueError("t limit must be a number or +-inf")
        if m == INF:
            return ChabautyLimit(sg.WholePlane(), "D_t^m, m -> inf: C")
        if math.isinf(t):
            return ChabautyLimit(sg.WholePlane(), "D_t^m, t -> +-inf: C")
        return ChabautyLimit(sg.slanted(m, t), "D_t^m, (m, t) -> (m*, t*): D_t*^m*")

    if isinstance(s, BSeq):
        return _classify_b(s)

    if isinstance(s, RSeq):
        raise TypeError("RSeq describes subgroups of R; use classify_limit_r")
    raise TypeError(f"not a sequence spec: {s!r}")


def _classify_b(s: BSeq) -> ChabautyLimit:
    m = _m_limit(s.m_limit)
    x = _nonneg(s.re_limit, "Re limit")
    theta = normalize_angle(s.theta)

    if m == INF:
        if 0 < x < INF:
            return ChabautyLimit(sg.VerticalLines(x), "B_z^m, m -> inf, Re z -> x: C_x")
        raise UnsupportedSequence("m_n -> inf together with Re z_n -> 0 or inf is not covered")
    if m == 0:
        raise ValueError("lattice sequences need m >= 1")

    if x == INF:
        return ChabautyLimit(sg.Discrete(m), "B_z^m, Re z -> inf: A^m")
    if x > 0:
        z = complex(x, 2.0 * math.pi * angle_value(theta))
        return ChabautyLimit(sg.canonicalize_b(m, z), "B_z^m, z -> z*: B_z*^m")

    # Re z_n -> 0
    if isinstance(theta, Irrational):
        return ChabautyLimit(sg.WholePlane(), "B_z^m, Re z -> 0, theta irrational: C")
    if not isinstance(theta, Fraction):
        raise UnderdeterminedSequence(
            "Re z -> 0 needs theta as an exact Fraction or an Irrational mark, not a float"
        )
    if s.t_limit is None:
        raise UnderdeterminedSequence(
            f"Re z -> 0 with theta = {theta}: the limit depends on the slope limit t_limit"
        )
    t = float(s.t_limit)
    if math.isnan(t):
        raise UnderdeterminedSequence("slope sequence has no limit")
    if math.isinf(t):
        return ChabautyLimit(sg.WholePlane(), "B_z^m, Re z -> 0, theta = p/q, t -> +-inf: C")
    lines = lcm_rule(m, theta.numerator, theta.denominator)
    return ChabautyLimit(
        sg.SlantedLines(lines, t), "B_z^m, Re z -> 0, theta = p/q, t -> t*: D_t*^lcm(m,q)"
    )


def classify(s: SequenceSpec) -> ChabautyLimit:
    if isinstance(s, RSeq):
        return classify_limit_r(s)
    return classify_limit_cstar(s)


# --- concrete schedules ----------------------------------------------------


@dataclass(frozen=True)
class Schedule:
    """Parameter schedules: a/n^k towards finite limits, a*n^k towards infinity."""

    a: float = 1.0
    k: float = 1.0

    def small(self, n: int) -> float:
        return self.a / n**self.k

    def large(self, n: int) -> float:
        return self.a * n**self.k


def _towards(limit: float, n: int, sched: Schedule) -> float:
    if limit == INF:
        return sched.large(n)
    if limit == -INF:
        return -sched.large(n)
    return limit + sched.small(n)


def _m_at(m_limit, n: int, sched: Schedule) -> int:
    if m_limit == INF:
        return max(1, round(sched.large(n)))
    return int(m_limit)


def instantiate(s: SequenceSpec, n: int, sched: Schedule = Schedule()):
    """The n-th subgroup of the sequence under ``sched``."""
    if isinstance(s, RSeq):
        return sg.r_subgroup(_towards(_nonneg(s.r_limit, "r limit"), n, sched))
    if isinstance(s, ASeq):
        m = _m_limit(s.m_limit)
        return sg.discrete(_m_at(m, n, sched))
    if isinstance(s, CSeq):
        return sg.VerticalLines(_towards(_nonneg(s.x_limit, "x limit"), n, sched))
    if isinstance(s, DSeq):
        m = _m_limit(s.m_limit)
        t = float(s.t_limit)
        t_n = t if m == INF and math.isfinite(t) else _towards(t, n, sched)
        return sg.slanted(_m_at(m, n, sched), t_n)
    if isinstance(s, BSeq):
        return _instantiate_b(s, n, sched)
    raise TypeError(f"not a sequence spec: {s!r}")


def _instantiate_b(s: BSeq, n: int, sched: Schedule):
    classify_limit_cstar(s)  # rejects underdetermined specs up front
    m = _m_limit(s.m_limit)
    x = _nonneg(s.re_limit, "Re limit")
    theta = normalize_angle(s.theta)
    x_n = _towards(x, n, sched)
    theta_n = angle_value(theta)
    if x == 0 and isinstance(theta, Fraction):
        t = float(s.t_limit)
        if math.isfinite(t):
            # constant slope sequence t_n = t
            theta_n += t * x_n / (2.0 * math.pi)
        else:
            theta_n += math.copysign(math.sqrt(x_n), t) / (2.0 * math.pi)
    z_n = complex(x_n, 2.0 * math.pi * theta_n)
    return sg.canonicalize_b(_m_at(m, n, sched), z_n)


# --- numerical convergence -------------------------------------------------


@dataclass(frozen=True)
class DecayRow:
    n: int
    subgroup: object
    result: HausdorffResult
    cover_n: float
    cover_limit: float

    @property
    def value(self) -> float:
        return self.result.value

    @property
    def floor(self) -> float:
        return self.cover_n + self.cover_limit


@dataclass
class DecayTable:
    spec: SequenceSpec
    limit: ChabautyLimit
    R: float
    delta: float
    rows: list = field(default_factory=list)

    @property
    def values(self) -> list[float]:
        return [r.value for r in self.rows]

    def to_csv(self) -> str:
        lines = ["n,d_hausdorff,interval_lo,interval_hi"]
        for r in self.rows:
            lo, hi = r.result.interval
            lines.append(f"{r.n},{format_real(r.value)},{format_real(lo)},{format_real(hi)}")
        return "\n".join(lines) + "\n"

    def decays(self, floor_factor: float = 1.0) -> bool:
        """Non-increasing along n, except for steps that land on the sampling floor."""
        for prev, cur in zip(self.rows, self.rows[1:]):
            if cur.value > prev.value and cur.value > floor_factor * cur.floor:
                return False
        return True


def verify_convergence(
    s: SequenceSpec,
    n_values,
    R: float,
    delta: float,
    sched: Schedule = Schedule(),
    method: str = "auto",
    workers: int = 1,
) -> DecayTable:
    """Hausdorff distances between the n-th term and the classified limit, per n."""
    limit = classify(s)
    limit_sample = sample(limit.subgroup, R, delta)

    def one(n: int) -> DecayRow:
        g = instantiate(s, n, sched)
        term = sample(g, R, delta)
        res = hausdorff_bound_true_sets(term, limit_sample, method)
        return DecayRow(n, g, res, term.covering_radius, limit_sample.covering_radius)

    n_values = list(n_values)
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            rows = list(pool.map(one, n_values))
    else:
        rows = [one(n) for n in n_values]
    return DecayTable(s, limit, R, delta, rows)


# --- JSON ------------------------------------------------------------------


def parse_extended(v) -> float:
    if isinstance(v, str):
        key = v.strip().lower()
        if key in ("inf", "+inf", "infinity", "+infinity"):
            return INF
        if key in ("-inf", "-infinity"):
            return -INF
        raise ValueError(f"not an extended real: {v!r}")
    return float(v)


def format_extended(v):
    if v == INF:
        return "inf"
    if v == -INF:
        return "-inf"
    return v


def parse_angle(v) -> Angle:
    if isinstance(v, dict):
        if "irrational" not in v:
            raise ValueError(f"bad angle {v!r}")
        return Irrational(float(v["irrational"]))
    if isinstance(v, str):
        if v.strip().lower() == "irrational":
            return IRRATIONAL
        return Fraction(v)
    if isinstance(v, int):
        return Fraction(v)
    return float(v)


def format_angle(theta: Angle):
    if isinstance(theta, Irrational):
        return {"irrational": theta.approx}
    if isinstance(theta, Fraction):
        return f"{theta.numerator}/{theta.denominator}"
    return theta


def _m_json(v):
    v = parse_extended(v) if isinstance(v, str) else v
    return INF if v == INF else int(v)


def spec_from_json(obj: dict) -> SequenceSpec:
    family = obj.get("family")
    try:
        if family == "R":
            return RSeq(parse_extended(obj["r_limit"]))
        if family == "A":
            return ASeq(_m_json(obj["m_limit"]))
        if family == "B":
            t = obj.get("t_limit")
            return BSeq(
                _m_json(obj["m_limit"]),
                parse_extended(obj["re_limit"]),
                parse_angle(obj.get("theta", "0")),
                None if t is None else parse_extended(t),
            )
        if family == "C":
            return CSeq(parse_extended(obj["x_limit"]))
        if family == "D":
            return DSeq(_m_json(obj["m_limit"]), parse_extended(obj["t_limit"]))
    except KeyError as exc:
        raise ValueError(f"sequence family {family!r} is missing field {exc}") from None
    raise ValueError(f"unknown sequence family {family!r}")


def spec_to_json(s: SequenceSpec) -> dict:
    if isinstance(s, RSeq):
        return {"family": "R", "r_limit": format_extended(s.r_limit)}
    if isinstance(s, ASeq):
        return {"family": "A", "m_limit": format_extended(s.m_limit)}
    if isinstance(s, BSeq):
        out = {
            "family": "B",
            "m_limit": format_extended(s.m_limit),
            "re_limit": format_extended(s.re_limit),
            "theta": format_angle(s.theta),
        }
        if s.t_limit is not None:
            out["t_limit"] = format_extended(s.t_limit)
        return out
    if isinstance(s, CSeq):
        return {"family": "C", "x_limit": format_extended(s.x_limit)}
    if isinstance(s, DSeq):
        return {"family": "D", "m_limit": format_extended(s.m_limit), "t_limit": format_extended(s.t_limit)}
    raise TypeError(f"not a sequence spec: {s!r}")
