"""SVG figures: subgroups of R on the compactified line, the D-bouquet,
the pinching at a rational boundary point, the m-th layer, the global
schematic of the space of closed subgroups of C*, and decay curves.

Coordinates are in SVG user units with y pointing down.  Layout constants
are module-level names; every numeric annotation (petal indices, limits)
is computed by the classifier at render time.
"""

from __future__ import annotations

import math
from fractions import Fraction
from xml.sax.saxutils import escape

from chabauty import __version__
from chabauty import subgroups as sg
from chabauty.limits import BSeq, DSeq, classify_limit_cstar
from chabauty.metric import Space, embed

# layout constants
PANEL = 240.0  # panel width and height
MARGIN = 20.0
CIRCLE_RADIUS = 90.0  # compactified line drawn as a circle of this radius
DOT_RADIUS = 1.6
BOUQUET_WEDGE = (200.0, 40.0)  # wedge point of the D-bouquet
BOUQUET_RADIUS = 150.0  # radius of the m=1 petal; petal m has radius BOUQUET_RADIUS/m
LAYER_EDGE_HEIGHT = 260.0  # left boundary of a layer (one period of Im z)
LAYER_LENGTH = 320.0  # distance from the left boundary to the cone point
LAYER_CONE_HEIGHT = 0.0  # right end collapses to a point
LINE_POINTS_RADIUS = 100.0  # truncation radius for the dots of G_r

RED = "#c0392b"
ORANGE = "#e67e22"
GREY = "#bbbbbb"
BLACK = "#000000"


def _f(v: float) -> str:
    s = f"{v:.3f}".rstrip("0").rstrip(".")
    return "0" if s in ("-0", "") else s


class Svg:
    def __init__(self, width: float, height: float, kind: str):
        self.width = width
        self.height = height
        self.kind = kind
        self.items: list[str] = []

    def circle(self, cx, cy, r, stroke=BLACK, fill="none", width=1.0):
        self.items.append(
            f'<circle cx="{_f(cx)}" cy="{_f(cy)}" r="{_f(r)}" fill="{fill}" '
            f'stroke="{stroke}" stroke-width="{_f(width)}"/>'
        )

    def dot(self, cx, cy, r=DOT_RADIUS, fill=BLACK):
        self.items.append(f'<circle cx="{_f(cx)}" cy="{_f(cy)}" r="{_f(r)}" fill="{fill}"/>')

    def line(self, x1, y1, x2, y2, stroke=BLACK, width=1.0, dash=None):
        extra = f' stroke-dasharray="{dash}"' if dash else ""
        self.items.append(
            f'<line x1="{_f(x1)}" y1="{_f(y1)}" x2="{_f(x2)}" y2="{_f(y2)}" '
            f'stroke="{stroke}" stroke-width="{_f(width)}"{extra}/>'
        )

    def polyline(self, pts, stroke=BLACK, width=1.0, fill="none"):
        coords = " ".join(f"{_f(x)},{_f(y)}" for x, y in pts)
        self.items.append(
            f'<polyline points="{coords}" fill="{fill}" stroke="{stroke}" stroke-width="{_f(width)}"/>'
        )

    def polygon(self, pts, stroke=BLACK, fill="none", width=1.0, opacity=1.0):
        coords = " ".join(f"{_f(x)},{_f(y)}" for x, y in pts)
        self.items.append(
            f'<polygon points="{coords}" fill="{fill}" fill-opacity="{_f(opacity)}" '
            f'stroke="{stroke}" stroke-width="{_f(width)}"/>'
        )

    def text(self, x, y, s, size=12, anchor="middle", fill=BLACK, cls=None):
        klass = f' class="{cls}"' if cls else ""
        self.items.append(
            f'<text x="{_f(x)}" y="{_f(y)}" font-size="{size}" text-anchor="{anchor}" '
            f'fill="{fill}"{klass}>{escape(s)}</text>'
        )

    def render(self) -> str:
        head = (
            f"<!-- chabauty {__version__} figure: {self.kind} -->\n"
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{_f(self.width)}" '
            f'height="{_f(self.height)}" viewBox="0 0 {_f(self.width)} {_f(self.height)}">\n'
            f'<rect x="0" y="0" width="{_f(self.width)}" height="{_f(self.height)}" fill="#ffffff"/>\n'
        )
        return head + "\n".join(self.items) + "\n</svg>\n"


def _fmt_param(v: float) -> str:
    frac = Fraction(v).limit_denominator(1000)
    if abs(float(frac) - v) < 1e-12:
        return str(frac)
    return f"{v:g}"


# --- subgroups of R on the compactified line --------------------------------


def line_points_svg(r_values, R: float = LINE_POINTS_RADIUS) -> str:
    """One panel per r: the dots of r*Z (|kr| <= R) on the circle R u {inf}."""
    r_values = [float(r) for r in r_values]
    if not r_values or any(r <= 0 for r in r_values):
        raise ValueError("need at least one positive r")
    svg = Svg(PANEL * len(r_values), PANEL + 30, "line-points")
    for i, r in enumerate(r_values):
        cx = PANEL * i + PANEL / 2
        cy = PANEL / 2 + 10
        svg.circle(cx, cy, CIRCLE_RADIUS, stroke=GREY)
        n = math.floor(R / r)
        emb, _ = embed(Space.LINE, [k * r for k in range(-n, n + 1)])
        for ex, ey in emb:
            svg.dot(cx + CIRCLE_RADIUS * ex, cy - CIRCLE_RADIUS * ey)
        svg.dot(cx, cy - CIRCLE_RADIUS, r=DOT_RADIUS * 1.8, fill=RED)
        svg.text(cx, cy - CIRCLE_RADIUS - 8, "∞", fill=RED)
        svg.text(cx, cy + CIRCLE_RADIUS + 16, "0")
        svg.text(cx, PANEL + 22, f"G_r, r = {_fmt_param(r)}", size=14, cls="caption")
    return svg.render()


# --- the D-bouquet ------------------------------------------------------------


def bouquet_point(m: int, t: float) -> tuple[float, float]:
    """Position of D_t^m on petal m; t = +-inf is the wedge point."""
    wx, wy = BOUQUET_WEDGE
    rho = BOUQUET_RADIUS / m
    psi = math.pi - 2.0 * math.atan(t) if math.isfinite(t) else 0.0
    return wx + rho * math.sin(psi), wy + rho - rho * math.cos(psi)


def d_bouquet_svg(m_max: int) -> str:
    if m_max < 1:
        raise ValueError("the bouquet needs m_max >= 1")
    wx, wy = BOUQUET_WEDGE
    svg = Svg(2 * wx, wy + 2 * BOUQUET_RADIUS + 40, "d-bouquet")
    for m in range(1, m_max + 1):
        rho = BOUQUET_RADIUS / m
        svg.circle(wx, wy + rho, rho)
        # t = 0 sits opposite the wedge
        bx, by = bouquet_point(m, 0.0)
        lim = classify_limit_cstar(DSeq(m, 0.0)).subgroup
        svg.text(bx, by + 14, f"D^{lim.m}", size=11, cls="petal")
        for t in (-1.0, 1.0):
            px, py = bouquet_point(m, t)
            svg.dot(px, py, r=1.2)
    wedge = classify_limit_cstar(DSeq(1, math.inf)).subgroup
    svg.dot(wx, wy, r=3.0, fill=RED)
    svg.text(wx, wy - 8, "C" if isinstance(wedge, sg.WholePlane) else "?", fill=RED, cls="wedge")
    return svg.render()


# --- pinching ------------------------------------------------------------------


def pinching_svg(p: int = 1, q: int = 2, m: int = 1) -> str:
    """Four panels: a rational boundary point, its blow-up to a segment of
    slopes, the endpoints drawn together, and the pinched circle."""
    theta = Fraction(p, q)
    lim = classify_limit_cstar(BSeq(m, 0.0, theta, 0.0)).subgroup
    ends = classify_limit_cstar(BSeq(m, 0.0, theta, math.inf)).subgroup
    petal = f"D^{lim.m}"
    end_label = "C" if isinstance(ends, sg.WholePlane) else "?"

    svg = Svg(4 * PANEL, PANEL + 30, "pinching")
    top, bottom = 30.0, PANEL - 10
    y0 = bottom - (bottom - top) * float(theta % 1)
    for i in range(4):
        left = PANEL * i + 40
        svg.line(left, top, left, bottom, stroke=GREY, width=2)
        svg.line(left, top, left + 150, top, stroke=GREY, dash="4,3")
        svg.line(left, bottom, left + 150, bottom, stroke=GREY, dash="4,3")
    svg.text(PANEL * 0 + 40, y0 + 4, "●", fill=RED)
    svg.text(PANEL * 0 + 50, y0 - 8, f"2iπ·{theta}", anchor="start", size=11)

    # blow-up: a segment of slopes t in [-inf, inf]; rays of constant slope
    left = PANEL + 40
    half = 60.0
    svg.line(left, y0 - half, left, y0 + half, stroke=RED, width=3)
    for t in (-3.0, -1.0, -0.3, 0.0, 0.3, 1.0, 3.0):
        yy = y0 - half * (2.0 / math.pi) * math.atan(t)
        svg.line(left, yy, left + 120, yy - 40 * t / math.hypot(1, t), stroke=ORANGE)
    svg.text(left - 6, y0 - half, "t=+∞", anchor="end", size=10)
    svg.text(left - 6, y0 + half + 8, "t=-∞", anchor="end", size=10)

    # endpoints drawn together
    left = 2 * PANEL + 40
    arc = [
        (left + 45 * (1 - math.cos(a)), y0 - half * 0.8 * math.sin(a) * 1.2)
        for a in (math.pi * (j / 24 * 1.6 - 0.8) for j in range(25))
    ]
    svg.polyline(arc, stroke=RED, width=3)

    # pinched
    left = 3 * PANEL + 40
    svg.circle(left + 45, y0, 45, stroke=RED, width=3)
    svg.dot(left, y0, r=3.0, fill=BLACK)
    svg.text(left - 6, y0 + 4, end_label, anchor="end", cls="wedge")
    svg.text(left + 45, y0 + 4, petal, size=13, cls="petal")

    svg.text(2 * PANEL, PANEL + 22, f"theta = {theta}, m = {m}: the circle is the petal {petal}", size=14)
    return svg.render()


# --- layers --------------------------------------------------------------------


def layer_marks(m: int, q_max: int) -> list[tuple[Fraction, int]]:
    """Rational boundary points 2i*pi*p/q (q <= q_max) of the m-th layer and their petals.

    One period of Im z for lattices with m-fold imaginary period is
    [0, 2pi/m), so the marks are the reduced p/q in [0, 1/m).
    """
    if m < 1 or q_max < 1:
        raise ValueError("need m >= 1 and q_max >= 1")
    thetas = sorted(
        {Fraction(p, q) for q in range(1, q_max + 1) for p in range(q) if Fraction(p, q) < Fraction(1, m)}
    )
    marks = []
    for theta in thetas:
        lim = classify_limit_cstar(BSeq(m, 0.0, theta, 0.0)).subgroup
        marks.append((theta, lim.m))
    return marks


def _draw_layer(svg: Svg, m: int, q_max: int, left: float, top: float, scale: float = 1.0):
    h = LAYER_EDGE_HEIGHT * scale
    length = LAYER_LENGTH * scale
    bottom = top + h
    apex = (left + length, top + h / 2)
    svg.polygon([(left, top), apex, (left, bottom)], stroke=BLACK, fill="#eef3fb")
    # irrational boundary points all go to C
    svg.polygon([(left - 8, top), (left, top), (left, bottom), (left - 8, bottom)], fill=GREY, stroke="none", opacity=0.6)
    svg.text(left - 12, top + h / 2, "C", anchor="end", size=12, cls="irrational")
    cone = classify_limit_cstar(BSeq(m, math.inf, Fraction(0))).subgroup
    svg.dot(*apex, r=3.0)
    svg.text(apex[0] + 6, apex[1] + 4, f"A^{cone.m}", anchor="start", size=12, cls="cone")
    for theta, petal in layer_marks(m, q_max):
        y = bottom - h * float(theta) * m
        svg.line(left, y, left + 10, y, stroke=RED, width=2)
        svg.text(left + 14, y + 4, f"{theta} → D^{petal}", anchor="start", size=10, cls="mark")
    svg.text(left + length / 2, bottom + 18, f"L_{m}", size=14, cls="caption")


def layer_svg(m: int, q_max: int) -> str:
    svg = Svg(LAYER_LENGTH + 120, LAYER_EDGE_HEIGHT + 60, "layer")
    _draw_layer(svg, m, q_max, 60.0, 20.0)
    return svg.render()


def space_svg(m_max: int = 3, q_max: int = 3) -> str:
    """Global schematic: the D-bouquet with layers L_1..L_m_max glued on."""
    if m_max < 1:
        raise ValueError("need m_max >= 1")
    scale = 0.5
    row = LAYER_EDGE_HEIGHT * scale + 50
    svg = Svg(2 * BOUQUET_WEDGE[0] + LAYER_LENGTH * scale + 200, max(row * m_max, 2 * BOUQUET_RADIUS + 80) + 20, "space")
    wx, wy = BOUQUET_WEDGE
    for m in range(1, m_max + 2):
        rho = BOUQUET_RADIUS / m
        svg.circle(wx, wy + rho, rho, stroke=GREY)
        bx, by = bouquet_point(m, 0.0)
        svg.text(bx, by + 12, f"D^{m}", size=10)
    svg.dot(wx, wy, r=3.0, fill=RED)
    svg.text(wx, wy - 8, "C", fill=RED)
    left = 2 * wx + 60
    for m in range(1, m_max + 1):
        top = 20 + row * (m - 1)
        _draw_layer(svg, m, q_max, left, top, scale)
        petals = sorted({p for _, p in layer_marks(m, q_max)})
        svg.line(left - 20, top + LAYER_EDGE_HEIGHT * scale / 2, 2 * wx - 10, wy + BOUQUET_RADIUS, stroke=ORANGE, dash="3,3")
        svg.text(left - 24, top + LAYER_EDGE_HEIGHT * scale + 30, f"glued to petals {petals}", anchor="start", size=10, cls="glue")
    return svg.render()


# --- decay curves ----------------------------------------------------------------


def decay_curve_svg(ns, values, floor: float | None = None, title: str = "") -> str:
    """Log-log plot of Hausdorff distance against n."""
    ns = [float(n) for n in ns]
    values = [float(v) for v in values]
    if not ns or len(ns) != len(values):
        raise ValueError("need matching, nonempty n and value lists")
    w, h, pad = 420.0, 300.0, 50.0
    svg = Svg(w, h, "decay-curve")
    positive = [v for v in values if v > 0] + ([floor] if floor else [])
    vmin = min(positive) if positive else 1e-3
    vmax = max(positive) if positive else 1.0
    lo_y, hi_y = math.log10(vmin) - 0.2, math.log10(vmax) + 0.2
    lo_x, hi_x = math.log10(min(ns)) - 0.1, math.log10(max(ns)) + 0.1

    def px(n):
        return pad + (w - 2 * pad) * (math.log10(n) - lo_x) / (hi_x - lo_x)

    def py(v):
        v = max(v, vmin)
        return h - pad - (h - 2 * pad) * (math.log10(v) - lo_y) / (hi_y - lo_y)

    svg.line(pad, h - pad, w - pad, h - pad)
    svg.line(pad, pad, pad, h - pad)
    svg.text(w / 2, h - 12, "n (log)", size=11)
    svg.text(14, h / 2, "d_H", size=11)
    pts = [(px(n), py(v)) for n, v in zip(ns, values)]
    svg.polyline(pts, stroke="#1f4e99", width=1.5)
    for (x, y), n, v in zip(pts, ns, values):
        svg.dot(x, y, r=2.5, fill="#1f4e99")
        svg.text(x, y - 8, f"{v:.3g}", size=9)
        svg.text(x, h - pad + 14, f"{n:g}", size=9)
    if floor:
        svg.line(pad, py(floor), w - pad, py(floor), stroke=RED, dash="4,3")
        svg.text(w - pad, py(floor) - 4, "covering floor", anchor="end", size=9, fill=RED)
    if title:
        svg.text(w / 2, 20, title, size=13)
    return svg.render()


FIGURE_KINDS = ("line-points", "d-bouquet", "pinching", "layer", "space", "decay-curve")
