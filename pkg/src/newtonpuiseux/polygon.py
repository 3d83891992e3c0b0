"""Newton polygon geometry on exact rational coordinates."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction


def _key(p):
    """Accept ``CloudPoint`` objects or ``(iota, j)`` pairs."""
    if hasattr(p, "iota"):
        return (Fraction(p.iota), int(p.j))
    return (Fraction(p[0]), int(p[1]))


def _cross(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


@dataclass(frozen=True)
class NewtonPolygon:
    """Vertices of the finite part of the boundary, left to right.

    Along the list ``iota`` strictly increases and ``j`` strictly decreases. The
    vertical ray above the first vertex and the horizontal ray right of the last
    one are implicit.
    """

    vertices: tuple

    @property
    def sides(self):
        """``(co_slope, left_vertex, right_vertex)`` for each compact side."""
        out = []
        for a, b in zip(self.vertices, self.vertices[1:]):
            out.append((Fraction(b[0] - a[0]) / (a[1] - b[1]), a, b))
        return out

    @property
    def co_slopes(self):
        return [mu for mu, _, _ in self.sides]

    def vertices_at_or_above(self, height: int):
        return tuple(v for v in self.vertices if v[1] >= height)

    def to_json(self):
        return [[v[0].numerator, v[0].denominator, v[1]] for v in self.vertices]


def build_polygon(cloud) -> NewtonPolygon:
    """Lower-left convex hull of ``cloud + R_{>=0}^2`` by a monotone chain."""
    pts = sorted({_key(p) for p in cloud})
    if not pts:
        raise ValueError("the Newton polygon of an empty cloud is undefined")
    # Pareto-minimal points: nothing else lies weakly below-left
    minimal = []
    best_j = math.inf
    for p in pts:
        if p[1] < best_j:
            minimal.append(p)
            best_j = p[1]
    hull = []
    for p in minimal:
        while len(hull) >= 2 and _cross(hull[-2], hull[-1], p) <= 0:
            hull.pop()
        hull.append(p)
    return NewtonPolygon(tuple(hull))


@dataclass(frozen=True)
class SupportElement:
    """Contact set of the supporting line ``j + iota/mu = alpha`` with the cloud."""

    mu: Fraction
    alpha: Fraction
    points: tuple  # (iota, j), j decreasing

    @property
    def top(self) -> int:
        return self.points[0][1]

    @property
    def bot(self) -> int:
        return self.points[-1][1]

    @property
    def is_vertex(self) -> bool:
        return self.top == self.bot

    @property
    def top_point(self):
        return self.points[0]

    @property
    def bottom_point(self):
        return self.points[-1]

    def iota_at(self, j: int) -> Fraction:
        """Abscissa of the line at height ``j``."""
        return self.mu * (self.alpha - j)

    def contains(self, point) -> bool:
        return _key(point) in set(self.points)

    def on_line(self, point) -> bool:
        i, j = _key(point)
        return j + i / self.mu == self.alpha

    def to_json(self):
        return {
            "mu": str(self.mu),
            "alpha": str(self.alpha),
            "points": [[p[0].numerator, p[0].denominator, p[1]] for p in self.points],
            "top": self.top,
            "bot": self.bot,
        }


def element(cloud, mu) -> SupportElement:
    """Element of co-slope ``mu``: minimisers of ``j + iota/mu``."""
    mu = Fraction(mu)
    if mu <= 0:
        raise ValueError("co-slope must be positive")
    pts = {_key(p) for p in cloud}
    if not pts:
        raise ValueError("element of an empty cloud")
    values = {p: p[1] + p[0] / mu for p in pts}
    alpha = min(values.values())
    on = sorted((p for p, v in values.items() if v == alpha), key=lambda p: -p[1])
    return SupportElement(mu, alpha, tuple(on))


def height(cloud) -> int:
    """Ordinate of the leftmost vertex."""
    pts = [_key(p) for p in cloud]
    if not pts:
        raise ValueError("height of an empty cloud")
    left = min(p[0] for p in pts)
    return min(p[1] for p in pts if p[0] == left)


def relative_height(cloud, s) -> int:
    """``Top`` of the element at co-slope ``ord(s)``."""
    o = s.order()
    if o == math.inf:
        raise ValueError("relative height needs a nonzero series")
    if o <= 0:
        raise ValueError("relative height needs a series of positive order")
    return element(cloud, o).top


def grid_denominator(cloud) -> int:
    """Least ``r`` with every abscissa in ``(1/r) Z``."""
    r = 1
    for p in cloud:
        r = math.lcm(r, _key(p)[0].denominator)
    return r


# rendering

UNIT = 32
MARGIN = 24


def _fmt(v) -> str:
    v = float(v)
    return str(int(v)) if v == int(v) else f"{v:.3f}".rstrip("0").rstrip(".")


def render(cloud, fmt: str = "svg", lines=(), title: str | None = None) -> str:
    """Deterministic drawing of a cloud, its polygon and supporting lines.

    ``cloud`` is a list of ``CloudPoint``; points whose sources are only ``B``
    are drawn unfilled. ``lines`` are co-slopes whose supporting lines are drawn.
    """
    pts = list(cloud)
    poly = build_polygon(pts)
    elems = [element(pts, mu) for mu in lines]
    if fmt == "json":
        doc = {
            "vertices": poly.to_json(),
            "cloud": [p.to_json() if hasattr(p, "to_json") else
                      [_key(p)[0].numerator, _key(p)[0].denominator, _key(p)[1]] for p in pts],
            "lines": [e.to_json() for e in elems],
        }
        return json.dumps(doc, sort_keys=True, indent=2)
    if fmt == "ascii":
        return _render_ascii(pts, poly, elems)
    if fmt == "svg":
        return _render_svg(pts, poly, elems, title)
    raise ValueError(f"unknown format {fmt!r}")


def _only_b(p) -> bool:
    return getattr(p, "sources", None) == frozenset({"B"})


def _render_ascii(pts, poly, elems):
    keys = [_key(p) for p in pts]
    den = grid_denominator(keys)
    xmin = min(0, min(k[0] for k in keys))
    xmax = max(k[0] for k in keys)
    ymax = max(k[1] for k in keys)
    cols = int((xmax - xmin) * den) + 1
    grid = [["." for _ in range(cols)] for _ in range(ymax + 1)]
    verts = set(poly.vertices)
    on_lines = set()
    for e in elems:
        on_lines.update(e.points)
    for p in pts:
        k = _key(p)
        c = int((k[0] - xmin) * den)
        ch = "o" if _only_b(p) else "*"
        if k in on_lines:
            ch = "L"
        if k in verts:
            ch = "V"
        grid[k[1]][c] = ch
    rows = []
    for j in range(ymax, -1, -1):
        rows.append(f"{j:>3} " + "".join(grid[j]))
    rows.append(f"    x from {xmin} step 1/{den}")
    rows.append("    vertices: " + ", ".join(f"({v[0]},{v[1]})" for v in poly.vertices))
    for e in elems:
        rows.append(f"    mu={e.mu}: " + ", ".join(f"({p[0]},{p[1]})" for p in e.points))
    return "\n".join(rows) + "\n"


def _render_svg(pts, poly, elems, title):
    keys = [_key(p) for p in pts]
    xmin = min(Fraction(0), min(k[0] for k in keys))
    xmax = max(k[0] for k in keys) + 1
    ymax = max(k[1] for k in keys) + 1
    width = float(xmax - xmin) * UNIT + 2 * MARGIN
    height_px = ymax * UNIT + 2 * MARGIN

    def X(i):
        return MARGIN + float(Fraction(i) - xmin) * UNIT

    def Y(j):
        return MARGIN + float(ymax - Fraction(j)) * UNIT

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {_fmt(width)} {_fmt(height_px)}" '
        f'width="{_fmt(width)}" height="{_fmt(height_px)}">'
    ]
    if title:
        out.append(f"<title>{title}</title>")
    # axes
    out.append(f'<line x1="{_fmt(X(xmin))}" y1="{_fmt(Y(0))}" x2="{_fmt(X(xmax))}" y2="{_fmt(Y(0))}" stroke="#888"/>')
    out.append(f'<line x1="{_fmt(X(0))}" y1="{_fmt(Y(0))}" x2="{_fmt(X(0))}" y2="{_fmt(Y(ymax))}" stroke="#888"/>')
    # polygon boundary with its two rays
    v = poly.vertices
    path = [f"M {_fmt(X(v[0][0]))} {_fmt(Y(ymax))}"]
    for p in v:
        path.append(f"L {_fmt(X(p[0]))} {_fmt(Y(p[1]))}")
    path.append(f"L {_fmt(X(xmax))} {_fmt(Y(v[-1][1]))}")
    out.append(f'<path d="{" ".join(path)}" fill="none" stroke="black" stroke-width="2"/>')
    for e in elems:
        # segment of the line j = alpha - iota/mu inside the frame
        j0, j1 = Fraction(ymax), Fraction(0)
        a = (e.iota_at(j0), j0)
        b = (e.iota_at(j1), j1)
        out.append(
            f'<line x1="{_fmt(X(a[0]))}" y1="{_fmt(Y(a[1]))}" x2="{_fmt(X(b[0]))}" y2="{_fmt(Y(b[1]))}" '
            f'stroke="#3060c0" stroke-dasharray="4 3"><title>mu={e.mu}</title></line>'
        )
    for p in sorted(pts, key=_key):
        k = _key(p)
        fill = "white" if _only_b(p) else "black"
        out.append(
            f'<circle cx="{_fmt(X(k[0]))}" cy="{_fmt(Y(k[1]))}" r="4" fill="{fill}" stroke="black"/>'
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"
