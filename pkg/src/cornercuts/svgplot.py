"""Figure-style SVG renderings: lattice, rays, a body, and its special points.

Output-only helper for the command line; exact rationals are converted to
floats just for drawing.
"""

from __future__ import annotations

from fractions import Fraction
from math import ceil, floor, sqrt
from typing import List, Optional

from .bodies import Body, CornerInstance, body_vrep, classify, ray_incidence
from .ratgeom import QVec

SCALE = 48
PAD = 1.6


def _window(instance: CornerInstance, body: Optional[Body]):
    xs = [float(instance.f[0])]
    ys = [float(instance.f[1])]
    for r in instance.rays:
        norm = sqrt(float(r[0]) ** 2 + float(r[1]) ** 2) or 1.0
        xs.append(float(instance.f[0]) + 1.5 * float(r[0]) / norm)
        ys.append(float(instance.f[1]) + 1.5 * float(r[1]) / norm)
    if body is not None:
        try:
            vrep = body_vrep(body)
            for p in vrep.vertices:
                xs.append(float(p[0]))
                ys.append(float(p[1]))
        except Exception:
            pass
    x0, x1 = min(xs) - PAD, max(xs) + PAD
    y0, y1 = min(ys) - PAD, max(ys) + PAD
    return x0, x1, y0, y1


class _Canvas:
    def __init__(self, x0, x1, y0, y1):
        self.x0, self.x1, self.y0, self.y1 = x0, x1, y0, y1
        self.w = (x1 - x0) * SCALE
        self.h = (y1 - y0) * SCALE
        self.parts: List[str] = []

    def pt(self, x, y):
        return ((float(x) - self.x0) * SCALE,
                (self.y1 - float(y)) * SCALE)

    def line(self, a, b, color, width=1.5, dash=None):
        (xa, ya), (xb, yb) = self.pt(*a), self.pt(*b)
        extra = f' stroke-dasharray="{dash}"' if dash else ""
        self.parts.append(
            f'<line x1="{xa:.1f}" y1="{ya:.1f}" x2="{xb:.1f}" y2="{yb:.1f}" '
            f'stroke="{color}" stroke-width="{width}"{extra}/>')

    def circle(self, c, r, color, fill=True):
        x, y = self.pt(*c)
        style = (f'fill="{color}"' if fill
                 else f'fill="none" stroke="{color}" stroke-width="1.5"')
        self.parts.append(f'<circle cx="{x:.1f}" cy="{y:.1f}" r="{r}" {style}/>')

    def polygon(self, pts, stroke, fill):
        coords = " ".join(f"{x:.1f},{y:.1f}" for x, y in (self.pt(*p) for p in pts))
        self.parts.append(
            f'<polygon points="{coords}" fill="{fill}" fill-opacity="0.15" '
            f'stroke="{stroke}" stroke-width="2"/>')

    def arrow(self, a, b, color):
        self.line(a, b, color, width=2)
        (xa, ya), (xb, yb) = self.pt(*a), self.pt(*b)
        dx, dy = xb - xa, yb - ya
        norm = sqrt(dx * dx + dy * dy) or 1.0
        ux, uy = dx / norm, dy / norm
        for s in (1, -1):
            px = xb - 9 * ux + s * 4.5 * uy
            py = yb - 9 * uy - s * 4.5 * ux
            self.parts.append(
                f'<line x1="{xb:.1f}" y1="{yb:.1f}" x2="{px:.1f}" y2="{py:.1f}" '
                f'stroke="{color}" stroke-width="2"/>')

    def render(self) -> str:
        return (f'<svg xmlns="http://www.w3.org/2000/svg" '
                f'width="{self.w:.0f}" height="{self.h:.0f}" '
                f'viewBox="0 0 {self.w:.0f} {self.h:.0f}">\n'
                '<rect width="100%" height="100%" fill="white"/>\n'
                + "\n".join(self.parts) + "\n</svg>\n")


def svg_scene(instance: CornerInstance, body: Optional[Body] = None) -> str:
    cv = _Canvas(*_window(instance, body))
    # lattice points
    for x in range(ceil(cv.x0), floor(cv.x1) + 1):
        for y in range(ceil(cv.y0), floor(cv.y1) + 1):
            cv.circle((x, y), 2.5, "#999999")
    # the body
    if body is not None:
        try:
            vrep = body_vrep(body)
        except Exception:
            vrep = None
        if vrep is not None and not vrep.rays and len(vrep.vertices) >= 3:
            cv.polygon(vrep.vertices, "#2255cc", "#2255cc")
        elif vrep is not None:
            # unbounded: draw the facet lines through the window
            for b in body.rows:
                _draw_line(cv, b, body.f)
        cls = classify(body)
        for pts in cls.facet_points:
            for y in pts:
                cv.circle(y, 4.5, "#cc8800", fill=False)
        inc = ray_incidence(body, instance)
        for p in inc.points:
            if p is not None:
                cv.circle(p, 3.2, "#117733")
    # rays as arrows of fixed visual length
    for r in instance.rays:
        norm = sqrt(float(r[0]) ** 2 + float(r[1]) ** 2) or 1.0
        tip = (float(instance.f[0]) + 1.4 * float(r[0]) / norm,
               float(instance.f[1]) + 1.4 * float(r[1]) / norm)
        cv.arrow(instance.f, tip, "#cc2222")
    cv.circle(instance.f, 4, "#000000")
    return cv.render()


def _draw_line(cv: _Canvas, row: QVec, f: QVec):
    # row.(x - f) = 1 clipped to the window, drawn as a long segment
    a, b = float(row[0]), float(row[1])
    c = 1.0 + a * float(f[0]) + b * float(f[1])
    pts = []
    if abs(b) > 1e-12:
        for x in (cv.x0, cv.x1):
            y = (c - a * x) / b
            if cv.y0 - 1e-9 <= y <= cv.y1 + 1e-9:
                pts.append((x, y))
    if abs(a) > 1e-12:
        for y in (cv.y0, cv.y1):
            x = (c - b * y) / a
            if cv.x0 - 1e-9 <= x <= cv.x1 + 1e-9:
                pts.append((x, y))
    if len(pts) >= 2:
        cv.line(pts[0], pts[1], "#2255cc", width=2)
