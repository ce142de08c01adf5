"""SVG pictures of two-atom models.

In the plane every boundary ray of a conic region lies along one of its
piece columns, so the candidate rays plus one bisector per gap between them
classify the whole plane exactly.  Floats appear only in the drawing.
"""
from __future__ import annotations

import math
from fractions import Fraction
from typing import NamedTuple
from xml.sax.saxutils import escape

from .core import Gamble

__all__ = ["PlotError", "Sector", "angular_sectors", "merged_sectors", "render_svg"]

SIZE = 600
CENTRE = SIZE / 2
RADIUS = 250
ACCEPT_FILL = "#d9d9d9"
REJECT_FILL = "#6e6e6e"
ARC_STEP = math.radians(3)


class PlotError(ValueError):
    """The model cannot be drawn (wrong dimension or non-conic pieces)."""


class Sector(NamedTuple):
    start: tuple  # boundary direction, exact
    end: tuple
    accepted: bool  # status of the open sector between them
    rejected: bool


class Ray(NamedTuple):
    direction: tuple
    accepted: bool
    rejected: bool
    favourable: bool


def _angle(v) -> float:
    return math.atan2(float(v[1]), float(v[0])) % (2 * math.pi)


def _primitive(v) -> tuple:
    m = max(abs(x) for x in v)
    return tuple(Fraction(x) / m for x in v)


def _candidates(regions) -> list:
    dirs = {(Fraction(1), Fraction(0)), (Fraction(0), Fraction(1)), (Fraction(-1), Fraction(0)),
            (Fraction(0), Fraction(-1))}
    for r in regions:
        for p in r.pieces:
            if not p.homogeneous:
                if p.kind != "Point":
                    raise PlotError(f"cannot draw the non-conic piece {p!r}")
                vs = [p.offset]
            else:
                vs = p.cols
            for c in vs:
                if any(c):
                    dirs.add(_primitive(c))
                    dirs.add(_primitive(tuple(-x for x in c)))
    return sorted(dirs, key=_angle)


def _bisector(u, v) -> tuple:
    """A direction strictly inside the counter-clockwise gap from u to v (gap < π)."""
    a = tuple(x / sum(abs(y) for y in u) for x in u)
    b = tuple(x / sum(abs(y) for y in v) for x in v)
    return _primitive(tuple(x + y for x, y in zip(a, b)))


def angular_sectors(m):
    """(rays, sectors) of a two-atom model, in counter-clockwise order from (1,0)."""
    space = m.space
    if space.dim != 2:
        raise PlotError(f"plots need exactly two atoms, not {space.dim}")
    dirs = _candidates([m.accepted_region, m.rejected_region])

    def status(d):
        g = Gamble.raw(space, d)
        return m.accepts(g), m.rejects(g)

    rays = []
    for d in dirs:
        a, r = status(d)
        na, nr = status(tuple(-x for x in d))
        rays.append(Ray(d, a, r, a and nr))
    sectors = []
    for i, u in enumerate(dirs):
        v = dirs[(i + 1) % len(dirs)]
        a, r = status(_bisector(u, v))
        sectors.append(Sector(u, v, a, r))
    return rays, sectors


def merged_sectors(rays, sectors) -> list:
    """Maximal sectors of one status, split only at rays where the status changes."""
    n = len(sectors)
    breaks = [i for i in range(n)
              if not ((rays[i].accepted, rays[i].rejected)
                      == (sectors[i - 1].accepted, sectors[i - 1].rejected)
                      == (sectors[i].accepted, sectors[i].rejected))]
    if not breaks:
        s = sectors[0]
        half = rays[n // 2].direction if n > 1 else tuple(-x for x in s.start)
        return [Sector(s.start, half, s.accepted, s.rejected), Sector(half, s.start, s.accepted, s.rejected)]
    out = []
    for k, i in enumerate(breaks):
        j = breaks[(k + 1) % len(breaks)]
        last = sectors[(j - 1) % n]
        out.append(Sector(sectors[i].start, last.end, sectors[i].accepted, sectors[i].rejected))
    return out


def _xy(theta: float, radius: float = RADIUS) -> tuple:
    return CENTRE + radius * math.cos(theta), CENTRE - radius * math.sin(theta)


def _fmt(x: float) -> str:
    s = f"{x:.2f}"
    return "0.00" if s == "-0.00" else s


def _sector_path(u, v) -> str:
    a0 = _angle(u)
    a1 = _angle(v)
    if a1 <= a0:
        a1 += 2 * math.pi
    steps = max(1, math.ceil((a1 - a0) / ARC_STEP))
    pts = [(CENTRE, CENTRE)] + [_xy(a0 + (a1 - a0) * k / steps) for k in range(steps + 1)]
    return "M " + " L ".join(f"{_fmt(x)} {_fmt(y)}" for x, y in pts) + " Z"


def render_svg(m, title: str = "") -> str:
    """A fixed 600×600 SVG: filled sectors, styled border rays, axes."""
    rays, sectors = angular_sectors(m)
    zero = m.space.zero()
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{SIZE}" height="{SIZE}" '
        f'viewBox="0 0 {SIZE} {SIZE}">',
    ]
    if title:
        out.append(f"  <title>{escape(title)}</title>")
    out.append(f'  <rect x="0" y="0" width="{SIZE}" height="{SIZE}" fill="white"/>')
    for s in merged_sectors(rays, sectors):
        if s.accepted == s.rejected:
            continue  # unresolved, or confused (never for a model)
        cls = "accepted" if s.accepted else "rejected"
        fill = ACCEPT_FILL if s.accepted else REJECT_FILL
        out.append(f'  <path class="{cls}" d="{_sector_path(s.start, s.end)}" fill="{fill}" stroke="none"/>')
    # axes
    lo, hi = _fmt(CENTRE - RADIUS - 20), _fmt(CENTRE + RADIUS + 20)
    c = _fmt(CENTRE)
    out.append(f'  <line class="axis" x1="{lo}" y1="{c}" x2="{hi}" y2="{c}" stroke="black" stroke-width="1"/>')
    out.append(f'  <line class="axis" x1="{c}" y1="{lo}" x2="{c}" y2="{hi}" stroke="black" stroke-width="1"/>')
    a, b = (escape(x) for x in m.space.atoms)
    out.append(f'  <text x="{_fmt(CENTRE + RADIUS + 22)}" y="{_fmt(CENTRE - 6)}" font-size="14">{a}</text>')
    out.append(f'  <text x="{_fmt(CENTRE + 6)}" y="{_fmt(CENTRE - RADIUS - 22)}" font-size="14">{b}</text>')
    # border rays: where the status changes across the ray
    n = len(sectors)
    for i, r in enumerate(rays):
        before = sectors[(i - 1) % n]
        after = sectors[i]
        filled = {(before.accepted, before.rejected), (after.accepted, after.rejected)}
        if len(filled) == 1 and (r.accepted, r.rejected) in filled:
            continue  # interior ray
        if not (r.accepted or r.rejected or before.accepted or before.rejected
                or after.accepted or after.rejected):
            continue
        x, y = _xy(_angle(r.direction))
        if r.favourable:
            cls, dash = "favourable", ' stroke-dasharray="2 4"'
        elif r.accepted or r.rejected:
            cls, dash = "included", ""
        else:
            cls, dash = "excluded", ' stroke-dasharray="10 6"'
        label = ",".join(str(v) for v in Gamble.raw(m.space, r.direction).normalized().values)
        out.append(f'  <line class="border {cls}" data-ray="{label}" x1="{c}" y1="{c}" x2="{_fmt(x)}" '
                   f'y2="{_fmt(y)}" stroke="black" stroke-width="2"{dash}/>')
    origin = "accepted" if m.accepts(zero) else "rejected" if m.rejects(zero) else "unresolved"
    fill = "black" if origin != "unresolved" else "white"
    out.append(f'  <circle class="origin {origin}" cx="{c}" cy="{c}" r="4" fill="{fill}" stroke="black"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
