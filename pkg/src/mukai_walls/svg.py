"""Deterministic SVG pictures of walls in the ``(beta, alpha)`` half-plane."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from html import escape

from .errors import DomainError
from .walls import SEMICIRCLE, Wall

__all__ = ["WIDTH", "HEIGHT", "WallDiagram", "default_viewport", "render_walls_svg"]

WIDTH = 800
HEIGHT = 400


def _num(x: float) -> str:
    return format(x, ".12g")


@dataclass(frozen=True)
class WallDiagram:
    walls: tuple[Wall, ...]
    viewport: tuple[Fraction, Fraction, Fraction]  # beta_min, beta_max, alpha_max
    labels: tuple[str, ...] = field(default=())

    def __post_init__(self) -> None:
        b0, b1, a = (Fraction(x) for x in self.viewport)
        if b1 <= b0 or a <= 0:
            raise DomainError("viewport must be nonempty")
        object.__setattr__(self, "viewport", (b0, b1, a))
        object.__setattr__(self, "walls", tuple(self.walls))


def default_viewport(walls: list[Wall] | tuple[Wall, ...]) -> tuple[Fraction, Fraction, Fraction]:
    """Smallest box with integer sides containing every wall, with margin 1."""
    lo, hi, top = Fraction(-1), Fraction(1), Fraction(1)
    for w in walls:
        if w.shape == SEMICIRCLE:
            r = math.isqrt(math.ceil(w.radius_sq)) + 1
            lo = min(lo, math.floor(w.center) - r)
            hi = max(hi, math.ceil(w.center) + r)
            top = max(top, Fraction(r))
        else:
            lo = min(lo, math.floor(w.beta) - 1)
            hi = max(hi, math.ceil(w.beta) + 1)
    return Fraction(lo), Fraction(hi), top + 1


def render_walls_svg(dg: WallDiagram | list[Wall] | tuple[Wall, ...]) -> str:
    """SVG text: beta to the right, alpha upward, semicircles as elliptic arcs."""
    if not isinstance(dg, WallDiagram):
        dg = WallDiagram(tuple(dg), default_viewport(dg))
    b0, b1, amax = dg.viewport
    sx = WIDTH / float(b1 - b0)
    sy = HEIGHT / float(amax)

    def x(beta: float) -> float:
        return (beta - float(b0)) * sx

    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}">',
        f'<line class="axis" x1="0" y1="{HEIGHT}" x2="{WIDTH}" y2="{HEIGHT}" stroke="black"/>',
    ]
    if b0 <= 0 <= b1:
        x0 = _num(x(0.0))
        lines.append(f'<line class="axis" x1="{x0}" y1="0" x2="{x0}" y2="{HEIGHT}" stroke="gray"/>')
    for i, w in enumerate(dg.walls):
        title = escape(dg.labels[i] if i < len(dg.labels) else str(w.destabilizer))
        if w.shape == SEMICIRCLE:
            c, r = float(w.center), math.sqrt(float(w.radius_sq))
            lines.append(
                f'<path class="wall" d="M {_num(x(c - r))} {HEIGHT} '
                f'A {_num(r * sx)} {_num(r * sy)} 0 0 1 {_num(x(c + r))} {HEIGHT}" '
                f'fill="none" stroke="blue"><title>{title}</title></path>'
            )
        else:
            xb = _num(x(float(w.beta)))
            lines.append(
                f'<line class="wall" x1="{xb}" y1="0" x2="{xb}" y2="{HEIGHT}" stroke="red">'
                f"<title>{title}</title></line>"
            )
            lines.append(f'<text x="{xb}" y="12">HC</text>')
    lines.append("</svg>")
    return "\n".join(lines) + "\n"
