"""Top-down SVG view of a layout.

The SVG user space is the bed itself in millimetres: origin top-left,
Y pointing down, which is also the packer's coordinate system.
"""

from __future__ import annotations

from xml.sax.saxutils import escape

from .model import Layout

MARGIN = 10


def _num(value: float) -> str:
    return f"{value:.10g}"


def _shade(filling: float) -> str:
    # denser parts are drawn darker
    level = int(round(230 - 150 * filling))
    return f"#{level:02x}{level:02x}ff"


def render_svg(layout: Layout, scale: float = 2.0) -> str:
    plat = layout.platform
    w = plat.length + 2 * MARGIN
    h = plat.width + 2 * MARGIN
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_num(w * scale)}" '
        f'height="{_num(h * scale)}" viewBox="{_num(-MARGIN)} {_num(-MARGIN)} '
        f'{_num(w)} {_num(h)}">',
        f'<title>{escape(plat.name)}: {layout.part_count} parts, '
        f'{100 * layout.coverage:.2f}% covered, {_num(layout.total_mass)} mm3</title>',
        f'<rect class="platform" x="0" y="0" width="{_num(plat.length)}" '
        f'height="{_num(plat.width)}" fill="white" stroke="black" stroke-width="1"/>',
    ]
    font = max(3.0, min(plat.length, plat.width) / 25)
    for p in layout.placements:
        name = escape(p.part.name)
        cx, cy = p.x + p.length / 2, p.y + p.width / 2
        lines += [
            f'<g class="part" data-part="{name}">',
            f'<rect x="{_num(p.x)}" y="{_num(p.y)}" width="{_num(p.length)}" '
            f'height="{_num(p.width)}" fill="{_shade(p.part.filling)}" '
            f'stroke="black" stroke-width="0.5"/>',
            f'<text x="{_num(cx)}" y="{_num(cy)}" font-size="{_num(font)}" '
            f'text-anchor="middle" dominant-baseline="middle">{name}'
            f'{" (R)" if p.rotated else ""}</text>',
            "</g>",
        ]
    lines.append("</svg>")
    return "\n".join(lines) + "\n"
