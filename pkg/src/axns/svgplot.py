"""Hand-rolled SVG line plots for monitor series.

No plotting dependency: the emitted documents are small, well-formed XML
that tests parse back with xml.etree to check the plotted geometry.  The
vertical pixel axis points down, so a curve of nondecreasing data has
nonincreasing y coordinates in the polyline.
"""

from __future__ import annotations

import math
import os
from pathlib import Path
from xml.sax.saxutils import escape

W, H = 640, 420
ML, MR, MT, MB = 76, 24, 44, 52
PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd")


def _atomic_text(path, text: str) -> None:
    path = Path(path)
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(text, encoding="utf-8")
    os.replace(tmp, path)


def render_line_plot(title, xlabel, curves, log_y: bool = False) -> str:
    """Render curves = [(label, xs, ys), ...] to an SVG document string.

    log_y plots log10 of the data and falls back to linear if any value
    is not strictly positive.
    """
    if not curves:
        raise ValueError("render_line_plot: no curves")
    for label, xs, ys in curves:
        if len(xs) != len(ys) or len(xs) < 2:
            raise ValueError(f"render_line_plot: curve {label!r} needs >= 2 points")
    if log_y and any(y <= 0 for _, _, ys in curves for y in ys):
        log_y = False

    def ty(y):
        return math.log10(y) if log_y else y

    all_x = [x for _, xs, _ in curves for x in xs]
    all_y = [ty(y) for _, _, ys in curves for y in ys]
    xmin, xmax = min(all_x), max(all_x)
    ymin, ymax = min(all_y), max(all_y)
    if xmax <= xmin:
        xmax = xmin + 1.0
    if ymax <= ymin:
        pad = 1.0 if ymin == 0 else 0.5 * abs(ymin)
        ymin, ymax = ymin - pad, ymax + pad

    def px(x):
        return ML + (W - ML - MR) * (x - xmin) / (xmax - xmin)

    def py(yv):
        return H - MB - (H - MT - MB) * (yv - ymin) / (ymax - ymin)

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" '
        f'viewBox="0 0 {W} {H}" font-family="sans-serif">',
        f'<rect width="{W}" height="{H}" fill="white"/>',
        f'<text x="{W / 2:.0f}" y="26" text-anchor="middle" font-size="15">'
        f"{escape(title)}</text>",
        f'<line x1="{ML}" y1="{H - MB}" x2="{W - MR}" y2="{H - MB}" stroke="black"/>',
        f'<line x1="{ML}" y1="{MT}" x2="{ML}" y2="{H - MB}" stroke="black"/>',
        f'<text x="{(ML + W - MR) / 2:.0f}" y="{H - 14}" text-anchor="middle" '
        f'font-size="12">{escape(xlabel)}</text>',
    ]
    nticks = 5
    for k in range(nticks):
        xv = xmin + (xmax - xmin) * k / (nticks - 1)
        xp = px(xv)
        out.append(
            f'<line x1="{xp:.2f}" y1="{H - MB}" x2="{xp:.2f}" y2="{H - MB + 5}" '
            'stroke="black"/>'
        )
        out.append(
            f'<text x="{xp:.2f}" y="{H - MB + 18}" text-anchor="middle" '
            f'font-size="11">{escape("%.4g" % xv)}</text>'
        )
        yv = ymin + (ymax - ymin) * k / (nticks - 1)
        yp = H - MB - (H - MT - MB) * k / (nticks - 1)
        label = "%.4g" % (10.0**yv if log_y else yv)
        out.append(
            f'<line x1="{ML - 5}" y1="{yp:.2f}" x2="{ML}" y2="{yp:.2f}" '
            'stroke="black"/>'
        )
        out.append(
            f'<text x="{ML - 8}" y="{yp + 4:.2f}" text-anchor="end" '
            f'font-size="11">{escape(label)}</text>'
        )
    if log_y:
        out.append(
            f'<text x="16" y="{MT - 6}" font-size="11">log scale</text>'
        )
    for n, (label, xs, ys) in enumerate(curves):
        color = PALETTE[n % len(PALETTE)]
        pts = " ".join(f"{px(x):.2f},{py(ty(y)):.2f}" for x, y in zip(xs, ys))
        out.append(
            f'<polyline fill="none" stroke="{color}" stroke-width="1.5" '
            f'points="{pts}"/>'
        )
        ly = MT + 14 * n
        out.append(
            f'<line x1="{W - MR - 110}" y1="{ly}" x2="{W - MR - 86}" y2="{ly}" '
            f'stroke="{color}" stroke-width="1.5"/>'
        )
        out.append(
            f'<text x="{W - MR - 80}" y="{ly + 4}" font-size="11">'
            f"{escape(label)}</text>"
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"


def emit_plots(series, dirpath, log_criteria: bool = False) -> list[Path]:
    """Write the standard plot set for one run; needs >= 2 rows."""
    rows = series.rows
    if len(rows) < 2:
        raise ValueError(f"emit_plots: need at least 2 rows, got {len(rows)}")
    t = [r.t for r in rows]

    def col(name):
        return [getattr(r, name) for r in rows]

    specs = [
        ("energy.svg", "kinetic energy", [("E", col("E"))], False),
        ("dissipation.svg", "dissipation integral", [("D", col("D"))], False),
        (
            "criteria.svg",
            "axis criteria",
            [("critA", col("critA")), ("critB", col("critB"))],
            log_criteria,
        ),
        (
            "criteria_int.svg",
            "time-integrated criteria",
            [("critA_int", col("critA_int")), ("critB_int", col("critB_int"))],
            log_criteria,
        ),
        ("swirl.svg", "swirl maximum", [("swirl_sup", col("swirl_sup"))], False),
    ]
    made = []
    out = Path(dirpath)
    for fname, title, named, logy in specs:
        curves = [(label, t, ys) for label, ys in named]
        _atomic_text(out / fname, render_line_plot(title, "t", curves, log_y=logy))
        made.append(out / fname)
    return made
