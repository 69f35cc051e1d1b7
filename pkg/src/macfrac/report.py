"""Grid sweeps, mean absolute errors, and CSV / SVG emission."""

from __future__ import annotations

import csv
import io
import os
from dataclasses import dataclass
from typing import Callable, Optional
from xml.sax.saxutils import escape

import mpmath

from .errors import DomainError, MacfracError
from .mpnum import PrecisionContext, precision
from .operator import ReconstructionResult, reconstruct_point
from .spectra import OrderSpectrum, domain_check

__all__ = [
    "DEFAULT_INTERVALS",
    "DEFAULT_POINTS",
    "GridReport",
    "ReportIOError",
    "sweep_grid",
    "mean_absolute_errors",
    "csv_header",
    "write_csv",
    "read_csv",
    "render_svg",
    "write_svg",
]

#: acceptance intervals, bounded away from the origin and inside each domain
DEFAULT_INTERVALS = {
    "exp": ("0.5", "2.5"),
    "geom": ("0.05", "0.9"),
    "sin": ("0.5", "6.0"),
    "expsq": ("0.2", "1.5"),
    "gauss": ("0.2", "3.0"),
    "besselj0": ("0.5", "6.0"),
}
DEFAULT_POINTS = 41
CSV_DIGITS = 30


class ReportIOError(MacfracError, OSError):
    """Writing a report file failed."""


@dataclass(frozen=True)
class GridReport:
    spectrum_name: str
    interval: tuple
    npoints: int
    m: Optional[int]
    rows: tuple[ReconstructionResult, ...]
    mae_raw: object
    mae_corrected: object
    digits: int


def _grid(a, b, npoints: int) -> list:
    step = (b - a) / (npoints - 1)
    return [a + i * step for i in range(npoints - 1)] + [b]


def sweep_grid(
    s: OrderSpectrum,
    a,
    b,
    npoints: int,
    m: int,
    ctx: PrecisionContext,
    progress: Optional[Callable[[int, int], None]] = None,
) -> GridReport:
    """Reconstruct ``s`` at ``npoints`` uniform nodes of [a, b].

    ``progress(i, npoints)`` is called after each node. A failing node
    aborts the sweep; the re-raised error names the offending x.
    """
    if isinstance(npoints, bool) or not isinstance(npoints, int) or npoints < 2:
        raise ValueError(f"npoints must be an integer >= 2, got {npoints!r}")
    a, b = ctx.mpf(a), ctx.mpf(b)
    if not 0 < a < b:
        raise DomainError(f"sweep interval must satisfy 0 < a < b, got [{a}, {b}]")
    # x_domain is an interval, so checking both ends covers [a, b]
    for end in (a, b):
        if not domain_check(s, end):
            raise DomainError(
                f"sweep endpoint {ctx.mp.nstr(end, 15)} is outside the domain {s.x_domain} of {s.name}"
            )
    rows = []
    for i, x in enumerate(_grid(a, b, npoints)):
        try:
            rows.append(reconstruct_point(s, x, m, ctx))
        except MacfracError as exc:
            raise type(exc)(f"sweep of {s.name} failed at x = {ctx.mp.nstr(x, 20)}: {exc}") from exc
        if progress is not None:
            progress(i + 1, npoints)
    mae_raw, mae_corrected = _maes(rows, ctx)
    return GridReport(
        spectrum_name=s.name,
        interval=(a, b),
        npoints=npoints,
        m=None if s.is_atomic else m,
        rows=tuple(rows),
        mae_raw=mae_raw,
        mae_corrected=mae_corrected,
        digits=ctx.digits,
    )


def _maes(rows, ctx):
    if not rows:
        raise ValueError("cannot compute mean absolute errors of an empty report")
    mp = ctx.mp
    n = len(rows)
    raw = mp.fsum(abs(ctx.mpf(r.residual_raw)) for r in rows) / n
    corrected = mp.fsum(abs(ctx.mpf(r.residual_corrected)) for r in rows) / n
    return raw, corrected


def mean_absolute_errors(report: GridReport):
    """(mae_raw, mae_corrected) recomputed from the report rows."""
    return _maes(report.rows, precision(report.digits))


def _fmt(value, digits: int) -> str:
    return mpmath.nstr(value, digits)


def csv_header(n_corrections: int) -> list[str]:
    """Column names; e-columns are omitted when there are no corrections."""
    return (
        ["x", "f_true", "transform"]
        + [f"e{i}" for i in range(n_corrections)]
        + ["corrected", "resid_raw", "resid_corrected"]
    )


def _render_csv(report: GridReport, digits: int) -> str:
    n_corr = len(report.rows[0].corrections) if report.rows else 0
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(csv_header(n_corr))
    for row in report.rows:
        values = [row.x, row.truth, row.transform, *row.corrections,
                  row.corrected, row.residual_raw, row.residual_corrected]
        writer.writerow([_fmt(v, digits) for v in values])
    buf.write(
        f"# mae_raw={_fmt(report.mae_raw, digits)},mae_corrected={_fmt(report.mae_corrected, digits)}\n"
    )
    return buf.getvalue()


def _write_text(text: str, destination) -> None:
    if hasattr(destination, "write"):
        destination.write(text)
        return
    path = os.fspath(destination)
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise ReportIOError(f"cannot write {path}: {exc.strerror or exc}") from exc


def write_csv(report: GridReport, destination, digits: int = CSV_DIGITS) -> None:
    """Write the report as CSV to a path or a text stream.

    Numbers carry ``digits`` significant digits; the last line is a comment
    ``# mae_raw=...,mae_corrected=...``.
    """
    _write_text(_render_csv(report, digits), destination)


def read_csv(source, digits: int = CSV_DIGITS) -> dict:
    """Parse a file written by :func:`write_csv`.

    Returns ``{"header": [...], "rows": [[mpf, ...], ...], "mae_raw": mpf,
    "mae_corrected": mpf}`` with values parsed at ``digits + 10`` digits.
    """
    ctx = precision(max(digits + 10, 20))
    if hasattr(source, "read"):
        text = source.read()
    else:
        with open(os.fspath(source), encoding="utf-8") as fh:
            text = fh.read()
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    comment = [ln for ln in lines if ln.startswith("#")]
    body = [ln for ln in lines if not ln.startswith("#")]
    reader = csv.reader(body)
    header = next(reader)
    rows = [[ctx.mpf(v) for v in rec] for rec in reader]
    maes = {}
    if comment:
        for item in comment[-1].lstrip("# ").split(","):
            key, _, value = item.partition("=")
            maes[key.strip()] = ctx.mpf(value)
    return {"header": header, "rows": rows, **maes}


# --- SVG -------------------------------------------------------------------

_W = 760
_PANEL_H = 280
_MARGIN_L, _MARGIN_R, _MARGIN_T, _MARGIN_B = 80, 150, 40, 50
_COLORS = {
    "truth": "#000000",
    "transform": "#1f77b4",
    "corrected": "#d62728",
    "resid_raw": "#1f77b4",
    "resid_corrected": "#d62728",
}


def _scale(lo: float, hi: float, out_lo: float, out_hi: float):
    if hi == lo:
        lo, hi = lo - 1.0, hi + 1.0
    span = hi - lo
    return lambda v: out_lo + (v - lo) / span * (out_hi - out_lo), lo, hi


def _panel(title, ylabel, series, xs, top, legend) -> list[str]:
    """One framed panel with polylines; ``series`` is a list of (key, ys)."""
    left, right = _MARGIN_L, _W - _MARGIN_R
    ptop, pbottom = top + _MARGIN_T, top + _PANEL_H - _MARGIN_B
    sx, x0, x1 = _scale(min(xs), max(xs), left, right)
    ally = [y for _, ys in series for y in ys]
    sy, y0, y1 = _scale(min(ally), max(ally), pbottom, ptop)
    out = [f'<g id="{escape(title.split()[0].lower())}">']
    out.append(f'<text x="{left}" y="{top + 22}" font-size="15">{escape(title)}</text>')
    out.append(
        f'<rect x="{left}" y="{ptop}" width="{right - left}" height="{pbottom - ptop}" '
        'fill="none" stroke="#444444"/>'
    )
    for key, ys in series:
        pts = " ".join(f"{sx(x):.2f},{sy(y):.2f}" for x, y in zip(xs, ys))
        out.append(
            f'<polyline class="{key}" points="{pts}" fill="none" '
            f'stroke="{_COLORS[key]}" stroke-width="1.5"/>'
        )
    fmt = "{:.4g}".format
    out.append(f'<text x="{left}" y="{pbottom + 16}" font-size="11">{fmt(x0)}</text>')
    out.append(f'<text x="{right}" y="{pbottom + 16}" font-size="11" text-anchor="end">{fmt(x1)}</text>')
    out.append(f'<text x="{left - 6}" y="{pbottom}" font-size="11" text-anchor="end">{fmt(y0)}</text>')
    out.append(f'<text x="{left - 6}" y="{ptop + 10}" font-size="11" text-anchor="end">{fmt(y1)}</text>')
    out.append(f'<text x="{(left + right) / 2}" y="{pbottom + 34}" font-size="12" text-anchor="middle">x</text>')
    cy = (ptop + pbottom) / 2
    out.append(
        f'<text x="{left - 66}" y="{cy}" font-size="12" text-anchor="middle" '
        f'transform="rotate(-90 {left - 66} {cy})">{escape(ylabel)}</text>'
    )
    for i, line in enumerate(legend):
        key, label = line
        ly = ptop + 16 + 18 * i
        colour = _COLORS.get(key, "#000000")
        out.append(f'<line x1="{right + 12}" y1="{ly - 4}" x2="{right + 32}" y2="{ly - 4}" stroke="{colour}" stroke-width="2"/>')
        out.append(f'<text x="{right + 38}" y="{ly}" font-size="11">{escape(label)}</text>')
    out.append("</g>")
    return out


def render_svg(report: GridReport) -> str:
    """The two-panel figure (reconstruction, log residuals) as an SVG 1.1 string."""
    mp = mpmath
    floor = mp.mpf(10) ** (-report.digits)

    def log_abs(v):
        return float(mp.log10(max(abs(v), floor)))

    xs = [float(r.x) for r in report.rows]
    top_series = [
        ("truth", [float(r.truth) for r in report.rows]),
        ("transform", [float(r.transform) for r in report.rows]),
        ("corrected", [float(r.corrected) for r in report.rows]),
    ]
    bottom_series = [
        ("resid_raw", [log_abs(r.residual_raw) for r in report.rows]),
        ("resid_corrected", [log_abs(r.residual_corrected) for r in report.rows]),
    ]
    m_label = "n/a" if report.m is None else str(report.m)
    height = 2 * _PANEL_H + 30
    parts = [
        '<?xml version="1.0" encoding="UTF-8" standalone="no"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{_W}" height="{height}" '
        f'viewBox="0 0 {_W} {height}" font-family="sans-serif">',
        f"<title>{escape(report.spectrum_name)} reconstruction</title>",
        f'<rect x="0" y="0" width="{_W}" height="{height}" fill="#ffffff"/>',
    ]
    parts += _panel(
        f"Reconstruction of {report.spectrum_name} (m = {m_label})",
        "value",
        top_series,
        xs,
        0,
        [("truth", "f(x)"), ("transform", "T[f](x)"), ("corrected", "T + E_0..E_m")],
    )
    parts += _panel(
        "Residuals",
        "log10 |residual|",
        bottom_series,
        xs,
        _PANEL_H,
        [
            ("resid_raw", f"raw, MAE {mp.nstr(report.mae_raw, 4)}"),
            ("resid_corrected", f"corrected, MAE {mp.nstr(report.mae_corrected, 4)}"),
        ],
    )
    parts.append(
        f'<text x="{_MARGIN_L}" y="{height - 10}" font-size="11">'
        f"mae_raw={escape(mp.nstr(report.mae_raw, 6))} "
        f"mae_corrected={escape(mp.nstr(report.mae_corrected, 6))} "
        f"digits={report.digits}</text>"
    )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def write_svg(report: GridReport, destination) -> None:
    """Write :func:`render_svg` output to a path or a text stream."""
    if len(report.rows) < 2:
        raise ValueError("an SVG report needs at least two grid points")
    _write_text(render_svg(report), destination)
