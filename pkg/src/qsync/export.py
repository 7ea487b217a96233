"""CSV, JSON and standalone SVG writers.

Every writer is byte-deterministic: no timestamps, fixed number formatting
(17 significant digits in data files) and fixed element order.
"""
from __future__ import annotations

import io
import json
from dataclasses import asdict
from pathlib import Path

import numpy as np

from . import __version__
from .phase_space import QSurface, SyncProfile
from .sweep import SweepResult, Trajectory


def fmt(value) -> str:
    # + 0.0 folds -0 into 0
    return format(float(value) + 0.0, ".17g")


def _write(path, text: str) -> Path:
    path = Path(path)
    try:
        if path.parent and not path.parent.exists():
            path.parent.mkdir(parents=True)
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc.strerror or exc}") from exc
    return path


def _fixed_line(cfg) -> str:
    return (f"# fixed: n_qubits={cfg.n_qubits} coupling={cfg.coupling!r} "
            f"spectral_width={cfg.spectral_width!r} detuning={cfg.detuning!r}")


def _header(quantity: str, lines: list[str], echo: str | None) -> str:
    out = [f"# qsync {__version__}", f"# quantity: {quantity}"]
    out.extend(lines)
    if echo:
        out.extend(f"# config: {line}" for line in echo.splitlines())
    return "\n".join(out) + "\n"


def csv_text(obj, echo: str | None = None) -> str:
    """Render a result object as CSV text with ``#`` metadata lines."""
    buf = io.StringIO()
    if isinstance(obj, SweepResult):
        meta = [f"# x_axis: {obj.x_axis.to_text()}"]
        if obj.y_axis is not None:
            meta.append(f"# y_axis: {obj.y_axis.to_text()}")
        meta.append(_fixed_line(obj.fixed))
        meta.extend(f"# {k}: {v!r}" for k, v in sorted(obj.params.items()))
        meta.append(f"# config_hash: {obj.metadata['config_hash']}")
        buf.write(_header(obj.quantity, meta, echo))
        xs = obj.x_axis.values()
        if obj.y_axis is None:
            name = "t" if obj.x_axis.name == "time" else obj.x_axis.name
            buf.write(f"{name},{obj.quantity}\n")
            for x, v in zip(xs, obj.values[0]):
                buf.write(f"{fmt(x)},{fmt(v)}\n")
        else:
            buf.write(f"{obj.y_axis.name}\\{obj.x_axis.name}," + ",".join(fmt(x) for x in xs) + "\n")
            for y, row in zip(obj.y_axis.values(), obj.values):
                buf.write(fmt(y) + "," + ",".join(fmt(v) for v in row) + "\n")
    elif isinstance(obj, Trajectory):
        buf.write(_header("bloch", [_fixed_line(obj.fixed)], echo))
        buf.write("t,nx,ny,nz\n")
        for t, (nx, ny, nz) in zip(obj.times, obj.components):
            buf.write(f"{fmt(t)},{fmt(nx)},{fmt(ny)},{fmt(nz)}\n")
    elif isinstance(obj, SyncProfile):
        meta = [f"# s_max: {fmt(obj.s_max)}", f"# phi_star: {fmt(obj.phi_star)}"]
        buf.write(_header("S(phi)", meta, echo))
        buf.write("phi,S\n")
        for p, s in zip(obj.phis, obj.s_values):
            buf.write(f"{fmt(p)},{fmt(s)}\n")
    elif isinstance(obj, (list, tuple)) and obj and all(isinstance(q, QSurface) for q in obj):
        meta = [f"# grid: {obj[0].grid.shape[0]} theta x {obj[0].grid.shape[1]} phi"]
        buf.write(_header("husimi_q", meta, echo))
        buf.write("t,theta,phi,q\n")
        for surface in obj:
            t = fmt(surface.time if surface.time is not None else float("nan"))
            for theta, row in zip(surface.grid.thetas, surface.values):
                th = fmt(theta)
                for phi, q in zip(surface.grid.phis, row):
                    buf.write(f"{t},{th},{fmt(phi)},{fmt(q)}\n")
    elif isinstance(obj, QSurface):
        return csv_text([obj], echo)
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__} to CSV")
    return buf.getvalue()


def emit_csv(obj, path, echo: str | None = None) -> Path:
    return _write(path, csv_text(obj, echo))


def _json_ready(obj):
    if isinstance(obj, SweepResult):
        return {
            "quantity": obj.quantity,
            "x_axis": asdict(obj.x_axis),
            "x": obj.x_axis.values().tolist(),
            "y_axis": None if obj.y_axis is None else asdict(obj.y_axis),
            "y": None if obj.y_axis is None else obj.y_axis.values().tolist(),
            "fixed": asdict(obj.fixed),
            "params": {k: (repr(v) if isinstance(v, complex) else v) for k, v in obj.params.items()},
            "metadata": obj.metadata,
            "values": obj.values.tolist(),
        }
    if isinstance(obj, Trajectory):
        return {"quantity": "bloch", "fixed": asdict(obj.fixed), "t": obj.times.tolist(),
                "nx": obj.components[:, 0].tolist(), "ny": obj.components[:, 1].tolist(),
                "nz": obj.components[:, 2].tolist()}
    if isinstance(obj, SyncProfile):
        return {"quantity": "S(phi)", "phi": obj.phis.tolist(), "S": obj.s_values.tolist(),
                "s_max": obj.s_max, "phi_star": obj.phi_star}
    if isinstance(obj, QSurface):
        return {"quantity": "husimi_q", "t": obj.time, "theta": obj.grid.thetas.tolist(),
                "phi": obj.grid.phis.tolist(), "values": obj.values.tolist()}
    if isinstance(obj, (list, tuple)):
        return [_json_ready(o) for o in obj]
    if isinstance(obj, dict):
        return obj
    raise TypeError(f"cannot serialize {type(obj).__name__} to JSON")


def emit_json(obj, path, echo: str | None = None) -> Path:
    doc = {"tool": f"qsync {__version__}", "data": _json_ready(obj)}
    if echo:
        doc["config"] = echo
    return _write(path, json.dumps(doc, indent=1, sort_keys=True) + "\n")


# viridis anchor colours, interpolated linearly
_RAMP = np.array([
    (68, 1, 84), (72, 40, 120), (62, 74, 137), (49, 104, 142), (38, 130, 142),
    (31, 158, 137), (53, 183, 121), (110, 206, 88), (181, 222, 43), (253, 231, 37),
], dtype=float)


def ramp_color(fraction: float) -> str:
    f = min(max(float(fraction), 0.0), 1.0) * (len(_RAMP) - 1)
    i = min(int(f), len(_RAMP) - 2)
    rgb = _RAMP[i] + (f - i) * (_RAMP[i + 1] - _RAMP[i])
    r, g, b = (int(round(c)) for c in rgb)
    return f"#{r:02x}{g:02x}{b:02x}"


def _num(v: float) -> str:
    return f"{v:.2f}".rstrip("0").rstrip(".")


def _tick(v: float) -> str:
    return f"{v:.3g}"


def _escape(text: str) -> str:
    return text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


_W, _H = 640, 500
_PX, _PY, _PW, _PH = 80, 40, 420, 380


def _axes_svg(xlo, xhi, ylo, yhi, xlabel, ylabel, parts):
    parts.append(f'<rect x="{_PX}" y="{_PY}" width="{_PW}" height="{_PH}" fill="none" stroke="#000"/>')
    for k in range(5):
        fx = k / 4
        x = _PX + fx * _PW
        parts.append(f'<line x1="{_num(x)}" y1="{_PY + _PH}" x2="{_num(x)}" y2="{_PY + _PH + 5}" stroke="#000"/>')
        parts.append(f'<text x="{_num(x)}" y="{_PY + _PH + 18}" text-anchor="middle">'
                     f'{_tick(xlo + fx * (xhi - xlo))}</text>')
        y = _PY + _PH - fx * _PH
        parts.append(f'<line x1="{_PX - 5}" y1="{_num(y)}" x2="{_PX}" y2="{_num(y)}" stroke="#000"/>')
        parts.append(f'<text x="{_PX - 8}" y="{_num(y + 4)}" text-anchor="end">'
                     f'{_tick(ylo + fx * (yhi - ylo))}</text>')
    parts.append(f'<text x="{_PX + _PW / 2:.0f}" y="{_PY + _PH + 38}" text-anchor="middle">{_escape(xlabel)}</text>')
    parts.append(f'<text x="20" y="{_PY + _PH / 2:.0f}" text-anchor="middle" '
                 f'transform="rotate(-90 20 {_PY + _PH / 2:.0f})">{_escape(ylabel)}</text>')


def _svg_doc(parts, title) -> str:
    head = (f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_H}" '
            f'viewBox="0 0 {_W} {_H}" font-family="sans-serif" font-size="11">')
    body = [head, f'<rect width="{_W}" height="{_H}" fill="#fff"/>']
    if title:
        body.append(f'<text x="{_PX + _PW / 2:.0f}" y="24" text-anchor="middle" font-size="13">'
                    f'{_escape(title)}</text>')
    body.extend(parts)
    body.append("</svg>")
    return "\n".join(body) + "\n"


def heatmap_svg(matrix, x_range, y_range, xlabel, ylabel, title="", vmin=None, vmax=None) -> str:
    """Standalone SVG heatmap; ``matrix[row, col]`` with row 0 at the bottom."""
    matrix = np.asarray(matrix, dtype=float)
    if not np.all(np.isfinite(matrix)):
        raise ValueError("heatmap data must be finite")
    lo = float(matrix.min()) if vmin is None else float(vmin)
    hi = float(matrix.max()) if vmax is None else float(vmax)
    span = hi - lo
    ny, nx = matrix.shape
    cw, ch = _PW / nx, _PH / ny
    parts = ['<g shape-rendering="crispEdges">']
    for r in range(ny):
        y = _PY + _PH - (r + 1) * ch
        for c in range(nx):
            frac = 0.5 if span <= 0 else (matrix[r, c] - lo) / span
            parts.append(f'<rect x="{_num(_PX + c * cw)}" y="{_num(y)}" width="{_num(cw + 0.05)}" '
                         f'height="{_num(ch + 0.05)}" fill="{ramp_color(frac)}"/>')
    parts.append("</g>")
    _axes_svg(x_range[0], x_range[1], y_range[0], y_range[1], xlabel, ylabel, parts)

    bx, bw = _PX + _PW + 25, 18
    if span <= 0:
        parts.append(f'<rect x="{bx}" y="{_PY}" width="{bw}" height="{_PH}" fill="{ramp_color(0.5)}" stroke="#000"/>')
        parts.append(f'<text x="{bx + bw + 4}" y="{_PY + _PH / 2 + 4:.0f}">{_tick(lo)}</text>')
    else:
        steps = 64
        for k in range(steps):
            y = _PY + _PH - (k + 1) * _PH / steps
            parts.append(f'<rect x="{bx}" y="{_num(y)}" width="{bw}" height="{_num(_PH / steps + 0.05)}" '
                         f'fill="{ramp_color((k + 0.5) / steps)}"/>')
        parts.append(f'<rect x="{bx}" y="{_PY}" width="{bw}" height="{_PH}" fill="none" stroke="#000"/>')
        parts.append(f'<text x="{bx + bw + 4}" y="{_PY + 8}">{_tick(hi)}</text>')
        parts.append(f'<text x="{bx + bw + 4}" y="{_PY + _PH}">{_tick(lo)}</text>')
    return _svg_doc(parts, title)


def emit_svg_heatmap(result, path, title: str = "", vmin=None, vmax=None) -> Path:
    if isinstance(result, SweepResult):
        if result.y_axis is None:
            raise ValueError("heatmap needs a two-dimensional sweep")
        x, y = result.x_axis, result.y_axis
        text = heatmap_svg(result.values, (x.min, x.max), (y.min, y.max), x.label, y.label,
                           title or result.quantity, vmin, vmax)
    elif isinstance(result, QSurface):
        g = result.grid
        text = heatmap_svg(result.values, (g.phis[0], g.phis[-1]), (g.thetas[0], g.thetas[-1]),
                           "φ", "θ", title or "Husimi Q", vmin, vmax)
    else:
        raise TypeError(f"cannot render {type(result).__name__} as a heatmap")
    return _write(path, text)


_LINE_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")


def lines_svg(series, xlabel: str, ylabel: str, title: str = "") -> str:
    """Line plot of ``[(label, xs, ys), ...]`` sharing one set of axes."""
    xs_all = np.concatenate([np.asarray(s[1], dtype=float) for s in series])
    ys_all = np.concatenate([np.asarray(s[2], dtype=float) for s in series])
    xlo, xhi = float(xs_all.min()), float(xs_all.max())
    ylo, yhi = float(ys_all.min()), float(ys_all.max())
    if xhi == xlo:
        xhi = xlo + 1.0
    if yhi == ylo:
        ylo, yhi = ylo - 0.5, yhi + 0.5
    parts = []
    for k, (label, xs, ys) in enumerate(series):
        px = _PX + (np.asarray(xs, dtype=float) - xlo) / (xhi - xlo) * _PW
        py = _PY + _PH - (np.asarray(ys, dtype=float) - ylo) / (yhi - ylo) * _PH
        pts = " ".join(f"{_num(a)},{_num(b)}" for a, b in zip(px, py))
        color = _LINE_COLORS[k % len(_LINE_COLORS)]
        parts.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.2" points="{pts}"/>')
        parts.append(f'<text x="{_PX + _PW + 10}" y="{_PY + 12 + 14 * k}" fill="{color}">{_escape(label)}</text>')
    _axes_svg(xlo, xhi, ylo, yhi, xlabel, ylabel, parts)
    return _svg_doc(parts, title)


def emit_svg_lines(obj, path, title: str = "") -> Path:
    if isinstance(obj, Trajectory):
        series = [(name, obj.times, obj.components[:, k]) for k, name in enumerate(("nx", "ny", "nz"))]
        text = lines_svg(series, "γ₀t", "Bloch component", title or "Bloch trajectory")
    elif isinstance(obj, SweepResult) and obj.y_axis is None:
        text = lines_svg([(obj.quantity, obj.x_axis.values(), obj.values[0])], obj.x_axis.label,
                         obj.quantity, title)
    else:
        raise TypeError(f"cannot render {type(obj).__name__} as a line plot")
    return _write(path, text)
