"""Output helpers: atomic writes, run manifests, tidy CSV and a bare SVG
line chart."""
from __future__ import annotations

import csv
import io
import json
import os
import tempfile
from pathlib import Path

from . import __version__

MANIFEST = "manifest.json"
CSV_SCHEMA_VERSION = 1


class ManifestError(ValueError):
    pass


def atomic_write(path, data) -> Path:
    """Write bytes or text to a temporary file in the target directory and
    rename it into place."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    if isinstance(data, str):
        data = data.encode("utf-8")
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


def json_text(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, default=_jsonable) + "\n"


def _jsonable(x):
    if hasattr(x, "tolist"):
        return x.tolist()
    if hasattr(x, "item"):
        return x.item()
    if isinstance(x, (set, frozenset, tuple)):
        return list(x)
    raise TypeError(f"cannot serialise {type(x).__name__}")


def write_json(path, obj) -> Path:
    return atomic_write(path, json_text(obj))


def _fmt(v) -> str:
    if isinstance(v, float):
        return repr(v)
    if hasattr(v, "item"):
        return _fmt(v.item())
    return str(v)


def csv_text(rows, columns, comments=()) -> str:
    """CSV with a fixed column order; ``comments`` become leading '#' lines.
    Floats are written with repr so the output round-trips exactly."""
    buf = io.StringIO()
    buf.write(f"# schema_version={CSV_SCHEMA_VERSION}\n")
    for c in comments:
        buf.write(f"# {c}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([_fmt(row[c]) for c in columns])
    return buf.getvalue()


def write_csv(path, rows, columns, comments=()) -> Path:
    return atomic_write(path, csv_text(rows, columns, comments))


def read_csv(path) -> tuple[list[dict], list[str]]:
    """Rows (as dicts of strings) and the comment lines of a CSV written by
    :func:`write_csv`."""
    comments, body = [], []
    with open(path) as fh:
        for line in fh:
            if line.startswith("#"):
                comments.append(line[1:].strip())
            else:
                body.append(line)
    return list(csv.DictReader(body)), comments


def manifest(command: str, config: dict) -> dict:
    return {"command": command, "config": config, "version": __version__, "seed": config.get("seed")}


def write_manifest(outdir, command: str, config: dict) -> Path:
    return write_json(Path(outdir) / MANIFEST, manifest(command, config))


def read_manifest(outdir) -> dict:
    path = Path(outdir) / MANIFEST
    if not path.is_file():
        raise ManifestError(f"no {MANIFEST} in {outdir}")
    try:
        man = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise ManifestError(f"unreadable manifest: {exc}") from exc
    for key in ("command", "config", "version"):
        if key not in man:
            raise ManifestError(f"manifest lacks {key!r}")
    if man["version"] != __version__:
        raise ManifestError(f"manifest version {man['version']} does not match {__version__}")
    return man


def svg_line_chart(series, title: str = "", xlabel: str = "", ylabel: str = "",
                   width: int = 480, height: int = 320) -> str:
    """Static SVG with one polyline (and point markers) per series.
    ``series`` is a list of (label, xs, ys)."""
    pad = 48
    xs_all = [float(x) for _, xs, _ in series for x in xs]
    ys_all = [float(y) for _, _, ys in series for y in ys]
    if not xs_all:
        raise ValueError("nothing to plot")
    x0, x1 = min(xs_all), max(xs_all)
    y0, y1 = min(ys_all), max(ys_all)
    if x1 == x0:
        x1 = x0 + 1.0
    if y1 == y0:
        y1 = y0 + 1.0

    def sx(x):
        return pad + (float(x) - x0) / (x1 - x0) * (width - 2 * pad)

    def sy(y):
        return height - pad - (float(y) - y0) / (y1 - y0) * (height - 2 * pad)

    colours = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e")
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
           f'viewBox="0 0 {width} {height}">',
           f'<rect width="{width}" height="{height}" fill="white"/>',
           f'<line x1="{pad}" y1="{height - pad}" x2="{width - pad}" y2="{height - pad}" stroke="black"/>',
           f'<line x1="{pad}" y1="{pad}" x2="{pad}" y2="{height - pad}" stroke="black"/>',
           f'<text x="{width / 2:.1f}" y="{pad / 2:.1f}" text-anchor="middle" font-size="14">{title}</text>',
           f'<text x="{width / 2:.1f}" y="{height - 10}" text-anchor="middle" font-size="12">{xlabel}</text>',
           f'<text x="14" y="{height / 2:.1f}" text-anchor="middle" font-size="12" '
           f'transform="rotate(-90 14 {height / 2:.1f})">{ylabel}</text>',
           f'<text x="{pad}" y="{height - pad + 14}" font-size="10">{x0:.4g}</text>',
           f'<text x="{width - pad}" y="{height - pad + 14}" text-anchor="end" font-size="10">{x1:.4g}</text>',
           f'<text x="{pad - 4}" y="{height - pad}" text-anchor="end" font-size="10">{y0:.4g}</text>',
           f'<text x="{pad - 4}" y="{pad + 4}" text-anchor="end" font-size="10">{y1:.4g}</text>']
    for n, (label, xs, ys) in enumerate(series):
        col = colours[n % len(colours)]
        pts = " ".join(f"{sx(x):.2f},{sy(y):.2f}" for x, y in zip(xs, ys))
        out.append(f'<polyline fill="none" stroke="{col}" stroke-width="1.5" points="{pts}"/>')
        for x, y in zip(xs, ys):
            out.append(f'<circle cx="{sx(x):.2f}" cy="{sy(y):.2f}" r="2" fill="{col}"/>')
        out.append(f'<text x="{width - pad}" y="{pad + 14 * (n + 1)}" text-anchor="end" font-size="10" '
                   f'fill="{col}">{label}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
