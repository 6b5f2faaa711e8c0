"""Flat-file point cloud format.

Files start with the header line ``# crofton-points v1 d=<d>`` followed by
one comma-separated point per line.  Floats are written with shortest
round-trip repr, so write -> read is lossless and byte-identical per seed.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from crofton.shapes import PointCloud

_HEADER_PREFIX = "# crofton-points v1 d="


class PointFormatError(ValueError):
    """Malformed point file; message carries the offending line number."""


def write_points(path, cloud: PointCloud) -> None:
    lines = [f"{_HEADER_PREFIX}{cloud.dimension}\n"]
    for row in cloud.points:
        lines.append(",".join(repr(float(v)) for v in row) + "\n")
    Path(path).write_text("".join(lines))


def read_points(path) -> PointCloud:
    text = Path(path).read_text()
    rows = text.splitlines()
    if not rows or not rows[0].startswith(_HEADER_PREFIX):
        raise PointFormatError(f"line 1: missing header '{_HEADER_PREFIX}<d>'")
    try:
        d = int(rows[0][len(_HEADER_PREFIX):])
    except ValueError:
        raise PointFormatError("line 1: malformed dimension in header") from None
    if d < 2:
        raise PointFormatError("line 1: dimension must be >= 2")
    pts = []
    for lineno, row in enumerate(rows[1:], start=2):
        row = row.strip()
        if not row or row.startswith("#"):
            continue
        parts = row.split(",")
        if len(parts) != d:
            raise PointFormatError(f"line {lineno}: expected {d} coordinates, "
                                   f"got {len(parts)}")
        try:
            pts.append([float(v) for v in parts])
        except ValueError:
            raise PointFormatError(f"line {lineno}: non-numeric coordinate") from None
    if not pts:
        raise PointFormatError("file has a header but no points")
    return PointCloud(d, np.array(pts, dtype=float), provenance="file")
