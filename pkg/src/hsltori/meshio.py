"""Mesh and point-cloud export of a sampled torus.

CSV4D keeps the full R^4 data; OBJ and PLY store a projection to R^3 with
quad faces that wrap around both periods of the grid.
"""

from __future__ import annotations

import csv
import warnings
from pathlib import Path

import numpy as np

from .immersion import SurfaceSample

__all__ = ["PROJECTIONS", "export_mesh", "project", "quad_faces", "read_csv4d"]

PROJECTIONS = ("drop1", "drop2", "drop3", "drop4", "stereo")


def _g(x) -> str:
    return format(float(x), ".17g")


def project(f: np.ndarray, projection: str = "drop4") -> np.ndarray:
    """Map points of R^4 (shape (..., 4)) to R^3.

    ``dropk`` deletes coordinate k.  ``stereo`` projects f/|f| from the pole
    (0, 0, 0, 1); if any |f| vanishes (below 1e-12 of the largest, as at the
    base point) it falls back to drop4 with a warning.
    """
    f = np.asarray(f, dtype=float)
    if projection not in PROJECTIONS:
        raise ValueError(f"unknown projection {projection!r}; choose from {PROJECTIONS}")
    if projection == "stereo":
        r = np.linalg.norm(f, axis=-1, keepdims=True)
        if np.any(r <= 1e-12 * r.max()) or r.max() == 0:
            warnings.warn("|f| = 0 at a node: stereographic projection undefined, using drop4", stacklevel=2)
            projection = "drop4"
        else:
            x = f / r
            den = 1.0 - x[..., 3:]
            if np.any(np.abs(den) < 1e-300):
                warnings.warn("a node sits on the projection pole, using drop4", stacklevel=2)
                projection = "drop4"
            else:
                return x[..., :3] / den
    k = int(projection[-1]) - 1
    return np.delete(f, k, axis=-1)


def quad_faces(n1: int, n2: int) -> np.ndarray:
    """Zero-based quads of the periodic n1 x n2 grid, vertex index ``i*n2 + j``."""
    i, j = np.meshgrid(np.arange(n1), np.arange(n2), indexing="ij")
    i, j = i.ravel(), j.ravel()
    ip, jp = (i + 1) % n1, (j + 1) % n2
    return np.stack([i * n2 + j, ip * n2 + j, ip * n2 + jp, i * n2 + jp], axis=1)


def export_mesh(S: SurfaceSample, format: str, projection: str = "drop4", path=None) -> Path:
    """Write S as OBJ, PLY or CSV4D and return the path."""
    fmt = format.lower()
    if fmt not in ("obj", "ply", "csv4d"):
        raise ValueError(f"unknown mesh format {format!r}")
    path = Path(path if path is not None else f"torus.{'csv' if fmt == 'csv4d' else fmt}")
    if fmt == "csv4d":
        rows = np.concatenate([S.uv.reshape(-1, 2), S.f.reshape(-1, 4)], axis=1)
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["u", "v", "f1", "f2", "f3", "f4"])
            w.writerows([[_g(x) for x in r] for r in rows])
        return path
    P = project(S.f.reshape(-1, 4), projection)
    F = quad_faces(S.n1, S.n2)
    lines = []
    if fmt == "obj":
        lines.append(f"# torus {S.n1}x{S.n2}, projection {projection}")
        lines += ["v " + " ".join(_g(x) for x in p) for p in P]
        lines += ["f " + " ".join(str(k + 1) for k in q) for q in F]
    else:
        lines += [
            "ply",
            "format ascii 1.0",
            f"element vertex {len(P)}",
            "property double x",
            "property double y",
            "property double z",
            f"element face {len(F)}",
            "property list uchar int vertex_indices",
            "end_header",
        ]
        lines += [" ".join(_g(x) for x in p) for p in P]
        lines += ["4 " + " ".join(str(k) for k in q) for q in F]
    path.write_text("\n".join(lines) + "\n")
    return path


def read_csv4d(path) -> tuple[np.ndarray, np.ndarray]:
    """Return (uv, f) as flat arrays of shape (n, 2) and (n, 4)."""
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    return data[:, :2], data[:, 2:]
