"""Plain-text snapshot files for scalar and vector fields.

Layout::

    # rank 1
    # lengths 6.283185307179586
    # points 8
    # t 0.0
    # kind scalar
    # columns re,im
    1.0000000000000000e+00,0.0000000000000000e+00
    ...

One row per grid point in row-major (C) order.  Vector files use the
columns ``rex,imx,rey,imy,rez,imz``.
"""
from __future__ import annotations

import numpy as np

from .errors import PreconditionError
from .fields import Grid, ScalarField, VectorField

SCALAR_COLUMNS = "re,im"
VECTOR_COLUMNS = "rex,imx,rey,imy,rez,imz"
FLOAT_FMT = "%.16e"


def write_snapshot(path, fld, t: float = 0.0) -> None:
    grid = fld.grid
    if isinstance(fld, ScalarField):
        flat = fld.values.reshape(-1)
        table = np.column_stack([flat.real, flat.imag])
        kind, columns = "scalar", SCALAR_COLUMNS
    else:
        flat = fld.components.reshape(3, -1)
        table = np.column_stack([part for comp in flat for part in (comp.real, comp.imag)])
        kind, columns = "vector", VECTOR_COLUMNS
    header = "\n".join([
        f"rank {grid.rank}",
        "lengths " + " ".join(repr(v) for v in grid.lengths),
        "points " + " ".join(str(v) for v in grid.points),
        f"t {float(t)!r}",
        f"kind {kind}",
        f"columns {columns}",
    ])
    np.savetxt(path, table, fmt=FLOAT_FMT, delimiter=",", header=header, comments="# ")


def read_snapshot(path):
    """Return ``(field, t)`` from a file written by :func:`write_snapshot`."""
    meta = {}
    with open(path) as fh:
        for line in fh:
            if not line.startswith("#"):
                break
            key, _, value = line[1:].strip().partition(" ")
            meta[key] = value.strip()
    try:
        rank = int(meta["rank"])
        lengths = [float(v) for v in meta["lengths"].split()]
        points = [int(v) for v in meta["points"].split()]
        t = float(meta["t"])
    except (KeyError, ValueError) as exc:
        raise PreconditionError(f"{path}: malformed snapshot header ({exc})") from None
    grid = Grid(rank, tuple(lengths), tuple(points))
    table = np.loadtxt(path, delimiter=",", comments="#", ndmin=2)
    if table.shape[0] != grid.size:
        raise PreconditionError(f"{path}: expected {grid.size} rows, found {table.shape[0]}")
    if table.shape[1] == 2:
        return ScalarField(grid, table[:, 0] + 1j * table[:, 1]), t
    if table.shape[1] == 6:
        comps = (table[:, 0::2] + 1j * table[:, 1::2]).T
        return VectorField(grid, comps.reshape((3,) + grid.shape)), t
    raise PreconditionError(f"{path}: expected 2 or 6 columns, found {table.shape[1]}")
