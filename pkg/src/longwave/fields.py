"""Periodic grids, complex fields, spectral derivatives and residual norms.

Everything in the package is built on the types defined here.  Fields are
always complex; real-valued physics simply carries zero imaginary parts.
Spatial derivatives are exact derivatives of the trigonometric interpolant,
time derivatives are centered second-order differences over a
:class:`FieldHistory`.

Wavenumber convention: mode index ``n`` in ``[-N/2, N/2)`` maps to
``k = 2*pi*n/L``.  First (odd-order) derivatives drop the Nyquist mode;
the Laplacian keeps it.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence, Union

import numpy as np

from .errors import MissingHistoryError, PreconditionError

__all__ = [
    "Constants",
    "Grid",
    "ScalarField",
    "VectorField",
    "FieldHistory",
    "ResidualReport",
    "make_grid",
    "spectral_derivative",
    "gradient",
    "divergence",
    "curl",
    "laplacian",
    "time_derivative",
    "wave_residual",
    "residual_norms",
    "mode_power",
    "imag_ratio",
]


@dataclass(frozen=True)
class Constants:
    """Physical constants.  Natural units (c = hbar = mu0 = 1) by default.

    ``eps0`` is derived from ``1/(mu0 c^2)`` when omitted.
    """

    c: float = 1.0
    hbar: float = 1.0
    mu0: float = 1.0
    eps0: float | None = None

    def __post_init__(self):
        for name in ("c", "hbar", "mu0"):
            if not getattr(self, name) > 0:
                raise PreconditionError(f"{name} must be positive, got {getattr(self, name)!r}")
        if self.eps0 is None:
            object.__setattr__(self, "eps0", 1.0 / (self.mu0 * self.c**2))
        elif abs(self.eps0 * self.mu0 * self.c**2 - 1.0) > 1e-12:
            raise PreconditionError("eps0 * mu0 * c**2 must equal 1 (to 1e-12)")

    @classmethod
    def si(cls) -> "Constants":
        return cls(c=299792458.0, hbar=1.054571817e-34, mu0=1.25663706212e-6)


@dataclass(frozen=True)
class Grid:
    """Uniform periodic box of rank 1 or 3."""

    rank: int
    lengths: tuple[float, ...]
    points: tuple[int, ...]

    def __post_init__(self):
        if self.rank not in (1, 3):
            raise PreconditionError(f"grid rank must be 1 or 3, got {self.rank}")
        lengths = tuple(float(v) for v in self.lengths)
        points = tuple(int(v) for v in self.points)
        if len(lengths) != self.rank or len(points) != self.rank:
            raise PreconditionError(
                f"rank-{self.rank} grid needs {self.rank} lengths and point counts"
            )
        for i, (length, n) in enumerate(zip(lengths, points)):
            if not length > 0 or not math.isfinite(length):
                raise PreconditionError(f"axis {i}: length must be positive, got {length}")
            if n < 4:
                raise PreconditionError(f"axis {i}: need at least 4 points, got {n}")
            if n % 2:
                raise PreconditionError(f"axis {i}: point count must be even, got {n}")
        object.__setattr__(self, "lengths", lengths)
        object.__setattr__(self, "points", points)

    @property
    def shape(self) -> tuple[int, ...]:
        return self.points

    @property
    def size(self) -> int:
        return int(np.prod(self.points))

    @property
    def spacing(self) -> tuple[float, ...]:
        return tuple(length / n for length, n in zip(self.lengths, self.points))

    @property
    def cell_volume(self) -> float:
        return float(np.prod(self.spacing))

    def _axis_shape(self, axis):
        shape = [1] * self.rank
        shape[axis] = self.points[axis]
        return tuple(shape)

    @cached_property
    def axes(self) -> tuple[np.ndarray, ...]:
        """1D coordinate arrays, one per axis, starting at 0."""
        return tuple(np.arange(n) * h for n, h in zip(self.points, self.spacing))

    @cached_property
    def coords(self) -> tuple[np.ndarray, ...]:
        """Broadcastable coordinate arrays (x, y, z); absent axes are 0."""
        out = [np.reshape(a, self._axis_shape(i)) for i, a in enumerate(self.axes)]
        while len(out) < 3:
            out.append(np.zeros((1,) * self.rank))
        return tuple(out)

    @cached_property
    def wavenumbers(self) -> tuple[np.ndarray, ...]:
        """Broadcastable angular wavenumbers per axis, Nyquist included."""
        return tuple(
            np.reshape(2 * np.pi * np.fft.fftfreq(n, d=h), self._axis_shape(i))
            for i, (n, h) in enumerate(zip(self.points, self.spacing))
        )

    @cached_property
    def odd_wavenumbers(self) -> tuple[np.ndarray, ...]:
        """Wavenumbers for first derivatives (Nyquist mode zeroed)."""
        out = []
        for i, k in enumerate(self.wavenumbers):
            k = k.copy()
            k.reshape(-1)[self.points[i] // 2] = 0.0
            out.append(k)
        return tuple(out)

    @cached_property
    def k_squared(self) -> np.ndarray:
        return sum(k**2 for k in self.wavenumbers)

    def meta(self) -> dict:
        return {"points": list(self.points), "lengths": list(self.lengths)}


def make_grid(rank: int, lengths: Sequence[float], points: Sequence[int]) -> Grid:
    """Build a periodic grid, e.g. ``make_grid(1, [2*np.pi], [8])``."""
    return Grid(rank, tuple(np.atleast_1d(lengths)), tuple(np.atleast_1d(points)))


def _operand(other):
    if isinstance(other, ScalarField):
        return other.values
    return other


@dataclass(frozen=True, eq=False)
class ScalarField:
    grid: Grid
    values: np.ndarray

    def __post_init__(self):
        values = np.array(self.values, dtype=complex)
        if values.shape != self.grid.shape:
            if values.size != self.grid.size:
                raise PreconditionError(
                    f"expected {self.grid.size} samples, got {values.size}"
                )
            values = values.reshape(self.grid.shape)
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @classmethod
    def zeros(cls, grid: Grid) -> "ScalarField":
        return cls(grid, np.zeros(grid.shape, dtype=complex))

    def _new(self, values):
        return ScalarField(self.grid, values)

    def __add__(self, other):
        return self._new(self.values + _operand(other))

    __radd__ = __add__

    def __sub__(self, other):
        return self._new(self.values - _operand(other))

    def __rsub__(self, other):
        return self._new(_operand(other) - self.values)

    def __mul__(self, other):
        if isinstance(other, VectorField):
            return other * self
        return self._new(self.values * _operand(other))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self._new(self.values / _operand(other))

    def __neg__(self):
        return self._new(-self.values)

    def conj(self) -> "ScalarField":
        return self._new(np.conj(self.values))

    def abs2(self) -> np.ndarray:
        return np.abs(self.values) ** 2

    def scale(self) -> float:
        return float(np.max(np.abs(self.values)))


def _vec(other, rank):
    """Broadcast a field, constant 3-vector or array to component form."""
    if isinstance(other, VectorField):
        return other.components
    arr = np.asarray(other)
    if arr.shape == (3,):
        return arr.reshape((3,) + (1,) * rank)
    return arr


@dataclass(frozen=True, eq=False)
class VectorField:
    grid: Grid
    components: np.ndarray

    def __post_init__(self):
        comps = np.array(self.components, dtype=complex)
        target = (3,) + self.grid.shape
        if comps.shape != target:
            try:
                if comps.size == 3 * self.grid.size:
                    comps = comps.reshape(target)
                else:
                    comps = np.broadcast_to(comps, target).copy()
            except ValueError:
                raise PreconditionError(
                    f"vector field needs 3 components of shape {self.grid.shape}"
                ) from None
        comps.setflags(write=False)
        object.__setattr__(self, "components", comps)

    @classmethod
    def zeros(cls, grid: Grid) -> "VectorField":
        return cls(grid, np.zeros((3,) + grid.shape, dtype=complex))

    @classmethod
    def from_components(cls, grid: Grid, x=0.0, y=0.0, z=0.0) -> "VectorField":
        comps = np.zeros((3,) + grid.shape, dtype=complex)
        for i, c in enumerate((x, y, z)):
            comps[i] = _operand(c)
        return cls(grid, comps)

    def __getitem__(self, i) -> ScalarField:
        return ScalarField(self.grid, self.components[i])

    def _new(self, comps):
        return VectorField(self.grid, comps)

    def __add__(self, other):
        return self._new(self.components + _vec(other, self.grid.rank))

    __radd__ = __add__

    def __sub__(self, other):
        return self._new(self.components - _vec(other, self.grid.rank))

    def __rsub__(self, other):
        return self._new(_vec(other, self.grid.rank) - self.components)

    def __mul__(self, other):
        # scalar or ScalarField multiplication only
        return self._new(self.components * _operand(other))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self._new(self.components / _operand(other))

    def __neg__(self):
        return self._new(-self.components)

    def dot(self, other) -> ScalarField:
        return ScalarField(self.grid, np.sum(self.components * _vec(other, self.grid.rank), axis=0))

    def cross(self, other) -> "VectorField":
        b = np.broadcast_to(_vec(other, self.grid.rank), self.components.shape)
        return self._new(np.cross(self.components, b, axis=0))

    def rcross(self, other) -> "VectorField":
        """``other x self``."""
        return -self.cross(other)

    def scale(self) -> float:
        return float(np.max(np.sqrt(np.sum(np.abs(self.components) ** 2, axis=0))))


Field = Union[ScalarField, VectorField]


@dataclass(frozen=True, eq=False)
class FieldHistory:
    """Snapshots of one field at uniform times ``t0 + i*dt``."""

    dt: float
    snapshots: tuple
    t0: float = 0.0

    def __post_init__(self):
        snaps = tuple(self.snapshots)
        if len(snaps) < 3:
            raise PreconditionError(
                f"a history needs at least 3 snapshots, got {len(snaps)}"
            )
        kinds = {type(s) for s in snaps}
        if len(kinds) != 1 or not kinds <= {ScalarField, VectorField}:
            raise PreconditionError("snapshots must all be ScalarField or all VectorField")
        grid = snaps[0].grid
        if any(s.grid != grid for s in snaps):
            raise PreconditionError("all snapshots must share one grid")
        if not self.dt > 0:
            raise PreconditionError(f"dt must be positive, got {self.dt}")
        object.__setattr__(self, "snapshots", snaps)

    @classmethod
    def sample(cls, fn, dt: float, n: int, t0: float = 0.0) -> "FieldHistory":
        """Build a history from ``fn(t) -> field`` at ``n`` uniform times."""
        return cls(dt, tuple(fn(t0 + i * dt) for i in range(n)), t0)

    @classmethod
    def constant(cls, fld: Field, dt: float = 1.0, n: int = 3) -> "FieldHistory":
        return cls(dt, (fld,) * n)

    @property
    def grid(self) -> Grid:
        return self.snapshots[0].grid

    @property
    def is_vector(self) -> bool:
        return isinstance(self.snapshots[0], VectorField)

    @property
    def times(self) -> np.ndarray:
        return self.t0 + self.dt * np.arange(len(self.snapshots))

    @property
    def interior(self) -> range:
        return range(1, len(self.snapshots) - 1)

    def __len__(self):
        return len(self.snapshots)

    def __getitem__(self, i):
        return self.snapshots[i]


@dataclass(frozen=True)
class ResidualReport:
    """Root-mean-square and max-abs norms of a residual field."""

    equation_id: str
    l2: float
    linf: float
    grid_meta: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"equation_id": self.equation_id, "l2": self.l2, "linf": self.linf,
                "grid_meta": self.grid_meta}


# -- spatial derivatives -------------------------------------------------------

def _fft(values, rank):
    return np.fft.fftn(values, axes=tuple(range(-rank, 0)))


def _ifft(values, rank):
    return np.fft.ifftn(values, axes=tuple(range(-rank, 0)))


def gradient(f: ScalarField) -> VectorField:
    grid = f.grid
    fh = _fft(f.values, grid.rank)
    comps = np.zeros((3,) + grid.shape, dtype=complex)
    for i, k in enumerate(grid.odd_wavenumbers):
        comps[i] = _ifft(1j * k * fh, grid.rank)
    return VectorField(grid, comps)


def divergence(a: VectorField) -> ScalarField:
    grid = a.grid
    total = np.zeros(grid.shape, dtype=complex)
    for i, k in enumerate(grid.odd_wavenumbers):
        total += 1j * k * _fft(a.components[i], grid.rank)
    return ScalarField(grid, _ifft(total, grid.rank))


def curl(a: VectorField) -> VectorField:
    grid = a.grid
    if grid.rank != 3:
        raise PreconditionError("curl needs a rank-3 grid")
    kx, ky, kz = grid.odd_wavenumbers
    ax, ay, az = (_fft(c, 3) for c in a.components)
    comps = np.stack([
        1j * (ky * az - kz * ay),
        1j * (kz * ax - kx * az),
        1j * (kx * ay - ky * ax),
    ])
    return VectorField(grid, _ifft(comps, 3))


def laplacian(f: Field) -> Field:
    grid = f.grid
    if isinstance(f, VectorField):
        return VectorField(grid, _ifft(-grid.k_squared * _fft(f.components, grid.rank), grid.rank))
    return ScalarField(grid, _ifft(-grid.k_squared * _fft(f.values, grid.rank), grid.rank))


def spectral_derivative(fld: Field, kind: str) -> Field:
    """Apply ``gradient``, ``divergence``, ``curl`` or ``laplacian`` spectrally."""
    if kind == "gradient":
        if not isinstance(fld, ScalarField):
            raise PreconditionError("gradient needs a ScalarField")
        return gradient(fld)
    if kind in ("divergence", "curl"):
        if not isinstance(fld, VectorField):
            raise PreconditionError(f"{kind} needs a VectorField")
        return divergence(fld) if kind == "divergence" else curl(fld)
    if kind == "laplacian":
        return laplacian(fld)
    raise PreconditionError(f"unknown derivative kind {kind!r}")


# -- time derivatives and residuals ------------------------------------------

def time_derivative(history: FieldHistory, order: int, at: int) -> Field:
    """Centered difference of ``order`` 1 or 2 at interior snapshot ``at``."""
    if order not in (1, 2):
        raise PreconditionError(f"order must be 1 or 2, got {order}")
    n = len(history)
    if not 1 <= at <= n - 2:
        raise PreconditionError(
            f"snapshot index {at} is not interior (need 1 <= at <= {n - 2})"
        )
    prev, now, nxt = history[at - 1], history[at], history[at + 1]
    if order == 1:
        return (nxt - prev) * (1.0 / (2 * history.dt))
    return (nxt - now * 2.0 + prev) * (1.0 / history.dt**2)


def require_history(obj, name: str) -> FieldHistory:
    if not isinstance(obj, FieldHistory):
        raise MissingHistoryError(f"{name} needs a FieldHistory for time derivatives")
    return obj


def _meta(grid: Grid, dt=None) -> dict:
    meta = grid.meta()
    meta["dt"] = dt
    return meta


def residual_norms(residual, equation_id: str, dt: float | None = None) -> ResidualReport:
    """Aggregate one residual field, or a sequence of them, into a report."""
    fields = [residual] if isinstance(residual, (ScalarField, VectorField)) else list(residual)
    if not fields:
        raise PreconditionError("no residual fields to aggregate")
    sq_sum = 0.0
    count = 0
    linf = 0.0
    for f in fields:
        arr = f.values if isinstance(f, ScalarField) else f.components
        mag2 = np.abs(arr) ** 2
        sq_sum += float(np.sum(mag2))
        count += mag2.size
        linf = max(linf, float(np.sqrt(np.max(mag2))))
    l2 = math.sqrt(sq_sum / count)
    # rounding in the mean can nudge l2 a hair above linf for uniform fields
    l2 = min(l2, linf)
    return ResidualReport(equation_id, l2, linf, _meta(fields[0].grid, dt))


def wave_residual_fields(history: FieldHistory, constants: Constants = Constants()) -> list:
    if history.is_vector:
        raise PreconditionError("wave_residual needs a scalar history")
    c2 = constants.c**2
    return [time_derivative(history, 2, i) * (1.0 / c2) - laplacian(history[i])
            for i in history.interior]


def wave_residual(history: FieldHistory, constants: Constants = Constants()) -> ResidualReport:
    """Residual of ``(1/c^2) f_tt - lap f`` over all interior snapshots."""
    return residual_norms(wave_residual_fields(history, constants), "wave", history.dt)


def mode_power(fld: Field) -> np.ndarray:
    """Per-mode power normalised so that its sum equals ``mean |f|^2``."""
    arr = fld.values if isinstance(fld, ScalarField) else fld.components
    n = fld.grid.size
    return np.abs(_fft(arr, fld.grid.rank)) ** 2 / n**2


def imag_ratio(fld: Field) -> float:
    """Largest imaginary part relative to the largest magnitude (0 for zero fields)."""
    arr = fld.values if isinstance(fld, ScalarField) else fld.components
    scale = float(np.max(np.abs(arr)))
    if scale == 0.0:
        return 0.0
    return float(np.max(np.abs(arr.imag))) / scale
