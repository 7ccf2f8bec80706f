"""Matter-side residuals: Dirac, telegraph, vacuum continuity, vorticity.

Spinors use the 1+1 dimensional representation

    alpha = [[0, 1], [1, 0]],   beta = [[1, 0], [0, -1]],

with ``alpha^2 = beta^2 = 1`` and ``alpha beta + beta alpha = 0``.  Plane
waves follow the ``exp i(w t - k x)`` convention.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import MissingHistoryError, PreconditionError
from .fields import (
    Constants,
    FieldHistory,
    Grid,
    ScalarField,
    VectorField,
    curl,
    divergence,
    gradient,
    laplacian,
    require_history,
    residual_norms,
    time_derivative,
)
from .gauge_em import GaugeWave

__all__ = [
    "ALPHA",
    "BETA",
    "SpinorField",
    "ContinuitySet",
    "FlowHistory",
    "VorticityResult",
    "dirac_residual",
    "alpha_v_constraint",
    "telegraph_residual",
    "telegraph_residual_fields",
    "continuity_residuals",
    "continuity_residual_fields",
    "continuity_invariance_residuals",
    "post_galilean_residuals",
    "post_galilean_fields",
    "transformed_continuity_fields",
    "vorticity",
    "dirac_plane_wave",
    "massless_spinor",
    "plane_wave_history",
]

ALPHA = np.array([[0.0, 1.0], [1.0, 0.0]])
BETA = np.array([[1.0, 0.0], [0.0, -1.0]])


@dataclass(frozen=True, eq=False)
class SpinorField:
    """Two-component spinor on a rank-1 grid, optionally with time histories."""

    up: ScalarField
    down: ScalarField
    history: tuple | None = None

    def __post_init__(self):
        if self.up.grid != self.down.grid:
            raise PreconditionError("spinor components must share a grid")
        if self.up.grid.rank != 1:
            raise PreconditionError("spinors live on rank-1 grids")
        if self.history is not None:
            hu, hd = self.history
            if len(hu) != len(hd) or hu.dt != hd.dt or hu.grid != hd.grid:
                raise PreconditionError("component histories must be aligned")

    @classmethod
    def from_histories(cls, up: FieldHistory, down: FieldHistory) -> "SpinorField":
        mid = len(up) // 2
        return cls(up[mid], down[mid], (up, down))

    @property
    def grid(self) -> Grid:
        return self.up.grid


@dataclass(frozen=True, eq=False)
class ContinuitySet:
    """Charge density, current and a boost velocity ``v``."""

    rho: object
    J: object
    v: tuple = (0.0, 0.0, 0.0)

    def __post_init__(self):
        v = np.asarray(self.v, dtype=float)
        if v.shape != (3,) or not np.all(np.isfinite(v)):
            raise PreconditionError("v must be a finite 3-vector")
        object.__setattr__(self, "v", tuple(v))
        if self.rho.grid != self.J.grid:
            raise PreconditionError("rho and J must share a grid")

    @property
    def grid(self) -> Grid:
        return self.rho.grid

    @property
    def velocity(self) -> np.ndarray:
        return np.array(self.v)


@dataclass(frozen=True, eq=False)
class FlowHistory:
    """Velocity samples ``v_of_t[i]`` at times ``t0 + i dt``; shape ``(n, 3, ...)``."""

    v_of_t: np.ndarray
    dt: float
    t0: float = 0.0

    def __post_init__(self):
        v = np.asarray(self.v_of_t, dtype=float)
        if v.ndim < 2 or v.shape[1] != 3:
            raise PreconditionError("velocity samples must have shape (n, 3, ...)")
        if v.shape[0] < 3:
            raise PreconditionError(f"need at least 3 velocity samples, got {v.shape[0]}")
        object.__setattr__(self, "v_of_t", v)


@dataclass(frozen=True, eq=False)
class VorticityResult:
    omega: np.ndarray
    times: np.ndarray
    velocity: np.ndarray
    acceleration: np.ndarray


def _spinor_histories(psi: SpinorField):
    if psi.history is None:
        raise MissingHistoryError("dirac_residual needs spinor histories")
    return psi.history


def _apply(matrix, up, down):
    return (matrix[0, 0] * up + matrix[0, 1] * down, matrix[1, 0] * up + matrix[1, 1] * down)


def _dx(f: ScalarField) -> ScalarField:
    return gradient(f)[0]


def dirac_residual(psi: SpinorField, m: float, constants: Constants = Constants()):
    """Norms of ``(1/c) psi_t + alpha psi_x + (i m c/hbar) beta psi`` over both components."""
    hu, hd = _spinor_histories(psi)
    c, hbar = constants.c, constants.hbar
    mass_term = 1j * m * c / hbar
    out = []
    for i in hu.interior:
        up, down = hu[i], hd[i]
        au, ad = _apply(ALPHA, _dx(up), _dx(down))
        bu, bd = _apply(BETA, up, down)
        out.append(time_derivative(hu, 1, i) * (1.0 / c) + au + bu * mass_term)
        out.append(time_derivative(hd, 1, i) * (1.0 / c) + ad + bd * mass_term)
    return residual_norms(out, "dirac", hu.dt)


def alpha_v_constraint(f: GaugeWave, grid: Grid, t: float = 0.0,
                       constants: Constants | None = None) -> dict:
    """Project ``-(1/c) f_t + alpha (grad f . vhat)`` onto the eigenvectors of alpha.

    Returns ``{+1: report, -1: report}``.  The +1 channel vanishes only for
    ``|v| = c``.
    """
    constants = constants or f.constants
    c = constants.c
    ft = f.f_t(grid, t)
    if ft.scale() == 0.0:
        raise PreconditionError("gauge function is constant in time; constraint is void")
    along = f.grad(grid, t).dot(f.direction)
    evals, evecs = np.linalg.eigh(ALPHA)
    out = {}
    for lam, u in zip(evals, evecs.T):
        # u^dagger M u with M = -(f_t/c) I + alpha * along
        proj = -(ft.values / c) * np.vdot(u, u) + along.values * np.vdot(u, ALPHA @ u)
        sign = int(round(lam))
        label = "alpha_v_plus" if sign > 0 else "alpha_v_minus"
        out[sign] = residual_norms(ScalarField(grid, proj), label)
    return out


def telegraph_residual_fields(history: FieldHistory, m: float, spinor_sign: int = 1,
                              constants: Constants = Constants()) -> list:
    hist = require_history(history, "psi")
    if spinor_sign not in (1, -1):
        raise PreconditionError("spinor_sign must be +1 or -1")
    c2 = constants.c**2
    damping = spinor_sign * 1j * m / constants.hbar
    return [time_derivative(hist, 2, i) * (1.0 / c2) - laplacian(hist[i])
            + time_derivative(hist, 1, i) * damping for i in hist.interior]


def telegraph_residual(history: FieldHistory, m: float, spinor_sign: int = 1,
                       constants: Constants = Constants()):
    """Norms of ``(1/c^2) psi_tt - lap psi + s (i m/hbar) psi_t``."""
    return residual_norms(telegraph_residual_fields(history, m, spinor_sign, constants),
                          "telegraph", history.dt)


# -- vacuum continuity ------------------------------------------------------------

def _histories(cs: ContinuitySet):
    rho = require_history(cs.rho, "rho")
    J = require_history(cs.J, "J")
    if len(rho) != len(J) or rho.dt != J.dt:
        raise PreconditionError("rho and J histories must share length and dt")
    return rho, J


def continuity_residual_fields(cs: ContinuitySet, constants: Constants = Constants()):
    """Lists of residual fields ``(R17, R18, R19)`` per interior snapshot.

    ``R17 = grad rho + J_t/c^2``, ``R18 = curl J``, ``R19 = div J + rho_t``.
    """
    rho, J = _histories(cs)
    c2 = constants.c**2
    r17, r18, r19 = [], [], []
    for i in rho.interior:
        r17.append(gradient(rho[i]) + time_derivative(J, 1, i) * (1.0 / c2))
        r18.append(curl(J[i]))
        r19.append(divergence(J[i]) + time_derivative(rho, 1, i))
    return r17, r18, r19


def continuity_residuals(cs: ContinuitySet, constants: Constants = Constants()) -> list:
    r17, r18, r19 = continuity_residual_fields(cs, constants)
    dt = cs.rho.dt
    return [residual_norms(r17, "continuity_grad_rho", dt),
            residual_norms(r18, "continuity_curl_J", dt),
            residual_norms(r19, "continuity_div_J", dt)]


def continuity_invariance_residuals(cs: ContinuitySet, f: GaugeWave,
                                    constants: Constants | None = None) -> list:
    """Residuals of ``grad f . J - f_t rho``, ``rho grad f - f_t J/c^2``, ``grad f x J``."""
    constants = constants or f.constants
    c2 = constants.c**2
    grid = cs.grid
    if isinstance(cs.rho, FieldHistory):
        times, n = cs.rho.times, len(cs.rho)
    else:
        times, n = np.array([0.0]), 1
    get = lambda obj, i: obj[i] if isinstance(obj, FieldHistory) else obj  # noqa: E731
    out = ([], [], [])
    for i in range(n):
        rho, J = get(cs.rho, i), get(cs.J, i)
        g, ft = f.grad(grid, times[i]), f.f_t(grid, times[i])
        out[0].append(g.dot(J) - ft * rho)
        out[1].append(g * rho - J * ft * (1.0 / c2))
        out[2].append(g.cross(J))
    dt = cs.rho.dt if isinstance(cs.rho, FieldHistory) else None
    names = ("grad_f_dot_J", "rho_grad_f", "grad_f_cross_J")
    return [residual_norms(o, name, dt) for o, name in zip(out, names)]


def post_galilean_fields(cs: ContinuitySet, constants: Constants = Constants(),
                         expanded: bool = False):
    """Per-snapshot residual fields of the two boosted continuity combinations.

    ``first = v . R17 + R19`` and ``second = R17 + (v/c^2) R19``.  With
    ``expanded`` each term is evaluated separately instead of recombining the
    grouped residuals.
    """
    v = cs.velocity
    c2 = constants.c**2
    if not expanded:
        r17, _, r19 = continuity_residual_fields(cs, constants)
        first = [a.dot(v) + b for a, b in zip(r17, r19)]
        second = [a + VectorField.from_components(a.grid, *(v / c2)) * b for a, b in zip(r17, r19)]
        return first, second
    rho, J = _histories(cs)
    first, second = [], []
    for i in rho.interior:
        grad_rho = gradient(rho[i])
        J_t = time_derivative(J, 1, i)
        rho_t = time_derivative(rho, 1, i)
        div_J = divergence(J[i])
        first.append(grad_rho.dot(v) + J_t.dot(v) * (1.0 / c2) + div_J + rho_t)
        vc2 = VectorField.from_components(rho.grid, *(v / c2))
        second.append(grad_rho + J_t * (1.0 / c2) + vc2 * div_J + vc2 * rho_t)
    return first, second


def post_galilean_residuals(cs: ContinuitySet, constants: Constants = Constants()) -> list:
    first, second = post_galilean_fields(cs, constants)
    dt = cs.rho.dt
    return [residual_norms(first, "post_galilean_scalar", dt),
            residual_norms(second, "post_galilean_vector", dt)]


def transformed_continuity_fields(cs: ContinuitySet, constants: Constants = Constants()):
    """Apply ``grad' = grad + (v/c^2) d/dt`` and ``d/dt' = d/dt + v . grad``.

    Returns per-snapshot ``(grad' rho + J_t'/c^2, div' J + rho_t')``.  The scalar
    one equals ``v . R17 + R19`` exactly; the vector one differs from
    ``R17 + (v/c^2) R19`` by ``[(v . grad) J - v (div J)]/c^2``.
    """
    rho, J = _histories(cs)
    v = cs.velocity
    c2 = constants.c**2
    vc2 = VectorField.from_components(rho.grid, *(v / c2))
    vec, scal = [], []
    for i in rho.interior:
        rho_t = time_derivative(rho, 1, i)
        J_t = time_derivative(J, 1, i)
        grads = [gradient(J[i][j]) for j in range(3)]  # grads[j][a] = d_a J_j
        v_dot_grad_J = VectorField.from_components(
            rho.grid, *(grads[j].dot(v).values for j in range(3)))
        vec.append(gradient(rho[i]) + vc2 * rho_t + (J_t + v_dot_grad_J) * (1.0 / c2))
        div_prime = divergence(J[i]) + J_t.dot(v) * (1.0 / c2)
        scal.append(div_prime + rho_t + gradient(rho[i]).dot(v))
    return vec, scal


# -- vorticity ------------------------------------------------------------------

def vorticity(flow: FlowHistory, constants: Constants = Constants()) -> VorticityResult:
    """``omega = (v/c^2) x (-dv/dt)`` at interior samples, centred differences."""
    v = flow.v_of_t
    acc = (v[2:] - v[:-2]) / (2 * flow.dt)
    mid = v[1:-1]
    omega = np.cross(mid / constants.c**2, -acc, axis=1)
    times = flow.t0 + flow.dt * np.arange(1, len(v) - 1)
    return VorticityResult(omega, times, mid, acc)


# -- fixtures ------------------------------------------------------------------

def dirac_plane_wave(grid: Grid, k: float, m: float, dt: float, n: int = 3, t0: float = 0.0,
                     branch: int = 1, constants: Constants = Constants()):
    """Plane-wave eigenspinor ``u exp i(w t - k x)`` with ``w = branch * c sqrt(k^2 + (mc/hbar)^2)``.

    Returns ``(SpinorField, omega)``.
    """
    mu = m * constants.c / constants.hbar
    lam = branch * np.hypot(k, mu)
    # eigenvector of k alpha - mu beta for eigenvalue lam
    u = np.array([k, lam + mu]) if abs(lam + mu) > abs(lam - mu) else np.array([lam - mu, k])
    u = u / np.linalg.norm(u)
    omega = constants.c * lam
    hist = plane_wave_history(grid, k, omega, dt, n, t0)
    up = FieldHistory(dt, [s * u[0] for s in hist.snapshots], t0)
    down = FieldHistory(dt, [s * u[1] for s in hist.snapshots], t0)
    return SpinorField.from_histories(up, down), omega


def massless_spinor(grid: Grid, profile, dt: float, n: int = 3, t0: float = 0.0,
                    direction: int = 1, constants: Constants = Constants()) -> SpinorField:
    """``w g(x - direction c t)`` with ``w`` the ``direction`` eigenvector of alpha.

    ``profile`` maps positions to samples and should be periodic on the grid.
    """
    (x,), (length,) = grid.axes, grid.lengths
    w = np.array([1.0, float(direction)]) / np.sqrt(2)
    snaps = [profile((x - direction * constants.c * (t0 + i * dt)) % length) for i in range(n)]
    up = FieldHistory(dt, [ScalarField(grid, w[0] * s) for s in snaps], t0)
    down = FieldHistory(dt, [ScalarField(grid, w[1] * s) for s in snaps], t0)
    return SpinorField.from_histories(up, down)


def plane_wave_history(grid: Grid, k: float, omega: float, dt: float, n: int = 3,
                       t0: float = 0.0) -> FieldHistory:
    """Samples of ``exp i(omega t - k x)`` along the first axis."""
    x = np.broadcast_to(grid.coords[0], grid.shape)
    return FieldHistory.sample(lambda t: ScalarField(grid, np.exp(1j * (omega * t - k * x))),
                               dt, n, t0)
