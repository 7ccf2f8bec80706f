"""Gauge functions, Maxwell residuals and the longitudinal energy law.

Every check here returns residual norms rather than asserting that an
equation holds.  Time derivatives come from centred differences over a
:class:`~longwave.fields.FieldHistory`; a :class:`GaugeWave` instead carries
closed-form derivatives.

A gauge wave ``f = a * w(k (x.vhat + (c^2/|v|) t))`` satisfies
``grad f = (v/c^2) df/dt`` identically.  It solves the free wave equation
only when ``|v| = c``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import PreconditionError
from .fields import (
    Constants,
    FieldHistory,
    Grid,
    ResidualReport,
    ScalarField,
    VectorField,
    _fft,
    _ifft,
    curl,
    divergence,
    gradient,
    require_history,
    residual_norms,
    time_derivative,
)

__all__ = [
    "EMFieldSet",
    "Potentials",
    "GaugeWave",
    "EnergyDensityFlux",
    "make_gauge_wave",
    "maxwell_residuals",
    "invariance_condition_residuals",
    "boost_consistency_residual",
    "gauge_transform",
    "lorenz_residual",
    "lorenz_residual_fields",
    "helmholtz_decompose",
    "energy_density_flux",
    "energy_conservation_residual",
    "fields_from_potentials",
    "plane_em_wave",
    "plane_em_fieldset",
    "static_coulomb_like",
    "plane_wave_potentials",
    "potentials_from_gauge_wave",
]

_WAVEFORMS = {
    "sin": (np.sin, np.cos, lambda x: -np.sin(x)),
    "cos": (np.cos, lambda x: -np.sin(x), lambda x: -np.cos(x)),
}


# -- containers ---------------------------------------------------------------

def _at(obj, i):
    """Snapshot ``i`` of a history, or the field itself when static."""
    if isinstance(obj, FieldHistory):
        return obj[i]
    return obj


def _check_aligned(reference: FieldHistory, *others):
    for other in others:
        if isinstance(other, FieldHistory):
            if len(other) != len(reference) or other.dt != reference.dt:
                raise PreconditionError("histories must share length and dt")
            if other.grid != reference.grid:
                raise PreconditionError("histories must share a grid")


@dataclass(frozen=True, eq=False)
class EMFieldSet:
    """Electromagnetic fields.  Each entry is a static field or a history.

    ``rho`` and ``J`` default to zero.  ``t`` is the time of static fields.
    """

    E: object
    B: object
    rho: object = None
    J: object = None
    t: float = 0.0

    def __post_init__(self):
        grid = self.grid
        if grid.rank != 3:
            raise PreconditionError("electromagnetic fields need a rank-3 grid")
        for name in ("B", "rho", "J"):
            obj = getattr(self, name)
            if obj is not None and obj.grid != grid:
                raise PreconditionError(f"{name} is on a different grid than E")

    @property
    def grid(self) -> Grid:
        return self.E.grid

    def times(self) -> np.ndarray:
        for obj in (self.E, self.B):
            if isinstance(obj, FieldHistory):
                return obj.times
        return np.array([self.t])

    def snapshot(self, i):
        return _at(self.E, i), _at(self.B, i)


@dataclass(frozen=True, eq=False)
class Potentials:
    """Vector and scalar potentials, static fields or histories."""

    A: object
    phi: object
    t: float = 0.0

    def __post_init__(self):
        if self.A.grid != self.phi.grid:
            raise PreconditionError("A and phi must share a grid")
        if isinstance(self.A, FieldHistory) and isinstance(self.phi, FieldHistory):
            _check_aligned(self.phi, self.A)

    @property
    def grid(self) -> Grid:
        return self.A.grid

    def times(self) -> np.ndarray:
        for obj in (self.phi, self.A):
            if isinstance(obj, FieldHistory):
                return obj.times
        return np.array([self.t])


@dataclass(frozen=True, eq=False)
class EnergyDensityFlux:
    u: ScalarField
    S: VectorField


@dataclass(frozen=True)
class GaugeWave:
    """Travelling gauge function locked to a velocity ``v``.

    ``f(x, t) = amplitude * waveform(k * (x . vhat + (c^2/|v|) t))``
    """

    v: tuple
    k: float
    amplitude: float = 1.0
    waveform: str = "sin"
    constants: Constants = field(default_factory=Constants)

    def __post_init__(self):
        v = tuple(float(x) for x in np.broadcast_to(np.asarray(self.v, dtype=float), (3,)))
        object.__setattr__(self, "v", v)
        if not np.linalg.norm(v) > 0:
            raise PreconditionError("gauge wave needs |v| > 0 (the constraint degenerates at v = 0)")
        if self.waveform not in _WAVEFORMS:
            raise PreconditionError(f"waveform must be 'sin' or 'cos', got {self.waveform!r}")

    @property
    def velocity(self) -> np.ndarray:
        return np.array(self.v)

    @property
    def speed(self) -> float:
        return float(np.linalg.norm(self.v))

    @property
    def direction(self) -> np.ndarray:
        return self.velocity / self.speed

    @property
    def phase_speed(self) -> float:
        return self.constants.c**2 / self.speed

    def _phase(self, grid: Grid, t: float) -> np.ndarray:
        x, y, z = grid.coords
        n = self.direction
        s = x * n[0] + y * n[1] + z * n[2]
        return np.broadcast_to(self.k * (s + self.phase_speed * t), grid.shape)

    def _w(self, grid, t, order):
        return self.amplitude * _WAVEFORMS[self.waveform][order](self._phase(grid, t))

    def f(self, grid: Grid, t: float = 0.0) -> ScalarField:
        return ScalarField(grid, self._w(grid, t, 0))

    def grad(self, grid: Grid, t: float = 0.0) -> VectorField:
        d1 = self.k * self._w(grid, t, 1)
        return VectorField(grid, self.direction.reshape((3,) + (1,) * grid.rank) * d1)

    def f_t(self, grid: Grid, t: float = 0.0) -> ScalarField:
        return ScalarField(grid, self.k * self.phase_speed * self._w(grid, t, 1))

    def f_tt(self, grid: Grid, t: float = 0.0) -> ScalarField:
        return ScalarField(grid, (self.k * self.phase_speed) ** 2 * self._w(grid, t, 2))

    def grad_t(self, grid: Grid, t: float = 0.0) -> VectorField:
        d2 = self.k**2 * self.phase_speed * self._w(grid, t, 2)
        return VectorField(grid, self.direction.reshape((3,) + (1,) * grid.rank) * d2)

    def laplacian(self, grid: Grid, t: float = 0.0) -> ScalarField:
        return ScalarField(grid, self.k**2 * self._w(grid, t, 2))

    def constraint_residual(self, grid: Grid, t: float = 0.0) -> VectorField:
        """``grad f - (v/c^2) f_t`` from the closed forms."""
        v_over_c2 = VectorField.from_components(grid, *(self.velocity / self.constants.c**2))
        return self.grad(grid, t) - v_over_c2 * self.f_t(grid, t)

    def wave_operator(self, grid: Grid, t: float = 0.0) -> ScalarField:
        """Closed-form ``(1/c^2) f_tt - lap f``; zero only when ``|v| = c``."""
        return self.f_tt(grid, t) * (1.0 / self.constants.c**2) - self.laplacian(grid, t)

    def history(self, grid: Grid, dt: float, n: int = 3, t0: float = 0.0) -> FieldHistory:
        return FieldHistory.sample(lambda t: self.f(grid, t), dt, n, t0)


def make_gauge_wave(v, k: float, amplitude: float = 1.0, waveform: str = "sin",
                    constants: Constants = Constants()) -> GaugeWave:
    return GaugeWave(tuple(np.broadcast_to(np.asarray(v, dtype=float), (3,))), k, amplitude,
                     waveform, constants)


# -- Maxwell ------------------------------------------------------------------

def _d_dt(obj, i, grid, like_vector):
    if isinstance(obj, FieldHistory):
        return time_derivative(obj, 1, i)
    return VectorField.zeros(grid) if like_vector else ScalarField.zeros(grid)


def maxwell_residuals(fields: EMFieldSet, constants: Constants = Constants()) -> list:
    """Faraday, Gauss (E), Gauss (B) and Ampere-Maxwell residuals."""
    E = require_history(fields.E, "E")
    B = require_history(fields.B, "B")
    _check_aligned(E, B, fields.rho, fields.J)
    grid = fields.grid
    rho = fields.rho if fields.rho is not None else ScalarField.zeros(grid)
    J = fields.J if fields.J is not None else VectorField.zeros(grid)
    c2 = constants.c**2
    out = {"faraday": [], "gauss_e": [], "gauss_b": [], "ampere": []}
    for i in E.interior:
        e, b = E[i], B[i]
        out["faraday"].append(curl(e) + time_derivative(B, 1, i))
        out["gauss_e"].append(divergence(e) - _at(rho, i) * (1.0 / constants.eps0))
        out["gauss_b"].append(divergence(b))
        out["ampere"].append(curl(b) - _at(J, i) * constants.mu0
                             - time_derivative(E, 1, i) * (1.0 / c2))
    return [residual_norms(v, k, E.dt) for k, v in out.items()]


def invariance_condition_residuals(fields: EMFieldSet, f: GaugeWave,
                                   constants: Constants | None = None,
                                   normalize: bool = False) -> list:
    """Residuals of the four conditions for Maxwell invariance under ``f``.

    ``grad f . B``, ``grad f . E``, ``grad f x E - f_t B`` and
    ``grad f x B + f_t E / c^2`` over every snapshot.  With ``normalize`` each
    residual is divided by the product of the maxima of its two factors.
    """
    constants = constants or f.constants
    grid = fields.grid
    c2 = constants.c**2
    names = ("grad_f_dot_B", "grad_f_dot_E", "grad_f_cross_E", "grad_f_cross_B")
    out = {k: [] for k in names}
    scales = dict.fromkeys(names, 0.0)
    for i, t in enumerate(fields.times()):
        e, b = fields.snapshot(i)
        g, ft = f.grad(grid, t), f.f_t(grid, t)
        out["grad_f_dot_B"].append(g.dot(b))
        out["grad_f_dot_E"].append(g.dot(e))
        out["grad_f_cross_E"].append(g.cross(e) - b * ft)
        out["grad_f_cross_B"].append(g.cross(b) + e * ft * (1.0 / c2))
        gs, fs, es, bs = g.scale(), ft.scale(), e.scale(), b.scale()
        for k, s in zip(names, (gs * bs, gs * es, max(gs * es, fs * bs),
                                max(gs * bs, fs * es / c2))):
            scales[k] = max(scales[k], s)
    dt = fields.E.dt if isinstance(fields.E, FieldHistory) else None
    reports = []
    for k in names:
        rep = residual_norms(out[k], k, dt)
        if normalize and scales[k] > 0:
            rep = ResidualReport(k, rep.l2 / scales[k], rep.linf / scales[k], rep.grid_meta)
        reports.append(rep)
    return reports


def boost_consistency_residual(E: VectorField, B: VectorField, v,
                               constants: Constants = Constants()) -> list:
    """Residuals of ``B = (v/c^2) x E`` and ``E = -v x B``."""
    if E.grid != B.grid:
        raise PreconditionError("E and B must share a grid")
    v = np.asarray(v, dtype=float)
    rb = B - E.rcross(v / constants.c**2)
    re = E + B.rcross(v)
    return [residual_norms(rb, "boost_B"), residual_norms(re, "boost_E")]


# -- potentials ---------------------------------------------------------------

def gauge_transform(p: Potentials, f) -> Potentials:
    """``A' = A + grad f`` and ``phi' = phi - f_t``.

    ``f`` is a :class:`GaugeWave` (evaluated at the potentials' times) or a
    sampled :class:`FieldHistory` aligned with the potentials.  A sampled ``f``
    only has time derivatives at interior snapshots, so the result is two
    snapshots shorter.
    """
    grid = p.grid
    if isinstance(f, GaugeWave):
        times = p.times()
        A_new = [_at(p.A, i) + f.grad(grid, t) for i, t in enumerate(times)]
        phi_new = [_at(p.phi, i) - f.f_t(grid, t) for i, t in enumerate(times)]
        if len(times) == 1:
            return Potentials(A_new[0], phi_new[0], p.t)
        dt = next(o.dt for o in (p.phi, p.A) if isinstance(o, FieldHistory))
        return Potentials(FieldHistory(dt, A_new, times[0]), FieldHistory(dt, phi_new, times[0]))
    hist = require_history(f, "sampled gauge function")
    _check_aligned(hist, p.A, p.phi)
    idx = list(hist.interior)
    A_new = [_at(p.A, i) + gradient(hist[i]) for i in idx]
    phi_new = [_at(p.phi, i) - time_derivative(hist, 1, i) for i in idx]
    t0 = hist.t0 + hist.dt
    if len(idx) < 3:
        raise PreconditionError("sampled gauge function needs at least 5 snapshots")
    return Potentials(FieldHistory(hist.dt, A_new, t0), FieldHistory(hist.dt, phi_new, t0))


def lorenz_residual_fields(p: Potentials, constants: Constants = Constants()) -> list:
    phi = require_history(p.phi, "phi")
    _check_aligned(phi, p.A)
    c2 = constants.c**2
    return [divergence(_at(p.A, i)) + time_derivative(phi, 1, i) * (1.0 / c2)
            for i in phi.interior]


def lorenz_residual(p: Potentials, constants: Constants = Constants()) -> ResidualReport:
    """Norms of ``div A + (1/c^2) phi_t`` over interior snapshots."""
    return residual_norms(lorenz_residual_fields(p, constants), "lorenz", p.phi.dt)


def fields_from_potentials(p: Potentials, rho=None, J=None) -> EMFieldSet:
    """``E = -grad phi - A_t`` and ``B = curl A`` at interior snapshots."""
    A = require_history(p.A, "A")
    _check_aligned(A, p.phi)
    idx = list(A.interior)
    E = [-gradient(_at(p.phi, i)) - time_derivative(A, 1, i) for i in idx]
    B = [curl(A[i]) for i in idx]
    t0 = A.t0 + A.dt
    return EMFieldSet(FieldHistory(A.dt, E, t0), FieldHistory(A.dt, B, t0), rho, J)


# -- Helmholtz ----------------------------------------------------------------

def helmholtz_decompose(A: VectorField):
    """Split ``A`` into ``(A_perp, A_par)``, divergence- and curl-free parts.

    The mean (k = 0) mode goes entirely to ``A_perp``.  Projection uses the
    same Nyquist-free wavenumbers as the first-derivative operators, so
    ``curl(A_par)`` and ``div(A_perp)`` vanish to rounding.
    """
    grid = A.grid
    if grid.rank != 3:
        raise PreconditionError("Helmholtz decomposition needs a rank-3 grid")
    ks = grid.odd_wavenumbers
    a_hat = _fft(A.components, 3)
    k_dot_a = sum(k * a_hat[i] for i, k in enumerate(ks))
    k2 = sum(k * k for k in ks)
    safe = np.where(k2 > 0, k2, 1.0)
    ratio = np.where(k2 > 0, k_dot_a / safe, 0.0)
    par_hat = np.stack([np.broadcast_to(k * ratio, grid.shape) for k in ks])
    par = _ifft(par_hat, 3)
    return VectorField(grid, A.components - par), VectorField(grid, par)


# -- energy -------------------------------------------------------------------

_SIGNS = {"derived": 1.0, "paper": -1.0}


def energy_density_flux(phi: ScalarField, A: VectorField, constants: Constants = Constants(),
                        sign_convention: str = "derived") -> EnergyDensityFlux:
    """``u = (phi^2 + c^2 A.A)/(2 c^2)``; ``S = +phi A`` (derived) or ``-phi A`` (paper)."""
    sign = _sign(sign_convention)
    c2 = constants.c**2
    u = (phi * phi + A.dot(A) * c2) * (1.0 / (2 * c2))
    return EnergyDensityFlux(u, A * phi * sign)


def _sign(convention):
    try:
        return _SIGNS[convention]
    except KeyError:
        raise PreconditionError(
            f"sign_convention must be 'derived' or 'paper', got {convention!r}") from None


def energy_conservation_residual(f, constants: Constants = Constants(),
                                 sign_convention: str = "derived", grid: Grid | None = None,
                                 times=(0.0,)) -> ResidualReport:
    """Norms of ``u_t + div S`` for potentials ``A = -grad f``, ``phi = f_t``.

    ``f`` is either a :class:`GaugeWave`, sampled on ``grid`` at ``times``
    with closed-form time derivatives, or a scalar history, in which case
    ``phi = D1 f`` and ``phi_t = D2 f`` come from centred differences.
    """
    sign = _sign(sign_convention)
    c2 = constants.c**2
    residuals = []
    if isinstance(f, GaugeWave):
        if grid is None:
            raise PreconditionError("a grid is needed to sample an analytic gauge wave")
        dt = None
        for t in np.atleast_1d(times):
            phi, phi_t = f.f_t(grid, t), f.f_tt(grid, t)
            A, A_t = -f.grad(grid, t), -f.grad_t(grid, t)
            residuals.append(_energy_balance(phi, phi_t, A, A_t, c2, sign))
    else:
        hist = require_history(f, "f")
        if hist.is_vector:
            raise PreconditionError("gauge function history must be scalar")
        dt = hist.dt
        for i in hist.interior:
            phi = time_derivative(hist, 1, i)
            phi_t = time_derivative(hist, 2, i)
            A, A_t = -gradient(hist[i]), -gradient(phi)
            residuals.append(_energy_balance(phi, phi_t, A, A_t, c2, sign))
    return residual_norms(residuals, f"energy_{sign_convention}", dt)


def _energy_balance(phi, phi_t, A, A_t, c2, sign):
    u_t = (phi * phi_t + A.dot(A_t) * c2) * (1.0 / c2)
    return u_t + divergence(A * phi * sign)


# -- fixtures -----------------------------------------------------------------

def plane_em_wave(grid: Grid, t: float, amplitude: float = 1.0, k: float = 1.0,
                  constants: Constants = Constants()):
    """Vacuum wave ``E = y amplitude cos(k(x - ct))``, ``B = z E/c``."""
    x = np.broadcast_to(grid.coords[0], grid.shape)
    wave = amplitude * np.cos(k * (x - constants.c * t))
    E = VectorField.from_components(grid, 0.0, wave, 0.0)
    B = VectorField.from_components(grid, 0.0, 0.0, wave / constants.c)
    return E, B


def plane_em_fieldset(grid: Grid, dt: float, n: int = 3, t0: float = 0.0, amplitude: float = 1.0,
                      k: float = 1.0, constants: Constants = Constants()) -> EMFieldSet:
    snaps = [plane_em_wave(grid, t0 + i * dt, amplitude, k, constants) for i in range(n)]
    return EMFieldSet(FieldHistory(dt, [s[0] for s in snaps], t0),
                      FieldHistory(dt, [s[1] for s in snaps], t0))


def static_coulomb_like(grid: Grid, constants: Constants = Constants(), n: int = 3,
                        dt: float = 1.0) -> EMFieldSet:
    """``E = x sin(x)`` with ``rho = eps0 cos(x)``; no magnetic field or current."""
    x = np.broadcast_to(grid.coords[0], grid.shape)
    E = VectorField.from_components(grid, np.sin(x))
    rho = ScalarField(grid, constants.eps0 * np.cos(x))
    return EMFieldSet(FieldHistory.constant(E, dt, n), FieldHistory.constant(VectorField.zeros(grid), dt, n),
                      rho, None)


def plane_wave_potentials(grid: Grid, dt: float, n: int = 5, t0: float = 0.0, amplitude: float = 1.0,
                          k: float = 1.0, constants: Constants = Constants()) -> Potentials:
    """Lorenz-gauge vacuum potentials ``A = y a sin(k(x - ct))``, ``phi = 0``."""
    x = np.broadcast_to(grid.coords[0], grid.shape)
    c = constants.c
    A = [VectorField.from_components(grid, 0.0, amplitude * np.sin(k * (x - c * (t0 + i * dt))))
         for i in range(n)]
    return Potentials(FieldHistory(dt, A, t0), FieldHistory.constant(ScalarField.zeros(grid), dt, n))


def potentials_from_gauge_wave(f: GaugeWave, grid: Grid, dt: float, n: int = 3,
                               t0: float = 0.0) -> Potentials:
    """The vanishing-field choice ``A = -grad f``, ``phi = f_t``."""
    times = [t0 + i * dt for i in range(n)]
    return Potentials(FieldHistory(dt, [-f.grad(grid, t) for t in times], t0),
                      FieldHistory(dt, [f.f_t(grid, t) for t in times], t0))
