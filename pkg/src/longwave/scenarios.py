"""Ready-made verification scenarios, keyed by family name.

Each builder takes a plain parameter dict (as parsed from a JSON scenario
file) and returns a list of :class:`~longwave.fields.ResidualReport`.
"""
from __future__ import annotations

import numpy as np

from . import gauge_em as em
from . import matter
from .errors import PreconditionError
from .fields import Constants, FieldHistory, ResidualReport, ScalarField, VectorField, make_grid

FIXTURES = ("plane_em_wave", "static_coulomb_like", "potentials_from_f")
FAMILIES = ("maxwell", "conditions", "boost", "lorenz", "dirac", "continuity",
            "postgalilean", "vorticity")


def constants_from(physics: dict | None) -> Constants:
    physics = physics or {}
    return Constants(c=physics.get("c", 1.0), hbar=physics.get("hbar", 1.0),
                     mu0=physics.get("mu0", 1.0))


def _grid(params, rank=3):
    g = params.get("grid", {})
    n = g.get("points", 16)
    length = g.get("length", 2 * np.pi)
    return make_grid(rank, [length] * rank, [n] * rank)


def _gauge(params, constants):
    g = params.get("gauge", {})
    return em.make_gauge_wave(g.get("v", [constants.c, 0.0, 0.0]), g.get("k", 1.0),
                              g.get("amplitude", 1.0), g.get("waveform", "sin"), constants)


def _fieldset(params, grid, constants, n):
    fixture = params.get("fixture", "plane_em_wave")
    dt = params.get("dt", 1e-5)
    if fixture == "plane_em_wave":
        return em.plane_em_fieldset(grid, dt, n, amplitude=params.get("amplitude", 1.0),
                                    k=params.get("k", 1.0), constants=constants)
    if fixture == "static_coulomb_like":
        return em.static_coulomb_like(grid, constants, n, dt)
    if fixture == "potentials_from_f":
        f = _gauge(params, constants)
        return em.fields_from_potentials(em.potentials_from_gauge_wave(f, grid, dt, n + 2))
    raise PreconditionError(f"unknown fixture {fixture!r}; choose from {FIXTURES}")


def maxwell(params):
    c = constants_from(params.get("physics"))
    return em.maxwell_residuals(_fieldset(params, _grid(params), c, params.get("snapshots", 3)), c)


def conditions(params):
    c = constants_from(params.get("physics"))
    fs = _fieldset(params, _grid(params), c, params.get("snapshots", 3))
    return em.invariance_condition_residuals(fs, _gauge(params, c), c,
                                             normalize=params.get("normalize", False))


def boost(params):
    c = constants_from(params.get("physics"))
    grid = _grid(params)
    E, B = em.plane_em_wave(grid, 0.0, params.get("amplitude", 1.0), params.get("k", 1.0), c)
    v = params.get("gauge", {}).get("v", [c.c, 0.0, 0.0])
    return em.boost_consistency_residual(E, B, v, c)


def lorenz(params):
    c = constants_from(params.get("physics"))
    grid = _grid(params)
    f = _gauge(params, c)
    n = max(params.get("snapshots", 3), 3)
    dt = params.get("dt", 1e-5)
    if params.get("fixture", "potentials_from_f") == "potentials_from_f":
        p = em.potentials_from_gauge_wave(f, grid, dt, n)
    else:
        p = em.plane_wave_potentials(grid, dt, n, constants=c)
    before = em.lorenz_residual(p, c)
    after = em.lorenz_residual(em.gauge_transform(p, f), c)
    return [before, ResidualReport("lorenz_transformed", after.l2, after.linf, after.grid_meta)]


def dirac(params):
    c = constants_from(params.get("physics"))
    m = params.get("physics", {}).get("m", 1.0)
    grid = _grid(params, rank=1)
    dt = params.get("dt", 1e-5)
    k = params.get("k", 1.0)
    psi, _ = matter.dirac_plane_wave(grid, k, m, dt, params.get("snapshots", 3), constants=c)
    reports = [matter.dirac_residual(psi, m, c)]
    av = matter.alpha_v_constraint(_gauge(params, c), grid, 0.0, c)
    return reports + [av[1], av[-1]]


def _travelling_continuity(grid, constants, v, dt, n, k=1.0):
    v = np.asarray(v, dtype=float)
    speed = np.linalg.norm(v)
    vhat = v / speed if speed > 0 else np.array([1.0, 0.0, 0.0])
    x, y, z = grid.coords

    def rho_at(t):
        s = x * vhat[0] + y * vhat[1] + z * vhat[2]
        return ScalarField(grid, np.broadcast_to(np.cos(k * (s - speed * t)), grid.shape))

    rho = FieldHistory.sample(rho_at, dt, n)
    J = FieldHistory(dt, [VectorField.from_components(grid, *(r.values * vi for vi in v))
                          for r in rho.snapshots])
    return matter.ContinuitySet(rho, J, tuple(v))


def continuity(params):
    c = constants_from(params.get("physics"))
    grid = _grid(params)
    v = params.get("gauge", {}).get("v", [c.c, 0.0, 0.0])
    cs = _travelling_continuity(grid, c, v, params.get("dt", 1e-5), params.get("snapshots", 3))
    return matter.continuity_residuals(cs, c) + matter.continuity_invariance_residuals(
        cs, _gauge(params, c), c)


def postgalilean(params):
    c = constants_from(params.get("physics"))
    grid = _grid(params)
    v = params.get("gauge", {}).get("v", [0.5 * c.c, 0.0, 0.0])
    cs = _travelling_continuity(grid, c, v, params.get("dt", 1e-5), params.get("snapshots", 3))
    return matter.post_galilean_residuals(cs, c)


def vorticity(params):
    c = constants_from(params.get("physics"))
    flow = params.get("flow", "circular")
    v0 = params.get("v0", 0.5)
    dt = params.get("dt", 1e-3)
    t = dt * np.arange(params.get("snapshots", 11))
    if flow == "circular":
        v = v0 * np.stack([np.cos(t), np.sin(t), 0 * t], axis=1)
        expected = np.array([0.0, 0.0, -v0**2 / c.c**2])
    elif flow == "rectilinear":
        v = v0 * np.stack([np.sin(t), 0 * t, 0 * t], axis=1)
        expected = np.zeros(3)
    else:
        raise PreconditionError(f"flow must be 'circular' or 'rectilinear', got {flow!r}")
    res = matter.vorticity(matter.FlowHistory(v, dt), c)
    err = np.linalg.norm(res.omega - expected, axis=1)
    mag = np.linalg.norm(res.omega, axis=1)
    meta = {"dt": dt, "samples": len(t)}
    return [ResidualReport("vorticity", float(np.sqrt(np.mean(mag**2))), float(mag.max()), meta),
            ResidualReport("vorticity_error", float(np.sqrt(np.mean(err**2))), float(err.max()), meta)]


BUILDERS = {name: globals()[name] for name in FAMILIES}


def run_family(family: str, params: dict) -> list:
    try:
        builder = BUILDERS[family]
    except KeyError:
        raise PreconditionError(f"unknown family {family!r}; choose from {FAMILIES}") from None
    return builder(params)
