"""Closed-form dispersion analytics of the complex telegraph equation.

A plane wave ``C exp i(w t - k x)`` solves

    (1/c^2) psi_tt - lap psi + s (i m / hbar) psi_t = 0,   s = +1 or -1,

when ``w**2 + s (m c^2/hbar) w - c^2 k^2 = 0``.  Both roots are real for
every real ``k`` and ``m >= 0``.  Writing ``m_star = m/2`` the roots are
``-s m_star c^2/hbar +/- sqrt(c^2 k^2 + (m_star c^2/hbar)^2)``.

All functions accept scalar or array ``k``/``p``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import PreconditionError
from .fields import Constants

__all__ = [
    "DispersionParams",
    "BranchPair",
    "EnergyLevels",
    "omega_branches",
    "paper_labeling",
    "group_velocity",
    "energy_levels",
    "einstein_relation_check",
]


@dataclass(frozen=True)
class DispersionParams:
    m: float
    spinor_sign: int = 1
    constants: Constants = field(default_factory=Constants)

    def __post_init__(self):
        if not self.m >= 0:
            raise PreconditionError(f"mass must be non-negative, got {self.m}")
        if self.spinor_sign not in (1, -1):
            raise PreconditionError(f"spinor_sign must be +1 or -1, got {self.spinor_sign}")

    @property
    def m_star(self) -> float:
        return self.m / 2.0

    @property
    def rest_frequency(self) -> float:
        """``m_star c^2 / hbar``, half the linear coefficient of the quadratic."""
        c = self.constants.c
        return self.m_star * c * c / self.constants.hbar


@dataclass(frozen=True)
class BranchPair:
    omega_hi: np.ndarray | float
    omega_lo: np.ndarray | float
    k: np.ndarray | float


@dataclass(frozen=True)
class EnergyLevels:
    E1: np.ndarray | float
    E2: np.ndarray | float
    E0: float
    Estar: np.ndarray | float


def _roots(k, a, c):
    """Roots of ``w^2 + 2 a w - c^2 k^2`` without cancellation.

    The larger-magnitude root comes from the quadratic formula, the other
    from the product ``-c^2 k^2``.
    """
    k = np.asarray(k, dtype=float)
    ck = c * k
    disc = np.hypot(a, ck)
    if a == 0.0:
        return disc, -disc
    big = -a - np.copysign(1.0, a) * disc
    small = -ck * (ck / big)
    return np.maximum(big, small), np.minimum(big, small)


def _out(x):
    return x.item() if isinstance(x, np.ndarray) and x.ndim == 0 else x


def omega_branches(k, params: DispersionParams) -> BranchPair:
    """Ordered roots ``(omega_hi, omega_lo)`` of the dispersion quadratic.

    >>> omega_branches(3.0, DispersionParams(m=0.0))
    BranchPair(omega_hi=3.0, omega_lo=-3.0, k=3.0)
    """
    a = params.spinor_sign * params.rest_frequency
    hi, lo = _roots(k, a, params.constants.c)
    return BranchPair(_out(hi), _out(lo), _out(np.asarray(k, dtype=float)))


def paper_labeling(k, params: DispersionParams):
    """``(omega_1, omega_2)``: hi root of the + spinor, lo root of the - spinor."""
    plus = omega_branches(k, DispersionParams(params.m, 1, params.constants))
    minus = omega_branches(k, DispersionParams(params.m, -1, params.constants))
    return plus.omega_hi, minus.omega_lo


def group_velocity(k, params: DispersionParams):
    """``d omega_hi / dk = sign(k) c / sqrt(1 + (m_star c / (hbar k))^2)``.

    At ``k = 0`` this is 0 for massive waves; for ``m = 0`` the massless
    limit ``c`` is returned instead.
    """
    c = params.constants.c
    mu = params.m_star * c / params.constants.hbar
    k = np.asarray(k, dtype=float)
    with np.errstate(invalid="ignore"):
        v = c * k / np.hypot(k, mu)
    if mu == 0.0:
        v = np.where(k == 0.0, c, v)
    return _out(np.asarray(v))


def energy_levels(p, params: DispersionParams) -> EnergyLevels:
    """Energies ``E1 = -E0 + E*`` and ``E2 = -E1`` with ``E0 = m_star c^2``."""
    c = params.constants.c
    e0 = params.m_star * c * c
    p = np.asarray(p, dtype=float)
    cp2 = (c * p) ** 2
    estar = np.hypot(c * p, e0)
    # E* - E0 rewritten to avoid cancellation at small p
    e1 = np.divide(cp2, e0 + estar, out=np.zeros_like(cp2), where=(e0 + estar) > 0)
    e2 = 0.0 - e1
    return EnergyLevels(_out(e1), _out(e2), e0, _out(estar))


def einstein_relation_check(v: float, m: float, constants: Constants = Constants()):
    """Return ``(p, E, p - v E / c^2)`` for a particle of mass ``m`` at speed ``v``."""
    c = constants.c
    if not abs(v) < c:
        raise PreconditionError(f"|v| must be below c={c}, got {v}")
    if not m > 0:
        raise PreconditionError(f"mass must be positive, got {m}")
    gamma = 1.0 / np.sqrt(1.0 - (v / c) ** 2)
    energy = gamma * m * c * c
    p = gamma * m * v
    return float(p), float(energy), float(p - v * energy / (c * c))
