"""Numerical laboratory for longitudinal matter waves and gauge invariance.

Submodules:

* :mod:`longwave.fields` - periodic grids, complex fields, spectral derivatives
* :mod:`longwave.dispersion` - telegraph dispersion, group velocity, energies
* :mod:`longwave.telegraph` - wavepacket propagation (exact modal and leapfrog)
* :mod:`longwave.gauge_em` - Maxwell, gauge, Lorenz, Helmholtz and energy checks
* :mod:`longwave.matter` - Dirac, telegraph, continuity and vorticity checks
* :mod:`longwave.cli` - ``longwave`` command-line front end
"""
from .dispersion import (
    BranchPair,
    DispersionParams,
    EnergyLevels,
    einstein_relation_check,
    energy_levels,
    group_velocity,
    omega_branches,
)
from .errors import (
    ConfigError,
    DelocalizedError,
    LongwaveError,
    MissingHistoryError,
    PreconditionError,
    StabilityError,
)
from .fields import (
    Constants,
    FieldHistory,
    Grid,
    ResidualReport,
    ScalarField,
    VectorField,
    make_grid,
    residual_norms,
    spectral_derivative,
    time_derivative,
    wave_residual,
)

__version__ = "0.1.0"

__all__ = [
    "BranchPair",
    "ConfigError",
    "Constants",
    "DelocalizedError",
    "DispersionParams",
    "EnergyLevels",
    "FieldHistory",
    "Grid",
    "LongwaveError",
    "MissingHistoryError",
    "PreconditionError",
    "ResidualReport",
    "ScalarField",
    "StabilityError",
    "VectorField",
    "einstein_relation_check",
    "energy_levels",
    "group_velocity",
    "make_grid",
    "omega_branches",
    "residual_norms",
    "spectral_derivative",
    "time_derivative",
    "wave_residual",
]
