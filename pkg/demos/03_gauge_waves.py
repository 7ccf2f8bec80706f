"""Which gauge waves leave Maxwell's equations invariant.

Run: python demos/03_gauge_waves.py
"""
# %%
import numpy as np

from longwave.fields import make_grid
from longwave.gauge_em import (
    energy_conservation_residual,
    gauge_transform,
    invariance_condition_residuals,
    lorenz_residual,
    make_gauge_wave,
    plane_em_fieldset,
    plane_wave_potentials,
)

grid = make_grid(3, [2 * np.pi] * 3, [16] * 3)
fields = plane_em_fieldset(grid, 0.05, n=3)

# %% [markdown]
# A gauge wave locked to velocity v obeys grad f = (v/c^2) df/dt by
# construction.  Against a light-like plane wave the four invariance
# conditions all hold at |v| = c; slower waves leave a cross-product
# residual of size (1 - |v|/c) |f_t| |B|.

# %%
for speed in (1.0, 0.9, 0.5, 0.25):
    f = make_gauge_wave([speed, 0, 0], 1.0)
    reports = invariance_condition_residuals(fields, f)
    cells = "  ".join(f"{r.equation_id}={r.linf:.3f}" for r in reports)
    print(f"|v| = {speed:4.2f}: {cells}")

# %% [markdown]
# Gauge transforming Lorenz-gauge potentials keeps the Lorenz condition
# exactly when f solves the wave equation, which again singles out |v| = c.

# %%
p = plane_wave_potentials(grid, 1e-5, n=3)
for speed in (1.0, 0.5):
    q = gauge_transform(p, make_gauge_wave([speed, 0, 0], 1.0))
    print(f"|v| = {speed}: Lorenz l2 before {lorenz_residual(p).l2:.1e}, after {lorenz_residual(q).l2:.3e}")

# %%
# For the vanishing-field potentials A = -grad f, phi = f_t the energy law
# closes with flux +phi A; the opposite sign leaves twice the flux divergence.
f = make_gauge_wave([1, 0, 0], 1.0, waveform="cos")
for conv in ("derived", "paper"):
    rep = energy_conservation_residual(f, sign_convention=conv, grid=grid)
    print(f"flux sign {conv:8s}: l2 = {rep.l2:.3e}")
