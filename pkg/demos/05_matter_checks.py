"""Dirac plane waves, the alpha.v channel, and the vorticity of a circular flow.

Run: python demos/05_matter_checks.py
"""
# %%
import numpy as np

from longwave.dispersion import DispersionParams, omega_branches
from longwave.fields import make_grid
from longwave.gauge_em import make_gauge_wave
from longwave.matter import (
    FlowHistory,
    alpha_v_constraint,
    dirac_plane_wave,
    dirac_residual,
    massless_spinor,
    plane_wave_history,
    telegraph_residual,
    vorticity,
)

line = make_grid(1, [2 * np.pi], [64])

# %% [markdown]
# Eigenspinor plane waves satisfy the 1+1D Dirac equation to stencil error.
# Their components do not satisfy the telegraph equation unless m = 0: the
# two dispersion relations differ.

# %%
for m in (0.0, 1.0):
    psi, omega = dirac_plane_wave(line, 2.0, m, 1e-4)
    tele = telegraph_residual(psi.history[0], m).l2
    print(f"m = {m}: omega = {omega:.4f}, dirac l2 = {dirac_residual(psi, m).l2:.1e}, "
          f"telegraph l2 of upper component = {tele:.3e}")

w = omega_branches(2.0, DispersionParams(m=1.0)).omega_hi
print(f"telegraph plane wave on its own branch: l2 = "
      f"{telegraph_residual(plane_wave_history(line, 2.0, w, 1e-3), 1.0).l2:.1e}")

massless = massless_spinor(line, lambda x: np.exp(np.cos(x)), 1e-4)
print(f"advected alpha eigenvector, m = 0: dirac l2 = {dirac_residual(massless, 0.0).l2:.1e}")

# %% [markdown]
# Projecting -(1/c) f_t + alpha grad f onto the +1 eigenvector of alpha
# leaves (|v|/c^2 - 1/c) f_t, which vanishes only for |v| = c.

# %%
for speed in (1.0, 0.75, 0.5):
    r = alpha_v_constraint(make_gauge_wave([speed, 0, 0], 1.0), line)
    print(f"|v| = {speed}: r+ = {r[1].l2:.4f}, r- = {r[-1].l2:.4f}")

# %%
# Circular motion at speed v0 gives a constant vorticity -(v0^2/c^2) z-hat.
t = 0.01 * np.arange(50)
v = 0.5 * np.stack([np.cos(t), np.sin(t), 0 * t], axis=1)
res = vorticity(FlowHistory(v, 0.01))
print("vorticity (first sample):", res.omega[0], " expected [0, 0, -0.25]")
