"""Dispersion branches of the complex telegraph equation.

Run: python demos/01_dispersion_branches.py [output_dir]
"""
# %%
import sys
from pathlib import Path

import numpy as np

from longwave.dispersion import DispersionParams, energy_levels, group_velocity, omega_branches
from longwave.output import emit_svg_plot

out = Path(sys.argv[1] if len(sys.argv) > 1 else "demo_output")
out.mkdir(exist_ok=True)

# %% [markdown]
# A plane wave exp i(w t - k x) solves the equation when
# w^2 + (m c^2/hbar) w - c^2 k^2 = 0.  Both roots are real; with m = 2
# (so m_star = 1) the upper branch starts at w = 0 and the lower one at
# w = -2 m_star c^2 / hbar.

# %%
params = DispersionParams(m=2.0)
k = np.linspace(-6, 6, 241)
branches = omega_branches(k, params)
print("k = 0 roots:", omega_branches(0.0, params))

emit_svg_plot([(k, branches.omega_hi), (k, branches.omega_lo), (k, np.abs(k)), (k, -np.abs(k))],
              ["omega_hi", "omega_lo", "+c|k|", "-c|k|"], out / "dispersion.svg",
              title="Telegraph dispersion, m_star = 1", xlabel="k", ylabel="omega")

# %% [markdown]
# Group velocity interpolates between hbar k / m_star at small k and c at
# large k, never reaching c for a massive wave.

# %%
ks = np.logspace(-3, 3, 7)
for kk, v in zip(ks, group_velocity(ks, params)):
    print(f"k = {kk:9.3g}   v_g = {v:.9f}   hbar k/m_star = {kk:.3g}")

# %%
# hbar * omega_hi(p/hbar) reproduces the energy E1 = -E0 + E*, and E2 = -E1.
p = np.array([0.0, 0.5, 3.0])
levels = energy_levels(p, params)
print("E1:", levels.E1, " E2:", levels.E2, " E0:", levels.E0)
print("omega_hi at same k:", omega_branches(p, params).omega_hi)
