"""Split a random vector field into curl-free and divergence-free parts.

Run: python demos/04_helmholtz_split.py
"""
import numpy as np

from longwave.fields import VectorField, curl, divergence, make_grid
from longwave.gauge_em import helmholtz_decompose

grid = make_grid(3, [2 * np.pi] * 3, [32] * 3)
rng = np.random.default_rng(7)

# keep only modes |n| <= 8 on every axis so the field is smooth and resolved
n = np.meshgrid(*[np.fft.fftfreq(32, 1 / 32)] * 3, indexing="ij")
mask = np.all([np.abs(a) <= 8 for a in n], axis=0)
comps = [np.fft.ifftn((rng.standard_normal(grid.shape) + 1j * rng.standard_normal(grid.shape)) * mask).real
         for _ in range(3)]
A = VectorField(grid, np.stack(comps) * grid.size)

perp, par = helmholtz_decompose(A)
scale = A.scale()
print(f"|A|max                  = {scale:.3f}")
print(f"|curl A_par| / |A|      = {curl(par).scale() / scale:.1e}")
print(f"|div A_perp| / |A|      = {np.max(np.abs(divergence(perp).values)) / scale:.1e}")
print(f"|A_perp + A_par - A|/|A| = {(perp + par - A).scale() / scale:.1e}")

# the longitudinal share of the energy
e_par = np.mean(par.dot(par).values.real)
e_all = np.mean(A.dot(A).values.real)
print(f"longitudinal fraction of <|A|^2>: {e_par / e_all:.3f}")
