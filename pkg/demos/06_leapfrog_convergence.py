"""How fast leapfrog approaches the exact modal solution.

Run: python demos/06_leapfrog_convergence.py

The centered scheme carries a phase error that grows linearly in time and
shrinks as dt^2.  For the fast branch at k0 = 5 with m_star = 1 that error
is roughly (w^4/12 + m w^3/6) dt^2 / (2w + m) per unit time, so a relative
L2 mismatch of 1e-4 at T = 10 needs dt near 1.5e-3.
"""
import numpy as np

from longwave.dispersion import DispersionParams, omega_branches
from longwave.fields import make_grid
from longwave.telegraph import WavepacketSpec, run_simulation

grid = make_grid(1, [256.0], [1024])
params = DispersionParams(m=2.0)
packet = WavepacketSpec(k0=5.0, sigma=8.0, x0=64.0)
T = 10.0

exact = run_simulation(packet, grid, "spectral", T, 1, params=params).final_state.psi.values
w = omega_branches(packet.k0, params).omega_hi
m = 2.0

previous = None
print(f"{'dt':>9} {'rel L2':>11} {'ratio':>7} {'phase model':>12}")
for dt in (0.0625, 0.03125, 0.015625, 0.0078125):
    steps = int(round(T / dt))
    psi = run_simulation(packet, grid, "leapfrog", dt, steps, record_every=steps,
                         params=params).final_state.psi.values
    err = np.linalg.norm(psi - exact) / np.linalg.norm(exact)
    model = (w**4 / 12 + m * w**3 / 6) * dt**2 / (2 * w + m) * T
    ratio = "" if previous is None else f"{previous / err:7.3f}"
    print(f"{dt:9.6f} {err:11.3e} {ratio:>7} {model:12.3e}")
    previous = err
