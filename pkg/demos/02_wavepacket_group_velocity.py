"""Track a Gaussian packet and compare its speed with the dispersion slope.

Run: python demos/02_wavepacket_group_velocity.py [output_dir]
"""
# %%
import sys
from pathlib import Path

import numpy as np

from longwave.dispersion import DispersionParams, group_velocity
from longwave.fields import make_grid
from longwave.output import emit_svg_plot, emit_table
from longwave.telegraph import WavepacketSpec, run_simulation

out = Path(sys.argv[1] if len(sys.argv) > 1 else "demo_output")
out.mkdir(exist_ok=True)

grid = make_grid(1, [256.0], [1024])
params = DispersionParams(m=2.0)
packet = WavepacketSpec(k0=5.0, sigma=8.0, x0=64.0)

# %% [markdown]
# The exact modal propagator has no time-step limit, so one sample per
# half time unit is plenty to fit the centroid track.

# %%
rec = run_simulation(packet, grid, "spectral", 0.5, 100, params=params)
expected = group_velocity(packet.k0, params)
print(f"measured v_g = {rec.measured_vg:.6f}, predicted 5/sqrt(26) = {expected:.6f}")
print(f"norm drift over the run: {max(abs(np.array(rec.l2_norms) / rec.l2_norms[0] - 1)):.1e}")
emit_table(zip(rec.times, rec.centroids, rec.l2_norms), ["t", "centroid", "l2_norm"],
           out / "packet_track.csv")

# %% [markdown]
# Leapfrog gives the same motion, up to a phase lag that shrinks as dt^2.

# %%
lf = run_simulation(packet, grid, "leapfrog", 0.0625, 800, record_every=8, params=params)
print(f"leapfrog v_g = {lf.measured_vg:.6f}")
emit_svg_plot([(rec.times, rec.centroids), (lf.times, lf.centroids)], ["spectral", "leapfrog"],
              out / "packet_track.svg", title="Packet centroid", xlabel="t", ylabel="x")

# %%
# Heavier waves are slower at the same carrier; none reach c.
for m in (0.0, 2.0, 10.0, 40.0):
    p = DispersionParams(m=m)
    r = run_simulation(packet, grid, "spectral", 0.5, 60, params=p)
    print(f"m = {m:5.1f}: measured {r.measured_vg:.5f}  predicted {group_velocity(5.0, p):.5f}")
