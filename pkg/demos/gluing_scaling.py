# Pregluing two holomorphic discs across the neck xy = t in the flat model.
# Run: python demos/gluing_scaling.py   (MODULI_THREADS=4 runs the sweep in parallel)

# %%
import math

import numpy as np

from bordered_moduli import gluing

# the logarithmic cutoff has energy ~ 4 pi / |log r|
for r in (1e-2, 1e-4, 1e-8):
    rep = gluing.beta_r(r, 1024, 64)
    print(f"r={r:g}: energy {rep.energy:.5f} vs {rep.target:.5f} ({rep.rel_error:.2%})")

# %% the dbar error of u_t decays like r^(1/p)
seeds = gluing.standard_seed_pairs()
for p in (2.0, 4.0):
    fit = gluing.scaling_fit(seeds["cubic"], p_exp=p)
    print(f"p={p:g}: slope {fit.slope:.3f} (expected {1 / p:.3f}), residual {fit.residual:.1e}")
    print(fit.to_csv(), end="")

# %% where u_t is exactly f, exactly p and exactly g(t/z)
f, g = seeds["linear"]
t = 1e-6
u = gluing.preglue(f, g, t)
r = math.sqrt(t)
z, rho = u.grid.z, u.grid.rho
sr = math.sqrt(r)
regions = {
    "g region": (rho < r * sr / 2, g(t / z)),
    "plateau": ((rho >= r * sr) & (rho <= sr), np.broadcast_to(f.p[:, None, None], u.values.shape)),
    "f region": (rho > 2 * sr, f(z)),
}
for name, (band, closed_form) in regions.items():
    print(f"{name:9s} bit-for-bit: {np.array_equal(u.values[:, band], closed_form[:, band])}")

# %% interpolation across |z| = r
print(gluing.interp_check(f, g, 1e-4 * np.exp(0.7j)).to_dict())
