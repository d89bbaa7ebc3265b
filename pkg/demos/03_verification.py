# %% [markdown]
# # Checking the geometry
#
# Every check compares two independent computations on a sampled torus.

# %%
import numpy as np

import hsltori as h
from hsltori import pkf
from hsltori import verification as V

T = h.immersion_from_config(1.0, 1j, 2, seed=1)
S = h.sample_grid(T, *h.bandwidth_grid(T))

for c in (V.check_lagrangian(S), V.check_conformal(S), V.check_angle(S, T.maslov), V.mean_curvature_identity(S, T.maslov)):
    print(f"{c.check:>16}: {c.residual:.1e}")

# %% [markdown]
# Willmore energy is quantized by |beta0| alone; the area has a closed form
# in t.  For beta0 = 2 on the square lattice both come out as 4 pi^2 for
# unit t.

# %%
print("Willmore (quadrature, closed):", V.willmore_check(S, T.lattice, T.maslov)[:2])
print("area     (quadrature, closed):", V.area_check(S, T.roots, T.t, T.lattice, T.maslov)[:2])
print("4 pi^2 =", 4 * np.pi**2)

# %% [markdown]
# The polynomial Killing field can be built two ways; they agree and
# satisfy the Lax equations.

# %%
z = pkf.sample_points(T, seed=0)
X, Y = pkf.pkf_build_from_recursion(T), pkf.pkf_build_from_chi(T)
print("routes:", pkf.pkf_difference(X, Y, z), " lax:", pkf.lax_residual(X, T, z))

# %% [markdown]
# Branch points: put t on both theta hyperplanes and the scan finds z = 0.

# %%
T6 = h.immersion_from_config(1.0, 1j, 2 + 4j)
tb = V.branched_spectral_point(T6.roots, 0)
Tb = h.build_immersion(T6.lattice, T6.maslov, T6.frequencies, T6.roots, tb)
scan = V.branch_scan(Tb)
for p in scan.points:
    print("branch point uv =", np.round(p.uv, 6), " |f_z| ratio", f"{p.fz_ratio:.1e}")
print("bound 8lm =", V.branch_bound(h.maslov_indices(T6.frequencies, T6.lattice)))
