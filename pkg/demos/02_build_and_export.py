# %% [markdown]
# # Building a torus and writing meshes
#
# The immersion is a finite trigonometric sum, so a grid above its
# bandwidth samples it exactly.

# %%
from pathlib import Path

import numpy as np

import hsltori as h

T = h.immersion_from_config(1.0, 1j, 1 + 3j, seed=3)
n1, n2 = h.bandwidth_grid(T)
S = h.sample_grid(T, 64, 64)
print("bandwidth grid:", (n1, n2), " sampled:", S.f.shape)

# %%
# periodic on the lattice, and the base point sits at the origin
print("|f(0)|:", np.linalg.norm(h.evaluate_f(T, 0.0)))
print("|f(1) - f(0)|:", np.linalg.norm(h.evaluate_f(T, 1.0) - h.evaluate_f(T, 0.0)))
print("|f(i) - f(0)|:", np.linalg.norm(h.evaluate_f(T, 1j) - h.evaluate_f(T, 0.0)))

# %%
# f(0) = 0 is a node, so stereo would fall back to drop4 with a warning
out = Path("demo_out")
out.mkdir(exist_ok=True)
for fmt in ("obj", "ply", "csv4d"):
    p = h.export_mesh(S, fmt, projection="drop4", path=out / f"torus.{'csv' if fmt == 'csv4d' else fmt}")
    print(fmt, "->", p, p.stat().st_size, "bytes")
