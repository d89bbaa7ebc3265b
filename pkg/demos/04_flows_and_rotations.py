# %% [markdown]
# # Flows and the quaternion action
#
# Moving t along t exp(time a) changes the area at a rate set by Re(a).
# Directions satisfying the two real conditions are Hamiltonian.

# %%
import numpy as np

import hsltori as h
from hsltori import flows as F
from hsltori import verification as V

T = h.immersion_from_config(1.0, 1j, 1 + 3j, seed=2)
rng = np.random.default_rng(4)
a = rng.standard_normal(T.N) + 1j * rng.standard_normal(T.N)
ah = F.hamiltonian_projection(T.roots, T.t, a)
print("random a hamiltonian?   ", F.hamiltonian_test(T.roots, T.t, a)[2])
print("projected a hamiltonian?", F.hamiltonian_test(T.roots, T.t, ah)[2])
print("Hodge pairings (quadrature):", F.hodge_pairing_oracle(T, ah))

# %%
times = np.linspace(0, 1, 6)
for mode, d in (("fixed", a), ("projected", a)):
    rows = F.flow_trajectory(T.roots, T.t, d, T.lattice, T.maslov, times, mode)
    print(mode, np.round(rows[:, 1], 6))

# %% [markdown]
# Unit quaternions act on t by right multiplication in the moduli
# coordinates; on the torus this is a rigid motion of R^4.

# %%
q = F.random_unit_quaternion(rng)
T2 = h.build_immersion(T.lattice, T.maslov, T.frequencies, T.roots, F.g0_act(T.roots, T.t, q))
z = T.lattice.point(rng.random(5), rng.random(5))
print("max |f' - f q|:", np.abs(h.evaluate_f(T2, z) - F.qmul(h.evaluate_f(T, z), q)).max())
