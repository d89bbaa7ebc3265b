# %% [markdown]
# # Frequencies, roots and the spectral coordinates
#
# A Maslov class beta0 in the dual lattice fixes a finite set of frequencies
# on the circle |gamma| = |beta0|/2.  Their normalized positions s_j are the
# roots of the minimal polynomial, and a point t of CP^{N-1} is equivalent
# to the interpolating polynomial phi.

# %%
import numpy as np

import hsltori as h

L = h.Lattice(1, 1j)
b = h.MaslovClass(1 + 3j, L)
F = h.enumerate_maslov_frequencies(L, b)
print("N =", F.N)
for g in F.gammas:
    print(f"  gamma = {g.real:+.1f} {g.imag:+.1f}i")

# %%
R = h.roots_from_frequencies(F)
print("|s_j| - 1:", np.abs(np.abs(R.s) - 1).max())
print("antipodal:", np.allclose(R.s[: F.N // 2], -R.s[F.N // 2 :]))

# %% [markdown]
# The interpolant takes the values t_j V at the roots; going back from its
# coefficients recovers t up to scale.

# %%
rng = np.random.default_rng(0)
t = rng.standard_normal(F.N) + 1j * rng.standard_normal(F.N)
coef = h.iota_inverse(R, t)
print("roundtrip distance:", h.iota(R, coef).distance(t))
print("theta_inf, theta_0:", h.theta_infinity(R, t), h.theta_zero(R, t))

# %%
try:
    h.enumerate_maslov_frequencies(L, h.MaslovClass(1, L))
except h.EmptyFrequencySet as exc:
    print("beta0 = 1:", exc)
