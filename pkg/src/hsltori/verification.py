"""Pointwise and integral checks of a reconstructed torus, and branch points.

Pointwise checks run on a :class:`SurfaceSample` and return a
:class:`CheckResult` whose residual is normalized by the natural magnitude
named in each docstring.  Nodes where the conformal factor |f_z|^2 falls
below ``SKIP_RTOL`` times its median are skipped.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.optimize import least_squares

from .fourier import character
from .frame import FRAME, exp_J
from .immersion import SurfaceSample, TorusImmersion, evaluate_f_z
from .lattice import Lattice, MaslovClass, MaslovIndices, lagrangian_angle
from .pkf import (  # noqa: F401  re-exported
    PKFData,
    chi_relations_residual,
    evolution_residual,
    lax_residual,
    pkf_build_from_chi,
    pkf_build_from_recursion,
    pkf_difference,
    reality_residual,
    tau_symmetry_residual,
    terminal_residual,
    top_coefficient_residual,
    u_zbar_residual,
)
from .spectral import SpectralRoots, iota_inverse, theta_infinity, theta_zero

__all__ = [
    "BranchPoint",
    "BranchScan",
    "CheckResult",
    "PKFData",
    "VerificationReport",
    "area_check",
    "area_closed_form",
    "branch_bound",
    "branch_scan",
    "branched_spectral_point",
    "check_angle",
    "check_conformal",
    "check_lagrangian",
    "chi1_zero_structure",
    "dump_json",
    "lax_residual",
    "mean_curvature_identity",
    "perturb_sample",
    "pkf_build_from_chi",
    "pkf_build_from_recursion",
    "verify_sample",
    "willmore_check",
    "willmore_closed_form",
]

SKIP_RTOL = 1e-10
TOL_POINTWISE = 1e-9
TOL_MEAN_CURVATURE = 1e-6


@dataclass(frozen=True)
class CheckResult:
    check: str
    residual: float
    tolerance: float
    location: tuple[float, float] | None = None

    @property
    def passed(self) -> bool:
        return bool(np.isfinite(self.residual) and self.residual <= self.tolerance)

    def as_dict(self) -> dict:
        loc = None if self.location is None else {"u": self.location[0], "v": self.location[1]}
        return {
            "check": self.check,
            "residual": float(self.residual),
            "tolerance": float(self.tolerance),
            "pass": self.passed,
            "location": loc,
        }


@dataclass
class VerificationReport:
    checks: list[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, c: CheckResult) -> CheckResult:
        self.checks.append(c)
        return c

    def as_dict(self) -> dict:
        return {"checks": [c.as_dict() for c in self.checks], "pass": self.passed}


def _encode(o, indent: int, level: int) -> str:
    pad = "\n" + " " * (indent * (level + 1))
    end = "\n" + " " * (indent * level)
    if isinstance(o, np.generic):
        o = o.item()
    if o is None or isinstance(o, (bool, str)):
        return json.dumps(o)
    if isinstance(o, int):
        return str(o)
    if isinstance(o, float):
        if not np.isfinite(o):
            return json.dumps(None)
        return format(o, ".17g")
    if isinstance(o, dict):
        if not o:
            return "{}"
        items = [json.dumps(str(k)) + ": " + _encode(v, indent, level + 1) for k, v in o.items()]
        return "{" + pad + ("," + pad).join(items) + end + "}"
    if isinstance(o, (list, tuple, np.ndarray)):
        if len(o) == 0:
            return "[]"
        items = [_encode(v, indent, level + 1) for v in o]
        return "[" + pad + ("," + pad).join(items) + end + "]"
    raise TypeError(f"cannot serialize {type(o).__name__}")


def dump_json(obj, fh=None, indent: int = 2) -> str:
    """JSON text with every float written to 17 significant digits.

    The stdlib encoder always uses the shortest repr, hence this writer.
    Non-finite floats become null.
    """
    text = _encode(obj, indent, 0)
    if fh is not None:
        fh.write(text + "\n")
    return text


def _mask(S: SurfaceSample) -> np.ndarray:
    cf = S.conformal_factor
    med = np.median(cf)
    return cf > max(SKIP_RTOL * med, 1e-26)


def _worst(S: SurfaceSample, name: str, r: np.ndarray, tol: float) -> CheckResult:
    m = _mask(S)
    if not m.any():
        return CheckResult(name, 0.0, tol, None)
    r = np.where(m, r, -np.inf)
    k = np.unravel_index(np.argmax(r), r.shape)
    return CheckResult(name, float(r[k]), tol, (float(S.uv[k][0]), float(S.uv[k][1])))


def _fx_fy(S: SurfaceSample):
    # f_z = (f_x - i f_y)/2 with f real
    return 2 * S.f_z.real, -2 * S.f_z.imag


def _safe(x):
    return np.where(x > 0, x, 1.0)


def check_lagrangian(S: SurfaceSample, tol: float = TOL_POINTWISE) -> CheckResult:
    """``|<J f_x, f_y>| / |f_z|^2``."""
    fx, fy = _fx_fy(S)
    w = np.einsum("...i,...i->...", fx @ FRAME.J.T, fy)
    return _worst(S, "lagrangian", np.abs(w) / _safe(S.conformal_factor), tol)


def check_conformal(S: SurfaceSample, tol: float = TOL_POINTWISE) -> CheckResult:
    """``|f_z . f_z| / |f_z|^2`` (complex bilinear)."""
    q = np.einsum("...i,...i->...", S.f_z, S.f_z)
    return _worst(S, "conformal", np.abs(q) / _safe(S.conformal_factor), tol)


def check_angle(S: SurfaceSample, b: MaslovClass, tol: float = TOL_POINTWISE) -> CheckResult:
    """``|S f_z - i f_z| / |f_z|`` with ``S = exp(beta J) L``, beta from ``b``.

    beta is linear in z, hence harmonic; that half of the statement holds by
    construction and is not measured.
    """
    beta = lagrangian_angle(b, S.z)
    Sm = exp_J(beta) @ FRAME.L
    r = np.einsum("...ij,...j->...i", Sm, S.f_z) - 1j * S.f_z
    nrm = np.linalg.norm(r, axis=-1) / _safe(np.sqrt(S.conformal_factor))
    return _worst(S, "angle", nrm, tol)


def mean_curvature_vector(S: SurfaceSample) -> np.ndarray:
    """``H = 2 e^{-2 rho} f_{z zbar}`` with ``e^{2 rho} = 2 |f_z|^2``."""
    return S.f_zzbar / _safe(S.conformal_factor)[..., None]


def angle_gradient(S: SurfaceSample, b: MaslovClass) -> np.ndarray:
    """Metric gradient of beta pushed into R^4: ``e^{-2 rho}(beta_x f_x + beta_y f_y)``."""
    fx, fy = _fx_fy(S)
    bx, by = 2 * np.pi * b.beta0.real, 2 * np.pi * b.beta0.imag
    return (bx * fx + by * fy) / (2 * _safe(S.conformal_factor))[..., None]


def mean_curvature_identity(
    S: SurfaceSample, b: MaslovClass, sign: float = 0.5, tol: float = TOL_MEAN_CURVATURE
) -> CheckResult:
    """``|H - sign J grad beta| / |H|``.

    With J e1 = e2 and the orientation of (f_x, f_y) used here the relation
    holds with ``sign = +1/2``; pass ``sign = -0.5`` for the opposite
    convention.
    """
    H = mean_curvature_vector(S)
    G = angle_gradient(S, b) @ FRAME.J.T
    r = np.linalg.norm(H - sign * G, axis=-1) / _safe(np.linalg.norm(H, axis=-1))
    return _worst(S, "mean_curvature", r, tol)


def _fill_singular(S: SurfaceSample, vals: np.ndarray) -> np.ndarray:
    # removable singularities at branch nodes: use the mean of the regular nodes
    m = _mask(S)
    if m.all():
        return vals
    return np.where(m, vals, vals[m].mean())


def willmore_closed_form(L: Lattice, b: MaslovClass) -> float:
    return float(np.pi**2 * abs(b.beta0) ** 2 * L.area)


def willmore_check(S: SurfaceSample, L: Lattice, b: MaslovClass):
    """Trapezoid value of ``int |H|^2 dA`` (``dA = 2|f_z|^2 dx dy``) against
    ``pi^2 |beta0|^2 A(C/Gamma)``; returns (quadrature, closed form, rel. error).
    """
    H = mean_curvature_vector(S)
    dens = np.sum(H**2, axis=-1) * 2 * S.conformal_factor
    dens = _fill_singular(S, dens)
    q = float(dens.mean() * L.area)
    c = willmore_closed_form(L, b)
    return q, c, abs(q - c) / c


def area_closed_form(R: SpectralRoots, t, L: Lattice, b: MaslovClass) -> float:
    """``A(C/Gamma) pi^2 |beta0|^2 |V_N|^2 sum_j |t_j|^2 / prod_{k != j} |s_k - s_j|^2``.

    This is ``int |f_z|^2 dx dy`` for the unnormalized ``t`` (the induced area
    is twice this).
    """
    t = np.asarray(getattr(t, "t", t), dtype=complex)
    return float(
        L.area * np.pi**2 * abs(b.beta0) ** 2 * abs(R.V) ** 2 * np.sum(np.abs(t) ** 2 / R.mode_weights)
    )


def area_check(S: SurfaceSample, R: SpectralRoots, t, L: Lattice, b: MaslovClass):
    """Trapezoid value of ``int |f_z|^2 dx dy`` against :func:`area_closed_form`."""
    q = float(S.conformal_factor.mean() * L.area)
    c = area_closed_form(R, t, L, b)
    return q, c, abs(q - c) / c


def perturb_sample(S: SurfaceSample, delta: float = 1e-3) -> SurfaceSample:
    """Add ``(0, 0, 0, delta sin(2 pi u))`` to f with consistent derivatives."""
    from .lattice import dual_basis

    d1, _ = dual_basis(S.lattice)
    u = S.uv[..., 0]
    e4 = np.array([0.0, 0.0, 0.0, 1.0])
    k = 2 * np.pi
    # u = <z, d1>, so du/dz = conj(d1)/2 and d2u/dz dzbar = 0
    f = S.f + delta * np.sin(k * u)[..., None] * e4
    fz = S.f_z + (delta * k * np.cos(k * u) * np.conj(d1) / 2)[..., None] * e4
    fzz = S.f_zzbar - (delta * k**2 * np.sin(k * u) * abs(d1) ** 2 / 4)[..., None] * e4
    return replace(S, f=f, f_z=fz, f_zzbar=fzz)


def verify_sample(S: SurfaceSample, b: MaslovClass, T: TorusImmersion | None = None) -> VerificationReport:
    """Run the pointwise checks, plus area and Willmore when T is given."""
    rep = VerificationReport()
    rep.add(check_lagrangian(S))
    rep.add(check_conformal(S))
    rep.add(check_angle(S, b))
    rep.add(mean_curvature_identity(S, b))
    W = willmore_check(S, S.lattice, b)
    rep.add(CheckResult("willmore", W[2], 1e-6))
    if T is not None:
        A = area_check(S, T.roots, T.t, T.lattice, b)
        rep.add(CheckResult("area", A[2], 1e-8))
    return rep


# ---------------------------------------------------------------- branch points


def _hyperplane_coefficients(R: SpectralRoots):
    c_inf = 1 / R.node_products
    c_0 = 1 / (R.node_products * R.s)
    return c_inf, c_0


def _theta_map(T: TorusImmersion, z):
    """Normalized ``(theta_inf(t(z)), theta_0(t(z)))``; z array -> (..., 2)."""
    R = T.roots
    c_inf, c_0 = _hyperplane_coefficients(R)
    tz = T.t * character(-T.frequencies.gammas, z)
    nt = np.linalg.norm(T.t)
    a = theta_infinity(R, tz) / (nt * np.linalg.norm(c_inf))
    c = theta_zero(R, tz) / (nt * np.linalg.norm(c_0))
    return np.stack([a, c], axis=-1)


@dataclass(frozen=True)
class BranchPoint:
    z: complex
    uv: tuple[float, float]
    residual: float
    fz_ratio: float
    status: str  # "root" or "suspect"


@dataclass(frozen=True)
class BranchScan:
    points: list[BranchPoint]
    suspects: list[BranchPoint]
    median_fz: float

    def __len__(self):
        return len(self.points)


def _reduce(L: Lattice, z: complex):
    u, v = L.coordinates(z)
    u, v = float(u) % 1.0, float(v) % 1.0
    u = 0.0 if u > 1 - 1e-12 else u
    v = 0.0 if v > 1 - 1e-12 else v
    return u, v, complex(L.point(u, v))


def _same_point(a, b, atol=1e-7) -> bool:
    du = abs(a[0] - b[0])
    dv = abs(a[1] - b[1])
    return min(du, 1 - du) < atol and min(dv, 1 - dv) < atol


def branch_scan(T: TorusImmersion, n1: int = 64, n2: int = 64, tol: float = 0.1) -> BranchScan:
    """Find zeros of f_z through the theta conditions on t(z).

    Grid nodes that are local minima of |g|, with both components below
    ``tol``, seed a Levenberg-Marquardt solve of the four real equations
    Re/Im g = 0 in (x, y).  A converged root (residual < 1e-10) is accepted
    when also |f_z| <= 1e-6 median|f_z|; anything else is a suspect.
    """
    L = T.lattice
    R = T.roots
    g = T.frequencies.gammas
    c_inf, c_0 = _hyperplane_coefficients(R)
    nt = np.linalg.norm(T.t)
    w_inf = c_inf * T.t / (nt * np.linalg.norm(c_inf))
    w_0 = c_0 * T.t / (nt * np.linalg.norm(c_0))

    u, v = np.meshgrid(np.arange(n1) / n1, np.arange(n2) / n2, indexing="ij")
    zg = L.point(u, v)
    G = _theta_map(T, zg)
    mag = np.max(np.abs(G), axis=-1)
    med = float(np.median(np.linalg.norm(evaluate_f_z(T, zg), axis=-1)))

    is_min = np.ones_like(mag, dtype=bool)
    for di in (-1, 0, 1):
        for dj in (-1, 0, 1):
            if di or dj:
                is_min &= mag <= np.roll(np.roll(mag, di, 0), dj, 1)
    seeds = zg[is_min & (mag < tol)]

    def resid(p):
        e = character(-g, p[0] + 1j * p[1])
        a, c = np.sum(w_inf * e), np.sum(w_0 * e)
        return np.array([a.real, a.imag, c.real, c.imag])

    def jac(p):
        e = character(-g, p[0] + 1j * p[1])
        out = []
        for w in (w_inf, w_0):
            dx = np.sum(w * e * (-2j * np.pi * g.real))
            dy = np.sum(w * e * (-2j * np.pi * g.imag))
            out += [[dx.real, dy.real], [dx.imag, dy.imag]]
        return np.array(out)

    points: list[BranchPoint] = []
    suspects: list[BranchPoint] = []
    for z0 in seeds:
        sol = least_squares(resid, [z0.real, z0.imag], jac=jac, method="lm", xtol=1e-15, ftol=1e-15, gtol=1e-15)
        zs = complex(sol.x[0], sol.x[1])
        uu, vv, zr = _reduce(L, zs)
        res = float(np.max(np.abs(resid([zr.real, zr.imag]))))
        fz = float(np.linalg.norm(evaluate_f_z(T, zr)))
        ratio = fz / med if med > 0 else np.inf
        ok = res < 1e-10 and ratio <= 1e-6
        bp = BranchPoint(zr, (uu, vv), res, ratio, "root" if ok else "suspect")
        bucket = points if ok else suspects
        if not any(_same_point(bp.uv, q.uv) for q in bucket):
            bucket.append(bp)
    return BranchScan(points, suspects, med)


def branch_bound(indices) -> int | None:
    """``8 l m`` with l, m the largest winding indices; None if not integral."""
    if isinstance(indices, MaslovIndices):
        if not indices.integral:
            return None
        pairs = indices.pairs
    else:
        pairs = [(float(a), float(c)) for a, c in indices]
        if any(abs(a - round(a)) > 1e-9 or abs(c - round(c)) > 1e-9 for a, c in pairs):
            return None
    if not pairs:
        return 0
    l = max(abs(round(a)) for a, _ in pairs)
    m = max(abs(round(c)) for _, c in pairs)
    return int(8 * l * m)


def branched_spectral_point(R: SpectralRoots, rng=None) -> np.ndarray:
    """A random t on both theta hyperplanes, so z = 0 is a branch point.

    Needs N >= 4 (for N = 2 the two conditions force t = 0).
    """
    if R.N < 4:
        raise ValueError("theta hyperplanes meet only at t = 0 when N = 2")
    rng = np.random.default_rng(rng)
    C = np.array(_hyperplane_coefficients(R))
    t = rng.standard_normal(R.N) + 1j * rng.standard_normal(R.N)
    t = t - C.conj().T @ np.linalg.solve(C @ C.conj().T, C @ t)
    return t / np.linalg.norm(t)


def chi1_zero_structure(T: TorusImmersion, z) -> tuple[float, float]:
    """``(|d chi1/d lam (0, z)|, |lam^N coefficient of chi1(., z)|)``, both
    relative to the coefficient norm of chi1(., z).
    """
    tz = T.t * character(-T.frequencies.gammas, z)
    h = iota_inverse(T.roots, tz) * T.roots.V  # phi coefficients, chi1 = lam * phi
    n = np.linalg.norm(h)
    return float(abs(h[0]) / n), float(abs(h[-1]) / n)
