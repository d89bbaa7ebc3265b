"""Command-line interface: ``hsltori <command> --config run.json``.

Config is one JSON document; complex numbers are ``[re, im]`` pairs::

    {
      "lattice": {"tau1": [1, 0], "tau2": [0, 1]},   default square lattice
      "beta0": [1, 3],                               required
      "t": [[1, 0], [0, 1], ...],                    optional, else random from seed
      "seed": 0,                                     default 0
      "grid": {"n1": 16, "n2": 16},                  default: bandwidth grid
      "projection": "drop4",                         drop1..drop4 or stereo
      "tolerances": {"pointwise": 1e-9, "mean_curvature": 1e-6,
                     "willmore": 1e-6, "area": 1e-8, "pkf": 1e-8},
      "flow": {"a": [[1, 0], ...], "time": 1.0, "steps": 10, "mode": "fixed"},
      "quaternion": [1, 0, 0, 0],
      "outputs": {"csv": "torus.csv", "obj": "torus.obj", "ply": "torus.ply",
                  "report": "report.json", "trajectory": "trajectory.csv"}
    }

Exit codes: 0 success, 1 a verification failed, 2 invalid or empty
problem, 3 I/O error.  Floats are written with 17 significant digits.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
import warnings
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import flows as fl
from . import pkf as pk
from . import verification as ver
from .immersion import TorusImmersion, bandwidth_grid, build_immersion, sample_grid
from .lattice import (
    EmptyFrequencySet,
    Lattice,
    MaslovClass,
    enumerate_maslov_frequencies,
    maslov_indices,
)
from .meshio import PROJECTIONS, export_mesh
from .spectral import RootCollision, roots_from_frequencies

EXIT_OK, EXIT_FAIL, EXIT_INVALID, EXIT_IO = 0, 1, 2, 3

DEFAULT_TOLERANCES = {
    "pointwise": 1e-9,
    "mean_curvature": 1e-6,
    "willmore": 1e-6,
    "area": 1e-8,
    "pkf": 1e-8,
    "isometry": 1e-9,
}
DEFAULT_OUTPUTS = {
    "csv": "torus.csv",
    "obj": "torus.obj",
    "ply": "torus.ply",
    "report": "report.json",
    "trajectory": "trajectory.csv",
}


class ConfigError(ValueError):
    pass


def _complex(x, what: str) -> complex:
    if isinstance(x, (int, float)) and not isinstance(x, bool):
        return complex(x)
    if isinstance(x, (list, tuple)) and len(x) == 2 and all(isinstance(v, (int, float)) for v in x):
        return complex(float(x[0]), float(x[1]))
    raise ConfigError(f"{what}: expected [re, im], got {x!r}")


@dataclass
class RunConfig:
    tau1: complex = 1 + 0j
    tau2: complex = 1j
    beta0: complex = 0j
    t: np.ndarray | None = None
    seed: int = 0
    grid: tuple[int, int] | None = None
    projection: str = "drop4"
    tolerances: dict = field(default_factory=lambda: dict(DEFAULT_TOLERANCES))
    flow: dict | None = None
    quaternion: np.ndarray | None = None
    outputs: dict = field(default_factory=lambda: dict(DEFAULT_OUTPUTS))

    @classmethod
    def from_dict(cls, d: dict) -> "RunConfig":
        if not isinstance(d, dict):
            raise ConfigError("config must be a JSON object")
        c = cls()
        lat = d.get("lattice", {})
        c.tau1 = _complex(lat.get("tau1", [1, 0]), "lattice.tau1")
        c.tau2 = _complex(lat.get("tau2", [0, 1]), "lattice.tau2")
        if "beta0" not in d:
            raise ConfigError("beta0 is required")
        c.beta0 = _complex(d["beta0"], "beta0")
        if d.get("t") is not None:
            c.t = np.array([_complex(x, "t") for x in d["t"]])
        c.seed = int(d.get("seed", 0))
        if d.get("grid") is not None:
            g = d["grid"]
            c.grid = (int(g["n1"]), int(g["n2"]))
        c.projection = d.get("projection", "drop4")
        if c.projection not in PROJECTIONS:
            raise ConfigError(f"projection must be one of {PROJECTIONS}")
        tol = d.get("tolerances", {})
        unknown = set(tol) - set(DEFAULT_TOLERANCES)
        if unknown:
            raise ConfigError(f"unknown tolerance keys {sorted(unknown)}")
        c.tolerances.update({k: float(v) for k, v in tol.items()})
        if d.get("flow") is not None:
            f = dict(d["flow"])
            if "a" not in f:
                raise ConfigError("flow.a is required")
            f["a"] = np.array([_complex(x, "flow.a") for x in f["a"]])
            f["time"] = float(f.get("time", 1.0))
            f["steps"] = int(f.get("steps", 10))
            f["mode"] = f.get("mode", "fixed")
            if f["mode"] not in ("fixed", "projected") or f["steps"] < 1:
                raise ConfigError("flow.mode must be fixed or projected, flow.steps >= 1")
            c.flow = f
        if d.get("quaternion") is not None:
            q = np.asarray(d["quaternion"], dtype=float)
            if q.shape != (4,):
                raise ConfigError("quaternion must have four components")
            c.quaternion = q
        c.outputs.update(d.get("outputs", {}))
        return c


@dataclass
class Problem:
    config: RunConfig
    T: TorusImmersion


def _parse_grid(text: str) -> tuple[int, int]:
    try:
        a, b = text.lower().split("x")
        n1, n2 = int(a), int(b)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"grid must look like 16x16, got {text!r}") from exc
    if n1 < 1 or n2 < 1:
        raise argparse.ArgumentTypeError("grid sizes must be positive")
    return n1, n2


def load_config(args) -> RunConfig:
    try:
        raw = json.loads(Path(args.config).read_text())
    except OSError as exc:
        raise OSError(f"cannot read config {args.config}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from exc
    c = RunConfig.from_dict(raw)
    if args.seed is not None:
        c.seed = args.seed
    if args.grid is not None:
        c.grid = args.grid
    if args.projection is not None:
        c.projection = args.projection
    return c


def build_problem(c: RunConfig) -> Problem:
    L = Lattice(c.tau1, c.tau2)
    b = MaslovClass(c.beta0, L)
    F = enumerate_maslov_frequencies(L, b)
    R = roots_from_frequencies(F, b)
    if c.t is None:
        rng = np.random.default_rng(c.seed)
        t = rng.standard_normal(R.N) + 1j * rng.standard_normal(R.N)
        t = t / np.linalg.norm(t)
    else:
        t = c.t
        if t.size != R.N:
            raise ConfigError(f"t has {t.size} entries but N = {R.N}")
    return Problem(c, build_immersion(L, b, F, R, t))


def _cx(z) -> list:
    return [float(np.real(z)), float(np.imag(z))]


def _grid(P: Problem) -> tuple[int, int]:
    return P.config.grid or bandwidth_grid(P.T)


def _atomic_write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=".tmp-")
    with os.fdopen(fd, "w") as fh:
        fh.write(text)
    os.replace(tmp, path)


def _atomic_export(S, fmt: str, projection: str, path: Path) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=".tmp-")
    os.close(fd)
    export_mesh(S, fmt, projection, tmp)
    os.replace(tmp, path)
    return path


# ------------------------------------------------------------------ commands


def cmd_frequencies(P: Problem, args) -> tuple[dict, int]:
    T = P.T
    idx = maslov_indices(T.frequencies, T.lattice)
    out = {
        "N": T.N,
        "genus": 4 * (T.N - 1),
        "beta0": _cx(T.beta0),
        "gammas": [_cx(g) for g in T.frequencies.gammas],
        "roots": [_cx(s) for s in T.roots.s],
        "l": [float(x) for x in idx.l],
        "m": [float(x) for x in idx.m],
        "integral_indices": idx.integral,
        "truly_periodic": T.maslov.truly_periodic(T.lattice),
    }
    return out, EXIT_OK


def cmd_build(P: Problem, args) -> tuple[dict, int]:
    n1, n2 = _grid(P)
    S = sample_grid(P.T, n1, n2)
    outs = P.config.outputs
    out_dir = Path(args.out or ".")
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        paths = {
            "csv4d": _atomic_export(S, "csv4d", P.config.projection, out_dir / outs["csv"]),
            "obj": _atomic_export(S, "obj", P.config.projection, out_dir / outs["obj"]),
            "ply": _atomic_export(S, "ply", P.config.projection, out_dir / outs["ply"]),
        }
    return {
        "grid": [n1, n2],
        "vertices": n1 * n2,
        "faces": n1 * n2,
        "projection": P.config.projection,
        "files": {k: str(v) for k, v in paths.items()},
        "warnings": sorted({str(w.message) for w in caught}),
    }, EXIT_OK


def verification_report(P: Problem, perturb: float | None = None) -> ver.VerificationReport:
    T, tol = P.T, P.config.tolerances
    n1, n2 = _grid(P)
    S = sample_grid(T, n1, n2)
    if perturb:
        S = ver.perturb_sample(S, perturb)
    rep = ver.VerificationReport()
    rep.add(ver.check_lagrangian(S, tol["pointwise"]))
    rep.add(ver.check_conformal(S, tol["pointwise"]))
    rep.add(ver.check_angle(S, T.maslov, tol["pointwise"]))
    rep.add(ver.mean_curvature_identity(S, T.maslov, tol=tol["mean_curvature"]))
    rep.add(ver.CheckResult("willmore", ver.willmore_check(S, T.lattice, T.maslov)[2], tol["willmore"]))
    rep.add(ver.CheckResult("area", ver.area_check(S, T.roots, T.t, T.lattice, T.maslov)[2], tol["area"]))
    z = pk.sample_points(T)
    X = pk.pkf_build_from_recursion(T)
    Y = pk.pkf_build_from_chi(T)
    k = tol["pkf"]
    rep.add(ver.CheckResult("pkf_routes", pk.pkf_difference(X, Y, z), k))
    rep.add(ver.CheckResult("lax", max(pk.lax_residual(X, T, z), pk.lax_residual(Y, T, z)), k))
    rep.add(ver.CheckResult("terminal", pk.terminal_residual(T, z), k))
    rep.add(ver.CheckResult("u_zbar", pk.u_zbar_residual(T, z), k))
    rep.add(ver.CheckResult("reality", pk.reality_residual(Y, z), k))
    rep.add(ver.CheckResult("tau_symmetry", pk.tau_symmetry_residual(Y, z), k))
    rep.add(ver.CheckResult("chi_relations", pk.chi_relations_residual(X, z), k))
    rep.add(ver.CheckResult("evolution", pk.evolution_residual(X, z), k))
    rep.add(ver.CheckResult("top_coefficient", pk.top_coefficient_residual(X, z), k))
    return rep


def cmd_verify(P: Problem, args) -> tuple[dict, int]:
    rep = verification_report(P, args.perturb)
    out = rep.as_dict()
    text = ver.dump_json(out)
    if args.out:
        _atomic_write(Path(args.out) / P.config.outputs["report"], text + "\n")
    return out, EXIT_OK if rep.passed else EXIT_FAIL


def _branch_summary(T: TorusImmersion, grid) -> dict:
    sc = ver.branch_scan(T, *grid)
    bound = ver.branch_bound(maslov_indices(T.frequencies, T.lattice))

    def rec(p):
        return {"z": _cx(p.z), "u": p.uv[0], "v": p.uv[1], "residual": p.residual, "fz_ratio": p.fz_ratio}

    return {
        "count": len(sc.points),
        "points": [rec(p) for p in sc.points],
        "suspects": [rec(p) for p in sc.suspects],
        "bound": bound,
        "within_bound": None if bound is None else len(sc.points) <= bound,
    }


def cmd_branch(P: Problem, args) -> tuple[dict, int]:
    out = _branch_summary(P.T, P.config.grid or (64, 64))
    code = EXIT_FAIL if out["within_bound"] is False else EXIT_OK
    return out, code


def cmd_flow(P: Problem, args) -> tuple[dict, int]:
    f = P.config.flow
    if f is None:
        raise ConfigError("the flow command needs a 'flow' section")
    T = P.T
    a = f["a"]
    if a.size != T.N:
        raise ConfigError(f"flow.a has {a.size} entries but N = {T.N}")
    times = np.linspace(0.0, f["time"], f["steps"] + 1)
    rows = fl.flow_trajectory(T.roots, T.t, a, T.lattice, T.maslov, times, f["mode"])
    s1, s2, ham = fl.hamiltonian_test(T.roots, T.t, a)
    lines = ["time,area,sum1,sum2"] + [",".join(format(x, ".17g") for x in r) for r in rows]
    if args.out:
        _atomic_write(Path(args.out) / P.config.outputs["trajectory"], "\n".join(lines) + "\n")
    area = rows[:, 1]
    return {
        "mode": f["mode"],
        "hamiltonian": ham,
        "sum1": s1,
        "sum2": s2,
        "area_derivative": fl.area_derivative(T.roots, T.t, a, T.lattice, T.maslov),
        "area_relative_spread": float(np.ptp(area) / area[0]),
        "rows": rows.tolist(),
    }, EXIT_OK


def cmd_rotate(P: Problem, args) -> tuple[dict, int]:
    q = P.config.quaternion
    if q is None:
        raise ConfigError("the rotate command needs a 'quaternion'")
    if abs(np.linalg.norm(q) - 1) > 1e-12:
        raise ConfigError(f"quaternion must have unit norm, |q| = {np.linalg.norm(q):.17g}")
    T = P.T
    t2 = fl.g0_act(T.roots, T.t, q)
    T2 = build_immersion(T.lattice, T.maslov, T.frequencies, T.roots, t2)
    rng = np.random.default_rng(P.config.seed)
    z1 = T.lattice.point(rng.random(32), rng.random(32))
    z2 = T.lattice.point(rng.random(32), rng.random(32))
    from .immersion import evaluate_f

    d1 = np.linalg.norm(evaluate_f(T, z1) - evaluate_f(T, z2), axis=-1)
    d2 = np.linalg.norm(evaluate_f(T2, z1) - evaluate_f(T2, z2), axis=-1)
    scale = float(np.max(np.abs(evaluate_f(T, z1))))
    n = _grid(P)
    S1, S2 = sample_grid(T, *n), sample_grid(T2, *n)
    a1 = ver.area_check(S1, T.roots, T.t, T.lattice, T.maslov)[0]
    a2 = ver.area_check(S2, T.roots, t2.t, T.lattice, T.maslov)[0]
    w1 = ver.willmore_check(S1, T.lattice, T.maslov)[0]
    w2 = ver.willmore_check(S2, T.lattice, T.maslov)[0]
    b1 = len(ver.branch_scan(T, 48, 48))
    b2 = len(ver.branch_scan(T2, 48, 48))
    W1 = fl.t_to_quaternions(T.roots, T.t).w
    W2 = fl.t_to_quaternions(T.roots, t2.t).w
    tol = P.config.tolerances
    rep = ver.VerificationReport()
    rep.add(ver.CheckResult("distances", float(np.max(np.abs(d1 - d2)) / scale), tol["isometry"]))
    rep.add(ver.CheckResult("area", abs(a1 - a2) / a1, tol["area"]))
    rep.add(ver.CheckResult("willmore", abs(w1 - w2) / w1, tol["willmore"]))
    rep.add(ver.CheckResult("branch_count", float(abs(b1 - b2)), 0.0))
    rep.add(ver.CheckResult("fibration", float(np.max(np.abs(fl.qmul(W1, q) - W2))), 1e-12 * max(1.0, np.abs(W1).max())))
    out = {"t": [_cx(x) for x in t2.t], "report": rep.as_dict()}
    return out, EXIT_OK if rep.passed else EXIT_FAIL


COMMANDS = {
    "frequencies": (cmd_frequencies, "list the frequency set, roots and indices"),
    "build": (cmd_build, "sample the torus and write CSV4D, OBJ and PLY"),
    "verify": (cmd_verify, "run every check and write a JSON report"),
    "branch": (cmd_branch, "scan for branch points and compare with 8lm"),
    "flow": (cmd_flow, "follow a higher flow and write (time, area, sum1, sum2)"),
    "rotate": (cmd_rotate, "apply a unit quaternion and report invariants"),
}


def make_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="hsltori",
        description="Hamiltonian stationary Lagrangian tori in R^4 from spectral data.",
        epilog="Exit codes: 0 ok, 1 check failed, 2 invalid or empty problem, 3 I/O error.",
    )
    sub = p.add_subparsers(dest="command", required=True)
    for name, (_, help_) in COMMANDS.items():
        s = sub.add_parser(name, help=help_, description=help_)
        s.add_argument("--config", required=True, help="JSON run configuration")
        s.add_argument("--out", help="output directory (default: current directory for build)")
        s.add_argument("--grid", type=_parse_grid, help="sample grid N1xN2 (default: bandwidth grid)")
        s.add_argument("--projection", choices=PROJECTIONS, help="R^3 projection for meshes (default drop4)")
        s.add_argument("--seed", type=int, help="seed for a random t (default 0)")
        s.add_argument("--quiet", action="store_true", help="no JSON on stdout")
        if name == "verify":
            s.add_argument("--perturb", type=float, default=None, metavar="DELTA",
                           help="add DELTA sin(2 pi u) to f4 before checking (should fail)")
    return p


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    fn, _ = COMMANDS[args.command]
    try:
        cfg = load_config(args)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore" if args.quiet else "default")
            P = build_problem(cfg)
            out, code = fn(P, args)
    except (EmptyFrequencySet, RootCollision, ConfigError, ValueError) as exc:
        print(f"hsltori: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except OSError as exc:
        print(f"hsltori: {exc}", file=sys.stderr)
        return EXIT_IO
    if not args.quiet:
        print(ver.dump_json(out))
    return code


if __name__ == "__main__":
    sys.exit(main())
