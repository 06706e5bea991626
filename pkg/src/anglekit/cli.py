"""Command-line front end: spectra, lower symbols, commutator sweeps, checks.

Outputs are plain CSV for grids/spectra and JSON for check reports, and
are byte-identical across runs of the same configuration.  Exit codes:
0 success, 1 check failure, 2 usage or configuration error, 3 numerical
failure.
"""

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass

import numpy as np

from . import checks, circlecs, halfcircle, linalg, whquant
from .errors import ConvergenceError, DomainError
from .linalg import BasisSpec

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2
EXIT_NUMERICAL = 3

_CONSTRUCTIONS = ("halfcircle", "wh", "circle", "canonical")


@dataclass
class ExperimentConfig:
    """Validated bundle of experiment parameters shared by subcommands."""

    construction: str = "wh"
    dim: int = 64
    mode: str = "two_sided"
    t: float = 0.0
    sigma: float = 1.0
    harmonics: int = None
    J: float = 25.0
    gamma_grid: int = 64
    dims: tuple = (128, 256)
    margins: tuple = (32, 64)
    output: str = None
    fmt: str = "csv"
    threads: int = 1

    def validate(self):
        if self.construction not in _CONSTRUCTIONS:
            raise DomainError(f"construction must be one of {_CONSTRUCTIONS}")
        if not 4 <= self.dim <= 1024:
            raise DomainError(f"dim must lie in [4, 1024], got {self.dim}")
        if self.mode not in ("one_sided", "two_sided", "cyclic"):
            raise DomainError(f"unknown mode {self.mode!r}")
        if not 0.0 <= self.t < 1.0:
            raise DomainError(f"t must lie in [0, 1), got {self.t}")
        if self.sigma <= 0:
            raise DomainError(f"sigma must be positive, got {self.sigma}")
        if self.J < 0:
            raise DomainError(f"J must be nonnegative, got {self.J}")
        if self.gamma_grid < 8:
            raise DomainError(f"gamma-grid must be at least 8, got {self.gamma_grid}")
        if self.fmt not in ("csv", "json"):
            raise DomainError(f"format must be csv or json, got {self.fmt}")
        if self.threads < 1:
            raise DomainError(f"threads must be >= 1, got {self.threads}")
        for d in self.dims:
            if not 8 <= d <= 1024:
                raise DomainError(f"sweep dim {d} outside [8, 1024]")
        for m in self.margins:
            if m < 1:
                raise DomainError(f"margin {m} must be positive")
        return self


def _parse_config_file(path, known_keys):
    """Flat key=value lines; keys mirror the long CLI flags."""
    overrides = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise DomainError(f"{path}:{lineno}: expected key=value, got {line!r}")
            key, value = (part.strip() for part in line.split("=", 1))
            key = key.replace("-", "_")
            if key not in known_keys:
                raise DomainError(f"{path}:{lineno}: unknown config key {key!r}")
            overrides[key] = value
    return overrides


_CONFIG_CASTS = {
    "construction": str,
    "dim": int,
    "mode": str,
    "t": float,
    "sigma": float,
    "harmonics": int,
    "J": float,
    "gamma_grid": int,
    "dims": lambda s: tuple(int(x) for x in s.split(",") if x),
    "margins": lambda s: tuple(int(x) for x in s.split(",") if x),
    "output": str,
    "fmt": str,
    "threads": int,
    "suite": str,
}


def _fmt_float(value):
    return repr(float(value))


def _write_text(path, text):
    if path is None:
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _spectrum_operator(cfg):
    if cfg.construction == "halfcircle":
        offset = -cfg.dim // 2 if cfg.mode == "two_sided" else 0
        fam = halfcircle.build_shift_family(BasisSpec(cfg.mode, cfg.dim, offset))
        return halfcircle.full_angle(fam), cfg.mode
    if cfg.construction == "wh":
        return whquant.angle_matrix(cfg.t, cfg.dim), _fmt_float(cfg.t)
    if cfg.construction == "circle":
        dist = circlecs.gaussian_distribution(cfg.sigma)
        basis = BasisSpec("two_sided", cfg.dim, -cfg.dim // 2)
        op = circlecs.quantize_cyl(
            dist, basis, fourier_angle=circlecs.circle_sawtooth_fourier(cfg.dim - 1)
        )
        return op, _fmt_float(cfg.sigma)
    harmonics = cfg.harmonics if cfg.harmonics is not None else cfg.dim // 2 - 1
    op = whquant.canonical_angle_B(cfg.dim, mode="cyclic", q_cutoff=harmonics)
    return op, str(harmonics)


def cmd_spectrum(cfg):
    op, param = _spectrum_operator(cfg)
    eig = linalg.hermitian_eig(op)
    lines = ["construction,D,param,index,eigenvalue"]
    for idx, lam in enumerate(eig.eigenvalues):
        lines.append(f"{cfg.construction},{cfg.dim},{param},{idx},{_fmt_float(lam)}")
    _write_text(cfg.output, "\n".join(lines) + "\n")
    return EXIT_OK


def cmd_lower_symbol(cfg):
    if cfg.construction == "wh":
        op = whquant.angle_matrix(cfg.t, cfg.dim)
        weight = whquant.WeightSpec(kind="cahill_glauber", t=cfg.t)

        def symbol(angle):
            return whquant.lower_symbol(
                op, weight, whquant.PhaseSpacePoint(cfg.J, angle), warn_leak=False
            )

    elif cfg.construction == "circle":
        dist = circlecs.gaussian_distribution(cfg.sigma)
        basis = BasisSpec("two_sided", cfg.dim, -cfg.dim // 2)
        op = circlecs.quantize_cyl(
            dist, basis, fourier_angle=circlecs.circle_sawtooth_fourier(cfg.dim - 1)
        )

        def symbol(angle):
            return circlecs.lower_symbol_cyl(op, dist, circlecs.CylinderPoint(cfg.J, angle))

    else:
        raise DomainError("lower-symbol supports constructions 'wh' and 'circle'")
    lines = ["J,gamma_or_phi,re,im"]
    for angle in np.linspace(0.0, 2.0 * math.pi, cfg.gamma_grid, endpoint=False):
        val = symbol(float(angle))
        lines.append(
            f"{_fmt_float(cfg.J)},{_fmt_float(angle)},{_fmt_float(val.real)},{_fmt_float(val.imag)}"
        )
    _write_text(cfg.output, "\n".join(lines) + "\n")
    return EXIT_OK


def cmd_commutator(cfg):
    lines = ["D,margin,window_lo,window_hi,defect"]
    for dim in cfg.dims:
        basis = BasisSpec("two_sided", dim, -dim // 2)
        fam = halfcircle.build_shift_family(basis)
        pair = halfcircle.cos_sin_pair(fam)
        angle = halfcircle.angle_upper(pair.C, method="spectral")
        sigma = halfcircle.sigma_isometry(pair.S)
        for margin in cfg.margins:
            if 2 * margin >= dim:
                continue
            lo, hi = halfcircle.interior_window(basis, margin)
            defect = halfcircle.commutator_defect(fam, angle, sigma, margin)
            lines.append(f"{dim},{margin},{lo},{hi},{_fmt_float(defect)}")
    _write_text(cfg.output, "\n".join(lines) + "\n")
    return EXIT_OK


def cmd_check(suite, cfg, narrowed):
    names = checks.suite_names() if suite == "all" else [suite]
    params = checks.CheckParams(
        dim=cfg.dim if narrowed.get("dim") else None,
        mode=cfg.mode if narrowed.get("mode") else None,
        t=cfg.t if narrowed.get("t") else None,
        sigma=cfg.sigma if narrowed.get("sigma") else None,
    )
    results = checks.run_checks(names, threads=cfg.threads, params=params)
    for res in results:
        print(
            f"{res.suite}/{res.invariant}: {res.status.upper()} "
            f"(measured={res.measured:.6e}, tolerance={res.tolerance:.6e})"
        )
    if cfg.output:
        payload = [
            {
                "suite": r.suite,
                "invariant": r.invariant,
                "status": r.status,
                "measured": r.measured,
                "tolerance": r.tolerance,
            }
            for r in results
        ]
        _write_text(cfg.output, json.dumps(payload, indent=2) + "\n")
    return EXIT_OK if all(r.passed for r in results) else EXIT_CHECK_FAILED


def build_parser():
    parser = argparse.ArgumentParser(
        prog="anglekit",
        description="Finite-truncation numerics for quantum angle operators.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--config", help="flat key=value file mirroring the flags")
        p.add_argument("--output", help="output file (default: stdout)")
        p.add_argument("--dim", type=int, help="truncation dimension (default 64)")
        p.add_argument(
            "--threads",
            type=int,
            help="worker threads for sweeps (default: ANGLEKIT_THREADS or 1)",
        )

    p_spec = sub.add_parser("spectrum", help="sorted eigenvalues of an angle operator")
    add_common(p_spec)
    p_spec.add_argument("--construction", choices=_CONSTRUCTIONS, help="default wh")
    p_spec.add_argument("--mode", help="basis mode for halfcircle (default two_sided)")
    p_spec.add_argument("--t", type=float, help="weight parameter in [0, 1), default 0")
    p_spec.add_argument("--sigma", type=float, help="circle density width, default 1")
    p_spec.add_argument("--harmonics", type=int, help="canonical cutoff Q (default dim/2 - 1)")

    p_sym = sub.add_parser("lower-symbol", help="symbol of the angle operator on a grid")
    add_common(p_sym)
    p_sym.add_argument("--construction", choices=("wh", "circle"), help="default wh")
    p_sym.add_argument("--t", type=float, help="weight parameter, default 0")
    p_sym.add_argument("--sigma", type=float, help="circle density width, default 1")
    p_sym.add_argument("--J", type=float, help="action coordinate, default 25")
    p_sym.add_argument("--gamma-grid", type=int, help="angle sample count, default 64")

    p_comm = sub.add_parser("commutator", help="commutation defect vs window table")
    add_common(p_comm)
    p_comm.add_argument("--dims", help="comma-separated dimensions (default 128,256)")
    p_comm.add_argument("--margins", help="comma-separated window margins (default 32,64)")

    p_check = sub.add_parser("check", help="run invariant suites")
    add_common(p_check)
    p_check.add_argument(
        "suite",
        choices=checks.suite_names() + ["all"],
        help="suite name or 'all'",
    )
    p_check.add_argument("--mode", help="basis mode narrowing, where a suite allows it")
    p_check.add_argument("--t", type=float, help="weight parameter narrowing")
    p_check.add_argument("--sigma", type=float, help="density width narrowing")
    return parser


def _config_from_args(args):
    cfg = ExperimentConfig()
    provided = set()
    if getattr(args, "config", None):
        file_overrides = _parse_config_file(args.config, set(_CONFIG_CASTS))
        for key, value in file_overrides.items():
            if key == "suite":
                continue
            setattr(cfg, key, _CONFIG_CASTS[key](value))
            provided.add(key)
    explicit = {
        "construction": getattr(args, "construction", None),
        "dim": getattr(args, "dim", None),
        "mode": getattr(args, "mode", None),
        "t": getattr(args, "t", None),
        "sigma": getattr(args, "sigma", None),
        "harmonics": getattr(args, "harmonics", None),
        "J": getattr(args, "J", None),
        "gamma_grid": getattr(args, "gamma_grid", None),
        "output": getattr(args, "output", None),
        "threads": getattr(args, "threads", None),
    }
    if getattr(args, "dims", None) is not None:
        explicit["dims"] = tuple(int(x) for x in str(args.dims).split(",") if x)
    if getattr(args, "margins", None) is not None:
        explicit["margins"] = tuple(int(x) for x in str(args.margins).split(",") if x)
    for key, value in explicit.items():
        if value is not None:
            setattr(cfg, key, value)
            provided.add(key)
    if cfg.threads is None:
        env = os.environ.get("ANGLEKIT_THREADS", "")
        cfg.threads = int(env) if env.isdigit() and int(env) >= 1 else 1
    return cfg.validate(), provided


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg, provided = _config_from_args(args)
    except (DomainError, OSError, ValueError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        if args.command == "spectrum":
            return cmd_spectrum(cfg)
        if args.command == "lower-symbol":
            return cmd_lower_symbol(cfg)
        if args.command == "commutator":
            return cmd_commutator(cfg)
        if args.command == "check":
            narrowed = {key: key in provided for key in ("dim", "mode", "t", "sigma")}
            return cmd_check(args.suite, cfg, narrowed)
    except (ConvergenceError, DomainError, FloatingPointError) as exc:
        print(f"numerical failure in {args.command}: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    raise AssertionError(f"unhandled command {args.command}")


if __name__ == "__main__":
    sys.exit(main())
