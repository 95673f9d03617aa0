"""Command-line front end.

Each command reads one JSON experiment config and writes plot-ready CSV
and JSON files into the output directory::

    fringe-psa demodulate --config exp.json --out results/
    fringe-psa spectrum   --config exp.json --grid 2048 --quad-threshold 0.05
    fringe-psa sweep      --config exp.json --probes 256
    fringe-psa snr        --config exp.json
    fringe-psa design     --config exp.json

Exit status is 0 only when every artifact was written. Failures print a
single ``ErrorName: message`` line on stderr.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path
from typing import List, Literal, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from . import io
from .demod_analysis import (
    default_workers,
    demodulate,
    monte_carlo_phase_variance,
    phase_error_sweep,
    predict_piston,
    snr,
)
from .errors import ConfigError, FringePsaError, ZeroSum
from .fringe_model import (
    FringeParams,
    NoiseModel,
    add_awgn,
    make_profile,
    quadratic,
    synthesize,
)
from .psa_design import (
    build_linear_psa,
    build_nonlinear_psa,
    custom_window,
    design_window,
    gaussian_window,
    square_window,
    zero_leakage_residuals,
)
from .spectral import DEFAULT_GRID, fringe_spectrum, ftf, harmonic_response, quadrature_check

SCHEMA_VERSION = 1
DEFAULT_QUAD_THRESHOLD = 0.05
DEFAULT_PROBES = 256
REPORTED_HARMONICS = (-7, -3, -1, 1, 5, 9)

EXIT_OK = 0
EXIT_RUNTIME = 1
EXIT_CONFIG = 2


class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)


class DeltaConfig(_Strict):
    kind: Literal["quadratic", "samples"]
    epsilon2: Optional[float] = None
    epsilon2_over_omega0: Optional[float] = None
    values: Optional[List[float]] = None

    @model_validator(mode="after")
    def _one_source(self):
        if self.kind == "quadratic":
            if (self.epsilon2 is None) == (self.epsilon2_over_omega0 is None):
                raise ValueError("quadratic delta needs exactly one of epsilon2, epsilon2_over_omega0")
            if self.values is not None:
                raise ValueError("quadratic delta takes no values")
        else:
            if self.values is None:
                raise ValueError("samples delta needs values")
            if self.epsilon2 is not None or self.epsilon2_over_omega0 is not None:
                raise ValueError("samples delta takes no epsilon2")
        return self


class ProfileConfig(_Strict):
    omega0_over_pi: float = Field(gt=0, lt=1)
    delta: DeltaConfig = DeltaConfig(kind="quadratic", epsilon2=0.0)
    n_steps: int


class FringeConfig(_Strict):
    a: float = 1.0
    b: float = 1.0
    phi: float = 0.0


class WindowConfig(_Strict):
    kind: Literal["square", "gaussian", "designed", "custom"]
    g: Optional[float] = None
    values: Optional[List[float]] = None

    @model_validator(mode="after")
    def _fields_for_kind(self):
        if self.kind == "gaussian" and self.g is None:
            raise ValueError("gaussian window needs g")
        if self.kind == "custom" and self.values is None:
            raise ValueError("custom window needs values")
        return self


class NoiseConfig(_Strict):
    n0: float
    seed: int = Field(default=0, ge=0, lt=2**64)
    trials: Optional[int] = None


class SweepConfig(_Strict):
    n_probe: int = DEFAULT_PROBES


class ExperimentConfig(_Strict):
    profile: ProfileConfig
    fringe: FringeConfig = FringeConfig()
    window: WindowConfig
    noise: Optional[NoiseConfig] = None
    sweep: Optional[SweepConfig] = None
    output_dir: str = "."


def load_config(path) -> ExperimentConfig:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from None
    try:
        return ExperimentConfig.model_validate_json(text)
    except ValidationError as exc:
        first = exc.errors()[0]
        loc = ".".join(str(p) for p in first["loc"]) or "<root>"
        raise ConfigError(f"{loc}: {first['msg']} ({exc.error_count()} error(s))") from None


class Experiment:
    """Profile, window and PSAs built from a config."""

    def __init__(self, cfg: ExperimentConfig):
        self.cfg = cfg
        p = cfg.profile
        omega0 = p.omega0_over_pi * math.pi
        if p.delta.kind == "quadratic":
            eps = p.delta.epsilon2 if p.delta.epsilon2 is not None else p.delta.epsilon2_over_omega0 * omega0
            delta = quadratic(eps)
        else:
            delta = p.delta.values
        self.profile = make_profile(omega0, delta, p.n_steps)
        self.params = FringeParams(cfg.fringe.a, cfg.fringe.b, cfg.fringe.phi)
        self.window = self._window()
        self.psa = build_nonlinear_psa(self.profile, self.window)

    def _window(self):
        w = self.cfg.window
        n = self.profile.n_steps
        if w.kind == "square":
            return square_window(n)
        if w.kind == "gaussian":
            return gaussian_window(n, w.g)
        if w.kind == "designed":
            return design_window(self.profile, n)
        win = custom_window(w.values)
        if len(win) != n:
            raise ConfigError(f"custom window has {len(win)} values for {n} steps")
        return win

    def linear_twin(self):
        """Linear-reference PSA with ``d_n`` equal to the window weights."""
        return build_linear_psa(self.profile.omega0, self.window.weights, window=self.window)

    def fringes(self):
        f = synthesize(self.profile, self.params)
        if self.cfg.noise is not None:
            f = add_awgn(f, NoiseModel(self.cfg.noise.n0, self.cfg.noise.seed))
        return f


def _clean(x):
    if isinstance(x, dict):
        return {k: _clean(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_clean(v) for v in x]
    if isinstance(x, (np.floating, float)):
        x = float(x)
        return x if math.isfinite(x) else None
    if isinstance(x, np.integer):
        return int(x)
    return x


def write_json(path, payload):
    payload = {"schema_version": SCHEMA_VERSION, **payload}
    Path(path).write_text(json.dumps(_clean(payload), indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return path


def _flatten(payload, prefix=""):
    for key in sorted(payload):
        value = payload[key]
        if isinstance(value, dict):
            yield from _flatten(value, f"{prefix}{key}.")
        else:
            yield f"{prefix}{key}", value


def write_flat(path, payload):
    """Plain ``key = value`` report, one line per leaf of ``payload``."""
    payload = _clean({"schema_version": SCHEMA_VERSION, **payload})
    lines = [f"{k} = {v!r}" for k, v in _flatten(payload)]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


def _complex(z):
    return {"re": z.real, "im": z.imag, "abs": abs(z)}


def cmd_demodulate(exp: Experiment, out: Path, args):
    fringes = exp.fringes()
    res = demodulate(exp.psa, fringes)
    dc, conj = zero_leakage_residuals(exp.psa, exp.profile)
    io.write_fringes_csv(out / "fringes.csv", fringes)
    write_json(out / "demod.json", {
        "phase": res.phase,
        "amplitude": res.amplitude,
        "analytic": _complex(res.analytic),
        "phi": exp.params.phi,
        "residuals": {"dc": _complex(dc), "conjugate": _complex(conj)},
        "window": exp.window.kind,
    })


def cmd_spectrum(exp: Experiment, out: Path, args):
    h = ftf(exp.psa, args.grid)
    spec = fringe_spectrum(synthesize(exp.profile, exp.params), args.grid)
    report = quadrature_check(h)
    harmonics = harmonic_response(exp.psa, exp.profile, REPORTED_HARMONICS)
    io.write_spectrum_csv(out / "ftf.csv", h)
    io.write_spectrum_csv(out / "fringe_spectrum.csv", spec)
    io.write_psa_csv(out / "psa.csv", exp.psa)
    passes = report.leakage_ratio <= args.quad_threshold
    write_json(out / "report.json", {
        **report.as_dict(),
        "quad_threshold": args.quad_threshold,
        "passes_quadrature": bool(passes),
        "status": "ok" if passes else "fails quadrature",
        "grid_size": args.grid,
        "harmonic_response": {str(k): r for k, r in harmonics},
    })


def cmd_sweep(exp: Experiment, out: Path, args):
    if exp.cfg.sweep is None and args.probes is None:
        raise ConfigError("sweep section missing from config")
    n_probe = args.probes or exp.cfg.sweep.n_probe
    result = phase_error_sweep(exp.psa, exp.profile, exp.params, n_probe)
    io.write_sweep_csv(out / "sweep.csv", result)
    write_json(out / "summary.json", {
        "peak_abs_error": result.peak_abs_error,
        "n_probe": n_probe,
        "mean_error": float(np.mean(result.errors)),
    })


def cmd_snr(exp: Experiment, out: Path, args):
    if exp.cfg.noise is None:
        raise ConfigError("noise section missing from config")
    b, n0 = exp.params.modulation, exp.cfg.noise.n0
    linear = exp.linear_twin()
    r1 = snr(linear, exp.profile, b, n0)
    r2 = snr(exp.psa, exp.profile, b, n0)
    payload = {
        "snr1": r1.snr,
        "snr2": r2.snr,
        "ratio": r2.snr / r1.snr,
        "linear_reference": r1.as_dict(),
        "nonlinear_reference": r2.as_dict(),
    }
    try:
        payload["linear_reference_piston"] = predict_piston(linear, exp.profile)
    except ZeroSum:
        payload["linear_reference_piston"] = None
    trials = exp.cfg.noise.trials
    if trials:
        noise = NoiseModel(n0, exp.cfg.noise.seed)
        workers = default_workers()
        payload["monte_carlo"] = {
            "trials": trials,
            "nonlinear_phase_variance": monte_carlo_phase_variance(
                exp.psa, exp.profile, exp.params, noise, trials, workers),
            "linear_phase_variance": monte_carlo_phase_variance(
                linear, exp.profile, exp.params, noise, trials, workers),
        }
    write_json(out / "snr.json", payload)
    write_flat(out / "snr.txt", payload)


def cmd_design(exp: Experiment, out: Optional[Path], args):
    w = design_window(exp.profile)
    lines = ["n,weight"] + [f"{n},{io.fmt(x)}" for n, x in enumerate(w.weights)]
    sys.stdout.write("\n".join(lines) + "\n")
    if args.out is not None:
        io.write_rows(out / "window.csv", ("n", "weight"), enumerate(w.weights))


COMMANDS = {
    "demodulate": cmd_demodulate,
    "spectrum": cmd_spectrum,
    "sweep": cmd_sweep,
    "snr": cmd_snr,
    "design": cmd_design,
}


def build_parser():
    parser = argparse.ArgumentParser(
        prog="fringe-psa",
        description="Design and evaluate phase-stepping algorithms for nonlinear phase-shifted fringes.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", required=True, help="JSON experiment config")
        p.add_argument("--out", default=None, help="output directory (overrides output_dir)")
        p.add_argument("--grid", type=int, default=DEFAULT_GRID, help="frequency grid size")
        p.add_argument("--probes", type=int, default=None, help="phase probes for sweep")
        p.add_argument("--quad-threshold", type=float, default=DEFAULT_QUAD_THRESHOLD,
                       help="largest leakage ratio that still counts as a quadrature filter")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config)
    except ConfigError as exc:
        print(f"ConfigError: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    out = Path(args.out if args.out is not None else cfg.output_dir)
    try:
        exp = Experiment(cfg)
        if args.command != "design" or args.out is not None:
            out.mkdir(parents=True, exist_ok=True)
        COMMANDS[args.command](exp, out, args)
    except FringePsaError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_CONFIG if isinstance(exc, ConfigError) else EXIT_RUNTIME
    except ValueError as exc:
        print(f"ValueError: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
