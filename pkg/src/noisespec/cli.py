"""Command-line front end.

Five subcommands: fisher-scan, chernoff-scan, mc-estimate, mc-detect
and spectra-dump.  Runs are described by a TOML config file; --seed,
--out and --tol override the corresponding config entries.  Data goes
only to the output CSV (17 significant digits, '.' decimal separator,
LF line ends, no timestamps), diagnostics only to stderr, so repeated
runs with the same config and seed are byte-identical.
"""

from __future__ import annotations

import argparse
import csv
import math
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from .chernoff import (
    chernoff_homodyne,
    chernoff_low_snr,
    chernoff_uspc,
    chernoff_uspc_discrete,
    error_prob_bounds,
    quantum_chernoff,
)
from .fisher import (
    fisher_homodyne,
    fisher_low_snr,
    fisher_uspc_continuum,
    homodyne_bound_integrand,
    quantum_bound_integrand,
    quantum_fisher_bound,
    uspc_bound_integrand,
)
from .inference import mc_detection, mc_estimation
from .numerics import QuadratureSpec
from .simulate import ModeGrid, SeedSpec
from .spectra import (
    TWO_PI,
    FlatBandConfig,
    NoiseSpectrumModel,
    ProbeProfile,
    TabulatedCurve,
    make_flat_band,
)


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    """Validated inputs of one CLI run."""

    model: NoiseSpectrumModel
    profile: ProbeProfile
    band_hz: float
    duration: float
    modes: int | None
    scan: np.ndarray
    theta: float
    trials: int
    seed: int
    method: str
    threshold: float
    out: str
    quad: QuadratureSpec
    opt_tol: float
    dump_points: int

    @property
    def bt(self) -> float:
        return self.band_hz * self.duration

    def mode_grid(self) -> ModeGrid:
        if self.modes is not None:
            return ModeGrid(self.duration, self.modes)
        return ModeGrid.for_band(self.duration, self.band_hz)


def _get(table: dict, key: str, kind, default=None, required=False):
    if key not in table:
        if required:
            raise ConfigError(f"missing config key '{key}'")
        return default
    value = table[key]
    if kind is float and isinstance(value, int) and not isinstance(value, bool):
        value = float(value)
    if not isinstance(value, kind) or isinstance(value, bool):
        raise ConfigError(f"config key '{key}' must be of type {kind.__name__}")
    return value


def _build_spectra(model_tbl: dict, base_dir: Path):
    kind = _get(model_tbl, "kind", str, required=True)
    theta = _get(model_tbl, "theta", float, default=1.0)
    if kind == "flat-band":
        band_hz = _get(model_tbl, "band_hz", float, required=True)
        probe_level = _get(model_tbl, "probe_level", float, default=1.0)
        try:
            cfg = FlatBandConfig(band_hz=band_hz, probe_level=probe_level, theta=theta)
            model, profile = make_flat_band(cfg)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        return model, profile, band_hz, theta
    if kind == "tabulated":
        shape_path = _get(model_tbl, "shape_path", str, required=True)
        mean_flux = _get(model_tbl, "mean_flux", float, default=1.0)
        gain_path = _get(model_tbl, "gain_path", str)
        try:
            shape = TabulatedCurve.from_file(base_dir / shape_path, outside="zero")
            model = NoiseSpectrumModel.magnitude_squared(shape, theta_range=(0.0, math.inf))
            if gain_path is not None:
                gain = TabulatedCurve.from_file(base_dir / gain_path, outside="clamp")
                profile = ProbeProfile.from_table(mean_flux, gain)
            else:
                profile = ProbeProfile.flat(mean_flux)
        except (ValueError, OSError) as exc:
            raise ConfigError(str(exc)) from exc
        band_hz = _get(model_tbl, "band_hz", float, default=model.support[1] / TWO_PI)
        return model, profile, band_hz, theta
    raise ConfigError(f"unknown model kind {kind!r}; use 'flat-band' or 'tabulated'")


def _build_scan(scan_tbl: dict) -> np.ndarray:
    start = _get(scan_tbl, "start", float, required=True)
    stop = _get(scan_tbl, "stop", float, required=True)
    points = _get(scan_tbl, "points", int, required=True)
    spacing = _get(scan_tbl, "spacing", str, default="linear")
    if points < 1:
        raise ConfigError("scan.points must be at least 1")
    if not (start <= stop):
        raise ConfigError("scan.start must not exceed scan.stop")
    if spacing == "linear":
        return np.linspace(start, stop, points)
    if spacing == "log":
        if start <= 0.0:
            raise ConfigError("log spacing needs scan.start > 0")
        return np.logspace(math.log10(start), math.log10(stop), points)
    raise ConfigError("scan.spacing must be 'linear' or 'log'")


def load_run_config(args: argparse.Namespace, need_scan: bool) -> RunConfig:
    path = Path(args.config)
    try:
        with open(path, "rb") as fh:
            raw = tomllib.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from exc
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"malformed config: {exc}") from exc

    model_tbl = raw.get("model", {})
    grid_tbl = raw.get("grid", {})
    scan_tbl = raw.get("scan", {})
    run_tbl = raw.get("run", {})
    tol_tbl = raw.get("tolerances", {})
    dump_tbl = raw.get("dump", {})
    for name, tbl in (
        ("model", model_tbl),
        ("grid", grid_tbl),
        ("scan", scan_tbl),
        ("run", run_tbl),
        ("tolerances", tol_tbl),
        ("dump", dump_tbl),
    ):
        if not isinstance(tbl, dict):
            raise ConfigError(f"config section [{name}] must be a table")

    model, profile, band_hz, theta = _build_spectra(model_tbl, path.parent)

    duration = _get(grid_tbl, "duration", float, default=1.0)
    if not (duration > 0.0 and math.isfinite(duration)):
        raise ConfigError("grid.duration must be positive and finite")
    modes = _get(grid_tbl, "modes", int)
    if modes is not None and modes < 1:
        raise ConfigError("grid.modes must be at least 1")

    if need_scan:
        if not scan_tbl:
            raise ConfigError("this subcommand needs a [scan] section")
        scan = _build_scan(scan_tbl)
    else:
        scan = np.array([theta])

    trials = _get(run_tbl, "trials", int, default=1000)
    if trials < 1:
        raise ConfigError("run.trials must be at least 1")
    seed = _get(run_tbl, "seed", int, default=0)
    method = _get(run_tbl, "method", str, default="uspc")
    if method not in ("uspc", "homodyne"):
        raise ConfigError("run.method must be 'uspc' or 'homodyne'")
    threshold = _get(run_tbl, "threshold", float, default=0.0)
    out = _get(run_tbl, "out", str, default="noisespec-out.csv")

    quad_rel = _get(tol_tbl, "quad_rel", float, default=1e-9)
    opt_tol = _get(tol_tbl, "optimizer", float, default=1e-10)

    dump_points = _get(dump_tbl, "points", int, default=401)
    if dump_points < 2:
        raise ConfigError("dump.points must be at least 2")

    # flags win over the config file
    if args.seed is not None:
        seed = args.seed
    if args.out is not None:
        out = args.out
    if args.tol is not None:
        quad_rel = args.tol
    if seed < 0:
        raise ConfigError("seed must be nonnegative")
    if not out:
        raise ConfigError("output path must not be empty")
    if not (quad_rel > 0.0 and opt_tol > 0.0):
        raise ConfigError("tolerances must be positive")

    try:
        quad = QuadratureSpec(rel_tol=quad_rel)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc

    return RunConfig(
        model=model,
        profile=profile,
        band_hz=band_hz,
        duration=duration,
        modes=modes,
        scan=scan,
        theta=theta,
        trials=trials,
        seed=seed,
        method=method,
        threshold=threshold,
        out=out,
        quad=quad,
        opt_tol=opt_tol,
        dump_points=dump_points,
    )


def _fmt(value) -> str:
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return f"{float(value):.17g}"


def _write_csv(out: str, header: list[str], rows: list[tuple]) -> int:
    with open(out, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])
    return len(rows)


def run_fisher_scan(cfg: RunConfig) -> int:
    """Information per band-time product against the scan amplitude."""
    bt = cfg.bt
    rows = []
    for th in cfg.scan:
        ju = fisher_uspc_continuum(cfg.model, cfg.profile, th, cfg.duration, cfg.quad)
        jh = fisher_homodyne(cfg.model, cfg.profile, th, cfg.duration, cfg.quad)
        kq = quantum_fisher_bound(cfg.model, cfg.profile, th, cfg.duration, cfg.quad)
        low_u, low_h = fisher_low_snr(cfg.model, cfg.profile, th, cfg.duration, cfg.quad)
        rows.append(
            (th, ju.value / bt, jh.value / bt, kq.value / bt, low_u.value / bt, low_h.value / bt)
        )
    return _write_csv(
        cfg.out,
        [
            "theta",
            "j_uspc_per_bt",
            "j_homodyne_per_bt",
            "quantum_bound_per_bt",
            "j_uspc_low_snr_per_bt",
            "j_homodyne_low_snr_per_bt",
        ],
        rows,
    )


def run_chernoff_scan(cfg: RunConfig) -> int:
    """Error exponents per band-time product against the scan amplitude."""
    bt = cfg.bt
    rows = []
    for phi in cfg.scan:
        xu = chernoff_uspc(cfg.model, cfg.profile, phi, cfg.duration, cfg.quad)
        xh = chernoff_homodyne(
            cfg.model, cfg.profile, phi, cfg.duration, cfg.quad, opt_tol=cfg.opt_tol
        )
        zq = quantum_chernoff(cfg.model, cfg.profile, phi, cfg.duration, cfg.quad)
        low_u, low_h = chernoff_low_snr(cfg.model, cfg.profile, phi, cfg.duration, cfg.quad)
        rows.append(
            (
                phi,
                xu.value / bt,
                xh.value / bt,
                xh.s_opt,
                zq.value / bt,
                low_u.value / bt,
                low_h.value / bt,
            )
        )
    return _write_csv(
        cfg.out,
        [
            "phi",
            "xi_uspc_per_bt",
            "xi_homodyne_per_bt",
            "s_opt",
            "zeta_quantum_per_bt",
            "xi_uspc_low_snr_per_bt",
            "xi_homodyne_low_snr_per_bt",
        ],
        rows,
    )


def run_mc_estimate(cfg: RunConfig) -> int:
    """Monte Carlo MSE of the MLE against the discrete-mode bound."""
    grid = cfg.mode_grid()
    seeds = SeedSpec(cfg.seed)
    rows = []
    for th in cfg.scan:
        res = mc_estimation(
            cfg.model,
            cfg.profile,
            grid,
            th,
            cfg.trials,
            seeds,
            method=cfg.method,
            tol=cfg.opt_tol,
        )
        stderr = res.mse_stderr if res.mse_stderr is not None else math.nan
        rows.append((th, res.trials, res.mse, stderr, res.crb, res.efficiency))
    return _write_csv(
        cfg.out,
        ["theta", "trials", "mse", "mse_stderr", "crb", "efficiency"],
        rows,
    )


def run_mc_detect(cfg: RunConfig) -> int:
    """Monte Carlo detector error rates with the analytic bracket."""
    grid = cfg.mode_grid()
    seeds = SeedSpec(cfg.seed)
    rows = []
    for phi in cfg.scan:
        res = mc_detection(
            cfg.model,
            cfg.profile,
            grid,
            phi,
            cfg.trials,
            seeds,
            method=cfg.method,
            threshold=cfg.threshold,
        )
        zeta = chernoff_uspc_discrete(cfg.model, cfg.profile, phi, grid).value
        lower, upper = error_prob_bounds(math.exp(-0.5 * zeta), res.exponent_ref)
        rows.append(
            (
                phi,
                res.trials,
                res.false_alarm,
                res.false_alarm_stderr,
                res.miss,
                res.miss_stderr,
                res.p_error,
                res.exponent_ref,
                lower,
                upper,
            )
        )
    return _write_csv(
        cfg.out,
        [
            "phi",
            "trials",
            "false_alarm",
            "false_alarm_stderr",
            "miss",
            "miss_stderr",
            "p_error",
            "exponent",
            "p_error_lower",
            "p_error_upper",
        ],
        rows,
    )


def run_spectra_dump(cfg: RunConfig) -> int:
    """Spectra and bound integrands on a frequency grid over the support."""
    lo, hi = cfg.model.support
    omegas = np.linspace(lo, hi, cfg.dump_points)
    f_quantum = quantum_bound_integrand(cfg.model, cfg.profile, cfg.theta)
    f_uspc = uspc_bound_integrand(cfg.model, cfg.profile, cfg.theta)
    f_hom = homodyne_bound_integrand(cfg.model, cfg.profile, cfg.theta)
    rows = []
    for w in omegas:
        rows.append(
            (
                w,
                cfg.model.psd(w, cfg.theta),
                cfg.profile.probe_psd(w),
                cfg.profile.phase_psd(w),
                f_quantum(w),
                f_uspc(w),
                f_hom(w),
            )
        )
    return _write_csv(
        cfg.out,
        [
            "omega",
            "noise_psd",
            "probe_psd",
            "phase_psd",
            "integrand_quantum",
            "integrand_uspc",
            "integrand_homodyne",
        ],
        rows,
    )


_COMMANDS = {
    "fisher-scan": (run_fisher_scan, True),
    "chernoff-scan": (run_chernoff_scan, True),
    "mc-estimate": (run_mc_estimate, True),
    "mc-detect": (run_mc_detect, True),
    "spectra-dump": (run_spectra_dump, False),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="noisespec",
        description="Estimation and detection limits for spectral displacement noise.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (fn, _) in _COMMANDS.items():
        p = sub.add_parser(name, help=fn.__doc__)
        p.add_argument("--config", required=True, help="TOML run description")
        p.add_argument("--seed", type=int, default=None, help="override run.seed")
        p.add_argument("--out", default=None, help="override run.out")
        p.add_argument("--tol", type=float, default=None, help="override tolerances.quad_rel")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    fn, need_scan = _COMMANDS[args.command]
    try:
        cfg = load_run_config(args, need_scan)
        nrows = fn(cfg)
    except ConfigError as exc:
        print(f"noisespec: config error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError, OverflowError) as exc:
        print(f"noisespec: error: {exc}", file=sys.stderr)
        return 1
    print(f"noisespec: wrote {nrows} rows to {cfg.out}", file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
