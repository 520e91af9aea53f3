"""Command-line front end: key=value run configuration, CSV and report output.

Usage::

    bohmrad <command> --config run.cfg --out results/run [--seed N] [--n-samples N]
            [--canyon N] [--omega-min W] [--omega-max W]

Commands: field, potential, trajectories, spectrum, pattern, compare, validate.
Each run writes ``<prefix>_<name>.csv`` files plus one ``<prefix>_report.txt``.
"""
from __future__ import annotations

import argparse
import dataclasses
import math
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.integrate import quad

from . import copenhagen, dynamics, qpotential, radiation, specfun, wavefield
from .constants import erg_to_ev
from .wavefield import ExperimentConfig

MIN_RESOLUTION = 8
NUMBER_FORMAT = "%.11e"     # 12 significant digits


class ConfigError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class CommandError(RuntimeError):
    """A module operation failed while running a command."""

    def __init__(self, operation: str, cause: Exception):
        self.operation = operation
        super().__init__(f"{operation} failed: {type(cause).__name__}: {cause}")


# key -> (type, default); None defaults are resolved from the geometry at run time
_REQUIRED = {"a_cm": float, "b_cm": float, "vx_cm_s": float, "T_s": float, "screen_x_cm": float}
_OPTIONAL = {
    "X_cm": (float, None),
    "seed": (int, None),
    "n_samples": (int, 10000),
    "n_trajectories": (int, 10),
    "canyon": (int, 1),
    "omega_min": (float, 0.1),
    "omega_max": (float, 3.0),
    "omega_points": (int, 64),
    "spectrum_time_map": (str, "exact"),
    "grid_nx": (int, 64),
    "grid_ny": (int, 2048),
    "grid_x_min_cm": (float, None),
    "grid_y_max_cm": (float, None),
    "section_x_cm": (float, 13.0),
    "section_points": (int, 4001),
    "section_y_max_cm": (float, None),
    "emission_x_cm": (float, None),
    "out": (str, "bohmrad"),
}


@dataclass(frozen=True)
class RunConfig:
    experiment: ExperimentConfig
    seed: int | None = None
    n_samples: int = 10000
    n_trajectories: int = 10
    canyon: int = 1
    omega_min: float = 0.1          # units of 1/tau_n
    omega_max: float = 3.0
    omega_points: int = 64
    spectrum_time_map: str = "exact"
    grid_nx: int = 64
    grid_ny: int = 2048
    grid_x_min_cm: float | None = None
    grid_y_max_cm: float | None = None
    section_x_cm: float = 13.0
    section_points: int = 4001
    section_y_max_cm: float | None = None
    emission_x_cm: float | None = None
    out: str = "bohmrad"

    def __post_init__(self):
        for name in ("omega_points", "grid_nx", "grid_ny", "section_points"):
            if getattr(self, name) < MIN_RESOLUTION:
                raise ConfigError(f"{name} must be >= {MIN_RESOLUTION}")
        for name in ("omega_min", "omega_max", "section_x_cm", "grid_x_min_cm", "grid_y_max_cm",
                     "section_y_max_cm", "emission_x_cm"):
            value = getattr(self, name)
            if value is not None and not (math.isfinite(value) and value > 0):
                raise ConfigError(f"{name} must be a positive finite number")
        if self.omega_min >= self.omega_max:
            raise ConfigError("omega_min must be below omega_max")
        if self.n_samples < 1 or self.n_trajectories < 1:
            raise ConfigError("n_samples and n_trajectories must be >= 1")
        if self.canyon == 0:
            raise ConfigError("canyon must be a nonzero integer")
        if self.seed is not None and self.seed < 0:
            raise ConfigError("seed must be >= 0")
        if self.spectrum_time_map not in ("exact", "sinh"):
            raise ConfigError("spectrum_time_map must be 'exact' or 'sinh'")
        if self.grid_x_min_cm is not None and self.grid_x_min_cm >= self.experiment.screen_x:
            raise ConfigError("grid_x_min_cm must lie before the screen")
        if self.emission_x_cm is not None and self.emission_x_cm >= self.experiment.screen_x:
            raise ConfigError("emission_x_cm must lie before the screen")

    def with_overrides(self, **changes) -> "RunConfig":
        changes = {k: v for k, v in changes.items() if v is not None}
        return dataclasses.replace(self, **changes) if changes else self


def _convert(key: str, kind: type, raw: str, line: int):
    try:
        if kind is int:
            return int(raw)
        if kind is float:
            return float(raw)
        return raw
    except ValueError:
        raise ConfigError(f"{key}: cannot read {raw!r} as {kind.__name__}", line) from None


def parse_config(text: str) -> RunConfig:
    """Parse ``key=value`` lines; blank lines and ``#`` comments are ignored."""
    values: dict[str, object] = {}
    for number, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"expected key=value, got {line!r}", number)
        key, raw = (part.strip() for part in line.split("=", 1))
        if key in values:
            raise ConfigError(f"duplicate key {key!r}", number)
        if key in _REQUIRED:
            values[key] = _convert(key, _REQUIRED[key], raw, number)
        elif key in _OPTIONAL:
            values[key] = _convert(key, _OPTIONAL[key][0], raw, number)
        else:
            raise ConfigError(f"unknown key {key!r}", number)
    missing = [k for k in _REQUIRED if k not in values]
    if missing:
        raise ConfigError(f"missing required keys: {', '.join(missing)}")
    try:
        experiment = ExperimentConfig(a=values.pop("a_cm"), b=values.pop("b_cm"),
                                      T=values.pop("T_s"), v_x=values.pop("vx_cm_s"),
                                      screen_x=values.pop("screen_x_cm"), X=values.pop("X_cm", None))
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    return RunConfig(experiment=experiment, **values)


def serialize(run: RunConfig) -> str:
    """Inverse of :func:`parse_config`; floats use repr so values round-trip exactly."""
    e = run.experiment
    lines = [f"a_cm={e.a!r}", f"b_cm={e.b!r}", f"vx_cm_s={e.v_x!r}", f"T_s={e.T!r}",
             f"screen_x_cm={e.screen_x!r}", f"X_cm={e.X!r}"]
    for key in _OPTIONAL:
        if key == "X_cm":
            continue
        value = getattr(run, key)
        if value is not None:
            lines.append(f"{key}={value!r}" if not isinstance(value, str) else f"{key}={value}")
    return "\n".join(lines) + "\n"


# --- output helpers ----------------------------------------------------------------

def _cell(value) -> str:
    if isinstance(value, (str, bool, np.bool_)):
        return str(value)
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return NUMBER_FORMAT % value


def write_csv(path: Path, header: list[str], rows) -> Path:
    with open(path, "w", newline="") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_cell(v) for v in row) + "\n")
    return path


def write_report(path: Path, rows) -> Path:
    with open(path, "w") as fh:
        for key, value in rows:
            fh.write(f"{key}={_cell(value) if value is not None else 'none'}\n")
    return path


def _call(operation: str, fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except Exception as exc:      # re-raised with the failing operation named
        raise CommandError(operation, exc) from exc


def _require_seed(run: RunConfig, command: str) -> int:
    if run.seed is None:
        raise ConfigError(f"'{command}' samples randomly and needs a seed (config key or --seed)")
    return run.seed


# --- commands ------------------------------------------------------------------------

def _section_half_width(cfg: ExperimentConfig, x: float) -> float:
    return 3.5 * qpotential.canyon_spacing(cfg, x)


def cmd_field(run: RunConfig, prefix: Path) -> list[Path]:
    cfg = run.experiment
    x = run.section_x_cm
    half = run.section_y_max_cm or _section_half_width(cfg, x)
    ys = np.linspace(-half, half, run.section_points)
    wp = _call("wavefield.total_field", wavefield.total_field, cfg, x, ys)
    rows = zip(ys, wp.psi.real, wp.psi.imag, wp.R, wp.S, wp.P, wp.near_node.astype(int))
    csv = write_csv(prefix.with_name(prefix.name + "_field.csv"),
                    ["y_cm", "re_psi", "im_psi", "R", "S_erg_s", "P", "near_node"], rows)
    report = write_report(prefix.with_name(prefix.name + "_report.txt"),
                          [("x_cm", x), ("phase_branch", wp.branch),
                           ("near_node_samples", int(wp.near_node.sum())),
                           ("fringe_spacing_cm", cfg.fringe_spacing(x))])
    return [csv, report]


def canyon_table(cfg: ExperimentConfig, grid: qpotential.PotentialGrid, ns=(1, 2, 3)):
    """Locate the canyon minima in the last grid row (the screen) and compare with theta_n."""
    x = grid.x[-1]
    spacing = qpotential.canyon_spacing(cfg, x)
    out = []
    for n in ns:
        expected = qpotential.canyon_angle(cfg, n) * x
        window = np.abs(grid.y - expected) < 0.5 * spacing
        q = np.where(window, grid.Q[-1], np.nan)
        i = int(np.nanargmin(q))
        out.append((n, qpotential.canyon_angle(cfg, n), grid.y[i] / x,
                    abs(grid.y[i] - expected) / spacing, erg_to_ev(-grid.Q[-1, i])))
    return out


def cmd_potential(run: RunConfig, prefix: Path) -> list[Path]:
    cfg = run.experiment
    x_min = run.grid_x_min_cm or 0.05 * cfg.screen_x
    y_max = run.grid_y_max_cm or _section_half_width(cfg, cfg.screen_x)
    xs = np.linspace(x_min, cfg.screen_x, run.grid_nx)
    ys = np.linspace(-y_max, y_max, run.grid_ny)
    grid = _call("qpotential.potential_grid", qpotential.potential_grid, cfg, xs, ys, "exact")
    rows = ((x, y, grid.Q[i, j], grid.provenance) for i, x in enumerate(xs) for j, y in enumerate(ys))
    header = ["x_cm", "y_cm", "Q_erg", "provenance"]
    grid_csv = write_csv(prefix.with_name(prefix.name + "_potential_grid.csv"), header, rows)

    x = run.section_x_cm
    half = run.section_y_max_cm or _section_half_width(cfg, x)
    exact, approx = _call("qpotential.cross_section", qpotential.cross_section, cfg, x,
                          (-half, half), run.section_points)
    rows = [(x, y, q, g.provenance) for g in (exact, approx) for y, q in zip(g.y, g.Q[0])]
    section_csv = write_csv(prefix.with_name(prefix.name + "_section.csv"), header, rows)

    report = [("grid_x_min_cm", x_min), ("grid_y_max_cm", y_max),
              ("unreliable_grid_samples", int(np.count_nonzero(grid.status != qpotential.OK)))]
    for n, theta, found, err, depth in canyon_table(cfg, grid):
        report += [(f"canyon_{n}_theta_rad", theta), (f"canyon_{n}_grid_angle_rad", found),
                   (f"canyon_{n}_offset_spacings", err), (f"canyon_{n}_grid_depth_eV", depth)]
    for n in (1, 2, 3):
        cmp_ = _call("qpotential.locate_canyon", qpotential.locate_canyon, cfg, n, x)
        report += [(f"section_canyon_{n}_offset_spacings", cmp_.position_error),
                   (f"section_canyon_{n}_depth_ratio", cmp_.depth_ratio)]
    return [grid_csv, section_csv,
            write_report(prefix.with_name(prefix.name + "_report.txt"), report)]


def cmd_trajectories(run: RunConfig, prefix: Path) -> list[Path]:
    cfg = run.experiment
    seed = _require_seed(run, "trajectories")
    hist = _call("dynamics.ensemble_landing", dynamics.ensemble_landing, cfg, run.n_samples, seed)
    files = [write_csv(prefix.with_name(prefix.name + "_histogram.csv"),
                       ["bin_left_cm", "bin_right_cm", "count"],
                       zip(hist.bin_edges[:-1], hist.bin_edges[1:], hist.counts))]
    rng = np.random.default_rng([seed, 1])
    starts = np.sort(dynamics.sample_initial_positions(cfg, run.n_trajectories, rng))
    for k, y0 in enumerate(starts):
        tr = _call("dynamics.integrate_trajectory", dynamics.integrate_trajectory, cfg, float(y0))
        files.append(write_csv(prefix.with_name(f"{prefix.name}_trajectory_{k:03d}.csv"),
                               ["t_s", "x_cm", "y_cm", "vy_cm_s", "ay_cm_s2"], tr.as_rows()))
    report = [("n_samples", hist.n_samples), ("n_failed", hist.n_failed),
              ("landing_distance", dynamics.landing_distance(cfg, hist.positions)),
              ("bin_width_cm", hist.width)]
    for n, y in dynamics.histogram_minima(hist, cfg).items():
        report.append((f"minimum_{n}_cm", y))
        report.append((f"canyon_{n}_screen_cm", qpotential.canyon_angle(cfg, n) * cfg.screen_x))
    files.append(write_report(prefix.with_name(prefix.name + "_report.txt"), report))
    return files


def cmd_spectrum(run: RunConfig, prefix: Path) -> list[Path]:
    cfg = run.experiment
    cn = qpotential.canyon(cfg, run.canyon, cfg.screen_x)
    w = np.geomspace(run.omega_min, run.omega_max, run.omega_points) / cn.tau_n
    closed = _call("radiation.spectrum_closed", radiation.spectrum_closed, cn, w)
    numeric = _call("radiation.spectrum_numeric", radiation.spectrum_numeric, cn, w,
                    run.spectrum_time_map)
    rows = [(o, d, s.provenance) for s in (closed, numeric) for o, d in zip(s.omega, s.dE_domega)]
    csv = write_csv(prefix.with_name(prefix.name + "_spectrum.csv"),
                    ["omega_rad_s", "dE_domega_erg_s", "provenance"], rows)
    rep = _call("radiation.emission_summary", radiation.emission_summary, cfg, run.canyon)
    extra = [("canyon", run.canyon), ("tau_n_s", rep.tau_n),
             ("omega_peak_exact_tau", rep.omega_peak_exact * rep.tau_n),
             ("numeric_time_map", run.spectrum_time_map),
             ("dipole_regime", rep.dipole_regime),
             ("backreaction_negligible", rep.backreaction_negligible)]
    report = write_report(prefix.with_name(prefix.name + "_report.txt"), rep.as_rows() + extra)
    return [csv, report]


def cmd_pattern(run: RunConfig, prefix: Path) -> list[Path]:
    cfg = run.experiment
    seed = _require_seed(run, "pattern")
    pat = _call("radiation.photon_pattern", radiation.photon_pattern, cfg, run.n_samples, seed,
                emission_x=run.emission_x_cm)
    edges = pat.screen_edges
    pattern_csv = write_csv(prefix.with_name(prefix.name + "_pattern.csv"),
                            ["bin_left_cm", "bin_right_cm", "electron_count", "photon_count"],
                            zip(edges[:-1], edges[1:], pat.electron_counts, pat.screen_counts))
    angle_csv = write_csv(prefix.with_name(prefix.name + "_photon_angles.csv"),
                          ["angle_left_rad", "angle_right_rad", "photon_weight"],
                          zip(pat.angle_edges[:-1], pat.angle_edges[1:], pat.angle_counts))
    peaks = radiation.photon_peaks(pat, cfg)
    report = [("n_electrons", pat.n_electrons), ("n_emitted", pat.n_emitted),
              ("zero_emission", pat.zero_emission), ("importance_sampled", pat.importance),
              ("emission_x_cm", pat.emission_x),
              ("photons_on_window", int(pat.screen_counts.sum()))]
    centres = 0.5 * (edges[1:] + edges[:-1])
    half = 0.5 * cfg.fringe_spacing(cfg.screen_x)
    for n, peak in peaks.items():
        target = qpotential.canyon_angle(cfg, n) * cfg.screen_x
        window = np.abs(centres - target) < half
        minimum = float(centres[window][np.argmin(pat.electron_counts[window])])
        report += [(f"electron_minimum_{n}_cm", minimum), (f"photon_peak_{n}_cm", peak),
                   (f"complementary_{n}", peak is not None and abs(peak - minimum) <= half)]
    report_path = write_report(prefix.with_name(prefix.name + "_report.txt"), report)
    return [pattern_csv, angle_csv, report_path]


def cmd_compare(run: RunConfig, prefix: Path) -> list[Path]:
    cmp_ = _call("copenhagen.compare", copenhagen.compare, run.experiment)
    return [write_report(prefix.with_name(prefix.name + "_report.txt"), cmp_.as_rows())]


# --- validate ---------------------------------------------------------------------------

def _rel(a, b) -> float:
    return float(np.max(np.abs(np.asarray(a) / np.asarray(b) - 1.0)))


def _k_integral(order: int, x: float) -> float:
    """K_order(x) = int_0^inf exp(-x cosh u) cosh(order u) du, cut where the integrand underflows."""
    top = math.acosh(745.0 / x + 1.0)
    f = lambda u: math.exp(-x * math.cosh(u)) * math.cosh(order * u)
    return quad(f, 0.0, top, epsabs=0.0, epsrel=1e-13, limit=200)[0]


def validation_checks(cfg: ExperimentConfig):
    """Yield (name, passed, detail) for the module oracle/invariant suite on cfg."""
    # specfun against the integral representations K_nu(x) = int exp(-x cosh u) cosh(nu u) du
    xs = np.array([1e-3, 0.3, 1.0, 2.0, 2.5, 10.0, 40.0])
    ref0 = [_k_integral(0, x) for x in xs]
    ref1 = [_k_integral(1, x) for x in xs]
    err = max(_rel(specfun.bessel_k0(xs), ref0), _rel(specfun.bessel_k1(xs), ref1))
    yield "specfun.integral_oracle", err < 1e-10, f"max rel err {err:.2e}"

    x = 0.5 * cfg.screen_x
    ys = np.array([0.13, -0.71, 1.37]) * cfg.fringe_spacing(x)
    err = max(abs(wavefield.slit_amplitude(cfg, s, x, y) / wavefield.path_integral_quadrature(cfg, s, x, y) - 1)
              for s in "AB" for y in ys)
    yield "wavefield.path_integral_oracle", err < 1e-6, f"max rel err {err:.2e}"

    y = 0.3 * cfg.fringe_spacing(x)
    hx, hy = 0.02 * x, cfg.fringe_spacing(x) / 40
    r1 = wavefield.continuity_residual(cfg, x, y, (hx, hy))
    r2 = wavefield.continuity_residual(cfg, x, y, (hx / 2, hy / 2))
    order = math.log2(r1 / r2)
    yield "wavefield.continuity_order", order >= 1.9, f"observed order {order:.3f}"

    v = wavefield.transverse_velocity(cfg, x, np.array([0.0, y, -y]))
    yield "wavefield.velocity_symmetry", abs(v[0]) < 1e-12 * abs(v[1]) and abs(v[1] + v[2]) <= 1e-12 * abs(v[1]), \
        f"v(0)={v[0]:.2e}, v(y)+v(-y)={v[1] + v[2]:.2e}"

    cn = qpotential.canyon(cfg, 1, cfg.screen_x)
    yield "qpotential.width_growth", math.isclose(
        qpotential.canyon(cfg, 1, cfg.screen_x).width_scale / qpotential.canyon(cfg, 1, 0.5 * cfg.screen_x).width_scale,
        math.sqrt((1 + (cfg.screen_time / cfg.T) ** 2) / (1 + (0.5 * cfg.screen_time / cfg.T) ** 2)),
        rel_tol=1e-12), "width_scale ratio"

    t0 = dynamics.launch_time(cfg)
    centre, sd = dynamics.initial_density_parameters(cfg, t0)
    starts = np.concatenate([-centre + sd * np.linspace(-2, 2, 10), centre + sd * np.linspace(-2, 2, 10)])
    times = np.geomspace(10 * t0, cfg.screen_time, 40)
    lanes = dynamics.integrate_lanes(cfg, starts, t0, cfg.screen_time, t_eval=times[:-1])
    live = lanes.status == dynamics.LIVE
    ok = live.all() and dynamics.ordering_preserved(lanes.y_eval[live])
    yield "dynamics.no_crossing", bool(ok), f"{int((~live).sum())} aborted of {live.size}"

    w = cn.width_scale
    t_end = dynamics.integrate_canyon_crossing(cn, 2 * w)[0][-1]
    err = abs(t_end / dynamics.crossing_time_exact(cn, 2 * w) - 1)
    yield "dynamics.force_form_time_map", err < 1e-6, f"rel err {err:.2e}"
    ratios = [dynamics.crossing_time_sinh(cn, s * w) / dynamics.crossing_time_exact(cn, s * w)
              for s in np.linspace(0.05, 2.0, 40)]
    yield "dynamics.sinh_map_within_25pct", 0.8 <= min(ratios) and max(ratios) <= 1.25, \
        f"ratio range [{min(ratios):.3f}, {max(ratios):.3f}] over 2 width scales"

    err = abs(radiation.crossing_energy_quadrature(cn) / radiation.crossing_energy_closed(cn) - 1)
    yield "radiation.energy_oracle", err < 1e-3, f"rel err {err:.2e}"
    omega = np.linspace(0.1, 3.0, 7) / cn.tau_n
    err = _rel(radiation.spectrum_numeric(cn, omega, "sinh").dE_domega,
               radiation.spectrum_closed(cn, omega).dE_domega)
    yield "radiation.sinh_spectrum_oracle", err < 1e-3, f"max rel err {err:.2e}"
    total = radiation.integrate_spectrum(cn, lambda o: float(radiation.spectrum_closed(cn, o).dE_domega))
    err = abs(total / radiation.spectral_energy(cn) - 1)
    yield "radiation.spectral_energy", err < 1e-4, f"rel err {err:.2e}"
    ratio = radiation.numeric_spectrum_energy(cn, "exact") / radiation.crossing_energy_quadrature(cn)
    yield "radiation.exact_map_energy", abs(ratio - 1) < 0.05, f"ratio {ratio:.6f}"

    params = copenhagen.CopenhagenParams.for_config(cfg)
    bound = copenhagen.radiation_bound(cfg, params)
    wider = dataclasses.replace(cfg, b=0.5 * cfg.b)
    yield "copenhagen.bound", bound > 0 and bound == copenhagen.radiation_bound(wider, params), \
        f"{erg_to_ev(bound):.4e} eV"


def cmd_validate(run: RunConfig, prefix: Path, stream=sys.stdout) -> tuple[list[Path], bool]:
    rows = []
    ok = True
    try:
        for name, passed, detail in validation_checks(run.experiment):
            ok &= bool(passed)
            print(f"{'PASS' if passed else 'FAIL'} {name}: {detail}", file=stream)
            rows.append((name, "PASS" if passed else "FAIL"))
    except Exception as exc:      # a check that cannot run counts as a failure
        ok = False
        print(f"FAIL validate aborted after {len(rows)} checks: {type(exc).__name__}: {exc}", file=stream)
        rows.append(("aborted", "FAIL"))
    return [write_report(prefix.with_name(prefix.name + "_report.txt"), rows)], ok


COMMANDS = {
    "field": cmd_field,
    "potential": cmd_potential,
    "trajectories": cmd_trajectories,
    "spectrum": cmd_spectrum,
    "pattern": cmd_pattern,
    "compare": cmd_compare,
    "validate": cmd_validate,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="bohmrad", description=__doc__.split("\n")[0])
    p.add_argument("command", choices=sorted(COMMANDS))
    p.add_argument("--config", required=True, type=Path, help="key=value run configuration")
    p.add_argument("--out", help="output path prefix (overrides the config key 'out')")
    p.add_argument("--seed", type=int)
    p.add_argument("--n-samples", type=int)
    p.add_argument("--canyon", type=int)
    p.add_argument("--omega-min", type=float, help="in units of 1/tau_n")
    p.add_argument("--omega-max", type=float, help="in units of 1/tau_n")
    return p


def run(command: str, cfg: RunConfig) -> tuple[list[Path], bool]:
    """Run one command; returns the written files and whether it succeeded."""
    prefix = Path(cfg.out)
    prefix.parent.mkdir(parents=True, exist_ok=True)
    if command == "validate":
        return cmd_validate(cfg, prefix)
    return COMMANDS[command](cfg, prefix), True


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = parse_config(args.config.read_text())
        cfg = cfg.with_overrides(out=args.out, seed=args.seed, n_samples=args.n_samples,
                                 canyon=args.canyon, omega_min=args.omega_min,
                                 omega_max=args.omega_max)
    except OSError as exc:
        print(f"error: cannot read config: {exc}", file=sys.stderr)
        return 2
    except ConfigError as exc:
        print(f"error: {args.config}: {exc}", file=sys.stderr)
        return 2
    try:
        files, ok = run(args.command, cfg)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except CommandError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    for path in files:
        print(path)
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
