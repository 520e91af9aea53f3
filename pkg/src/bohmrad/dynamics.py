"""Bohmian trajectories behind the double slit, and single-canyon kinematics.

Trajectories follow the first-order guidance law dy/dt = v_y(t, y) with the
longitudinal motion x = v_x t.  Integration uses a Dormand-Prince 5(4) pair
vectorised over independent lanes: every lane keeps its own clock and step
size, so an ensemble gives the same per-lane result whatever the batch
composition or worker count.
"""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad, solve_ivp

from .constants import constants
from .qpotential import CanyonModel, canyon_angle, q1d
from .wavefield import (NODE_FRACTION, ExperimentConfig, NodeProximityError, node_threshold,
                        amplitude, probability_density, velocity_at_time)

RTOL = 1e-8
DT_MIN_FRACTION = 1e-6
# a lane may advance at most this fraction of its own elapsed time per step;
# the flow is self-similar in t, so a larger jump can step over fringe formation
GROWTH_CAP = 0.05
MAX_ABORT_FRACTION = 0.01
CHUNK = 20000

LIVE, NODE_COLLISION, STEP_COLLAPSE = 0, 1, 2

# Dormand-Prince 5(4) tableau
_C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
_A = [
    [],
    [1 / 5],
    [3 / 40, 9 / 40],
    [44 / 45, -56 / 15, 32 / 9],
    [19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729],
    [9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656],
    [35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84],
]
_B5 = np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0])
_B4 = np.array([5179 / 57600, 0.0, 7571 / 16695, 393 / 640, -92097 / 339200, 187 / 2100, 1 / 40])
_E = _B5 - _B4


class EnsembleFailure(RuntimeError):
    pass


def guidance_velocity(cfg: ExperimentConfig, x, y):
    """Transverse Bohmian velocity (cm/s) at (x, y)."""
    v, rel = velocity_at_time(cfg, cfg.time_at(x), y)
    if np.any(rel < NODE_FRACTION):
        raise NodeProximityError("guidance velocity requested at a node")
    return float(v) if np.ndim(v) == 0 else v


def launch_time(cfg: ExperimentConfig) -> float:
    """Start time just behind the slit plane.

    A tenth of the single-slit spreading time m b^2 / hbar, so each beam is
    still an undistorted Gaussian and the two beams are far apart.
    """
    pc = constants()
    return min(0.1 * pc.m_e * cfg.b**2 / pc.hbar, 1e-3 * cfg.screen_time)


def initial_density_parameters(cfg: ExperimentConfig, t0: float) -> tuple[float, float]:
    """(centre, standard deviation) of each slit's |psi|^2 at time t0.

    Each term of the field is exactly Gaussian in y; at t0 the two beams do
    not overlap, so |psi|^2 is an equal mixture of two Gaussians at
    +-centre.  At the slit plane the deviation tends to b / sqrt(2).
    """
    pc = constants()
    s = 1.0 / cfg.T + 1.0 / t0
    denom = s * s + (pc.hbar / (pc.m_e * cfg.b**2)) ** 2
    return cfg.a * (1.0 + t0 / cfg.T), cfg.b * t0 * math.sqrt(denom) / math.sqrt(2.0)


def sample_initial_positions(cfg: ExperimentConfig, n: int, rng: np.random.Generator,
                             t0: float | None = None) -> np.ndarray:
    t0 = launch_time(cfg) if t0 is None else t0
    centre, sd = initial_density_parameters(cfg, t0)
    side = np.where(rng.random(n) < 0.5, 1.0, -1.0)
    return side * centre + sd * rng.standard_normal(n)


@dataclass
class LaneRun:
    y: np.ndarray             # final positions
    status: np.ndarray        # LIVE / NODE_COLLISION / STEP_COLLAPSE
    y_eval: np.ndarray | None # (lanes, len(t_eval)) positions at the requested times
    steps: np.ndarray         # accepted steps per lane


def integrate_lanes(cfg: ExperimentConfig, y0, t0: float, t1: float, *, rtol: float = RTOL,
                    dt_max: float | None = None, dt_min: float | None = None, t_eval=None,
                    history: bool = False):
    """Advance independent guidance-equation lanes from t0 to t1.

    Each lane carries its own step size; the error test is per lane against
    ``rtol * (|y| + b)``.  ``t_eval`` times are hit exactly.  With
    ``history=True`` the accepted (t, y, v_y) samples of every lane are
    returned as lists as a second value.  A lane whose rejected step falls
    below ``dt_min`` (default ``DT_MIN_FRACTION * screen_time``) is aborted.
    """
    y = np.array(y0, dtype=float, copy=True)
    n = y.size
    targets = np.append(np.sort(np.asarray(t_eval, dtype=float)) if t_eval is not None else [], t1)
    if targets.size > 1 and (targets[0] <= t0 or targets[-2] > t1):
        raise ValueError("t_eval must lie in (t0, t1]")
    dt_min = DT_MIN_FRACTION * cfg.screen_time if dt_min is None else dt_min
    dt_cap = np.inf if dt_max is None else dt_max
    t = np.full(n, t0)
    dt = np.full(n, min(1e-3 * t0, dt_cap))
    status = np.full(n, LIVE)
    steps = np.zeros(n, dtype=int)
    nxt = np.zeros(n, dtype=int)
    y_eval = np.full((n, targets.size - 1), np.nan) if t_eval is not None else None
    k1, _ = velocity_at_time(cfg, t, y)
    logs = [[(t0, y[i], k1[i])] for i in range(n)] if history else None
    active = np.arange(n)
    atol = rtol * cfg.b
    while active.size:
        ta, ya = t[active], y[active]
        target = targets[nxt[active]]
        h = np.minimum.reduce([dt[active], GROWTH_CAP * ta, np.full(active.size, dt_cap), target - ta])
        k = np.empty((7, active.size))
        k[0] = k1[active]
        for i in range(1, 7):
            k[i], _ = velocity_at_time(cfg, ta + _C[i] * h, ya + h * np.dot(_A[i], k[:i]))
        y5 = ya + h * (_B5 @ k)
        err = np.abs(h * (_E @ k)) / (rtol * np.maximum(np.abs(ya), np.abs(y5)) + atol)
        err[~np.isfinite(err)] = np.inf
        ok = err <= 1.0
        factor = np.clip(0.9 * np.maximum(err, 1e-12) ** -0.2, 0.2, 5.0)
        factor[~np.isfinite(err)] = 0.2
        dt[active] = h * factor

        acc = active[ok]
        reached = np.abs(ta[ok] + h[ok] - target[ok]) <= 1e-12 * target[ok]
        t[acc] = np.where(reached, target[ok], ta[ok] + h[ok])
        y[acc] = y5[ok]
        k1[acc] = k[6][ok]
        steps[acc] += 1
        _, rel = velocity_at_time(cfg, t[acc], y[acc])
        status[acc[rel < NODE_FRACTION]] = NODE_COLLISION
        if history:
            for j, lane in enumerate(acc):
                logs[lane].append((t[lane], y[lane], k1[lane]))
        if y_eval is not None:
            hit = acc[reached & (nxt[acc] < targets.size - 1)]
            y_eval[hit, nxt[hit]] = y[hit]
        nxt[acc[reached]] += 1

        rej = active[~ok]
        status[rej[(h[~ok] < dt_min) & (status[rej] == LIVE)]] = STEP_COLLAPSE
        active = active[(status[active] == LIVE) & (nxt[active] < targets.size)]
    run = LaneRun(y=y, status=status, y_eval=y_eval, steps=steps)
    return (run, logs) if history else run


@dataclass
class Trajectory:
    t: np.ndarray
    x: np.ndarray
    y: np.ndarray
    v_y: np.ndarray
    a_y: np.ndarray
    slit_of_origin: str
    status: int = LIVE

    def as_rows(self):
        return np.column_stack([self.t, self.x, self.y, self.v_y, self.a_y])


def integrate_trajectory(cfg: ExperimentConfig, y0: float, dt_max: float | None = None,
                         t0: float | None = None) -> Trajectory:
    """Integrate one electron from y0 (at t0, default :func:`launch_time`) to the screen.

    The acceleration is the derivative of v_y along the recorded path
    (second-order differences on the accepted, non-uniform steps).
    """
    t0 = launch_time(cfg) if t0 is None else t0
    if not amplitude(cfg, cfg.v_x * t0, y0) >= node_threshold(cfg, cfg.v_x * t0):
        raise NodeProximityError("launch point lies outside the support of the wavefunction")
    run, logs = integrate_lanes(cfg, [y0], t0, cfg.screen_time, dt_max=dt_max, history=True)
    t, y, v = (np.array(col) for col in zip(*logs[0]))
    a = np.gradient(v, t) if t.size > 2 else np.zeros_like(v)
    return Trajectory(t=t, x=cfg.v_x * t, y=y, v_y=v, a_y=a,
                      slit_of_origin="A" if y0 >= 0 else "B", status=int(run.status[0]))


def _run_chunk(args):
    cfg, y0, t0, t1 = args
    run = integrate_lanes(cfg, y0, t0, t1)
    return run.y, run.status


def land(cfg: ExperimentConfig, y0: np.ndarray, t0: float, workers: int = 1):
    """Landing positions at the screen for launch positions y0 (chunked, optionally parallel)."""
    chunks = [(cfg, y0[i:i + CHUNK], t0, cfg.screen_time) for i in range(0, y0.size, CHUNK)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_run_chunk, chunks))
    else:
        parts = [_run_chunk(c) for c in chunks]
    return np.concatenate([p[0] for p in parts]), np.concatenate([p[1] for p in parts])


@dataclass
class LandingHistogram:
    bin_edges: np.ndarray
    counts: np.ndarray
    n_samples: int
    screen_x: float
    n_failed: int
    positions: np.ndarray     # landing y of the live trajectories

    @property
    def centres(self) -> np.ndarray:
        return 0.5 * (self.bin_edges[1:] + self.bin_edges[:-1])

    @property
    def width(self) -> float:
        return float(self.bin_edges[1] - self.bin_edges[0])


def fringe_bins(cfg: ExperimentConfig, lo: float, hi: float, per_fringe: int = 4) -> np.ndarray:
    """Uniform bin edges of width fringe/per_fringe with one bin centred on each dark fringe."""
    width = cfg.fringe_spacing(cfg.screen_x) / per_fringe
    offset = canyon_angle(cfg, 1) * cfg.screen_x     # a dark-fringe position
    first = math.floor((lo - offset) / width - 0.5)
    last = math.ceil((hi - offset) / width + 0.5)
    return offset + (np.arange(first, last + 1) + 0.5) * width


def ensemble_landing(cfg: ExperimentConfig, n_samples: int, seed: int, per_fringe: int = 4,
                     workers: int = 1) -> LandingHistogram:
    """Histogram of screen landing positions for |psi|^2-distributed launches."""
    if n_samples < 1:
        raise ValueError("n_samples must be >= 1")
    rng = np.random.default_rng(seed)
    t0 = launch_time(cfg)
    y0 = sample_initial_positions(cfg, n_samples, rng, t0)
    y, status = land(cfg, y0, t0, workers)
    failed = int(np.sum(status != LIVE))
    if failed > MAX_ABORT_FRACTION * n_samples:
        raise EnsembleFailure(f"{failed} of {n_samples} trajectories aborted")
    live = y[status == LIVE]
    edges = fringe_bins(cfg, live.min(), live.max(), per_fringe)
    counts, _ = np.histogram(live, edges)
    return LandingHistogram(edges, counts, n_samples, cfg.screen_x, failed, live)


def screen_cdf(cfg: ExperimentConfig, y, samples_per_fringe: int = 200):
    """Cumulative distribution of |psi(screen_x, .)|^2, normalised to one."""
    x = cfg.screen_x
    pc = constants()
    t = cfg.screen_time
    # amplitude envelope of one slit: centre a(1 + t/T), width b t sqrt(denominator)
    s = 1.0 / cfg.T + 1.0 / t
    width = cfg.b * t * math.sqrt(s * s + (pc.hbar / (pc.m_e * cfg.b**2)) ** 2)
    reach = cfg.a * (1 + t / cfg.T) + 10 * width
    n = int(2 * reach / cfg.fringe_spacing(x) * samples_per_fringe) | 1
    grid = np.linspace(-reach, reach, n)
    p = probability_density(cfg, x, grid)
    cdf = np.concatenate([[0.0], np.cumsum(0.5 * (p[1:] + p[:-1]) * np.diff(grid))])
    return np.interp(y, grid, cdf / cdf[-1])


def landing_distance(cfg: ExperimentConfig, positions: np.ndarray) -> float:
    """Sup-norm distance between the empirical landing CDF and that of |psi|^2 at the screen."""
    y = np.sort(positions)
    model = screen_cdf(cfg, y)
    n = y.size
    upper = np.arange(1, n + 1) / n
    return float(max(np.max(np.abs(upper - model)), np.max(np.abs(upper - 1.0 / n - model))))


def histogram_minima(hist: LandingHistogram, cfg: ExperimentConfig, ns=(1, 2, 3)) -> dict[int, float]:
    """Centre of the emptiest bin within half a fringe of each theta_n * screen_x."""
    half = 0.5 * cfg.fringe_spacing(cfg.screen_x)
    centres = hist.centres
    out = {}
    for n in ns:
        expected = canyon_angle(cfg, n) * cfg.screen_x
        window = np.abs(centres - expected) < half
        out[n] = float(centres[window][np.argmin(hist.counts[window])])
    return out


def ordering_preserved(y_eval: np.ndarray) -> bool:
    """True if the transverse ordering of lanes is the same at every recorded time."""
    order = np.argsort(y_eval[:, 0], kind="stable")
    ranked = y_eval[order]
    return bool(np.all(np.diff(ranked, axis=0) > 0))


# --- single-canyon kinematics -------------------------------------------------

EXPONENT_LIMIT = 700.0


def crossing_time_exact(cn: CanyonModel, y: float) -> float:
    """Time to reach y from the canyon centre when starting from rest at infinity.

    t(y) = sqrt(3) |n|^(3/2) (m/hbar) (b^2/a_hat) int_0^y exp(a_hat^2 y'^2 / 16 b^4) dy'
    """
    pc = constants()
    scale = 4.0 * cn.b**2 / cn.a_hat
    z = y / scale
    if z * z > EXPONENT_LIMIT:
        raise OverflowError(f"|y| = {abs(y):.3e} cm is beyond the representable crossing time")
    slope = math.sqrt(3.0) * abs(cn.n) ** 1.5 * pc.m_e / pc.hbar * cn.b**2 / cn.a_hat
    integral, _ = quad(lambda u: math.exp(u * u), 0.0, z, epsabs=0.0, epsrel=1e-13)
    return slope * scale * integral


def crossing_time_sinh(cn: CanyonModel, y: float) -> float:
    """t(y) = tau_n sinh(3 a_hat y / 4 b^2)."""
    return cn.tau_n * math.sinh(3.0 * cn.a_hat * y / (4.0 * cn.b**2))


def canyon_speed(cn: CanyonModel, y):
    """|dy/dt| = sqrt(-2 Q_n(y) / m) for a crossing that starts from rest far away."""
    return np.sqrt(-2.0 * q1d(cn, y) / constants().m_e)


def integrate_canyon_crossing(cn: CanyonModel, y_end: float, rtol: float = 1e-11):
    """Integrate m y'' = -dQ_n/dy from the canyon centre out to y_end.

    Starts at y = 0 with the zero-energy speed.  Returns ``(t, y, v)`` arrays
    in s, cm, cm/s; the last sample is the arrival at y_end.
    """
    pc = constants()
    k = cn.a_hat**2 / (4.0 * cn.b**4)
    # time in units of tau_n: the event root finder works to an absolute tolerance
    tau = cn.tau_n

    def accel(_, state):
        y, v = state
        # force -dQ/dy = Q * y * a_hat^2 / (4 b^4)
        return [v * tau, float(q1d(cn, y)) * y * k / pc.m_e * tau]

    v0 = float(canyon_speed(cn, 0.0)) * math.copysign(1.0, y_end)
    s_end = 2.0 * abs(crossing_time_exact(cn, y_end)) / tau + 1.0

    def arrived(_, state):
        return state[0] - y_end
    arrived.terminal = True
    sol = solve_ivp(accel, (0.0, s_end), [0.0, v0], method="DOP853", rtol=rtol,
                    atol=[1e-14 * cn.width_scale, 1e-14 * abs(v0)], events=arrived)
    if sol.status != 1:
        raise RuntimeError("canyon crossing did not reach y_end")
    t = np.append(sol.t, sol.t_events[0]) * tau
    y = np.append(sol.y[0], sol.y_events[0][0, 0])
    v = np.append(sol.y[1], sol.y_events[0][0, 1])
    return t, y, v
