"""Quantum potential Q = -(hbar^2 / 2m) lap(R) / R and its canyon model.

``exact_q`` differentiates the wavefield numerically.  The canyon model
replaces the interference troughs by Gaussians fanning out from the slit
midpoint at angles theta_n; ``q1d`` is one such trough seen transversely.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar

from .constants import constants
from .wavefield import ExperimentConfig, NodeProximityError, amplitude, node_threshold

RICHARDSON_TOL = 1e-3
STEPS_PER_FEATURE = 50
DEFAULT_N_MAX = 5

OK, NEAR_NODE, NOT_CONVERGED = 0, 1, 2


class ConvergenceError(ArithmeticError):
    pass


@dataclass(frozen=True)
class CanyonModel:
    n: int
    theta_n: float      # rad
    depth: float        # erg, |Q_n(0)|
    width_scale: float  # cm, 2 sqrt(2) b^2 / a_hat
    a_hat: float        # cm
    tau_n: float        # s
    b: float            # cm
    t: float            # s, time at which the canyon is evaluated


def canyon_angle(cfg: ExperimentConfig, n: int) -> float:
    """theta_n = (|n| - 1/2) pi hbar / (m v_x a), signed like n."""
    if n == 0 or int(n) != n:
        raise ValueError("canyon index must be a nonzero integer")
    pc = constants()
    return math.copysign((abs(n) - 0.5) * math.pi * pc.hbar / (pc.m_e * cfg.v_x * cfg.a), n)


def canyon_spacing(cfg: ExperimentConfig, x: float) -> float:
    """Transverse distance between neighbouring canyons at distance x."""
    pc = constants()
    return math.pi * pc.hbar / (pc.m_e * cfg.v_x * cfg.a) * x


def canyon(cfg: ExperimentConfig, n: int, x: float) -> CanyonModel:
    pc = constants()
    theta = canyon_angle(cfg, n)
    t = float(cfg.time_at(x))
    a_hat = cfg.a / math.sqrt(1.0 + (t / cfg.T) ** 2)
    m = abs(n)
    depth = pc.hbar**2 / pc.m_e * a_hat**2 / cfg.b**4 / (6.0 * m**3)
    tau = 4.0 * m**1.5 / math.sqrt(3.0) * (pc.m_e / pc.hbar) * cfg.b**4 / a_hat**2
    return CanyonModel(n=int(n), theta_n=theta, depth=depth,
                       width_scale=2.0 * math.sqrt(2.0) * cfg.b**2 / a_hat,
                       a_hat=a_hat, tau_n=tau, b=cfg.b, t=t)


def q1d(cn: CanyonModel, y):
    """Transverse profile of one canyon, y measured from its centre."""
    return -cn.depth * np.exp(-(cn.a_hat * np.asarray(y)) ** 2 / (8.0 * cn.b**4))


def approx_q(cfg: ExperimentConfig, x, y, n_max: int = DEFAULT_N_MAX):
    """Sum of Gaussian canyons n = +-1 .. +-n_max in polar coordinates about the midpoint."""
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    pc = constants()
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    t = cfg.time_at(x)
    stretch = 1.0 + (t / cfg.T) ** 2
    r2 = x * x + y * y
    theta = np.arctan2(y, x)
    base = pc.hbar**2 / pc.m_e * cfg.a**2 / cfg.b**4 / stretch / 6.0
    total = np.zeros(np.broadcast(x, y).shape)
    for m in range(1, n_max + 1):
        for n in (m, -m):
            dtheta = theta - canyon_angle(cfg, n)
            total -= base / m**3 * np.exp(-cfg.a**2 * r2 * dtheta**2 / (8 * cfg.b**4 * stretch))
    return total


def default_steps(cfg: ExperimentConfig, x: float) -> tuple[float, float]:
    """(h_x, h_y) for the Laplacian at distance x.

    h_y resolves the narrower of the canyon width and the fringe spacing;
    h_x is stretched by v_x T / a because R varies far more slowly along x.
    """
    width = canyon(cfg, 1, x).width_scale
    h_y = min(width, cfg.fringe_spacing(x)) / STEPS_PER_FEATURE
    return h_y * cfg.v_x * cfg.T / cfg.a, h_y


def laplacian_ratio(cfg: ExperimentConfig, x, y, hx: float, hy: float):
    """Second-order central-difference estimate of lap(R) / R (no extrapolation)."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    r0 = amplitude(cfg, x, y)
    rxx = (amplitude(cfg, x + hx, y) - 2 * r0 + amplitude(cfg, x - hx, y)) / hx**2
    ryy = (amplitude(cfg, x, y + hy) - 2 * r0 + amplitude(cfg, x, y - hy)) / hy**2
    return (rxx + ryy) / r0


def _stencil_min_r(cfg, x, y, hx, hy):
    return np.minimum.reduce([amplitude(cfg, x, y), amplitude(cfg, x + hx, y),
                              amplitude(cfg, x - hx, y), amplitude(cfg, x, y + hy),
                              amplitude(cfg, x, y - hy)])


def exact_q_array(cfg: ExperimentConfig, x, y, steps: tuple[float, float] | None = None):
    """Vectorised exact Q with per-sample status codes (OK, NEAR_NODE, NOT_CONVERGED).

    ``x`` must be a scalar here so that one step pair serves the whole array.
    Samples that are not OK carry NaN.
    """
    pc = constants()
    x = float(x)
    y = np.asarray(y, dtype=float)
    hx, hy = steps if steps is not None else default_steps(cfg, x)
    coarse = laplacian_ratio(cfg, x, y, hx, hy)
    fine = laplacian_ratio(cfg, x, y, hx / 2, hy / 2)
    rich = (4 * fine - coarse) / 3
    # plateau curvature scale, so near-zero Q does not read as non-convergence
    curvature_floor = (2 * math.pi / cfg.fringe_spacing(x)) ** 2
    mismatch = np.abs(rich - coarse) / np.maximum(np.abs(rich), curvature_floor)
    q = -pc.hbar**2 / (2 * pc.m_e) * rich
    status = np.full(y.shape, OK, dtype=int)
    status[mismatch > RICHARDSON_TOL] = NOT_CONVERGED
    status[_stencil_min_r(cfg, x, y, hx, hy) < node_threshold(cfg, x)] = NEAR_NODE
    q = np.where(status == OK, q, np.nan)
    return q, status


def exact_q(cfg: ExperimentConfig, x: float, y: float, steps: tuple[float, float] | None = None) -> float:
    """Exact quantum potential (erg) at one point; raises near nodes or on non-convergence."""
    q, status = exact_q_array(cfg, x, np.array([y]), steps)
    if status[0] == NEAR_NODE:
        raise NodeProximityError(f"Laplacian stencil at ({x}, {y}) touches a node")
    if status[0] == NOT_CONVERGED:
        raise ConvergenceError(f"Richardson estimate at ({x}, {y}) disagrees by more than {RICHARDSON_TOL}")
    return float(q[0])


def in_excluded_zone(cfg: ExperimentConfig, x) -> np.ndarray:
    """Near-slit region where the two beams have not yet overlapped.

    The shadow peak between the slits and the diffraction spikes at the slit
    exits live here; the canyon model does not describe them.
    """
    pc = constants()
    overlap_time = pc.m_e * cfg.a * cfg.b / pc.hbar
    return np.asarray(cfg.time_at(x)) < overlap_time


@dataclass
class PotentialGrid:
    x: np.ndarray           # cm, strictly increasing
    y: np.ndarray           # cm, strictly increasing
    Q: np.ndarray           # erg, shape (len(x), len(y)); NaN where unreliable
    provenance: str         # "exact" or "approx"
    status: np.ndarray | None = None

    def __post_init__(self):
        for name in ("x", "y"):
            axis = np.asarray(getattr(self, name))
            if axis.ndim != 1 or (axis.size > 1 and np.any(np.diff(axis) <= 0)):
                raise ValueError(f"{name} samples must be strictly increasing")
        if self.provenance not in ("exact", "approx"):
            raise ValueError("provenance must be 'exact' or 'approx'")
        if self.Q.shape != (len(self.x), len(self.y)):
            raise ValueError("Q shape does not match the sample axes")


def potential_grid(cfg: ExperimentConfig, xs, ys, provenance: str = "exact",
                   n_max: int = DEFAULT_N_MAX) -> PotentialGrid:
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    Q = np.empty((xs.size, ys.size))
    status = np.zeros((xs.size, ys.size), dtype=int)
    for i, x in enumerate(xs):
        if provenance == "exact":
            Q[i], status[i] = exact_q_array(cfg, x, ys)
        else:
            Q[i] = approx_q(cfg, x, ys, n_max)
    return PotentialGrid(xs, ys, Q, provenance, status)


def cross_section(cfg: ExperimentConfig, x: float, y_range: tuple[float, float], n_samples: int,
                  n_max: int = DEFAULT_N_MAX) -> tuple[PotentialGrid, PotentialGrid]:
    """Exact and approximate Q along one transverse line, aligned sample by sample."""
    if n_samples < 2:
        raise ValueError("need at least two samples")
    ys = np.linspace(y_range[0], y_range[1], n_samples)
    return (potential_grid(cfg, [x], ys, "exact"),
            potential_grid(cfg, [x], ys, "approx", n_max))


@dataclass(frozen=True)
class CanyonComparison:
    n: int
    expected_y: float       # theta_n x
    exact_y: float          # location of the exact-Q minimum
    spacing: float
    exact_depth: float      # |Q| at the exact minimum
    approx_depth: float     # |Q_n(0)| of the canyon model

    @property
    def position_error(self) -> float:
        """Offset of the exact minimum in units of the canyon spacing."""
        return abs(self.exact_y - self.expected_y) / self.spacing

    @property
    def depth_ratio(self) -> float:
        return self.exact_depth / self.approx_depth


def locate_canyon(cfg: ExperimentConfig, n: int, x: float, samples: int = 4001) -> CanyonComparison:
    """Find the exact-Q minimum nearest theta_n x and compare with the canyon model."""
    spacing = canyon_spacing(cfg, x)
    expected = canyon_angle(cfg, n) * x
    ys = np.linspace(expected - 0.5 * spacing, expected + 0.5 * spacing, samples)
    q, status = exact_q_array(cfg, x, ys)
    if not np.any(status == OK):
        raise NodeProximityError(f"no reliable Q samples near canyon {n} at x={x}")
    i = int(np.nanargmin(q))
    lo, hi = ys[max(i - 2, 0)], ys[min(i + 2, samples - 1)]
    best = minimize_scalar(lambda yy: exact_q(cfg, x, yy), bounds=(lo, hi), method="bounded",
                           options={"xatol": 1e-6 * (hi - lo)})
    return CanyonComparison(n=n, expected_y=expected, exact_y=float(best.x), spacing=spacing,
                            exact_depth=-float(best.fun), approx_depth=canyon(cfg, n, x).depth)
