"""Two-slit wavefunction for Gaussian slit transparencies.

The amplitude behind each slit is the closed-form Feynman path integral of a
point source at distance ``X`` (travel time ``T``) through a slit of
transparency ``exp(-y^2 / 2 b^2)`` centred at ``+a`` (slit A) or ``-a``
(slit B).  A point ``(x, y)`` behind the slits is reached at ``t = x / v_x``.

The amplitude factorises as

    psi = prefactor(t) * exp(E(y, t)) * exp(i * longitudinal_phase(x))

with ``E`` quadratic in ``y``.  Keeping the three pieces separate lets the
rest of the package differentiate in ``y`` analytically and evaluate ratios
far out in the Gaussian tails without underflow.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import quad

from .constants import constants

NODE_FRACTION = 1e-8


class NodeProximityError(ValueError):
    """An evaluation point (or stencil point) lies where R is below the node guard."""


@dataclass(frozen=True)
class ExperimentConfig:
    """Slit geometry and beam kinematics, all in cm and s.

    ``X`` defaults to ``v_x * T`` (same speed before and after the slits).
    """
    a: float
    b: float
    T: float
    v_x: float
    screen_x: float
    X: float | None = None

    def __post_init__(self):
        if self.X is None:
            object.__setattr__(self, "X", self.v_x * self.T)
        for name in ("a", "b", "T", "v_x", "screen_x", "X"):
            value = getattr(self, name)
            if not (isinstance(value, (int, float)) and math.isfinite(value) and value > 0):
                raise ValueError(f"{name} must be a positive finite number, got {value!r}")
        if not self.a > self.b:
            raise ValueError("slits overlap: need a > b")

    def time_at(self, x):
        """Propagation time from the slit plane to longitudinal position ``x``."""
        x = np.asarray(x, dtype=float)
        if np.any(x <= 0):
            raise ValueError("x must be > 0 (propagation time undefined at or before the slits)")
        return x / self.v_x

    @property
    def screen_time(self) -> float:
        return self.screen_x / self.v_x

    def fringe_spacing(self, x: float) -> float:
        """Two-slit fringe spacing 2 pi hbar x / (m v_x 2a) at distance x."""
        pc = constants()
        return 2 * math.pi * pc.hbar * x / (pc.m_e * self.v_x * 2 * self.a)


# Worked example (b = 1e-6 cm, crossing at t = 1e-9 s, i.e. x = 13 cm).
SHOWCASE = ExperimentConfig(a=1e-4, b=1e-6, T=1e-8, v_x=1.3e10, screen_x=13.0)
# Potential-landscape parameters: b = 1e-5 cm, screen at 39 cm (t = 3e-9 s).
FIGURE2 = ExperimentConfig(a=1e-4, b=1e-5, T=1e-8, v_x=1.3e10, screen_x=39.0)


def _slit_sign(slit: str) -> int:
    if slit == "A":
        return 1
    if slit == "B":
        return -1
    raise ValueError(f"slit must be 'A' or 'B', got {slit!r}")


def _exponent(cfg: ExperimentConfig, sign: int, t, y):
    """E, dE/dy, d2E/dy2 of one slit term (the y-dependent exponent)."""
    pc = constants()
    k = pc.m_e / pc.hbar
    s = 1.0 / cfg.T + 1.0 / t
    denom = s * s + 1.0 / (k * cfg.b * cfg.b) ** 2
    dy = y - sign * cfg.a
    u = cfg.a / cfg.T - sign * dy / t
    E = (-u * u / (2 * cfg.b**2 * denom)
         + 0.5j * k * (cfg.a**2 / cfg.T + dy * dy / t - s * u * u / denom))
    dE = sign * u / (cfg.b**2 * t * denom) + 1j * k * (dy / t + sign * s * u / (t * denom))
    d2E = -1.0 / (cfg.b**2 * t * t * denom) + 1j * k * (1.0 / t - s / (t * t * denom))
    return E, dE, d2E


def prefactor(cfg: ExperimentConfig, t):
    """sqrt(m / 2 pi i hbar) * [T + t + i hbar t T / (m b^2)]^(-1/2)."""
    pc = constants()
    bracket = cfg.T + t + 1j * pc.hbar * t * cfg.T / (pc.m_e * cfg.b**2)
    return np.sqrt(pc.m_e / (2j * math.pi * pc.hbar)) / np.sqrt(bracket)


def longitudinal_phase(cfg: ExperimentConfig, x):
    """The y-independent phase m (X^2/T + x^2/t) / 2 hbar, reduced mod 2 pi.

    With t = x / v_x the second term is m v_x x / 2 hbar.  Both terms are
    huge (~1e11 rad); they cancel from R, Q and the transverse velocity.
    """
    pc = constants()
    k = pc.m_e / pc.hbar
    x = np.asarray(x, dtype=float)
    source = math.fmod(0.5 * k * cfg.X**2 / cfg.T, 2 * math.pi)
    return np.fmod(source + np.fmod(0.5 * k * cfg.v_x * x, 2 * math.pi), 2 * math.pi)


def slit_amplitude(cfg: ExperimentConfig, slit: str, x, y):
    """Amplitude through one slit at (x, y); ``slit`` is ``"A"`` (+a) or ``"B"`` (-a)."""
    sign = _slit_sign(slit)
    t = cfg.time_at(x)
    y = np.asarray(y, dtype=float)
    E, _, _ = _exponent(cfg, sign, t, y)
    out = prefactor(cfg, t) * np.exp(E + 1j * longitudinal_phase(cfg, x))
    return complex(out) if np.ndim(out) == 0 else out


def scaled_field(cfg: ExperimentConfig, x, y):
    """Total field and its first two y-derivatives, rescaled to avoid underflow.

    Returns ``(psi, dpsi, d2psi, log_scale)`` where the true values equal the
    returned ones times ``prefactor * exp(log_scale + i * longitudinal_phase)``.
    """
    t = cfg.time_at(x)
    y = np.asarray(y, dtype=float)
    Ea, dEa, d2Ea = _exponent(cfg, +1, t, y)
    Eb, dEb, d2Eb = _exponent(cfg, -1, t, y)
    log_scale = np.maximum(Ea.real, Eb.real)
    pa = np.exp(Ea - log_scale)
    pb = np.exp(Eb - log_scale)
    psi = pa + pb
    dpsi = dEa * pa + dEb * pb
    d2psi = (d2Ea + dEa**2) * pa + (d2Eb + dEb**2) * pb
    return psi, dpsi, d2psi, log_scale


def reference_amplitude(cfg: ExperimentConfig, x):
    """Upper bound on R at distance x: both slit envelopes at their peaks."""
    return 2.0 * np.abs(prefactor(cfg, cfg.time_at(x)))


def node_threshold(cfg: ExperimentConfig, x):
    """epsilon_R: below this R the phase and quantum potential are unreliable."""
    return NODE_FRACTION * reference_amplitude(cfg, x)


def amplitude(cfg: ExperimentConfig, x, y):
    """R = |psi| at (x, y), computed from the rescaled field."""
    psi, _, _, log_scale = scaled_field(cfg, x, y)
    return np.abs(prefactor(cfg, cfg.time_at(x))) * np.abs(psi) * np.exp(log_scale)


def probability_density(cfg: ExperimentConfig, x, y):
    return amplitude(cfg, x, y) ** 2


@dataclass
class WavePoint:
    """Field values at one point or along a sweep.

    ``S`` is unwrapped along the sweep when ``y`` is one-dimensional with a
    scalar ``x``; otherwise it is the principal value (``branch ==
    "principal"``).  ``near_node`` marks samples where ``R < epsilon_R``;
    ``S`` is not meaningful there.
    """
    psi_A: np.ndarray
    psi_B: np.ndarray
    psi: np.ndarray
    R: np.ndarray
    S: np.ndarray
    P: np.ndarray
    near_node: np.ndarray
    branch: str = field(default="principal")


def total_field(cfg: ExperimentConfig, x, y) -> WavePoint:
    pc = constants()
    psi_a = np.asarray(slit_amplitude(cfg, "A", x, y))
    psi_b = np.asarray(slit_amplitude(cfg, "B", x, y))
    psi = psi_a + psi_b
    R = np.abs(psi)
    near = R < node_threshold(cfg, x)
    phase = np.angle(psi)
    branch = "principal"
    if np.ndim(x) == 0 and phase.ndim == 1 and phase.size > 1:
        phase = np.unwrap(phase)
        branch = "unwrapped"
    return WavePoint(psi_A=psi_a, psi_B=psi_b, psi=psi, R=R, S=pc.hbar * phase, P=R * R,
                     near_node=near, branch=branch)


def transverse_velocity(cfg: ExperimentConfig, x, y):
    """v_y = (hbar/m) Im(psi* dpsi/dy) / |psi|^2, insensitive to the phase branch."""
    return velocity_at_time(cfg, cfg.time_at(x), y)[0]


def velocity_at_time(cfg: ExperimentConfig, t, y):
    """Transverse velocity at time t, plus R / reference_amplitude for node checks."""
    pc = constants()
    y = np.asarray(y, dtype=float)
    Ea, dEa, _ = _exponent(cfg, +1, t, y)
    Eb, dEb, _ = _exponent(cfg, -1, t, y)
    log_scale = np.maximum(Ea.real, Eb.real)
    pa = np.exp(Ea - log_scale)
    pb = np.exp(Eb - log_scale)
    psi = pa + pb
    mod2 = psi.real**2 + psi.imag**2
    v = pc.hbar / pc.m_e * (np.conj(psi) * (dEa * pa + dEb * pb)).imag / mod2
    return v, 0.5 * np.sqrt(mod2) * np.exp(log_scale)


def _probability_current(cfg, x, y):
    return probability_density(cfg, x, y) * transverse_velocity(cfg, x, y)


def continuity_residual(cfg: ExperimentConfig, x: float, y: float, h: tuple[float, float]) -> float:
    """Normalised residual of dP/dt + d(P v_y)/dy at (x, y).

    The field is stationary in the lab frame, with longitudinal position
    standing in for time (t = x / v_x).  In that picture the balance
    ``v_x dP/dx + d(P v_y)/dy = 0`` is the continuity equation of the
    transverse wave.  Central differences with steps ``h = (h_x, h_y)``;
    the result is ``|residual| * t / P`` and tends to zero as O(h^2).
    """
    hx, hy = h
    stencil_x = np.array([x - hx, x + hx, x, x])
    stencil_y = np.array([y, y, y - hy, y + hy])
    R = np.array([amplitude(cfg, sx, sy) for sx, sy in zip(stencil_x, stencil_y)])
    threshold = np.array([node_threshold(cfg, sx) for sx in stencil_x])
    if np.any(R < threshold) or amplitude(cfg, x, y) < node_threshold(cfg, x):
        raise NodeProximityError(f"continuity stencil around ({x}, {y}) touches a node")
    P = R**2
    dPdt = (P[1] - P[0]) / (2 * hx / cfg.v_x)
    J = [_probability_current(cfg, x, y - hy), _probability_current(cfg, x, y + hy)]
    dJdy = (J[1] - J[0]) / (2 * hy)
    p0 = probability_density(cfg, x, y)
    return float(abs(dPdt + dJdy) * cfg.time_at(x) / p0)


def path_integral_quadrature(cfg: ExperimentConfig, slit: str, x: float, y: float,
                             rtol: float = 1e-11) -> complex:
    """Slit amplitude by direct quadrature of the free transverse kernels.

    psi = int K(y, y'; t) G(y' -+ a) K(y', 0; T) dy' * exp(i * longitudinal_phase),
    K(y2, y1; s) = sqrt(m / 2 pi i hbar s) exp(i m (y2 - y1)^2 / 2 hbar s).
    Independent of the closed form apart from the shared longitudinal phase.
    """
    pc = constants()
    k = pc.m_e / pc.hbar
    centre = _slit_sign(slit) * cfg.a
    t = float(cfg.time_at(x))

    def integrand(yp):
        phase = 0.5 * k * ((y - yp) ** 2 / t + yp * yp / cfg.T)
        return np.exp(-(yp - centre) ** 2 / (2 * cfg.b**2) + 1j * phase)

    lo, hi = centre - 14 * cfg.b, centre + 14 * cfg.b
    # split at every ~pi of phase change so quad sees smooth pieces
    slope = k * (abs(y - centre) / t + abs(centre) / cfg.T + 14 * cfg.b * (1 / t + 1 / cfg.T))
    pieces = int(min(max(8, slope * (hi - lo) / np.pi), 4000))
    edges = np.linspace(lo, hi, pieces + 1)
    total = 0j
    for u, v in zip(edges[:-1], edges[1:]):
        re, _ = quad(lambda s: integrand(s).real, u, v, epsabs=0.0, epsrel=rtol)
        im, _ = quad(lambda s: integrand(s).imag, u, v, epsabs=0.0, epsrel=rtol)
        total += re + 1j * im
    kernels = np.sqrt(k / (2j * math.pi * t)) * np.sqrt(k / (2j * math.pi * cfg.T))
    return complex(kernels * total * np.exp(1j * longitudinal_phase(cfg, x)))
