"""Dipole radiation from a single canyon crossing, and the photon screen pattern.

An electron that crosses canyon n is accelerated by -dQ_n/dy.  Its radiated
energy follows from Larmor's formula, either integrated in closed form or by
quadrature over the well; the spectrum follows from the Fourier transform of
the transverse velocity along the crossing, for either the exact time map
t(y) or its sinh approximation.

Spectral densities use the solid-angle-integrated form
(e^2 w^2 / 3 pi c^3) |int exp(i w t(y)) dy|^2.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import quad
from scipy.optimize import brentq
from scipy.special import erfi
from scipy.stats import poisson

from .constants import constants, erg_to_ev
from .dynamics import fringe_bins, screen_cdf
from .qpotential import CanyonModel, canyon, canyon_angle, q1d
from .specfun import bessel_k0, spectrum_peak_argument
from .wavefield import ExperimentConfig

BETA_LIMIT = 0.01
BACKREACTION_FRACTION = 1e-3
FREQ_NODES = 4096
FREQ_RANGE = (1e-3, 50.0)    # in units of 1/tau_n


class QuadratureError(ArithmeticError):
    """An adaptive quadrature did not reach its tolerance; carries the achieved estimate."""

    def __init__(self, message: str, value: float, error: float):
        super().__init__(f"{message} (value {value:.6e}, error estimate {error:.3e})")
        self.value = value
        self.error = error


def larmor_power(a_y):
    """P = (2/3) (e^2 / c^3) a^2 in erg/s."""
    pc = constants()
    return 2.0 / 3.0 * pc.e_charge**2 / pc.c_light**3 * np.square(a_y)


def q1d_slope(cn: CanyonModel, y):
    """dQ_n/dy of the canyon profile."""
    return -q1d(cn, y) * cn.a_hat**2 * np.asarray(y) / (4.0 * cn.b**4)


def crossing_energy_closed(cn: CanyonModel) -> float:
    """sqrt(pi)/(81 |n|^(9/2)) r_e lambdabar_c^3 a_hat^4 / b^8 m c^2."""
    pc = constants()
    return (math.sqrt(math.pi) / (81.0 * abs(cn.n) ** 4.5) * pc.r_e * pc.lambdabar_c**3
            * cn.a_hat**4 / cn.b**8 * pc.rest_energy)


def crossing_energy_quadrature(cn: CanyonModel, rtol: float = 1e-10) -> float:
    """Larmor energy of one crossing, integrated over y with dt = dy / ydot.

    Uses ydot = sqrt(-2 Q_n / m) (zero transverse velocity far away).
    """
    pc = constants()
    pref = 2.0 * pc.e_charge**2 / (3.0 * pc.m_e**2 * pc.c_light**3)
    w = cn.width_scale

    def integrand(u):
        y = u * w
        return pref * q1d_slope(cn, y) ** 2 / math.sqrt(-2.0 * q1d(cn, y) / pc.m_e) * w

    # the integrand is even and decays like exp(-3 u^2), so [0, 12] is the whole well
    value, err = quad(integrand, 0.0, 12.0, epsabs=0.0, epsrel=rtol, limit=200)
    if err > 100 * rtol * abs(value):
        raise QuadratureError("crossing energy quadrature did not converge", 2 * value, 2 * err)
    return 2.0 * value


def _spectrum_prefactor(cn: CanyonModel) -> float:
    """(64 / 27 pi) (e^2 / c^3) (b^4 / a_hat^2)."""
    pc = constants()
    return 64.0 / (27.0 * math.pi) * pc.e_charge**2 / pc.c_light**3 * cn.b**4 / cn.a_hat**2


@dataclass
class SpectrumSample:
    omega: np.ndarray         # rad/s
    dE_domega: np.ndarray     # erg s
    provenance: str           # "closed_form" or "numeric_fourier"
    error: np.ndarray | None = field(default=None)

    def __post_init__(self):
        if self.provenance not in ("closed_form", "numeric_fourier"):
            raise ValueError(f"unknown provenance {self.provenance!r}")
        if np.any(np.asarray(self.dE_domega) < 0):
            raise ValueError("spectral density must be nonnegative")


def _check_omega(omega) -> np.ndarray:
    w = np.asarray(omega, dtype=float)
    if np.any(~(w > 0)):
        raise ValueError("omega must be > 0")
    return w


def spectrum_closed(cn: CanyonModel, omega) -> SpectrumSample:
    """(64 / 27 pi)(e^2/c^3)(b^4/a_hat^2) w^2 K0(w tau_n)^2."""
    w = _check_omega(omega)
    density = _spectrum_prefactor(cn) * w**2 * bessel_k0(w * cn.tau_n) ** 2
    return SpectrumSample(w, np.asarray(density), "closed_form")


# --- velocity along the crossing as a function of time --------------------------

def _ydot_sinh(cn: CanyonModel, t: float) -> float:
    """dy/dt for t = tau sinh(kappa y): 1 / (kappa sqrt(tau^2 + t^2))."""
    kappa = 3.0 * cn.a_hat / (4.0 * cn.b**2)
    return 1.0 / (kappa * math.hypot(cn.tau_n, t))


def _exact_map_constants(cn: CanyonModel) -> tuple[float, float]:
    """(scale, slope) with t(y) = slope * scale * (sqrt(pi)/2) erfi(y / scale)."""
    pc = constants()
    scale = 4.0 * cn.b**2 / cn.a_hat
    slope = math.sqrt(3.0) * abs(cn.n) ** 1.5 * pc.m_e / pc.hbar * cn.b**2 / cn.a_hat
    return scale, slope


def exact_position(cn: CanyonModel, t: float) -> float:
    """Invert the exact time map: y with crossing_time_exact(y) = t."""
    scale, slope = _exact_map_constants(cn)
    target = abs(t) / (slope * scale)          # = (sqrt(pi)/2) erfi(z)
    if target == 0.0:
        return 0.0
    f = lambda z: 0.5 * math.sqrt(math.pi) * erfi(z) - target
    hi = max(target, math.sqrt(math.log(2.0 * target + 1.0) + 1.0)) + 1.0
    z = brentq(f, 0.0, hi, xtol=1e-15, rtol=1e-15)
    return math.copysign(z * scale, t)


def _ydot_exact(cn: CanyonModel, t: float) -> float:
    scale, slope = _exact_map_constants(cn)
    z = exact_position(cn, t) / scale
    return math.exp(-z * z) / slope


def velocity_transform(cn: CanyonModel, omega: float, time_map: str = "sinh",
                       epsabs: float = 1e-13) -> tuple[float, float]:
    """int ydot(t) exp(i w t) dt over the whole crossing, with its error estimate.

    ydot is even in t, so this is 2 int_0^inf ydot cos(w t) dt, done with the
    Fourier-weighted QUADPACK routine in units of tau_n and of ydot(0);
    ``epsabs`` applies to that normalised integral.
    """
    if time_map == "sinh":
        ydot = _ydot_sinh
    elif time_map == "exact":
        ydot = _ydot_exact
    else:
        raise ValueError("time_map must be 'sinh' or 'exact'")
    tau = cn.tau_n
    v0 = ydot(cn, 0.0)
    value, err, *_ = quad(lambda s: ydot(cn, s * tau) / v0, 0.0, np.inf, weight="cos",
                                   wvar=omega * tau, epsabs=epsabs, limlst=200, full_output=1)
    if err > max(1e3 * epsabs, 1e-6 * abs(value)):
        raise QuadratureError(f"oscillatory tail did not converge at omega tau = {omega * tau:.4g}",
                              2.0 * tau * v0 * value, 2.0 * tau * v0 * err)
    return 2.0 * tau * v0 * value, 2.0 * tau * v0 * err


def spectrum_numeric(cn: CanyonModel, omega, time_map: str = "sinh") -> SpectrumSample:
    """Spectral density (e^2 w^2 / 3 pi c^3) |int exp(i w t(y)) dy|^2 by quadrature."""
    pc = constants()
    w = np.atleast_1d(_check_omega(omega))
    pref = pc.e_charge**2 / (3.0 * math.pi * pc.c_light**3)
    density = np.empty_like(w)
    error = np.empty_like(w)
    for i, wi in enumerate(w):
        v, e = velocity_transform(cn, wi, time_map)
        density[i] = pref * wi**2 * v * v
        error[i] = pref * wi**2 * 2.0 * abs(v) * e
    return SpectrumSample(w, density, "numeric_fourier", error)


def spectral_energy(cn: CanyonModel) -> float:
    """pi sqrt(3) / (288 |n|^(9/2)) r_e lambdabar_c^3 a_hat^4 / b^8 m c^2."""
    pc = constants()
    return (math.pi * math.sqrt(3.0) / (288.0 * abs(cn.n) ** 4.5) * pc.r_e * pc.lambdabar_c**3
            * cn.a_hat**4 / cn.b**8 * pc.rest_energy)


def integrate_spectrum(cn: CanyonModel, density, upper: float = 50.0, rtol: float = 1e-8) -> float:
    """int_0^(upper / tau_n) density(w) dw for a callable density."""
    tau = cn.tau_n
    value, err = quad(lambda s: density(s / tau) / tau, 0.0, upper, epsabs=0.0,
                      epsrel=rtol, limit=400)
    if err > 100 * rtol * abs(value):
        raise QuadratureError("spectrum integral did not converge", value, err)
    return value


def numeric_spectrum_energy(cn: CanyonModel, time_map: str = "exact", upper: float = 50.0) -> float:
    """Total energy from the numeric spectrum of the chosen time map."""
    one = lambda w: float(spectrum_numeric(cn, w, time_map).dE_domega[0])
    return integrate_spectrum(cn, one, upper, rtol=1e-6)


def peak_frequency(cn: CanyonModel) -> float:
    """3 / (5 tau_n) in rad/s."""
    return 3.0 / (5.0 * cn.tau_n)


def exact_peak_frequency(cn: CanyonModel) -> float:
    """Maximiser of w^2 K0(w tau_n)^2: x* / tau_n with K0(x*) = x* K1(x*)."""
    return spectrum_peak_argument() / cn.tau_n


@dataclass(frozen=True)
class RadiationReport:
    n: int
    energy_closed: float          # erg
    energy_quadrature: float      # erg
    energy_spectral: float        # erg
    omega_max: float              # rad/s
    omega_peak_exact: float       # rad/s
    tau_n: float                  # s
    emission_probability: float
    beta_max: float
    depth: float                  # erg
    dipole_regime: bool           # beta_max < BETA_LIMIT
    backreaction_negligible: bool  # energy_closed <= BACKREACTION_FRACTION * depth

    @property
    def hbar_omega_max(self) -> float:
        return constants().hbar * self.omega_max

    @property
    def lambda_max(self) -> float:
        """Wavelength 2 pi c / omega_max in cm."""
        return 2.0 * math.pi * constants().c_light / self.omega_max

    def as_rows(self) -> list[tuple[str, float]]:
        return [
            ("energy_closed_eV", erg_to_ev(self.energy_closed)),
            ("energy_quadrature_eV", erg_to_ev(self.energy_quadrature)),
            ("energy_spectral_eV", erg_to_ev(self.energy_spectral)),
            ("hbar_omega_max_eV", erg_to_ev(self.hbar_omega_max)),
            ("lambda_max_angstrom", self.lambda_max * 1e8),
            ("emission_probability", self.emission_probability),
            ("beta_max", self.beta_max),
        ]


def emission_summary(cfg: ExperimentConfig, n: int = 1, x: float | None = None) -> RadiationReport:
    """Radiation figures for canyon n evaluated at distance x (default: the screen).

    The back-reaction flag compares the radiated energy with the largest
    transverse kinetic energy of the crossing, |Q_n(0)|.
    """
    pc = constants()
    cn = canyon(cfg, n, cfg.screen_x if x is None else x)
    closed = crossing_energy_closed(cn)
    omega_max = peak_frequency(cn)
    beta = pc.lambdabar_c * cn.a_hat / (math.sqrt(3.0) * cn.b**2 * abs(n) ** 1.5)
    return RadiationReport(
        n=n, energy_closed=closed, energy_quadrature=crossing_energy_quadrature(cn),
        energy_spectral=spectral_energy(cn), omega_max=omega_max,
        omega_peak_exact=exact_peak_frequency(cn), tau_n=cn.tau_n,
        emission_probability=closed / (pc.hbar * omega_max), beta_max=beta, depth=cn.depth,
        dipole_regime=beta < BETA_LIMIT,
        backreaction_negligible=closed <= BACKREACTION_FRACTION * cn.depth)


# --- photon screen pattern ------------------------------------------------------

def frequency_sampler(cn: CanyonModel, nodes: int = FREQ_NODES):
    """Inverse-CDF sampler for the normalised closed-form spectrum.

    Tabulated on log-spaced nodes over FREQ_RANGE / tau_n; returns a function
    mapping uniforms in [0, 1) to angular frequencies.
    """
    w = np.geomspace(FREQ_RANGE[0], FREQ_RANGE[1], nodes) / cn.tau_n
    d = spectrum_closed(cn, w).dE_domega
    cdf = np.concatenate([[0.0], np.cumsum(0.5 * (d[1:] + d[:-1]) * np.diff(w))])
    cdf /= cdf[-1]
    return lambda u: np.interp(u, cdf, w)


def dipole_directions(rng: np.random.Generator, n: int) -> np.ndarray:
    """Unit vectors distributed as sin^2(psi), psi measured from the y axis.

    Rows are (k_x, k_y, k_z).  cos(psi) has density 3(1 - c^2)/4 on [-1, 1],
    drawn by inverting its cubic CDF.
    """
    u = rng.random(n)
    # CDF: (2 + 3c - c^3) / 4 = u  ->  c = 2 cos((arccos(1 - 2u) + 4 pi) / 3)
    c = 2.0 * np.cos((np.arccos(1.0 - 2.0 * u) + 4.0 * np.pi) / 3.0)
    c = np.clip(c, -1.0, 1.0)
    phi = 2.0 * np.pi * rng.random(n)
    s = np.sqrt(1.0 - c * c)
    return np.column_stack([s * np.cos(phi), c, s * np.sin(phi)])


def dipole_intensity(direction) -> np.ndarray:
    """Relative dipole intensity sin^2(psi) for acceleration along y."""
    k = np.atleast_2d(direction)
    k = k / np.linalg.norm(k, axis=1, keepdims=True)
    return 1.0 - k[:, 1] ** 2


@dataclass
class PhotonPattern:
    canyon: np.ndarray        # canyon index of each photon
    emission_y: np.ndarray    # cm, at x = emission_x
    omega: np.ndarray         # rad/s
    direction: np.ndarray     # (n, 3) unit vectors
    screen_y: np.ndarray      # cm, NaN for photons that miss the screen plane
    weight: np.ndarray        # photons per electron carried by each sample
    emission_x: float
    n_electrons: int
    angle_edges: np.ndarray
    angle_counts: np.ndarray  # weighted, over atan2(k_y, k_x)
    screen_edges: np.ndarray
    screen_counts: np.ndarray  # raw photon counts per screen bin
    electron_counts: np.ndarray  # electron landings on the same bins
    importance: bool

    @property
    def n_emitted(self) -> int:
        return int(self.canyon.size)

    @property
    def zero_emission(self) -> bool:
        return self.canyon.size == 0


def photon_pattern(cfg: ExperimentConfig, n_electrons: int, seed: int, *, n_max: int = 3,
                   emission_x: float | None = None, importance: bool = True,
                   screen_bins: np.ndarray | None = None, angle_bins: int = 180) -> PhotonPattern:
    """Monte Carlo photon pattern from canyon crossings.

    Electron landing positions are drawn from |psi(screen_x, .)|^2; an
    electron landing beyond canyon n on its side is counted as having
    crossed it.  Each crossing emits with probability E_n / hbar w_max at
    (emission_x, theta_n emission_x) with a dipole direction about the y
    axis and frequency from the closed-form spectrum; the photon then flies
    in a straight line to the screen plane.  With ``importance=True`` every
    crossing emits and carries that probability as its weight.
    """
    if n_electrons < 1:
        raise ValueError("n_electrons must be >= 1")
    pc = constants()
    x_e = 0.5 * cfg.screen_x if emission_x is None else emission_x
    if not 0 < x_e < cfg.screen_x:
        raise ValueError("emission_x must lie between the slits and the screen")
    rng = np.random.default_rng(seed)

    # landing positions by inverse CDF of the screen density
    half = 0.5 * cfg.fringe_spacing(cfg.screen_x)
    reach = canyon_angle(cfg, n_max) * cfg.screen_x + 40 * half
    grid = np.linspace(-reach, reach, 40001)
    cdf = screen_cdf(cfg, grid)
    landing = np.interp(rng.random(n_electrons) * (cdf[-1] - cdf[0]) + cdf[0], cdf, grid)

    parts = []
    for m in range(1, n_max + 1):
        for n in (m, -m):
            edge = canyon_angle(cfg, n) * cfg.screen_x
            crossed = np.count_nonzero(landing > edge) if n > 0 else np.count_nonzero(landing < edge)
            if crossed == 0:
                continue
            cn = canyon(cfg, n, x_e)
            p = crossing_energy_closed(cn) / (pc.hbar * peak_frequency(cn))
            if importance:
                k, w = crossed, np.full(crossed, p)
            else:
                k = int(rng.binomial(crossed, min(p, 1.0)))
                w = np.ones(k)
            if k == 0:
                continue
            parts.append((np.full(k, n), np.full(k, cn.theta_n * x_e),
                          frequency_sampler(cn)(rng.random(k)), dipole_directions(rng, k), w))

    if parts:
        idx, y_e, omega, direction, weight = (np.concatenate(p) for p in zip(*parts))
    else:
        idx, y_e, omega, weight = (np.empty(0) for _ in range(4))
        direction = np.empty((0, 3))
    weight = weight / n_electrons
    forward = direction[:, 0] > 0
    screen_y = np.full(idx.size, np.nan)
    screen_y[forward] = y_e[forward] + (cfg.screen_x - x_e) * direction[forward, 1] / direction[forward, 0]

    angle_edges = np.linspace(-np.pi, np.pi, angle_bins + 1)
    angle_counts, _ = np.histogram(np.arctan2(direction[:, 1], direction[:, 0]), angle_edges,
                                   weights=weight)
    if screen_bins is None:
        screen_bins = fringe_bins(cfg, -reach, reach)
    screen_counts, _ = np.histogram(screen_y[forward], screen_bins)
    return PhotonPattern(canyon=idx.astype(int), emission_y=y_e, omega=omega, direction=direction,
                         screen_y=screen_y, weight=weight, emission_x=x_e,
                         n_electrons=n_electrons, angle_edges=angle_edges,
                         angle_counts=angle_counts, screen_edges=np.asarray(screen_bins),
                         screen_counts=screen_counts,
                         electron_counts=np.histogram(landing, screen_bins)[0], importance=importance)


def photon_peaks(pattern: PhotonPattern, cfg: ExperimentConfig, ns=(1, 2, 3),
                 alpha: float = 1e-3) -> dict[int, float | None]:
    """Significant photon screen-histogram peak near each theta_n * screen_x.

    Within one electron fringe of the canyon intercept, the fullest bin is a
    peak only if its count is improbable under a flat Poisson background
    (mean over the whole screen histogram) at level ``alpha``, corrected for
    the number of bins searched; otherwise the entry is None.
    """
    fringe = cfg.fringe_spacing(cfg.screen_x)
    edges = pattern.screen_edges
    centres = 0.5 * (edges[1:] + edges[:-1])
    background = pattern.screen_counts.mean()
    out = {}
    for n in ns:
        window = np.abs(centres - canyon_angle(cfg, n) * cfg.screen_x) <= fringe
        counts = pattern.screen_counts[window]
        top = int(np.argmax(counts))
        tail = poisson.sf(counts[top] - 1, background) if background > 0 else 1.0
        out[n] = float(centres[window][top]) if tail < alpha / window.sum() else None
    return out
