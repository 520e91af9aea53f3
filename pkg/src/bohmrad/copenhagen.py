"""Copenhagen-side counterpart: Born scattering shape and a radiation upper bound.

In the standard picture the electron only radiates while it is deflected by
the slit barrier, a momentum transfer q ~ hbar/a acting for the barrier
transit time.  The resulting bound depends on a alone, whereas the canyon
crossing energy goes as a^4 / b^8.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar

from .constants import constants, erg_to_ev
from .qpotential import canyon
from .radiation import crossing_energy_closed
from .wavefield import ExperimentConfig

MIN_THICKNESS = 10.0      # in units of lambdabar_c

BOHM_SCALING = {"a": 4, "b": -8}
COPENHAGEN_SCALING = {"a": -2, "b": 0}


@dataclass(frozen=True)
class CopenhagenParams:
    V0: float                  # erg
    barrier_thickness: float   # cm
    delta_t: float             # s
    beta: float

    def __post_init__(self):
        pc = constants()
        # small slack so the defaults survive round-off
        if not self.V0 >= pc.rest_energy * (1 - 1e-12):
            raise ValueError("barrier height V0 must be at least m c^2")
        if not self.barrier_thickness >= MIN_THICKNESS * pc.lambdabar_c * (1 - 1e-12):
            raise ValueError("barrier thickness must be at least 10 reduced Compton wavelengths")
        if not (0 < self.beta < 1):
            raise ValueError("beta must lie in (0, 1)")
        if not self.delta_t > 0:
            raise ValueError("delta_t must be positive")

    @classmethod
    def for_config(cls, cfg: ExperimentConfig, V0: float | None = None,
                   barrier_thickness: float | None = None) -> "CopenhagenParams":
        """Defaults: V0 = m c^2 and the thinnest admissible barrier, 10 lambdabar_c."""
        pc = constants()
        dx = MIN_THICKNESS * pc.lambdabar_c if barrier_thickness is None else barrier_thickness
        return cls(V0=pc.rest_energy if V0 is None else V0, barrier_thickness=dx,
                   delta_t=dx / cfg.v_x, beta=cfg.v_x / pc.c_light)


def scattering_shape(cfg: ExperimentConfig, q):
    """Unnormalised Born shape (1/q^2) cos^2(q a / hbar) sin^2(q b / hbar); q in g cm/s."""
    q = np.asarray(q, dtype=float)
    if np.any(~(q > 0)):
        raise ValueError("momentum transfer q must be > 0")
    hbar = constants().hbar
    out = np.cos(q * cfg.a / hbar) ** 2 * np.sin(q * cfg.b / hbar) ** 2 / q**2
    return float(out) if out.ndim == 0 else out


def first_maximum(cfg: ExperimentConfig) -> float:
    """Momentum transfer of the first maximum beyond q = 0.

    The shape falls from its q -> 0 limit to the first cos^2 zero at
    q a / hbar = pi/2; the next maximum lies before the zero at 3 pi/2.
    """
    hbar = constants().hbar
    unit = hbar / cfg.a
    res = minimize_scalar(lambda s: -scattering_shape(cfg, s * unit), bounds=(0.5 * math.pi, 1.5 * math.pi),
                          method="bounded", options={"xatol": 1e-10})
    return float(res.x) * unit


def radiation_bound(cfg: ExperimentConfig, params: CopenhagenParams) -> float:
    """Upper bound (2/3)(r_e lambdabar_c / a^2) beta m c^2 in erg.

    A strict upper bound, not an estimate.  The barrier transit time
    ``params.delta_t`` does not appear in it.
    """
    pc = constants()
    return 2.0 / 3.0 * pc.r_e * pc.lambdabar_c / cfg.a**2 * params.beta * pc.rest_energy


@dataclass(frozen=True)
class Comparison:
    bohm_energy: float         # erg, canyon n = 1 at the screen
    copenhagen_bound: float    # erg
    params: CopenhagenParams
    bohm_scaling: dict
    copenhagen_scaling: dict

    @property
    def ratio(self) -> float:
        return self.bohm_energy / self.copenhagen_bound

    def as_rows(self) -> list[tuple[str, object]]:
        return [
            ("bohm_energy_eV", erg_to_ev(self.bohm_energy)),
            ("copenhagen_bound_eV", erg_to_ev(self.copenhagen_bound)),
            ("ratio", self.ratio),
            ("bohm_scaling", "a^{a:+d} b^{b:+d}".format(**self.bohm_scaling)),
            ("copenhagen_scaling", "a^{a:+d} b^{b:+d}".format(**self.copenhagen_scaling)),
            ("copenhagen_label", "strict upper bound"),
            ("barrier_thickness_cm", self.params.barrier_thickness),
            ("delta_t_s", self.params.delta_t),
            ("beta", self.params.beta),
        ]


def compare(cfg: ExperimentConfig, params: CopenhagenParams | None = None) -> Comparison:
    params = CopenhagenParams.for_config(cfg) if params is None else params
    return Comparison(bohm_energy=crossing_energy_closed(canyon(cfg, 1, cfg.screen_x)),
                      copenhagen_bound=radiation_bound(cfg, params), params=params,
                      bohm_scaling=dict(BOHM_SCALING), copenhagen_scaling=dict(COPENHAGEN_SCALING))
