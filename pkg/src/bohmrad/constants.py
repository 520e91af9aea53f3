"""Physical constants in CGS-Gaussian units.

Every module obtains its constants through :func:`constants`, so a test can
rescale a base constant with :func:`override_constants` and observe the
effect everywhere.
"""
from __future__ import annotations

import contextlib
import math
from dataclasses import dataclass
from typing import Iterator

# CODATA 2018 values converted to CGS.
_HBAR = 1.054571817e-27          # erg s
_M_E = 9.1093837015e-28          # g
_C_LIGHT = 2.99792458e10         # cm / s
_ALPHA = 7.2973525693e-3
_ERG_PER_EV = 1.602176634e-12


@dataclass(frozen=True)
class PhysicalConstants:
    hbar: float
    m_e: float
    e_charge: float
    c_light: float
    r_e: float
    lambdabar_c: float
    erg_per_eV: float

    @classmethod
    def from_base(cls, hbar: float, m_e: float, e_charge: float,
                  c_light: float, erg_per_eV: float) -> "PhysicalConstants":
        """Build a constant set whose derived lengths are consistent with the base values."""
        return cls(
            hbar=hbar,
            m_e=m_e,
            e_charge=e_charge,
            c_light=c_light,
            r_e=e_charge**2 / (m_e * c_light**2),
            lambdabar_c=hbar / (m_e * c_light),
            erg_per_eV=erg_per_eV,
        )

    @property
    def alpha(self) -> float:
        return self.e_charge**2 / (self.hbar * self.c_light)

    @property
    def rest_energy(self) -> float:
        """m c^2 in erg."""
        return self.m_e * self.c_light**2


CGS = PhysicalConstants.from_base(
    hbar=_HBAR,
    m_e=_M_E,
    e_charge=math.sqrt(_ALPHA * _HBAR * _C_LIGHT),
    c_light=_C_LIGHT,
    erg_per_eV=_ERG_PER_EV,
)

_active = CGS


def constants() -> PhysicalConstants:
    return _active


@contextlib.contextmanager
def override_constants(**base: float) -> Iterator[PhysicalConstants]:
    """Temporarily replace base constants (test hook).

    Only base fields may be given (``hbar``, ``m_e``, ``e_charge``,
    ``c_light``, ``erg_per_eV``); ``r_e`` and ``lambdabar_c`` are rederived.
    """
    global _active
    allowed = {"hbar", "m_e", "e_charge", "c_light", "erg_per_eV"}
    unknown = set(base) - allowed
    if unknown:
        raise ValueError(f"cannot override derived or unknown constants: {sorted(unknown)}")
    fields = {k: getattr(CGS, k) for k in allowed}
    fields.update(base)
    saved = _active
    _active = PhysicalConstants.from_base(**fields)
    try:
        yield _active
    finally:
        _active = saved


def ev_to_erg(value_ev):
    return value_ev * constants().erg_per_eV


def erg_to_ev(value_erg):
    return value_erg / constants().erg_per_eV

