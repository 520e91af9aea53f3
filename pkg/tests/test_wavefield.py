import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.optimize import minimize_scalar

from bohmrad.constants import constants
from bohmrad.wavefield import (ExperimentConfig, NodeProximityError, continuity_residual,
                               path_integral_quadrature, probability_density, slit_amplitude,
                               total_field, transverse_velocity)

from conftest import approx, plateau_points


@pytest.mark.parametrize("kwargs", [
    dict(a=-1e-4, b=1e-6, T=1e-8, v_x=1e10, screen_x=1.0),
    dict(a=1e-4, b=2e-4, T=1e-8, v_x=1e10, screen_x=1.0),
    dict(a=1e-4, b=1e-6, T=0.0, v_x=1e10, screen_x=1.0),
    dict(a=1e-4, b=1e-6, T=1e-8, v_x=float("nan"), screen_x=1.0),
])
def test_config_invariants(kwargs):
    with pytest.raises(ValueError):
        ExperimentConfig(**kwargs)


@pytest.mark.parametrize("x", [0.0, -1.0])
def test_nonpositive_x_rejected(showcase, x):
    with pytest.raises(ValueError):
        slit_amplitude(showcase, "A", x, 0.0)


def test_bad_slit_label(showcase):
    with pytest.raises(ValueError):
        slit_amplitude(showcase, "C", 1.0, 0.0)


def _probe_points(cfg, n, seed):
    """Random points inside the slit-A beam, where its amplitude is not negligible."""
    hbar_m = constants().hbar / constants().m_e
    rng = np.random.default_rng(seed)
    pts = []
    for _ in range(n):
        x = rng.uniform(0.05, cfg.screen_x)
        t = cfg.time_at(x)
        centre = cfg.a * (1 + t / cfg.T)
        width = t * cfg.b * math.hypot(1 / cfg.T + 1 / t, hbar_m / cfg.b**2)
        pts.append((x, centre + rng.normal(0, width)))
    return pts


@pytest.mark.parametrize("cfg_name", ["showcase", "fig2"])
def test_closed_form_matches_kernel_quadrature(cfg_name, request):
    cfg = request.getfixturevalue(cfg_name)
    for x, y in _probe_points(cfg, 10, seed=3):
        # slit B is probed at the mirrored point, inside its own beam
        for slit, yy in (("A", y), ("B", -y)):
            ref = path_integral_quadrature(cfg, slit, x, yy)
            got = slit_amplitude(cfg, slit, x, yy)
            assert abs(got - ref) <= 1e-6 * abs(ref)


@given(x=st.floats(0.01, 13.0), y=st.floats(-5e-3, 5e-3))
@settings(max_examples=50, deadline=None)
def test_mirror_symmetry(x, y):
    from bohmrad.wavefield import SHOWCASE as cfg
    assert slit_amplitude(cfg, "B", x, y) == approx(slit_amplitude(cfg, "A", x, -y), rel=1e-12, abs=0)
    assert probability_density(cfg, x, y) == approx(probability_density(cfg, x, -y), rel=1e-12)


@pytest.mark.parametrize("x", [0.5, 5.0, 13.0])
def test_slit_envelope_peak_on_ray(showcase, x):
    cfg = showcase
    t = cfg.time_at(x)
    expected = cfg.a * (1 + t / cfg.T)
    width = cfg.b * t / cfg.T + 1e-3 * expected
    res = minimize_scalar(lambda y: -abs(slit_amplitude(cfg, "A", x, y)),
                          bounds=(expected - 50 * width, expected + 50 * width), method="bounded",
                          options={"xatol": 1e-12 * expected})
    assert res.x == approx(expected, rel=1e-6)


@pytest.mark.parametrize("x", [0.1, 1.0, 13.0])
def test_on_axis_constructive(showcase, x):
    wp = total_field(showcase, x, 0.0)
    assert wp.psi_A == approx(wp.psi_B, rel=1e-13)
    assert wp.P == approx(4 * abs(wp.psi_A) ** 2, rel=1e-13)


def test_fringe_spacing_from_minima(showcase):
    cfg = showcase
    x = 13.0
    expected = cfg.fringe_spacing(x)
    assert expected == approx(3.6e-5, rel=0.02)
    ys = np.linspace(0, 4 * expected, 40001)
    p = probability_density(cfg, x, ys)
    interior = np.flatnonzero((p[1:-1] < p[:-2]) & (p[1:-1] < p[2:])) + 1
    minima = ys[interior]
    assert len(minima) >= 3
    assert np.diff(minima) == approx(np.full(len(minima) - 1, expected), rel=1e-3)


def test_polar_round_trip_and_p_definition(fig2):
    cfg = fig2
    ys = np.linspace(-4e-4, 4e-4, 2001)
    wp = total_field(cfg, 13.0, ys)
    assert wp.branch == "unwrapped"
    ok = ~wp.near_node
    assert ok.all()
    recon = wp.R * np.exp(1j * wp.S / constants().hbar)
    assert np.all(np.abs(recon[ok] - wp.psi[ok]) <= 1e-10 * wp.R[ok])
    assert np.array_equal(wp.P, wp.R**2)


def test_phase_even_mod_2pi(fig2):
    hbar = constants().hbar
    ys = np.linspace(1e-5, 2e-3, 50)
    for y in ys:
        s1 = total_field(fig2, 13.0, y).S
        s2 = total_field(fig2, 13.0, -y).S
        d = (s1 - s2) / hbar
        assert abs(math.remainder(d, 2 * math.pi)) < 1e-9


def test_point_query_is_principal_branch(fig2):
    wp = total_field(fig2, 13.0, 1e-4)
    assert wp.branch == "principal"
    assert -math.pi <= wp.S / constants().hbar <= math.pi


def test_velocity_antisymmetric(fig2):
    ys = np.linspace(1e-5, 3e-3, 40)
    for x in (1.0, 13.0):
        assert np.allclose(transverse_velocity(fig2, x, ys), -transverse_velocity(fig2, x, -ys), rtol=1e-12)
        assert transverse_velocity(fig2, x, 0.0) == 0.0


def _order(cfg, x, y, h):
    r1 = continuity_residual(cfg, x, y, h)
    r2 = continuity_residual(cfg, x, y, (h[0] / 2, h[1] / 2))
    return math.log2(r1 / r2), r1, r2


def _steps(cfg, x):
    # inside the asymptotic range, well above round-off
    return (0.0125 * x, cfg.fringe_spacing(x) / 80)


def test_continuity_second_order_plateau(fig2):
    orders = []
    for x, y in plateau_points(fig2, 20, seed=5):
        p, r1, r2 = _order(fig2, x, y, _steps(fig2, x))
        orders.append(p)
    assert min(orders) >= 1.9, orders


def test_continuity_mirror(fig2):
    for x, y in plateau_points(fig2, 5, seed=9):
        h = _steps(fig2, x)
        assert continuity_residual(fig2, x, y, h) == approx(continuity_residual(fig2, x, -y, h), rel=1e-6)


def test_continuity_on_axis_converges(fig2):
    x = 13.0
    h = _steps(fig2, x)
    p, r1, r2 = _order(fig2, x, 0.0, h)
    assert p >= 1.9
    assert r2 < r1


def test_dark_fringes_are_not_exact_nodes(showcase):
    # off axis the two slit envelopes differ, so R >= ||psi_A| - |psi_B|| > 0
    cfg = showcase
    x = 13.0
    f = cfg.fringe_spacing(x)
    res = minimize_scalar(lambda y: probability_density(cfg, x, y), bounds=(0.2 * f, 0.8 * f),
                          method="bounded", options={"xatol": 1e-16})
    wp = total_field(cfg, x, res.x)
    assert wp.R >= abs(abs(wp.psi_A) - abs(wp.psi_B)) * (1 - 1e-9)
    assert not wp.near_node


def test_continuity_rejects_near_node_stencil(showcase):
    # far outside both envelopes R falls below the guard band
    cfg = showcase
    x = 1.0
    y = 50 * cfg.a * (1 + cfg.time_at(x) / cfg.T)
    assert total_field(cfg, x, y).near_node
    with pytest.raises(NodeProximityError):
        continuity_residual(cfg, x, y, _steps(cfg, x))
