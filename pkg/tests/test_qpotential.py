import math

import numpy as np
import pytest

from bohmrad.constants import constants, erg_to_ev
from bohmrad.qpotential import (OK, approx_q, canyon, canyon_angle, canyon_spacing, cross_section,
                                default_steps, exact_q, exact_q_array, in_excluded_zone,
                                laplacian_ratio, locate_canyon, potential_grid, q1d, PotentialGrid)
from bohmrad.wavefield import ExperimentConfig, scaled_field

from conftest import approx, plateau_points


def test_theta1_value(showcase):
    assert canyon_angle(showcase, 1) == approx(1.399e-6, rel=1e-3)


@pytest.mark.parametrize("n", [1, 2, 3, 7])
def test_theta_antisymmetric(showcase, n):
    assert canyon_angle(showcase, -n) == -canyon_angle(showcase, n)


@pytest.mark.parametrize("n", [0, 1.5])
def test_bad_index(showcase, n):
    with pytest.raises(ValueError):
        canyon(showcase, n, 13.0)


def test_depth_example(showcase):
    # t/T = 0.1 on the showcase geometry
    x = 0.1 * showcase.T * showcase.v_x
    assert erg_to_ev(canyon(showcase, 1, x).depth) == approx(1.26, rel=0.01)


def test_model_field_relations(fig2):
    pc = constants()
    cn = canyon(fig2, 2, 13.0)
    b = fig2.b
    assert cn.depth == approx(pc.hbar**2 / pc.m_e * cn.a_hat**2 / b**4 / 48, rel=1e-14)
    assert cn.tau_n == approx(4 * 2**1.5 / math.sqrt(3) * pc.m_e / pc.hbar * b**4 / cn.a_hat**2, rel=1e-14)
    assert cn.width_scale == approx(2 * math.sqrt(2) * b**2 / cn.a_hat, rel=1e-14)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_depth_cubic_falloff(fig2, n):
    assert canyon(fig2, n, 13.0).depth / canyon(fig2, 1, 13.0).depth == approx(n**-3, rel=1e-14)


def test_width_grows_with_time(fig2):
    x1, x2 = 3.0, 29.0
    w1, w2 = canyon(fig2, 1, x1).width_scale, canyon(fig2, 1, x2).width_scale
    t1, t2 = fig2.time_at(x1), fig2.time_at(x2)
    expected = math.sqrt(1 + (t2 / fig2.T) ** 2) / math.sqrt(1 + (t1 / fig2.T) ** 2)
    assert abs(w2 / w1 / expected - 1) < 1e-12


def test_q1d_profile(fig2):
    cn = canyon(fig2, 1, 13.0)
    assert q1d(cn, 0.0) == -cn.depth
    ys = np.linspace(0, 3 * cn.width_scale, 50)
    assert np.array_equal(q1d(cn, ys), q1d(cn, -ys))
    half = math.sqrt(8 * math.log(2)) * cn.b**2 / cn.a_hat
    assert q1d(cn, half) == approx(-0.5 * cn.depth, rel=1e-13)


def test_approx_single_term_peak(fig2):
    x = 13.0
    y = x * math.tan(canyon_angle(fig2, 1))
    val = approx_q(fig2, x, y, n_max=1)
    assert val / -canyon(fig2, 1, x).depth == approx(1.0, rel=1e-6)


def test_approx_even(fig2):
    ys = np.linspace(0, 3e-3, 300)
    assert np.array_equal(approx_q(fig2, 13.0, ys), approx_q(fig2, 13.0, -ys))


def test_approx_truncation(fig2):
    x = 13.0
    ys = canyon_angle(fig2, 1) * x + np.linspace(-0.3, 0.3, 61) * canyon_spacing(fig2, x)
    five = approx_q(fig2, x, ys, n_max=5)
    six = approx_q(fig2, x, ys, n_max=6)
    assert np.max(np.abs(six / five - 1)) < 1e-6


def test_approx_nonpositive(fig2):
    ys = np.linspace(-3e-3, 3e-3, 2001)
    for x in (2.0, 13.0, 39.0):
        assert np.all(approx_q(fig2, x, ys) <= 0)


def test_exact_q_even(fig2):
    for x, y in plateau_points(fig2, 8, seed=2):
        assert exact_q(fig2, x, y) == approx(exact_q(fig2, x, -y), rel=1e-8, abs=1e-8 * canyon(fig2, 1, x).depth)


def test_plateau_midpoint_small(fig2):
    x = 13.0
    y = 2 * canyon_angle(fig2, 1) * x
    assert abs(exact_q(fig2, x, y)) < 0.1 * canyon(fig2, 1, x).depth


def test_canyon_bottom_depth(fig2):
    x = 13.0
    y = canyon_angle(fig2, 1) * x
    assert exact_q(fig2, x, y) / -canyon(fig2, 1, x).depth == approx(1.0, abs=0.3)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_locate_canyon(fig2, n):
    cmp = locate_canyon(fig2, n, 13.0)
    assert cmp.position_error < 0.1
    assert 0.7 <= cmp.depth_ratio <= 1.3


def _analytic_lap_ratio_y(cfg, x, y):
    # R''/R = Re(psi''/psi) + (Im(psi'/psi))^2 for R = |psi|
    psi, dpsi, d2psi, _ = scaled_field(cfg, x, y)
    return (d2psi / psi).real + ((dpsi / psi).imag) ** 2


def test_transverse_curvature_against_analytic(fig2):
    x = 13.0
    ys = np.linspace(-8e-4, 8e-4, 97)
    hx, hy = default_steps(fig2, x)
    # drop the x-curvature by comparing the y part only
    r0 = np.abs(scaled_field(fig2, x, ys)[0])
    fd = []
    for h in (hy, hy / 2):
        rp = np.abs(scaled_field(fig2, x, ys + h)[0])
        rm = np.abs(scaled_field(fig2, x, ys - h)[0])
        # rescaling shifts with y; undo it through the exact log scale
        lp = scaled_field(fig2, x, ys + h)[3]
        lm = scaled_field(fig2, x, ys - h)[3]
        l0 = scaled_field(fig2, x, ys)[3]
        fd.append((rp * np.exp(lp - l0) - 2 * r0 + rm * np.exp(lm - l0)) / (h * h * r0))
    rich = (4 * fd[1] - fd[0]) / 3
    exact = _analytic_lap_ratio_y(fig2, x, ys)
    scale = (2 * math.pi / fig2.fringe_spacing(x)) ** 2
    assert np.max(np.abs(rich - exact)) < 1e-5 * scale


def test_exact_q_matches_analytic_with_x_part(fig2):
    # the x-curvature is tiny next to the y-curvature; compare total Q at canyon bottoms
    pc = constants()
    x = 13.0
    for n in (1, 2, 3):
        y = canyon_angle(fig2, n) * x
        qa = -pc.hbar**2 / (2 * pc.m_e) * _analytic_lap_ratio_y(fig2, x, y)
        assert exact_q(fig2, x, y) == approx(qa, rel=1e-3)


def _fd_order(cfg, x, y):
    # second-order differences without extrapolation, three step levels
    hx, hy = default_steps(cfg, x)
    hx, hy = 8 * hx, 8 * hy
    vals = [laplacian_ratio(cfg, x, y, hx / 2**k, hy / 2**k) for k in range(3)]
    return math.log2(abs(vals[0] - vals[1]) / abs(vals[1] - vals[2]))


def test_fd_convergence_order(fig2):
    rng = np.random.default_rng(17)
    orders = []
    for _ in range(20):
        x = rng.uniform(5.0, 39.0)
        n = int(rng.integers(1, 4)) * int(rng.choice([-1, 1]))
        y = canyon_angle(fig2, n) * x + rng.uniform(-0.2, 0.2) * canyon_spacing(fig2, x)
        orders.append(_fd_order(fig2, x, y))
    assert min(orders) >= 1.9, orders


def test_exact_q_nonpositive_outside_excluded_zone(fig2):
    # stated invariant; bright-fringe crests have R_yy < 0 and hence Q > 0
    ys = np.linspace(-1e-3, 1e-3, 801)
    for x in (13.0, 39.0):
        assert not in_excluded_zone(fig2, x)
        q, status = exact_q_array(fig2, x, ys)
        ok = status == OK
        assert np.all(q[ok] <= 0)


def test_cross_section_pairs(fig2):
    exact, approx = cross_section(fig2, 13.0, (-1e-3, 1e-3), 401)
    assert exact.provenance == "exact" and approx.provenance == "approx"
    assert np.array_equal(exact.y, approx.y)
    assert np.array_equal(approx.Q[0], approx_q(fig2, 13.0, -approx.y))


def test_grid_validation():
    with pytest.raises(ValueError):
        PotentialGrid(np.array([1.0, 0.5]), np.array([0.0, 1.0]), np.zeros((2, 2)), "exact")
    with pytest.raises(ValueError):
        PotentialGrid(np.array([1.0]), np.array([0.0, 1.0]), np.zeros((1, 2)), "guess")


def test_potential_grid_shape(fig2):
    g = potential_grid(fig2, [5.0, 13.0], np.linspace(-1e-4, 1e-4, 11))
    assert g.Q.shape == (2, 11)
    assert g.status.shape == (2, 11)
