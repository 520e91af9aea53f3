import numpy as np
import pytest

from bohmrad.wavefield import FIGURE2, SHOWCASE


@pytest.fixture
def showcase():
    return SHOWCASE


@pytest.fixture
def fig2():
    return FIGURE2


def plateau_points(cfg, n, seed, x_range=(2.0, None)):
    """Random (x, y) pairs near bright-fringe centres, off any node."""
    from bohmrad.qpotential import canyon_spacing
    rng = np.random.default_rng(seed)
    x_hi = cfg.screen_x if x_range[1] is None else x_range[1]
    xs = rng.uniform(x_range[0], x_hi, n)
    out = []
    for x in xs:
        k = rng.integers(-3, 4)
        y = k * canyon_spacing(cfg, x) + rng.uniform(-0.2, 0.2) * canyon_spacing(cfg, x)
        out.append((float(x), float(y)))
    return out


def approx(expected, rel=1e-6, abs=0.0):
    """pytest.approx without its 1e-12 absolute floor, which would swallow CGS-sized values."""
    return pytest.approx(expected, rel=rel, abs=abs)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(RESULTS):
        passed, detail = RESULTS[number]
        terminalreporter.write_line(f"criterion {number:2d}: {'PASS' if passed else 'FAIL'} | {detail}")
