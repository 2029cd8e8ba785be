import pytest

from wavestab.klcurve import solve_L1
from wavestab.multiplier import builtin_symbol
from wavestab.profile import build_dnoidal

# moduli with a branch root of the period constraint (fold sits near 0.5345)
BRANCH_MODULI = (0.6, 0.7, 0.8, 0.9)


@pytest.fixture(scope="session")
def kawahara():
    return builtin_symbol("kawahara")


@pytest.fixture(scope="session")
def branch_points():
    pts = {}
    for k in BRANCH_MODULI:
        point, _ = solve_L1(k)
        assert point is not None
        pts[k] = point
    return pts


@pytest.fixture(scope="session")
def wave08(branch_points):
    """Reference wave: k = 0.8 on the branch, omega = 1."""
    params, psi = build_dnoidal(0.8, branch_points[0.8].L, 1.0, N=128)
    return params, psi


@pytest.fixture(scope="session")
def op08(wave08, kawahara):
    from wavestab.galerkin import assemble

    _, psi = wave08
    return assemble(psi, 1.0, kawahara, N=256)


@pytest.fixture(scope="session")
def variations08(op08):
    from wavestab.galerkin import solve_variations

    return solve_variations(op08)
