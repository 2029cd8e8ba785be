import math

import numpy as np
import pytest
from scipy.optimize import brentq

from wavestab.elliptic import complete_integrals
from wavestab.klcurve import (
    K_ANALYTIC,
    cubic_coefficients,
    cubic_residual,
    p_of_k,
    positive_roots,
    solve_L1,
    sweep,
)
from wavestab.profile import dnoidal_coefficients


def _cubic(k):
    c0, c1 = cubic_coefficients(k)
    return lambda x: x**3 + c1 * x + c0


def test_analytic_point_closed_form():
    point, roots = solve_L1(K_ANALYTIC)
    K = complete_integrals(K_ANALYTIC).K
    closed = math.sqrt((908544.0 / 31.0) * 0.75) * K * K
    assert point.L1 == pytest.approx(closed, rel=1e-12)
    assert abs(point.residual) < 1e-12


def test_bisection_oracle_agreement():
    # independent oracle: bracketing bisection around each reported root
    for k in (0.6, 0.75, 0.9):
        point, _ = solve_L1(k)
        f = _cubic(k)
        lo, hi = 0.9 * point.L1, 1.1 * point.L1
        assert f(lo) * f(hi) < 0
        oracle = brentq(f, lo, hi, xtol=1e-12, rtol=1e-14)
        assert point.L1 == pytest.approx(oracle, rel=1e-10)


def test_global_scan_k09():
    # single positive root for k > 1/sqrt(2): one sign change on [1e-6, 1e6]
    f = _cubic(0.9)
    grid = np.logspace(-6, 6, 400)
    signs = np.sign([f(x) for x in grid])
    changes = np.nonzero(np.diff(signs))[0]
    assert len(changes) == 1
    oracle = brentq(f, grid[changes[0]], grid[changes[0] + 1], rtol=1e-14)
    point, _ = solve_L1(0.9)
    assert point.L1 == pytest.approx(oracle, rel=1e-10)


def test_no_root_below_fold():
    # at k = 0.5 the cubic is positive on the whole positive axis
    point, roots = solve_L1(0.5)
    assert point is None and roots == ()
    f = _cubic(0.5)
    assert min(f(x) for x in np.logspace(-6, 6, 400)) > 0


def test_two_roots_below_analytic_point():
    roots = positive_roots(0.6)
    assert len(roots) == 2
    point, _ = solve_L1(0.6)
    # the smooth branch through 1/sqrt(2) is the larger root here
    assert point.L1 == pytest.approx(roots[-1], rel=1e-12)


def test_sweep_residuals_and_continuity():
    grid = np.linspace(0.54, 0.99, 120)
    rows = sweep(grid)
    withroot = [r for r in rows if r["L1"] is not None]
    assert len(withroot) == len(rows)
    for r in withroot:
        assert abs(cubic_residual(r["k"], r["L1"])) < 1e-10
    L1s = np.array([r["L1"] for r in withroot])
    diffs = np.diff(L1s)
    assert np.all(diffs > 0)              # monotone on this branch
    assert np.abs(diffs / L1s[:-1]).max() < 0.15  # no branch jumping


def test_p_consistency_with_profile_coefficients():
    rng = np.random.default_rng(12)
    for _ in range(100):
        k = rng.uniform(0.05, 0.95)
        L = rng.uniform(5.0, 40.0)
        w = rng.uniform(0.1, 3.0)
        for corrected in (True, False):
            a, _, _ = dnoidal_coefficients(k, L, w, corrected=corrected)
            p = p_of_k(k, L, corrected=corrected)
            lhs = a - w
            rhs = p / (507.0 * L**4)
            assert lhs == pytest.approx(rhs, rel=1e-12, abs=1e-15)


def test_sweep_markers_and_edge_cases():
    rows = sweep([0.5])
    assert rows[0]["stable"] == "no_root" and rows[0]["L1"] is None
    rows = sweep([0.8])
    point, _ = solve_L1(0.8)
    assert rows[0]["L1"] == pytest.approx(point.L1, rel=1e-14)
    assert sweep([]) == []


def test_positive_p_region_and_sign_change():
    rows = sweep(np.linspace(0.54, 0.99, 90))
    ps = [r["p"] for r in rows]
    assert any(p > 0 for p in ps)
    assert any(p < 0 for p in ps)

    def p_on_branch(k):
        return solve_L1(k)[0].p_value

    k_star = brentq(p_on_branch, 0.8, 0.9, xtol=1e-10)
    # recorded location of the sign change for the corrected p
    assert k_star == pytest.approx(0.8489078546965656, abs=1e-6)

    def p_uncorrected(k):
        pt = solve_L1(k, corrected=False)[0]
        return p_of_k(k, pt.L, corrected=False)

    k_star_uncorrected = brentq(p_uncorrected, 0.9, 0.95, xtol=1e-10)
    assert k_star_uncorrected == pytest.approx(0.9218, abs=1e-3)


def test_domain_validation():
    with pytest.raises(ValueError):
        solve_L1(0.0)
    with pytest.raises(ValueError):
        solve_L1(1.0)
