import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from wavestab.multiplier import MultiplierSymbol, builtin_symbol, verify_bounds


def test_kawahara_values():
    kaw = builtin_symbol("kawahara")
    assert kaw(2.0) == 16.0 + 4.0
    assert kaw(0.0) == 0.0
    assert kaw.m2 == 4.0 and kaw.A1 == 1.0 and kaw.A2 == 2.0


def test_all_builtins_vanish_at_zero():
    for name, alpha in (("kawahara", None), ("kdv", None), ("bo", None),
                        ("fractional", 1.5)):
        assert builtin_symbol(name, alpha=alpha)(0.0) == 0.0


def test_kdv_bounds_exact():
    kdv = builtin_symbol("kdv")
    kk = np.arange(-64, 65, dtype=float)
    assert np.array_equal(kdv(kk), kk**2)
    ok, bad = verify_bounds(kdv, 64)
    assert ok and bad is None


def test_fractional_one_is_abs():
    frac = builtin_symbol("fractional", alpha=1.0)
    ok, bad = verify_bounds(frac, 64)
    assert ok and bad is None
    assert frac(-3.0) == 3.0


def test_kawahara_sandwich():
    ok, bad = verify_bounds(builtin_symbol("kawahara"), 64)
    assert ok and bad is None


def test_wrong_declared_order_detected():
    # kappa^4 + kappa^2 against A2 kappa^2 fails first at |kappa| = 2
    wrong = MultiplierSymbol("kawahara-as-kdv", lambda x: x**4 + x**2,
                             m2=2.0, A1=1.0, A2=2.0)
    ok, bad = verify_bounds(wrong, 64)
    assert not ok
    assert abs(bad) == 2.0


def test_bounds_all_builtins_to_512():
    for name, alpha in (("kawahara", None), ("kdv", None), ("bo", None),
                        ("fractional", 0.5), ("fractional", 2.0)):
        sym = builtin_symbol(name, alpha=alpha)
        ok, bad = verify_bounds(sym, 512)
        assert ok, (name, bad)


def test_validation_rejects_nonzero_origin():
    with pytest.raises(ValueError):
        MultiplierSymbol("bad", lambda x: x**2 + 1.0, m2=2.0, A1=1.0, A2=2.0)


def test_validation_rejects_odd_symbol():
    with pytest.raises(ValueError):
        MultiplierSymbol("odd", lambda x: x**3, m2=3.0, A1=1.0, A2=1.0)


def test_unknown_name_and_bad_alpha():
    with pytest.raises(ValueError):
        builtin_symbol("airy")
    for alpha in (None, 0.0, 2.5, -1.0):
        with pytest.raises(ValueError):
            builtin_symbol("fractional", alpha=alpha)


@settings(max_examples=40, deadline=None)
@given(kappa=st.floats(min_value=-100.0, max_value=100.0))
def test_builtin_evenness(kappa):
    for name, alpha in (("kawahara", None), ("fractional", 1.3)):
        sym = builtin_symbol(name, alpha=alpha)
        assert sym(kappa) == pytest.approx(sym(-kappa), rel=1e-14, abs=1e-14)
