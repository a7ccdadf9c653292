import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from harvestlink.errors import DomainError, InvalidInterval, NoSignChange
from harvestlink.numerics import (INV_E, AnnealSchedule, Branch, accept_move, anneal_maximize,
                                  bisect_root, golden_iterations, lambert_w, minimize_unimodal)

# frozen with mpmath.lambertw at 50 digits
W_FROZEN = [
    (Branch.SECONDARY, -0.033477, -5.007916629),
    (Branch.SECONDARY, -0.1, -3.577152064),
    (Branch.PRINCIPAL, 1.0, 0.5671432904),
    (Branch.PRINCIPAL, -0.1, -0.1118325592),
    (Branch.PRINCIPAL, 10.0, 1.745528003),
    (Branch.PRINCIPAL, 0.0, 0.0),
    (Branch.PRINCIPAL, math.e, 1.0),
]


@pytest.mark.parametrize("branch,z,w", W_FROZEN)
def test_lambert_frozen(branch, z, w):
    assert lambert_w(branch, z) == pytest.approx(w, rel=1e-9)


def test_lambert_against_mpmath():
    mpmath = pytest.importorskip("mpmath")
    for z in np.linspace(-INV_E + 1e-12, -1e-6, 57):
        ref = float(mpmath.lambertw(z, -1).real)
        # W is ill-conditioned next to -1/e, so allow more there
        rel = 1e-12 if z > -INV_E + 1e-6 else 1e-9
        assert lambert_w(Branch.SECONDARY, z) == pytest.approx(ref, rel=rel)
        ref0 = float(mpmath.lambertw(z, 0).real)
        assert lambert_w(Branch.PRINCIPAL, z) == pytest.approx(ref0, rel=1e-10, abs=1e-14)


def test_lambert_branch_point():
    assert lambert_w(Branch.PRINCIPAL, -INV_E) == -1.0
    assert lambert_w(Branch.SECONDARY, -INV_E) == -1.0
    # a few ulps low is snapped to the branch point
    assert lambert_w(Branch.SECONDARY, -INV_E - 1e-17) == -1.0


@pytest.mark.parametrize("branch,z", [
    (Branch.PRINCIPAL, -0.5), (Branch.SECONDARY, 0.0), (Branch.SECONDARY, 0.3),
    (Branch.PRINCIPAL, math.inf), (Branch.SECONDARY, math.nan),
])
def test_lambert_domain(branch, z):
    with pytest.raises(DomainError):
        lambert_w(branch, z)


@given(st.floats(min_value=-INV_E, max_value=-1e-300))
def test_secondary_branch_inverts(z):
    w = lambert_w(Branch.SECONDARY, z)
    assert w <= -1.0
    assert abs(w * math.exp(w) - z) <= 1e-12 * max(1.0, abs(z))


@given(st.floats(min_value=-INV_E, max_value=1e6))
def test_principal_branch_inverts(z):
    w = lambert_w(Branch.PRINCIPAL, z)
    assert w >= -1.0
    assert abs(w * math.exp(w) - z) <= 1e-12 * max(1.0, abs(z))


def test_minimize_unimodal_quadratic():
    x, fx = minimize_unimodal(lambda t: (t - 0.3) ** 2 + 1.0, 0.0, 1.0)
    assert x == pytest.approx(0.3, abs=1e-7)
    assert fx == pytest.approx(1.0, abs=1e-15)


def test_minimize_unimodal_endpoint_minimum():
    x, fx = minimize_unimodal(lambda t: t, 0.0, 1.0)
    assert x == 0.0 and fx == 0.0
    x, _ = minimize_unimodal(lambda t: -t, 0.0, 1.0)
    assert x == 1.0


def test_minimize_unimodal_bad_interval():
    with pytest.raises(InvalidInterval):
        minimize_unimodal(lambda t: t, 1.0, 0.0)


@given(st.floats(min_value=-5, max_value=5), st.floats(min_value=0.1, max_value=10))
def test_minimize_unimodal_finds_vertex(c, w):
    lo, hi = c - w, c + 0.5 * w
    x, _ = minimize_unimodal(lambda t: abs(t - c), lo, hi, tol=1e-10)
    assert abs(x - c) <= 1e-9


def test_golden_iterations():
    n = golden_iterations(1.0, 1e-10)
    assert (0.618034 ** n) <= 1e-10 < 0.618034 ** (n - 1)


def test_bisect_root():
    r = bisect_root(lambda t: t * t - 2.0, 0.0, 2.0)
    assert r == pytest.approx(math.sqrt(2.0), abs=1e-12)


def test_bisect_root_infinite_endpoint():
    r = bisect_root(lambda t: math.inf if t == 0 else 1.0 / t - 4.0, 0.0, 1.0)
    assert r == pytest.approx(0.25, abs=1e-12)


def test_bisect_root_no_sign_change():
    with pytest.raises(NoSignChange):
        bisect_root(lambda t: t * t + 1.0, -1.0, 1.0)


@pytest.mark.parametrize("de,t,draw,ok", [
    (0.1, 1.0, 0.99, True),
    (0.0, 1.0, 0.99, True),
    (-1.0, 1.0, math.exp(-1.0) + 1e-9, False),
    (-1.0, 1.0, math.exp(-1.0) - 1e-9, True),
    (-1.0, 1e-6, 1e-300, False),
])
def test_accept_move(de, t, draw, ok):
    assert accept_move(de, t, draw) is ok


def test_schedule_validation():
    with pytest.raises(ValueError):
        AnnealSchedule(t_initial=1e-7)
    with pytest.raises(ValueError):
        AnnealSchedule(ratio=1.0)


def test_anneal_maximize_concave():
    x, fx = anneal_maximize(lambda t: -(t - 0.6123) ** 2, 0.0, 1.0)
    assert x == pytest.approx(0.6123, abs=1e-7)
    assert fx == pytest.approx(0.0, abs=1e-13)


def test_anneal_is_deterministic():
    f = lambda t: math.sin(3 * t) - 0.1 * t
    a = anneal_maximize(f, 0.0, 2.0, AnnealSchedule(seed=7))
    b = anneal_maximize(f, 0.0, 2.0, AnnealSchedule(seed=7))
    assert a == b


@settings(max_examples=30, deadline=None)
@given(st.floats(min_value=0.0, max_value=1.0), st.integers(min_value=0, max_value=2**32))
def test_anneal_concave_any_seed(c, seed):
    x, _ = anneal_maximize(lambda t: -abs(t - c), 0.0, 1.0, AnnealSchedule(seed=seed))
    assert abs(x - c) <= 1e-8
