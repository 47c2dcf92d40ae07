import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from pbergman import (
    AnnularBand,
    Complement,
    Disc,
    Indicator,
    SubDisc,
    UnitDisc,
    bm_bound,
    bound_checks,
    half_content_radius,
    kernel_diag,
    nonchebyshev_demo,
    schwarz_dim_sweep,
    schwarz_general,
    schwarz_p2,
)
from pbergman.errors import CounterexampleViolation, ParameterError, RangeError
from pbergman.schwarz import LAMBDA1_UNIT_DISC, content_bounds, first_eigenvalue


@pytest.mark.parametrize("r", [0.5, 0.7])
def test_subdisc_content_is_r_squared(r):
    assert schwarz_p2(SubDisc(r)) == pytest.approx(r * r, abs=1e-6)


def test_complement_at_least_area_fraction():
    s = schwarz_p2(Complement(SubDisc(0.5)))
    assert 0.75 - 2e-3 <= s <= 1


@pytest.mark.parametrize("p, r", [(1.0, 0.5), (3.0, 0.6)])
def test_general_p_subdisc(p, r):
    res = schwarz_general(SubDisc(r), UnitDisc(), p, multistarts=3)
    assert res.estimate == pytest.approx(r * r, abs=1e-3)
    assert 0 < res.estimate <= 1


def test_ascent_matches_eigen_at_p2():
    res = schwarz_general(AnnularBand(0.2, 0.6), UnitDisc(), 2.0, multistarts=2)
    assert res.exact_eig is not None
    assert res.estimate == pytest.approx(res.exact_eig, abs=1e-6)


def test_seeded_ascent_is_reproducible():
    a = schwarz_general(SubDisc(0.4), UnitDisc(), 1.5, multistarts=4, seed=7)
    b = schwarz_general(SubDisc(0.4), UnitDisc(), 1.5, multistarts=4, seed=7)
    assert a.estimate == b.estimate


def test_monotone_in_region():
    radii = [0.2, 0.4, 0.6, 0.8]
    s = [schwarz_p2(SubDisc(r)) for r in radii]
    assert all(b >= a - 1e-9 for a, b in zip(s, s[1:]))
    assert schwarz_p2(AnnularBand(0.3, 0.5)) <= schwarz_p2(AnnularBand(0.2, 0.6)) + 1e-9


def test_area_lower_bound():
    D = UnitDisc()
    for E in (SubDisc(0.3), AnnularBand(0.4, 0.7), Complement(SubDisc(0.8))):
        assert schwarz_p2(E) >= E.area(D) / D.area - 2e-3


def test_subadditivity_for_disjoint_discs():
    left = Indicator(lambda z: np.abs(z + 0.5) < 0.3)
    right = Indicator(lambda z: np.abs(z - 0.5) < 0.3)
    both = Indicator(lambda z: (np.abs(z + 0.5) < 0.3) | (np.abs(z - 0.5) < 0.3))
    assert schwarz_p2(both) <= schwarz_p2(left) + schwarz_p2(right) + 1e-6


def test_kernel_ratio_below_content():
    s = schwarz_p2(SubDisc(0.9))
    small = Disc(0.9)
    for z in (0.0, 0.4, -0.3 + 0.5j):
        ratio = kernel_diag(UnitDisc(), 3, z).K / kernel_diag(small, 3, z).K
        assert ratio <= s + 1e-3


def test_eigenvalue_bounds():
    assert LAMBDA1_UNIT_DISC == pytest.approx(2.404825557695773**2)
    assert first_eigenvalue(Disc(2.0)) == pytest.approx(LAMBDA1_UNIT_DISC / 4)
    bounds = content_bounds(0.5)
    assert bounds["lambda1_136"] == pytest.approx(0.9895, abs=1e-4)
    res = bound_checks(schwarz_general(SubDisc(0.5), UnitDisc(), 2.0, multistarts=1), 0.5)
    assert all(flag for _, _, flag in res.bound_checks)
    res = bound_checks(schwarz_general(SubDisc(0.1), UnitDisc(), 2.0, multistarts=1), 0.9)
    assert res.estimate == pytest.approx(0.01, abs=1e-6)
    assert all(flag for _, _, flag in res.bound_checks)
    assert content_bounds(0.0)["lambda1_128"] == 1.0


def test_bm_bound_examples():
    assert bm_bound(0.5, 1) == pytest.approx(2.0)
    assert bm_bound(0.75, 2) == pytest.approx(2.0)
    assert bm_bound(0.0, 3) == 1.0
    with pytest.raises(RangeError):
        bm_bound(1.0, 2)
    with pytest.raises(ParameterError):
        bm_bound(0.5, 0.5)


@given(st.floats(0, 0.999), st.floats(1, 10))
def test_bm_bound_at_least_one(s, p):
    assert bm_bound(s, p) >= 1.0


def test_half_content_radius_p2():
    assert half_content_radius(2.0) == pytest.approx(2**-0.5, abs=1e-4)


@pytest.mark.parametrize("p", [1.0, 1.5])
def test_half_content_radius_general(p):
    assert half_content_radius(p, xtol=1e-4) == pytest.approx(2**-0.5, abs=1e-3)


def test_half_content_radius_bracket():
    with pytest.raises(RangeError):
        half_content_radius(2.0, lo=0.8, hi=0.9)


@pytest.mark.parametrize("p", [1.0, 0.5])
def test_nonchebyshev(p):
    demo = nonchebyshev_demo(p, candidates=100)
    half = np.pi / 2
    assert demo.inner_integral == pytest.approx(half, abs=2e-3)
    assert demo.outer_integral == pytest.approx(half, abs=2e-3)
    assert demo.distance_h1 == pytest.approx(half, abs=2e-3)
    assert demo.distance_h2 == pytest.approx(half, abs=2e-3)
    assert demo.candidate_min >= half - 1e-6


def test_nonchebyshev_range():
    with pytest.raises(ParameterError):
        nonchebyshev_demo(1.5)


def test_counterexample_error_is_an_assertion():
    assert issubclass(CounterexampleViolation, AssertionError)


@pytest.mark.parametrize("p", [2.0, 1.0])
def test_dimension_sweep(p):
    sw = schwarz_dim_sweep(UnitDisc(), p)
    assert sw.dimension == pytest.approx(1.0, abs=0.1)
    assert np.all(np.diff(sw.contents) > 0)


def test_dimension_sweep_arguments():
    with pytest.raises(ParameterError):
        schwarz_dim_sweep(UnitDisc(), 2.0, eps_list=(0.05, 0.1))
    with pytest.raises(ParameterError):
        schwarz_dim_sweep(UnitDisc(), 2.0, eps_list=(0.5, 0.1))
