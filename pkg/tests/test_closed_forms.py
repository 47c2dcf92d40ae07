import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from pbergman import (
    Annulus,
    PuncturedDisc,
    UnitDisc,
    carleman_check,
    disc_diag_closed,
    disc_kernel_closed,
    fit_puncture,
    hardy_norm,
    hl_ratio,
    kernel_diag,
    lemma_b6_bounds,
    mean_value_check,
    punctured_asym,
    punctured_bounds,
    rp_exploration,
    weighted_disc_closed,
)
from pbergman.closed_forms import (
    bergman_norm,
    circle_mean,
    punctured_coefficients,
    puncture_samples,
    szego_closed,
    szego_diag,
)
from pbergman.errors import ParameterError, RangeError, UnsupportedDomainError

disc_points = st.complex_numbers(max_magnitude=0.95, allow_nan=False, allow_infinity=False)


def test_disc_closed_examples():
    assert disc_kernel_closed(2, 0.6, 0.3) == pytest.approx(1 / (np.pi * 0.82**2))
    for p in (1, 2, 3.5):
        assert disc_kernel_closed(p, 0, 0) == pytest.approx(1 / np.pi)
    assert disc_diag_closed(4, 0.5) == pytest.approx(1 / (np.pi * 0.5625))
    with pytest.raises(RangeError):
        disc_diag_closed(2, 1.0)


@given(st.floats(0.5, 8), disc_points)
def test_disc_closed_diagonal_is_p_independent(p, z):
    assert disc_kernel_closed(p, z, z).real == pytest.approx(disc_diag_closed(2, z), rel=1e-9)


@given(disc_points, disc_points)
def test_disc_closed_hermitian_at_p2(a, b):
    assert disc_kernel_closed(2, a, b) == pytest.approx(np.conj(disc_kernel_closed(2, b, a)), rel=1e-9)


def test_punctured_formulas():
    assert punctured_asym(1, 0.05) == pytest.approx(1 / (2 * np.pi * 0.05) + 1.5 / np.pi * 0.05, rel=1e-12)
    A, _ = punctured_coefficients(2 / 3)
    assert A == pytest.approx(1 / (3 * np.pi))
    lo, hi = punctured_bounds(1, 0.1)
    K = kernel_diag(PuncturedDisc(), 1, 0.1).K
    # the two-term expansion drops o(|z|) terms and sits a hair below the
    # lower bound at |z| = 0.1, so it is only compared loosely
    assert punctured_asym(1, 0.1) == pytest.approx(lo, rel=1e-3)
    assert lo * (1 - 1e-3) <= K <= hi * (1 + 1e-3)
    with pytest.raises(RangeError):
        punctured_bounds(1, 0.1, rho=0.05)
    with pytest.raises(RangeError):
        punctured_asym(2.5, 0.1)
    with pytest.raises(RangeError):
        punctured_bounds(1.5, 0.9)


@pytest.mark.parametrize("p, A", [(1.0, 1 / (2 * np.pi)), (1.5, 0.5 / (2 * np.pi))])
def test_fit_puncture(p, A):
    radii, vals = puncture_samples(p)
    fit = fit_puncture(p, radii, vals)
    assert fit.A == pytest.approx(A, rel=1e-2)
    if p == 1.0:
        assert fit.B == pytest.approx(3 / (2 * np.pi), rel=5e-2)


def test_fit_puncture_arguments():
    with pytest.raises(ParameterError):
        fit_puncture(1, [0.01, 0.02], [1, 2])
    with pytest.raises(RangeError):
        fit_puncture(1, [0.01, 0.02, 0.05, 0.5], [1, 2, 3, 4])
    with pytest.raises(RangeError):
        fit_puncture(1, [0.01] * 4, [1, 2, 3, 4])


def test_weighted_disc_formula():
    assert weighted_disc_closed(1, 0, 0) == pytest.approx(1 / (2 * np.pi))
    assert weighted_disc_closed(1, 0.5, 0.5) == pytest.approx(1.25 / (2 * np.pi * 0.5625))


@given(disc_points)
def test_weighted_disc_zero_free(z):
    # with p k_p = 1 the kernel is zero free whenever |z| < 1
    w = 0.9 * np.exp(1j * np.linspace(0, 2 * np.pi, 16))
    assert np.all(np.abs(weighted_disc_closed(1, w, z)) > 0)


def test_lemma_corridor():
    lo, hi = lemma_b6_bounds(1, UnitDisc(), 0)
    assert lo == pytest.approx(1 / (4 * np.pi))
    assert hi == pytest.approx(1 / np.pi)
    assert lo <= kernel_diag(UnitDisc(), 1, 0).K <= hi * (1 + 1e-9)
    lo, hi = lemma_b6_bounds(1.5, Annulus(0.5), 0.75)
    assert lo <= kernel_diag(Annulus(0.5), 1.5, 0.75).K <= hi
    # the lower bound grows like delta^-p near the boundary
    l1, _ = lemma_b6_bounds(1.5, UnitDisc(), 0.9)
    l2, _ = lemma_b6_bounds(1.5, UnitDisc(), 0.99)
    assert l2 / l1 == pytest.approx(10**1.5, rel=1e-9)


def test_mean_value_rigidity():
    centre = mean_value_check(UnitDisc(), 1.5, 0)
    assert abs(centre["kernel_excess"]) <= 1e-6
    assert centre["monomial_residual"] <= 1e-10
    assert mean_value_check(UnitDisc(), 1.5, 0.3)["kernel_excess"] > 0
    assert mean_value_check(Annulus(0.5), 2, 0.75)["kernel_excess"] > 0


def test_carleman_and_hardy():
    lhs, rhs = carleman_check([1])
    assert lhs == pytest.approx(np.pi, rel=1e-10)
    assert rhs == pytest.approx(np.pi, rel=1e-10)
    for k in range(1, 5):
        coef = [0] * k + [1]
        assert hardy_norm(1.5, coef) ** 1.5 == pytest.approx(2 * np.pi, rel=1e-10)
        assert bergman_norm(3.0, coef) ** 3 == pytest.approx(np.pi / (1.5 * k + 1), rel=1e-8)
    ratios = [hl_ratio(1.5, [0] * k + [1]) for k in range(6)]
    assert all(b < a for a, b in zip(ratios, ratios[1:]))


def test_hardy_means_increase(rng):
    coef = rng.standard_normal(6) + 1j * rng.standard_normal(6)
    means = [circle_mean(1.2, coef, r) for r in np.linspace(0.1, 1.0, 10)]
    assert all(b >= a * (1 - 1e-12) for a, b in zip(means, means[1:]))


def test_hardy_is_disc_only():
    with pytest.raises(UnsupportedDomainError):
        hardy_norm(2, [1], domain=Annulus(0.5))


@pytest.mark.parametrize("z", [0, 0.3, -0.5j])
def test_szego(z):
    assert szego_diag(z) == pytest.approx(szego_closed(z), rel=1e-8)
    assert szego_closed(0) == pytest.approx(1 / (2 * np.pi))


def test_rp_exploration():
    out = rp_exploration(1.0, N=16, samples=8, xtol=1e-3)
    assert 0 < out.r_p < 1
    assert out.log_convex
    # K_p blows up at both ends of the scan
    assert out.values[0] > out.phi_min and out.values[-1] > out.phi_min
    with pytest.raises(RangeError):
        rp_exploration(2.0)
