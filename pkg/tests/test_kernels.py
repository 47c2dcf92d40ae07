import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pbergman import (
    Disc,
    LpProblem,
    derivative_identity_residual,
    disc_diag_closed,
    disc_kernel_closed,
    hsc_testdisc_inequality,
    kernel_diag,
    kernel_offdiag,
    levi_log_kernel,
    metric,
    reproducing_residual,
    transform_invariance_residual,
    UnitDisc,
)
from pbergman.errors import GeometryError, ParameterError, StepSizeError
from pbergman.kernels import mobius, setup


@pytest.mark.parametrize("p", [1, 2, 3])
def test_disc_centre_is_one_over_pi(disc, p):
    assert kernel_diag(disc, p, 0).K == pytest.approx(1 / np.pi, rel=1e-6)


def test_disc_off_centre_p3(disc):
    assert kernel_diag(disc, 3, 0.5).K == pytest.approx(1 / (np.pi * 0.5625), rel=5e-3)


def test_punctured_leading_order(punctured):
    # only the leading term 1/(2 pi |z|) is known in closed form; the next
    # correction is O(|z|) relative
    K = kernel_diag(punctured, 1, 0.05).K
    assert K == pytest.approx(1 / (2 * np.pi * 0.05), rel=0.05)


def test_kernel_report_invariants(annulus):
    rep = kernel_diag(annulus, 1.5, 0.7j)
    assert rep.K == pytest.approx(rep.m ** (-1.5), rel=1e-12)
    assert rep.K >= 1 / annulus.area - 1e-9
    assert rep.converged


def test_monotone_in_N(annulus):
    values = [kernel_diag(annulus, 3, 0.6 + 0.2j, N).K for N in (4, 8, 12, 16)]
    assert all(b >= a * (1 - 1e-10) for a, b in zip(values, values[1:]))


def test_two_point_error_estimate(disc):
    rep = kernel_diag(disc, 2, 0.3, 8, estimate_error=True)
    assert rep.delta_2N is not None and rep.delta_2N >= -1e-12


def test_smaller_disc_has_larger_kernel():
    small, big = Disc(0.9), Disc(1.0)
    for z in (0.0, 0.3, 0.5j):
        closed_small = disc_diag_closed(2, z / 0.9) / 0.81
        assert closed_small >= disc_diag_closed(2, z)
        assert kernel_diag(small, 3, z).K >= kernel_diag(big, 3, z).K


@pytest.mark.parametrize("zeta", [0.5, 0.2 - 0.6j, -0.7j])
def test_offdiag_at_centre_p4(disc, zeta):
    assert kernel_offdiag(disc, 4, zeta, 0) == pytest.approx(1 / np.pi, abs=1e-8)


def test_offdiag_example(disc):
    value = kernel_offdiag(disc, 2, 0.6, 0.3)
    assert value == pytest.approx(1 / (np.pi * 0.82**2), rel=1e-6)
    assert value == pytest.approx(disc_kernel_closed(2, 0.6, 0.3), rel=1e-6)


def test_offdiag_hermitian_p2(annulus):
    a, b = 0.6 + 0.3j, -0.2 - 0.7j
    assert kernel_offdiag(annulus, 2, a, b) == pytest.approx(np.conj(kernel_offdiag(annulus, 2, b, a)), abs=1e-8)


def test_geometry_errors(disc, annulus, punctured):
    with pytest.raises(GeometryError):
        kernel_diag(disc, 2, 1.0)
    with pytest.raises(GeometryError):
        kernel_diag(annulus, 2, 0.0)
    with pytest.raises(GeometryError):
        kernel_diag(punctured, 2, 0.0)
    with pytest.raises(GeometryError):
        kernel_offdiag(disc, 2, 1.5, 0.0)


def test_derivative_identity_disc(disc):
    lhs, rhs, res = derivative_identity_residual(disc, 2, 0.4, h=1e-4)
    exact = 4 * 0.4 / (np.pi * (1 - 0.16) ** 3)
    assert lhs[0] == pytest.approx(exact, rel=1e-4)
    assert rhs[0] == pytest.approx(exact, rel=1e-4)
    assert np.max(np.abs(res)) <= 1e-3 * exact


def test_derivative_identity_centre_p3(disc):
    lhs, rhs, res = derivative_identity_residual(disc, 3, 0)
    assert np.max(np.abs(lhs)) < 1e-6 and np.max(np.abs(rhs)) < 1e-6


def test_derivative_identity_annulus(annulus):
    lhs, _, res = derivative_identity_residual(annulus, 2, 0.7)
    assert np.max(np.abs(res)) <= 1e-3 * max(1, np.max(np.abs(lhs)))


def test_step_too_small_detected(disc):
    with pytest.raises(StepSizeError):
        derivative_identity_residual(disc, 3, 0.4, h=1e-13)


def test_derivative_needs_p_above_one(disc):
    with pytest.raises(ParameterError):
        derivative_identity_residual(disc, 1, 0.2)


def test_metric_disc_p2(disc):
    assert metric(disc, 2, 0, 1).B == pytest.approx(np.sqrt(2), rel=1e-8)
    assert metric(disc, 2, 0, 2).B == pytest.approx(2 * np.sqrt(2), rel=1e-8)


def test_metric_rejects_zero_direction(disc):
    with pytest.raises(ParameterError):
        metric(disc, 2, 0.1, 0)


def test_metric_p4_perturbation_oracle(disc, rng):
    rep = metric(disc, 4, 0, 1)
    assert rep.B == pytest.approx(np.pi**0.25 / rep.m_X, rel=1e-6)
    s = setup(disc, 4)
    C = np.vstack([s.basis.evaluate([0]), s.basis.derivative([0])])
    prob = LpProblem(4, s.grid.weights, s.B, C, [0.0, 1.0])
    c = rep.solution.coefficients
    best = prob.objective(c)
    # directions in the null space of the constraints keep feasibility
    _, _, vh = np.linalg.svd(C)
    null = vh[2:].conj().T
    for _ in range(2000):
        t = 10.0 ** rng.uniform(-6, -1)
        d = null @ (rng.standard_normal(null.shape[1]) + 1j * rng.standard_normal(null.shape[1]))
        assert prob.objective(c + t * d / np.linalg.norm(d)) >= best * (1 - 1e-12)


def test_levi_disc(disc):
    assert levi_log_kernel(disc, 2, 0, 1) == pytest.approx(2.0, abs=1e-3)
    assert levi_log_kernel(disc, 3, 0.2, 1) == pytest.approx(2 / 0.96**2, abs=5e-3)


def test_levi_punctured_p1_is_finite(punctured):
    # no inequality is claimed below p = 2; the value is only recorded
    assert np.isfinite(levi_log_kernel(punctured, 1, 0.3, 1))


def test_hsc_disc_centre(disc):
    lhs, rhs, ok, det = hsc_testdisc_inequality(disc, 2, 0, 1)
    # the affine slice log B^2 = log 2 - 2 log(1 - |t|^2) has Laplacian 8 at 0,
    # so lhs = -8 / (4 B^2) = -1 with B^2 = 2
    assert lhs == pytest.approx(-1.0, abs=1e-4)
    assert rhs == pytest.approx(2.0, abs=1e-4)
    assert ok
    assert det["levi"] >= det["B"] ** 2 * (1 - 5e-3)


def test_hsc_disc_p3(disc):
    assert hsc_testdisc_inequality(disc, 3, 0.1, 1)[2]


def test_hsc_annulus(annulus):
    lhs, rhs, ok, det = hsc_testdisc_inequality(annulus, 2, 0.7, 1)
    assert ok and det["levi"] >= det["B"] ** 2 * (1 - 5e-3)


def test_hsc_requires_p2(disc):
    with pytest.raises(ParameterError):
        hsc_testdisc_inequality(disc, 1.5, 0)


def test_transform_invariance():
    assert abs(transform_invariance_residual(2, 0.2, 0.3)) <= 1e-6
    assert abs(transform_invariance_residual(3, 0.1j, 0.5)) <= 1e-4
    assert transform_invariance_residual(3, 0.4 - 0.1j, 0) == 0.0
    with pytest.raises(ParameterError):
        transform_invariance_residual(2, 0.1, 1.0)


@settings(max_examples=25, deadline=None)
@given(st.complex_numbers(max_magnitude=0.9), st.complex_numbers(max_magnitude=0.9))
def test_mobius_maps_disc_to_disc(a, z):
    w, dw = mobius(a, z)
    assert abs(w) < 1 + 1e-12
    # |F'(z)| (1 - |z|^2) = 1 - |F(z)|^2
    assert abs(dw) * (1 - abs(z) ** 2) == pytest.approx(1 - abs(w) ** 2, abs=1e-12)


def test_reproducing_examples(disc, annulus, rng):
    def unit(rep):
        n = len(rep.solution.coefficients)
        c = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        return c / np.linalg.norm(c)

    rep = kernel_diag(disc, 2, 0.3)
    assert abs(reproducing_residual(rep, unit(rep))) < 1e-8
    for p in (1.5, 3):
        rep = kernel_diag(annulus, p, 0.7)
        assert abs(reproducing_residual(rep, unit(rep))) < 1e-3


@settings(max_examples=10, deadline=None)
@given(st.floats(0.0, 0.7), st.floats(0, 2 * np.pi))
def test_disc_kernel_matches_closed_form(r, t):
    z = r * np.exp(1j * t)
    assert kernel_diag(UnitDisc(), 2, z).K == pytest.approx(disc_diag_closed(2, z), rel=1e-4)
