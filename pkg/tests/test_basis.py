import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pbergman.basis import LAURENT, MONOMIAL, Basis, gram, k_cut, make_basis, orthonormalize
from pbergman.domains import Annulus, PuncturedDisc, UnitDisc, build_grid
from pbergman.errors import IllConditionedError, ParameterError


@pytest.mark.parametrize("p, k", [(1, 1), (2 / 3, 2), (1.5, 1), (0.5, 3), (0.4, 4), (1.99, 1)])
def test_k_cut(p, k):
    assert k_cut(p) == k


@pytest.mark.parametrize("p", [2, 3, 0, -1])
def test_k_cut_domain(p):
    with pytest.raises(ParameterError):
        k_cut(p)


@settings(max_examples=50, deadline=None)
@given(st.floats(0.05, 1.999))
def test_k_cut_definition(p):
    k = k_cut(p)
    assert k < 2 / p + 1e-12 and k + 1 >= 2 / p - 1e-12


def test_make_basis_examples():
    b = make_basis(UnitDisc(), 2, 10)
    assert b.kind == MONOMIAL and len(b) == 11
    b = make_basis(PuncturedDisc(), 1, 10)
    assert b.kind == LAURENT and list(b.powers) == list(range(-1, 11))
    b = make_basis(Annulus(0.5), 2, 5)
    assert list(b.powers) == list(range(-5, 6))
    # the puncture is removable from p = 2 on
    assert make_basis(PuncturedDisc(), 2, 10).kind == MONOMIAL
    with pytest.raises(ParameterError):
        make_basis(UnitDisc(), 2, 1)


def test_orthonormal_disc_monomials():
    g = build_grid(UnitDisc(), 32, 64)
    b = orthonormalize(make_basis(UnitDisc(), 2, 12), g)
    expected = np.sqrt((np.arange(13) + 1) / np.pi)
    assert np.allclose(np.abs(np.diag(b.transform)), expected, atol=1e-10)
    assert np.allclose(gram(b, g), np.eye(13), atol=1e-10)


def test_annulus_gram_is_diagonal():
    g = build_grid(Annulus(0.5), 32, 64)
    G = gram(make_basis(Annulus(0.5), 2, 8), g)
    off = G - np.diag(np.diag(G))
    assert np.max(np.abs(off)) <= 1e-12


def test_reorthonormalizing_is_identity():
    g = build_grid(Annulus(0.5), 32, 64)
    b = orthonormalize(make_basis(Annulus(0.5), 2, 8), g)
    b2 = orthonormalize(b, g)
    assert np.allclose(b2.transform, b.transform, atol=1e-12)


def test_ill_conditioned_basis_rejected():
    # powers far beyond what the grid resolves make the Gram matrix singular
    g = build_grid(UnitDisc(), 4, 8)
    with pytest.raises(IllConditionedError):
        orthonormalize(make_basis(UnitDisc(), 2, 30), g)


def test_nesting(rng):
    g = build_grid(UnitDisc(), 32, 64)
    small = make_basis(UnitDisc(), 2, 6)
    big = make_basis(UnitDisc(), 2, 7)
    c = rng.standard_normal(7)
    z = g.nodes[:20]
    assert np.allclose(small.function(c, z), big.function(np.append(c, 0), z))


def test_derivative_matches_difference():
    b = make_basis(Annulus(0.5), 2, 4)
    z, h = 0.7 + 0.1j, 1e-6
    fd = (b.evaluate([z + h]) - b.evaluate([z - h])) / (2 * h)
    assert np.allclose(b.derivative([z]), fd, atol=1e-6)
    # the constant term is differentiated to zero even at the origin
    assert np.all(np.isfinite(make_basis(UnitDisc(), 2, 4).derivative([0])))


def test_excluded_pole_diverges():
    # |z|^-2 is not integrable near 0, so its discrete 1-norm grows as the grid refines
    norms = []
    for n_r in (8, 16, 32, 64):
        g = build_grid(PuncturedDisc(), n_r, 16)
        norms.append(np.dot(g.weights, np.abs(g.nodes) ** -2))
    assert all(b > a + 0.5 for a, b in zip(norms, norms[1:]))
    # the admitted pole z^-1 converges (to 2 pi)
    g = build_grid(PuncturedDisc(), 32, 16, singular_power=1.0)
    assert np.dot(g.weights, np.abs(g.nodes) ** -1) == pytest.approx(2 * np.pi, rel=1e-10)


def test_rotational_orthogonality_laurent():
    g = build_grid(PuncturedDisc(), 32, 64, singular_power=4 / 3)
    b = Basis(LAURENT, np.arange(-2, 9), np.eye(11, dtype=complex), PuncturedDisc())
    G = gram(b, g, g.weights * np.abs(g.nodes) ** (4 / 3))
    assert np.max(np.abs(G - np.diag(np.diag(G)))) <= 1e-12
