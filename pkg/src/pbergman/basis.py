"""Truncated holomorphic bases adapted to the model domains.

A basis is a list of integer powers of ``z`` together with a coefficient
matrix ``transform``: element ``j`` is ``sum_k transform[k, j] z**powers[k]``.
Raw bases use the identity transform; :func:`orthonormalize` replaces it
with the inverse Cholesky factor of the discrete Gram matrix.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np
import scipy.linalg as sla

from .domains import ANNULUS, PUNCTURED_DISC, Domain, QuadGrid
from .errors import IllConditionedError, ParameterError

MONOMIAL = "Monomial"
LAURENT = "Laurent"

DEFAULT_DEGREE = 24
MAX_GRAM_CONDITION = 1e12


def k_cut(p: float) -> int:
    """Largest positive integer strictly below ``2/p``.

    This is the deepest pole order ``z**-k`` that is ``p``-integrable near
    the origin, hence the Laurent depth of A^p on the punctured disc.
    """
    if not 0 < p < 2:
        raise ParameterError(f"k_cut needs 0 < p < 2, got {p}")
    ratio = 2.0 / p
    k = int(np.ceil(ratio)) - 1
    # guard against 2/p landing a hair above an integer through rounding
    if abs(ratio - round(ratio)) < 1e-12:
        k = int(round(ratio)) - 1
    return max(k, 1)


@dataclass(frozen=True, eq=False)
class Basis:
    kind: str
    powers: np.ndarray
    transform: np.ndarray
    domain: Domain | None = None

    def __len__(self):
        return len(self.powers)

    @property
    def min_power(self) -> int:
        return int(self.powers.min())

    @property
    def max_degree(self) -> int:
        return int(self.powers.max())

    def monomials(self, z) -> np.ndarray:
        z = np.atleast_1d(np.asarray(z, dtype=complex))
        return z[:, None] ** self.powers[None, :]

    def monomial_derivatives(self, z) -> np.ndarray:
        z = np.atleast_1d(np.asarray(z, dtype=complex))
        k = self.powers[None, :]
        out = np.zeros((len(z), k.shape[1]), dtype=complex)
        nz = k != 0
        out[:, nz[0]] = k[nz][None, :] * z[:, None] ** (k[nz][None, :] - 1)
        return out

    def evaluate(self, z) -> np.ndarray:
        """Matrix ``E[i, j]`` = value of element ``j`` at ``z[i]``."""
        return self.monomials(z) @ self.transform

    def derivative(self, z) -> np.ndarray:
        return self.monomial_derivatives(z) @ self.transform

    def function(self, coef, z):
        """Evaluate the span element with coefficients ``coef`` at ``z``."""
        return self.evaluate(z) @ coef

    def monomial_coefficients(self, coef) -> np.ndarray:
        """Coefficients of a span element in the raw power basis."""
        return self.transform @ coef


def make_basis(domain: Domain, p: float = 2.0, N: int = DEFAULT_DEGREE, K: int | None = None) -> Basis:
    """Power basis for ``domain``.

    Discs get ``z^0..z^N``.  The punctured disc gets ``z^-k..z^N`` with
    ``k = k_cut(p)`` for ``p < 2`` (for ``p >= 2`` the puncture is
    removable and the disc monomials are returned).  The annulus gets
    ``z^-K..z^N`` with ``K = N`` unless given.
    """
    if int(N) != N or N < 2:
        raise ParameterError(f"basis degree must be an integer >= 2, got {N}")
    N = int(N)
    if domain.kind == PUNCTURED_DISC and p < 2:
        lo = -(k_cut(p) if K is None else int(K))
        kind = LAURENT
    elif domain.kind == ANNULUS:
        lo = -(N if K is None else int(K))
        kind = LAURENT
    else:
        lo = 0
        kind = MONOMIAL
    powers = np.arange(lo, N + 1)
    return Basis(kind=kind, powers=powers, transform=np.eye(len(powers), dtype=complex), domain=domain)


def gram(basis: Basis, grid: QuadGrid, weights=None) -> np.ndarray:
    """Discrete Gram matrix ``G[j, k] = sum_i w_i conj(b_j) b_k``."""
    w = grid.weights if weights is None else weights
    E = basis.evaluate(grid.nodes)
    return (E.conj().T * w) @ E


def orthonormalize(basis: Basis, grid: QuadGrid, weights=None) -> Basis:
    """Orthonormalize ``basis`` in the discrete L^2 inner product of ``grid``.

    ``weights`` overrides the grid weights (for weighted L^2 spaces).
    """
    G = gram(basis, grid, weights)
    G = (G + G.conj().T) / 2
    # symmetric diagonal scaling keeps the condition estimate meaningful
    d = np.sqrt(np.real(np.diag(G)))
    if not np.all(d > 0) or not np.all(np.isfinite(d)):
        raise IllConditionedError("basis has a zero or non-finite element on this grid")
    S = G / np.outer(d, d)
    cond = np.linalg.cond(S)
    if not cond < MAX_GRAM_CONDITION:
        raise IllConditionedError(f"Gram condition number {cond:.3g} exceeds {MAX_GRAM_CONDITION:g}; reduce N")
    L = sla.cholesky(S, lower=True)
    # element j of the new basis: sum_k T[k, j] b_k with T = D^-1 L^-H
    T = sla.solve_triangular(L.conj().T, np.eye(len(d)), lower=False) / d[:, None]
    return replace(basis, transform=basis.transform @ T)
