"""Weighted L^2 Bergman kernels and their link to the p-Bergman kernel.

For a weight ``phi`` the space of holomorphic ``f`` with
``int |f|^2 exp(-phi) < inf`` has a reproducing kernel ``K_phi``.  Over a
finite span it is ``K_phi(zeta, z) = b(zeta) G^-1 b(z)^H`` with ``G`` the
weighted Gram matrix.  Two weights matter here:

* ``phi = (2 - p) log|m_p(., z)|`` reproduces the off-diagonal
  p-Bergman kernel ``K_p(., z)`` for ``1 <= p <= 2``;
* ``phi = log K_p`` gives the Narasimhan-Simha kernel ``K_{2,p}`` whose
  ``log`` is the potential of the metric ``ds_p^2``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .basis import LAURENT, Basis, k_cut, make_basis, orthonormalize
from .domains import PUNCTURED_DISC, Domain, QuadGrid, UnitDisc, build_grid
from .errors import ParameterError
from .kernels import CIRCLE_RADII, DEFAULT_NR, DEFAULT_NTHETA, box_from_circles, kernel_diag, setup

MODULUS_FLOOR = 1e-12


@dataclass(frozen=True, eq=False)
class WeightedKernel:
    """Reproducing kernel of a weighted L^2 space over a finite span.

    ``basis`` is orthonormal for the weighted inner product, which is the
    Cholesky factorization of the weighted Gram matrix in disguise.
    """

    basis: Basis
    grid: QuadGrid
    density: np.ndarray

    def __call__(self, zeta, z) -> np.ndarray:
        """Matrix ``K[i, j] = K_phi(zeta[i], z[j])``."""
        return self.basis.evaluate(zeta) @ self.basis.evaluate(z).conj().T

    def diag(self, z) -> np.ndarray:
        E = self.basis.evaluate(z)
        return np.real(np.sum(np.abs(E) ** 2, axis=1))

    def inner(self, f_values, g_values) -> complex:
        """Weighted inner product of two functions sampled at the nodes."""
        return np.dot(self.grid.weights * self.density, f_values * np.conj(g_values))

    def reproduce(self, f_values, z) -> complex:
        """``sum_i w_i exp(-phi_i) f(x_i) conj(K_phi(x_i, z))``."""
        kz = self(self.grid.nodes, [z])[:, 0]
        return self.inner(f_values, kz)


def weighted_kernel(domain: Domain, basis: Basis, phi, grid: QuadGrid | None = None) -> WeightedKernel:
    """Weighted Bergman kernel for the weight ``exp(-phi)``.

    ``phi`` is either a callable evaluated at the grid nodes or an array
    of node values.

    Raises
    ------
    IllConditionedError
        If the weighted Gram matrix is indefinite or too ill-conditioned.
    """
    if grid is None:
        grid = build_grid(domain)
    phi_values = phi(grid.nodes) if callable(phi) else np.asarray(phi, dtype=float)
    if phi_values.shape != grid.weights.shape:
        raise ParameterError("phi must provide one value per grid node")
    density = np.exp(-phi_values)
    if not np.all(np.isfinite(density)):
        raise ParameterError("exp(-phi) is not finite at every node")
    return WeightedKernel(orthonormalize(basis, grid, grid.weights * density), grid, density)


def thm2_residual(
    domain: Domain,
    p: float,
    z,
    N: int = 24,
    *,
    n_r: int = DEFAULT_NR,
    n_theta: int = DEFAULT_NTHETA,
    return_parts: bool = False,
):
    """Sup over grid nodes of ``|K_p(., z) - K_{2,p,z}(., z)| / K_p(z)``.

    ``K_{2,p,z}`` is the weighted kernel for ``phi = (2 - p) log|m_p(., z)|``,
    i.e. density ``|m_p(., z)|^(p-2)``.  ``|m_p|`` is regularized exactly as
    in the solver's last reweighting (smoothing at p = 1, relative floor
    below p = 2) and never below ``MODULUS_FLOOR``.
    """
    if not 1 <= p <= 2:
        raise ParameterError(f"the weighted identity is stated for 1 <= p <= 2, got {p}")
    rep = kernel_diag(domain, p, z, N, n_r=n_r, n_theta=n_theta)
    st = setup(domain, p, N, n_r, n_theta)
    m_nodes = np.maximum(rep.solution.regularized_modulus(rep.minimizer(st.grid.nodes)), MODULUS_FLOOR)
    wk = weighted_kernel(domain, st.basis, (2.0 - p) * np.log(m_nodes), st.grid)
    kp = rep.offdiag(st.grid.nodes)
    k2 = wk(st.grid.nodes, [rep.z])[:, 0]
    res = float(np.max(np.abs(kp - k2)) / rep.K)
    if return_parts:
        return res, rep, wk
    return res


# -- Narasimhan-Simha kernel -----------------------------------------------------


def _ns_laurent_depth(domain: Domain, p: float) -> tuple[int, float]:
    """Pole depth admitted by the weight ``1/K_p`` and the kernel's decay power."""
    if domain.kind != PUNCTURED_DISC or p >= 2:
        return 0, 0.0
    a = p * k_cut(p)
    # z^-k is in the weighted space iff 2k - a < 2
    k = int(np.ceil(1 + a / 2)) - 1
    return k, a


def _interp_periodic(r_coarse, th_coarse, values, r, th):
    """Bilinear interpolation in (r, theta), periodic in theta, clamped in r."""
    n_th = len(th_coarse)
    step = 2 * np.pi / n_th
    pos = (np.mod(th - th_coarse[0], 2 * np.pi)) / step
    j0 = np.floor(pos).astype(int) % n_th
    j1 = (j0 + 1) % n_th
    s = pos - np.floor(pos)
    v0 = np.array([np.interp(r, r_coarse, values[:, j]) for j in range(n_th)])
    rows = np.arange(len(r))
    return (1 - s) * v0[j0, rows] + s * v0[j1, rows]


@dataclass
class NSKernel:
    """Weighted kernel for ``phi = log K_p`` with the data used to build it."""

    kernel: WeightedKernel
    p: float
    coarse_radii: np.ndarray
    coarse_angles: np.ndarray
    coarse_logK: np.ndarray

    def diag(self, z) -> np.ndarray:
        return self.kernel.diag(z)


def ns_kernel(
    domain: Domain,
    p: float,
    N: int = 24,
    *,
    n_r: int = DEFAULT_NR,
    n_theta: int = DEFAULT_NTHETA,
    decimation: int = 4,
) -> NSKernel:
    """``K_{2,p} = K_{Omega, log K_p}`` from ``K_p`` solved on a coarse subgrid.

    ``log K_p`` is computed at every ``decimation``-th radius and angle of
    the quadrature grid and interpolated bilinearly in ``(r, theta)`` to
    the remaining nodes.  On the punctured disc the known pole growth
    ``|z|^(-p k_p)`` is divided out before interpolating.
    """
    depth, a = _ns_laurent_depth(domain, p)
    grid = build_grid(domain, n_r, n_theta, singular_power=max(2 * depth - a, 0.0))
    radii, angles = grid.radii, grid.angles
    rc, thc = radii[decimation // 2 :: decimation], angles[::decimation]
    coarse = np.empty((len(rc), len(thc)))
    x0 = None
    for i, r in enumerate(rc):
        for j, th in enumerate(thc):
            rep = kernel_diag(domain, p, r * np.exp(1j * th), N, n_r=n_r, n_theta=n_theta, x0=x0)
            x0 = rep.solution.coefficients
            coarse[i, j] = np.log(rep.K) + a * np.log(r)
    r_nodes = np.abs(grid.nodes)
    th_nodes = np.angle(grid.nodes)
    log_k = _interp_periodic(rc, thc, coarse, r_nodes, th_nodes) - a * np.log(r_nodes)
    if depth > 0:
        basis = Basis(LAURENT, np.arange(-depth, N + 1), np.eye(N + 1 + depth, dtype=complex), domain)
    else:
        basis = make_basis(domain, 2.0, N)
    wk = weighted_kernel(domain, basis, log_k, grid)
    return NSKernel(wk, p, rc, thc, coarse - a * np.log(rc)[:, None])


def ns_metric_coeff(
    domain: Domain,
    p: float,
    z,
    N: int = 24,
    *,
    kernel: NSKernel | None = None,
    M: int = 64,
    factors=CIRCLE_RADII,
    **kw,
) -> float:
    """Coefficient of ``ds_p^2``: ``d dbar log K_{2,p}`` at ``z`` via circle averages."""
    z = domain.check_point(z)
    if kernel is None:
        kernel = ns_kernel(domain, p, N, **kw)
    delta = float(domain.boundary_distance(z))
    radii = [f * delta for f in factors]
    theta = 2 * np.pi * np.arange(M) / M
    u0 = float(np.log(kernel.diag([z])[0]))
    avgs = [float(np.mean(np.log(kernel.diag(z + r * np.exp(1j * theta))))) for r in radii]
    return box_from_circles(u0, avgs, radii)


def fit_ns_series(kernel: NSKernel, radii, terms: int = 3) -> np.ndarray:
    """Least-squares coefficients ``a_-1, a_0, ...`` of ``sum a_k |z|^(2k)``."""
    radii = np.asarray(radii, dtype=float)
    vals = kernel.diag(radii.astype(complex))
    design = np.column_stack([radii ** (2 * k) for k in range(-1, terms - 1)])
    return np.linalg.lstsq(design, vals, rcond=None)[0]


def disc_phi_kernel(p: float, N: int = 24, *, n_r: int = DEFAULT_NR, n_theta: int = DEFAULT_NTHETA) -> WeightedKernel:
    """Unit-disc kernel for ``phi = p k_p log|w|``, the weight ``|w|^(-p k_p)``.

    The integrable singularity at the origin is handled by the Gauss-Jacobi
    inner panel of the grid.
    """
    a = p * k_cut(p)
    D = UnitDisc()
    grid = build_grid(D, n_r, n_theta, singular_power=a)
    return weighted_kernel(D, make_basis(D, 2.0, N), a * np.log(np.abs(grid.nodes)), grid)
