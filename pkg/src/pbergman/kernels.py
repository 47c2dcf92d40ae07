"""p-Bergman kernels, the p-Bergman metric and curvature quantities.

Everything here is obtained from the constrained minimizers of
:mod:`pbergman.lp_solver`:

* ``K_p(z) = m_p(z)^-p`` where ``m_p(z)`` is the least L^p norm of a
  holomorphic ``f`` with ``f(z) = 1``;
* ``K_p(., z) = m_p(., z) K_p(z)`` with ``m_p(., z)`` that minimizer;
* ``B_p(z; X) = K_p(z)^(-1/p) / m_p(z; X)`` where ``m_p(z; X)`` is the
  least norm under ``f(z) = 0``, ``X f'(z) = 1``.

Second derivatives (the generalized Levi form of ``log K_p``) use circle
averages, which is how the generalized complex Laplacian is defined.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .basis import DEFAULT_DEGREE, Basis, k_cut, make_basis, orthonormalize
from .domains import PUNCTURED_DISC, Domain, QuadGrid, UnitDisc, build_grid
from .errors import ParameterError, StepSizeError
from .lp_solver import LpProblem, LpSolution, SolverOptions, solve

DEFAULT_NR = 32
DEFAULT_NTHETA = 64
CIRCLE_ANGLES = 64
CIRCLE_RADII = (0.08, 0.04, 0.02)


@dataclass(frozen=True, eq=False)
class Setup:
    """Grid, orthonormal basis and evaluation matrix shared by many solves."""

    domain: Domain
    grid: QuadGrid
    basis: Basis
    B: np.ndarray

    @property
    def N(self) -> int:
        return self.basis.max_degree


def grid_for(domain: Domain, p: float, n_r: int = DEFAULT_NR, n_theta: int = DEFAULT_NTHETA) -> QuadGrid:
    """Default quadrature for L^p integrals on ``domain``.

    On the punctured disc with ``p < 2`` the extremal functions carry a
    pole of order ``k_p`` so ``|f|^p ~ r^(-p k_p)``; the innermost radial
    panel then uses the matching Gauss-Jacobi rule.
    """
    if domain.kind == PUNCTURED_DISC and p < 2:
        return build_grid(domain, n_r, n_theta, singular_power=p * k_cut(p))
    return build_grid(domain, n_r, n_theta)


@lru_cache(maxsize=64)
def _cached_setup(domain, p_key, N, n_r, n_theta):
    p = 2.0 if p_key is None else p_key
    grid = grid_for(domain, p, n_r, n_theta)
    basis = orthonormalize(make_basis(domain, p, N), grid)
    return Setup(domain, grid, basis, basis.evaluate(grid.nodes))


def setup(domain: Domain, p: float, N: int = DEFAULT_DEGREE, n_r: int = DEFAULT_NR, n_theta: int = DEFAULT_NTHETA) -> Setup:
    # only the punctured disc below p=2 depends on p (Laurent depth and quadrature)
    p_key = float(p) if (domain.kind == PUNCTURED_DISC and p < 2) else None
    return _cached_setup(domain, p_key, int(N), int(n_r), int(n_theta))


@dataclass
class KernelReport:
    z: complex
    p: float
    K: float
    m: float
    N: int
    solution: LpSolution = field(repr=False)
    basis: Basis = field(repr=False)
    grid: QuadGrid | None = field(default=None, repr=False)
    delta_2N: float | None = None

    @property
    def converged(self) -> bool:
        return self.solution.converged

    def minimizer(self, zeta):
        """``m_p(zeta, z)``, the normalized extremal function."""
        return self.basis.function(self.solution.coefficients, zeta)

    def offdiag(self, zeta):
        """``K_p(zeta, z) = m_p(zeta, z) K_p(z)``."""
        return self.minimizer(zeta) * self.K

    def offdiag_derivative(self, zeta):
        """Complex derivative of ``K_p(., z)`` in its first argument."""
        return (self.basis.derivative(zeta) @ self.solution.coefficients) * self.K


@dataclass
class MetricReport:
    z: complex
    X: complex
    p: float
    m_X: float
    M: float
    B: float
    K: float
    levi: float | None = None
    solution: LpSolution = field(default=None, repr=False)


def _kernel_problem(st: Setup, p: float, z: complex) -> LpProblem:
    return LpProblem(p, st.grid.weights, st.B, st.basis.evaluate([z]), [1.0], allow_nonconvex=p < 1)


def kernel_diag(
    domain: Domain,
    p: float,
    z,
    N: int = DEFAULT_DEGREE,
    *,
    n_r: int = DEFAULT_NR,
    n_theta: int = DEFAULT_NTHETA,
    opts: SolverOptions | None = None,
    x0=None,
    estimate_error: bool = False,
) -> KernelReport:
    """Diagonal p-Bergman kernel ``K_p(z)`` over the degree-``N`` span.

    The value is nondecreasing in ``N`` (nested feasible sets).  With
    ``estimate_error`` the same solve at ``2N`` is done and the difference
    stored in ``delta_2N``.
    """
    z = domain.check_point(z)
    if not p > 0:
        raise ParameterError(f"p must be positive, got {p}")
    st = setup(domain, p, N, n_r, n_theta)
    sol = solve(_kernel_problem(st, p, z), opts, x0=x0)
    rep = KernelReport(z=z, p=p, K=1.0 / sol.objective, m=sol.norm, N=st.N, solution=sol, basis=st.basis, grid=st.grid)
    if estimate_error:
        rep.delta_2N = kernel_diag(domain, p, z, 2 * st.N, n_r=n_r, n_theta=n_theta, opts=opts).K - rep.K
    return rep


def kernel_offdiag(domain: Domain, p: float, zeta, z, N: int = DEFAULT_DEGREE, **kw) -> complex:
    """Off-diagonal kernel ``K_p(zeta, z)`` read off the minimizer for ``z``."""
    zeta = domain.check_point(zeta)
    rep = kernel_diag(domain, p, z, N, **kw)
    return complex(rep.offdiag([zeta])[0])


def reproducing_residual(report: KernelReport, testf) -> complex:
    """``f(z) - int |m_p(., z)|^(p-2) conj(K_p(., z)) f`` for ``f`` in the span.

    ``testf`` holds coefficients in ``report.basis``.  For ``p < 2`` the
    factor ``|m_p|^(p-2)`` is clamped exactly as in the solver's node
    weights; ``report.solution.floored_nodes`` says how many nodes that hit.
    """
    grid = report.grid
    m_nodes = report.minimizer(grid.nodes)
    a = report.solution.regularized_modulus(m_nodes) if report.p < 2 else np.abs(m_nodes)
    f_nodes = report.basis.function(testf, grid.nodes)
    f_z = complex(report.basis.function(testf, [report.z])[0])
    integral = np.dot(grid.weights * a ** (report.p - 2), np.conj(m_nodes * report.K) * f_nodes)
    return f_z - complex(integral)


def _kernel_values(domain, p, points, N, n_r, n_theta, x0, opts=None):
    """``K_p`` at several points, warm-started from ``x0``."""
    opts = opts or SolverOptions(value_only=True)
    out = np.empty(len(points))
    for i, w in enumerate(points):
        out[i] = kernel_diag(domain, p, w, N, n_r=n_r, n_theta=n_theta, x0=x0, opts=opts).K
    return out


def derivative_identity_residual(
    domain: Domain,
    p: float,
    z,
    h: float = 1e-4,
    N: int = DEFAULT_DEGREE,
    *,
    n_r: int = DEFAULT_NR,
    n_theta: int = DEFAULT_NTHETA,
    richardson_tol: float = 1e-4,
):
    """Compare the gradient of ``K_p`` with ``p Re d/dx_j K_p(., z)|_z``.

    The left side is a central difference of :func:`kernel_diag`,
    Richardson-extrapolated over steps ``2h, h, h/2``; the right side
    differentiates the computed off-diagonal kernel analytically.

    Returns
    -------
    lhs, rhs, residual : ndarray of shape (2,)
        Components along the real and imaginary axes.

    Raises
    ------
    StepSizeError
        If the two Richardson estimates disagree by more than
        ``richardson_tol`` relative to ``max(1, |gradient|)``.
    """
    if not p > 1:
        raise ParameterError("the derivative identity is checked for p > 1")
    centre = kernel_diag(domain, p, z, N, n_r=n_r, n_theta=n_theta)
    z = centre.z
    for s in (2 * h, h / 2):
        domain.check_point(z + s)
        domain.check_point(z + 1j * s)
        domain.check_point(z - s)
        domain.check_point(z - 1j * s)
    x0 = centre.solution.coefficients
    lhs = np.empty(2)
    for j, direction in enumerate((1.0, 1j)):
        diffs = {}
        for s in (2 * h, h, h / 2):
            kp, km = _kernel_values(domain, p, [z + s * direction, z - s * direction], N, n_r, n_theta, x0)
            diffs[s] = (kp - km) / (2 * s)
        r_coarse = (4 * diffs[h] - diffs[2 * h]) / 3
        r_fine = (4 * diffs[h / 2] - diffs[h]) / 3
        scale = max(1.0, abs(r_fine))
        if abs(r_fine - r_coarse) > richardson_tol * scale:
            raise StepSizeError(
                f"Richardson estimates disagree ({r_coarse:.6g} vs {r_fine:.6g}); step h={h:g} is unsuitable"
            )
        lhs[j] = (16 * r_fine - r_coarse) / 15
    dK = complex(centre.offdiag_derivative([z])[0])
    # d/dy of a holomorphic function is i d/dz
    rhs = np.array([p * dK.real, p * (1j * dK).real])
    return lhs, rhs, lhs - rhs


def metric(
    domain: Domain,
    p: float,
    z,
    X: complex = 1.0,
    N: int = DEFAULT_DEGREE,
    *,
    n_r: int = DEFAULT_NR,
    n_theta: int = DEFAULT_NTHETA,
    opts: SolverOptions | None = None,
    x0=None,
    K: float | None = None,
) -> MetricReport:
    """p-Bergman metric ``B_p(z; X)`` from the two-constraint problem."""
    z = domain.check_point(z)
    X = complex(X)
    if X == 0:
        raise ParameterError("direction X must be nonzero")
    st = setup(domain, p, N, n_r, n_theta)
    C = np.vstack([st.basis.evaluate([z]), X * st.basis.derivative([z])])
    sol = solve(LpProblem(p, st.grid.weights, st.B, C, [0.0, 1.0], allow_nonconvex=p < 1), opts, x0=x0)
    if K is None:
        K = kernel_diag(domain, p, z, N, n_r=n_r, n_theta=n_theta, opts=opts).K
    m_X = sol.norm
    return MetricReport(z=z, X=X, p=p, m_X=m_X, M=1.0 / m_X, B=K ** (-1.0 / p) / m_X, K=K, solution=sol)


def box_from_circles(u0: float, averages, radii) -> float:
    """Richardson-extrapolated ``lim (avg_r u - u0) / r^2``.

    ``radii`` must shrink by a constant ratio; the estimates behave like
    ``L + c1 r^2 + c2 r^4 + ...`` and each level cancels one term.
    """
    est = [(a - u0) / r**2 for a, r in zip(averages, radii)]
    q = (radii[0] / radii[1]) ** 2
    level = 1
    while len(est) > 1:
        f = q**level
        est = [(f * est[i + 1] - est[i]) / (f - 1) for i in range(len(est) - 1)]
        level += 1
    return float(est[0])


def _circle_points(domain, z, X, M, factors):
    delta = float(domain.boundary_distance(z))
    radii = [f * delta / abs(X) for f in factors]
    theta = 2 * np.pi * np.arange(M) / M
    return radii, [z + r * np.exp(1j * theta) * X for r in radii]


def levi_log_kernel(
    domain: Domain,
    p: float,
    z,
    X: complex = 1.0,
    N: int = DEFAULT_DEGREE,
    *,
    n_r: int = DEFAULT_NR,
    n_theta: int = DEFAULT_NTHETA,
    M: int = CIRCLE_ANGLES,
    factors=CIRCLE_RADII,
    return_samples: bool = False,
):
    """Generalized Levi form ``i d dbar log K_p(z; X)``.

    Circle averages of ``log K_p(z + t X)`` over ``|t| = r`` with ``M``
    angles and radii ``factors * dist(z, boundary) / |X|``, extrapolated
    to ``r -> 0``.
    """
    z = domain.check_point(z)
    centre = kernel_diag(domain, p, z, N, n_r=n_r, n_theta=n_theta)
    radii, circles = _circle_points(domain, z, complex(X), M, factors)
    x0 = centre.solution.coefficients
    logs = [np.log(_kernel_values(domain, p, pts, N, n_r, n_theta, x0)) for pts in circles]
    L = box_from_circles(np.log(centre.K), [v.mean() for v in logs], radii)
    if return_samples:
        return L, centre, radii, circles, logs
    return L


def hsc_testdisc_inequality(
    domain: Domain,
    p: float,
    z,
    X: complex = 1.0,
    N: int = DEFAULT_DEGREE,
    *,
    n_r: int = DEFAULT_NR,
    n_theta: int = DEFAULT_NTHETA,
    M: int = CIRCLE_ANGLES,
    factors=CIRCLE_RADII,
):
    """Curvature bound along the affine disc ``t -> z + t X``.

    ``lhs = Box log B_p(z + tX; X)^2 |_(t=0) / (-B_p(z; X)^2)`` is one
    candidate in the supremum defining the holomorphic sectional curvature,
    so it must not exceed
    ``rhs = (2/p) L / B_p(z; X)^2 + p/2`` with ``L`` the Levi form.

    Returns ``(lhs, rhs, passed, details)``.
    """
    if p < 2:
        raise ParameterError("the curvature bound is stated for p >= 2")
    X = complex(X)
    L, centre, radii, circles, logK = levi_log_kernel(
        domain, p, z, X, N, n_r=n_r, n_theta=n_theta, M=M, factors=factors, return_samples=True
    )
    z = centre.z
    met0 = metric(domain, p, z, X, N, n_r=n_r, n_theta=n_theta, K=centre.K)
    x0 = met0.solution.coefficients
    # log B^2 = -(2/p) log K + 2 log M_p, so only the M_p part needs new solves
    fast = SolverOptions(value_only=True)
    avg_logB2 = []
    for pts, lk in zip(circles, logK):
        logM = np.array(
            [np.log(metric(domain, p, w, X, N, n_r=n_r, n_theta=n_theta, x0=x0, K=1.0, opts=fast).M) for w in pts]
        )
        avg_logB2.append(np.mean(-(2.0 / p) * lk + 2.0 * logM))
    box = box_from_circles(2.0 * np.log(met0.B), avg_logB2, radii)
    B2 = met0.B**2
    lhs = box / (-B2)
    rhs = (2.0 / p) * L / B2 + p / 2.0
    return lhs, rhs, bool(lhs <= rhs), {"levi": L, "B": met0.B, "box_log_B2": box}


def mobius(a: complex, z):
    """Disc automorphism ``(z - a) / (1 - conj(a) z)`` and its derivative."""
    a = complex(a)
    w = (z - a) / (1 - np.conj(a) * z)
    dw = (1 - abs(a) ** 2) / (1 - np.conj(a) * z) ** 2
    return w, dw


def transform_invariance_residual(p: float, z, a: complex, N: int = DEFAULT_DEGREE, **kw) -> float:
    """``K_p(z) - K_p(F_a(z)) |F_a'(z)|^2`` on the unit disc."""
    if not abs(a) < 1:
        raise ParameterError("Mobius parameter must satisfy |a| < 1")
    D = UnitDisc()
    w, dw = mobius(a, complex(z))
    return kernel_diag(D, p, z, N, **kw).K - kernel_diag(D, p, w, N, **kw).K * abs(dw) ** 2
