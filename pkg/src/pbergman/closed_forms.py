"""Closed forms, bounds and asymptotics used as oracles.

Besides the explicit kernels this module holds the Hardy-space checks on
the unit disc (Carleman's inequality, the Hardy-Littlewood ratio and the
Szego kernel from boundary quadrature) and the exploratory search for the
minimum of ``K_p`` on the punctured disc.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize_scalar

from .basis import k_cut
from .domains import DISC, PUNCTURED_DISC, UNIT_DISC, Domain, PuncturedDisc, UnitDisc, boundary_grid, build_grid
from .errors import ParameterError, RangeError, UnsupportedDomainError

# -- disc ---------------------------------------------------------------------


def disc_kernel_closed(p: float, zeta, z):
    """``(1/pi) ((1 - |z|^2) / (1 - conj(z) zeta))^(4/p) (1 - |z|^2)^-2``.

    Principal branch; ``1 - conj(z) zeta`` has positive real part on the
    disc so no cut is crossed.
    """
    zeta = np.asarray(zeta, dtype=complex)
    z = np.asarray(z, dtype=complex)
    if np.any(np.abs(zeta) >= 1) or np.any(np.abs(z) >= 1):
        raise RangeError("disc closed form needs |zeta|, |z| < 1")
    s = 1.0 - np.abs(z) ** 2
    return (s / (1.0 - np.conj(z) * zeta)) ** (4.0 / p) / (np.pi * s * s)


def disc_diag_closed(p: float, z):
    """``1 / (pi (1 - |z|^2)^2)``, the same for every ``p``."""
    z = np.asarray(z, dtype=complex)
    if np.any(np.abs(z) >= 1):
        raise RangeError("disc closed form needs |z| < 1")
    return 1.0 / (np.pi * (1.0 - np.abs(z) ** 2) ** 2)


# -- punctured disc -----------------------------------------------------------


def _pk(p):
    if not 0 < p < 2:
        raise RangeError(f"punctured-disc formulas need 0 < p < 2, got {p}")
    return p * k_cut(p)


def punctured_coefficients(p: float) -> tuple[float, float]:
    """Leading and second coefficients ``(2 - a)/(2 pi)`` and ``(4 - a)/(2 pi)``, ``a = p k_p``."""
    a = _pk(p)
    return (2.0 - a) / (2 * np.pi), (4.0 - a) / (2 * np.pi)


def punctured_asym(p: float, z) -> float:
    """Two-term small-``|z|`` expansion of ``K_p`` on the punctured disc."""
    r = abs(complex(z))
    if not 0 < r < 1:
        raise RangeError("need 0 < |z| < 1")
    a = _pk(p)
    A, B = punctured_coefficients(p)
    return A / r**a + B * r ** (2.0 - a)


def punctured_bounds(p: float, z, rho: float | None = None) -> tuple[float, float]:
    """Lower and upper bounds for ``K_p(z)`` on the punctured disc.

    The upper bound holds for any ``rho`` in ``(|z|, 1)``; the default
    ``rho = sqrt(|z|)`` is a heuristic that balances the two factors.

    Raises
    ------
    RangeError
        If ``|z| >= (2 - p k_p) / (p k_p)`` (the lower bound is not
        established there) or ``rho`` is outside ``(|z|, 1)``.
    """
    r = abs(complex(z))
    if not 0 < r < 1:
        raise RangeError("need 0 < |z| < 1")
    a = _pk(p)
    if not r < (2.0 - a) / a:
        raise RangeError(f"lower bound needs |z| < {(2.0 - a) / a:.6g}")
    if rho is None:
        rho = np.sqrt(r)
    if not r < rho < 1:
        raise RangeError("rho must lie in (|z|, 1)")
    lower = (2.0 - a + a * r * r) / (2 * np.pi * r**a * (1.0 - r * r) ** 2)
    q = (r / rho) ** 2
    upper = (2.0 - a + a * q) / (2 * np.pi * r**a * (1.0 - q) ** 2)
    return float(lower), float(upper)


def weighted_disc_closed(p: float, w, z):
    """``(2 - a + a w conj(z)) / (2 pi (1 - w conj(z))^2)``, ``a = p k_p``.

    Kernel of the disc with weight ``|w|^-a``; its diagonal bounds the
    punctured-disc ``K_p`` from below.
    """
    a = _pk(p)
    t = np.asarray(w, dtype=complex) * np.conj(np.asarray(z, dtype=complex))
    return (2.0 - a + a * t) / (2 * np.pi * (1.0 - t) ** 2)


@dataclass
class AsymptoticFit:
    p: float
    k_p: int
    radii: np.ndarray
    values: np.ndarray
    A: float
    B: float
    residuals: np.ndarray = field(repr=False)
    A_expected: float = 0.0
    B_expected: float = 0.0

    @property
    def A_rel_error(self) -> float:
        return abs(self.A - self.A_expected) / self.A_expected

    @property
    def B_rel_error(self) -> float:
        return abs(self.B - self.B_expected) / self.B_expected


def fit_puncture(p: float, radii, values) -> AsymptoticFit:
    """Least-squares fit of ``A / r^a + B r^(2 - a)`` to kernel samples.

    The fit is done on ``K r^a = A + B r^2`` so that every sample carries
    comparable weight.
    """
    radii = np.asarray(radii, dtype=float)
    values = np.asarray(values, dtype=float)
    if radii.shape != values.shape or len(radii) < 4:
        raise ParameterError("need at least 4 (radius, value) samples")
    if np.any(radii < 1e-3) or np.any(radii > 0.2):
        raise RangeError("fit radii must lie in [1e-3, 0.2]")
    a = _pk(p)
    design = np.column_stack([np.ones_like(radii), radii**2])
    if np.linalg.matrix_rank(design) < 2:
        raise RangeError("fit design is rank deficient; use distinct radii")
    y = values * radii**a
    (A, B), *_ = np.linalg.lstsq(design, y, rcond=None)
    A_exp, B_exp = punctured_coefficients(p)
    return AsymptoticFit(p, k_cut(p), radii, values, float(A), float(B), y - design @ [A, B], A_exp, B_exp)


def puncture_samples(p: float, radii=None, N: int = 24, **kw):
    """Solver values of ``K_p`` on the punctured disc along the positive axis."""
    from .kernels import kernel_diag

    if radii is None:
        radii = np.geomspace(1e-3, 0.1, 8)
    D = PuncturedDisc()
    x0 = None
    vals = []
    for r in radii:
        rep = kernel_diag(D, p, complex(r), N, x0=x0, **kw)
        x0 = rep.solution.coefficients
        vals.append(rep.K)
    return np.asarray(radii, dtype=float), np.array(vals)


# -- general bounds ---------------------------------------------------------


def lemma_b6_bounds(p: float, domain: Domain, z) -> tuple[float, float]:
    """``(2 - p) / (2 pi R^(2-p)) delta^-p <= K_p(z) <= delta^-2 / pi``.

    ``R`` is the diameter of the domain and ``delta`` the distance from
    ``z`` to its boundary (the puncture included).
    """
    if not 0 < p < 2:
        raise RangeError("these bounds are stated for 0 < p < 2")
    delta = float(domain.boundary_distance(complex(z)))
    if not delta > 0:
        raise RangeError("z must be an interior point")
    R = domain.diameter
    lower = (2.0 - p) / (2 * np.pi * R ** (2.0 - p)) * delta ** (-p)
    return float(lower), float(delta**-2 / np.pi)


def mean_value_check(domain: Domain, p: float, a, N: int = 24, max_power: int = 8) -> dict:
    """Mean-value residuals and the kernel-side rigidity quantity.

    ``monomial_residual`` is ``max_k |a^k - (1/|Omega|) int z^k|`` over
    ``k = 0..max_power`` (negative powers are added on the annulus);
    ``kernel_excess`` is ``K_p(a) |Omega| - 1``, which vanishes exactly
    when ``Omega`` is a disc centred at ``a``.
    """
    from .kernels import kernel_diag

    a = domain.check_point(a)
    grid = build_grid(domain)
    powers = np.arange(-max_power if domain.r_min > 0 else 0, max_power + 1)
    res = 0.0
    for k in powers:
        avg = grid.integrate(grid.nodes**k) / domain.area
        res = max(res, abs(a**k - avg))
    K = kernel_diag(domain, p, a, N).K
    return {"monomial_residual": float(res), "kernel_excess": float(K * domain.area - 1.0), "K": K}


# -- Hardy space on the unit disc ---------------------------------------------


def _require_disc(domain):
    if domain.kind not in (UNIT_DISC, DISC) or domain.R != 1.0:
        raise UnsupportedDomainError("Hardy-space checks are provided on the unit disc only")


def _poly(coef, z):
    return np.polynomial.polynomial.polyval(z, np.asarray(coef, dtype=complex))


def circle_mean(p: float, coef, r: float, m: int = 256) -> float:
    """``int_{|z|=r} |f|^p ds`` by the trapezoid rule."""
    theta = 2 * np.pi * np.arange(m) / m
    return float(np.sum(np.abs(_poly(coef, r * np.exp(1j * theta))) ** p) * 2 * np.pi * r / m)


def hardy_norm(p: float, coef, m: int = 256, levels: int = 12, domain: Domain | None = None) -> float:
    """``||f||_{H^p}`` of the polynomial ``sum coef[k] z^k``.

    The Hardy norm is a supremum of boundary p-means over the circles
    ``|z| = 1 - 2^-k``; for a polynomial the means increase up to the
    unit circle, which is included.
    """
    _require_disc(domain or UnitDisc())
    bg = boundary_grid(UnitDisc(), m)
    radii = [1.0 - 2.0**-k for k in range(1, levels + 1)]
    vals = [circle_mean(p, coef, r, m) for r in radii]
    vals.append(float(np.dot(bg.boundary_weights, np.abs(_poly(coef, bg.boundary_nodes)) ** p)))
    return max(vals) ** (1.0 / p)


def bergman_norm(q: float, coef, n_r: int = 32, n_theta: int = 64) -> float:
    g = build_grid(UnitDisc(), n_r, n_theta)
    return float(np.dot(g.weights, np.abs(_poly(coef, g.nodes)) ** q)) ** (1.0 / q)


def carleman_check(coef, m: int = 256) -> tuple[float, float]:
    """``(int_D |f|^2, (1/(4 pi)) (int_{dD} |f| ds)^2)``; the first never exceeds the second."""
    lhs = bergman_norm(2.0, coef) ** 2
    rhs = hardy_norm(1.0, coef, m) ** 2 / (4 * np.pi)
    return lhs, rhs


def hl_ratio(p: float, coef) -> float:
    """``||f||_{A^(2p)} / ||f||_{H^p}`` (the embedding exponent for ``n = 1``)."""
    return bergman_norm(2 * p, coef) / hardy_norm(p, coef)


def szego_diag(z, N: int = 24, m: int = 256) -> float:
    """Szego kernel ``S(z, z)`` from the boundary Gram matrix of ``1, z, ..., z^N``."""
    bg = boundary_grid(UnitDisc(), m)
    V = bg.boundary_nodes[:, None] ** np.arange(N + 1)[None, :]
    G = (V.conj().T * bg.boundary_weights) @ V
    v = complex(z) ** np.arange(N + 1)
    return float(np.real(v.conj() @ np.linalg.solve(G, v)))


def szego_closed(z) -> float:
    return 1.0 / (2 * np.pi * (1.0 - abs(complex(z)) ** 2))


# -- exploratory --------------------------------------------------------------


@dataclass
class RpExploration:
    p: float
    r_p: float
    phi_min: float
    radii: np.ndarray
    values: np.ndarray
    log_convex: bool
    nonconvex: bool = False


def rp_exploration(p: float, N: int = 24, samples: int = 12, xtol: float = 1e-4, **kw) -> RpExploration:
    """Location and value of the minimum of ``K_p`` on the punctured disc.

    A coarse log-spaced scan over ``|z|`` in ``(0.05, 0.95)`` brackets the
    minimum, then a bounded golden-section search refines it.  This is an
    exploration of an open question; nothing is asserted about the result.
    """
    from .kernels import kernel_diag

    if not 0 < p < 2:
        raise RangeError("rp_exploration needs 0 < p < 2")
    D = PuncturedDisc()

    def K(r):
        return kernel_diag(D, p, complex(r), N, **kw).K

    radii = np.geomspace(0.05, 0.95, samples)
    vals = np.array([K(r) for r in radii])
    i = int(np.argmin(vals))
    lo, hi = radii[max(i - 1, 0)], radii[min(i + 1, samples - 1)]
    opt = minimize_scalar(K, bounds=(lo, hi), method="bounded", options={"xatol": xtol})
    # convexity of log K in log r: nonnegative second differences on the log grid
    second = np.diff(np.log(vals), 2)
    convex = bool(np.all(second >= -1e-9 * np.abs(np.log(vals[1:-1]))))
    return RpExploration(p, float(opt.x), float(opt.fun), radii, vals, convex, nonconvex=p < 1)
