"""p-Schwarz contents and their applications.

The p-Schwarz content of ``E`` relative to ``Omega`` is the supremum of
``int_E |f|^p / int_Omega |f|^p`` over holomorphic ``f``.  Over a finite
span it is a generalized Rayleigh quotient: for ``p = 2`` the largest
generalized eigenvalue of the pair of Gram matrices, for other ``p`` a
nonconvex maximization handled by multistart gradient ascent (so the
reported value is a lower bound for the span's supremum).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as sla
from scipy.special import jn_zeros

from .basis import DEFAULT_DEGREE, make_basis, orthonormalize
from .domains import DISC, UNIT_DISC, Domain, QuadGrid, Region, SubDisc, UnitDisc, build_grid, region_indicator
from .errors import (
    ConvergenceError,
    CounterexampleViolation,
    EmptyRegionError,
    ParameterError,
    RangeError,
)

#: First Dirichlet eigenvalue of the Laplacian on the unit disc, j_{0,1}^2.
LAMBDA1_UNIT_DISC = float(jn_zeros(0, 1)[0] ** 2)

DEFAULT_MULTISTARTS = 8
DEFAULT_SEED = 42


def first_eigenvalue(domain: Domain) -> float | None:
    """Dirichlet ``lambda_1`` for discs; ``None`` where it is not tabulated."""
    if domain.kind in (UNIT_DISC, DISC):
        return LAMBDA1_UNIT_DISC / domain.R**2
    return None


@dataclass
class SchwarzResult:
    region: Region
    p: float
    estimate: float
    exact_eig: float | None = None
    coefficients: np.ndarray | None = field(default=None, repr=False)
    multistarts: int = 0
    bound_checks: list = field(default_factory=list)
    estimate_half_N: float | None = None


@dataclass(frozen=True, eq=False)
class _ContentSetup:
    grid: QuadGrid
    B: np.ndarray
    inside: np.ndarray


def _content_setup(region: Region, domain: Domain, N: int, n_r: int, n_theta: int, p: float = 2.0) -> _ContentSetup:
    grid = build_grid(domain, n_r, n_theta, radial_breaks=region.radii())
    basis = orthonormalize(make_basis(domain, p, N), grid)
    inside = region_indicator(grid, region)
    if not inside.any():
        raise EmptyRegionError(f"{region} contains no quadrature node")
    return _ContentSetup(grid, basis.evaluate(grid.nodes), inside)


def _eigen(cs: _ContentSetup):
    w = cs.grid.weights
    BE = cs.B[cs.inside]
    GE = (BE.conj().T * w[cs.inside]) @ BE
    GO = (cs.B.conj().T * w) @ cs.B
    vals, vecs = sla.eigh((GE + GE.conj().T) / 2, (GO + GO.conj().T) / 2)
    return float(vals[-1]), vecs[:, -1]


def schwarz_p2(region: Region, domain: Domain | None = None, N: int = DEFAULT_DEGREE, n_r: int = 32, n_theta: int = 64) -> float:
    """Exact 2-Schwarz content over the span: the top eigenvalue of ``(G_E, G_Omega)``.

    The grid is split radially at the region's bounding circles so that
    concentric regions are integrated without node quantization.
    """
    domain = domain or UnitDisc()
    return _eigen(_content_setup(region, domain, N, n_r, n_theta))[0]


def _ratio_and_grad(cs, c, p):
    f = cs.B @ c
    a = np.abs(f)
    floor = 1e-8 * a.max()
    scale = np.maximum(a, floor) ** (p - 2)
    w = cs.grid.weights
    wi = w * cs.inside
    num = float(np.dot(wi, a**p))
    den = float(np.dot(w, a**p))
    gn = cs.B.conj().T @ (wi * scale * f)
    gd = cs.B.conj().T @ (w * scale * f)
    R = num / den
    return R, (p / 2) * (gn - R * gd) / den, den


def _ascend(cs, c, p, max_iter=400, tol=1e-13):
    """Gradient ascent on the ratio with the normalization ``int |f|^p = 1``."""
    R, g, den = _ratio_and_grad(cs, c, p)
    c = c / den ** (1 / p)
    R, g, den = _ratio_and_grad(cs, c, p)
    step = 1.0
    for _ in range(max_iter):
        gnorm = np.linalg.norm(g)
        if gnorm < 1e-14:
            break
        improved = False
        while step > 1e-12:
            trial = c + step * g
            R_new, g_new, den_new = _ratio_and_grad(cs, trial, p)
            if R_new > R:
                improved = True
                break
            step /= 2
        if not improved:
            break
        gain = R_new - R
        c = trial / den_new ** (1 / p)
        R, g, den = _ratio_and_grad(cs, c, p)
        step *= 2
        if gain < tol * max(R, 1e-300):
            break
    if not np.isfinite(R):
        raise ConvergenceError("Schwarz-content ascent diverged")
    return R, c


def schwarz_general(
    region: Region,
    domain: Domain | None = None,
    p: float = 2.0,
    N: int = DEFAULT_DEGREE,
    multistarts: int = DEFAULT_MULTISTARTS,
    seed: int = DEFAULT_SEED,
    *,
    n_r: int = 32,
    n_theta: int = 64,
    half_N: bool = False,
) -> SchwarzResult:
    """p-Schwarz content of ``region`` by multistart ascent.

    Starts are the constant function, the ``p = 2`` eigenvector and then
    seeded random coefficient vectors; the best ratio is returned.  It is
    a lower bound for the supremum over the truncated span.
    """
    if not p > 0:
        raise ParameterError(f"p must be positive, got {p}")
    domain = domain or UnitDisc()
    cs = _content_setup(region, domain, N, n_r, n_theta)
    eig, vec = _eigen(cs)
    m = cs.B.shape[1]
    const = np.linalg.lstsq(cs.B, np.ones(len(cs.B)), rcond=None)[0]
    starts = [const, vec]
    streams = np.random.SeedSequence(seed).spawn(max(multistarts - len(starts), 0))
    for ss in streams:
        rng = np.random.Generator(np.random.Philox(ss))
        starts.append(rng.standard_normal(m) + 1j * rng.standard_normal(m))
    starts = starts[: max(multistarts, 1)]
    best_R, best_c = -np.inf, None
    for c0 in starts:
        R, c = _ascend(cs, c0.astype(complex), p)
        if R > best_R:
            best_R, best_c = R, c
    res = SchwarzResult(
        region=region,
        p=p,
        estimate=float(best_R),
        exact_eig=eig if p == 2 else None,
        coefficients=best_c,
        multistarts=len(starts),
    )
    if half_N:
        res.estimate_half_N = schwarz_general(region, domain, p, max(N // 2, 2), multistarts, seed, n_r=n_r, n_theta=n_theta).estimate
    return res


def content_bounds(d: float, lam1: float = LAMBDA1_UNIT_DISC) -> dict:
    """Upper bounds ``(C/lambda_1)/(C/lambda_1 + d^2)`` for ``C = 136`` and ``C = 128``."""
    out = {}
    for name, C in (("lambda1_136", 136.0), ("lambda1_128", 128.0)):
        q = C / lam1
        out[name] = q / (q + d * d)
    return out


def bound_checks(result: SchwarzResult, d: float, lam1: float = LAMBDA1_UNIT_DISC) -> SchwarzResult:
    """Record whether the content respects the eigenvalue bounds at distance ``d``."""
    if d < 0:
        raise ParameterError("distance to the boundary must be nonnegative")
    for name, value in content_bounds(d, lam1).items():
        result.bound_checks.append((name, value, bool(result.estimate <= value)))
    return result


def bm_bound(s: float, p: float) -> float:
    """Banach-Mazur bound ``(1 - s)^(-1/p)`` for a content ``s`` of the removed set."""
    if not 0 <= s < 1:
        raise RangeError(f"content must lie in [0, 1) for a finite bound, got {s}")
    if p < 1:
        raise ParameterError("the Banach-Mazur bound is stated for p >= 1")
    return (1.0 - s) ** (-1.0 / p)


def half_content_radius(
    p: float,
    N: int = DEFAULT_DEGREE,
    *,
    lo: float = 0.3,
    hi: float = 0.95,
    xtol: float = 1e-6,
    multistarts: int = 2,
) -> float:
    """Radius ``r`` with ``s_p(D_r, D) = 1/2``, by bisection."""
    if p < 1:
        raise ParameterError("half_content_radius expects p >= 1")

    def content(r):
        if p == 2:
            return schwarz_p2(SubDisc(r), UnitDisc(), N)
        return schwarz_general(SubDisc(r), UnitDisc(), p, N, multistarts=multistarts).estimate

    f_lo, f_hi = content(lo) - 0.5, content(hi) - 0.5
    if f_lo * f_hi > 0:
        raise RangeError(f"s_p(D_r) - 1/2 does not change sign on [{lo}, {hi}]")
    while hi - lo > xtol:
        mid = (lo + hi) / 2
        f_mid = content(mid) - 0.5
        if (f_mid > 0) == (f_hi > 0):
            hi, f_hi = mid, f_mid
        else:
            lo, f_lo = mid, f_mid
    return (lo + hi) / 2


@dataclass
class ChebyshevDemo:
    p: float
    radius: float
    inner_integral: float
    outer_integral: float
    distance_h1: float
    distance_h2: float
    candidate_min: float
    candidates: int
    target: float = np.pi / 2


def nonchebyshev_demo(p: float = 1.0, candidates: int = 100, seed: int = DEFAULT_SEED, N: int = DEFAULT_DEGREE, n_r: int = 32, n_theta: int = 64) -> ChebyshevDemo:
    """Two distinct best approximations from A^p for ``0 < p <= 1``.

    ``E`` is the disc of radius ``2^-1/2`` (content exactly 1/2, maximizer
    the constant), ``g = 0`` on ``E`` and ``1`` off it.  Both ``h = 0`` and
    ``h = 1`` are at L^p distance ``pi/2`` from ``g``; random span
    elements are checked never to do better.

    Raises
    ------
    CounterexampleViolation
        If a candidate is closer to ``g`` than ``pi/2 - 1e-6``.
    """
    if not 0 < p <= 1:
        raise ParameterError("the construction needs 0 < p <= 1")
    r = 2.0**-0.5
    D = UnitDisc()
    grid = build_grid(D, n_r, n_theta, radial_breaks=(r,))
    inside = region_indicator(grid, SubDisc(r))
    w = grid.weights
    g = np.where(inside, 0.0, 1.0)
    f_E = np.ones(len(w))
    inner = float(np.dot(w[inside], np.abs(f_E[inside]) ** p))
    outer = float(np.dot(w[~inside], np.abs(f_E[~inside]) ** p))
    d1 = float(np.dot(w, np.abs(g - 0.0) ** p))
    d2 = float(np.dot(w, np.abs(g - 1.0) ** p))
    basis = make_basis(D, 2.0, N)
    Z = basis.evaluate(grid.nodes)
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(seed)))
    best = np.inf
    for _ in range(candidates):
        deg = rng.integers(0, N + 1)
        c = np.zeros(len(basis), complex)
        # coefficients decay so candidates stay in a sensible range
        scale = rng.uniform(0.1, 2.0) / (1.0 + np.arange(deg + 1))
        c[: deg + 1] = scale * (rng.standard_normal(deg + 1) + 1j * rng.standard_normal(deg + 1))
        if rng.random() < 0.5:
            c[0] += rng.uniform(0, 1)
        best = min(best, float(np.dot(w, np.abs(g - Z @ c) ** p)))
    demo = ChebyshevDemo(p, r, inner, outer, d1, d2, best, candidates)
    if best < np.pi / 2 - 1e-6:
        raise CounterexampleViolation(f"a candidate reached distance {best:.8f} < pi/2")
    return demo


@dataclass
class SchwarzDimension:
    p: float
    eps: np.ndarray
    contents: np.ndarray
    slope: float
    dimension: float


def schwarz_dim_sweep(domain: Domain | None = None, p: float = 2.0, eps_list=(0.2, 0.1, 0.05), N: int = DEFAULT_DEGREE, multistarts: int = 2) -> SchwarzDimension:
    """Fit ``log(1 - s_p(Omega_eps)) ~ slope * log(eps)`` for ``Omega_eps = D_(1-eps)``.

    The Schwarz dimension estimate is ``2 - slope``.
    """
    domain = domain or UnitDisc()
    if domain.kind not in (UNIT_DISC, DISC):
        raise ParameterError("boundary-layer sweeps use concentric subdiscs of a disc")
    eps = np.asarray(eps_list, dtype=float)
    if np.any(eps <= 0) or np.any(eps >= 0.3) or np.any(np.diff(eps) >= 0):
        raise ParameterError("eps_list must be decreasing within (0, 0.3)")
    s = []
    for e in eps:
        region = SubDisc(domain.R * (1 - e))
        if p == 2:
            s.append(schwarz_p2(region, domain, N))
        else:
            s.append(schwarz_general(region, domain, p, N, multistarts=multistarts).estimate)
    s = np.array(s)
    gap = 1 - s
    if np.any(gap <= 0) or np.any(s <= 0):
        raise RangeError("contents must lie strictly inside (0, 1) for the fit")
    slope = float(np.polyfit(np.log(eps), np.log(gap), 1)[0])
    return SchwarzDimension(p, eps, s, slope, 2.0 - slope)
