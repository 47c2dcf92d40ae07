"""Planar model domains, polar tensor quadrature and region masks.

All domains are rotationally symmetric about the origin, so every
integral is approximated with a Gauss-Legendre rule in the radius times
the trapezoid rule in the angle.  The trapezoid rule is spectrally
accurate for the periodic angular integrands that appear here.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Callable, Sequence

import numpy as np
from scipy.special import roots_jacobi, roots_legendre

from .errors import EmptyRegionError, GeometryError, ParameterError, UnsupportedDomainError

#: Points closer than this to the boundary or the puncture are rejected.
GEOMETRY_FLOOR = 1e-6

UNIT_DISC = "UnitDisc"
DISC = "Disc"
ANNULUS = "Annulus"
PUNCTURED_DISC = "PuncturedDisc"


@dataclass(frozen=True)
class Domain:
    """A disc, annulus or punctured disc centred at the origin.

    Use the constructors :func:`UnitDisc`, :func:`Disc`, :func:`Annulus`
    and :func:`PuncturedDisc` rather than instantiating this directly.
    """

    kind: str
    R: float = 1.0
    r_in: float = 0.0

    def __post_init__(self):
        if self.kind not in (UNIT_DISC, DISC, ANNULUS, PUNCTURED_DISC):
            raise ParameterError(f"unknown domain kind {self.kind!r}")
        if not self.R > 0:
            raise ParameterError(f"disc radius must be positive, got {self.R}")
        if self.kind == ANNULUS and not 0 < self.r_in < 1:
            raise ParameterError(f"annulus inner radius must lie in (0, 1), got {self.r_in}")
        if self.kind != DISC and self.R != 1.0:
            raise ParameterError(f"{self.kind} has outer radius 1")

    @property
    def r_min(self) -> float:
        return self.r_in if self.kind == ANNULUS else 0.0

    @property
    def r_max(self) -> float:
        return self.R

    @property
    def area(self) -> float:
        return np.pi * (self.r_max**2 - self.r_min**2)

    @property
    def diameter(self) -> float:
        return 2.0 * self.r_max

    @property
    def punctured(self) -> bool:
        return self.kind == PUNCTURED_DISC

    @property
    def has_inner_boundary(self) -> bool:
        return self.kind in (ANNULUS, PUNCTURED_DISC)

    def boundary_distance(self, z):
        """Euclidean distance to the boundary (the puncture counts as boundary)."""
        r = np.abs(np.asarray(z, dtype=complex))
        d = self.r_max - r
        if self.has_inner_boundary:
            d = np.minimum(d, r - self.r_min)
        return d

    def contains(self, z, floor: float = 0.0):
        return self.boundary_distance(z) > floor

    def check_point(self, z) -> complex:
        z = complex(z)
        if not self.boundary_distance(z) > GEOMETRY_FLOOR:
            raise GeometryError(f"{z} is not an interior point of {self}")
        return z

    def __str__(self):
        if self.kind == DISC:
            return f"Disc(R={self.R:g})"
        if self.kind == ANNULUS:
            return f"Annulus(r_in={self.r_in:g})"
        return self.kind


def UnitDisc() -> Domain:
    return Domain(UNIT_DISC)


def Disc(R: float) -> Domain:
    return Domain(DISC, R=float(R))


def Annulus(r_in: float) -> Domain:
    return Domain(ANNULUS, r_in=float(r_in))


def PuncturedDisc() -> Domain:
    return Domain(PUNCTURED_DISC)


@dataclass(frozen=True, eq=False)
class QuadGrid:
    """Quadrature nodes and positive weights over a domain.

    ``weights`` integrate against area measure; ``boundary_weights`` (when
    present) against arc length on the boundary circles.
    """

    domain: Domain
    nodes: np.ndarray
    weights: np.ndarray
    n_r: int = 0
    n_theta: int = 0
    boundary_nodes: np.ndarray | None = None
    boundary_weights: np.ndarray | None = None
    radial_breaks: tuple = ()
    singular_power: float = 0.0

    def __len__(self):
        return len(self.nodes)

    @property
    def radii(self) -> np.ndarray:
        """Distinct radial nodes, innermost first (unmasked grids only)."""
        return np.abs(self.nodes.reshape(-1, self.n_theta)[:, 0])

    @property
    def angles(self) -> np.ndarray:
        return 2.0 * np.pi * np.arange(self.n_theta) / self.n_theta

    @property
    def total_weight(self) -> float:
        return float(np.sum(self.weights))

    def integrate(self, values) -> complex | float:
        return np.dot(self.weights, values)


def radial_rule(a: float, b: float, n: int, singular_power: float = 0.0):
    """Nodes and weights approximating ``int_a^b F(r) r dr``.

    With ``singular_power = s > 0`` (only meaningful when ``a == 0``) the
    rule is Gauss-Jacobi for the weight ``r^(1-s)``, so integrands that
    behave like ``r^-s`` times a smooth function are integrated to
    spectral accuracy.
    """
    if singular_power and a == 0.0:
        beta = 1.0 - singular_power
        if not beta > -1.0:
            raise ParameterError(f"singular_power must be < 2, got {singular_power}")
        x, v = roots_jacobi(n, 0.0, beta)
        r = b * (x + 1.0) / 2.0
        # (1+x)^beta dx = (2/b)^(beta+1) r^beta dr
        w = v * (b / 2.0) ** (beta + 1.0) * r**singular_power
        return r, w
    x, v = roots_legendre(n)
    half = (b - a) / 2.0
    r = a + half * (x + 1.0)
    return r, v * half * r


def build_grid(
    domain: Domain,
    n_r: int = 32,
    n_theta: int = 64,
    radial_breaks: Sequence[float] = (),
    singular_power: float = 0.0,
) -> QuadGrid:
    """Tensor polar quadrature grid over ``domain``.

    Parameters
    ----------
    domain : Domain
    n_r : int
        Gauss-Legendre nodes per radial panel (at least 4).
    n_theta : int
        Equispaced angles (at least 8).
    radial_breaks : sequence of float, optional
        Interior radii at which the radial rule is split into panels, so
        that concentric regions with these radii are resolved exactly by
        :func:`mask`.
    singular_power : float, optional
        If positive, the innermost panel of a disc-like domain uses a
        Gauss-Jacobi rule suited to integrands ``~ r^-singular_power``.

    Returns
    -------
    QuadGrid
    """
    if int(n_r) != n_r or n_r < 4:
        raise ParameterError(f"n_r must be an integer >= 4, got {n_r}")
    if int(n_theta) != n_theta or n_theta < 8:
        raise ParameterError(f"n_theta must be an integer >= 8, got {n_theta}")
    n_r, n_theta = int(n_r), int(n_theta)
    breaks = sorted({float(b) for b in radial_breaks if domain.r_min < b < domain.r_max})
    edges = [domain.r_min, *breaks, domain.r_max]
    rs, ws = [], []
    for a, b in zip(edges[:-1], edges[1:]):
        r, w = radial_rule(a, b, n_r, singular_power if a == 0.0 else 0.0)
        rs.append(r)
        ws.append(w)
    r = np.concatenate(rs)
    wr = np.concatenate(ws)
    theta = 2.0 * np.pi * np.arange(n_theta) / n_theta
    nodes = (r[:, None] * np.exp(1j * theta)[None, :]).ravel()
    weights = (wr[:, None] * np.full(n_theta, 2.0 * np.pi / n_theta)[None, :]).ravel()
    return QuadGrid(
        domain=domain,
        nodes=nodes,
        weights=weights,
        n_r=n_r,
        n_theta=n_theta,
        radial_breaks=tuple(breaks),
        singular_power=float(singular_power),
    )


def boundary_grid(domain: Domain, m: int = 128, grid: QuadGrid | None = None) -> QuadGrid:
    """Attach ``m`` equispaced arc-length nodes on the boundary circle.

    Only discs carry boundary quadrature; Hardy norms on the other model
    domains are not supported.
    """
    if domain.kind not in (UNIT_DISC, DISC):
        raise UnsupportedDomainError(f"boundary quadrature is only provided for discs, not {domain}")
    if int(m) != m or m < 16:
        raise ParameterError(f"m must be an integer >= 16, got {m}")
    R = domain.R
    theta = 2.0 * np.pi * np.arange(m) / m
    bnodes = R * np.exp(1j * theta)
    bweights = np.full(m, 2.0 * np.pi * R / m)
    if grid is None:
        grid = QuadGrid(domain=domain, nodes=np.empty(0, complex), weights=np.empty(0))
    return replace(grid, boundary_nodes=bnodes, boundary_weights=bweights)


# -- regions -----------------------------------------------------------------


class Region:
    """A measurable subset of a domain, decided pointwise."""

    def contains(self, z) -> np.ndarray:
        raise NotImplementedError

    def radii(self) -> tuple:
        """Radii of circles bounding the region (used to align grids)."""
        return ()


@dataclass(frozen=True)
class SubDisc(Region):
    r: float

    def contains(self, z):
        return np.abs(z) < self.r

    def radii(self):
        return (self.r,)

    def area(self, domain: Domain) -> float:
        r = min(self.r, domain.r_max)
        return np.pi * max(r**2 - domain.r_min**2, 0.0)


@dataclass(frozen=True)
class AnnularBand(Region):
    a: float
    b: float

    def contains(self, z):
        r = np.abs(z)
        return (r >= self.a) & (r < self.b)

    def radii(self):
        return (self.a, self.b)

    def area(self, domain: Domain) -> float:
        a = max(self.a, domain.r_min)
        b = min(self.b, domain.r_max)
        return np.pi * max(b**2 - a**2, 0.0)


@dataclass(frozen=True)
class Complement(Region):
    other: Region

    def contains(self, z):
        return ~np.asarray(self.other.contains(z), dtype=bool)

    def radii(self):
        return self.other.radii()

    def area(self, domain: Domain) -> float:
        return domain.area - self.other.area(domain)


@dataclass(frozen=True)
class Indicator(Region):
    predicate: Callable = field(compare=False)

    def contains(self, z):
        return np.asarray(self.predicate(np.asarray(z)), dtype=bool)


def mask(grid: QuadGrid, region: Region) -> QuadGrid:
    """Restrict ``grid`` to the nodes lying in ``region``; weights are kept."""
    inside = np.asarray(region.contains(grid.nodes), dtype=bool)
    if not inside.any():
        raise EmptyRegionError(f"{region} contains no quadrature node")
    return replace(grid, nodes=grid.nodes[inside], weights=grid.weights[inside])


def region_indicator(grid: QuadGrid, region: Region) -> np.ndarray:
    """Boolean membership of the grid nodes (no emptiness check)."""
    return np.asarray(region.contains(grid.nodes), dtype=bool)
