"""p-Bergman kernels, metrics and Schwarz contents on planar model domains.

The extremal problems behind the p-Bergman kernel are solved over
truncated holomorphic bases with iteratively reweighted least squares;
closed forms on the disc and punctured disc serve as oracles.
"""

from .basis import Basis, k_cut, make_basis, orthonormalize
from .closed_forms import (
    carleman_check,
    disc_diag_closed,
    disc_kernel_closed,
    fit_puncture,
    hardy_norm,
    hl_ratio,
    lemma_b6_bounds,
    mean_value_check,
    punctured_asym,
    punctured_bounds,
    rp_exploration,
    weighted_disc_closed,
)
from .domains import (
    AnnularBand,
    Annulus,
    Complement,
    Disc,
    Domain,
    Indicator,
    PuncturedDisc,
    QuadGrid,
    SubDisc,
    UnitDisc,
    boundary_grid,
    build_grid,
    mask,
)
from .errors import PBergmanError
from .kernels import (
    derivative_identity_residual,
    hsc_testdisc_inequality,
    kernel_diag,
    kernel_offdiag,
    levi_log_kernel,
    metric,
    reproducing_residual,
    transform_invariance_residual,
)
from .lp_solver import LpProblem, LpSolution, SolverOptions, solve
from .schwarz import (
    bm_bound,
    bound_checks,
    half_content_radius,
    nonchebyshev_demo,
    schwarz_dim_sweep,
    schwarz_general,
    schwarz_p2,
)
from .weighted import WeightedKernel, ns_kernel, ns_metric_coeff, thm2_residual, weighted_kernel

__version__ = "0.1.0"
