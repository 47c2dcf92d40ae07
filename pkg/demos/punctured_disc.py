"""The punctured disc: a removable singularity that the kernel still feels.

For p >= 2 the puncture is invisible to A^p, but for p < 2 functions with
a pole of order below 2/p are p-integrable and the kernel blows up like
``|z|^(-p k_p)``.  We sample the solver along the positive axis, fit the
two-term expansion and compare with the predicted coefficients, then
check that the values sit inside the two-sided bound corridor.
"""

import numpy as np

from pbergman import fit_puncture, k_cut, punctured_bounds
from pbergman.closed_forms import puncture_samples

for p in (2 / 3, 1.0, 1.5):
    radii, vals = puncture_samples(p)
    fit = fit_puncture(p, radii, vals)
    print(f"p = {p:.4g}  (k_p = {k_cut(p)}, blow-up exponent {p * k_cut(p):.4g})")
    print(f"  leading  A = {fit.A:.6f}  expected {fit.A_expected:.6f}  rel. error {fit.A_rel_error:.1e}")
    print(f"  second   B = {fit.B:.6f}  expected {fit.B_expected:.6f}  rel. error {fit.B_rel_error:.1e}")
    inside = 0
    for r, K in zip(radii, vals):
        lo, hi = punctured_bounds(p, r)
        inside += lo * (1 - 1e-3) <= K <= hi * (1 + 1e-3)
    print(f"  {inside}/{len(radii)} samples inside the bound corridor\n")
