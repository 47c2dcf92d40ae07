"""How close does the truncated solver get to the disc closed forms?

On the unit disc the p-Bergman kernel does not depend on p along the
diagonal, ``K_p(z) = 1 / (pi (1 - |z|^2)^2)``, while the off-diagonal
kernel does.  This script walks outward from the centre and prints the
solver's relative error for a few exponents, then shows how the error
shrinks as the basis degree grows at a point near the boundary.
"""

import numpy as np

from pbergman import UnitDisc, disc_diag_closed, disc_kernel_closed, kernel_diag, kernel_offdiag

D = UnitDisc()

print("diagonal, N = 24")
print(f"{'|z|':>6} " + " ".join(f"{'p=' + str(p):>12}" for p in (1, 2, 4)))
for r in (0.0, 0.3, 0.6, 0.8):
    errs = [abs(kernel_diag(D, p, r).K / disc_diag_closed(p, r) - 1) for p in (1, 2, 4)]
    print(f"{r:6.2f} " + " ".join(f"{e:12.2e}" for e in errs))

print("\noff-diagonal K_p(0.6, 0.3): the p-dependence sits here")
for p in (1, 2, 4):
    got = kernel_offdiag(D, p, 0.6, 0.3)
    want = disc_kernel_closed(p, 0.6, 0.3)
    print(f"  p={p}: solver {got.real:.8f}  closed form {want.real:.8f}")

print("\nconvergence in N at z = 0.8, p = 3 (values only increase with N)")
for N in (8, 16, 24, 32):
    K = kernel_diag(D, 3, 0.8, N).K
    print(f"  N={N:2d}: K = {K:.10f}  rel. error {abs(K / disc_diag_closed(3, 0.8) - 1):.2e}")
