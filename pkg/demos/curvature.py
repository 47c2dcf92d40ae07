"""Metric, Levi form and the curvature bound along affine test discs.

For p >= 2 the Levi form of log K_p dominates the squared p-Bergman
metric, and the curvature of the metric along any holomorphic disc is
bounded above in terms of both.  We print the margins at a few points of
the disc and of an annulus.  On the disc at p = 2 everything is explicit:
B^2 = 2, Levi form 2, test-disc curvature -1 and bound 2.
"""

from pbergman import Annulus, UnitDisc, hsc_testdisc_inequality

cases = [(UnitDisc(), 0.0), (UnitDisc(), 0.4 + 0.2j), (Annulus(0.5), 0.7), (Annulus(0.5), -0.6j)]
print(f"{'domain':>18} {'z':>12} {'p':>3} {'Levi/B^2':>9} {'lhs':>9} {'rhs':>9}")
for D, z in cases:
    for p in (2, 3):
        lhs, rhs, ok, det = hsc_testdisc_inequality(D, p, z, 1)
        ratio = det["levi"] / det["B"] ** 2
        print(f"{str(D):>18} {z!s:>12} {p:3d} {ratio:9.4f} {lhs:9.4f} {rhs:9.4f} {'ok' if ok else 'VIOLATED'}")
