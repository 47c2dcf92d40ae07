"""Schwarz content: how much of an A^p function can live on a subset.

For a concentric disc of radius r the answer is r^2 for every p, with the
constant function as maximizer.  At p = 2 the content is an eigenvalue;
for other p it is found by multistart ascent, which gives a lower bound.
The last part fits the boundary-layer exponent: 1 - s(D_(1-eps)) ~ eps.
"""

from pbergman import AnnularBand, Complement, SubDisc, UnitDisc, schwarz_dim_sweep, schwarz_general, schwarz_p2

for r in (0.3, 0.5, 0.7):
    line = f"D_{r}: eigen {schwarz_p2(SubDisc(r)):.8f}"
    for p in (1.0, 3.0):
        line += f"   p={p:g} ascent {schwarz_general(SubDisc(r), UnitDisc(), p, multistarts=3).estimate:.6f}"
    print(line + f"   (r^2 = {r * r:.4f})")

print()
for E in (AnnularBand(0.3, 0.6), Complement(SubDisc(0.5))):
    s = schwarz_p2(E)
    print(f"{E}: content {s:.6f} vs area fraction {E.area(UnitDisc()) / UnitDisc().area:.6f}")

print()
for p in (2.0, 1.0):
    sw = schwarz_dim_sweep(UnitDisc(), p)
    gaps = ", ".join(f"{1 - s:.6f}" for s in sw.contents)
    print(f"p={p:g}: 1 - s at eps {', '.join(f'{e:g}' for e in sw.eps)} -> {gaps}")
    print(f"      fitted slope {sw.slope:.4f}, Schwarz dimension {sw.dimension:.4f}")
