"""Relative and universal bound certificates on small instances."""

import numpy as np

from ncequi import constructions
from ncequi.algebra import scalars
from ncequi.bounds import gerzon_modular, vls_ab, vls_modular, vls_norm

C = scalars(1)

print("relative bound for d=2, a=1/4 as n grows")
for n in range(2, 6):
    cert = vls_modular(2, n, 0.25, algebra=C)
    print(f"  n={n}: passed={cert.passed}, witness {cert.witness.blocks[0][0, 0].real:+.3f}, "
          f"cap {cert.bound_value:.3f}")

print("\nWelch angle makes the classical relative bound tight")
for d, n in [(2, 3), (3, 6), (4, 7), (5, 11)]:
    g = np.sqrt((n - d) / (d * (n - 1)))
    cert = vls_norm(d, n, g, "classical")
    print(f"  d={d} n={n} gamma={g:.4f}: cap {cert.bound_value:.12f}")

# per-block targets over C^2: the tighter block decides
A = scalars(2)
cert = vls_modular(2, 3, A.from_diagonal([0.25, 0.0]))
print(f"\nC^2 with a=(1/4, 0), n=3: passed={cert.passed}, "
      f"witness blocks {[float(b[0, 0].real) for b in cert.witness.blocks]}")
cert = vls_ab(2, 3, 4.0, 4.0, algebra=C)
print(f"(a,b)=(4,4) for the doubled trine in the plain form: passed={cert.passed}")

print("\nGerzon at the d^2 ceiling")
cert = gerzon_modular(constructions.sic_d2(), 1 / 3)
for h in cert.hypotheses:
    print(f"  {h.name:28s} {h.verdict}")
print(f"  n={cert.n} <= d^2={cert.bound_value}: {cert.passed}")
ind = cert.independence
print(f"  independence: nullity {ind.nullspace_dimension}, smallest singular value "
      f"{ind.smallest_singular_value:.3f}")
