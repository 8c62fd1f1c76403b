"""Block-diagonal algebras and the Hilbert module A^d.

Builds C + M_2(C), checks the C*-identity on a random element, then forms
a vector in A^3, normalizes it, and looks at its rank-one outer operator.
"""

import numpy as np

from ncequi import AlgebraDescriptor, ModuleVector, inner_product, normalize, op_norm
from ncequi.algebra import spectral_tests
from ncequi.hilbert_module import apply_outer, outer_operator

rng = np.random.default_rng(1)
A = AlgebraDescriptor((1, 2))
print(f"algebra with blocks {A.block_sizes}, dimension {A.dim}, commutative: {A.commutative}")

x = A.random(rng)
print(f"||x*x|| = {op_norm(x.adjoint() * x):.12f}")
print(f"||x||^2 = {op_norm(x) ** 2:.12f}")

u = ModuleVector(A, [A.random(rng) for _ in range(3)])
rep = spectral_tests(inner_product(u, u))
print(f"<u,u> positive: {rep.positive}, smallest eigenvalue {rep.min_eigenvalue:.4f}")

w = normalize(u)
print(f"after normalizing, ||<w,w> - 1|| = {op_norm(inner_product(w, w) - A.identity()):.2e}")

# x -> <x,w> w fixes w itself because <w,w> = 1
m = outer_operator(w)
back = apply_outer(m, w)
err = max(op_norm(p - q) for p, q in zip(back.components, w.components))
print(f"outer operator applied to w returns w up to {err:.2e}")
