"""Search directly over C + M_2(C) and compare with the scalar problem."""

import numpy as np

from ncequi import constructions
from ncequi.algebra import AlgebraDescriptor, matrices, op_norm, scalars
from ncequi.equiangular import Configuration, verify_modular_ab, verify_norm_gamma
from ncequi.search import SearchProblem, minimize_from, polish, solve

A = AlgebraDescriptor((1, 2))
res = solve(SearchProblem(A, d=2, n=3, a=0.25, restarts=20, seed=3))
cfg = polish(res.best_config)
print(f"C+M_2, d=2, n=3, a=1/4: converged={res.converged}, loss {res.best_loss:.1e}")
print(f"  modular check: {verify_modular_ab(cfg, 0.25, 1.0, tol=1e-8).passed}")
g01 = cfg.gram.entry(0, 1)
print(f"  <t0,t1> has norm {op_norm(g01):.6f}, the M_2 block is not a multiple of 1: "
      f"{not np.allclose(g01.blocks[1], g01.blocks[1][0, 0] * np.eye(2))}")

# a scalar start and its lift follow the same optimizer trajectory
rng = np.random.default_rng(0)
z = rng.standard_normal((4, 2, 1, 1)) + 1j * rng.standard_normal((4, 2, 1, 1))
base = polish(Configuration.from_block_arrays(scalars(1), [z]))
ts = minimize_from(base, SearchProblem(scalars(1), 2, 4, a=1 / 3, max_iterations=30)).objective_trace
tl = minimize_from(constructions.scalar_lift(base, matrices(2)),
                   SearchProblem(matrices(2), 2, 4, a=1 / 3, max_iterations=30)).objective_trace
print(f"\nscalar vs lifted traces: {len(ts)} steps, max difference "
      f"{np.max(np.abs(np.array(ts) - np.array(tl))):.1e}")
print(f"C+M_2 result is norm-equiangular at gamma=1/2: "
      f"{verify_norm_gamma(polish(res.best_config), 0.5, tol=1e-8).passed}")
