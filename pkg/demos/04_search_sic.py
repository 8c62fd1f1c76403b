"""Find four equiangular lines in C^2 numerically, then certify them."""

import time

from ncequi.algebra import scalars
from ncequi.bounds import gerzon_modular
from ncequi.equiangular import verify_modular_ab
from ncequi.search import SearchProblem, polish, solve

problem = SearchProblem(scalars(1), d=2, n=4, a=1 / 3, restarts=20, seed=0)
t0 = time.perf_counter()
result = solve(problem)
print(f"converged={result.converged} loss={result.best_loss:.2e} "
      f"restarts={len(result.restart_losses)} in {time.perf_counter() - t0:.2f}s")

cfg = polish(result.best_config)
rep = verify_modular_ab(cfg, 1 / 3, 1.0, tol=1e-8)
print(f"verified at 1e-8: {rep.passed} (angle deviation {rep.max_angle_deviation:.1e})")
print(f"Gerzon certificate: {gerzon_modular(cfg, 1 / 3, tol=1e-8).passed}")

# five lines would break the d^2 ceiling; the solver stalls well above zero
bad = solve(SearchProblem(scalars(1), d=2, n=5, a=0.3, restarts=10, seed=7))
print(f"\nn=5: converged={bad.converged}, best loss {bad.best_loss:.4f}")
