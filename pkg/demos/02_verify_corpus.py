"""Run the equiangularity verifiers over the reference constructions."""

import numpy as np

from ncequi import constructions
from ncequi.algebra import matrices
from ncequi.equiangular import compute_B, verify_modular_ab, verify_norm_gamma, verify_special

for name, (build, a) in constructions.REFERENCE.items():
    cfg = build()
    rep = verify_modular_ab(cfg, a, 1.0)
    ng = verify_norm_gamma(cfg, np.sqrt(a))
    B = compute_B(cfg).blocks[0][0, 0].real
    print(f"{name:12s} n={cfg.n} d={cfg.d} a={a:.4f}  modular: {rep.passed}  "
          f"norm: {ng.passed}  B={B:.6f} (expected {cfg.n + (cfg.n ** 2 - cfg.n) * a:.6f})")

# a wrong target is reported with the size of the miss
rep = verify_modular_ab(constructions.sic_d2(), 0.25)
print(f"\nsic_d2 against a=1/4: passed={rep.passed}, worst pair {rep.worst_pair}, "
      f"deviation {rep.max_angle_deviation:.6f}")

# lifting into M_2(C) keeps every condition, including n^2 <= d B
lifted = constructions.scalar_lift(constructions.sic_d2(), matrices(2))
rep = verify_special(lifted, gamma=1 / np.sqrt(3))
print(f"lifted sic_d2 is special: {rep.passed}, witness norm {np.abs(rep.witness.blocks[0]).max():.1e}")
