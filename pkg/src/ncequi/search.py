"""Penalty-based numerical search for modular equiangular configurations.

The loss for targets ``a`` and ``b`` is

    sum_j |<t_j,t_j> - b|_F^2 + sum_{j != k} |<t_j,t_k><t_k,t_j> - a|_F^2

with squared Frobenius norms summed over algebra blocks. Target-gamma mode
pulls each product towards ``gamma^2 * 1``, a smooth surrogate for the
norm condition whose zeros satisfy it.

Vectors are parametrized by the real and imaginary parts of all block
entries. The flat layout is, block by block, ``Re X_i`` then ``Im X_i`` with
``X_i`` of shape ``(n, d, m_i, m_i)`` in C order.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.optimize import minimize

from .algebra import DEFAULT_TOL, AlgebraDescriptor, AlgebraElement, as_element, spectral_tests
from .equiangular import Configuration, InvalidTargetError
from .hilbert_module import ModuleError, NormalizationError, normalize

ALGORITHM = "L-BFGS-B"


@dataclass(frozen=True)
class SearchProblem:
    algebra: AlgebraDescriptor
    d: int
    n: int
    mode: str = "target-a"
    a: AlgebraElement | float | None = None
    b: AlgebraElement | float | None = None
    gamma: float | None = None
    seed: int = 0
    restarts: int = 10
    max_iterations: int = 3000
    success_loss: float = 1e-20
    memory: int = 20
    gtol: float = 1e-15

    def __post_init__(self):
        if self.d < 1 or self.n < 1:
            raise ValueError("d and n must be positive")
        if self.restarts < 1 or self.max_iterations < 1:
            raise ValueError("restarts and max_iterations must be positive")
        if not self.success_loss > 0:
            raise ValueError("success_loss must be positive")
        if self.mode == "target-a":
            if self.a is None:
                raise InvalidTargetError("target-a mode needs a")
            a = as_element(self.algebra, self.a)
        elif self.mode == "target-gamma":
            if self.gamma is None or not 0.0 <= self.gamma <= 1.0:
                raise InvalidTargetError("target-gamma mode needs gamma in [0, 1]")
            a = self.algebra.scalar(self.gamma ** 2)
        else:
            raise ValueError(f"unknown mode {self.mode!r}")
        b = self.algebra.identity() if self.b is None else as_element(self.algebra, self.b)
        for name, x in (("a", a), ("b", b)):
            if not spectral_tests(x, DEFAULT_TOL).positive:
                raise InvalidTargetError(f"target {name} is not positive")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    def shapes(self) -> list[tuple[int, int, int, int]]:
        return [(self.n, self.d, m, m) for m in self.algebra.block_sizes]


@dataclass
class RestartOutcome:
    config: Configuration
    loss: float
    objective_trace: list[float]
    iterations: int


@dataclass
class SearchResult:
    best_config: Configuration
    best_loss: float
    restart_losses: list[float]
    iterations_used: list[int]
    converged: bool
    best_restart: int
    loss_traces: list[list[float]] = field(default_factory=list)
    metadata: dict = field(default_factory=dict)


# array-level kernels


def _block_terms(x: np.ndarray, a: np.ndarray, b: np.ndarray, want_grad: bool):
    """Loss of one algebra block and its gradient ``dL/dRe + i dL/dIm``."""
    n = x.shape[0]
    g = np.einsum("jrab,krcb->jkac", x, x.conj())
    p = np.einsum("jkab,kjbc->jkac", g, g)
    e = p - a
    idx = np.arange(n)
    e[idx, idx] = 0
    diag = g[idx, idx] - b
    loss = float(np.sum(e.real ** 2 + e.imag ** 2) + np.sum(diag.real ** 2 + diag.imag ** 2))
    if not want_grad:
        return loss, None
    # gt[j, k] = g[k, j]^*
    gt = g.transpose(1, 0, 3, 2).conj()
    gam = np.einsum("jkab,jkbc->jkac", e, gt) + np.einsum("jkab,kjbc->jkac", gt, e)
    gam[idx, idx] += diag
    s = gam + gam.transpose(1, 0, 3, 2).conj()
    psi = np.einsum("jkab,krbc->jrac", s, x)
    return loss, 2 * psi


def _targets(problem: SearchProblem):
    return list(problem.a.blocks), list(problem.b.blocks)


def loss_and_grad_arrays(arrays: Sequence[np.ndarray], a_blocks, b_blocks, weights=None):
    """Total loss and per-block complex gradients; ``weights`` scales each block's term."""
    total, grads = 0.0, []
    for i, (x, a, b) in enumerate(zip(arrays, a_blocks, b_blocks)):
        l, gr = _block_terms(x, a, b, True)
        w = 1.0 if weights is None else weights[i]
        total += w * l
        grads.append(w * gr)
    return total, grads


def pack(arrays: Sequence[np.ndarray]) -> np.ndarray:
    parts = []
    for x in arrays:
        parts.append(x.real.ravel())
        parts.append(x.imag.ravel())
    return np.concatenate(parts)


def unpack(flat: np.ndarray, shapes) -> list[np.ndarray]:
    out, pos = [], 0
    for shp in shapes:
        size = int(np.prod(shp))
        re = flat[pos:pos + size].reshape(shp)
        im = flat[pos + size:pos + 2 * size].reshape(shp)
        out.append(re + 1j * im)
        pos += 2 * size
    return out


def _check_config(config: Configuration, problem: SearchProblem):
    if (config.algebra.block_sizes != problem.algebra.block_sizes
            or config.d != problem.d or config.n != problem.n):
        raise ModuleError(
            f"configuration (A={config.algebra.block_sizes}, d={config.d}, n={config.n}) does not "
            f"match problem (A={problem.algebra.block_sizes}, d={problem.d}, n={problem.n})"
        )


def loss(config: Configuration, problem: SearchProblem) -> float:
    """Penalty loss; zero exactly on (a, b)-equiangular configurations."""
    _check_config(config, problem)
    a_blocks, b_blocks = _targets(problem)
    return sum(_block_terms(x, a, b, False)[0]
               for x, a, b in zip(config.block_arrays(), a_blocks, b_blocks))


def gradient(config: Configuration, problem: SearchProblem) -> np.ndarray:
    """Gradient of :func:`loss` in the flat real parametrization."""
    _check_config(config, problem)
    a_blocks, b_blocks = _targets(problem)
    _, grads = loss_and_grad_arrays(config.block_arrays(), a_blocks, b_blocks)
    return pack(grads)


def polish(config: Configuration, tol: float = DEFAULT_TOL) -> Configuration:
    """Normalize every vector so that ``<t_j, t_j> = 1``."""
    return Configuration(config.algebra, tuple(normalize(v, tol) for v in config.vectors), config.label)


def random_configuration(problem: SearchProblem, rng: np.random.Generator) -> Configuration:
    arrays = [rng.standard_normal(s) + 1j * rng.standard_normal(s) for s in problem.shapes()]
    cfg = Configuration.from_block_arrays(problem.algebra, arrays)
    try:
        return polish(cfg)
    except NormalizationError:
        return cfg


def minimize_from(config: Configuration, problem: SearchProblem) -> RestartOutcome:
    """Run the local minimizer from ``config``.

    The optimizer works on ``u_i = X_i / sqrt(m_i)`` and the objective
    ``sum_i L_i / m_i``, so a scalar problem and its lift into ``M_m(C)``
    follow the same trajectory. ``objective_trace`` records that objective;
    ``loss`` is the unweighted :func:`loss` at the end point.
    """
    _check_config(config, problem)
    shapes = problem.shapes()
    sizes = np.array(problem.algebra.block_sizes, dtype=float)
    scale = np.sqrt(sizes)
    weights = 1.0 / sizes
    a_blocks, b_blocks = _targets(problem)

    def fun(u):
        xs = [xi * s for xi, s in zip(unpack(u, shapes), scale)]
        f, grads = loss_and_grad_arrays(xs, a_blocks, b_blocks, weights)
        return f, pack([gr * s for gr, s in zip(grads, scale)])

    u0 = pack([xi / s for xi, s in zip(config.block_arrays(), scale)])
    f0 = fun(u0)[0]
    trace = [f0]

    def callback(intermediate_result):
        trace.append(float(intermediate_result.fun))
        if intermediate_result.fun <= problem.success_loss * weights.min():
            raise StopIteration

    if f0 <= problem.success_loss * weights.min():
        u, nit = u0, 0
    else:
        res = minimize(fun, u0, jac=True, method=ALGORITHM, callback=callback,
                       options={"maxiter": problem.max_iterations, "maxcor": problem.memory,
                                "ftol": 0.0, "gtol": problem.gtol, "maxfun": 4 * problem.max_iterations})
        u, nit = res.x, int(res.nit)
    xs = [xi * s for xi, s in zip(unpack(u, shapes), scale)]
    cfg = Configuration.from_block_arrays(problem.algebra, xs)
    return RestartOutcome(cfg, loss(cfg, problem), trace, nit)


def solve(problem: SearchProblem) -> SearchResult:
    """Multi-restart search; restart ``r`` draws from ``default_rng(seed + r)``."""
    outcomes = []
    for r in range(problem.restarts):
        rng = np.random.default_rng(problem.seed + r)
        outcome = minimize_from(random_configuration(problem, rng), problem)
        outcomes.append(outcome)
        if outcome.loss <= problem.success_loss:
            break
    losses = [o.loss for o in outcomes]
    best = int(np.argmin(losses))
    meta = {
        "algorithm": ALGORITHM,
        "implementation": "scipy.optimize.minimize",
        "objective": "penalty, block-size weighted",
        "seed": problem.seed,
        "restart_seeds": [problem.seed + r for r in range(len(outcomes))],
        "restarts_requested": problem.restarts,
        "max_iterations": problem.max_iterations,
        "memory": problem.memory,
        "gtol": problem.gtol,
        "success_loss": problem.success_loss,
        "mode": problem.mode,
    }
    return SearchResult(
        best_config=outcomes[best].config,
        best_loss=losses[best],
        restart_losses=losses,
        iterations_used=[o.iterations for o in outcomes],
        converged=losses[best] <= problem.success_loss,
        best_restart=best,
        loss_traces=[o.objective_trace for o in outcomes],
        metadata=meta,
    )
