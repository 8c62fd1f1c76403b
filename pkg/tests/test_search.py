import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ncequi import constructions
from ncequi.algebra import AlgebraDescriptor, matrices, scalars
from ncequi.equiangular import Configuration, verify_modular_ab, verify_norm_gamma
from ncequi.bounds import gerzon_modular
from ncequi.hilbert_module import ModuleError
from ncequi.search import (
    SearchProblem,
    gradient,
    loss,
    minimize_from,
    pack,
    polish,
    random_configuration,
    solve,
    unpack,
)

from conftest import random_config

GRAD_ALGEBRAS = [scalars(1), scalars(3), matrices(2), AlgebraDescriptor((1, 2))]


def finite_difference_check(cfg, problem, rng, h=1e-5):
    """Directional derivative against a central difference along a random direction."""
    shapes = problem.shapes()
    x = pack(cfg.block_arrays())
    v = rng.standard_normal(x.size)
    v /= np.linalg.norm(v)
    step = h * max(1.0, np.linalg.norm(x))

    def f(y):
        return loss(Configuration.from_block_arrays(problem.algebra, unpack(y, shapes)), problem)

    fd = (f(x + step * v) - f(x - step * v)) / (2 * step)
    an = float(gradient(cfg, problem) @ v)
    return abs(fd - an) / max(abs(an), abs(fd), 1e-12)


def test_loss_examples():
    sic = constructions.sic_d2()
    assert loss(sic, SearchProblem(scalars(1), 2, 4, a=1 / 3)) <= 1e-20
    assert loss(constructions.orthonormal(3), SearchProblem(scalars(1), 3, 3, a=0.0)) == 0.0
    pair = constructions.orthonormal(2)
    assert loss(pair, SearchProblem(scalars(1), 2, 2, a=1 / 3)) == pytest.approx(2 / 9, abs=1e-15)


def test_loss_shape_mismatch():
    with pytest.raises(ModuleError):
        loss(constructions.trine(), SearchProblem(scalars(1), 2, 4, a=0.25))


def test_problem_validation():
    with pytest.raises(ValueError):
        SearchProblem(scalars(1), 2, 3, a=0.25, success_loss=0.0)
    with pytest.raises(ValueError):
        SearchProblem(scalars(1), 2, 3, mode="target-gamma")


def test_loss_zero_iff_equiangular(rng):
    for build, a in [(constructions.trine, 0.25), (constructions.icosahedron, 0.2)]:
        cfg = build()
        p = SearchProblem(cfg.algebra, cfg.d, cfg.n, a=a)
        assert loss(cfg, p) <= 1e-24
        assert verify_modular_ab(cfg, a, 1.0, tol=1e-12).passed
    cfg = random_config(rng, scalars(1), 2, 3)
    assert loss(cfg, SearchProblem(scalars(1), 2, 3, a=0.25)) > 0
    assert not verify_modular_ab(cfg, 0.25, 1.0, tol=1e-12).passed


def test_loss_hand_oracle(rng):
    # direct sum over blocks of squared Frobenius deviations
    alg = AlgebraDescriptor((1, 2))
    cfg = random_config(rng, alg, 2, 3)
    a, b = alg.scalar(0.3), alg.scalar(1.2)
    g = cfg.gram
    expected = 0.0
    for j in range(3):
        for k in range(3):
            dev = g.entry(j, j) - b if j == k else g.entry(j, k) * g.entry(k, j) - a
            expected += sum(float(np.sum(np.abs(blk) ** 2)) for blk in dev.blocks)
    got = loss(cfg, SearchProblem(alg, 2, 3, a=a, b=b))
    assert got == pytest.approx(expected, rel=1e-12)


@pytest.mark.parametrize("alg", GRAD_ALGEBRAS, ids=str)
def test_gradient_finite_differences(alg, rng):
    for mode in ("target-a", "target-gamma"):
        kw = {"a": alg.scalar(0.3)} if mode == "target-a" else {"gamma": 0.5}
        p = SearchProblem(alg, 2, 3, mode=mode, **kw)
        for _ in range(3):
            assert finite_difference_check(random_config(rng, alg, 2, 3), p, rng) <= 1e-6


@settings(max_examples=20, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), which=st.integers(0, len(GRAD_ALGEBRAS) - 1),
       d=st.integers(1, 3), n=st.integers(1, 4))
def test_gradient_property(seed, which, d, n):
    rng = np.random.default_rng(seed)
    alg = GRAD_ALGEBRAS[which]
    a = alg.from_diagonal(rng.uniform(0.1, 0.9, alg.num_blocks))
    p = SearchProblem(alg, d, n, a=a)
    assert finite_difference_check(random_config(rng, alg, d, n), p, rng) <= 1e-6


def test_gradient_vanishes_at_solution():
    for cfg, a in [(constructions.sic_d2(), 1 / 3), (constructions.trine(), 0.25)]:
        g = gradient(cfg, SearchProblem(cfg.algebra, cfg.d, cfg.n, a=a))
        assert np.linalg.norm(g) <= 1e-9


def test_lifted_gradient_is_block_constant(rng):
    base = random_config(rng, scalars(1), 2, 3)
    alg = matrices(2)
    lifted = constructions.scalar_lift(base, alg)
    g_s = unpack(gradient(base, SearchProblem(scalars(1), 2, 3, a=0.25)), [(3, 2, 1, 1)])[0]
    g_l = unpack(gradient(lifted, SearchProblem(alg, 2, 3, a=0.25)), [(3, 2, 2, 2)])[0]
    for j in range(3):
        for r in range(2):
            # lifted loss is m times the scalar loss, so the gradient is the scalar one on the diagonal
            assert np.allclose(g_l[j, r], g_s[j, r, 0, 0] * np.eye(2), atol=1e-12)


def test_polish_examples(rng):
    sic = constructions.sic_d2()
    same = polish(sic)
    for u, v in zip(sic.vectors, same.vectors):
        for x, y in zip(u.components, v.components):
            assert x.allclose(y, 1e-12)
    scaled = Configuration(sic.algebra, tuple(rng.uniform(0.2, 5.0) * v for v in sic.vectors))
    assert not verify_modular_ab(scaled, 1 / 3).passed
    rep = verify_modular_ab(polish(scaled), 1 / 3, 1.0, tol=1e-9)
    assert rep.passed
    for alg in (scalars(2), matrices(2), AlgebraDescriptor((1, 2))):
        cfg = polish(random_config(rng, alg, 3, 4))
        assert verify_modular_ab(cfg, alg.identity(), tol=1e9).max_unit_deviation <= 1e-10


def test_random_configuration_is_normalized(rng):
    p = SearchProblem(AlgebraDescriptor((1, 2)), 2, 3, a=0.25)
    cfg = random_configuration(p, rng)
    assert verify_norm_gamma(cfg, 0.5, tol=1e9).max_unit_deviation <= 1e-10


def test_solve_feasible_sic():
    p = SearchProblem(scalars(1), 2, 4, a=1 / 3, restarts=50, seed=0)
    res = solve(p)
    assert res.converged and res.best_loss <= 1e-12
    assert res.best_loss == min(res.restart_losses)
    cfg = polish(res.best_config)
    assert verify_modular_ab(cfg, 1 / 3, 1.0, tol=1e-8).passed
    assert gerzon_modular(cfg, 1 / 3, tol=1e-8).passed
    assert res.metadata["algorithm"] == "L-BFGS-B"


def test_solve_target_gamma():
    p = SearchProblem(scalars(1), 2, 3, mode="target-gamma", gamma=0.5, restarts=20)
    res = solve(p)
    assert res.converged
    assert verify_norm_gamma(polish(res.best_config), 0.5, tol=1e-8).passed


def test_solve_noncommutative():
    alg = AlgebraDescriptor((1, 2))
    p = SearchProblem(alg, 2, 3, a=0.25, restarts=20, seed=3)
    res = solve(p)
    assert res.converged
    assert verify_modular_ab(polish(res.best_config), 0.25, 1.0, tol=1e-8).passed


def test_solve_is_deterministic():
    p = SearchProblem(scalars(1), 2, 5, a=0.3, restarts=3, max_iterations=200, seed=11)
    r1, r2 = solve(p), solve(p)
    assert r1.restart_losses == r2.restart_losses
    assert r1.iterations_used == r2.iterations_used
    assert not r1.converged


def test_lifted_trace_matches_scalar(rng):
    base = polish(random_config(rng, scalars(1), 2, 4))
    for alg in (matrices(2), matrices(3)):
        lifted = constructions.scalar_lift(base, alg)
        ps = SearchProblem(scalars(1), 2, 4, a=1 / 3, max_iterations=25)
        pl = SearchProblem(alg, 2, 4, a=alg.scalar(1 / 3), max_iterations=25)
        ts = minimize_from(base, ps).objective_trace
        tl = minimize_from(lifted, pl).objective_trace
        assert len(ts) == len(tl)
        assert np.max(np.abs(np.array(ts) - np.array(tl))) <= 1e-10
