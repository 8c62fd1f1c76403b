import numpy as np
import pytest

from ncequi import constructions
from ncequi.algebra import AlgebraDescriptor, AlgebraElement, matrices, op_norm, scalars
from ncequi.equiangular import Configuration
from ncequi.hilbert_module import (
    ModuleError,
    ModuleVector,
    NormalizationError,
    apply_outer,
    basis_vector,
    gram,
    inner_product,
    normalize,
    outer_operator,
)

from conftest import random_config, random_unitary

MIXED = AlgebraDescriptor((1, 2))


def rand_vec(rng, alg, d):
    return ModuleVector(alg, [alg.random(rng) for _ in range(d)])


def test_inner_product_examples():
    c = scalars(1)
    e1, e2 = basis_vector(c, 2, 0), basis_vector(c, 2, 1)
    assert op_norm(inner_product(e1, e2)) == 0
    assert inner_product(e1, e1).allclose(c.identity(), 0)


def test_inner_product_scalar_lift(rng):
    alg = matrices(2)
    x = rng.standard_normal(3) + 1j * rng.standard_normal(3)
    y = rng.standard_normal(3) + 1j * rng.standard_normal(3)
    ip = inner_product(ModuleVector.from_scalars(alg, x), ModuleVector.from_scalars(alg, y))
    expected = sum(xj * np.conj(yj) for xj, yj in zip(x, y))
    assert ip.allclose(alg.scalar(expected), 1e-14)


def test_inner_product_mismatch(rng):
    with pytest.raises(ModuleError):
        inner_product(rand_vec(rng, MIXED, 2), rand_vec(rng, MIXED, 3))
    with pytest.raises(ValueError):
        inner_product(rand_vec(rng, MIXED, 2), rand_vec(rng, scalars(2), 2))


def test_inner_product_properties(rng):
    for _ in range(20):
        u, v, w = (rand_vec(rng, MIXED, 3) for _ in range(3))
        c = MIXED.random(rng)
        assert op_norm(inner_product(u, v) - inner_product(v, u).adjoint()) <= 1e-14
        lhs = inner_product(c * u + w, v)
        rhs = c * inner_product(u, v) + inner_product(w, v)
        assert op_norm(lhs - rhs) <= 1e-12
        # Cauchy-Schwarz
        assert op_norm(inner_product(u, v)) ** 2 <= (
            op_norm(inner_product(u, u)) * op_norm(inner_product(v, v)) + 1e-10
        )


def test_gram_examples():
    g = gram(constructions.orthonormal(3, MIXED))
    for j in range(3):
        for k in range(3):
            expected = MIXED.identity() if j == k else MIXED.zero()
            assert g.entry(j, k).allclose(expected, 0)
    single = Configuration.from_scalar_rows([[0.6, 0.8]])
    assert gram(single).entry(0, 0).allclose(scalars(1).identity(), 1e-15)
    g = gram(constructions.trine())
    for j in range(3):
        for k in range(3):
            if j != k:
                assert abs(g.entry(j, k).blocks[0][0, 0]) == pytest.approx(np.cos(np.pi / 3))


def test_gram_symmetry_and_psd(rng):
    for alg in (scalars(2), matrices(2), MIXED):
        cfg = random_config(rng, alg, 3, 5)
        g = gram(cfg)
        for j in range(5):
            for k in range(5):
                # mirrored entries are bit-identical adjoints
                for a, b in zip(g.entry(k, j).blocks, g.entry(j, k).adjoint().blocks):
                    assert np.array_equal(a, b)
        big = g.assemble()
        assert big.shape == (5 * sum(alg.block_sizes),) * 2
        assert np.linalg.eigvalsh(big).min() >= -1e-9


def test_gram_scalar_unitary_invariance(rng):
    cfg = random_config(rng, MIXED, 3, 4)
    u = random_unitary(rng, 3)
    mixed = Configuration(MIXED, tuple(v.right_mix(u) for v in cfg.vectors))
    g0, g1 = gram(cfg), gram(mixed)
    for j in range(4):
        for k in range(4):
            assert op_norm(g0.entry(j, k) - g1.entry(j, k)) <= 1e-10


def test_normalize_examples(rng):
    u = ModuleVector.from_scalars(scalars(1), [3, 4])
    nu = normalize(u)
    assert inner_product(nu, nu).allclose(scalars(1).identity(), 1e-15)
    assert nu.components[0].blocks[0][0, 0] == pytest.approx(0.6)
    again = normalize(nu)
    for x, y in zip(again.components, nu.components):
        assert x.allclose(y, 1e-12)
    alg = matrices(2)
    for _ in range(10):
        w = normalize(rand_vec(rng, alg, 3))
        assert op_norm(inner_product(w, w) - alg.identity()) <= 1e-10


def test_normalize_rejects_degenerate():
    alg = matrices(2)
    with pytest.raises(NormalizationError):
        normalize(ModuleVector(alg, [alg.zero(), alg.zero()]))
    proj = AlgebraElement(alg, [np.diag([1.0, 0.0])])
    with pytest.raises(NormalizationError):
        normalize(ModuleVector(alg, [proj, alg.zero()]))


def test_outer_operator_examples(rng):
    m = outer_operator(basis_vector(MIXED, 3, 0))
    for r in range(3):
        for s in range(3):
            expected = MIXED.identity() if r == s == 0 else MIXED.zero()
            assert m[r][s].allclose(expected, 0)
    t = rng.standard_normal(3) + 1j * rng.standard_normal(3)
    m = outer_operator(ModuleVector.from_scalars(scalars(1), t))
    dense = np.array([[m[r][s].blocks[0][0, 0] for s in range(3)] for r in range(3)])
    assert np.allclose(dense, np.outer(t.conj(), t), atol=1e-15)
    assert np.linalg.matrix_rank(dense) == 1


def test_outer_operator_action(rng):
    for alg in (scalars(2), MIXED):
        t = rand_vec(rng, alg, 3)
        m = outer_operator(t)
        for _ in range(10):
            x = rand_vec(rng, alg, 3)
            direct = inner_product(x, t) * t
            via = apply_outer(m, x)
            for a, b in zip(direct.components, via.components):
                assert op_norm(a - b) <= 1e-12 * (1 + op_norm(a))
