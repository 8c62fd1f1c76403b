import numpy as np
import pytest

from ncequi import constructions
from ncequi.algebra import AlgebraDescriptor, matrices, op_norm, scalars
from ncequi.bounds import (
    HypothesisViolation,
    Theorem,
    classical_gerzon,
    gerzon_ab,
    gerzon_independence,
    gerzon_modular,
    vls_ab,
    vls_modular,
    vls_norm,
    vls_special,
)
from ncequi.equiangular import Configuration, InvalidTargetError

from conftest import SCALAR_SEEDS, random_config

C = scalars(1)


def witness_scalar(cert, i=0):
    return cert.witness.blocks[i][0, 0].real


def test_vls_modular_scalar_examples():
    cert = vls_modular(2, 3, 0.25, algebra=C)
    assert cert.passed and cert.theorem is Theorem.VLS_MODULAR
    assert witness_scalar(cert) == pytest.approx(0.0, abs=1e-15)
    assert cert.bound_value == pytest.approx(3.0)
    cert = vls_modular(2, 4, 0.25, algebra=C)
    assert not cert.passed
    assert witness_scalar(cert) == pytest.approx(-0.5)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_vls_modular_componentwise(n):
    alg = scalars(2)
    cert = vls_modular(2, n, alg.from_diagonal([0.25, 0.0]))
    assert witness_scalar(cert, 0) == pytest.approx(1.5 - n / 2)
    assert witness_scalar(cert, 1) == pytest.approx(2 - n)
    assert cert.passed == (n <= 2)


def test_vls_modular_vacuous_boundary():
    for n in (1, 10, 1000):
        cert = vls_modular(4, n, 0.25, algebra=C)
        assert cert.passed
        assert witness_scalar(cert) == pytest.approx(4 * 0.75)
        assert cert.bound_value is None
        assert cert.corollaries[0].verdict is False


def test_vls_modular_hypotheses():
    with pytest.raises(HypothesisViolation):
        vls_modular(2, 3, matrices(2).scalar(0.25))
    with pytest.raises(InvalidTargetError):
        vls_modular(2, 3, -0.1, algebra=C)


def test_division_corollary_can_fail_when_denominator_is_negative():
    # 1 - d a = -0.8 is invertible but negative: the element inequality holds,
    # while the divided form n <= d ||(1-a)/(1-da)|| = 0.25 does not
    cert = vls_modular(2, 2, 0.9, algebra=C)
    assert cert.passed
    assert cert.bound_value == pytest.approx(0.25)
    assert cert.corollaries[-1].verdict is False


def test_vls_norm_examples():
    cert = vls_norm(2, 3, 0.5)
    assert cert.passed and cert.bound_value == pytest.approx(3.0)
    cert = vls_norm(3, 6, 1 / np.sqrt(5), "classical")
    assert cert.passed and cert.theorem is Theorem.CLASSICAL_RELATIVE
    assert cert.bound_value == pytest.approx(6.0, abs=1e-12)
    for n in (1, 5, 50):
        cert = vls_norm(2, n, 1 / np.sqrt(2))
        assert cert.passed and cert.bound_value is None
    assert not vls_norm(2, 4, 0.5).passed
    with pytest.raises(InvalidTargetError):
        vls_norm(2, 3, 1.2)


def test_vls_norm_welch_equality():
    for d in range(2, 50):
        for n in range(d + 1, 51):
            g2 = (n - d) / (d * (n - 1))
            if d * g2 >= 1:
                continue
            cert = vls_norm(d, n, np.sqrt(g2), "classical")
            assert cert.passed
            assert abs(cert.bound_value - n) <= 1e-12 * n
            assert abs(witness_scalar(cert)) <= 1e-12 * n


def test_vls_special_examples():
    assert vls_special(constructions.trine(), 0.5).passed
    assert vls_special(constructions.orthonormal(3), 0.0).passed
    lifted = constructions.scalar_lift(constructions.sic_d2(), matrices(2))
    cert = vls_special(lifted, 1 / np.sqrt(3))
    assert cert.passed
    assert cert.bound_value == pytest.approx(4.0)
    cert = vls_special(constructions.trine(), 0.4)
    assert not cert.passed
    assert not cert.hypotheses[1].verdict


def full_system_nullity(cfg, tol=1e-9):
    """Oracle: the dense system in all dim(A) n unknowns, solved without row decoupling."""
    alg, n, d = cfg.algebra, cfg.n, cfg.d
    basis = []
    for i, m in enumerate(alg.block_sizes):
        for a in range(m):
            for c in range(m):
                blocks = [np.zeros((s, s), dtype=complex) for s in alg.block_sizes]
                blocks[i][a, c] = 1
                basis.append(blocks)
    arrays = cfg.block_arrays()
    cols = []
    for j in range(n):
        for e in basis:
            col = []
            for r in range(d):
                for s in range(d):
                    for i in range(alg.num_blocks):
                        t = arrays[i][j]
                        mrs = t[r].conj().T @ t[s]
                        col.append((e[i] @ mrs).ravel())
            cols.append(np.concatenate(col))
    k = np.stack(cols, axis=1)
    sv = np.linalg.svd(k, compute_uv=False)
    rank = int(np.sum(sv > tol * sv[0]))
    return k.shape[1] - rank


def test_independence_examples():
    rep = gerzon_independence(constructions.repeated_vector(2, 2))
    assert not rep.independent and rep.nullspace_dimension >= 1
    alg = AlgebraDescriptor((1, 2))
    rep = gerzon_independence(constructions.repeated_vector(2, 2, alg))
    assert rep.nullspace_dimension >= alg.dim
    assert gerzon_independence(constructions.orthonormal(3, alg)).independent
    rep = gerzon_independence(constructions.sic_d2())
    assert rep.independent
    assert rep.unknowns == 4 and rep.equations == 4


def test_independence_matches_dense_oracle(rng):
    cases = [
        constructions.sic_d2(),
        constructions.repeated_vector(3, 2, AlgebraDescriptor((1, 2))),
        constructions.scalar_lift(constructions.trine(), matrices(2)),
        random_config(rng, AlgebraDescriptor((1, 2)), 2, 3),
        random_config(rng, matrices(2), 2, 5),
        random_config(rng, scalars(2), 2, 6),
    ]
    for cfg in cases:
        rep = gerzon_independence(cfg)
        assert rep.nullspace_dimension == full_system_nullity(cfg)


def test_gerzon_modular_examples():
    cert = gerzon_modular(constructions.sic_d2(), 1 / 3)
    assert cert.passed and cert.n == 4 and cert.bound_value == 4
    assert cert.independence.independent
    assert gerzon_modular(constructions.orthonormal(3), 0.0).passed
    cert = gerzon_modular(constructions.repeated_vector(2, 2), 1.0)
    assert not cert.passed
    by_name = {h.name: h for h in cert.hypotheses}
    assert by_name["equiangular"].verdict
    assert not by_name["1-a invertible"].verdict
    cert = gerzon_modular(constructions.trine(), 0.3)
    assert not cert.passed


def test_vls_ab_examples():
    for (d, n, a) in [(2, 3, 0.25), (2, 4, 0.25), (3, 6, 0.2), (2, 7, 0.5)]:
        m = vls_modular(d, n, a, algebra=C)
        ab = vls_ab(d, n, a, 1.0, algebra=C)
        assert m.passed == ab.passed
        assert witness_scalar(m) == witness_scalar(ab)
    cert = vls_ab(2, 3, 4.0, 4.0, algebra=C)
    assert not cert.passed
    assert witness_scalar(cert) == pytest.approx(2 * 0 - 3 * (16 - 8))
    alg = scalars(2)
    cert = vls_ab(2, 2, alg.from_diagonal([0.25, 0.0]), alg.identity())
    assert cert.passed
    assert witness_scalar(cert, 0) == pytest.approx(0.5)
    assert witness_scalar(cert, 1) == pytest.approx(0.0)


def test_gerzon_ab_examples():
    assert gerzon_ab(constructions.sic_d2(), 1 / 3, 1.0).passed
    doubled = constructions.trine().scaled(2.0)
    cert = gerzon_ab(doubled, 4.0, 4.0)
    assert cert.passed
    details = {h.name: h.detail for h in cert.hypotheses}
    assert "12" in details["b^2-a invertible"]
    cert = gerzon_ab(constructions.repeated_vector(2, 2), 1.0, 1.0)
    assert not cert.passed


def test_classical_gerzon():
    assert classical_gerzon(3, 6, "real").passed
    assert classical_gerzon(2, 4, "complex").passed
    assert not classical_gerzon(2, 4, "real").passed
    assert not classical_gerzon(2, 5, "complex").passed


def test_reduction_coherence(rng):
    for _ in range(100):
        d = int(rng.integers(1, 8))
        n = int(rng.integers(1, 60))
        m = int(rng.integers(1, 4))
        alg = scalars(m)
        a = alg.from_diagonal(rng.uniform(0, 1, m))
        c1 = vls_modular(d, n, a)
        c2 = vls_ab(d, n, a, alg.identity())
        assert c1.passed == c2.passed
        if c1.bound_value is None:
            assert c2.bound_value is None
        else:
            assert abs(c1.bound_value - c2.bound_value) <= 1e-14 * max(1.0, c1.bound_value)


@pytest.mark.parametrize("name", sorted(SCALAR_SEEDS))
def test_soundness_on_corpus(name):
    build, a = SCALAR_SEEDS[name]
    cfg = build()
    cert = vls_modular(cfg.d, cfg.n, a, algebra=cfg.algebra)
    assert cert.passed and cert.witness_min_eigenvalue >= -1e-9
    cert = gerzon_modular(cfg, a)
    assert cert.passed and cert.independence.independent
