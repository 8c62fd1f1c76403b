"""Certificates for the relative (van Lint-Seidel type) and universal (Gerzon type) bounds.

Element inequalities are decided in the C*-order: the witness element
(right side minus left side) must be positive at relative tolerance.
Scalars such as ``n`` and ``d`` enter as multiples of the unit.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .algebra import (
    DEFAULT_TOL,
    AlgebraElement,
    AlgebraError,
    as_element,
    inverse,
    op_norm,
    scalars,
    spectral_tests,
)
from .equiangular import (
    Configuration,
    InvalidTargetError,
    verify_modular_ab,
    verify_norm_gamma,
    verify_special,
)
from .hilbert_module import outer_operator


class Theorem(str, Enum):
    VLS_MODULAR = "vls-modular"
    VLS_NORM = "vls-norm"
    VLS_SPECIAL = "vls-special"
    GERZON_MODULAR = "gerzon-modular"
    VLS_AB = "vls-ab"
    GERZON_AB = "gerzon-ab"
    CLASSICAL_RELATIVE = "classical-relative"
    CLASSICAL_GERZON_REAL = "classical-gerzon-real"
    CLASSICAL_GERZON_COMPLEX = "classical-gerzon-complex"


class HypothesisViolation(AlgebraError):
    pass


@dataclass(frozen=True)
class Check:
    name: str
    verdict: bool
    detail: str = ""


@dataclass(frozen=True)
class BoundCertificate:
    """Outcome of one theorem on one instance.

    ``corollaries`` holds derived numeric caps such as ``n <= bound_value``.
    They are reported but do not enter ``passed``: when ``1 - d a`` is
    invertible without being positive, dividing by it reverses the order.
    """

    theorem: Theorem
    d: int
    n: int
    passed: bool
    hypotheses: tuple[Check, ...] = ()
    witness: AlgebraElement | None = None
    bound_value: float | None = None
    corollaries: tuple[Check, ...] = ()
    tol: float = DEFAULT_TOL
    independence: IndependenceReport | None = None

    @property
    def witness_min_eigenvalue(self) -> float | None:
        if self.witness is None:
            return None
        return spectral_tests(self.witness, self.tol).min_eigenvalue


@dataclass(frozen=True)
class IndependenceReport:
    nullspace_dimension: int
    smallest_singular_value: float
    largest_singular_value: float
    threshold: float
    unknowns: int
    equations: int

    @property
    def independent(self) -> bool:
        return self.nullspace_dimension == 0


def _positive_check(name: str, x: AlgebraElement, tol: float) -> Check:
    rep = spectral_tests(x, tol)
    return Check(name, rep.positive, f"min eigenvalue {rep.min_eigenvalue!r}")


def _invertible_check(name: str, x: AlgebraElement, tol: float) -> Check:
    rep = spectral_tests(x, tol)
    return Check(name, rep.invertible, f"min singular value {rep.min_singular_value:.6g}")


def _relative_bound(theorem: Theorem, d: int, n: int, a: AlgebraElement, b: AlgebraElement | None,
                    tol: float) -> BoundCertificate:
    alg = a.algebra
    if not alg.commutative:
        raise HypothesisViolation(
            f"{theorem.value} needs a commutative algebra, got block sizes {alg.block_sizes}"
        )
    if not spectral_tests(a, tol).positive:
        raise InvalidTargetError("a must be positive")
    one = alg.identity()
    if b is None:
        top, bottom = one - a, one - d * a
        top_s, bottom_s = "1-a", "1-da"
    else:
        if not spectral_tests(b, tol).positive:
            raise InvalidTargetError("b must be positive")
        top, bottom = b - a, b * b - d * a
        top_s, bottom_s = "b-a", "b^2-da"
    witness = d * top - n * bottom
    hyps = (
        Check("commutative", True, "all blocks have size 1"),
        _positive_check("a positive", a, tol),
    )
    if b is not None:
        hyps += (_positive_check("b positive", b, tol),)
    passed = spectral_tests(witness, tol).positive

    inv = _invertible_check(f"{bottom_s} invertible", bottom, tol)
    corollaries = [inv]
    bound_value = None
    if inv.verdict:
        bound_value = d * op_norm(top * inverse(bottom, tol))
        corollaries.append(Check(
            f"n <= d*||({top_s})({bottom_s})^-1||",
            n <= bound_value * (1 + tol) + tol,
            f"n={n}, bound={bound_value!r}",
        ))
    return BoundCertificate(theorem, d, n, passed, hyps, witness, bound_value, tuple(corollaries), tol)


def vls_modular(d: int, n: int, a, tol: float = DEFAULT_TOL, algebra=None) -> BoundCertificate:
    """Witness ``d(1-a) - n(1-da)`` for commutative algebras."""
    if algebra is not None:
        a = as_element(algebra, a)
    return _relative_bound(Theorem.VLS_MODULAR, d, n, a, None, tol)


def vls_ab(d: int, n: int, a, b, tol: float = DEFAULT_TOL, algebra=None) -> BoundCertificate:
    """Witness ``d(b-a) - n(b^2-da)`` for commutative algebras."""
    if algebra is not None:
        a, b = as_element(algebra, a), as_element(algebra, b)
    elif isinstance(a, AlgebraElement):
        b = as_element(a.algebra, b)
    return _relative_bound(Theorem.VLS_AB, d, n, a, b, tol)


def vls_norm(d: int, n: int, gamma: float, mode: str = "modular", tol: float = DEFAULT_TOL) -> BoundCertificate:
    """Scalar relative bound ``n(1 - d g^2) <= d(1 - g^2)``."""
    if not 0.0 <= gamma <= 1.0:
        raise InvalidTargetError(f"gamma must lie in [0, 1], got {gamma}")
    if mode not in ("classical", "modular"):
        raise ValueError(f"unknown mode {mode!r}")
    theorem = Theorem.CLASSICAL_RELATIVE if mode == "classical" else Theorem.VLS_NORM
    g2 = gamma * gamma
    lhs, rhs = n * (1 - d * g2), d * (1 - g2)
    passed = lhs <= rhs + tol
    bound_value = None
    corollaries = ()
    # within tol of d g^2 = 1 the quotient is rounding noise, so treat it as the vacuous boundary
    if 1 - d * g2 > tol:
        bound_value = d * (1 - g2) / (1 - d * g2)
        corollaries = (Check("n <= d(1-g^2)/(1-dg^2)", n <= bound_value + tol * (1 + bound_value),
                             f"n={n}, bound={bound_value!r}"),)
    witness = scalars(1).scalar(rhs - lhs)
    hyps = (Check("0 <= gamma <= 1", True, f"gamma={gamma!r}"),)
    return BoundCertificate(theorem, d, n, passed, hyps, witness, bound_value, corollaries, tol)


def vls_special(config: Configuration, gamma: float, tol: float = DEFAULT_TOL) -> BoundCertificate:
    """Noncommutative relative bound; both defining conditions are checked first."""
    sp = verify_special(config, tol=tol)
    ng = verify_norm_gamma(config, gamma, tol)
    hyps = (
        Check("n^2 <= d*B", sp.passed, sp.detail or f"unit deviation {sp.max_unit_deviation:.3g}"),
        Check("norm-gamma equiangular", ng.passed,
              f"unit {ng.max_unit_deviation:.3g}, angle {ng.max_angle_deviation:.3g}"),
    )
    scalar = vls_norm(config.d, config.n, gamma, "modular", tol)
    witness = config.algebra.scalar(scalar.witness.blocks[0][0, 0].real)
    passed = all(h.verdict for h in hyps) and scalar.passed
    return BoundCertificate(Theorem.VLS_SPECIAL, config.d, config.n, passed, hyps, witness,
                            scalar.bound_value, scalar.corollaries, tol)


def gerzon_independence(config: Configuration, tol: float = DEFAULT_TOL) -> IndependenceReport:
    """Test A-linear independence of the rank-one operators ``x -> <x,t_j> t_j``.

    Unknowns are ``c_1..c_n`` in A with ``sum_j c_j M_j = 0`` entrywise, where
    ``M_j[r][s] = t_{j,r}^* t_{j,s}``. Left multiplication acts blockwise and
    row by row, so block ``i`` contributes ``m_i`` identical copies of a
    ``(d^2 m_i) x (n m_i)`` system; singular values are counted with that
    multiplicity.
    """
    n, d = config.n, config.d
    ops = [outer_operator(v) for v in config.vectors]
    sv_all, nullity, unknowns, equations = [], 0, 0, 0
    per_block = []
    for i, m in enumerate(config.algebra.block_sizes):
        # K[(r, s, b), (j, c)] = M_j[r][s][c, b]
        k = np.empty((d, d, m, n, m), dtype=complex)
        for j in range(n):
            for r in range(d):
                for s in range(d):
                    k[r, s, :, j, :] = ops[j][r][s].blocks[i].T
        k = k.reshape(d * d * m, n * m)
        sv = np.linalg.svd(k, compute_uv=False)
        per_block.append((m, sv, n * m))
        unknowns += n * m * m
        equations += d * d * m * m
        sv_all.append(sv)
    smax = max(float(s[0]) if s.size else 0.0 for s in sv_all)
    thresh = tol * smax
    smallest = np.inf
    for m, sv, cols in per_block:
        rank = int(np.sum(sv > thresh))
        nullity += m * (cols - rank)
        smallest = min(smallest, 0.0 if cols > sv.size else float(sv[-1]))
    return IndependenceReport(nullity, float(smallest), smax, thresh, unknowns, equations)


def _gerzon(theorem: Theorem, config: Configuration, a: AlgebraElement, b: AlgebraElement | None,
            tol: float) -> BoundCertificate:
    n, d = config.n, config.d
    one = config.algebra.identity()
    rep = verify_modular_ab(config, a, b, tol)
    hyps = [
        Check("equiangular", rep.passed,
              f"unit {rep.max_unit_deviation:.3g}, angle {rep.max_angle_deviation:.3g}"),
        _positive_check("a positive", a, tol),
    ]
    if b is None:
        hyps += [
            _invertible_check("1-a invertible", one - a, tol),
            _invertible_check("(n-1)a+1 invertible", (n - 1) * a + one, tol),
        ]
    else:
        hyps += [
            _positive_check("b positive", b, tol),
            _invertible_check("b^2-a invertible", b * b - a, tol),
            _invertible_check("(n-1)a+b^2 invertible", (n - 1) * a + b * b, tol),
        ]
    hyps.append(Check("IBN", True, "finite-dimensional C*-algebras are stably finite"))
    ind = gerzon_independence(config, tol)
    hyps.append(Check("rank-one operators A-independent", ind.independent,
                      f"nullspace dimension {ind.nullspace_dimension}"))
    witness = config.algebra.scalar(float(d * d - n))
    passed = all(h.verdict for h in hyps) and n <= d * d
    return BoundCertificate(theorem, d, n, passed, tuple(hyps), witness, float(d * d),
                            (Check("n <= d^2", n <= d * d, f"n={n}, d^2={d * d}"),), tol, ind)


def gerzon_modular(config: Configuration, a, tol: float = DEFAULT_TOL) -> BoundCertificate:
    """Universal bound ``n <= d^2`` for modular ``a``-equiangular lines."""
    return _gerzon(Theorem.GERZON_MODULAR, config, as_element(config.algebra, a), None, tol)


def gerzon_ab(config: Configuration, a, b, tol: float = DEFAULT_TOL) -> BoundCertificate:
    """Universal bound ``n <= d^2`` for modular ``(a, b)``-equiangular lines."""
    return _gerzon(Theorem.GERZON_AB, config, as_element(config.algebra, a),
                   as_element(config.algebra, b), tol)


def classical_gerzon(d: int, n: int, field: str = "complex") -> BoundCertificate:
    """``n <= d(d+1)/2`` over the reals, ``n <= d^2`` over the complex numbers."""
    if d < 1 or n < 1:
        raise ValueError("d and n must be positive")
    if field == "real":
        theorem, cap = Theorem.CLASSICAL_GERZON_REAL, d * (d + 1) // 2
    elif field == "complex":
        theorem, cap = Theorem.CLASSICAL_GERZON_COMPLEX, d * d
    else:
        raise ValueError(f"unknown field {field!r}")
    return BoundCertificate(theorem, d, n, n <= cap, (), scalars(1).scalar(float(cap - n)),
                            float(cap), (Check(f"n <= {cap}", n <= cap),), 0.0)
