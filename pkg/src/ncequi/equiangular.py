"""Configurations of module vectors and equiangularity verifiers."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

import numpy as np

from .algebra import (
    DEFAULT_TOL,
    AlgebraDescriptor,
    AlgebraElement,
    AlgebraError,
    as_element,
    op_norm,
    psd_leq,
    spectral_tests,
)
from .hilbert_module import GramMatrix, ModuleError, ModuleVector, gram_blocks


class InvalidTargetError(AlgebraError):
    pass


@dataclass(frozen=True, eq=False)
class Configuration:
    """``n`` vectors of ``A^d`` sharing one algebra."""

    algebra: AlgebraDescriptor
    vectors: tuple[ModuleVector, ...]
    label: str | None = None

    def __post_init__(self):
        vectors = tuple(self.vectors)
        if not vectors:
            raise ModuleError("a configuration needs n >= 1 vectors")
        d = vectors[0].d
        for j, v in enumerate(vectors):
            if v.algebra.block_sizes != self.algebra.block_sizes:
                raise ModuleError(f"vector {j} lives over {v.algebra.block_sizes}")
            if v.d != d:
                raise ModuleError(f"vector {j} has d={v.d}, expected {d}")
        object.__setattr__(self, "vectors", vectors)

    @property
    def n(self) -> int:
        return len(self.vectors)

    @property
    def d(self) -> int:
        return self.vectors[0].d

    def block_arrays(self) -> list[np.ndarray]:
        """Per algebra block, the vectors as an array of shape ``(n, d, m, m)``."""
        return [a.copy() for a in self._arrays]

    @cached_property
    def _arrays(self) -> list[np.ndarray]:
        per_vec = [v.block_arrays() for v in self.vectors]
        return [np.stack([pv[i] for pv in per_vec]) for i in range(self.algebra.num_blocks)]

    @cached_property
    def gram(self) -> GramMatrix:
        return GramMatrix(self.algebra, tuple(gram_blocks(self._arrays)))

    @classmethod
    def from_block_arrays(cls, algebra: AlgebraDescriptor, arrays: Sequence[np.ndarray],
                          label: str | None = None) -> Configuration:
        arrays = [np.asarray(a, dtype=complex) for a in arrays]
        n = arrays[0].shape[0]
        vecs = [ModuleVector.from_block_arrays(algebra, [a[j] for a in arrays]) for j in range(n)]
        return cls(algebra, tuple(vecs), label)

    @classmethod
    def from_scalar_rows(cls, rows, algebra: AlgebraDescriptor | None = None,
                         label: str | None = None, real: bool = False) -> Configuration:
        """Configuration from an ``n x d`` complex array, lifted into ``algebra`` (default ``C``)."""
        rows = np.asarray(rows, dtype=complex)
        if algebra is None:
            algebra = AlgebraDescriptor((1,), real)
        arrays = [
            rows[:, :, None, None] * np.eye(m, dtype=complex)[None, None]
            for m in algebra.block_sizes
        ]
        return cls.from_block_arrays(algebra, arrays, label)

    def block(self, i: int) -> Configuration:
        """The sub-configuration over the ``i``-th summand of the algebra."""
        alg = AlgebraDescriptor((self.algebra.block_sizes[i],),
                                self.algebra.real_flag and self.algebra.block_sizes[i] == 1)
        return Configuration.from_block_arrays(alg, [self._arrays[i]], self.label)

    def scaled(self, c: complex) -> Configuration:
        return Configuration.from_block_arrays(self.algebra, [c * a for a in self._arrays], self.label)


@dataclass(frozen=True)
class VerificationReport:
    kind: str
    passed: bool
    max_unit_deviation: float
    max_angle_deviation: float | None
    tol: float
    worst_unit_index: int | None = None
    worst_pair: tuple[int, int] | None = None
    witness: AlgebraElement | None = None
    detail: str = ""


def _worst(values: np.ndarray):
    # argmax returns the first occurrence, so ties resolve to the smallest index
    idx = int(np.argmax(values))
    return float(values[idx]), idx


def _unit_deviations(config: Configuration, b: AlgebraElement) -> np.ndarray:
    g = config.gram
    return np.array([op_norm(g.entry(j, j) - b) for j in range(config.n)])


def _pair_products(config: Configuration):
    """Yield ``(j, k, <tau_j,tau_k><tau_k,tau_j>)`` over ordered pairs ``j != k``."""
    n = config.n
    prods = [np.einsum("jkab,kjbc->jkac", g, g) for g in config.gram.blocks]
    for j in range(n):
        for k in range(n):
            if j != k:
                yield j, k, AlgebraElement(config.algebra, [p[j, k] for p in prods])


def _check_target(name: str, x: AlgebraElement, tol: float):
    if not spectral_tests(x, tol).positive:
        raise InvalidTargetError(f"target {name} is not a positive element")


def verify_modular_ab(config: Configuration, a, b=None, tol: float = DEFAULT_TOL) -> VerificationReport:
    """Check ``<t_j,t_j> = b`` and ``<t_j,t_k><t_k,t_j> = a`` for all ordered ``j != k``.

    With ``b`` omitted (the unit) this is the modular ``a``-equiangular test.
    """
    a = as_element(config.algebra, a)
    kind = "modular-a" if b is None else "modular-ab"
    b = config.algebra.identity() if b is None else as_element(config.algebra, b)
    _check_target("a", a, tol)
    _check_target("b", b, tol)

    unit = _unit_deviations(config, b)
    unit_dev, unit_idx = _worst(unit)
    pairs = [(j, k, op_norm(p - a)) for j, k, p in _pair_products(config)]
    if pairs:
        angle = np.array([p[2] for p in pairs])
        angle_dev, idx = _worst(angle)
        worst_pair = pairs[idx][:2]
    else:
        angle_dev, worst_pair = 0.0, None
    passed = unit_dev <= tol and angle_dev <= tol
    return VerificationReport(kind, passed, unit_dev, angle_dev, tol, unit_idx, worst_pair)


def verify_norm_gamma(config: Configuration, gamma: float, tol: float = DEFAULT_TOL) -> VerificationReport:
    """Check unit self inner products and ``||<t_j,t_k>|| = gamma`` for ``j != k``."""
    if not 0.0 <= gamma <= 1.0:
        raise InvalidTargetError(f"gamma must lie in [0, 1], got {gamma}")
    unit_dev, unit_idx = _worst(_unit_deviations(config, config.algebra.identity()))
    g = config.gram
    n = config.n
    pairs = [(j, k) for j in range(n) for k in range(n) if j != k]
    if pairs:
        angle = np.array([abs(op_norm(g.entry(j, k)) - gamma) for j, k in pairs])
        angle_dev, idx = _worst(angle)
        worst_pair = pairs[idx]
    else:
        angle_dev, worst_pair = 0.0, None
    passed = unit_dev <= tol and angle_dev <= tol
    return VerificationReport("norm-gamma", passed, unit_dev, angle_dev, tol, unit_idx, worst_pair)


def compute_B(config: Configuration) -> AlgebraElement:
    """``sum_{j,k} <t_j,t_k><t_k,t_j>`` over all ordered pairs, diagonal included."""
    blocks = [np.einsum("jkab,kjbc->ac", g, g) for g in config.gram.blocks]
    return AlgebraElement(config.algebra, blocks)


def verify_special(config: Configuration, gamma: float | None = None,
                   tol: float = DEFAULT_TOL) -> VerificationReport:
    """Check ``n^2 * 1 <= d * B`` in the C*-order, plus unit self inner products.

    If ``gamma`` is given the norm condition is checked as well. The witness
    is ``d * B - n^2 * 1``.
    """
    n, d = config.n, config.d
    one = config.algebra.identity()
    B = compute_B(config)
    witness = d * B - (n * n) * one
    order_ok = psd_leq((n * n) * one, d * B, tol)
    unit_dev, unit_idx = _worst(_unit_deviations(config, one))
    angle_dev, worst_pair = None, None
    passed = order_ok and unit_dev <= tol
    if gamma is not None:
        ng = verify_norm_gamma(config, gamma, tol)
        angle_dev, worst_pair = ng.max_angle_deviation, ng.worst_pair
        passed = passed and ng.passed
    detail = "" if order_ok else "n^2 * 1 <= d * B fails"
    return VerificationReport("special", passed, unit_dev, angle_dev, tol, unit_idx, worst_pair,
                              witness, detail)


def infer_targets(config: Configuration) -> dict:
    """Read candidate targets off the first pair: ``a``, ``b`` and ``gamma``."""
    g = config.gram
    b = g.entry(0, 0)
    if config.n < 2:
        return {"a": config.algebra.zero(), "b": b, "gamma": 0.0}
    g01 = g.entry(0, 1)
    a = g01 * g.entry(1, 0)
    a = AlgebraElement(config.algebra, [(x + x.conj().T) / 2 for x in a.blocks])
    return {"a": a, "b": b, "gamma": min(op_norm(g01), 1.0)}
