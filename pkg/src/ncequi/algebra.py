"""Finite-dimensional C*-algebras as direct sums of full matrix algebras.

An algebra ``M_{n_1}(C) + ... + M_{n_m}(C)`` is described by its block sizes,
and its elements are stored as tuples of square complex blocks. All
operations act blockwise.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from numbers import Number
from typing import Iterable, Sequence

import numpy as np

DEFAULT_TOL = float(os.environ.get("NCEQUI_TOL", "1e-9"))


class AlgebraError(ValueError):
    """Base class for algebra-level errors."""


class IncompatibleAlgebrasError(AlgebraError):
    pass


class OrderUndefinedError(AlgebraError):
    pass


class DomainError(AlgebraError):
    pass


@dataclass(frozen=True)
class AlgebraDescriptor:
    """Block structure of ``M_{n_1}(C) + ... + M_{n_m}(C)``.

    ``real_flag`` only marks that entries are meant to be real (a classical
    real-case configuration); storage is always complex.
    """

    block_sizes: tuple[int, ...]
    real_flag: bool = False

    def __post_init__(self):
        sizes = tuple(int(s) for s in self.block_sizes)
        if not sizes:
            raise AlgebraError("block_sizes must be nonempty")
        if any(s < 1 for s in sizes):
            raise AlgebraError(f"block sizes must be positive, got {sizes}")
        if self.real_flag and any(s != 1 for s in sizes):
            raise AlgebraError("real_flag is only meaningful when every block has size 1")
        object.__setattr__(self, "block_sizes", sizes)

    @property
    def dim(self) -> int:
        """Complex dimension, the sum of squared block sizes."""
        return sum(s * s for s in self.block_sizes)

    @property
    def num_blocks(self) -> int:
        return len(self.block_sizes)

    @property
    def commutative(self) -> bool:
        return all(s == 1 for s in self.block_sizes)

    def identity(self) -> AlgebraElement:
        return AlgebraElement(self, [np.eye(s, dtype=complex) for s in self.block_sizes])

    def zero(self) -> AlgebraElement:
        return AlgebraElement(self, [np.zeros((s, s), dtype=complex) for s in self.block_sizes])

    def scalar(self, value: complex) -> AlgebraElement:
        """``value`` times the unit."""
        return AlgebraElement(self, [value * np.eye(s, dtype=complex) for s in self.block_sizes])

    def from_diagonal(self, values: Sequence[complex]) -> AlgebraElement:
        """Element with block ``i`` equal to ``values[i]`` times the identity."""
        if len(values) != self.num_blocks:
            raise AlgebraError(f"expected {self.num_blocks} values, got {len(values)}")
        return AlgebraElement(
            self, [v * np.eye(s, dtype=complex) for v, s in zip(values, self.block_sizes)]
        )

    def random(self, rng: np.random.Generator, hermitian: bool = False) -> AlgebraElement:
        blocks = []
        for s in self.block_sizes:
            if self.real_flag:
                z = rng.standard_normal((s, s)).astype(complex)
            else:
                z = rng.standard_normal((s, s)) + 1j * rng.standard_normal((s, s))
            if hermitian:
                z = (z + z.conj().T) / 2
            blocks.append(z)
        return AlgebraElement(self, blocks)

    def direct_sum(self, other: AlgebraDescriptor) -> AlgebraDescriptor:
        return AlgebraDescriptor(
            self.block_sizes + other.block_sizes, self.real_flag and other.real_flag
        )


def scalars(m: int = 1, real: bool = False) -> AlgebraDescriptor:
    """The commutative algebra ``C^m``."""
    return AlgebraDescriptor((1,) * m, real)


def matrices(k: int) -> AlgebraDescriptor:
    """The full matrix algebra ``M_k(C)``."""
    return AlgebraDescriptor((k,))


class AlgebraElement:
    """Immutable block-diagonal element of an :class:`AlgebraDescriptor`.

    Supports ``+``, ``-``, ``*`` (element or complex scalar) and unary minus.
    """

    __slots__ = ("algebra", "blocks")

    def __init__(self, algebra: AlgebraDescriptor, blocks: Iterable[np.ndarray]):
        blocks = tuple(np.array(b, dtype=complex) for b in blocks)
        if len(blocks) != algebra.num_blocks:
            raise AlgebraError(
                f"expected {algebra.num_blocks} blocks, got {len(blocks)}"
            )
        for i, (b, s) in enumerate(zip(blocks, algebra.block_sizes)):
            if b.shape != (s, s):
                raise AlgebraError(f"block {i} has shape {b.shape}, expected {(s, s)}")
            b.flags.writeable = False
        object.__setattr__(self, "algebra", algebra)
        object.__setattr__(self, "blocks", blocks)

    def __setattr__(self, name, value):
        raise AttributeError("AlgebraElement is immutable")

    def __repr__(self):
        return f"AlgebraElement(block_sizes={self.algebra.block_sizes}, blocks={list(self.blocks)!r})"

    def _check(self, other: AlgebraElement):
        if not isinstance(other, AlgebraElement):
            raise TypeError(f"expected AlgebraElement, got {type(other).__name__}")
        if other.algebra.block_sizes != self.algebra.block_sizes:
            raise IncompatibleAlgebrasError(
                f"{self.algebra.block_sizes} vs {other.algebra.block_sizes}"
            )

    def __add__(self, other):
        if isinstance(other, Number):
            other = self.algebra.scalar(other)
        elif not isinstance(other, AlgebraElement):
            return NotImplemented
        self._check(other)
        return AlgebraElement(self.algebra, [x + y for x, y in zip(self.blocks, other.blocks)])

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, Number):
            other = self.algebra.scalar(other)
        elif not isinstance(other, AlgebraElement):
            return NotImplemented
        self._check(other)
        return AlgebraElement(self.algebra, [x - y for x, y in zip(self.blocks, other.blocks)])

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return AlgebraElement(self.algebra, [-x for x in self.blocks])

    def __mul__(self, other):
        if isinstance(other, Number):
            return AlgebraElement(self.algebra, [other * x for x in self.blocks])
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        self._check(other)
        return AlgebraElement(self.algebra, [x @ y for x, y in zip(self.blocks, other.blocks)])

    def __rmul__(self, other):
        if isinstance(other, Number):
            return AlgebraElement(self.algebra, [other * x for x in self.blocks])
        return NotImplemented

    def adjoint(self) -> AlgebraElement:
        return AlgebraElement(self.algebra, [x.conj().T for x in self.blocks])

    @property
    def H(self) -> AlgebraElement:
        return self.adjoint()

    def block(self, i: int) -> AlgebraElement:
        """The ``i``-th summand as an element of ``M_{n_i}(C)``."""
        return AlgebraElement(AlgebraDescriptor((self.algebra.block_sizes[i],)), [self.blocks[i]])

    def to_dense(self) -> np.ndarray:
        """Block-diagonal matrix of size ``sum(block_sizes)``."""
        from scipy.linalg import block_diag

        return block_diag(*self.blocks)

    def allclose(self, other: AlgebraElement, atol: float = 1e-12) -> bool:
        self._check(other)
        return op_norm(self - other) <= atol


# functional aliases for the *-algebra operations


def add(x: AlgebraElement, y: AlgebraElement) -> AlgebraElement:
    return x + y


def subtract(x: AlgebraElement, y: AlgebraElement) -> AlgebraElement:
    return x - y


def multiply(x: AlgebraElement, y: AlgebraElement) -> AlgebraElement:
    return x * y


def adjoint(x: AlgebraElement) -> AlgebraElement:
    return x.adjoint()


def scale(x: AlgebraElement, c: complex) -> AlgebraElement:
    return c * x


def op_norm(x: AlgebraElement) -> float:
    """C*-norm: the largest singular value over all blocks."""
    return max(float(np.linalg.norm(b, 2)) for b in x.blocks)


def _hermitian_part(b: np.ndarray) -> np.ndarray:
    return (b + b.conj().T) / 2


@dataclass(frozen=True)
class SpectralReport:
    hermitian: bool
    positive: bool
    invertible: bool
    min_eigenvalue: float | None
    min_singular_value: float
    threshold: float


def spectral_tests(x: AlgebraElement, tol: float = DEFAULT_TOL) -> SpectralReport:
    """Hermitian, positive and invertible predicates at relative tolerance.

    The threshold is ``tol * (1 + ||x||)``.
    """
    if tol < 0:
        raise ValueError("tol must be nonnegative")
    thresh = tol * (1.0 + op_norm(x))
    hermitian = op_norm(x - x.adjoint()) <= thresh
    min_eig = None
    positive = False
    if hermitian:
        min_eig = min(float(np.linalg.eigvalsh(_hermitian_part(b))[0]) for b in x.blocks)
        positive = min_eig >= -thresh
    min_sv = min(float(np.linalg.svd(b, compute_uv=False)[-1]) for b in x.blocks)
    return SpectralReport(hermitian, positive, min_sv > thresh, min_eig, min_sv, thresh)


def eigenvalues(x: AlgebraElement) -> list[np.ndarray]:
    """Per-block ascending eigenvalues of the hermitian part of ``x``."""
    return [np.linalg.eigvalsh(_hermitian_part(b)) for b in x.blocks]


def is_positive(x: AlgebraElement, tol: float = DEFAULT_TOL) -> bool:
    return spectral_tests(x, tol).positive


def is_invertible(x: AlgebraElement, tol: float = DEFAULT_TOL) -> bool:
    return spectral_tests(x, tol).invertible


def psd_leq(x: AlgebraElement, y: AlgebraElement, tol: float = DEFAULT_TOL) -> bool:
    """C*-order ``x <= y``, i.e. ``y - x`` is positive."""
    x._check(y)
    for name, z in (("x", x), ("y", y)):
        if not spectral_tests(z, tol).hermitian:
            raise OrderUndefinedError(f"{name} is not hermitian; the order is undefined")
    return spectral_tests(y - x, tol).positive


def inv_sqrt(x: AlgebraElement, tol: float = DEFAULT_TOL) -> AlgebraElement:
    """``x^{-1/2}`` for positive invertible ``x`` via blockwise ``eigh``."""
    rep = spectral_tests(x, tol)
    if not (rep.positive and rep.invertible):
        raise DomainError(
            f"inv_sqrt needs a positive invertible element (positive={rep.positive}, "
            f"min singular value={rep.min_singular_value:.3e})"
        )
    blocks = []
    for b in x.blocks:
        w, v = np.linalg.eigh(_hermitian_part(b))
        blocks.append((v * w ** -0.5) @ v.conj().T)
    return AlgebraElement(x.algebra, blocks)


def sqrt(x: AlgebraElement, tol: float = DEFAULT_TOL) -> AlgebraElement:
    """Positive square root; tiny negative eigenvalues are clipped to zero."""
    if not spectral_tests(x, tol).positive:
        raise DomainError("sqrt needs a positive element")
    blocks = []
    for b in x.blocks:
        w, v = np.linalg.eigh(_hermitian_part(b))
        blocks.append((v * np.sqrt(np.clip(w, 0, None))) @ v.conj().T)
    return AlgebraElement(x.algebra, blocks)


def inverse(x: AlgebraElement, tol: float = DEFAULT_TOL) -> AlgebraElement:
    if not spectral_tests(x, tol).invertible:
        raise DomainError("element is not invertible")
    return AlgebraElement(x.algebra, [np.linalg.inv(b) for b in x.blocks])


def direct_sum(x: AlgebraElement, y: AlgebraElement) -> AlgebraElement:
    return AlgebraElement(x.algebra.direct_sum(y.algebra), x.blocks + y.blocks)


def as_element(algebra: AlgebraDescriptor, value) -> AlgebraElement:
    """Coerce a number (times the unit) or an element into ``algebra``."""
    if isinstance(value, AlgebraElement):
        if value.algebra.block_sizes != algebra.block_sizes:
            raise IncompatibleAlgebrasError(
                f"{value.algebra.block_sizes} vs {algebra.block_sizes}"
            )
        return value
    if isinstance(value, Number):
        return algebra.scalar(value)
    raise TypeError(f"cannot interpret {type(value).__name__} as an algebra element")
