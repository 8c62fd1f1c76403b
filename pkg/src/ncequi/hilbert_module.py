"""The standard left Hilbert C*-module ``A^d``.

The inner product is linear in the first slot,
``<u, v> = sum_j u_j v_j^*``, and the module action is left multiplication.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .algebra import (
    DEFAULT_TOL,
    AlgebraDescriptor,
    AlgebraElement,
    AlgebraError,
    DomainError,
    IncompatibleAlgebrasError,
    inv_sqrt,
    spectral_tests,
)


class ModuleError(AlgebraError):
    pass


class NormalizationError(ModuleError, DomainError):
    pass


class ModuleVector:
    """A length-``d`` tuple of elements of one algebra."""

    __slots__ = ("algebra", "components")

    def __init__(self, algebra: AlgebraDescriptor, components: Sequence[AlgebraElement]):
        components = tuple(components)
        if not components:
            raise ModuleError("a module vector needs d >= 1 components")
        for r, c in enumerate(components):
            if c.algebra.block_sizes != algebra.block_sizes:
                raise IncompatibleAlgebrasError(
                    f"component {r} lives in {c.algebra.block_sizes}, expected {algebra.block_sizes}"
                )
        object.__setattr__(self, "algebra", algebra)
        object.__setattr__(self, "components", components)

    def __setattr__(self, name, value):
        raise AttributeError("ModuleVector is immutable")

    def __repr__(self):
        return f"ModuleVector(d={self.d}, block_sizes={self.algebra.block_sizes})"

    @property
    def d(self) -> int:
        return len(self.components)

    def __len__(self):
        return self.d

    def __getitem__(self, r: int) -> AlgebraElement:
        return self.components[r]

    def __add__(self, other: ModuleVector) -> ModuleVector:
        _check_pair(self, other)
        return ModuleVector(self.algebra, [x + y for x, y in zip(self.components, other.components)])

    def __sub__(self, other: ModuleVector) -> ModuleVector:
        _check_pair(self, other)
        return ModuleVector(self.algebra, [x - y for x, y in zip(self.components, other.components)])

    def __neg__(self):
        return ModuleVector(self.algebra, [-x for x in self.components])

    def __rmul__(self, c):
        # left module action, by an algebra element or a complex scalar
        return ModuleVector(self.algebra, [c * x for x in self.components])

    def __mul__(self, c):
        # right multiplication; scalars commute, so this only matters for elements
        return ModuleVector(self.algebra, [x * c for x in self.components])

    def right_mix(self, u: np.ndarray) -> ModuleVector:
        """Mix components by a complex ``d x d`` matrix: ``(t U)_s = sum_r t_r U[r, s]``."""
        u = np.asarray(u)
        if u.shape != (self.d, self.d):
            raise ModuleError(f"mixing matrix must be {self.d}x{self.d}")
        comps = []
        for s in range(self.d):
            acc = self.algebra.zero()
            for r in range(self.d):
                acc = acc + complex(u[r, s]) * self.components[r]
            comps.append(acc)
        return ModuleVector(self.algebra, comps)

    def block_arrays(self) -> list[np.ndarray]:
        """Per algebra block, an array of shape ``(d, m, m)``."""
        return [
            np.stack([c.blocks[i] for c in self.components])
            for i in range(self.algebra.num_blocks)
        ]

    @classmethod
    def from_block_arrays(cls, algebra: AlgebraDescriptor, arrays: Sequence[np.ndarray]) -> ModuleVector:
        d = arrays[0].shape[0]
        comps = [AlgebraElement(algebra, [arr[r] for arr in arrays]) for r in range(d)]
        return cls(algebra, comps)

    @classmethod
    def from_scalars(cls, algebra: AlgebraDescriptor, values: Sequence[complex]) -> ModuleVector:
        """Scalar lift: each value times the unit of ``algebra``."""
        return cls(algebra, [algebra.scalar(complex(v)) for v in values])

    def block(self, i: int) -> ModuleVector:
        comps = [c.block(i) for c in self.components]
        return ModuleVector(comps[0].algebra, comps)


def _check_pair(u: ModuleVector, v: ModuleVector):
    if u.algebra.block_sizes != v.algebra.block_sizes:
        raise IncompatibleAlgebrasError(f"{u.algebra.block_sizes} vs {v.algebra.block_sizes}")
    if u.d != v.d:
        raise ModuleError(f"dimension mismatch: d={u.d} vs d={v.d}")


def basis_vector(algebra: AlgebraDescriptor, d: int, r: int) -> ModuleVector:
    comps = [algebra.zero() for _ in range(d)]
    comps[r] = algebra.identity()
    return ModuleVector(algebra, comps)


def inner_product(u: ModuleVector, v: ModuleVector) -> AlgebraElement:
    """``sum_j u_j v_j^*``."""
    _check_pair(u, v)
    blocks = []
    for ub, vb in zip(u.block_arrays(), v.block_arrays()):
        blocks.append(np.einsum("rab,rcb->ac", ub, vb.conj()))
    return AlgebraElement(u.algebra, blocks)


def gram_blocks(arrays: Sequence[np.ndarray]) -> list[np.ndarray]:
    """Gram data from per-block vector arrays of shape ``(n, d, m, m)``.

    Returns, per block, an array ``G`` of shape ``(n, n, m, m)`` with
    ``G[j, k] = <tau_j, tau_k>``. The lower triangle is mirrored from the
    upper one so that ``G[k, j]`` is exactly ``G[j, k]^*``.
    """
    out = []
    for x in arrays:
        g = np.einsum("jrab,krcb->jkac", x, x.conj())
        n = g.shape[0]
        for j in range(n):
            g[j, j] = (g[j, j] + g[j, j].conj().T) / 2
            for k in range(j + 1, n):
                g[k, j] = g[j, k].conj().T
        out.append(g)
    return out


@dataclass(frozen=True)
class GramMatrix:
    """Pairwise inner products ``entries[j][k] = <tau_j, tau_k>``."""

    algebra: AlgebraDescriptor
    blocks: tuple[np.ndarray, ...]

    @property
    def n(self) -> int:
        return self.blocks[0].shape[0]

    def entry(self, j: int, k: int) -> AlgebraElement:
        return AlgebraElement(self.algebra, [g[j, k] for g in self.blocks])

    @property
    def entries(self) -> list[list[AlgebraElement]]:
        return [[self.entry(j, k) for k in range(self.n)] for j in range(self.n)]

    def assemble(self) -> np.ndarray:
        """Complex matrix of size ``n * sum(block_sizes)``; PSD for any configuration."""
        n = self.n
        size = sum(self.algebra.block_sizes)
        out = np.zeros((n * size, n * size), dtype=complex)
        offset = 0
        for g, m in zip(self.blocks, self.algebra.block_sizes):
            for j in range(n):
                for k in range(n):
                    out[j * size + offset:j * size + offset + m,
                        k * size + offset:k * size + offset + m] = g[j, k]
            offset += m
        return out


def gram(config) -> GramMatrix:
    """Gram matrix of a :class:`~ncequi.equiangular.Configuration`."""
    return GramMatrix(config.algebra, tuple(gram_blocks(config.block_arrays())))


def normalize(u: ModuleVector, tol: float = DEFAULT_TOL) -> ModuleVector:
    """Left-multiply by ``<u, u>^{-1/2}`` so that the result has unit inner product."""
    ip = inner_product(u, u)
    rep = spectral_tests(ip, tol)
    if not (rep.positive and rep.invertible):
        raise NormalizationError(
            f"<u,u> is not invertible (min singular value {rep.min_singular_value:.3e})"
        )
    return inv_sqrt(ip, tol) * u


def outer_operator(t: ModuleVector) -> list[list[AlgebraElement]]:
    """Matrix of ``x -> <x, t> t``: entry ``(r, s)`` is ``t_r^* t_s``.

    The action is ``(<x, t> t)_s = sum_r x_r M[r][s]``.
    """
    return [[t.components[r].adjoint() * t.components[s] for s in range(t.d)] for r in range(t.d)]


def apply_outer(m: list[list[AlgebraElement]], x: ModuleVector) -> ModuleVector:
    d = len(m)
    comps = []
    for s in range(d):
        acc = x.algebra.zero()
        for r in range(d):
            acc = acc + x.components[r] * m[r][s]
        comps.append(acc)
    return ModuleVector(x.algebra, comps)
