"""Closed-form reference configurations."""

from __future__ import annotations

import numpy as np

from .algebra import AlgebraDescriptor, scalars
from .equiangular import Configuration
from .hilbert_module import ModuleError


def orthonormal(d: int, algebra: AlgebraDescriptor | None = None) -> Configuration:
    """Standard basis ``e_1..e_d`` of ``A^d``."""
    return Configuration.from_scalar_rows(np.eye(d), algebra or scalars(1), label=f"orthonormal_{d}")


def trine() -> Configuration:
    """Three unit vectors of ``R^2`` at 0, 60 and 120 degrees."""
    angles = np.deg2rad([0.0, 60.0, 120.0])
    rows = np.stack([np.cos(angles), np.sin(angles)], axis=1)
    rows[0, 1] = 0.0
    return Configuration.from_scalar_rows(rows, scalars(1, real=True), label="trine")


def icosahedron() -> Configuration:
    """Six diagonals of the icosahedron in ``R^3``; ``|cos| = 1/sqrt(5)``."""
    phi = (1 + np.sqrt(5)) / 2
    rows = np.array([
        [0, 1, phi], [0, -1, phi],
        [1, phi, 0], [-1, phi, 0],
        [phi, 0, 1], [phi, 0, -1],
    ]) / np.sqrt(1 + phi * phi)
    return Configuration.from_scalar_rows(rows, scalars(1, real=True), label="icosahedron")


def sic_d2() -> Configuration:
    """Qubit SIC from the Bloch-sphere tetrahedron; ``|<.,.>|^2 = 1/3``."""
    rows = [[1.0, 0.0]]
    for k in range(3):
        rows.append([1 / np.sqrt(3), np.sqrt(2 / 3) * np.exp(2j * np.pi * k / 3)])
    return Configuration.from_scalar_rows(np.array(rows), label="sic_d2")


def etf_3_2() -> Configuration:
    """Three vectors of ``C^2`` on the Bloch equator; ``|<.,.>|^2 = 1/4``."""
    rows = np.array([[1.0, np.exp(2j * np.pi * k / 3)] for k in range(3)]) / np.sqrt(2)
    return Configuration.from_scalar_rows(rows, label="etf_3_2")


def repeated_vector(n: int, d: int, algebra: AlgebraDescriptor | None = None) -> Configuration:
    """``n`` copies of ``e_1``."""
    rows = np.zeros((n, d))
    rows[:, 0] = 1.0
    return Configuration.from_scalar_rows(rows, algebra or scalars(1), label=f"repeated_{n}_{d}")


def scalar_lift(base: Configuration, algebra: AlgebraDescriptor) -> Configuration:
    """Multiply each scalar component of ``base`` by the unit of ``algebra``."""
    if base.algebra.block_sizes != (1,):
        raise ModuleError("scalar_lift needs a configuration over C")
    rows = base.block_arrays()[0][:, :, 0, 0]
    label = f"{base.label}@{'+'.join(map(str, algebra.block_sizes))}" if base.label else None
    return Configuration.from_scalar_rows(rows, algebra, label=label)


def direct_sum(c1: Configuration, c2: Configuration) -> Configuration:
    """Block-combine two configurations with equal ``(n, d)`` over ``A_1 + A_2``."""
    if (c1.n, c1.d) != (c2.n, c2.d):
        raise ModuleError(f"direct_sum needs equal (n, d), got {(c1.n, c1.d)} and {(c2.n, c2.d)}")
    alg = c1.algebra.direct_sum(c2.algebra)
    label = f"{c1.label}+{c2.label}" if c1.label and c2.label else None
    return Configuration.from_block_arrays(alg, c1.block_arrays() + c2.block_arrays(), label)


# name -> (builder, known targets (a, gamma) as scalars or None)
REFERENCE = {
    "trine": (trine, 0.25),
    "icosahedron": (icosahedron, 0.2),
    "sic_d2": (sic_d2, 1 / 3),
    "etf_3_2": (etf_3_2, 0.25),
}

NAMES = ("orthonormal", "trine", "icosahedron", "sic_d2", "etf_3_2",
         "scalar_lift", "direct_sum", "repeated_vector")


def corpus(name: str, **params) -> Configuration:
    """Build a reference configuration by name.

    ``orthonormal`` takes ``d`` and ``algebra``; ``repeated_vector`` takes
    ``n``, ``d``, ``algebra``; ``scalar_lift`` takes ``base`` and ``algebra``;
    ``direct_sum`` takes ``c1`` and ``c2``.
    """
    if name == "orthonormal":
        return orthonormal(params.get("d", 2), params.get("algebra"))
    if name == "repeated_vector":
        return repeated_vector(params.get("n", 2), params.get("d", 2), params.get("algebra"))
    if name == "scalar_lift":
        return scalar_lift(params["base"], params["algebra"])
    if name == "direct_sum":
        return direct_sum(params["c1"], params["c2"])
    if name in REFERENCE:
        return REFERENCE[name][0]()
    raise KeyError(f"unknown corpus configuration {name!r}; choose from {', '.join(NAMES)}")
