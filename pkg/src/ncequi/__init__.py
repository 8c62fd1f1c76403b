"""Equiangular lines in standard Hilbert C*-modules over finite-dimensional C*-algebras."""

from .algebra import (
    DEFAULT_TOL,
    AlgebraDescriptor,
    AlgebraElement,
    SpectralReport,
    inv_sqrt,
    matrices,
    op_norm,
    psd_leq,
    scalars,
    spectral_tests,
)
from .bounds import (
    BoundCertificate,
    IndependenceReport,
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
from .constructions import corpus
from .documents import ConfigurationDocument, certify, emit, parse, recheck
from .equiangular import (
    Configuration,
    VerificationReport,
    compute_B,
    verify_modular_ab,
    verify_norm_gamma,
    verify_special,
)
from .hilbert_module import GramMatrix, ModuleVector, gram, inner_product, normalize, outer_operator
from .search import SearchProblem, SearchResult, gradient, loss, polish, solve

__version__ = "0.1.0"
