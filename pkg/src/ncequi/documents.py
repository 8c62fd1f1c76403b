"""JSON documents for configurations and certificates.

Complex numbers are ``[re, im]`` pairs, matrices are nested row-major, and an
algebra element is a list of its blocks. Emission is canonical (sorted keys,
fixed indentation, shortest round-trip float repr), so SHA-256 digests of
emitted text are reproducible.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field

import numpy as np

from .algebra import (
    DEFAULT_TOL,
    AlgebraDescriptor,
    AlgebraElement,
    AlgebraError,
    eigenvalues,
    op_norm,
)
from .bounds import (
    BoundCertificate,
    IndependenceReport,
    classical_gerzon,
    gerzon_ab,
    gerzon_modular,
    vls_ab,
    vls_modular,
    vls_norm,
    vls_special,
)
from .equiangular import (
    Configuration,
    VerificationReport,
    infer_targets,
    verify_modular_ab,
    verify_norm_gamma,
    verify_special,
)
from .hilbert_module import ModuleVector

SCHEMA_VERSION = 1


class DocumentError(ValueError):
    pass


# element / matrix encoding


def matrix_to_json(m: np.ndarray) -> list:
    return [[[float(z.real), float(z.imag)] for z in row] for row in m]


def element_to_json(x: AlgebraElement) -> list:
    return [matrix_to_json(b) for b in x.blocks]


def _matrix_from_json(obj, size: int, where: str) -> np.ndarray:
    if not isinstance(obj, list) or len(obj) != size:
        got = len(obj) if isinstance(obj, list) else type(obj).__name__
        raise DocumentError(f"{where}: expected a {size}x{size} block, got {got} rows")
    out = np.empty((size, size), dtype=complex)
    for r, row in enumerate(obj):
        if not isinstance(row, list) or len(row) != size:
            raise DocumentError(f"{where}: row {r} should have {size} entries")
        for c, z in enumerate(row):
            if (not isinstance(z, list) or len(z) != 2
                    or not all(isinstance(t, (int, float)) and not isinstance(t, bool) for t in z)):
                raise DocumentError(f"{where}[{r}][{c}]: complex entries must be [re, im] pairs")
            out[r, c] = complex(z[0], z[1])
    return out


def element_from_json(obj, algebra: AlgebraDescriptor, where: str = "element") -> AlgebraElement:
    if not isinstance(obj, list) or len(obj) != algebra.num_blocks:
        raise DocumentError(f"{where}: expected {algebra.num_blocks} blocks")
    blocks = [_matrix_from_json(b, m, f"{where} block {i}")
              for i, (b, m) in enumerate(zip(obj, algebra.block_sizes))]
    return AlgebraElement(algebra, blocks)


def _dumps(obj) -> str:
    try:
        return json.dumps(obj, sort_keys=True, indent=2, allow_nan=False) + "\n"
    except ValueError as exc:
        raise DocumentError(f"cannot emit non-finite values: {exc}") from None


def digest(text: str) -> str:
    return "sha256:" + hashlib.sha256(text.encode("utf-8")).hexdigest()


# configuration documents


@dataclass(frozen=True, eq=False)
class ConfigurationDocument:
    config: Configuration
    targets: dict = field(default_factory=dict)
    label: str | None = None
    provenance: dict | None = None
    schema_version: int = SCHEMA_VERSION

    @property
    def algebra(self) -> AlgebraDescriptor:
        return self.config.algebra

    @property
    def d(self) -> int:
        return self.config.d

    @property
    def n(self) -> int:
        return self.config.n

    def to_dict(self) -> dict:
        vectors = [[element_to_json(c) for c in v.components] for v in self.config.vectors]
        out = {
            "schema_version": self.schema_version,
            "algebra": {"block_sizes": list(self.algebra.block_sizes),
                        "real_flag": self.algebra.real_flag},
            "d": self.d,
            "n": self.n,
            "vectors": vectors,
        }
        if self.targets:
            t = {}
            for key in ("a", "b"):
                if self.targets.get(key) is not None:
                    t[key] = element_to_json(self.targets[key])
            if self.targets.get("gamma") is not None:
                t["gamma"] = float(self.targets["gamma"])
            out["targets"] = t
        label = self.label if self.label is not None else self.config.label
        if label is not None:
            out["label"] = label
        if self.provenance is not None:
            out["provenance"] = self.provenance
        return out


def emit(doc: ConfigurationDocument) -> str:
    return _dumps(doc.to_dict())


def _require(obj: dict, key: str, kind, where: str = "document"):
    if key not in obj:
        raise DocumentError(f"{where}: missing field {key!r}")
    val = obj[key]
    if not isinstance(val, kind) or (kind is int and isinstance(val, bool)):
        raise DocumentError(f"{where}.{key}: expected {getattr(kind, '__name__', kind)}")
    return val


def parse(text: str) -> ConfigurationDocument:
    """Parse a configuration document; shape errors name the offending location."""
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"malformed JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    if not isinstance(obj, dict):
        raise DocumentError("document: top level must be an object")
    version = _require(obj, "schema_version", int)
    if version != SCHEMA_VERSION:
        raise DocumentError(f"document.schema_version: unsupported version {version}")
    alg_obj = _require(obj, "algebra", dict)
    sizes = _require(alg_obj, "block_sizes", list, "document.algebra")
    real_flag = alg_obj.get("real_flag", False)
    try:
        algebra = AlgebraDescriptor(tuple(sizes), bool(real_flag))
    except (AlgebraError, TypeError, ValueError) as exc:
        raise DocumentError(f"document.algebra: {exc}") from None
    d = _require(obj, "d", int)
    n = _require(obj, "n", int)
    vec_obj = _require(obj, "vectors", list)
    if len(vec_obj) != n:
        raise DocumentError(f"document.vectors: expected n={n} vectors, got {len(vec_obj)}")
    vectors = []
    for j, v in enumerate(vec_obj):
        if not isinstance(v, list) or len(v) != d:
            raise DocumentError(f"vectors[{j}]: expected d={d} components")
        comps = [element_from_json(c, algebra, f"vectors[{j}][{r}]") for r, c in enumerate(v)]
        vectors.append(ModuleVector(algebra, comps))
    label = obj.get("label")
    config = Configuration(algebra, tuple(vectors), label)
    targets = {}
    if "targets" in obj:
        t = _require(obj, "targets", dict)
        for key in ("a", "b"):
            if key in t:
                targets[key] = element_from_json(t[key], algebra, f"targets.{key}")
        if "gamma" in t:
            targets["gamma"] = float(t["gamma"])
    return ConfigurationDocument(config, targets, label, obj.get("provenance"), version)


def load(path) -> ConfigurationDocument:
    with open(path, encoding="utf-8") as fh:
        return parse(fh.read())


def save(doc: ConfigurationDocument, path) -> str:
    text = emit(doc)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)
    return text


# certificates


def _spectrum(x: AlgebraElement) -> list[list[float]]:
    return [[float(v) for v in ev] for ev in eigenvalues(x)]


def independence_to_dict(rep: IndependenceReport) -> dict:
    return {
        "independent": rep.independent,
        "nullspace_dimension": rep.nullspace_dimension,
        "smallest_singular_value": rep.smallest_singular_value,
        "largest_singular_value": rep.largest_singular_value,
        "threshold": rep.threshold,
        "unknowns": rep.unknowns,
        "equations": rep.equations,
    }


def certificate_to_dict(cert: BoundCertificate) -> dict:
    out = {
        "theorem": cert.theorem.value,
        "d": cert.d,
        "n": cert.n,
        "pass": cert.passed,
        "tolerance": cert.tol,
        "hypotheses": [{"name": h.name, "verdict": h.verdict, "detail": h.detail}
                       for h in cert.hypotheses],
        "corollaries": [{"name": h.name, "verdict": h.verdict, "detail": h.detail}
                        for h in cert.corollaries],
        "bound_value": cert.bound_value,
    }
    if cert.witness is not None:
        out["witness"] = element_to_json(cert.witness)
        out["witness_norm"] = op_norm(cert.witness)
        out["witness_spectrum"] = _spectrum(cert.witness)
        out["witness_min_eigenvalue"] = cert.witness_min_eigenvalue
    if cert.independence is not None:
        out["independence"] = independence_to_dict(cert.independence)
    return out


def report_to_dict(rep: VerificationReport) -> dict:
    out = {
        "kind": rep.kind,
        "pass": rep.passed,
        "tolerance": rep.tol,
        "max_unit_deviation": rep.max_unit_deviation,
        "max_angle_deviation": rep.max_angle_deviation,
        "worst_unit_index": rep.worst_unit_index,
        "worst_pair": list(rep.worst_pair) if rep.worst_pair else None,
    }
    if rep.witness is not None:
        out["witness"] = element_to_json(rep.witness)
        out["witness_spectrum"] = _spectrum(rep.witness)
    if rep.detail:
        out["detail"] = rep.detail
    return out


def resolve_targets(doc: ConfigurationDocument) -> dict:
    """Document targets, with anything missing read off the configuration."""
    inferred = infer_targets(doc.config)
    targets = dict(inferred)
    targets.update({k: v for k, v in doc.targets.items() if v is not None})
    if "b" not in doc.targets and op_norm(inferred["b"] - doc.algebra.identity()) <= 1e-9:
        targets["b"] = doc.algebra.identity()
    if "gamma" not in doc.targets and "a" in doc.targets:
        targets["gamma"] = min(op_norm(targets["a"]) ** 0.5, 1.0)
    return targets


def run_checks(config: Configuration, targets: dict, tol: float = DEFAULT_TOL):
    """Every applicable verifier and theorem for ``config`` at ``targets``."""
    alg = config.algebra
    a, b, gamma = targets["a"], targets["b"], float(targets["gamma"])
    unit_b = op_norm(b - alg.identity()) <= tol
    d, n = config.d, config.n
    reports = [verify_modular_ab(config, a, None if unit_b else b, tol)]
    certs = []
    if unit_b:
        reports.append(verify_norm_gamma(config, gamma, tol))
        reports.append(verify_special(config, gamma, tol))
    if alg.commutative:
        if unit_b:
            certs.append(vls_modular(d, n, a, tol))
        certs.append(vls_ab(d, n, a, b, tol))
    if unit_b:
        certs.append(vls_norm(d, n, gamma, "modular", tol))
        certs.append(vls_special(config, gamma, tol))
        certs.append(gerzon_modular(config, a, tol))
    else:
        certs.append(gerzon_ab(config, a, b, tol))
    if alg.block_sizes == (1,):
        if unit_b:
            certs.append(vls_norm(d, n, gamma, "classical", tol))
        certs.append(classical_gerzon(d, n, "complex"))
        if alg.real_flag:
            certs.append(classical_gerzon(d, n, "real"))
    return reports, certs


def certify(doc: ConfigurationDocument, tol: float = DEFAULT_TOL, solver: dict | None = None) -> dict:
    """Certificate document for ``doc``: every applicable check with its witnesses."""
    targets = resolve_targets(doc)
    reports, certs = run_checks(doc.config, targets, tol)
    out = {
        "schema_version": SCHEMA_VERSION,
        "kind": "certificate",
        "input_digest": digest(emit(doc)),
        "tolerance": tol,
        "targets": {"a": element_to_json(targets["a"]), "b": element_to_json(targets["b"]),
                    "gamma": float(targets["gamma"])},
        "reports": [report_to_dict(r) for r in reports],
        "certificates": [certificate_to_dict(c) for c in certs],
        "pass": all(r.passed for r in reports) and all(c.passed for c in certs),
    }
    if solver is not None:
        out["solver"] = solver
    return out


def emit_certificate(cert: dict) -> str:
    return _dumps(cert)


def _witness_consistent(entry: dict, tol: float) -> bool:
    spectrum = entry.get("witness_spectrum")
    if spectrum is None:
        return True
    thresh = tol * (1 + entry.get("witness_norm", 0.0))
    return min(min(b) for b in spectrum) >= -thresh


def recheck(cert_text: str, config_text: str) -> list[str]:
    """Re-derive every verdict of a certificate from the configuration text.

    Returns a list of mismatches; empty means the certificate re-verifies.
    """
    cert = json.loads(cert_text)
    doc = parse(config_text)
    problems = []
    if cert.get("input_digest") != digest(emit(doc)):
        problems.append("input digest does not match the configuration")
    tol = float(cert["tolerance"])
    alg = doc.algebra
    targets = {
        "a": element_from_json(cert["targets"]["a"], alg, "targets.a"),
        "b": element_from_json(cert["targets"]["b"], alg, "targets.b"),
        "gamma": cert["targets"]["gamma"],
    }
    reports, certs = run_checks(doc.config, targets, tol)
    fresh = [report_to_dict(r) for r in reports] + [certificate_to_dict(c) for c in certs]
    stored = cert["reports"] + cert["certificates"]
    if len(fresh) != len(stored):
        problems.append(f"expected {len(fresh)} entries, certificate has {len(stored)}")
    for new, old in zip(fresh, stored):
        name = old.get("theorem") or old.get("kind")
        if new["pass"] != old["pass"]:
            problems.append(f"{name}: verdict {old['pass']} does not re-verify")
        for key in ("hypotheses", "corollaries"):
            for hn, ho in zip(new.get(key, []), old.get(key, [])):
                if hn["verdict"] != ho["verdict"]:
                    problems.append(f"{name}: {key} {ho['name']!r} does not re-verify")
        if "witness_spectrum" in old and old.get("theorem") in ("vls-modular", "vls-ab"):
            if _witness_consistent(old, tol) != old["pass"]:
                problems.append(f"{name}: stored witness spectrum disagrees with verdict")
    expected = all(e["pass"] for e in fresh)
    if cert.get("pass") != expected:
        problems.append("overall verdict does not re-verify")
    return problems
