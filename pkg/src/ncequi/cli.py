"""Command line interface: ``ncequi {verify,bound,certify,search,corpus}``.

Exit codes: 0 pass/converged, 1 fail/not converged, 2 usage or input error.
The default tolerance can be overridden with the ``NCEQUI_TOL`` environment
variable.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import constructions
from .algebra import DEFAULT_TOL, AlgebraDescriptor, AlgebraElement, AlgebraError
from .bounds import (
    classical_gerzon,
    gerzon_ab,
    gerzon_modular,
    vls_ab,
    vls_modular,
    vls_norm,
    vls_special,
)
from .documents import (
    ConfigurationDocument,
    DocumentError,
    certificate_to_dict,
    certify,
    element_from_json,
    emit,
    emit_certificate,
    load,
    report_to_dict,
    resolve_targets,
)
from .equiangular import verify_modular_ab, verify_norm_gamma, verify_special
from .search import SearchProblem, polish, solve

KINDS = ("modular-a", "norm-gamma", "special", "modular-ab")
THEOREMS = ("vls-modular", "vls-norm", "vls-special", "gerzon-modular", "vls-ab", "gerzon-ab",
            "classical-relative", "classical-gerzon-real", "classical-gerzon-complex")


class UsageError(Exception):
    pass


def parse_algebra(text: str, real: bool = False) -> AlgebraDescriptor:
    try:
        return AlgebraDescriptor(tuple(int(t) for t in text.split(",")), real)
    except ValueError as exc:
        raise UsageError(f"bad --algebra {text!r}: {exc}") from None


def parse_element(text: str | None, algebra: AlgebraDescriptor) -> AlgebraElement | None:
    """A number (times the unit), comma-separated per-block scalars, or a JSON block list."""
    if text is None:
        return None
    text = text.strip()
    try:
        if text.startswith("["):
            return element_from_json(json.loads(text), algebra, "argument")
        if "," in text:
            return algebra.from_diagonal([float(t) for t in text.split(",")])
        return algebra.scalar(float(text))
    except (ValueError, AlgebraError) as exc:
        raise UsageError(f"cannot read algebra element from {text!r}: {exc}") from None


def _print(obj):
    sys.stdout.write(json.dumps(obj, indent=2, sort_keys=True) + "\n")


def _targets(args, doc: ConfigurationDocument | None, algebra: AlgebraDescriptor) -> dict:
    stored = doc.targets if doc is not None else {}
    a = parse_element(args.a, algebra) or stored.get("a")
    b = parse_element(args.b, algebra) or stored.get("b")
    gamma = args.gamma if args.gamma is not None else stored.get("gamma")
    return {"a": a, "b": b, "gamma": gamma}


def cmd_verify(args) -> int:
    doc = load(args.file)
    t = _targets(args, doc, doc.algebra)
    cfg = doc.config
    if args.kind in ("modular-a", "modular-ab"):
        if t["a"] is None:
            raise UsageError("--a is required (or targets.a in the document)")
        b = t["b"] if args.kind == "modular-ab" else None
        if args.kind == "modular-ab" and b is None:
            raise UsageError("--b is required for modular-ab")
        rep = verify_modular_ab(cfg, t["a"], b, args.tol)
    elif args.kind == "norm-gamma":
        if t["gamma"] is None:
            raise UsageError("--gamma is required")
        rep = verify_norm_gamma(cfg, t["gamma"], args.tol)
    else:
        rep = verify_special(cfg, t["gamma"], args.tol)
    _print(report_to_dict(rep))
    return 0 if rep.passed else 1


def cmd_bound(args) -> int:
    doc = load(args.file) if args.file else None
    if doc is not None:
        algebra, d, n = doc.algebra, doc.d, doc.n
        t = resolve_targets(doc)
        t.update({k: v for k, v in _targets(args, None, algebra).items() if v is not None})
    else:
        if args.d is None or args.n is None:
            raise UsageError("give a configuration file or both --d and --n")
        algebra = parse_algebra(args.algebra)
        d, n = args.d, args.n
        t = _targets(args, None, algebra)
    th = args.theorem
    if th in ("vls-special", "gerzon-modular", "gerzon-ab") and doc is None:
        raise UsageError(f"{th} needs a configuration file")

    def need(key):
        if t.get(key) is None:
            raise UsageError(f"{th} needs --{key}")
        return t[key]

    if th == "vls-modular":
        cert = vls_modular(d, n, need("a"), args.tol)
    elif th == "vls-ab":
        cert = vls_ab(d, n, need("a"), need("b"), args.tol)
    elif th in ("vls-norm", "classical-relative"):
        mode = "classical" if th == "classical-relative" else "modular"
        cert = vls_norm(d, n, float(need("gamma")), mode, args.tol)
    elif th == "vls-special":
        cert = vls_special(doc.config, float(need("gamma")), args.tol)
    elif th == "gerzon-modular":
        cert = gerzon_modular(doc.config, need("a"), args.tol)
    elif th == "gerzon-ab":
        cert = gerzon_ab(doc.config, need("a"), need("b"), args.tol)
    elif th == "classical-gerzon-real":
        cert = classical_gerzon(d, n, "real")
    else:
        cert = classical_gerzon(d, n, "complex")
    _print(certificate_to_dict(cert))
    return 0 if cert.passed else 1


def cmd_certify(args) -> int:
    doc = load(args.file)
    cert = certify(doc, args.tol)
    text = emit_certificate(cert)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    sys.stdout.write(text)
    return 0 if cert["pass"] else 1


def cmd_search(args) -> int:
    algebra = parse_algebra(args.algebra)
    if (args.a is None) == (args.gamma is None):
        raise UsageError("give exactly one of --a and --gamma")
    mode = "target-a" if args.a is not None else "target-gamma"
    problem = SearchProblem(
        algebra, args.d, args.n, mode,
        a=parse_element(args.a, algebra), b=parse_element(args.b, algebra), gamma=args.gamma,
        seed=args.seed, restarts=args.restarts, max_iterations=args.max_iterations,
        success_loss=args.success_loss,
    )
    result = solve(problem)
    best = result.best_config
    if result.converged:
        best = polish(best, args.tol)
    summary = {
        "converged": result.converged,
        "best_loss": result.best_loss,
        "best_restart": result.best_restart,
        "restart_losses": result.restart_losses,
        "iterations_used": result.iterations_used,
        "metadata": result.metadata,
    }
    if args.out:
        targets = {"a": problem.a, "b": problem.b}
        if problem.gamma is not None:
            targets["gamma"] = problem.gamma
        doc = ConfigurationDocument(best, targets, f"search d={args.d} n={args.n}",
                                    {"solver": result.metadata, "best_loss": result.best_loss,
                                     "polished": result.converged})
        with open(args.out + ".json", "w", encoding="utf-8") as fh:
            fh.write(emit(doc))
        with open(args.out + ".cert.json", "w", encoding="utf-8") as fh:
            fh.write(emit_certificate(certify(doc, args.tol, solver=result.metadata)))
        summary["files"] = [args.out + ".json", args.out + ".cert.json"]
    _print(summary)
    return 0 if result.converged else 1


def cmd_corpus(args) -> int:
    if args.action == "list":
        for name in constructions.NAMES:
            sys.stdout.write(name + "\n")
        return 0
    if not args.name:
        raise UsageError("corpus emit needs a name")
    algebra = parse_algebra(args.algebra) if args.algebra else None
    name = args.name
    targets = {}
    if name == "direct_sum":
        if not args.parts or len(args.parts.split(",")) != 2:
            raise UsageError("direct_sum needs --parts NAME1,NAME2")
        p1, p2 = (constructions.corpus(p) for p in args.parts.split(","))
        cfg = constructions.direct_sum(p1, p2)
    elif name in ("orthonormal", "repeated_vector"):
        cfg = constructions.corpus(name, d=args.d or 2, n=args.n or 2, algebra=algebra)
    elif name in constructions.REFERENCE:
        cfg = constructions.corpus(name)
        if algebra is not None:
            cfg = constructions.scalar_lift(cfg, algebra)
        a = constructions.REFERENCE[name][1]
        targets = {"a": cfg.algebra.scalar(a), "b": cfg.algebra.identity(), "gamma": a ** 0.5}
    elif name == "scalar_lift":
        raise UsageError("use 'corpus emit NAME --algebra SIZES' to lift a named configuration")
    else:
        raise UsageError(f"unknown corpus name {name!r}")
    text = emit(ConfigurationDocument(cfg, targets, cfg.label, {"source": "corpus", "name": name}))
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ncequi", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def targets(sp):
        sp.add_argument("--a", help="number, per-block scalars 'x,y', or JSON block list")
        sp.add_argument("--b")
        sp.add_argument("--gamma", type=float)
        sp.add_argument("--tol", type=float, default=DEFAULT_TOL)

    sp = sub.add_parser("verify", help="run one equiangularity verifier")
    sp.add_argument("file")
    sp.add_argument("--kind", choices=KINDS, required=True)
    targets(sp)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("bound", help="emit one bound certificate")
    sp.add_argument("file", nargs="?")
    sp.add_argument("--theorem", choices=THEOREMS, required=True)
    sp.add_argument("--d", type=int)
    sp.add_argument("--n", type=int)
    sp.add_argument("--algebra", default="1")
    targets(sp)
    sp.set_defaults(func=cmd_bound)

    sp = sub.add_parser("certify", help="run every applicable theorem")
    sp.add_argument("file")
    sp.add_argument("--out")
    sp.add_argument("--tol", type=float, default=DEFAULT_TOL)
    sp.set_defaults(func=cmd_certify)

    sp = sub.add_parser("search", help="numerical search for equiangular configurations")
    sp.add_argument("--algebra", default="1", help="comma-separated block sizes")
    sp.add_argument("--d", type=int, required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--restarts", type=int, default=10)
    sp.add_argument("--max-iterations", type=int, default=3000)
    sp.add_argument("--success-loss", type=float, default=1e-20)
    sp.add_argument("--out", help="path prefix for the result and certificate files")
    targets(sp)
    sp.set_defaults(func=cmd_search)

    sp = sub.add_parser("corpus", help="reference configurations")
    sp.add_argument("action", choices=("list", "emit"))
    sp.add_argument("name", nargs="?")
    sp.add_argument("--d", type=int)
    sp.add_argument("--n", type=int)
    sp.add_argument("--algebra", help="lift into this algebra (comma-separated block sizes)")
    sp.add_argument("--parts", help="for direct_sum: two names, comma-separated")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_corpus)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    try:
        return args.func(args)
    except (UsageError, DocumentError, AlgebraError, KeyError, OSError) as exc:
        sys.stderr.write(f"ncequi: error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
