"""Command-line surface: reproducible reports over the bundled fixture corpus.

Exit codes: 0 ok, 1 validation or lemma failure, 2 parse failure,
3 internal cross-check failure (two computation routes disagreed).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import algebra as alg
from . import classify as cls_mod
from . import cohomology as coh
from . import cones, fixtures, hodge
from .errors import CrossCheckError, MetricError, ParseError, PreconditionError

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_PARSE = 2
EXIT_CROSSCHECK = 3


def _json_default(obj):
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, alg.Form):
        return alg.form_to_document(obj)
    raise TypeError(f"cannot serialize {type(obj)!r}")


def emit(report: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report, indent=2, sort_keys=True, default=_json_default)
    lines = []

    def walk(obj, prefix=""):
        if isinstance(obj, dict):
            for key in sorted(obj):
                walk(obj[key], f"{prefix}{key}.")
        elif isinstance(obj, list) and obj and isinstance(obj[0], dict):
            for i, item in enumerate(obj):
                walk(item, f"{prefix}{i}.")
        else:
            lines.append(f"{prefix[:-1]:<42} {obj}")

    walk(report)
    return "\n".join(lines)


def _load_model(args) -> alg.LieModel:
    return alg.parse_model(fixtures.load_document(args.model))


def _load_metric(model: alg.LieModel, args) -> hodge.HermitianMetric:
    if getattr(args, "metric", None):
        return hodge.metric_from_document(model, fixtures.load_document(args.metric))
    return hodge.identity_metric(model)


def _load_class_form(model, g, selector: str, p: int, q: int) -> alg.Form:
    """Class representative from a keyword or a form-document path.

    "omega-power" resolves to the harmonic part of omega^{n-1}/(n-1)!, which
    is d-closed for every metric (the raw power is closed only for balanced
    ones) and coincides with it on the torus fixtures.
    """
    if selector == "omega":
        base = g.omega
    elif selector == "omega-power":
        base = coh.harmonic_part_of_omega_power(g)
    else:
        base = alg.form_from_document(fixtures.load_document(selector))
    if base.bidegree != (p, q):
        raise PreconditionError(f"class representative must have bidegree ({p},{q})")
    return base


def _write_or_compare_golden(report: dict, model_name: str, command: str, bless: bool) -> None:
    path = fixtures.golden_path(model_name, command)
    payload = json.dumps(report, indent=2, sort_keys=True, default=_json_default) + "\n"
    if bless:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(payload, encoding="utf-8")
        print(f"blessed golden file {path}", file=sys.stderr)


# ---------------------------------------------------------------------------
# commands


def cmd_validate(args) -> int:
    model = _load_model(args)
    report = alg.validate_model(model, tol=args.tol_eq).as_dict()
    report["model"] = model.name
    report["n"] = model.n
    print(emit(report, args.format))
    ok = report["d_squared_zero"] and report["integrable"]
    return EXIT_OK if ok else EXIT_VALIDATION


def cmd_cohomology(args) -> int:
    model = _load_model(args)
    g = _load_metric(model, args)
    n = model.n
    table = []
    for theory in ("bc", "aeppli", "dolbeault"):
        for p in range(n + 1):
            for q in range(n + 1):
                space = coh.cohomology_space(g, theory, p, q, tol=args.tol_rank)
                table.append(
                    {
                        "theory": theory,
                        "p": p,
                        "q": q,
                        "dim": space.dimension,
                        "quotient_dim": space.quotient_dimension,
                        "harmonic_dim": space.harmonic_dimension,
                        "agree": space.quotient_dimension == space.harmonic_dimension,
                    }
                )
    for k in range(2 * n + 1):
        space = coh.cohomology_space(g, "derham", k, tol=args.tol_rank)
        table.append(
            {
                "theory": "derham",
                "p": k,
                "q": None,
                "dim": space.dimension,
                "quotient_dim": space.quotient_dimension,
                "harmonic_dim": space.harmonic_dimension,
                "agree": space.quotient_dimension == space.harmonic_dimension,
            }
        )
    report = {"model": model.name, "n": n, "table": table}
    _write_or_compare_golden(report, model.name, "cohomology", args.bless)
    print(emit(report, args.format))
    return EXIT_OK


def cmd_classify(args) -> int:
    model = _load_model(args)
    g = _load_metric(model, args)
    result = cls_mod.classify_metric(g, tol=args.tol_eq, strict=args.strict)
    report = {
        "model": model.name,
        "flags": result.flags(),
        "residuals": result.residuals,
        "witnesses": {k: alg.form_to_document(v) for k, v in result.witnesses.items()},
    }
    _write_or_compare_golden(report, model.name, "classify", args.bless)
    print(emit(report, args.format))
    return EXIT_OK


def cmd_decompose(args) -> int:
    model = _load_model(args)
    g = _load_metric(model, args)
    n = model.n
    rep = args.scale * _load_class_form(model, g, args.cls, n - 1, n - 1)
    space = coh.cohomology_space(g, "bc", n - 1, n - 1, tol=args.tol_rank)
    cls = coh.class_of(space, rep, tol=args.tol_eq)
    primitive, lam = coh.lefschetz_decompose_class(g, cls)
    hyper = coh.primitive_hyperplane(g, tol=args.tol_eq)
    report = {
        "model": model.name,
        "lambda": [lam.real, lam.imag],
        "primitive_part_norm": float(np.linalg.norm(primitive.coords)),
        "hyperplane_dimension": hyper.dimension,
        "space_dimension": space.dimension,
        "side": coh.lambda_sign_partition(g, cls, tol=args.tol_eq)
        if coh.is_real_class(cls)
        else "not-real",
    }
    print(emit(report, args.format))
    return EXIT_OK


def cmd_cone_skt(args) -> int:
    model = _load_model(args)
    g = _load_metric(model, args)
    rep = args.scale * _load_class_form(model, g, args.cls, 1, 1)
    space = coh.cohomology_space(g, "aeppli", 1, 1, tol=args.tol_rank)
    cls = coh.class_of(space, rep, tol=args.tol_eq)
    result = cones.skt_cone_feasibility(cls, seed=args.seed)
    report = {
        "model": model.name,
        "verdict": result.verdict,
        "best_min_eigenvalue": result.best_min_eigenvalue,
        "iterations": result.iterations,
        "certificate": result.certificate,
        "witness": alg.form_to_document(result.witness) if result.witness else None,
    }
    print(emit(report, args.format))
    return EXIT_OK


def cmd_cone_copsef(args) -> int:
    model = _load_model(args)
    g = _load_metric(model, args)
    n = model.n
    rep = args.scale * _load_class_form(model, g, args.cls, n - 1, n - 1)
    space = coh.cohomology_space(g, "bc", n - 1, n - 1, tol=args.tol_rank)
    cls = coh.class_of(space, rep, tol=args.tol_eq)
    if args.probes:
        docs = json.loads(Path(args.probes).read_text(encoding="utf-8"))
        probes = [
            cones.skt_probe_from_metric(
                hodge.metric_from_document(model, doc), doc.get("name", f"probe-{i}")
            )
            for i, doc in enumerate(docs)
        ]
    else:
        probes = [cones.skt_probe_from_metric(g, "metric")]
    result = cones.copsef_pairing_test(cls, probes, tol=args.tol_eq)
    report = {
        "model": model.name,
        "verdict": result.verdict,
        "pairings": [{"probe": label, "value": value} for label, value in result.pairings],
        "violations": [{"probe": label, "value": value} for label, value in result.violations],
        "warning": result.warning,
        "note": result.note,
    }
    print(emit(report, args.format))
    return EXIT_OK


def cmd_check_lemmas(args) -> int:
    model = _load_model(args)
    g = _load_metric(model, args)
    n = model.n
    rng = np.random.default_rng(args.seed)
    report: dict = {"model": model.name, "seed": args.seed}
    failures = []

    # star intertwining of the two fourth-order Laplacians
    worst = 0.0
    for p in range(n + 1):
        for q in range(n + 1):
            star = hodge.star_matrix(g, p, q)
            lhs = star @ hodge.laplacian_bc(g, p, q).matrix
            rhs = hodge.laplacian_a(g, n - q, n - p).matrix @ star
            if lhs.size:
                worst = max(worst, float(np.max(np.abs(lhs - rhs))))
    report["star_intertwining_residual"] = worst
    if worst > args.tol_eq:
        failures.append("star_intertwining")

    # closed star formula on random primitive forms
    worst = 0.0
    count = 0
    for p in range(n + 1):
        for q in range(n + 1):
            for _ in range(4):
                v = hodge.random_primitive_form(g, p, q, rng)
                if v is None or v.norm() < 1e-9:
                    continue
                worst = max(worst, hodge.primitive_star_check(g, v))
                count += 1
    report["primitive_star_residual"] = worst
    report["primitive_star_samples"] = count
    if worst > args.tol_eq:
        failures.append("primitive_star")

    # three-space splittings
    worst = 0.0
    dims_ok = True
    for theory in ("bc", "aeppli"):
        for p in range(n + 1):
            for q in range(n + 1):
                rep = hodge.three_space_decomposition(g, theory, p, q)
                worst = max(worst, rep.orthogonality_residual)
                dims_ok = dims_ok and rep.dims_sum_ok and rep.closed_split_ok
    report["decomposition_orthogonality_residual"] = worst
    report["decomposition_dimensions_ok"] = dims_ok
    if worst > args.tol_eq or not dims_ok:
        failures.append("three_space_decomposition")

    # adjoint formula del* = -star delbar star on unimodular models
    if alg.is_unimodular(model):
        worst = 0.0
        for p in range(n):
            for q in range(n + 1):
                lhs = hodge._del_adj(g, p, q)
                rhs = (
                    -hodge.star_matrix(g, n - q, n - p)
                    @ alg.delbar_matrix(model, n - q, n - p - 1)
                    @ hodge.star_matrix(g, p + 1, q)
                )
                if lhs.size:
                    worst = max(worst, float(np.max(np.abs(lhs - rhs))))
        report["adjoint_formula_residual"] = worst
        if worst > args.tol_eq:
            failures.append("adjoint_formula")

    # Aeppli harmonicity of omega wedge phi for closed primitive phi, when SKT
    skt_res = alg.del_form(model, alg.delbar_form(model, g.omega)).norm()
    if skt_res <= args.tol_eq * g.omega.norm():
        worst = 0.0
        tested = 0
        for p, q in alg.bidegrees_of_degree(n, n - 1):
            from .linalg import nullspace

            constraints = np.vstack(
                [
                    alg.del_matrix(model, p, q),
                    alg.delbar_matrix(model, p, q),
                    hodge.lambda_matrix(g, p, q),
                ]
            )
            for col in nullspace(constraints).T:
                phi = alg.from_vector(col, n, p, q)
                res = cls_mod.aeppli_harmonic_check(g, phi, tol=args.tol_eq * 10)
                worst = max(worst, *res.as_tuple())
                tested += 1
        report["aeppli_harmonic_residual"] = worst
        report["aeppli_harmonic_samples"] = tested
        if worst > 1e-8:
            failures.append("aeppli_harmonic")
    else:
        report["aeppli_harmonic_residual"] = None
        report["aeppli_harmonic_note"] = "metric is not SKT; lemma suite skipped"

    report["failures"] = failures
    print(emit(report, args.format))
    return EXIT_OK if not failures else EXIT_VALIDATION


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pluriclosed",
        description="Hodge-theoretic reports on invariant complex Lie-algebra models",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, metric=True):
        p.add_argument("--model", required=True, help="fixture name or path to a model JSON")
        if metric:
            p.add_argument("--metric", help="path to a metric JSON (default: identity)")
        p.add_argument("--format", choices=("json", "table"), default="json")
        p.add_argument("--tol-rank", type=float, default=None, dest="tol_rank")
        p.add_argument("--tol-eq", type=float, default=1e-9, dest="tol_eq")
        p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("validate", help="structure-equation sanity report")
    common(p, metric=False)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("cohomology", help="dimension table for all theories")
    common(p)
    p.add_argument("--bless", action="store_true", help="write the golden file")
    p.set_defaults(func=cmd_cohomology)

    p = sub.add_parser("classify", help="metric taxonomy with witnesses")
    common(p)
    p.add_argument("--strict", action="store_true")
    p.add_argument("--bless", action="store_true")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("decompose", help="primitive splitting of a BC (n-1,n-1)-class")
    common(p)
    p.add_argument("--class", dest="cls", default="omega-power",
                   help="'omega-power' (harmonic part of omega^{n-1}/(n-1)!) or a form JSON path")
    p.add_argument("--scale", type=float, default=1.0)
    p.set_defaults(func=cmd_decompose)

    cone = sub.add_parser("cone", help="cone feasibility and pairing tests")
    cone_sub = cone.add_subparsers(dest="cone_command", required=True)

    p = cone_sub.add_parser("skt", help="SKT membership of an Aeppli (1,1)-class")
    common(p)
    p.add_argument("--class", dest="cls", default="omega", help="'omega' or a form JSON path")
    p.add_argument("--scale", type=float, default=1.0)
    p.set_defaults(func=cmd_cone_skt)

    p = cone_sub.add_parser("copsef", help="pairing test against SKT probes")
    common(p)
    p.add_argument("--class", dest="cls", default="omega-power")
    p.add_argument("--scale", type=float, default=1.0)
    p.add_argument("--probes", help="path to a JSON list of probe metric documents")
    p.set_defaults(func=cmd_cone_copsef)

    p = sub.add_parser("check-lemmas", help="run the pointwise-identity suites")
    common(p)
    p.set_defaults(func=cmd_check_lemmas)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (json.JSONDecodeError, FileNotFoundError, OSError) as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except CrossCheckError as exc:
        print(f"internal cross-check failure: {exc}", file=sys.stderr)
        return EXIT_CROSSCHECK
    except (PreconditionError, MetricError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
