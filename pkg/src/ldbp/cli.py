"""Command-line front end and the body-spec document format.

Body specs are JSON or YAML trees; every node carries a ``type``
discriminator and only the fields listed in :data:`BODY_SCHEMA`.

Exit status: 0 complete/PASS, 2 FAIL verdict, 3 indeterminate, 1 error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys

import numpy as np
import yaml

from . import bodies as B
from .errors import (
    ConstructionError,
    LDBPError,
    PreconditionError,
    SeedRejectedError,
    SpecParseError,
    SpecValidationError,
)
from .reports import SCHEMA_VERSION, dumps, to_jsonable

__all__ = ["BODY_SCHEMA", "parse_body_spec", "load_body_spec", "build_parser", "main", "run"]

EXIT_OK, EXIT_ERROR, EXIT_FAIL, EXIT_INDETERMINATE = 0, 1, 2, 3

# type -> (constructor, {field: (kind, default)}); a default of REQUIRED marks mandatory fields
REQUIRED = object()
BODY_SCHEMA = {
    "lq_ball": (B.LqBall, {"n": ("int", REQUIRED), "q": ("float", REQUIRED)}),
    "complex_ellipsoid": (B.ComplexEllipsoid, {"a": ("floats", REQUIRED)}),
    "two_ellipse": (B.TwoEllipseBody, {"n": ("int", REQUIRED), "s": ("float", REQUIRED),
                                       "b": ("float", REQUIRED), "blend_width": ("float", 0.02),
                                       "blend_order": ("int", 4)}),
    "euclidean_ball": (B.EuclideanBall, {"n": ("int", REQUIRED), "radius": ("float", 1.0)}),
    "phase_test": (B.PhaseTestBody, {"n": ("int", REQUIRED), "delta": ("float", REQUIRED)}),
    "dilate": (B.Dilate, {"alpha": ("float", REQUIRED), "base": ("body", REQUIRED)}),
    "tent": (B.Tent, {"base": ("body", REQUIRED)}),
    "cotent": (B.Cotent, {"base": ("body", REQUIRED)}),
    "perturbed": (B.Perturbed, {"base": ("body", REQUIRED), "g": ("profile", REQUIRED),
                                "eps": ("float", REQUIRED), "l": ("int", REQUIRED)}),
}


def _join(path, key):
    return f"{path}.{key}" if path else str(key)


def _coerce(kind, value, path, base_dir):
    if kind == "int":
        if isinstance(value, bool) or not isinstance(value, (int, float)) or int(value) != value:
            raise SpecParseError(f"expected an integer, got {value!r}", path)
        return int(value)
    if kind == "float":
        if isinstance(value, bool) or not isinstance(value, (int, float)) or not math.isfinite(value):
            raise SpecParseError(f"expected a finite number, got {value!r}", path)
        return float(value)
    if kind == "floats":
        if not isinstance(value, list) or not value:
            raise SpecParseError(f"expected a non-empty list of numbers, got {value!r}", path)
        return tuple(_coerce("float", v, _join(path, i), base_dir) for i, v in enumerate(value))
    if kind == "body":
        return _parse_node(value, path, base_dir)
    if kind == "profile":
        if not isinstance(value, str):
            raise SpecParseError("expected a path to a profile CSV", path)
        from .profiles import PolynomialProfile

        full = value if os.path.isabs(value) else os.path.join(base_dir, value)
        try:
            with open(full, encoding="utf-8") as fh:
                return PolynomialProfile.from_csv(fh)
        except OSError as exc:
            raise SpecParseError(f"cannot read profile CSV: {exc}", path) from exc
        except SpecParseError as exc:
            raise SpecParseError(str(exc), path) from exc
    raise AssertionError(kind)


def _parse_node(node, path, base_dir):
    if not isinstance(node, dict):
        raise SpecParseError(f"expected a mapping with a 'type' field, got {type(node).__name__}", path)
    if "type" not in node:
        raise SpecParseError("missing 'type' discriminator", path)
    kind = node["type"]
    if kind not in BODY_SCHEMA:
        raise SpecParseError(f"unknown body type {kind!r} (known: {', '.join(sorted(BODY_SCHEMA))})",
                             _join(path, "type"))
    ctor, fields = BODY_SCHEMA[kind]
    unknown = sorted(set(node) - set(fields) - {"type"})
    if unknown:
        raise SpecParseError(f"unknown field(s) {unknown} for type {kind!r}", _join(path, unknown[0]))
    kwargs = {}
    for name, (fkind, default) in fields.items():
        if name not in node:
            if default is REQUIRED:
                raise SpecParseError(f"missing required field {name!r}", _join(path, name))
            kwargs[name] = default
            continue
        kwargs[name] = _coerce(fkind, node[name], _join(path, name), base_dir)
    try:
        return ctor(**kwargs)
    except (ConstructionError, ValueError) as exc:
        raise SpecValidationError(str(exc), path or kind) from exc


def parse_body_spec(document, base_dir="."):
    """Build a body from a parsed document (dict) or JSON/YAML text."""
    if isinstance(document, str):
        try:
            document = yaml.safe_load(document)
        except yaml.YAMLError as exc:
            raise SpecParseError(f"not valid JSON/YAML: {exc}") from exc
    return _parse_node(document, "", base_dir)


def load_body_spec(path_or_text):
    """Read a body spec from a file path, or parse it inline if it looks like a mapping."""
    text = path_or_text.strip()
    if text.startswith("{"):
        return parse_body_spec(text)
    try:
        with open(path_or_text, encoding="utf-8") as fh:
            content = fh.read()
    except OSError as exc:
        raise SpecParseError(f"cannot read body spec: {exc}", path_or_text) from exc
    return parse_body_spec(content, os.path.dirname(os.path.abspath(path_or_text)))


# output helpers

def _config_echo(args):
    return {k: v for k, v in sorted(vars(args).items()) if k not in ("func",)}


def _write(args, text):
    if args.output and args.output != "-":
        with open(args.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _emit_json(args, result):
    doc = {"schema": SCHEMA_VERSION, "command": args.command, "seed": args.seed,
           "config": _config_echo(args), "result": result}
    _write(args, dumps(doc) + "\n")


def _emit_rows(args, header, rows, result=None):
    if args.format == "json":
        _emit_json(args, {"columns": header, "rows": rows, **(result or {})})
        return
    out = io.StringIO()
    out.write("# " + json.dumps(to_jsonable({"command": args.command, "seed": args.seed,
                                            "config": _config_echo(args)}), sort_keys=True) + "\n")
    w = csv.writer(out, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([repr(float(x)) if isinstance(x, (float, np.floating)) else x for x in r])
    _write(args, out.getvalue())
    if args.plot:
        _plot(args, header, rows)


def _plot(args, header, rows):
    import matplotlib

    matplotlib.use("svg")
    matplotlib.rcParams["svg.hashsalt"] = "ldbp"
    import matplotlib.pyplot as plt

    data = np.array([[float(v) for v in r] for r in rows if all(isinstance(v, (int, float, np.floating)) for v in r)])
    if data.size == 0:
        return
    fig, ax = plt.subplots(figsize=(5, 3.5))
    ax.errorbar(np.arange(len(data)), data[:, -2], yerr=data[:, -1], fmt=".", ms=3)
    ax.set_xlabel("row")
    ax.set_ylabel(header[-2])
    fig.tight_layout()
    fig.savefig(args.plot, format="svg", metadata={"Date": None})
    plt.close(fig)


# subcommands

def _parse_vector(text, N, rng=None):
    """``axis_k`` (k-th complex axis, 1-based; ``axis_n`` the last), ``random`` or numbers."""
    n = N // 2
    t = text.strip()
    if t.startswith("axis_"):
        k = t[5:]
        k = n if k == "n" else int(k)
        if not 1 <= k <= n:
            raise SpecValidationError(f"axis index out of range 1..{n}", "xi")
        v = np.zeros(N)
        v[2 * (k - 1)] = 1.0
        return v
    if t == "random":
        v = rng.standard_normal(N)
        return v / np.linalg.norm(v)
    v = np.array([float(x) for x in t.replace(";", ",").split(",")])
    if len(v) != N:
        raise SpecValidationError(f"expected {N} coordinates, got {len(v)}", "xi")
    return v


def cmd_volume(args):
    from .hyperbolic import default_rule, hvol_with_error

    spec = load_body_spec(args.body)
    if args.n is not None and args.n != spec.n:
        raise SpecValidationError(f"--n {args.n} does not match the body dimension {spec.n}", "n")
    v, err = hvol_with_error(spec, default_rule(spec, args.rule_size, seed=args.seed))
    _emit_rows(args, ["n", "hvol", "error"], [[spec.n, v, err]])
    return EXIT_OK


def cmd_section(args):
    from .hyperbolic import section_hvol
    from .quadrature import sample_complex_subspace, subspace_sphere_rule

    spec = load_body_spec(args.body)
    d = args.dim
    rows = []
    for j in range(args.num_subspaces):
        H = sample_complex_subspace(spec.n, d, seed=[args.seed, j])
        v = section_hvol(spec, H, rule=subspace_sphere_rule(H, args.order))
        v2 = section_hvol(spec, H, rule=subspace_sphere_rule(H, max(args.order // 2, 1)))
        rows.append([j, v, abs(v - v2)])
    _emit_rows(args, ["subspace", "section_hvol", "error"], rows)
    return EXIT_OK


def cmd_geodesic(args):
    from .hyperbolic import bergman_distance, bergman_geodesic

    x = np.array([float(t) for t in args.x.split(",")])
    y = np.array([float(t) for t in args.y.split(",")])
    arc = bergman_geodesic(x, y, args.samples)
    pts = arc.real_points()
    dxy = bergman_distance(x, y)
    rows = []
    for s, p in zip(arc.params, pts):
        err = abs(bergman_distance(x, p) + bergman_distance(p, y) - dxy)
        rows.append([float(s), *map(float, p), float(err)])
    _emit_rows(args, ["param", *[f"x{i + 1}" for i in range(len(x))], "error"], rows)
    return EXIT_OK


def cmd_hconvex(args):
    from .hyperbolic import h_convex_test

    spec = load_body_spec(args.body)
    rep = h_convex_test(spec, num_pairs=args.num_pairs, samples_per_arc=args.samples_per_arc,
                        seed=args.seed, tol=args.tol)
    _emit_json(args, rep.as_dict(include_margins=False))
    return EXIT_OK if rep.passed else EXIT_FAIL


def cmd_ft(args):
    from .harmonic.transforms import homog_ft

    spec = load_body_spec(args.body)
    N = 2 * spec.n
    p = -float(args.degree)
    rng = np.random.default_rng(args.seed)
    xs = [_parse_vector(t, N, rng) for t in args.xi]
    rows = []
    for x in xs:
        r = homog_ft(spec, x, method=args.method, p=p, max_rel_error=None)
        rows.append([*map(float, x), r.value, r.error])
    _emit_rows(args, [*[f"xi{i + 1}" for i in range(N)], "value", "error"], rows)
    return EXIT_OK


def cmd_pdscan(args):
    from .harmonic.scan import INDETERMINATE, pd_scan

    spec = load_body_spec(args.body)
    res = pd_scan(spec, args.l, resolution=args.resolution, seed=args.seed)
    _emit_json(args, res.as_dict())
    return EXIT_INDETERMINATE if res.status == INDETERMINATE else EXIT_OK


def cmd_parseval(args):
    from .harmonic.scan import parseval_residual

    K, L = load_body_spec(args.body), load_body_spec(args.body2)
    r = parseval_residual(K, L, args.p)
    _emit_rows(args, ["p", "residual", "tol"], [[float(args.p), r, args.tol]])
    return EXIT_OK if r <= args.tol else EXIT_FAIL


def cmd_prop1(args):
    from .harmonic.construct import construct_g

    spec = load_body_spec(args.body)
    res = construct_g(spec, l=args.l, degree=args.g_degree, num_subspaces=args.num_subspaces,
                      seed=args.seed, raise_on_failure=False)
    if args.g_out:
        with open(args.g_out, "w", encoding="utf-8", newline="") as fh:
            res.g.to_csv(fh)
    _emit_json(args, res.as_dict())
    return EXIT_OK if res.certificate.passed else EXIT_FAIL


def cmd_counterexample(args):
    from .counterexample import build_pair, seed_nonpd_body, verify_pair

    M, scan = seed_nonpd_body(args.n, args.l, args.seed_kind, q=args.q, alpha=args.alpha,
                              s=args.s, b=args.b, return_scan=True)
    pair = build_pair(M, l=args.l, degree=args.g_degree, seed=args.seed, scan=scan,
                      hconvex_pairs=args.hconvex_pairs, num_subspaces=args.num_subspaces)
    rep = verify_pair(pair, num_subspaces=args.num_subspaces, seed=args.seed,
                      hconvex_pairs=args.hconvex_pairs)
    if args.g_out:
        with open(args.g_out, "w", encoding="utf-8", newline="") as fh:
            pair.g.to_csv(fh)
    _emit_json(args, rep.as_dict())
    return {"PASS": EXIT_OK, "FAIL": EXIT_FAIL}.get(rep.verdict, EXIT_INDETERMINATE)


def cmd_ellipsoid(args):
    from .ellipsoid import beta_squared, circular_plane, displayed_beta_squared, section_conic

    a, b, c = (float(t) for t in args.axes.split(","))
    planes = circular_plane(a, b, c)
    out = {"axes": [a, b, c], "beta_squared": beta_squared(a, b, c),
           "displayed_beta_squared": displayed_beta_squared(a, b, c), "planes": []}
    for pl in planes:
        sec = section_conic((a, b, c), pl.normal, args.offset)
        entry = {"normal": pl.normal, "radius": pl.radius, "section": sec.as_dict()}
        if not sec.is_empty:
            pts = sec.boundary(args.samples)
            dist = np.linalg.norm(pts - sec.center_point, axis=1)
            entry["circle_residual"] = float(np.ptp(dist))
        out["planes"].append(entry)
    _emit_json(args, out)
    return EXIT_OK


def build_parser():
    p = argparse.ArgumentParser(prog="ldbp", description="Sections and volumes of phase-invariant "
                                "bodies in the complex hyperbolic ball.")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, func, fmt="csv", help=None):
        sp = sub.add_parser(name, help=help)
        sp.set_defaults(func=func)
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--output", "-o", default="-")
        sp.add_argument("--format", choices=["csv", "json"], default=fmt)
        sp.add_argument("--plot", default=None, help="optional SVG of the output rows")
        return sp

    sp = add("volume", cmd_volume, help="hyperbolic volume of a body")
    sp.add_argument("--body", required=True)
    sp.add_argument("--n", type=int, default=None)
    sp.add_argument("--rule-size", type=int, default=None)

    sp = add("section", cmd_section, help="hyperbolic volumes of sections by random complex subspaces")
    sp.add_argument("--body", required=True)
    sp.add_argument("--dim", type=int, required=True, help="complex dimension of the subspaces")
    sp.add_argument("--num-subspaces", type=int, default=10)
    sp.add_argument("--order", type=int, default=24)

    sp = add("geodesic", cmd_geodesic, help="samples of a Bergman geodesic")
    sp.add_argument("--x", required=True, help="comma separated real coordinates")
    sp.add_argument("--y", required=True)
    sp.add_argument("--samples", type=int, default=33)

    sp = add("hconvex", cmd_hconvex, fmt="json", help="randomized geodesic convexity test")
    sp.add_argument("--body", required=True)
    sp.add_argument("--num-pairs", type=int, default=1000)
    sp.add_argument("--samples-per-arc", type=int, default=32)
    sp.add_argument("--tol", type=float, default=1e-9)

    sp = add("ft", cmd_ft, help="Fourier transform of ||x||^{degree}")
    sp.add_argument("--body", required=True)
    sp.add_argument("--degree", type=float, required=True, help="homogeneity degree, e.g. -2")
    sp.add_argument("--xi", nargs="+", default=["axis_n"])
    sp.add_argument("--method", choices=["multiplier", "section-laplacian"], default="multiplier")

    sp = add("pdscan", cmd_pdscan, fmt="json", help="sign scan of the transform of ||x||^{-2l}")
    sp.add_argument("--body", required=True)
    sp.add_argument("--l", type=int, required=True)
    sp.add_argument("--resolution", type=int, default=None)

    sp = add("parseval", cmd_parseval, help="spherical Parseval residual")
    sp.add_argument("--body", required=True)
    sp.add_argument("--body2", required=True)
    sp.add_argument("--p", type=float, required=True)
    sp.add_argument("--tol", type=float, default=1e-3)

    sp = add("prop1", cmd_prop1, fmt="json", help="construct and certify g")
    sp.add_argument("--body", required=True)
    sp.add_argument("--l", type=int, required=True)
    sp.add_argument("--g-degree", type=int, default=None)
    sp.add_argument("--num-subspaces", type=int, default=200)
    sp.add_argument("--g-out", default=None, help="write g as a profile CSV")

    sp = add("counterexample", cmd_counterexample, fmt="json", help="build and certify a pair K, L")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--l", type=int, required=True)
    sp.add_argument("--seed-kind", choices=["lq", "two-ellipse"], required=True)
    sp.add_argument("--q", type=float, default=4.0)
    sp.add_argument("--alpha", type=float, default=1.0)
    sp.add_argument("--s", type=float, default=0.3)
    sp.add_argument("--b", type=float, default=1.1)
    sp.add_argument("--g-degree", type=int, default=None)
    sp.add_argument("--num-subspaces", type=int, default=200)
    sp.add_argument("--hconvex-pairs", type=int, default=1000)
    sp.add_argument("--g-out", default=None)

    sp = add("ellipsoid", cmd_ellipsoid, fmt="json", help="circular sections of an ellipsoid")
    sp.add_argument("--axes", required=True, help="a,b,c with a >= b >= c > 0")
    sp.add_argument("--offset", type=float, default=0.0)
    sp.add_argument("--samples", type=int, default=200)
    return p


def run(argv=None):
    """Parse ``argv`` and execute; returns the exit status."""
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        # argparse uses 2 for usage errors, which would read as a FAIL verdict
        return EXIT_OK if exc.code in (0, None) else EXIT_ERROR
    try:
        return args.func(args)
    except SeedRejectedError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INDETERMINATE
    except PreconditionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INDETERMINATE if "indeterminate" in str(exc) else EXIT_ERROR
    except (LDBPError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


def main(argv=None):
    sys.exit(run(argv))
