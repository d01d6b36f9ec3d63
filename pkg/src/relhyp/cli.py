"""Command-line front end: ``relhyp <subcommand> ...``.

Reports are deterministic JSON (sorted keys) or CSV on stdout. Exit codes:
0 success, 1 bad input, 2 violated invariant, 3 infeasible or truncation-unsafe.
"""
from __future__ import annotations

import argparse
import csv
import io as _io
import json
import os
import random
import sys
from fractions import Fraction

from . import io as rio

EXIT_OK, EXIT_INPUT, EXIT_INVARIANT, EXIT_INFEASIBLE = 0, 1, 2, 3


class InvariantFailure(RuntimeError):
    pass


class Infeasible(RuntimeError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_INPUT)


def _threads():
    raw = os.environ.get("RELHYP_THREADS", "1")
    try:
        n = int(raw)
    except ValueError:
        raise ValueError(f"RELHYP_THREADS must be a positive integer, got {raw!r}") from None
    if n < 1:
        raise ValueError("RELHYP_THREADS must be >= 1")
    return n


def _jsonable(x):
    if isinstance(x, Fraction):
        return rio.frac_str(x)
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, set, frozenset)):
        items = sorted(x, key=repr) if isinstance(x, (set, frozenset)) else x
        return [_jsonable(v) for v in items]
    if isinstance(x, (str, int, float, bool)) or x is None:
        return x
    return str(x)


def _ints(text):
    try:
        return [int(t) for t in text.replace(":", ",").split(",") if t.strip()]
    except ValueError:
        raise ValueError(f"expected comma-separated vertex ids, got {text!r}") from None


def _ball(M, spec):
    """``ball:v0:R`` -> vertex list, or a comma-separated vertex list."""
    from .graphs import ball_vertices

    if spec.startswith("ball:"):
        parts = spec.split(":")
        if len(parts) != 3:
            raise ValueError("subset must look like ball:v0:R")
        v0, R = int(parts[1]), int(parts[2])
        if not 0 <= v0 < M.n:
            raise ValueError(f"vertex {v0} out of range")
        return ball_vertices(M, v0, R)
    return _ints(spec)


# subcommands ------------------------------------------------------------------


def cmd_cusped(args):
    from .cusped import build_cusped_graph
    from .groups import load_group_pair

    pair = load_group_pair(args.pair)
    X = build_cusped_graph(pair, args.rbase, args.hmax)
    if args.out:
        rio.write_graph(args.out, X.graph, X.heights, X.horoball_of)
    return {
        "vertices": X.graph.n,
        "edges": X.graph.num_edges(),
        "H_max": X.H_max,
        "horoballs": len(X.horoballs),
        "boundary": len(X.graph.boundary),
    }


def cmd_delta(args):
    from .hyperbolicity import four_point_delta

    G = rio.read_graph(args.graph)
    V = _ball(G, args.subset) if args.subset else None
    rep = four_point_delta(G, V, require_safe=not args.unsafe)
    return {"delta": rep.delta, "witness": list(rep.witness), "scanned": rep.scanned,
            "truncation_safe": rep.truncation_safe}


def cmd_rips(args):
    from .complexes import build_rips

    G = rio.read_graph(args.graph)
    V = _ball(G, args.subset) if args.subset else None
    K = build_rips(G, args.kappa, d_max=args.dmax, vertices=V)
    K.heights = getattr(G, "heights", None)
    if args.out:
        rio.write_complex(args.out, K)
    return {"f_vector": K.f_vector(), "kappa": args.kappa, "d_max": K.d_max}


def cmd_homology(args):
    from .complexes import homology_rank

    K = rio.read_complex(args.complex)
    degrees = _ints(args.degrees)
    return {"ranks": {str(k): homology_rank(K, k, reduced=not args.unreduced) for k in degrees},
            "reduced": not args.unreduced}


def _load_cycle(K, path):
    from .complexes import SComplex

    return rio.read_chain(path, cellular=not isinstance(K, SComplex))


def cmd_fill(args):
    from .filling import NotACycle, filling_norm_lp
    from .geomfill import metric_graph

    K = rio.read_complex(args.complex)
    z = _load_cycle(K, args.cycle)
    region = _ball(metric_graph(K), args.region) if args.region else None
    try:
        res = filling_norm_lp(K, z, region)
    except NotACycle as exc:
        raise ValueError(str(exc)) from None
    if res.value is None:
        raise Infeasible("no filling inside the truncation" + (" and region" if region else ""))
    if args.out:
        rio.write_chain(args.out, res.witness)
    return {"value": res.value, "cells": res.cells, "method": res.method, "norm": z.norm()}


def cmd_dehn(args):
    from .filling import dehn_sample

    K = rio.read_complex(args.complex)
    starts = _ints(args.starts) if args.starts else None
    d = dehn_sample(K, args.kmax, budget=args.budget, starts=starts)
    return {"table": d.table, "circuits": d.circuits, "unfillable": d.unfillable,
            "partial": d.partial, "slope": d.slope, "residual": d.residual,
            "max_ratio": d.max_ratio, "lower_bound": True}


def cmd_circuits(args):
    from .filling import circuit_decomposition

    K = rio.read_complex(args.complex)
    z = _load_cycle(K, args.cycle)
    dec = circuit_decomposition(z, K)
    if dec.total() != z or dec.weighted_norm() != z.norm():
        raise InvariantFailure("circuit decomposition does not reconstitute the cycle")
    return {"circuits": [{"coef": a, "length": len(c), "vertices": list(c.vertices)} for a, c in dec.terms],
            "norm": z.norm(), "weighted_norm": dec.weighted_norm()}


def _geodesic_pairs(M, specs):
    from .graphs import canonical_geodesic

    out = []
    for spec in specs:
        u, v = _ints(spec)
        out.append(canonical_geodesic(M, u, v))
    return out


def _certificate(cert, K, out_path):
    ok = cert.check(K)
    if out_path:
        rio.write_chain(out_path, cert.a)
    if not ok:
        raise InvariantFailure("certificate fails the boundary check")
    return {"ratio": cert.ratio, "radius": cert.radius, "maxh": cert.maxh, "norm_z": cert.z.norm(),
            "norm_a": cert.a.norm(), "check": ok, "center": cert.center,
            "details": {k: v for k, v in cert.details.items() if isinstance(v, (int, Fraction, str, list))}}


def cmd_geomfill(args):
    from .geomfill import (FillingInfeasible, fill_graphlike_cycle, fill_triangle_cycle,
                           metric_graph, slice_cycle_along_geodesic, spider_cover)
    from .graphs import canonical_geodesic

    K = rio.read_complex(args.complex)
    M = metric_graph(K)
    delta = rio.parse_frac(args.delta)
    try:
        if args.mode == "spider":
            geos = _geodesic_pairs(M, args.geodesic)
            sc = spider_cover(M, geos, args.S, delta)
            unc = sc.uncovered(M, geos)
            sep = sc.separation(M)
            if unc or (sep is not None and sep <= args.S):
                raise InvariantFailure("spider cover leaves vertices uncovered or segments too close")
            return {"balls": [list(b) for b in sc.balls], "segments": sc.segments, "fallback": sc.fallback,
                    "separation": sep, "uncovered": unc}
        z = _load_cycle(K, args.cycle)
        if args.mode == "slice":
            u, v = _ints(args.path)[:2] if len(_ints(args.path)) == 2 else (None, None)
            path = canonical_geodesic(M, u, v) if u is not None else _ints(args.path)
            res = slice_cycle_along_geodesic(K, z, path, args.S, args.D)
            from .complexes import Chain, boundary

            total = sum((p[1] for p in res.pieces), Chain(z.k))
            if total != z or any(boundary(p[1]) for p in res.pieces):
                raise InvariantFailure("slices do not sum to the cycle")
            return {"pieces": [{"center": x, "radius": R, "norm": zk.norm()} for x, zk, R in res.pieces],
                    "D": res.D, "R": res.R, "ratio": res.ratio}
        if args.mode == "triangle":
            tri = _ints(args.triangle)
            if len(tri) != 3:
                raise ValueError("--triangle needs three vertex ids")
            cert = fill_triangle_cycle(K, z, tuple(tri), args.L, delta)
        else:
            cert = fill_graphlike_cycle(K, z, _geodesic_pairs(M, args.geodesic), args.L, delta)
    except FillingInfeasible as exc:
        raise Infeasible(str(exc)) from None
    return _certificate(cert, K, args.out)


def cmd_paircomplex(args):
    from .groups import load_group_pair
    from .paircomplex import (build_quotient_complex, build_relative_cayley_complex,
                              parse_relative_presentation, word_cycle)

    pair = load_group_pair(args.pair)
    with open(args.presentation) as fh:
        pres = parse_relative_presentation(fh.read(), pair.gamma)
    K = build_relative_cayley_complex(pres, pair, args.radius)
    report = {"vertices": len(K.vertex_labels), "edges": len(K.edges), "faces": len(K.faces)}
    z = word_cycle(K, args.word) if args.word else None
    if z is not None and args.cycle_out:
        rio.write_chain(args.cycle_out, z)
        report["cycle_norm"] = z.norm()
    if args.quotient:
        if z is not None:
            raise ValueError("--word is not supported together with --quotient")
        K = build_quotient_complex(K, pair)
        report["quotient"] = {"vertices": len(K.vertex_labels), "edges": len(K.edges), "faces": len(K.faces)}
    if args.out:
        rio.write_complex(args.out, K)
    return report


def cmd_resolutions(args):
    from . import resolutions as res
    from .groups import load_group_pair

    pair = load_group_pair(args.pair)
    rng = random.Random(args.seed)
    if args.mode == "cohomology":
        k = args.degree
        a, b = res.relative_cohomology_rank(pair, k), res.bar_cohomology_rank(pair, k)
        if a != b:
            raise InvariantFailure(f"cohomology ranks disagree ({a} vs {b})")
        return {"degree": k, "rank": a}
    if args.mode == "bar-iso":
        tallies = res.bar_iso_suite(pair, args.degree)
    else:
        window = res.Window(pair, pair.explore(args.radius))
        if args.mode == "check-cone":
            tallies = res.cone_suite(pair, window, rng, args.samples)
        else:
            tallies = res.phi_suite(pair, window, rng, args.samples)
    failed = {k: v for k, v in tallies.items() if v[0] != v[1]}
    report = {"checks": tallies}
    if failed:
        raise InvariantFailure(f"failed checks: {sorted(failed)}", report)
    return report


# parser -----------------------------------------------------------------------


def build_parser():
    common = _Parser(add_help=False)
    fmt = common.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_const", dest="format", const="json", help="JSON report (default)")
    fmt.add_argument("--csv", action="store_const", dest="format", const="csv", help="flat CSV report")
    common.add_argument("--report", help="write the report here instead of stdout")

    p = _Parser(prog="relhyp", description="Exact combinatorics for relatively hyperbolic pairs.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("cusped", parents=[common], help="build a cusped-graph truncation")
    s.add_argument("--pair", required=True)
    s.add_argument("--rbase", type=int, required=True)
    s.add_argument("--hmax", type=int)
    s.add_argument("--out")
    s.set_defaults(func=cmd_cusped)

    s = sub.add_parser("delta", parents=[common], help="four-point delta of a graph or vertex subset")
    s.add_argument("--graph", required=True)
    s.add_argument("--subset", help="ball:v0:R or v1,v2,...")
    s.add_argument("--unsafe", action="store_true", help="allow scans that are not truncation-safe")
    s.set_defaults(func=cmd_delta)

    s = sub.add_parser("rips", parents=[common], help="Rips complex of a graph")
    s.add_argument("--graph", required=True)
    s.add_argument("--kappa", type=int, required=True)
    s.add_argument("--dmax", type=int, default=2)
    s.add_argument("--subset")
    s.add_argument("--out")
    s.set_defaults(func=cmd_rips)

    s = sub.add_parser("homology", parents=[common], help="rational homology ranks")
    s.add_argument("--complex", required=True)
    s.add_argument("--degrees", default="0,1")
    s.add_argument("--unreduced", action="store_true")
    s.set_defaults(func=cmd_homology)

    s = sub.add_parser("fill", parents=[common], help="exact filling norm of a cycle")
    s.add_argument("--complex", required=True)
    s.add_argument("--cycle", required=True)
    s.add_argument("--region", help="ball:v0:R or v1,v2,...")
    s.add_argument("--out", help="write the optimal filling chain here")
    s.set_defaults(func=cmd_fill)

    s = sub.add_parser("dehn", parents=[common], help="sample the homological Dehn function")
    s.add_argument("--complex", required=True)
    s.add_argument("--kmax", type=int, required=True)
    s.add_argument("--budget", type=int)
    s.add_argument("--starts", help="comma-separated start vertices")
    s.set_defaults(func=cmd_dehn)

    s = sub.add_parser("circuits", parents=[common], help="circuit decomposition of a 1-cycle")
    s.add_argument("--complex", required=True)
    s.add_argument("--cycle", required=True)
    s.set_defaults(func=cmd_circuits)

    s = sub.add_parser("geomfill", parents=[common], help="geometric filling constructions")
    s.add_argument("mode", choices=["slice", "spider", "triangle", "graphlike"])
    s.add_argument("--complex", required=True)
    s.add_argument("--cycle")
    s.add_argument("--path", help="u,v (canonical geodesic) or an explicit vertex path")
    s.add_argument("--geodesic", action="append", default=[], help="u,v endpoints; repeatable")
    s.add_argument("--triangle", help="v1,v2,v3")
    s.add_argument("--S", type=int, default=10)
    s.add_argument("--D", type=int)
    s.add_argument("--L", type=int, default=1)
    s.add_argument("--delta", default="1")
    s.add_argument("--out", help="write the filling chain here")
    s.set_defaults(func=cmd_geomfill)

    s = sub.add_parser("paircomplex", parents=[common], help="relative Cayley complex of a presentation")
    s.add_argument("--pair", required=True)
    s.add_argument("--presentation", required=True)
    s.add_argument("--radius", type=int, required=True)
    s.add_argument("--quotient", action="store_true")
    s.add_argument("--word", help="trace this word from the identity as a 1-chain")
    s.add_argument("--cycle-out")
    s.add_argument("--out")
    s.set_defaults(func=cmd_paircomplex)

    s = sub.add_parser("resolutions", parents=[common], help="standard-resolution identity checks")
    s.add_argument("mode", choices=["check-cone", "check-phi", "bar-iso", "cohomology"])
    s.add_argument("--pair", required=True)
    s.add_argument("--degree", type=int, default=2)
    s.add_argument("--samples", type=int, default=100)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--radius", type=int, default=2, help="window radius in the word metric")
    s.set_defaults(func=cmd_resolutions)
    return p


def _required(args):
    if args.command == "geomfill":
        need = {"slice": ("cycle", "path"), "triangle": ("cycle", "triangle"),
                "graphlike": ("cycle", "geodesic"), "spider": ("geodesic",)}[args.mode]
        missing = [n for n in need if not getattr(args, n)]
        if missing:
            raise ValueError(f"geomfill {args.mode} needs " + ", ".join("--" + n for n in missing))


def _flatten(prefix, x, rows):
    if isinstance(x, dict):
        for k in sorted(x):
            _flatten(f"{prefix}.{k}" if prefix else str(k), x[k], rows)
    elif isinstance(x, list) and any(isinstance(v, (dict, list)) for v in x):
        for n, v in enumerate(x):
            _flatten(f"{prefix}.{n}", v, rows)
    else:
        rows.append((prefix, json.dumps(x) if isinstance(x, list) else x))


def render(report, fmt):
    if fmt == "csv":
        rows = []
        _flatten("", report, rows)
        buf = _io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(("key", "value"))
        w.writerows(rows)
        return buf.getvalue()
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    params = {k: v for k, v in vars(args).items() if k not in ("func", "format", "report")}
    status, result, error = EXIT_OK, None, None
    try:
        params["threads"] = _threads()
        _required(args)
        result = args.func(args)
    except InvariantFailure as exc:
        status, error = EXIT_INVARIANT, str(exc.args[0])
        result = exc.args[1] if len(exc.args) > 1 else None
    except Exception as exc:  # mapped onto exit codes below
        from .hyperbolicity import TruncationUnsafe

        if isinstance(exc, (Infeasible, TruncationUnsafe)):
            status = EXIT_INFEASIBLE
        elif isinstance(exc, (ValueError, OSError, KeyError, ZeroDivisionError)):
            status = EXIT_INPUT
        else:
            raise
        error = f"{type(exc).__name__}: {exc}"
    report = {"command": args.command, "params": params, "status": status}
    if result is not None:
        report["result"] = result
    if error:
        report["error"] = error
        print(f"relhyp: {error}", file=sys.stderr)
    text = render(_jsonable(report), args.format or "json")
    if args.report:
        with open(args.report, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return status


def run():
    sys.exit(main())


if __name__ == "__main__":
    run()
