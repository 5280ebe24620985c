"""Command-line front end: ``sareg <subcommand> ...``.

Exit codes: 0 success or PASS, 1 a verified FAIL / NOT_FOUND (witness
emitted), 2 input error, 3 degraded result.
"""

from __future__ import annotations

import argparse
import csv
import io
import os
import sys

from . import serialize as ser
from .algebra import InputError
from .colorings import ColoredGraph, build_layered, find_layered_set, verify_pq
from .distances import build_Q, distance_bound_audit, distance_profile, pq_distance_check
from .ramsey import CliqueQuery, mono_clique_search
from .regularity import Partition, PartitionDegraded, partition_homogeneous, verify_homogeneity
from .rtconstruct import (
    EXACT_CAP,
    clique_number,
    compose_rt,
    independence_number,
    intersection_graph,
    rt_upper_audit,
    triangle_free_fixture,
)

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_DEGRADED = 0, 1, 2, 3


def _rational(text: str):
    try:
        return ser.parse_rational(text)
    except InputError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _int_list(text: str) -> list:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from exc


def threads() -> int:
    """``SAREG_THREADS`` (default 1). Work runs sequentially; the value is validated and reported only."""
    raw = os.environ.get("SAREG_THREADS", "1")
    try:
        k = int(raw)
    except ValueError as exc:
        raise InputError(f"SAREG_THREADS must be a positive integer, got {raw!r}") from exc
    if k < 1:
        raise InputError(f"SAREG_THREADS must be a positive integer, got {raw!r}")
    return k


def _emit(doc, out: str | None) -> None:
    text = ser.dumps(doc)
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _write_csv(path: str, header, rows) -> None:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([ser.jsonable(c) for c in row])
    with open(path, "w") as fh:
        fh.write(buf.getvalue())


def _doc(kind: str, **body) -> dict:
    return {"schema_version": ser.SCHEMA_VERSION, "kind": kind, **body}


def _load_inputs(args):
    V = ser.points_from_json(ser.load_json(args.points))
    F = ser.family_from_json(ser.load_json(args.relations))
    return V, F


def _partition_doc(P: Partition, report) -> dict:
    return _doc(
        "partition",
        parts=P.parts,
        provenance=[list(p) if isinstance(p, tuple) else p for p in P.provenance],
        diagnostics=P.diagnostics,
        K=P.K,
        bad_pairs=[list(p) for p in report.bad_pairs],
        bad_mass=report.bad_mass,
        witnesses=[
            {"parts": list(k), "refutations": {name: list(uv) for name, uv in v.items()}}
            for k, v in sorted(report.witnesses.items())
        ],
    )


# -- subcommands ----------------------------------------------------------


def cmd_partition(args) -> int:
    V, F = _load_inputs(args)
    code = EXIT_OK
    try:
        P = partition_homogeneous(V, F, args.eps, depth_cap=args.depth_cap)
    except PartitionDegraded as exc:
        P = exc.partition
        code = EXIT_DEGRADED
    rep = verify_homogeneity(V, F, P)
    doc = _partition_doc(P, rep)
    doc["status"] = "DEGRADED" if code == EXIT_DEGRADED else ("PASS" if rep.bad_mass <= args.eps else "FAIL")
    if code == EXIT_OK and rep.bad_mass > args.eps:
        code = EXIT_FAIL
    _emit(doc, args.out)
    if args.cutting and P.cutting is not None:
        with open(args.cutting, "w") as fh:
            fh.write(ser.dumps(ser.cutting_to_json(P.cutting)))
    if args.csv:
        _write_csv(args.csv, ["part", "size", "cell", "signature"], [
            (k, len(part), *(prov if isinstance(prov, tuple) else (prov, None)))
            for k, (part, prov) in enumerate(zip(P.parts, P.provenance))
        ])
    return code


def cmd_verify(args) -> int:
    V, F = _load_inputs(args)
    doc = ser.load_json(args.partition)
    parts = doc.get("parts") if isinstance(doc, dict) else None
    if not isinstance(parts, list) or not all(isinstance(p, list) for p in parts):
        raise InputError("partition file needs a 'parts' list of index lists")
    P = Partition(parts=[[int(i) for i in p] for p in parts])
    rep = verify_homogeneity(V, F, P)
    out = _doc(
        "homogeneity_report",
        K=P.K,
        bad_pairs=[list(p) for p in rep.bad_pairs],
        bad_mass=rep.bad_mass,
        bad_fraction=rep.bad_fraction,
        witnesses=[
            {"parts": list(k), "refutations": {name: list(uv) for name, uv in v.items()}}
            for k, v in sorted(rep.witnesses.items())
        ],
    )
    ok = args.eps is None or rep.bad_mass <= args.eps
    out["status"] = "PASS" if ok else "FAIL"
    _emit(out, args.out)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_build_layered(args) -> int:
    G, cert = build_layered(args.m)
    doc = _doc(
        "colored_graph",
        m=args.m,
        points=ser.points_to_json(G.points)["points"],
        family=ser.family_to_json(G.family),
        shifts=list(G.shifts),
        certificate=cert.to_dict(),
    )
    _emit(doc, args.out)
    return EXIT_OK


def _graph_from_doc(doc) -> tuple:
    if not isinstance(doc, dict) or "points" not in doc or "family" not in doc:
        raise InputError("graph file needs 'points' and 'family'")
    V = ser.points_from_json(doc["points"])
    F = ser.family_from_json(doc["family"])
    return V, F, ColoredGraph.from_family(V, F)


def cmd_check_pq(args) -> int:
    _, _, G = _graph_from_doc(ser.load_json(args.graph))
    res = verify_pq(G, args.p, args.q)
    _emit(
        _doc("pq_check", p=args.p, q=args.q, status=res.status, witness=res.witness, colors=res.colors),
        args.out,
    )
    return EXIT_OK if res.ok else EXIT_FAIL


def cmd_layered_find(args) -> int:
    if args.graph:
        V, F, _ = _graph_from_doc(ser.load_json(args.graph))
    else:
        if not (args.points and args.relations):
            raise InputError("give a graph file or both --points and --relations")
        V, F = _load_inputs(args)
    res = find_layered_set(V, F, args.s, eps_override=args.eps_override)
    if res is None:
        _emit(_doc("layered_set", s=args.s, status="NOT_FOUND"), args.out)
        return EXIT_FAIL
    _emit(
        _doc(
            "layered_set",
            s=args.s,
            status="FOUND",
            route=res.route,
            subset=list(res.subset),
            certificate=res.certificate.to_dict(),
        ),
        args.out,
    )
    return EXIT_OK


def cmd_ramsey(args) -> int:
    V, F = _load_inputs(args)
    res = mono_clique_search(V, CliqueQuery(tuple(args.targets), F))
    if res is None:
        _emit(_doc("mono_clique", targets=args.targets, status="NOT_FOUND"), args.out)
        return EXIT_FAIL
    _emit(
        _doc(
            "mono_clique",
            targets=args.targets,
            status="FOUND",
            relation=res.relation,
            relation_name=F.relations[res.relation].name,
            clique=list(res.clique),
            route=res.route,
        ),
        args.out,
    )
    return EXIT_OK


def cmd_distances(args) -> int:
    V = ser.points_from_json(ser.load_json(args.points))
    prof = distance_profile(V)
    Q = build_Q(V)
    doc = _doc(
        "distances",
        n=len(V),
        m=prof.m,
        class_sizes=[[k, v] for k, v in prof.sizes().items()],
        Q_size=len(Q),
        max_class_degree=prof.max_degree(),
    )
    code = EXIT_OK
    if args.pq:
        if len(args.pq) != 2:
            raise InputError("--pq takes p,q")
        res = pq_distance_check(V, *args.pq)
        doc["pq"] = {"p": args.pq[0], "q": args.pq[1], **res}
        if res["status"] != "PASS":
            code = EXIT_FAIL
    if args.audit_bound is not None:
        rep = distance_bound_audit(V, args.audit_bound, Q)
        doc["bound_audit"] = rep
        if not rep["holds"]:
            code = EXIT_FAIL
    _emit(doc, args.out)
    if args.csv:
        _write_csv(args.csv, ["squared_distance", "pairs"], prof.sizes().items())
    return code


def cmd_audit_bound(args) -> int:
    V = ser.points_from_json(ser.load_json(args.points))
    rep = distance_bound_audit(V, args.p)
    _emit(_doc("bound_audit", **rep), args.out)
    return EXIT_OK if rep["holds"] else EXIT_FAIL


def cmd_rt(args) -> int:
    S = ser.segments_from_json(ser.load_json(args.family)) if args.family else triangle_free_fixture()
    G = compose_rt(S, args.p)
    n = G.n
    doc = _doc("rt_graph", p=args.p, n=n, edges=G.edge_count(), segments=ser.segments_to_json(G.segments))
    ok = True
    cross_complete = all(
        G.adj[u] >> v & 1 for u in range(n) for v in range(n) if G.copy_of[u] != G.copy_of[v]
    )
    base = intersection_graph(S)
    k = len(S)
    within_ok = all(
        (G.adj[c * k + i] >> (c * k + j) & 1) == (base[i] >> j & 1)
        for c in range(args.p - 1)
        for i in range(k)
        for j in range(k)
        if i != j
    )
    doc["cross_copy_complete"] = cross_complete
    doc["within_copy_matches_family"] = within_ok
    if n <= EXACT_CAP:
        omega = clique_number(G.adj)
        doc["clique_number"] = omega
        doc["independence_number"] = independence_number(G.adj)
        doc["k_2p_minus_1_free"] = omega < 2 * args.p - 1
        ok = omega < 2 * args.p - 1
    ok = ok and cross_complete and within_ok
    if args.eps is not None:
        doc["upper_audit"] = rt_upper_audit(G.points, G.relation, args.eps, args.p)
    doc["status"] = "PASS" if ok else "FAIL"
    _emit(doc, args.out)
    return EXIT_OK if ok else EXIT_FAIL


# -- parser -----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sareg", description="Semi-algebraic regularity and Ramsey toolkit")
    parser.add_argument("--seed", type=int, default=0, help="accepted for reproducibility; no command draws random numbers")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("partition", help="homogeneous partition of a point set")
    p.add_argument("--eps", type=_rational, required=True)
    p.add_argument("--points", required=True)
    p.add_argument("--relations", required=True)
    p.add_argument("--out")
    p.add_argument("--csv", help="write part sizes here")
    p.add_argument("--cutting", help="write the underlying cutting here")
    p.add_argument("--depth-cap", type=int, default=40)
    p.set_defaults(func=cmd_partition)

    p = sub.add_parser("verify", help="re-verify a partition exhaustively")
    p.add_argument("--points", required=True)
    p.add_argument("--relations", required=True)
    p.add_argument("--partition", required=True)
    p.add_argument("--eps", type=_rational)
    p.add_argument("--out")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("build-layered", help="the doubling construction on the line")
    p.add_argument("-m", type=int, required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_build_layered)

    p = sub.add_parser("check-pq", help="exhaustive (p,q)-colouring check")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("graph")
    p.add_argument("--out")
    p.set_defaults(func=cmd_check_pq)

    p = sub.add_parser("layered-find", help="search for a 2^s-point layered set")
    p.add_argument("--s", type=int, required=True)
    p.add_argument("graph", nargs="?")
    p.add_argument("--points")
    p.add_argument("--relations")
    p.add_argument("--eps-override", type=_rational)
    p.add_argument("--out")
    p.set_defaults(func=cmd_layered_find)

    p = sub.add_parser("ramsey", help="monochromatic clique search")
    p.add_argument("--targets", type=_int_list, required=True)
    p.add_argument("--points", required=True)
    p.add_argument("--relations", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_ramsey)

    p = sub.add_parser("distances", help="distance classes and the quadruple relation")
    p.add_argument("--points", required=True)
    p.add_argument("--pq", type=_int_list)
    p.add_argument("--audit-bound", type=int)
    p.add_argument("--out")
    p.add_argument("--csv", help="write class sizes here")
    p.set_defaults(func=cmd_distances)

    p = sub.add_parser("rt", help="compose and audit the copies-of-segments graph")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--family", help="segment family JSON (default: shipped 9-segment fixture)")
    p.add_argument("--eps", type=_rational, help="also run the deletion audit at this epsilon")
    p.add_argument("--out")
    p.set_defaults(func=cmd_rt)

    p = sub.add_parser("audit-bound", help="check the distinct-distance counting bound")
    p.add_argument("--points", required=True)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_audit_bound)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        threads()
        return args.func(args)
    except InputError as exc:
        print(f"sareg: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
