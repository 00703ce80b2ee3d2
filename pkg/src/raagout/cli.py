"""Command-line front end.

    raagout analyze graph.txt
    raagout gamma-k --k 2 | raagout analyze --json
    raagout census --max-n 6

Exit status: 0 on success, 1 on input error, 2 on verification failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from collections import Counter
from concurrent.futures import ProcessPoolExecutor

from . import __version__
from .automorphisms import DEFAULT_INNER_RADIUS
from .dichotomy import (
    DEFAULT_GRID,
    DEFAULT_WORD_LENGTH,
    CertificateError,
    certify_f2_retraction,
    certify_ping_pong,
    classify,
    nilpotence_witness_check,
    sol_graph,
    verify_lemma_commutations,
    verify_sol_example,
)
from .graph_core import (
    Graph,
    GraphError,
    PreconditionError,
    gamma_k,
    graphs_up_to,
    parse_graph,
    serialize_graph,
)
from .words import WordError

SCHEMA_VERSION = 1

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_VERIFY = 2


class InputError(Exception):
    pass


def _read_graph(args) -> Graph:
    if args.graph in (None, "-"):
        text = sys.stdin.read()
    else:
        try:
            with open(args.graph, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise InputError(f"cannot read {args.graph}: {exc.strerror}") from None
    try:
        return parse_graph(text, allow_empty=args.allow_empty)
    except GraphError as exc:
        raise InputError(str(exc)) from None


def _graph_echo(g: Graph) -> dict:
    return {"vertices": list(g.vertices), "edges": [list(e) for e in g.edges()]}


def _document(command: str, g: Graph | None, payload: dict) -> dict:
    doc = {"schema_version": SCHEMA_VERSION, "command": command}
    if g is not None:
        doc["graph"] = _graph_echo(g)
    doc["report"] = payload
    return doc


def _emit(args, doc: dict, text: str) -> None:
    if args.json:
        sys.stdout.write(json.dumps(doc, indent=2, ensure_ascii=False) + "\n")
    else:
        sys.stdout.write(text.rstrip("\n") + "\n")


# ---------------------------------------------------------------------------
# commands


def _analysis_params(args) -> dict:
    return dict(grid=args.grid, word_length=args.words, radius=args.inner_radius)


def cmd_analyze(args) -> int:
    g = _read_graph(args)
    rep = classify(g, **_analysis_params(args))
    d = rep.to_dict(g)
    lines = [f"verdict: {rep.verdict}"]
    if rep.verdict == "free":
        fw = d["free_witness"]
        if rep.free_witness.kind == "domination_pair":
            x, y = rep.free_witness.certificate.x, rep.free_witness.certificate.y
            lines.append(f"witness: domination-equivalent pair {{{x}, {y}}}")
        else:
            sil = rep.sil
            lines.append(f"witness: separating intersection of links for {sil.x}, {sil.y} "
                         f"(component {{{', '.join(sil.component)}}})")
        lines.append("generators: " + ", ".join(fw["generators"]))
    else:
        lines.append(f"nilpotence class: {rep.nilpotence_class}")
        if rep.nilpotency.alphas:
            lines.append("witness chain: " + " >= ".join(rep.nilpotency.chain)
                         + f" ({rep.nilpotency.chain_kind})")
    flags = rep.special
    lines.append(f"virtually abelian: {flags.virtually_abelian}; finite: {flags.out_finite}")
    _emit(args, _document("analyze", g, d), "\n".join(lines))
    return EXIT_OK


def cmd_depth(args) -> int:
    g = _read_graph(args)
    from .graph_core import depth_report

    rep = depth_report(g)
    width = max([len(v) for v in g.vertices] + [6])
    lines = [f"{'vertex':<{width}}  dom  sep  depth"]
    for r in rep.per_vertex:
        lines.append(f"{r.vertex:<{width}}  {r.domination_depth:>3}  "
                     f"{r.star_separation_depth:>3}  {r.depth:>5}")
    lines.append(f"depth(graph) = {rep.graph_depth}")
    _emit(args, _document("depth", g, rep.to_dict()), "\n".join(lines))
    return EXIT_OK


def cmd_witness(args) -> int:
    g = _read_graph(args)
    rep = classify(g, **_analysis_params(args))
    if rep.free_witness is not None:
        w = rep.free_witness
        if w.kind == "domination_pair":
            ok = certify_ping_pong(w.certificate)
            method = f"ping-pong on H_1, grid {w.certificate.grid}"
        else:
            ok = certify_f2_retraction(g, w, args.words)
            method = f"F2 retraction, words up to length {args.words}"
        payload = {"verdict": rep.verdict, "free_witness": w.to_dict(g),
                   "reverified": ok, "method": method}
        text = (f"free witness ({w.kind}): {', '.join(payload['free_witness']['generators'])}\n"
                f"certificate ({method}): {'verified' if ok else 'FAILED'}")
    else:
        check = nilpotence_witness_check(g, rep.nilpotency, args.inner_radius)
        ok = bool(check)
        payload = {"verdict": rep.verdict, "nilpotency": rep.nilpotency.to_dict(g),
                   "witness_check": check.to_dict(), "reverified": ok}
        lines = [f"nilpotence class {rep.nilpotence_class}"]
        for d in check.details:
            lines.append(f"  {d}")
        lines.append(f"witness check: {'verified' if ok else 'FAILED'}")
        text = "\n".join(lines)
    _emit(args, _document("witness", g, payload), text)
    return EXIT_OK if ok else EXIT_VERIFY


def cmd_verify_lemmas(args) -> int:
    g = _read_graph(args)
    rep = verify_lemma_commutations(g, args.inner_radius)
    d = rep.to_dict()
    lines = [f"SIL-free: {rep.sil_free}; both conditions fail: {rep.conditions_fail}"]
    for name, tally in (("commute in Aut", rep.general), ("commute in Out", rep.commute),
                        ("commutator identity", rep.steinberg)):
        lines.append(f"{name}: {tally.passed}/{tally.applicable} passed")
    lines.append(f"failures: {rep.failure_count}")
    _emit(args, _document("verify-lemmas", g, d), "\n".join(lines))
    return EXIT_OK if rep.failure_count == 0 else EXIT_VERIFY


def cmd_verify_sol(args) -> int:
    rep = verify_sol_example()
    lines = [f"{name}: {'ok' if ok else 'FAILED'}" for name, ok in rep.checks.items()]
    lines.append(f"matrix: {rep.matrix}")
    _emit(args, _document("verify-sol", sol_graph(), rep.to_dict()), "\n".join(lines))
    return EXIT_OK if rep.ok else EXIT_VERIFY


def cmd_gamma_k(args) -> int:
    if args.k < 0:
        raise InputError("--k must be non-negative")
    g = gamma_k(args.k)
    if args.json:
        _emit(args, _document("gamma-k", g, {"k": args.k}), "")
    else:
        sys.stdout.write(serialize_graph(g))
    return EXIT_OK


def _census_row(g: Graph) -> tuple[int, str, object]:
    rep = classify(g)
    detail = rep.free_witness.kind if rep.free_witness else rep.nilpotence_class
    return g.n, rep.verdict, detail


def cmd_census(args) -> int:
    if args.max_n < 0:
        raise InputError("--max-n must be non-negative")
    graphs = graphs_up_to(args.max_n)
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            rows = list(pool.map(_census_row, graphs, chunksize=16))
    else:
        rows = [_census_row(g) for g in graphs]
    per_n: dict[int, Counter] = {}
    for n, verdict, detail in rows:
        c = per_n.setdefault(n, Counter())
        c["graphs"] += 1
        if verdict == "free":
            c["free"] += 1
            c[f"free_{detail}"] += 1
        else:
            c["virtually_nilpotent"] += 1
            c[f"class_{detail}"] += 1
    payload = {"max_n": args.max_n,
               "by_vertices": {str(n): dict(sorted(per_n[n].items())) for n in sorted(per_n)}}
    lines = ["n  graphs  free  nilpotent  classes"]
    for n in sorted(per_n):
        c = per_n[n]
        classes = ", ".join(f"{k[6:]}:{v}" for k, v in sorted(c.items()) if k.startswith("class_"))
        lines.append(f"{n}  {c['graphs']:>6}  {c['free']:>4}  {c['virtually_nilpotent']:>9}  {classes}")
    _emit(args, _document("census", None, payload), "\n".join(lines))
    return EXIT_OK


# ---------------------------------------------------------------------------
# argument parsing


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="raagout", description=__doc__.split("\n")[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit a structured JSON report")
    common.add_argument("--grid", type=int, default=DEFAULT_GRID,
                        help="ping-pong grid half-width (default %(default)s)")
    common.add_argument("--words", type=int, default=DEFAULT_WORD_LENGTH,
                        help="retraction word length (default %(default)s)")
    common.add_argument("--inner-radius", type=int, default=DEFAULT_INNER_RADIUS,
                        help="centraliser search radius (default %(default)s)")
    common.add_argument("--allow-empty", action="store_true",
                        help="accept a graph file with no vertices")
    graph_arg = argparse.ArgumentParser(add_help=False)
    graph_arg.add_argument("graph", nargs="?", help="graph file (default: standard input)")

    sub = p.add_subparsers(dest="command", required=True)
    for name, fn, helptext in (
        ("analyze", cmd_analyze, "classify Out(A_Γ) and report witnesses"),
        ("depth", cmd_depth, "per-vertex depth table"),
        ("witness", cmd_witness, "emit and re-verify the certificate"),
        ("verify-lemmas", cmd_verify_lemmas, "machine-check the commutation identities"),
    ):
        sp = sub.add_parser(name, parents=[common, graph_arg], help=helptext)
        sp.set_defaults(func=fn)
    sp = sub.add_parser("verify-sol", parents=[common], help="check the solvable example")
    sp.set_defaults(func=cmd_verify_sol)
    sp = sub.add_parser("gamma-k", parents=[common], help="write the Γ_k graph")
    sp.add_argument("--k", type=int, required=True)
    sp.set_defaults(func=cmd_gamma_k)
    sp = sub.add_parser("census", parents=[common], help="classify all small graphs")
    sp.add_argument("--max-n", type=int, required=True)
    sp.add_argument("--jobs", type=int, default=1, help="worker processes")
    sp.set_defaults(func=cmd_census)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    for flag in ("grid", "words", "inner_radius"):
        if getattr(args, flag) < 0:
            print(f"error: --{flag.replace('_', '-')} must be non-negative", file=sys.stderr)
            return EXIT_INPUT
    try:
        return args.func(args)
    except (InputError, PreconditionError, WordError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except CertificateError as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        return EXIT_VERIFY


if __name__ == "__main__":
    sys.exit(main())
