"""racgkit command line.

Exit codes: 0 success or positive verdict, 1 negative verdict, 2 usage or
input error, 3 internal or construction error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Sequence

from . import graph_core
from .certify import (
    DEFAULT_BUDGET,
    DEFAULT_EXHAUSTIVE_CAP,
    SCHEMA_VERSION,
    StaleCertificateError,
    WitnessCertificate,
    classify_divergence,
    derived_flags,
    search_stable_cycle,
    verify_certificate,
)
from .gamma_builder import (
    GammaConstructionError,
    GammaParams,
    build_gamma,
    points_from_string,
    racg_presentation,
    to_dot,
)
from .graph_core import Graph, GraphError
from .join_analysis import DEFAULT_ORACLE_CAP, brute_force_common_join, pair_in_common_join
from .random_lab import ExperimentConfig, records_to_csv, run_experiment
from .square_cfs import ChainMode, is_cfs, square_chain_graph

EXIT_OK, EXIT_NEGATIVE, EXIT_USAGE, EXIT_INTERNAL = 0, 1, 2, 3

log = logging.getLogger("racgkit")


class UsageError(Exception):
    pass


class Output:
    def __init__(self, as_json: bool, quiet: bool, stream=None):
        self.as_json = as_json
        self.quiet = quiet
        self.stream = stream if stream is not None else sys.stdout

    def say(self, text: str) -> None:
        if not self.as_json and not self.quiet:
            self.stream.write(text if text.endswith("\n") else text + "\n")

    def raw(self, text: str) -> None:
        if not self.as_json:
            self.stream.write(text)

    def doc(self, kind: str, body: dict) -> None:
        if self.as_json:
            out = {"schema_version": SCHEMA_VERSION, "kind": kind, **body}
            self.stream.write(json.dumps(out, indent=2, sort_keys=False) + "\n")


# -- graph file helpers ----------------------------------------------------------


def _format_for(path: str, explicit: str | None) -> str | None:
    if explicit:
        return explicit
    suffix = Path(path).suffix.lower()
    if suffix == ".json":
        return "json"
    if suffix in (".graph", ".txt"):
        return "text"
    return None


def read_graph(path: str, fmt: str | None = None) -> Graph:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    return graph_core.loads(text, _format_for(path, fmt))


def write_graph(g: Graph, path: str | None, fmt: str | None, out: Output) -> None:
    fmt = _format_for(path, fmt) if path else (fmt or "text")
    text = graph_core.dumps(g, fmt or "text")
    if path:
        Path(path).write_text(text, encoding="utf-8")
    else:
        out.raw(text)


# -- subcommands -------------------------------------------------------------------


def cmd_build(args, out: Output) -> int:
    try:
        if args.what == "gamma-n":
            g = build_gamma(GammaParams(args.n))
            label = f"gamma_{args.n}"
        else:
            points = points_from_string(args.points) if args.points else None
            g = build_gamma(GammaParams(args.n, args.m, points))
            label = f"gamma(n={args.n}, m={len(points) if points else args.m})"
    except GammaConstructionError as exc:
        out.doc("build_error", exc.to_dict())
        out.say(f"error: {exc}")
        if exc.witness is not None:
            out.say(f"  witness: {json.dumps(exc.witness.to_dict())}")
        return EXIT_INTERNAL
    if args.out or not out.as_json:
        write_graph(g, args.out, args.format, out)
    if args.out:
        out.say(f"wrote {label}: {g.n} vertices, {g.edge_count} edges -> {args.out}")
    out.doc("build", {"graph": graph_core.to_document(g), "vertex_count": g.n,
                      "edge_count": g.edge_count, "out": args.out})
    return EXIT_OK


def cmd_export(args, out: Output) -> int:
    g = read_graph(args.graph, getattr(args, "input_format", None))
    if args.what == "presentation":
        pres = racg_presentation(g)
        if args.format == "json" and not out.as_json:
            out.raw(json.dumps({"schema_version": SCHEMA_VERSION, "kind": "presentation",
                                **pres.to_dict()}, indent=2) + "\n")
        else:
            out.raw(pres.to_text())
        out.doc("presentation", pres.to_dict())
    else:
        dot = to_dot(g)
        out.raw(dot)
        out.doc("dot", {"dot": dot})
    return EXIT_OK


def cmd_check(args, out: Output) -> int:
    g = read_graph(args.graph, args.format)
    if args.what == "cfs":
        mode = ChainMode(args.mode)
        chain = square_chain_graph(g, mode)
        report = is_cfs(g, mode, chain)
        if args.emit_chain:
            Path(args.emit_chain).write_text(json.dumps(chain.to_document(), indent=2) + "\n",
                                             encoding="utf-8")
        out.say(report.summary)
        out.doc("cfs", {"report": report.to_dict()})
        return EXIT_OK if report.holds else EXIT_NEGATIVE

    try:
        g.index(args.u), g.index(args.v)
    except GraphError as exc:
        raise UsageError(str(exc)) from None
    if args.u == args.v:
        raise UsageError("join-pair needs two distinct vertices")
    witness = pair_in_common_join(g, args.u, args.v)
    verdict = witness is not None
    oracle = None
    if args.oracle:
        oracle = brute_force_common_join(g, args.u, args.v, cap=args.cap)
        if oracle != verdict:
            log.error("oracle disagrees with witness search for %s,%s", args.u, args.v)
            out.say(f"INTERNAL: oracle={oracle} search={verdict}")
            return EXIT_INTERNAL
    if verdict:
        out.say(f"{args.u},{args.v}: in a common join  "
                f"{{{','.join(witness.side_a.names)}}} * {{{','.join(witness.side_b.names)}}}")
    else:
        out.say(f"{args.u},{args.v}: not in any common join")
    out.doc("join_pair", {"pair": [args.u, args.v], "in_common_join": verdict,
                          "witness": witness.to_dict() if witness else None, "oracle": oracle})
    return EXIT_OK if verdict else EXIT_NEGATIVE


def cmd_find(args, out: Output) -> int:
    g = read_graph(args.graph, args.format)
    budget: int | None = args.budget
    if args.exhaustive:
        if g.n > args.cap:
            raise UsageError(f"exhaustive search refused: {g.n} vertices above cap {args.cap}")
        budget = None
    result = search_stable_cycle(g, args.min_len, budget)
    cert = result.certificate
    if cert is not None:
        # never emit an unverified certificate
        if not verify_certificate(g, cert).passed:
            raise RuntimeError("search produced a certificate that fails verification")
        if args.out:
            Path(args.out).write_text(json.dumps(cert.to_dict(), indent=2) + "\n", encoding="utf-8")
        out.say(f"witness: induced {cert.length}-cycle {' '.join(cert.cycle)}")
    elif result.exhausted_budget:
        out.say(f"no witness found within budget {args.budget} (not a proof of absence)")
    else:
        out.say("no witness: search space exhausted")
    out.doc("witness_search", {
        "found": cert is not None,
        "certificate": cert.to_dict() if cert else None,
        "expansions": result.expansions,
        "budget_exhausted": result.exhausted_budget,
    })
    return EXIT_OK if cert is not None else EXIT_NEGATIVE


def _read_certificate(path: str) -> WitnessCertificate:
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read certificate {path}: {exc}") from None
    return WitnessCertificate.from_dict(doc)


def cmd_verify(args, out: Output) -> int:
    g = read_graph(args.graph, args.format)
    cert = _read_certificate(args.cert)
    try:
        report = verify_certificate(g, cert)
    except StaleCertificateError as exc:
        out.say(f"FAIL: {exc}")
        out.doc("verification", {"passed": False, "reason": f"stale certificate: {exc}",
                                 "failing_pair": None, "witness": None})
        return EXIT_NEGATIVE
    out.say(("PASS: " if report.passed else "FAIL: ") + report.reason)
    body = report.to_dict()
    body.pop("schema_version"), body.pop("kind")
    out.doc("verification", body)
    return EXIT_OK if report.passed else EXIT_NEGATIVE


def cmd_classify(args, out: Output) -> int:
    g = read_graph(args.graph, args.format)
    report = classify_divergence(g)
    cert = None
    if args.cert:
        cert = _read_certificate(args.cert)
        try:
            if not verify_certificate(g, cert).passed:
                raise UsageError("certificate does not verify against this graph")
        except StaleCertificateError as exc:
            raise UsageError(str(exc)) from None
    flags = derived_flags(report, cert)
    out.say(f"classification: {report.classification.value}")
    for name, item in flags.to_dict().items():
        if item["value"]:
            out.say(f"  {name}")
    body = report.to_dict()
    body.pop("schema_version"), body.pop("kind")
    body["flags"] = flags.to_dict()
    out.doc("divergence_report", body)
    return EXIT_OK


def cmd_random(args, out: Output) -> int:
    if args.p is None and (args.alpha is None or args.c is None):
        raise UsageError("random needs --p, or both --alpha and --c")
    try:
        cfg = ExperimentConfig(n=args.n, trials=args.trials, seed=args.seed, p=args.p,
                               c=args.c if args.p is None else None,
                               alpha=args.alpha if args.p is None else None,
                               budget=args.budget, mode=ChainMode(args.mode), timing=args.timing)
    except GraphError as exc:
        raise UsageError(str(exc)) from None
    stats, records = run_experiment(cfg, workers=args.workers)
    csv_text = records_to_csv(records)
    if args.csv:
        Path(args.csv).write_text(csv_text, encoding="utf-8")
    elif not out.as_json:
        out.raw(csv_text)
    if args.csv:
        out.say(f"n={cfg.n} p={cfg.density:.4g} trials={cfg.trials} seed={cfg.seed}")
        for name, frac in stats.fractions.items():
            out.say(f"  {name:17s} {frac.value:6.3f}  [{frac.low:.3f}, {frac.high:.3f}]")
        out.say("  (witness_found is a lower bound: search is budgeted)")
    body = stats.to_dict()
    body.pop("schema_version"), body.pop("kind")
    out.doc("experiment_stats", body)
    return EXIT_OK


# -- parser ----------------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        raise UsageError(f"{message}\n\n{self.format_usage()}")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="structured output")
    common.add_argument("--quiet", action="store_true", help="suppress prose")
    graph_in = argparse.ArgumentParser(add_help=False)
    graph_in.add_argument("graph", help="graph file (text or JSON)")
    graph_in.add_argument("--format", choices=["text", "json"], help="graph file format")

    p = _Parser(prog="racgkit", description=__doc__.splitlines()[0],
                parents=[common])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    build = sub.add_parser("build", help="construct gamma_n or gamma")
    bsub = build.add_subparsers(dest="what", required=True, parser_class=_Parser)
    gn = bsub.add_parser("gamma-n", parents=[common])
    gn.add_argument("--n", type=int, required=True)
    gn.add_argument("--out")
    gn.add_argument("--format", choices=["text", "json"])
    gm = bsub.add_parser("gamma", parents=[common])
    gm.add_argument("--n", type=int, required=True)
    gm.add_argument("--m", type=int)
    gm.add_argument("--points", help="comma-separated vertex names, e.g. a1,a4,a7,a10,a13")
    gm.add_argument("--out")
    gm.add_argument("--format", choices=["text", "json"])

    export = sub.add_parser("export", help="presentation or DOT export")
    esub = export.add_subparsers(dest="what", required=True, parser_class=_Parser)
    pres = esub.add_parser("presentation", parents=[common])
    pres.add_argument("graph")
    pres.add_argument("--format", choices=["text", "json"], default="text",
                      help="output format")
    pres.add_argument("--input-format", choices=["text", "json"])
    dot = esub.add_parser("dot", parents=[common])
    dot.add_argument("graph")
    dot.add_argument("--input-format", choices=["text", "json"])

    check = sub.add_parser("check", help="CFS or common-join verdicts")
    csub = check.add_subparsers(dest="what", required=True, parser_class=_Parser)
    cfs = csub.add_parser("cfs", parents=[common, graph_in])
    cfs.add_argument("--mode", choices=[m.value for m in ChainMode], default="diagonal")
    cfs.add_argument("--emit-chain", metavar="FILE")
    jp = csub.add_parser("join-pair", parents=[common, graph_in])
    jp.add_argument("u")
    jp.add_argument("v")
    jp.add_argument("--oracle", action="store_true", help="cross-check with exhaustive search")
    jp.add_argument("--cap", type=int, default=DEFAULT_ORACLE_CAP)

    find = sub.add_parser("find", help="search for a stability witness")
    fsub = find.add_subparsers(dest="what", required=True, parser_class=_Parser)
    fw = fsub.add_parser("witness", parents=[common, graph_in])
    fw.add_argument("--min-len", type=int, default=5)
    fw.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    fw.add_argument("--exhaustive", action="store_true")
    fw.add_argument("--cap", type=int, default=DEFAULT_EXHAUSTIVE_CAP,
                    help="vertex cap for --exhaustive")
    fw.add_argument("--out", metavar="CERT", help="write the certificate here")

    ver = sub.add_parser("verify", parents=[common, graph_in], help="re-check a certificate")
    ver.add_argument("cert")

    cl = sub.add_parser("classify", parents=[common, graph_in], help="divergence classification")
    cl.add_argument("--cert", help="verified certificate enabling witness flags")

    rnd = sub.add_parser("random", parents=[common], help="G(n,p) experiments")
    rnd.add_argument("--n", type=int, required=True)
    rnd.add_argument("--p", type=float)
    rnd.add_argument("--alpha", type=float)
    rnd.add_argument("--c", type=float)
    rnd.add_argument("--trials", type=int, required=True)
    rnd.add_argument("--seed", type=int, required=True)
    rnd.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    rnd.add_argument("--mode", choices=[m.value for m in ChainMode], default="diagonal")
    rnd.add_argument("--workers", type=int, default=1)
    rnd.add_argument("--timing", action="store_true", help="fill the ms column (breaks byte reproducibility)")
    rnd.add_argument("--csv", metavar="FILE")
    return p


COMMANDS = {
    "build": cmd_build,
    "export": cmd_export,
    "check": cmd_check,
    "find": cmd_find,
    "verify": cmd_verify,
    "classify": cmd_classify,
    "random": cmd_random,
}


def main(argv: Sequence[str] | None = None, stdout=None) -> int:
    stdout = stdout if stdout is not None else sys.stdout
    parser = build_parser()
    as_json = False
    try:
        args = parser.parse_args(argv)
        as_json = args.json
        out = Output(args.json, args.quiet, stdout)
        return COMMANDS[args.command](args, out)
    except UsageError as exc:
        _report_error(str(exc), EXIT_USAGE, as_json, stdout)
        return EXIT_USAGE
    except GraphError as exc:
        _report_error(str(exc), EXIT_USAGE, as_json, stdout)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    except Exception as exc:  # noqa: BLE001
        log.exception("internal error")
        _report_error(f"internal error: {exc}", EXIT_INTERNAL, as_json, stdout)
        return EXIT_INTERNAL


def _report_error(message: str, code: int, as_json: bool, stdout) -> None:
    if as_json:
        stdout.write(json.dumps({"schema_version": SCHEMA_VERSION, "kind": "error",
                                 "error": message, "exit_code": code}, indent=2) + "\n")
    else:
        sys.stderr.write(f"racgkit: {message}\n")


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
