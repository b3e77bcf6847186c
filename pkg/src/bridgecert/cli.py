"""Command-line front end.

Subcommands: omega, twisted-check, certify, pretzel, torus2,
two-bridge, tangle, arborescent, fatgraph, corpus, verify-report.
Reports are JSON (the canonical format; text output is derived from
it), deterministic byte-for-byte for identical inputs and
configuration, and self-contained: verify-report re-checks every
certificate from the report file alone.

Exit codes: 0 success, 1 domain error (bad input), 2 search budget
exhausted.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from pathlib import Path

from . import __version__
from .arborescent import (
    PlaneTree,
    TreeError,
    build_diagram,
    coxeter_labeling,
    seed_schedule,
    validate_tree,
)
from .checkerboard import brunner_labeling, checkerboard_color, extract_gamma, twisted_extractions
from .coxeter import Certificate, CoxeterGraph, StrandLabeling, certify, rank, verify_labeling
from .diagram import Diagram, DiagramError, is_reduced, parse_pd
from .families import FamilyError, pretzel, rational_tangle, torus2, two_bridge
from .fatgraph import (
    FatGraph,
    FatGraphError,
    decompose,
    constructive_coloring,
    faces as fat_faces,
    gamma_dual,
    is_twisted,
    omega_fat,
    replay_fat,
)
from .search import BudgetExceeded
from .wirtinger import ColoringSequence, OmegaResult, omega, replay

EXIT_OK = 0
EXIT_DOMAIN = 1
EXIT_BUDGET = 2


def _sha256(text: str) -> str:
    return hashlib.sha256(text.encode()).hexdigest()


def _emit(report: dict, fmt: str) -> None:
    if fmt == "json":
        print(json.dumps(report, sort_keys=True, indent=2))
    else:
        _emit_text(report)


def _emit_text(node, indent: str = "") -> None:
    if isinstance(node, dict):
        for key in sorted(node):
            value = node[key]
            if isinstance(value, (dict, list)):
                print("%s%s:" % (indent, key))
                _emit_text(value, indent + "  ")
            else:
                print("%s%s: %s" % (indent, key, value))
    elif isinstance(node, list):
        for value in node:
            if isinstance(value, (dict, list)):
                _emit_text(value, indent + "  ")
                print()
            else:
                print("%s- %s" % (indent, value))
    else:
        print("%s%s" % (indent, node))


def _budget_kwargs(args) -> dict:
    return {
        "budget_nodes": args.budget_nodes,
        "budget_seconds": args.budget_seconds,
    }


def _read_diagram(path: str) -> Diagram:
    text = Path(path).read_text() if path != "-" else sys.stdin.read()
    stripped = text.strip()
    if stripped.startswith("{"):
        return Diagram.from_json(json.loads(stripped))
    return parse_pd(stripped)


def _omega_json(result: OmegaResult, with_timings: bool) -> dict:
    data = result.to_json()
    if with_timings:
        data["search"]["wall_seconds"] = result.stats.wall_time
    return data


def _certificate_json(diagram: Diagram, cert: Certificate) -> dict:
    data = cert.to_json()
    data["diagram"] = diagram.to_json()
    return data


def cmd_omega(args) -> tuple[int, dict]:
    diagram = _read_diagram(args.input)
    result = omega(diagram, max_k=args.max_k, **_budget_kwargs(args))
    return EXIT_OK, {
        "command": "omega",
        "crossings": diagram.num_crossings,
        "strands": diagram.num_strands,
        "omega": _omega_json(result, args.timings),
    }


def _gamma_summary(extraction, twisted, reasons) -> dict:
    g = extraction.graph
    dual = gamma_dual(g)
    return {
        "shaded_faces": sorted(extraction.shaded),
        "vertices": g.num_vertices,
        "edges": [
            [g.endpoints(e)[0], g.endpoints(e)[1], g.weights[e]]
            for e in range(g.num_edges)
        ],
        "dual_vertices": dual.num_vertices,
        "twisted": twisted,
        "reasons": reasons,
    }


def cmd_twisted_check(args) -> tuple[int, dict]:
    diagram = _read_diagram(args.input)
    reduced, violations = is_reduced(diagram)
    if not reduced:
        return EXIT_OK, {
            "command": "twisted-check",
            "reduced": False,
            "violations": violations,
            "twisted": False,
        }
    rows = [
        _gamma_summary(ext, flag, reasons)
        for (ext, flag, reasons) in twisted_extractions(diagram)
    ]
    return EXIT_OK, {
        "command": "twisted-check",
        "reduced": True,
        "colorings": rows,
        "twisted": any(r["twisted"] for r in rows),
    }


def _certify_diagram(
    diagram: Diagram,
    graph: CoxeterGraph | None,
    labeling: StrandLabeling | None,
    args,
    notes: tuple[str, ...] = (),
) -> tuple[int, dict]:
    if graph is None or labeling is None:
        # fall back to the checkerboard construction
        for (ext, flag, _reasons) in twisted_extractions(diagram):
            if flag:
                graph, labeling = brunner_labeling(diagram, ext)
                notes = notes + ("labeling from twisted checkerboard surface",)
                break
    if graph is None or labeling is None:
        return EXIT_DOMAIN, {
            "command": "certify",
            "error": "no labeling available: diagram is not twisted as given "
            "and no labeling was supplied",
        }
    result = omega(diagram, **_budget_kwargs(args))
    cert = certify(diagram, graph, labeling, result, notes=notes)
    report = {
        "command": "certify",
        "certificate": _certificate_json(diagram, cert),
    }
    if cert.conclusion is not None:
        report["conclusion"] = "bridge number = meridional rank = %d" % cert.conclusion
    return EXIT_OK, report


def _parse_int_list(text: str) -> list[int]:
    return [int(x) for x in text.replace(",", " ").split()]


def cmd_certify(args) -> tuple[int, dict]:
    notes: tuple[str, ...] = ()
    if args.pretzel:
        fam = pretzel(_parse_int_list(args.pretzel))
        diagram, graph, labeling = fam.diagram, fam.graph, fam.labeling
        notes = ("pretzel %s" % args.pretzel,)
    elif args.torus2 is not None:
        fam = torus2(args.torus2)
        diagram, graph, labeling = fam.diagram, fam.graph, fam.labeling
        notes = ("torus2 %d" % args.torus2,)
    elif args.two_bridge:
        a, b = _parse_int_list(args.two_bridge)
        fam = two_bridge(a, b)
        diagram, graph, labeling = fam.diagram, fam.graph, fam.labeling
        notes = ("two-bridge %d/%d" % (a, b),)
    elif args.tree:
        tree = PlaneTree.from_json(json.loads(Path(args.tree).read_text()))
        build = build_diagram(tree)
        graph, labeling = coxeter_labeling(build)
        diagram = build.diagram
        notes = ("arborescent tree %s" % args.tree,)
    else:
        diagram = _read_diagram(args.input)
        if args.labeling:
            data = json.loads(Path(args.labeling).read_text())
            graph = CoxeterGraph.from_json(data["coxeter_graph"])
            labeling = StrandLabeling.from_json(data["labeling"])
        else:
            graph = labeling = None
    return _certify_diagram(diagram, graph, labeling, args, notes)


def cmd_pretzel(args) -> tuple[int, dict]:
    fam = pretzel(_parse_int_list(args.coefficients))
    report = {
        "command": "pretzel",
        "diagram": fam.diagram.to_json(),
        "pd": fam.diagram.to_pd(),
        "crossings": fam.diagram.num_crossings,
    }
    if fam.graph is not None:
        report["coxeter_graph"] = fam.graph.to_json()
        report["labeling"] = fam.labeling.to_json()
    return EXIT_OK, report


def cmd_torus2(args) -> tuple[int, dict]:
    fam = torus2(args.n)
    return EXIT_OK, {
        "command": "torus2",
        "diagram": fam.diagram.to_json(),
        "pd": fam.diagram.to_pd(),
        "coxeter_graph": fam.graph.to_json(),
        "labeling": fam.labeling.to_json(),
    }


def cmd_two_bridge(args) -> tuple[int, dict]:
    fam = two_bridge(args.alpha, args.beta)
    return EXIT_OK, {
        "command": "two-bridge",
        "diagram": fam.diagram.to_json(),
        "pd": fam.diagram.to_pd(),
        "coxeter_graph": fam.graph.to_json(),
        "labeling": fam.labeling.to_json(),
    }


def cmd_tangle(args) -> tuple[int, dict]:
    tangle, labeling = rational_tangle(_parse_int_list(args.twists))
    return EXIT_OK, {
        "command": "tangle",
        "tangle": tangle.to_json(),
        "boundary_pattern": list(labeling.boundary_pattern),
        "coxeter_graph": labeling.graph.to_json(),
        "labeling": labeling.labeling.to_json(),
    }


def cmd_arborescent(args) -> tuple[int, dict]:
    tree = PlaneTree.from_json(json.loads(Path(args.tree).read_text()))
    build = build_diagram(tree)
    valid, reasons = validate_tree(tree)
    report = {
        "command": "arborescent",
        "tree": tree.to_json(),
        "valid": valid,
        "validation_reasons": reasons,
        "leaf_count": tree.leaf_count(),
        "diagram": build.diagram.to_json(),
        "pd": build.diagram.to_pd(),
    }
    schedule = seed_schedule(build)
    report["seed_schedule"] = schedule.to_json()
    try:
        graph, labeling = coxeter_labeling(build)
        report["coxeter_graph"] = graph.to_json()
        report["labeling"] = labeling.to_json()
    except TreeError as err:
        report["labeling_refused"] = str(err)
        report["note"] = (
            "no rank-equals-leaf-count quotient is constructed for this "
            "tree; the true bridge number may be smaller than the leaf "
            "count and certifying it is out of scope"
        )
    if args.certify:
        if "labeling" not in report:
            report["certificate_error"] = (
                "labeling construction refused; no certificate"
            )
        else:
            result = omega(build.diagram, **_budget_kwargs(args))
            cert = certify(build.diagram, graph, labeling, result)
            report["certificate"] = _certificate_json(build.diagram, cert)
    return EXIT_OK, report


def cmd_fatgraph(args) -> tuple[int, dict]:
    graph = FatGraph.from_json(json.loads(Path(args.graph).read_text()))
    if args.action == "omega":
        k, (seeds, order), stats = omega_fat(
            graph,
            budget_nodes=args.budget_nodes,
            budget_seconds=args.budget_seconds,
        )
        return EXIT_OK, {
            "command": "fatgraph omega",
            "omega": k,
            "seeds": list(seeds),
            "order": list(order),
            "search": stats.to_json(),
        }
    if args.action == "color":
        seeds, order = constructive_coloring(graph)
        return EXIT_OK, {
            "command": "fatgraph color",
            "seeds": list(seeds),
            "order": list(order),
            "regions": len(fat_faces(graph)),
        }
    script = decompose(graph)
    return EXIT_OK, {
        "command": "fatgraph decompose",
        "operations": script.summary(),
        "replays_isomorphic": True,
    }


def cmd_corpus(args) -> tuple[int, dict]:
    directory = Path(args.directory)
    rows = []
    counts = {"certified": 0, "uncertified": 0, "failed": 0}
    for path in sorted(directory.iterdir()):
        if path.suffix not in (".pd", ".json"):
            continue
        row = {"file": path.name, "sha256": _sha256(path.read_text())}
        try:
            code, data = _corpus_row(path, args)
            row.update(data)
            if row.get("conclusion") is not None:
                counts["certified"] += 1
            else:
                counts["uncertified"] += 1
        except (DiagramError, FamilyError, TreeError, FatGraphError, ValueError) as err:
            row["error"] = str(err)
            counts["failed"] += 1
        rows.append(row)
    return EXIT_OK, {
        "command": "corpus",
        "rows": rows,
        "summary": counts,
    }


def _corpus_row(path: Path, args) -> tuple[int, dict]:
    text = path.read_text().strip()
    if path.suffix == ".pd" or not text.startswith("{"):
        diagram = parse_pd(text)
        graph = labeling = None
        tree = None
    else:
        data = json.loads(text)
        if "crossings" in data:
            diagram = Diagram.from_json(data)
            graph = labeling = None
        elif "weights" in data and "children" in data:
            tree = PlaneTree.from_json(data)
            build = build_diagram(tree)
            diagram = build.diagram
            try:
                graph, labeling = coxeter_labeling(build)
            except TreeError:
                graph = labeling = None
        else:
            raise DiagramError("unrecognized JSON input")
    code, report = _certify_diagram(diagram, graph, labeling, args)
    if code != EXIT_OK:
        return code, {"conclusion": None, "note": report.get("error")}
    cert = report["certificate"]
    return EXIT_OK, {
        "omega": cert["omega"],
        "coxeter_rank": cert["coxeter_rank"],
        "conclusion": cert["conclusion"],
        "certificate": cert,
    }


def cmd_verify_report(args) -> tuple[int, dict]:
    data = json.loads(Path(args.report).read_text())
    certs = []

    def collect(node):
        if isinstance(node, dict):
            if "labeling" in node and "omega_result" in node and "diagram" in node:
                certs.append(node)
            for value in node.values():
                collect(value)
        elif isinstance(node, list):
            for value in node:
                collect(value)

    collect(data)
    results = []
    all_ok = True
    for cert in certs:
        ok, detail = _verify_certificate(cert)
        all_ok = all_ok and ok
        results.append({"ok": ok, "detail": detail})
    return (EXIT_OK if all_ok else EXIT_DOMAIN), {
        "command": "verify-report",
        "certificates_checked": len(results),
        "results": results,
        "all_ok": all_ok,
    }


def _verify_certificate(cert: dict) -> tuple[bool, str]:
    try:
        diagram = Diagram.from_json(cert["diagram"])
        graph = CoxeterGraph.from_json(cert["coxeter_graph"])
        labeling = StrandLabeling.from_json(cert["labeling"])
        sequence = ColoringSequence.from_json(cert["omega_result"]["certificate"])
    except (KeyError, DiagramError, ValueError) as err:
        return False, "malformed certificate: %s" % err
    if not replay(diagram, sequence):
        return False, "coloring sequence does not replay"
    if len(sequence.seeds) != cert["omega"]:
        return False, "seed count differs from recorded omega"
    ok, failures = verify_labeling(diagram, graph, labeling)
    if not ok:
        return False, "labeling fails verification: %r" % failures[:2]
    if cert["conclusion"] is not None:
        if rank(graph) != cert["omega"] or cert["conclusion"] != cert["omega"]:
            return False, "conclusion does not match rank and omega"
    return True, "certificate replays"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bridgecert",
        description="Bridge number certificates via Wirtinger numbers "
        "and Coxeter quotients",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def common(p):
        p.add_argument("--format", choices=("json", "text"), default="json")
        p.add_argument("--budget-nodes", type=int, default=None)
        p.add_argument("--budget-seconds", type=float, default=None)
        p.add_argument("--threads", type=int, default=1,
                       help="accepted for interface compatibility; "
                       "evaluation is sequential and deterministic")
        p.add_argument("--timings", action="store_true",
                       help="include wall-clock times (breaks byte "
                       "determinism of reports)")

    p = sub.add_parser("omega", help="exact Wirtinger number of a diagram")
    p.add_argument("input", help="PD file, diagram JSON file, or - for stdin")
    p.add_argument("--max-k", type=int, default=None)
    common(p)
    p.set_defaults(func=cmd_omega)

    p = sub.add_parser("twisted-check", help="checkerboard fat graphs and twistedness")
    p.add_argument("input")
    common(p)
    p.set_defaults(func=cmd_twisted_check)

    p = sub.add_parser("certify", help="bridge = meridional rank certificate")
    p.add_argument("input", nargs="?", default=None)
    p.add_argument("--labeling", help="JSON file with coxeter_graph and labeling")
    p.add_argument("--auto", action="store_true",
                   help="derive the labeling from a twisted checkerboard surface")
    p.add_argument("--pretzel", help="comma-separated coefficients")
    p.add_argument("--torus2", type=int, default=None)
    p.add_argument("--two-bridge", help="alpha,beta")
    p.add_argument("--tree", help="plane tree JSON file")
    common(p)
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("pretzel")
    p.add_argument("-a", "--coefficients", required=True)
    common(p)
    p.set_defaults(func=cmd_pretzel)

    p = sub.add_parser("torus2")
    p.add_argument("-n", type=int, required=True, dest="n")
    common(p)
    p.set_defaults(func=cmd_torus2)

    p = sub.add_parser("two-bridge")
    p.add_argument("alpha", type=int)
    p.add_argument("beta", type=int)
    common(p)
    p.set_defaults(func=cmd_two_bridge)

    p = sub.add_parser("tangle")
    p.add_argument("twists", help="comma-separated twist vector")
    common(p)
    p.set_defaults(func=cmd_tangle)

    p = sub.add_parser("arborescent")
    p.add_argument("tree", help="plane tree JSON file")
    p.add_argument("--certify", action="store_true")
    common(p)
    p.set_defaults(func=cmd_arborescent)

    p = sub.add_parser("fatgraph")
    p.add_argument("action", choices=("omega", "color", "decompose"))
    p.add_argument("graph", help="fat graph JSON file")
    common(p)
    p.set_defaults(func=cmd_fatgraph)

    p = sub.add_parser("corpus")
    p.add_argument("directory")
    common(p)
    p.set_defaults(func=cmd_corpus)

    p = sub.add_parser("verify-report")
    p.add_argument("report")
    common(p)
    p.set_defaults(func=cmd_verify_report)

    return parser


_LISTY_OPTIONS = ("--pretzel", "-a", "--coefficients", "--two-bridge")


def _preprocess(argv: list[str]) -> list[str]:
    """Let list-valued options take values that begin with a minus sign,
    as in ``certify --pretzel -2,3,5``."""
    out = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if tok in _LISTY_OPTIONS and i + 1 < len(argv):
            out.append("%s=%s" % (tok, argv[i + 1]))
            i += 2
        else:
            out.append(tok)
            i += 1
    return out


def run(argv: list[str]) -> int:
    parser = build_parser()
    args = parser.parse_args(_preprocess(argv))
    if getattr(args, "threads", 1) < 1:
        parser.error("--threads must be positive")
    try:
        code, report = args.func(args)
    except BudgetExceeded as err:
        report = {
            "error": str(err),
            "known_floor": err.known_floor,
            "partial": "unknown >= %d" % (err.known_floor + 1),
        }
        _emit(report, args.format)
        return EXIT_BUDGET
    except (DiagramError, FamilyError, TreeError, FatGraphError) as err:
        _emit({"error": str(err)}, args.format)
        return EXIT_DOMAIN
    except (ValueError, OSError, json.JSONDecodeError) as err:
        _emit({"error": str(err)}, args.format)
        return EXIT_DOMAIN
    report["tool_version"] = __version__
    _emit(report, args.format)
    return code


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
