"""Command-line front end.  Reports go to stdout as JSON; diagnostics to stderr."""
from __future__ import annotations

import argparse
import json
import sys

from . import __version__
from .algebra import local_components, recurrent_states as total_recurrent, strong_components, vertex_monoid
from .builders import build_rotor, build_sandpile, build_toppling, sandpilize
from .core import BudgetExceeded, DEFAULT_MAX_STEPS, NetworkError, run_to_completion, validate_abelian
from .halting import DEFAULT_MAX_ROUNDS, halt_on_input, halts_on_all_inputs
from .io import (
    FormatError,
    config_to_dict,
    exact,
    exact_mat,
    exact_vec,
    fingerprint,
    graph_from_dict,
    input_from_dict,
    load_json,
    network_from_dict,
    network_to_dict,
    save_network,
)
from .monoid import irreducible_components, recurrent_structure

EXIT_OK, EXIT_FAIL, EXIT_PARSE = 0, 1, 2
EXIT_NEVER, EXIT_INCONCLUSIVE = 10, 20


class ParseFailure(Exception):
    pass


def _load_net(path):
    try:
        return network_from_dict(load_json(path))
    except (FormatError, NetworkError, OSError, ValueError) as exc:
        raise ParseFailure(str(exc)) from exc


def _load_state(net, path):
    if path is None:
        return net.initial_state
    try:
        return input_from_dict(net, load_json(path)).state
    except (FormatError, ValueError, KeyError) as exc:
        raise ParseFailure(str(exc)) from exc


def _emit(doc, out=None):
    text = json.dumps(doc, indent=1, sort_keys=True)
    if out:
        with open(out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _header(command, net):
    return {"command": command, "version": __version__, "network": net.name, "fingerprint": fingerprint(net)}


def _violations(net):
    return [
        {"vertex": v.vertex, "a": v.a, "b": v.b, "state": v.state, "identity": v.identity}
        for v in validate_abelian(net)
    ]


def cmd_validate(args):
    net = _load_net(args.network)
    bad = _violations(net)
    _emit({**_header("validate", net), "valid": not bad, "violations": bad})
    return EXIT_FAIL if bad else EXIT_OK


def _amplifier_doc(net, amp):
    if amp is None:
        return None
    return {"x": exact_vec(amp.x), "state": net.state_labels(amp.q), "y": exact_vec(amp.y), "strong": amp.strong}


def analysis_report(net, q, debug_all_minors=False):
    """The ``analyze`` document for ``net`` at state ``q`` (no header)."""
    verdict = halts_on_all_inputs(net, q, all_minors=debug_all_minors)
    data = verdict.production
    comp = data.network
    sc = strong_components(net, q)
    lc = local_components(net)
    ev = verdict.toppling
    return {
        "alphabet": list(data.alphabet),
        "state": net.state_labels(q),
        "base_state": comp.state_labels(data.base_state),
        "periods": exact_vec(data.D),
        "kernel_hnf": {
            p.vertex: exact_mat(L.basis) for p, L in zip(comp.processors, data.kernel.lattices)
        },
        "kernel_index": {p.vertex: exact(L.index) for p, L in zip(comp.processors, data.kernel.lattices)},
        "P": exact_mat(data.P),
        "D": exact_mat([[data.D[i] if i == j else 0 for j in range(len(data.D))] for i in range(len(data.D))]),
        "L": exact_mat(data.L),
        "local_components": {
            p.vertex: [[p.states[s] for s in cls] for cls in classes]
            for p, classes in zip(net.processors, lc.classes)
        },
        "strong_components": [list(c.letters) for c in sc.components],
        "block_order": list(sc.order),
        "block_triangular": sc.block_triangular,
        "verdict": {
            "halts_all": verdict.halts_all,
            "minors": exact_vec(ev.minors),
            "inverse_nonneg": ev.inverse_nonneg,
            "witness": exact_vec(ev.witness) if ev.witness is not None else None,
            "all_minors_positive": (all(m > 0 for m in ev.all_minors.values()) if ev.all_minors is not None else None),
            "amplifier": _amplifier_doc(net, verdict.amplifier),
        },
        "pf": {
            "lambda": verdict.pf.lam,
            "lower": verdict.pf.lower,
            "upper": verdict.pf.upper,
            "converged": verdict.pf.converged,
        },
    }


def cmd_analyze(args):
    net = _load_net(args.network)
    q = _load_state(net, args.state)
    bad = _violations(net)
    if bad:
        print(f"network is not abelian: {len(bad)} violation(s)", file=sys.stderr)
        _emit({**_header("analyze", net), "valid": False, "violations": bad})
        return EXIT_FAIL
    _emit({**_header("analyze", net), **analysis_report(net, q, args.debug_all_minors)})
    return EXIT_OK


def input_verdict_doc(net, v):
    doc = {"outcome": v.outcome, "rounds": v.rounds, "note": v.note}
    if v.odometer is not None:
        doc["odometer"] = exact_vec(v.odometer)
    if v.final is not None:
        doc["final"] = config_to_dict(net, v.final)
    if v.reason:
        doc["reason"] = v.reason
    if v.pair:
        doc["dickson_pair"] = list(v.pair)
    return doc


def cmd_run(args):
    net = _load_net(args.network)
    try:
        cfg = input_from_dict(net, load_json(args.input))
    except (FormatError, ValueError, KeyError, OSError) as exc:
        raise ParseFailure(str(exc)) from exc
    if validate_abelian(net):
        print("network is not abelian", file=sys.stderr)
        return EXIT_FAIL
    amp = None
    doc = _header("run", net)
    doc["input"] = config_to_dict(net, cfg)
    if args.use_amplifier:
        verdict = halts_on_all_inputs(net, cfg.state)
        amp = verdict.amplifier
        doc["amplifier"] = _amplifier_doc(net, amp)
    v = halt_on_input(net, cfg, max_rounds=args.max_rounds, amplifier=amp)
    doc["verdict"] = input_verdict_doc(net, v)
    if args.max_steps is not None:
        try:
            rec = run_to_completion(net, cfg, max_steps=args.max_steps)
            doc["simulation"] = {"odometer": exact_vec(rec.odometer), "final": config_to_dict(net, rec.final)}
        except BudgetExceeded as exc:
            doc["simulation"] = {"budget_exceeded": exc.steps}
    _emit(doc)
    return {"halts": EXIT_OK, "never_halts": EXIT_NEVER}.get(v.outcome, EXIT_INCONCLUSIVE)


def cmd_components(args):
    net = _load_net(args.network)
    q = _load_state(net, args.state)
    lc = local_components(net)
    sc = strong_components(net, q)
    _emit({
        **_header("components", net),
        "local_components": {
            p.vertex: [[p.states[s] for s in cls] for cls in classes]
            for p, classes in zip(net.processors, lc.classes)
        },
        "local_component_count": lc.count,
        "strong_components": [
            {"letters": list(c.letters), "block": exact_mat(c.block),
             "block_matches_restriction": c.block_matches, "kernel_matches_intersection": c.kernel_matches}
            for c in sc.components
        ],
        "block_order": list(sc.order),
        "permuted_P": exact_mat(sc.permuted_P),
        "block_triangular": sc.block_triangular,
    })
    return EXIT_OK


def cmd_monoid(args):
    net = _load_net(args.network)
    out = {}
    for v, p in enumerate(net.processors):
        M = vertex_monoid(net, v)
        rs = recurrent_structure(M)
        out[p.vertex] = {
            "size": len(M),
            "e": [p.states[i] for i in rs.e],
            "recurrent_states": [p.states[i] for i in sorted(rs.eQ)],
            "group_size": len(rs.eM),
            "components": [[p.states[i] for i in c] for c in irreducible_components(M)],
        }
    _emit({**_header("monoid", net), "vertices": out,
           "locally_recurrent_states": len(total_recurrent(net))})
    return EXIT_OK


def cmd_build(args):
    try:
        doc = load_json(args.matrix if args.kind == "topp" else args.graph)
        if args.kind == "topp":
            mat = doc["L"] if isinstance(doc, dict) else doc
            names = doc.get("names") if isinstance(doc, dict) else None
            net = build_toppling(mat, names=names, name=args.name or "topp")
        else:
            g = graph_from_dict(doc)
            build = build_sandpile if args.kind == "sand" else build_rotor
            net = build(g, name=args.name or args.kind)
    except (FormatError, NetworkError, KeyError, TypeError, OSError) as exc:
        raise ParseFailure(str(exc)) from exc
    if args.output:
        save_network(net, args.output)
    else:
        _emit(network_to_dict(net))
    return EXIT_OK


def cmd_sandpilize(args):
    net = _load_net(args.network)
    q = _load_state(net, args.state)
    S = sandpilize(net, q)
    if args.output:
        save_network(S, args.output)
    else:
        _emit(network_to_dict(S))
    return EXIT_OK


def make_parser():
    ap = argparse.ArgumentParser(prog="abnet", description="Finite abelian networks: analysis and halting.")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check the abelian axioms")
    p.add_argument("network")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("analyze", help="kernel, production matrix, Laplacian and halting verdict")
    p.add_argument("network")
    p.add_argument("--state", help="input-format JSON file giving the initial state")
    p.add_argument("--debug-all-minors", action="store_true", help="also check every principal minor")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("run", help="decide halting for one input")
    p.add_argument("network")
    p.add_argument("--input", required=True)
    p.add_argument("--max-rounds", type=int, default=DEFAULT_MAX_ROUNDS)
    p.add_argument("--max-steps", type=int, default=None,
                   help=f"also simulate letter by letter with this budget (e.g. {DEFAULT_MAX_STEPS})")
    p.add_argument("--use-amplifier", action="store_true")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("components", help="local and strong components")
    p.add_argument("network")
    p.add_argument("--state")
    p.set_defaults(func=cmd_components)

    p = sub.add_parser("monoid", help="transition monoid structure per vertex")
    p.add_argument("network")
    p.set_defaults(func=cmd_monoid)

    p = sub.add_parser("build", help="construct a named network family")
    p.add_argument("kind", choices=["topp", "sand", "rotor"])
    p.add_argument("--matrix")
    p.add_argument("--graph")
    p.add_argument("--name")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("sandpilize", help="toppling network with the same Laplacian")
    p.add_argument("network")
    p.add_argument("--state")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_sandpilize)
    return ap


def main(argv=None):
    ap = make_parser()
    args = ap.parse_args(argv)
    if args.command == "build":
        need = "matrix" if args.kind == "topp" else "graph"
        if getattr(args, need) is None:
            ap.error(f"build {args.kind} needs --{need}")
    try:
        return args.func(args)
    except ParseFailure as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except Exception as exc:  # noqa: BLE001
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
