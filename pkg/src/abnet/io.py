"""JSON formats for networks, inputs, graphs and analysis reports.

Exact numbers in reports are strings: ``"n"`` for integers and ``"num/den"``
for rationals in lowest terms.  Vectors follow the global alphabet order.
"""
from __future__ import annotations

import hashlib
import json
from fractions import Fraction

from .core import Config, Network, Processor
from .builders import GraphSpec


class FormatError(ValueError):
    pass


def exact(v) -> str:
    return str(Fraction(v))


def exact_vec(v):
    return [exact(c) for c in v]


def exact_mat(M):
    return [exact_vec(r) for r in (M.rows if hasattr(M, "rows") else M)]


def parse_exact(s) -> Fraction:
    return Fraction(s)


def canonical(doc) -> str:
    return json.dumps(doc, sort_keys=True, separators=(",", ":"))


def network_to_dict(net: Network) -> dict:
    vertices = []
    for p in net.processors:
        vertices.append({
            "id": p.vertex,
            "alphabet": list(p.alphabet),
            "states": list(p.states),
            "transition": {a: list(p.transition[a]) for a in p.alphabet},
            "emit": {a: [dict(m) for m in p.emit[a]] for a in p.alphabet},
        })
    doc = {"name": net.name, "vertices": vertices}
    if any(net.initial_state):
        doc["initial_state"] = net.state_labels(net.initial_state)
    return doc


def network_from_dict(doc: dict) -> Network:
    try:
        procs = [
            Processor(v["id"], v["alphabet"], v["states"], v["transition"], v["emit"])
            for v in doc["vertices"]
        ]
        return Network(procs, name=doc.get("name", ""), initial_state=doc.get("initial_state"))
    except (KeyError, TypeError) as exc:
        raise FormatError(f"malformed network document: {exc!r}") from exc


def fingerprint(net: Network) -> str:
    return hashlib.sha256(canonical(network_to_dict(net)).encode()).hexdigest()


def load_json(path):
    """Read a JSON file; decoding errors become :class:`FormatError` with the position."""
    with open(path) as fh:
        text = fh.read()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc


def load_network(path) -> Network:
    return network_from_dict(load_json(path))


def save_network(net: Network, path):
    with open(path, "w") as fh:
        json.dump(network_to_dict(net), fh, indent=1, sort_keys=True)
        fh.write("\n")


def input_from_dict(net: Network, doc: dict) -> Config:
    letters = doc.get("letters", {})
    for a, c in letters.items():
        if a not in net.letter_index:
            raise FormatError(f"unknown letter {a!r} in input")
        if int(c) != c or c < 0:
            raise FormatError(f"letter count for {a!r} must be a nonnegative integer")
    state = net.initial_state
    if "state" in doc:
        state = net.state_from_labels(doc["state"])
    return net.config(letters, state)


def graph_from_dict(doc: dict) -> GraphSpec:
    try:
        return GraphSpec(doc["vertices"], doc["edges"], doc.get("rotor_order", {}), doc.get("sinks", ()))
    except (KeyError, TypeError) as exc:
        raise FormatError(f"malformed graph document: {exc!r}") from exc


def config_to_dict(net: Network, cfg: Config) -> dict:
    return {"letters": exact_vec(cfg.letters), "state": net.state_labels(cfg.state)}
