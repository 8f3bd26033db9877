"""Named network families: toppling, sandpile, rotor; and sandpilization."""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

from .algebra import production_matrix
from .core import Network, NetworkError, Processor
from .linalg import as_matrix


@dataclass(frozen=True)
class GraphSpec:
    """Directed multigraph.  Undirected edges are given as both orientations.

    Vertices listed in ``sinks`` are not part of the built network; letters
    sent to them vanish.
    """

    vertices: tuple
    edges: tuple
    rotor_order: dict = field(default_factory=dict)
    sinks: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "edges", tuple(tuple(e) for e in self.edges))
        object.__setattr__(self, "sinks", tuple(self.sinks))
        known = set(self.vertices)
        for u, v in self.edges:
            if u not in known or v not in known:
                raise NetworkError(f"edge ({u!r}, {v!r}) has an unknown endpoint")
        for s in self.sinks:
            if s not in known:
                raise NetworkError(f"unknown sink {s!r}")

    @classmethod
    def undirected(cls, vertices, edges, sinks=()):
        both = [(u, v) for u, v in edges] + [(v, u) for u, v in edges]
        return cls(vertices, both, sinks=sinks)

    @property
    def active(self):
        return [v for v in self.vertices if v not in self.sinks]

    def out_neighbours(self, v):
        """Out-edges of ``v`` in rotor order (multiplicity kept)."""
        if v in self.rotor_order:
            order = list(self.rotor_order[v])
            if Counter(order) != Counter(w for u, w in self.edges if u == v):
                raise NetworkError(f"rotor order at {v!r} does not match its out-edges")
            return order
        return [w for u, w in self.edges if u == v]


def build_toppling(L, names=None, thresholds=None, name="topp") -> Network:
    """Locally recurrent toppling network.

    Vertex ``v`` counts modulo its threshold ``r_v`` (default ``L[v][v]``) and,
    on wrapping from ``r_v - 1`` to 0, sends ``r_v*[u==v] - L[u][v]`` letters
    to each ``u``.  With default thresholds this is ``Topp(L)``; larger
    thresholds allow self-emission (diagonal of the production matrix).
    """
    L = as_matrix(L)
    n = L.shape[0]
    if L.shape != (n, n) or not L.is_integer:
        raise NetworkError("toppling matrix must be a square integer matrix")
    names = [f"v{i}" for i in range(n)] if names is None else [str(v) for v in names]
    if len(names) != n:
        raise NetworkError("need one name per row")
    r = [int(L[i, i]) for i in range(n)] if thresholds is None else [int(t) for t in thresholds]
    procs = []
    for v in range(n):
        if r[v] < 1:
            raise NetworkError(f"threshold at {names[v]!r} must be positive")
        out = {}
        for u in range(n):
            c = int((r[v] if u == v else 0) - L[u, v])
            if u != v and L[u, v] > 0:
                raise NetworkError(f"positive off-diagonal entry L[{names[u]}][{names[v]}]")
            if c < 0:
                raise NetworkError(f"threshold {r[v]} at {names[v]!r} is below L[v][v]")
            if c:
                out[names[u]] = c
        a = names[v]
        states = [str(i) for i in range(r[v])]
        trans = {a: [(i + 1) % r[v] for i in range(r[v])]}
        emit = {a: [out if i == r[v] - 1 else {} for i in range(r[v])]}
        procs.append(Processor(a, [a], states, trans, emit))
    return Network(procs, name=name)


def graph_laplacian(g: GraphSpec):
    active = g.active
    pos = {v: i for i, v in enumerate(active)}
    n = len(active)
    L = [[0] * n for _ in range(n)]
    for u, w in g.edges:
        if u == w:
            raise NetworkError(f"self-loop at {u!r}")
        if u in g.sinks:
            continue
        L[pos[u]][pos[u]] += 1
        if w in pos:
            L[pos[w]][pos[u]] -= 1
    for v in active:
        if L[pos[v]][pos[v]] == 0:
            raise NetworkError(f"vertex {v!r} has no out-edges and is not a sink")
    return L


def build_sandpile(g: GraphSpec, name="sand") -> Network:
    return build_toppling(graph_laplacian(g), names=g.active, name=name)


def build_rotor(g: GraphSpec, name="rotor") -> Network:
    """Simple rotor network: each letter advances the rotor, then one letter leaves along it."""
    procs = []
    for v in g.active:
        nbrs = g.out_neighbours(v)
        if not nbrs:
            raise NetworkError(f"vertex {v!r} has zero outdegree")
        if v in nbrs:
            raise NetworkError(f"self-loop at {v!r}")
        d = len(nbrs)
        trans = {v: [(i + 1) % d for i in range(d)]}
        emit = {v: [{} if nbrs[(i + 1) % d] in g.sinks else {nbrs[(i + 1) % d]: 1} for i in range(d)]}
        procs.append(Processor(v, [v], [str(i) for i in range(d)], trans, emit))
    return Network(procs, name=name)


def sandpilize(net: Network, q=None, name=None) -> Network:
    """Toppling network with the Laplacian of ``N_q``: one vertex per letter, threshold ``r_a``."""
    data = production_matrix(net, q)
    return build_toppling(data.L, names=data.alphabet, thresholds=data.D,
                          name=name or f"S({net.name})")
