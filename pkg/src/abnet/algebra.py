"""Algebraic invariants of a finite abelian network.

Total kernel ``K`` (per-vertex lattices and letter periods), production
matrix ``P``, Laplacian ``L = (I - P) D``, local components (restriction of
state spaces) and strong components (restriction of the alphabet).
"""
from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import prod

import networkx as nx

from .core import Config, Network, local_action
from .linalg import IntLattice, RatMatrix, hnf, intersect_coordinates, lattice_sum
from .monoid import compose, generate_monoid, irreducible_components, minimal_idempotent

EXHAUSTIVE_LIMIT = 10**4
SAMPLE_SIZE = 100


class KernelInconsistency(AssertionError):
    """An identity that must hold for a correct kernel computation failed."""


class AlphabetMismatch(ValueError):
    pass


def vertex_monoid(net: Network, v: int):
    key = ("monoid", v)
    if key not in net._cache:
        net._cache[key] = generate_monoid(net.processors[v])
    return net._cache[key]


def vertex_idempotent(net: Network, v: int):
    key = ("e", v)
    if key not in net._cache:
        net._cache[key] = minimal_idempotent(vertex_monoid(net, v))
    return net._cache[key]


def locally_recurrent(net: Network, q) -> tuple:
    """``q_hat = (e_v q_v)``."""
    return tuple(vertex_idempotent(net, v)[s] for v, s in enumerate(q))


def is_locally_recurrent(net: Network, q) -> bool:
    return locally_recurrent(net, q) == tuple(q)


def recurrent_states(net: Network):
    """All locally recurrent total states, in lexicographic order."""
    per = [sorted({e[x] for x in range(len(e))}) for e in (vertex_idempotent(net, v) for v in range(len(net.processors)))]
    return [tuple(q) for q in product(*per)]


# -- local components ---------------------------------------------------------

@dataclass(frozen=True)
class LocalComponents:
    classes: tuple  # per vertex: tuple of state-index tuples

    @property
    def count(self):
        return prod(len(c) for c in self.classes)

    def label(self, q) -> tuple:
        return tuple(
            next(k for k, cls in enumerate(classes) if s in cls)
            for classes, s in zip(self.classes, q)
        )

    def labels(self):
        return list(product(*(range(len(c)) for c in self.classes)))

    def states(self, label):
        return [self.classes[v][k] for v, k in enumerate(label)]


def local_components(net: Network) -> LocalComponents:
    key = ("components",)
    if key not in net._cache:
        net._cache[key] = LocalComponents(tuple(
            tuple(irreducible_components(vertex_monoid(net, v)))
            for v in range(len(net.processors))
        ))
    return net._cache[key]


def local_component(net: Network, q) -> tuple[Network, tuple]:
    """The local component ``N_q`` and the image of ``q`` in its relabelled states."""
    comps = local_components(net)
    keep = comps.states(comps.label(q))
    if all(len(k) == len(p.states) for k, p in zip(keep, net.processors)):
        return net, tuple(q)
    sub = net.restrict_states(keep, name=f"{net.name}|component")
    return sub, tuple(k.index(s) for k, s in zip(keep, q))


# -- total kernel -------------------------------------------------------------

@dataclass(frozen=True)
class KernelData:
    lattices: tuple  # per vertex IntLattice over Z^{A_v}
    periods: tuple  # per letter, global order
    group_orders: tuple  # |H_v| per vertex

    @property
    def lattice(self) -> IntLattice:
        return lattice_sum(self.lattices)

    def __contains__(self, vec):
        return tuple(vec) in self.lattice


def _perm_group(gens, n):
    """BFS of the permutation group generated by ``gens`` (dict letter -> perm) with Cayley relations."""
    letters = list(gens)
    unit = tuple(range(n))
    witness = {unit: (0,) * len(letters)}
    queue = deque([unit])
    relations = []
    while queue:
        g = queue.popleft()
        for k, a in enumerate(letters):
            h = compose(gens[a], g)
            w = list(witness[g])
            w[k] += 1
            if h in witness:
                rel = tuple(x - y for x, y in zip(w, witness[h]))
                if any(rel):
                    relations.append(rel)
            else:
                witness[h] = tuple(w)
                queue.append(h)
    return witness, relations


def _order(perm):
    unit = tuple(range(len(perm)))
    g, k = perm, 1
    while g != unit:
        g = compose(perm, g)
        k += 1
    return k


def vertex_kernel(net: Network, v: int):
    """``K_v``, ``|H_v|`` and periods for one vertex, from the action on ``e_v Q_v``."""
    key = ("kernel", v)
    if key in net._cache:
        return net._cache[key]
    p = net.processors[v]
    e = vertex_idempotent(net, v)
    eQ = sorted({e[x] for x in range(len(e))})
    pos = {x: i for i, x in enumerate(eQ)}
    gens = {}
    for a in p.alphabet:
        t = p.transition[a]
        perm = tuple(pos[t[x]] for x in eQ)
        if sorted(perm) != list(range(len(eQ))):
            raise KernelInconsistency(f"letter {a!r} does not permute the recurrent states")
        gens[a] = perm
    dim = len(p.alphabet)
    if dim == 0:
        out = (IntLattice((), 0), 1, ())
        net._cache[key] = out
        return out
    witness, relations = _perm_group(gens, len(eQ))
    # r_a . 1_a is always a relation of the group; include it so the span is full rank
    periods = tuple(_order(gens[a]) for a in p.alphabet)
    units = [tuple(r if j == k else 0 for j in range(dim)) for k, r in enumerate(periods)]
    L = hnf(relations + units, dim)
    if L.index != len(witness):
        raise KernelInconsistency(f"index {L.index} != |H_v| = {len(witness)} at vertex {p.vertex!r}")
    out = (L, len(witness), periods)
    net._cache[key] = out
    return out


def total_kernel(net: Network) -> KernelData:
    """Kernel of the full network (per-vertex actions on ``e_v Q_v``).

    Call on ``local_component(net, q)[0]`` for the component-relative kernel.
    """
    lattices, orders, periods = [], [], []
    for v in range(len(net.processors)):
        L, h, r = vertex_kernel(net, v)
        lattices.append(L)
        orders.append(h)
        periods.extend(r)
    return KernelData(tuple(lattices), tuple(periods), tuple(orders))


# -- production matrix --------------------------------------------------------

@dataclass(frozen=True)
class ProductionData:
    P: RatMatrix
    D: tuple  # periods r_a
    L: RatMatrix
    base_state: tuple  # locally recurrent state in the component network
    kernel: KernelData
    network: Network  # the local component the data was computed on

    @property
    def alphabet(self):
        return self.network.alphabet


def production_matrix(net: Network, q=None) -> ProductionData:
    """``P_q``, ``D_q`` and ``L_q`` of the local component containing ``q``."""
    q = net.initial_state if q is None else tuple(q)
    comp, qc = local_component(net, q)
    key = ("production", qc)
    if key in comp._cache:
        return comp._cache[key]
    kern = total_kernel(comp)
    qhat = locally_recurrent(comp, qc)
    n = comp.num_letters
    zero = Config((0,) * n, qhat)
    cols = []
    for b in range(n):
        r = kern.periods[b]
        x = [0] * n
        x[b] = r
        out = local_action(comp, x, zero)
        if out.state != qhat:
            raise KernelInconsistency(f"{r} copies of {comp.alphabet[b]!r} did not return to the base state")
        cols.append([Fraction(c, r) for c in out.letters])
    P = RatMatrix([[cols[b][a] for b in range(n)] for a in range(n)])
    L = RatMatrix([
        [(int(a == b) - P[a, b]) * kern.periods[b] for b in range(n)] for a in range(n)
    ])
    if not L.is_integer:
        raise KernelInconsistency("Laplacian has non-integer entries")
    data = ProductionData(P, kern.periods, L, qhat, kern, comp)
    comp._cache[key] = data
    return data


def production_independence_check(net: Network, rng=None) -> bool:
    """Does ``P`` agree across all locally recurrent states of each local component?"""
    rng = rng or random.Random(0)
    comps = local_components(net)
    for label in comps.labels():
        keep = comps.states(label)
        sub = net.restrict_states(keep)
        states = recurrent_states(sub)
        if len(states) > EXHAUSTIVE_LIMIT:
            states = rng.sample(states, SAMPLE_SIZE)
        ref = None
        for q in states:
            P = _production_at(sub, q)
            if ref is None:
                ref = P
            elif P != ref:
                return False
    return True


def _production_at(net, qhat):
    """Production matrix measured at a specific recurrent state (no caching across states)."""
    kern = total_kernel(net)
    n = net.num_letters
    cols = []
    for b in range(n):
        x = [0] * n
        x[b] = kern.periods[b]
        out = local_action(net, x, Config((0,) * n, qhat))
        if out.state != tuple(qhat):
            raise KernelInconsistency("kernel vector moved a recurrent state")
        cols.append([Fraction(c, kern.periods[b]) for c in out.letters])
    return RatMatrix([[cols[b][a] for b in range(n)] for a in range(n)])


# -- strong components --------------------------------------------------------

def production_graph(P: RatMatrix, alphabet) -> nx.DiGraph:
    """Edge ``a -> b`` whenever processing ``a`` produces ``b`` on average (``p_ba > 0``)."""
    G = nx.DiGraph()
    G.add_nodes_from(alphabet)
    n = len(alphabet)
    for a in range(n):
        for b in range(n):
            if P[b, a] > 0:
                G.add_edge(alphabet[a], alphabet[b])
    return G


@dataclass(frozen=True)
class StrongComponent:
    letters: tuple
    block: RatMatrix  # P_ii
    restricted_P: RatMatrix  # production matrix of the restricted subnetwork
    kernel_from_restriction: tuple  # per-vertex HNF bases of the restricted network's kernel
    kernel_from_intersection: tuple  # per-vertex HNF bases of K intersected with Z^{A^i}

    @property
    def block_matches(self):
        return self.block == self.restricted_P

    @property
    def kernel_matches(self):
        return self.kernel_from_restriction == self.kernel_from_intersection


@dataclass(frozen=True)
class StrongComponents:
    components: tuple  # StrongComponent, ordered so that A^i --> A^j implies i >= j
    order: tuple  # letter order grouping the components
    permuted_P: RatMatrix
    block_triangular: bool


def strong_components(net: Network, q=None) -> StrongComponents:
    data = production_matrix(net, q)
    comp = data.network
    alpha = comp.alphabet
    G = production_graph(data.P, alpha)
    C = nx.condensation(G)
    pos = {a: i for i, a in enumerate(alpha)}
    members = {c: sorted(C.nodes[c]["members"], key=pos.get) for c in C.nodes}
    topo = list(nx.lexicographical_topological_sort(C, key=lambda c: pos[members[c][0]]))
    # sources first in topo; reversing puts reachable components first
    groups = [members[c] for c in reversed(topo)]
    order = [a for g in groups for a in g]
    idx = [pos[a] for a in order]
    Pp = data.P.submatrix(idx, idx)
    where = {}
    for i, g in enumerate(groups):
        for a in g:
            where[a] = i
    tri = all(
        Pp[r, c] == 0
        for r in range(len(order))
        for c in range(len(order))
        if where[order[r]] > where[order[c]]
    )
    full_lattices = data.kernel.lattices
    out = []
    for g in groups:
        gi = [pos[a] for a in g]
        block = data.P.submatrix(gi, gi)
        sub = comp.restrict_letters(g, name=f"{comp.name}|strong")
        sdata = production_matrix(sub, data.base_state)
        sub_alpha = sdata.alphabet
        sP = sdata.P.submatrix([sub_alpha.index(a) for a in g], [sub_alpha.index(a) for a in g])
        from_restr, from_inter = [], []
        for v, p in enumerate(comp.processors):
            keep = [k for k, a in enumerate(p.alphabet) if a in g]
            from_inter.append(intersect_coordinates(full_lattices[v], keep).basis)
            from_restr.append(sdata.kernel.lattices[v].basis)
        out.append(StrongComponent(tuple(g), block, sP, tuple(from_restr), tuple(from_inter)))
    return StrongComponents(tuple(out), tuple(order), Pp, tri)


# -- homotopy -----------------------------------------------------------------

def homotopic(net1: Network, net2: Network, q1=None, q2=None) -> bool:
    """Same total kernel and same production matrix (on the local components of ``q1``, ``q2``)."""
    if net1.alphabet != net2.alphabet:
        raise AlphabetMismatch("networks do not share a total alphabet")
    if [p.alphabet for p in net1.processors] != [p.alphabet for p in net2.processors]:
        raise AlphabetMismatch("letters are distributed differently over the vertices")
    d1 = production_matrix(net1, q1)
    d2 = production_matrix(net2, q2)
    return d1.kernel.lattices == d2.kernel.lattices and d1.P == d2.P
