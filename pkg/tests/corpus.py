"""Fixture networks and random generators shared by the test-suite."""
from __future__ import annotations

import random
from itertools import product

from abnet.builders import GraphSpec, build_rotor, build_sandpile, build_toppling
from abnet.core import Network, Processor
from abnet.monoid import compose

L_EX3 = [[3, -1, 0], [-2, 4, -2], [-2, -2, 5]]


def ex3():
    return build_toppling(L_EX3, names="abc", name="ex3")


def k2():
    return GraphSpec.undirected(["0", "1"], [("0", "1")])


def triangle(sinks=()):
    verts = ["0", "1", "2"] + (["s"] if sinks else [])
    edges = [("0", "1"), ("1", "2"), ("0", "2")]
    g = GraphSpec.undirected(verts, edges, sinks=sinks)
    if sinks:
        g = GraphSpec(g.vertices, g.edges + (("0", "s"),), sinks=sinks)
    return g


def cycle3():
    return GraphSpec(["0", "1", "2"], [("0", "1"), ("1", "2"), ("2", "0")])


def grid(n=3):
    verts = [f"{i}{j}" for i in range(n) for j in range(n)]
    edges = []
    for i in range(n):
        for j in range(n):
            if i + 1 < n:
                edges.append((f"{i}{j}", f"{i + 1}{j}"))
            if j + 1 < n:
                edges.append((f"{i}{j}", f"{i}{j + 1}"))
    return GraphSpec.undirected(verts, edges)


def counter(vertex, steps, n, carry, const=None):
    """Cyclic counter mod ``n``: letter ``a`` adds ``steps[a]``; each wrap-around emits ``carry``.

    ``const[a]`` is emitted on every processing of ``a``.  Always abelian.
    """
    const = const or {}
    trans, emit = {}, {}
    for a, k in steps.items():
        trans[a] = [(q + k) % n for q in range(n)]
        rows = []
        for q in range(n):
            m = dict(const.get(a, {}))
            wraps = (q + k) // n
            for b, c in carry.items():
                m[b] = m.get(b, 0) + wraps * c
            rows.append(m)
        emit[a] = rows
    return Processor(vertex, list(steps), [str(q) for q in range(n)], trans, emit)


def saturating(vertex, steps, n, overflow, const=None):
    """Counter saturating at ``n - 1``; each unit of overflow emits ``overflow``.  Always abelian."""
    const = const or {}
    trans, emit = {}, {}
    for a, k in steps.items():
        trans[a] = [min(q + k, n - 1) for q in range(n)]
        rows = []
        for q in range(n):
            m = dict(const.get(a, {}))
            spill = max(0, q + k - (n - 1))
            for b, c in overflow.items():
                m[b] = m.get(b, 0) + spill * c
            rows.append(m)
        emit[a] = rows
    return Processor(vertex, list(steps), [str(q) for q in range(n)], trans, emit)


def chain():
    return Network([counter("A", {"a": 1}, 1, {"b": 1}), counter("B", {"b": 1}, 1, {})], name="chain")


def zero_emit():
    return Network([counter("X", {"a": 1, "b": 0}, 2, {})], name="zero_emit")


def adder_halting():
    return Network([
        counter("X", {"a": 1, "b": 2}, 3, {"c": 1}),
        counter("Y", {"c": 1}, 2, {"a": 1}),
    ], name="adder_halting")


def adder_loop():
    return Network([
        counter("X", {"a": 1, "b": 1}, 2, {"c": 2}),
        counter("Y", {"c": 1}, 1, {"a": 1}),
    ], name="adder_loop")


def saturating_pair():
    return Network([
        saturating("X", {"a": 1}, 3, {"b": 1}),
        counter("Y", {"b": 1}, 2, {"a": 1}),
    ], name="saturating_pair")


def two_orbits():
    """Vertex X has two invariant 2-cycles; only the second one amplifies."""
    trans = {"a": [1, 0, 3, 2]}
    emit = {"a": [{}, {"c": 1}, {}, {"c": 2}]}
    X = Processor("X", ["a"], ["p0", "p1", "r0", "r1"], trans, emit)
    return Network([X, counter("Y", {"c": 1}, 1, {"a": 1})], name="two_orbits")


def fixtures():
    """Name -> network; covers unary/non-unary, halting/non-halting."""
    return {
        "ex3": ex3(),
        "sand_k2": build_sandpile(k2(), name="sand_k2"),
        "sand_triangle": build_sandpile(triangle(), name="sand_triangle"),
        "sand_triangle_sink": build_sandpile(triangle(sinks=("s",)), name="sand_triangle_sink"),
        "sand_cycle3": build_sandpile(cycle3(), name="sand_cycle3"),
        "rotor_triangle": build_rotor(triangle(), name="rotor_triangle"),
        "rotor_triangle_sink": build_rotor(triangle(sinks=("s",)), name="rotor_triangle_sink"),
        "chain": chain(),
        "zero_emit": zero_emit(),
        "adder_halting": adder_halting(),
        "adder_loop": adder_loop(),
        "saturating_pair": saturating_pair(),
        "two_orbits": two_orbits(),
        "self_loop": build_toppling([[0]], names=["s"], thresholds=[1], name="self_loop"),
    }


def total_states(net):
    return list(product(*(range(len(p.states)) for p in net.processors)))


def inputs_up_to(n_letters, total):
    for x in product(range(total + 1), repeat=n_letters):
        if sum(x) <= total:
            yield x


# -- random generators ----------------------------------------------------------

def random_network(rng: random.Random, max_vertices=3, max_letters=2, max_states=4, max_emit=2):
    """Random valid network built from cyclic and saturating counters."""
    nv = rng.randint(1, max_vertices)
    plan = []
    letters = []
    for v in range(nv):
        k = rng.randint(1, max_letters)
        names = [f"{chr(97 + v)}{i}" for i in range(k)]
        letters.extend(names)
        plan.append(names)
    procs = []
    for v, names in enumerate(plan):
        n = rng.randint(1, max_states)
        kind = rng.choice(["counter", "saturating"])
        # saturating steps stay <= 1 so one processing spills at most once
        steps = {a: rng.randint(0, 1 if kind == "saturating" else n - 1) for a in names}
        budget = max_emit
        out = {}
        for b in rng.sample(letters, rng.randint(0, min(2, len(letters)))):
            c = rng.randint(1, budget) if budget else 0
            if c:
                out[b] = c
                budget -= c
        const = {}
        if budget and rng.random() < 0.3:
            a = rng.choice(names)
            const[a] = {rng.choice(letters): 1}
        if kind == "counter":
            procs.append(counter(f"V{v}", steps, n, out, const))
        else:
            procs.append(saturating(f"V{v}", steps, n, out, const))
    return Network(procs, name="random")


def random_map(rng, n):
    # half permutations, so that non-trivial groups show up on eQ
    if rng.random() < 0.5:
        perm = list(range(n))
        rng.shuffle(perm)
        return tuple(perm)
    return tuple(rng.randrange(n) for _ in range(n))


def random_commuting_generators(rng: random.Random, max_states=8):
    """Random commuting transformations on ``range(n)`` with ``n <= max_states``.

    Built from powers of random maps on factors of a product or parts of a
    disjoint union, so commutation holds by construction.
    """
    shape = rng.choice(["powers", "product", "union"])
    k = rng.randint(1, 3)
    if shape == "powers" or max_states < 4:
        n = rng.randint(1, max_states)
        f = random_map(rng, n)
        gens = []
        for _ in range(k):
            g = tuple(range(n))
            for _ in range(rng.randint(0, 4)):
                g = compose(f, g)
            gens.append(g)
        return n, gens
    if shape == "product":
        n1 = rng.randint(1, 2 if max_states < 6 else 3)
        n2 = rng.randint(1, max_states // n1)
        f1, f2 = random_map(rng, n1), random_map(rng, n2)
        gens = []
        for _ in range(k):
            g1, g2 = tuple(range(n1)), tuple(range(n2))
            for _ in range(rng.randint(0, 3)):
                g1 = compose(f1, g1)
            for _ in range(rng.randint(0, 3)):
                g2 = compose(f2, g2)
            gens.append(tuple(g1[x // n2] * n2 + g2[x % n2] for x in range(n1 * n2)))
        return n1 * n2, gens
    n1 = rng.randint(1, max_states - 1)
    n2 = rng.randint(1, max_states - n1)
    f1, f2 = random_map(rng, n1), random_map(rng, n2)
    gens = []
    for _ in range(k):
        g1, g2 = tuple(range(n1)), tuple(range(n2))
        for _ in range(rng.randint(0, 3)):
            g1 = compose(f1, g1)
        for _ in range(rng.randint(0, 3)):
            g2 = compose(f2, g2)
        gens.append(tuple(g1) + tuple(n1 + y for y in g2))
    return n1 + n2, gens


def random_translation_generators(rng: random.Random, max_states=8):
    """Random translations of Z/m1 x Z/m2 (``m1 * m2 <= max_states``), encoded as ``m2 * i + j``."""
    m1 = rng.randint(1, 4)
    m2 = rng.randint(1, max_states // m1)
    gens = []
    for _ in range(rng.randint(1, 3)):
        s, t = rng.randrange(m1), rng.randrange(m2)
        gens.append(tuple(((i + s) % m1) * m2 + (j + t) % m2 for i in range(m1) for j in range(m2)))
    return m1 * m2, gens
