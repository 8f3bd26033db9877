"""Finite commutative transformation monoids acting on a processor's states.

Transformations are tuples ``f`` with ``f[i]`` the image of state ``i``;
``compose(f, g)`` is ``f`` after ``g``.
"""
from __future__ import annotations

import os
from collections import deque
from dataclasses import dataclass
from functools import reduce
from itertools import combinations

DEFAULT_BUDGET = 10**6


class MonoidBudgetExceeded(RuntimeError):
    pass


class NonCommutativeError(ValueError):
    pass


class ReducibleActionError(ValueError):
    pass


def compose(f, g):
    return tuple(f[i] for i in g)


def identity(n):
    return tuple(range(n))


def _budget():
    return int(os.environ.get("ABNET_MONOID_BUDGET", DEFAULT_BUDGET))


@dataclass(frozen=True)
class TransformationMonoid:
    """Elements in BFS order from the identity, each with a witness exponent vector."""

    n: int
    letters: tuple
    generators: dict
    elements: tuple
    witness: dict

    def __len__(self):
        return len(self.elements)

    def __contains__(self, f):
        return f in self.witness

    @property
    def identity(self):
        return identity(self.n)


def generate(generators: dict, n: int, budget: int | None = None) -> TransformationMonoid:
    """Close ``generators`` (letter -> transformation of ``range(n)``) under composition."""
    budget = _budget() if budget is None else budget
    letters = tuple(generators)
    gens = {a: tuple(generators[a]) for a in letters}
    for a, b in combinations(letters, 2):
        if compose(gens[a], gens[b]) != compose(gens[b], gens[a]):
            raise NonCommutativeError(f"generators {a!r} and {b!r} do not commute")
    e = identity(n)
    witness = {e: (0,) * len(letters)}
    order = [e]
    queue = deque([e])
    while queue:
        f = queue.popleft()
        for k, a in enumerate(letters):
            g = compose(gens[a], f)
            if g in witness:
                continue
            if len(order) >= budget:
                raise MonoidBudgetExceeded(f"monoid exceeds {budget} elements")
            w = list(witness[f])
            w[k] += 1
            witness[g] = tuple(w)
            order.append(g)
            queue.append(g)
    return TransformationMonoid(n, letters, gens, tuple(order), witness)


def generate_monoid(proc, budget=None) -> TransformationMonoid:
    return generate(proc.transition, len(proc.states), budget)


def minimal_idempotent(M: TransformationMonoid):
    idem = [f for f in M.elements if compose(f, f) == f]
    return reduce(compose, idem, M.identity)


def power_idempotent(f):
    """Some power of ``f`` that is idempotent (exists by pigeonhole)."""
    seen = {}
    g = f
    k = 1
    while g not in seen:
        seen[g] = k
        g = compose(f, g)
        k += 1
    # f^j == f^k with j = seen[g]; any multiple of the period that is >= j works
    j, period = seen[g], k - seen[g]
    ell = period * -(-j // period)
    h = f
    for _ in range(ell - 1):
        h = compose(f, h)
    return h


def irreducible_components(M: TransformationMonoid, states=None) -> list[tuple]:
    """Classes of ``x ~ x'`` iff ``m x = m' x'``: connected components of ``{x, t_a x}``."""
    states = range(M.n) if states is None else states
    parent = {x: x for x in states}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for t in M.generators.values():
        for x in parent:
            rx, ry = find(x), find(t[x])
            if rx != ry:
                parent[max(rx, ry)] = min(rx, ry)
    classes = {}
    for x in parent:
        classes.setdefault(find(x), []).append(x)
    return sorted(tuple(sorted(c)) for c in classes.values())


def restrict(M: TransformationMonoid, states) -> tuple[TransformationMonoid, tuple]:
    """The monoid generated by the generators restricted to an invariant subset.

    Returns the new monoid (on ``range(len(states))``) and the sorted state list.
    """
    states = tuple(sorted(states))
    pos = {x: i for i, x in enumerate(states)}
    gens = {a: tuple(pos[t[x]] for x in states) for a, t in M.generators.items()}
    return generate(gens, len(states)), states


def recurrent_states(M: TransformationMonoid, states=None) -> frozenset:
    """``eQ = {x : e x = x}``."""
    e = minimal_idempotent(M)
    states = range(M.n) if states is None else states
    return frozenset(x for x in states if e[x] == x)


def recurrence_conditions(M: TransformationMonoid, X) -> dict:
    """Evaluate the five characterisations of recurrence for each ``x`` in the invariant set ``X``.

    Returns ``{x: (c1, c2, c3, c4, c5)}``; on an irreducible ``X`` all five agree.
    """
    X = tuple(sorted(X))
    e = minimal_idempotent(M)
    orbit = {y: {m[y] for m in M.elements} for y in X}
    images = [{m[y] for y in X} for m in M.elements]
    eX = {e[y] for y in X}
    out = {}
    for x in X:
        c1 = all(x in orbit[y] for y in X)
        c2 = all(x in orbit[m[x]] for m in M.elements)
        c3 = all(x in img for img in images)
        out[x] = (c1, c2, c3, x in eX, e[x] == x)
    return out


@dataclass(frozen=True)
class RecurrentStructure:
    e: tuple
    eQ: frozenset
    eM: frozenset
    component_of: tuple


def recurrent_structure(M: TransformationMonoid) -> RecurrentStructure:
    e = minimal_idempotent(M)
    eM = frozenset(compose(e, m) for m in M.elements)
    label = [0] * M.n
    for k, comp in enumerate(irreducible_components(M)):
        for x in comp:
            label[x] = k
    return RecurrentStructure(e, recurrent_states(M), eM, tuple(label))


@dataclass(frozen=True)
class TorsorReport:
    transitive: bool
    free: bool
    faithful: bool
    group_order: int
    orbit_size: int


def check_torsor(M: TransformationMonoid, states=None) -> TorsorReport:
    """Check that ``eM`` acts transitively (and, if faithful, freely) on ``eQ``.

    ``states`` selects an invariant subset; it must form a single irreducible class.
    """
    states = tuple(range(M.n)) if states is None else tuple(sorted(states))
    if len(irreducible_components(M, states)) != 1:
        raise ReducibleActionError("action on the given states is reducible")
    faithful = len({tuple(m[x] for x in states) for m in M.elements}) == len(M.elements)
    e = minimal_idempotent(M)
    eQ = sorted({e[x] for x in states})
    # group elements as maps on eQ
    eM = {tuple(compose(e, m)[x] for x in eQ) for m in M.elements}
    unit = tuple(eQ)
    transitive = all({g[eQ.index(x)] for g in eM} == set(eQ) for x in eQ)
    free = all(all(g[k] != x for k, x in enumerate(eQ)) for g in eM if g != unit)
    return TorsorReport(transitive, free, faithful, len(eM), len(eQ))


def dickson_find(seq):
    """Earliest ``n`` (then earliest ``m < n``) with ``seq[m] <= seq[n]`` coordinatewise, or None."""
    seq = [tuple(v) for v in seq]
    for n in range(1, len(seq)):
        for m in range(n):
            if all(a <= b for a, b in zip(seq[m], seq[n])):
                return m, n
    return None


class DicksonTracker:
    """Online version of :func:`dickson_find` keeping the antichain of minimal vectors seen."""

    def __init__(self):
        self.history = []
        self.minimal = []

    def add(self, vec):
        """Append ``vec``; return the earliest dominated index ``m`` or None."""
        vec = tuple(vec)
        hit = any(all(a <= b for a, b in zip(u, vec)) for u in self.minimal)
        n = len(self.history)
        self.history.append(vec)
        if hit:
            return next(m for m in range(n) if all(a <= b for a, b in zip(self.history[m], vec)))
        self.minimal = [u for u in self.minimal if not all(a <= b for a, b in zip(vec, u))]
        self.minimal.append(vec)
        return None
