"""Abelian networks: processors, configurations and execution semantics.

A configuration ``x.q`` is a pair of a letter-count vector ``x`` (indexed by
the global alphabet) and a tuple ``q`` of per-vertex state indices.  Messages
are stored as count vectors; emission ``N(a, q)`` is read at the state held
*before* the transition ``t_a`` fires.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

DEFAULT_MAX_STEPS = 10**6


class NetworkError(ValueError):
    """Structurally malformed network description."""


class UnknownLetterError(KeyError):
    pass


class BudgetExceeded(RuntimeError):
    """A simulation ran out of its step budget without completing."""

    def __init__(self, steps, cfg=None):
        super().__init__(f"no complete execution within {steps} steps")
        self.steps = steps
        self.cfg = cfg


@dataclass(frozen=True, eq=True)
class Processor:
    """A finite abelian automaton sitting at one vertex.

    ``transition[a][i]`` is the index of ``t_a`` applied to state ``i``;
    ``emit[a][i]`` maps letters to the number sent when ``a`` is processed
    in state ``i``.
    """

    vertex: str
    alphabet: tuple
    states: tuple
    transition: Mapping[str, tuple] = field(hash=False)
    emit: Mapping[str, tuple] = field(hash=False)

    def __post_init__(self):
        object.__setattr__(self, "alphabet", tuple(self.alphabet))
        object.__setattr__(self, "states", tuple(self.states))
        n = len(self.states)
        if n == 0:
            raise NetworkError(f"vertex {self.vertex!r} has no states")
        if len(set(self.alphabet)) != len(self.alphabet):
            raise NetworkError(f"vertex {self.vertex!r} repeats a letter")
        trans, emit = {}, {}
        for a in self.alphabet:
            if a not in self.transition or a not in self.emit:
                raise NetworkError(f"letter {a!r} lacks a transition or emit table")
            row = tuple(int(j) for j in self.transition[a])
            if len(row) != n or any(not 0 <= j < n for j in row):
                raise NetworkError(f"transition of {a!r} is not a total map on {n} states")
            out = tuple(dict(m) for m in self.emit[a])
            if len(out) != n:
                raise NetworkError(f"emit table of {a!r} needs one entry per state")
            for m in out:
                for b, c in m.items():
                    if int(c) != c or c < 0:
                        raise NetworkError(f"emit count {c!r} for {a!r}->{b!r} is not a nonnegative integer")
            trans[a] = row
            emit[a] = tuple({b: int(c) for b, c in m.items() if c} for m in out)
        extra = (set(self.transition) | set(self.emit)) - set(self.alphabet)
        if extra:
            raise NetworkError(f"tables for letters outside the alphabet: {sorted(extra)}")
        object.__setattr__(self, "transition", trans)
        object.__setattr__(self, "emit", emit)

    @property
    def is_unary(self):
        return len(self.alphabet) == 1

    def restrict_states(self, keep):
        """Restrict to an invariant subset of state indices (kept in order)."""
        keep = sorted(keep)
        new = {old: i for i, old in enumerate(keep)}
        trans = {}
        for a, row in self.transition.items():
            try:
                trans[a] = tuple(new[row[i]] for i in keep)
            except KeyError:
                raise NetworkError(f"state subset is not invariant under {a!r}") from None
        emit = {a: tuple(self.emit[a][i] for i in keep) for a in self.alphabet}
        return Processor(self.vertex, self.alphabet, [self.states[i] for i in keep], trans, emit)

    def restrict_letters(self, letters):
        """Keep only ``letters`` of this vertex's alphabet and drop emissions outside ``letters``."""
        letters = set(letters)
        alpha = [a for a in self.alphabet if a in letters]
        emit = {
            a: tuple({b: c for b, c in m.items() if b in letters} for m in self.emit[a])
            for a in alpha
        }
        return Processor(self.vertex, alpha, self.states, {a: self.transition[a] for a in alpha}, emit)


@dataclass(frozen=True)
class Config:
    """The pair ``x.q``: letter counts in global alphabet order and per-vertex state indices."""

    letters: tuple
    state: tuple

    def __post_init__(self):
        object.__setattr__(self, "letters", tuple(self.letters))
        object.__setattr__(self, "state", tuple(self.state))


@dataclass(frozen=True)
class ExecRecord:
    odometer: tuple
    final: Config
    trace: tuple | None = None


@dataclass(frozen=True)
class Violation:
    vertex: str
    a: str
    b: str
    state: str
    identity: str  # "transition" or "emit"


class Network:
    """A finite abelian network.  Immutable after construction."""

    def __init__(self, processors: Sequence[Processor], name: str = "", initial_state=None):
        self.name = name
        self.processors = tuple(processors)
        ids = [p.vertex for p in self.processors]
        if len(set(ids)) != len(ids):
            raise NetworkError("duplicate vertex ids")
        self.vertices = tuple(ids)
        self.vertex_index = {v: i for i, v in enumerate(ids)}
        self.alphabet = tuple(a for p in self.processors for a in p.alphabet)
        if len(set(self.alphabet)) != len(self.alphabet):
            raise NetworkError("letter ids must be unique across the network")
        self.letter_index = {a: i for i, a in enumerate(self.alphabet)}
        self.owner = tuple(self.vertex_index[p.vertex] for p in self.processors for _ in p.alphabet)
        self.vertex_letters = []
        self._trans = []
        self._emit = []
        for p in self.processors:
            self.vertex_letters.append(tuple(self.letter_index[a] for a in p.alphabet))
            for a in p.alphabet:
                self._trans.append(p.transition[a])
                rows = []
                for m in p.emit[a]:
                    unknown = set(m) - set(self.letter_index)
                    if unknown:
                        raise NetworkError(f"{a!r} emits unknown letters {sorted(unknown)}")
                    rows.append(tuple(sorted((self.letter_index[b], c) for b, c in m.items())))
                self._emit.append(tuple(rows))
        self.vertex_letters = tuple(self.vertex_letters)
        self._paths = {}
        self._cache = {}
        if initial_state is None:
            self.initial_state = tuple(0 for _ in self.processors)
        else:
            self.initial_state = self.state_from_labels(initial_state)

    def __repr__(self):
        return f"Network({self.name!r}, vertices={list(self.vertices)}, alphabet={list(self.alphabet)})"

    @property
    def num_letters(self):
        return len(self.alphabet)

    @property
    def is_unary(self):
        return all(p.is_unary for p in self.processors)

    def edges(self):
        """Underlying directed graph: (v, u) whenever some letter of v can send a letter of u."""
        out = set()
        for i, rows in enumerate(self._emit):
            v = self.owner[i]
            for row in rows:
                for j, _ in row:
                    out.add((self.vertices[v], self.vertices[self.owner[j]]))
        return sorted(out)

    def letter(self, a) -> int:
        if isinstance(a, int):
            if not 0 <= a < len(self.alphabet):
                raise UnknownLetterError(a)
            return a
        try:
            return self.letter_index[a]
        except KeyError:
            raise UnknownLetterError(a) from None

    def vector(self, counts: Mapping[str, int] | Sequence[int] | None = None) -> tuple:
        if counts is None:
            return (0,) * len(self.alphabet)
        if isinstance(counts, Mapping):
            x = [0] * len(self.alphabet)
            for a, c in counts.items():
                x[self.letter(a)] = int(c)
            return tuple(x)
        x = tuple(int(c) for c in counts)
        if len(x) != len(self.alphabet):
            raise ValueError(f"vector has dimension {len(x)}, alphabet has {len(self.alphabet)}")
        return x

    def state_from_labels(self, labels: Mapping[str, str] | Sequence) -> tuple:
        if isinstance(labels, Mapping):
            q = list(self.initial_state) if hasattr(self, "initial_state") else [0] * len(self.processors)
            for v, lab in labels.items():
                p = self.processors[self.vertex_index[v]]
                q[self.vertex_index[v]] = p.states.index(lab) if lab in p.states else int(lab)
            return tuple(q)
        q = tuple(int(s) for s in labels)
        if len(q) != len(self.processors):
            raise ValueError("state tuple has the wrong length")
        return q

    def state_labels(self, q) -> dict:
        return {p.vertex: p.states[s] for p, s in zip(self.processors, q)}

    def config(self, letters=None, state=None) -> Config:
        if state is None:
            state = self.initial_state
        elif isinstance(state, Mapping):
            state = self.state_from_labels(state)
        return Config(self.vector(letters), tuple(state))

    def restrict_states(self, keep: Sequence[Iterable[int]], name=None) -> Network:
        procs = [p.restrict_states(k) for p, k in zip(self.processors, keep)]
        return Network(procs, name=name or self.name)

    def restrict_letters(self, letters: Iterable, name=None) -> Network:
        """Subnetwork on a sub-alphabet; vertices keep their state spaces."""
        keep = {self.alphabet[self.letter(a)] for a in letters}
        procs = [p.restrict_letters(keep) for p in self.processors]
        return Network(procs, name=name or self.name)

    def _path(self, i, q):
        """Orbit of ``q`` under ``t_i``: visited states, cumulative emissions, cycle start."""
        key = (i, q)
        hit = self._paths.get(key)
        if hit is not None:
            return hit
        trans, emit = self._trans[i], self._emit[i]
        seen = {}
        states = []
        cum = [(0,) * len(self.alphabet)]
        s = q
        while s not in seen:
            seen[s] = len(states)
            states.append(s)
            acc = list(cum[-1])
            for j, c in emit[s]:
                acc[j] += c
            cum.append(tuple(acc))
            s = trans[s]
        hit = (tuple(states), tuple(cum), seen[s])
        self._paths[key] = hit
        return hit

    def process_repeated(self, i, q, n):
        """Process ``n`` copies of letter ``i`` at its owner starting in local state ``q``.

        Returns ``(new_local_state, emitted_vector)``.  Cost is independent of ``n``.
        """
        states, cum, mu = self._path(i, q)
        ln = len(states)
        if n < ln:
            return states[n], cum[n]
        period = ln - mu
        cycles, rem = divmod(n - mu, period)
        cyc = [c1 - c0 for c1, c0 in zip(cum[ln], cum[mu])]
        tail = [c1 - c0 for c1, c0 in zip(cum[mu + rem], cum[mu])]
        out = tuple(p + cycles * c + t for p, c, t in zip(cum[mu], cyc, tail))
        return states[mu + rem], out


def validate_abelian(net: Network) -> list[Violation]:
    """Pairwise transition- and emit-commutation check at every vertex and state."""
    out = []
    for p in net.processors:
        letters = p.alphabet
        for x, a in enumerate(letters):
            ta, na = p.transition[a], p.emit[a]
            for b in letters[x + 1:]:
                tb, nb = p.transition[b], p.emit[b]
                for q in range(len(p.states)):
                    if ta[tb[q]] != tb[ta[q]]:
                        out.append(Violation(p.vertex, a, b, p.states[q], "transition"))
                        continue
                    lhs = _add_counts(na[q], nb[ta[q]])
                    rhs = _add_counts(nb[q], na[tb[q]])
                    if lhs != rhs:
                        out.append(Violation(p.vertex, a, b, p.states[q], "emit"))
    return out


def _add_counts(m1, m2):
    out = dict(m1)
    for k, c in m2.items():
        out[k] = out.get(k, 0) + c
    return {k: c for k, c in out.items() if c}


def step(net: Network, cfg: Config, a) -> Config:
    i = net.letter(a)
    v = net.owner[i]
    q = cfg.state[v]
    x = list(cfg.letters)
    x[i] -= 1
    for j, c in net._emit[i][q]:
        x[j] += c
    state = list(cfg.state)
    state[v] = net._trans[i][q]
    return Config(tuple(x), tuple(state))


def execute_word(net: Network, cfg: Config, word: Iterable) -> tuple[Config, bool]:
    legal = True
    for a in word:
        if cfg.letters[net.letter(a)] < 1:
            legal = False
        cfg = step(net, cfg, a)
    return cfg, legal


def execute_counts(net: Network, cfg: Config, y: Sequence[int]) -> Config:
    """``pi_y``: process ``y_a`` letters of each type, in any order."""
    y = net.vector(y)
    if any(c < 0 for c in y):
        raise ValueError("execution counts must be nonnegative")
    x = list(cfg.letters)
    state = list(cfg.state)
    for i, n in enumerate(y):
        if not n:
            continue
        v = net.owner[i]
        state[v], out = net.process_repeated(i, state[v], n)
        x[i] -= n
        for j, c in enumerate(out):
            x[j] += c
    return Config(tuple(x), tuple(state))


def local_action(net: Network, x: Sequence[int], cfg: Config) -> Config:
    """``x |> (z.q) = pi_x((x + z).q)``: add ``x`` and process each added letter once."""
    x = net.vector(x)
    if any(c < 0 for c in x):
        raise ValueError("local action needs a nonnegative vector")
    start = Config(tuple(a + b for a, b in zip(x, cfg.letters)), cfg.state)
    return execute_counts(net, start, x)


def _round_robin(net, cfg, max_steps, trace):
    x = list(cfg.letters)
    state = list(cfg.state)
    odo = [0] * len(x)
    steps = 0
    active = True
    while active:
        active = False
        for i in range(len(x)):
            if x[i] < 1:
                continue
            if steps >= max_steps:
                raise BudgetExceeded(steps, Config(tuple(x), tuple(state)))
            active = True
            v = net.owner[i]
            q = state[v]
            x[i] -= 1
            for j, c in net._emit[i][q]:
                x[j] += c
            state[v] = net._trans[i][q]
            odo[i] += 1
            steps += 1
            if trace is not None:
                trace.append(net.alphabet[i])
    return odo, Config(tuple(x), tuple(state))


def _fifo(net, cfg, max_steps, trace):
    x = list(cfg.letters)
    state = list(cfg.state)
    odo = [0] * len(x)
    queue = deque()
    for i, c in enumerate(x):
        queue.extend([i] * max(c, 0))
    steps = 0
    while queue:
        if steps >= max_steps:
            raise BudgetExceeded(steps, Config(tuple(x), tuple(state)))
        i = queue.popleft()
        v = net.owner[i]
        q = state[v]
        x[i] -= 1
        for j, c in net._emit[i][q]:
            x[j] += c
            queue.extend([j] * c)
        state[v] = net._trans[i][q]
        odo[i] += 1
        steps += 1
        if trace is not None:
            trace.append(net.alphabet[i])
    return odo, Config(tuple(x), tuple(state))


SCHEDULERS = {"round_robin": _round_robin, "fifo": _fifo}


def run_to_completion(net: Network, cfg: Config, max_steps: int = DEFAULT_MAX_STEPS,
                      scheduler: str = "round_robin", keep_trace: bool = False) -> ExecRecord:
    """Process letters one at a time until none remain.

    Raises :class:`BudgetExceeded` after ``max_steps`` processings; by the
    halting dichotomy the result does not depend on ``scheduler``.
    """
    if any(c < 0 for c in cfg.letters):
        raise ValueError("run_to_completion needs a nonnegative letter vector")
    if scheduler not in SCHEDULERS:
        raise ValueError(f"unknown scheduler {scheduler!r}; choose from {sorted(SCHEDULERS)}")
    trace = [] if keep_trace else None
    odo, final = SCHEDULERS[scheduler](net, cfg, max_steps, trace)
    return ExecRecord(tuple(odo), final, tuple(trace) if trace is not None else None)
