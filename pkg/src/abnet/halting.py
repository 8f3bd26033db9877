"""Deciding whether an abelian network halts, with certificates either way."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import prod

from .algebra import (
    ProductionData,
    is_locally_recurrent,
    local_components,
    production_matrix,
)
from .core import Config, Network, local_action
from .linalg import (
    PFReport,
    RatMatrix,
    SingularMatrixError,
    all_principal_minors,
    as_matrix,
    clear_denominators,
    inverse,
    leading_principal_minors,
    pf_estimate,
)
from .monoid import DicksonTracker
from .simplex import feasible_point

DEFAULT_MAX_ROUNDS = 10**4


class InternalInconsistency(AssertionError):
    pass


class NotAZMatrix(ValueError):
    pass


@dataclass(frozen=True)
class ToppingEvidence:
    verdict: bool
    minors: tuple
    inverse: RatMatrix | None
    inverse_nonneg: bool
    witness: tuple | None  # x with L x = 1, when the verdict is true
    all_minors: dict | None = None


def is_toppling_matrix(L, all_minors: bool = False) -> ToppingEvidence:
    """Decide the M-matrix property of a Z-matrix exactly.

    The decision is a nonnegative exact inverse; positivity of the leading
    principal minors and the witness ``L^{-1} 1`` are cross-checks that must
    agree or :class:`InternalInconsistency` is raised.
    """
    L = as_matrix(L)
    n = L.shape[0]
    if L.shape != (n, n):
        raise ValueError("toppling check needs a square matrix")
    for i in range(n):
        for j in range(n):
            if i != j and L[i, j] > 0:
                raise NotAZMatrix(f"positive off-diagonal entry at ({i}, {j})")
    try:
        inv = inverse(L)
        nonneg = all(v >= 0 for r in inv.rows for v in r)
    except SingularMatrixError:
        inv, nonneg = None, False
    minors = tuple(leading_principal_minors(L))
    by_minors = all(m > 0 for m in minors)
    allm = None
    if all_minors:
        allm = all_principal_minors(L)
        if all(m > 0 for m in allm.values()) != by_minors:
            raise InternalInconsistency("leading and full principal-minor tests disagree")
    witness = None
    if nonneg:
        witness = inv @ ([1] * n)
        if not all(c > 0 for c in witness) or L @ witness != (Fraction(1),) * n:
            raise InternalInconsistency("nonnegative inverse without a positive witness")
    if by_minors != nonneg:
        raise InternalInconsistency("minor test and inverse test disagree")
    return ToppingEvidence(nonneg, minors, inv, nonneg, witness, allm)


def semipositive_point(L):
    """Exact search for ``x >= 0`` with ``L x >= 1`` (``L x`` strictly positive), or None."""
    L = as_matrix(L)
    n = L.shape[0]
    return feasible_point(A_ge=L.tolist(), b_ge=[1] * n, n=n)


@dataclass(frozen=True)
class Amplifier:
    x: tuple
    q: tuple  # state of the network the amplifier was found on
    strong: bool
    y: tuple  # letters after x |> q


def strong_amplifier_output(net: Network, x, q):
    x = net.vector(x)
    if not any(x) or any(c < 0 for c in x):
        raise ValueError("an amplifier needs a nonzero nonnegative vector")
    return local_action(net, x, Config((0,) * net.num_letters, tuple(q)))


def verify_strong_amplifier(net: Network, amp: Amplifier) -> bool:
    out = strong_amplifier_output(net, amp.x, amp.q)
    return out.state == tuple(amp.q) and all(b >= a for a, b in zip(amp.x, out.letters))


def find_amplifier(net: Network, data: ProductionData, q=None) -> Amplifier:
    """Strong amplifier for the local component of ``q`` described by ``data``.

    Solves ``y >= 0, sum y = 1, (P - I) y >= 0`` exactly, clears denominators
    and takes the least multiple lying in the total kernel.  The returned
    state is expressed in ``net``'s own state indices.
    """
    P = data.P
    n = P.shape[0]
    PI = [[P[a, b] - int(a == b) for b in range(n)] for a in range(n)]
    y = feasible_point(A_eq=[[1] * n], b_eq=[1], A_ge=PI, b_ge=[0] * n, n=n)
    if y is None:
        raise InternalInconsistency("no nonnegative y with P y >= y although L is not a toppling matrix")
    y0 = clear_denominators(y)
    cap = prod(L.index for L in data.kernel.lattices)
    for k in range(1, cap + 1):
        x = tuple(k * c for c in y0)
        if x in data.kernel:
            break
    else:
        raise InternalInconsistency("no multiple of the amplifier direction lies in the kernel")
    base = _lift_state(net, data, net.initial_state if q is None else q)
    out = strong_amplifier_output(net, x, base)
    amp = Amplifier(x, base, True, out.letters)
    if not verify_strong_amplifier(net, amp):
        raise InternalInconsistency("amplifier candidate failed verification")
    return amp


def _lift_state(net, data, q):
    """``data.base_state`` (indices of the component network) as a state of ``net``."""
    if data.network is net:
        return data.base_state
    comps = local_components(net)
    keep = comps.states(comps.label(q))
    return tuple(k[s] for k, s in zip(keep, data.base_state))


@dataclass(frozen=True)
class HaltVerdict:
    halts_all: bool
    toppling: ToppingEvidence
    amplifier: Amplifier | None
    pf: PFReport
    production: ProductionData = field(repr=False)


def halts_on_all_inputs(net: Network, q=None, all_minors=False) -> HaltVerdict:
    """Does ``net`` halt on every input to initial state ``q``?  Decided by the Laplacian of ``N_q``."""
    data = production_matrix(net, q)
    ev = is_toppling_matrix(data.L, all_minors=all_minors)
    amp = None if ev.verdict else find_amplifier(net, data, q)
    return HaltVerdict(ev.verdict, ev, amp, pf_estimate(data.P), data)


@dataclass(frozen=True)
class InputVerdict:
    outcome: str  # "halts" | "never_halts" | "inconclusive"
    rounds: int
    odometer: tuple | None = None
    final: Config | None = None
    reason: str | None = None  # "dickson" | "amplifier_threshold" for never_halts
    pair: tuple | None = None  # (m, n) round indices of the dominating pair
    note: str | None = None


def halt_on_input(net: Network, cfg: Config, max_rounds: int = DEFAULT_MAX_ROUNDS,
                  amplifier: Amplifier | None = None) -> InputVerdict:
    """Iterate ``x_n.q_n = x_{n-1} |> q_{n-1}`` until a conclusive certificate appears.

    ``amplifier`` (a strong amplifier in ``net``'s own state indices) enables
    the odometer threshold test; it is applied only when the initial state is
    locally recurrent and in the amplifier's local component.
    """
    x, q = tuple(cfg.letters), tuple(cfg.state)
    if any(c < 0 for c in x):
        raise ValueError("inputs must be nonnegative")
    n = len(x)
    zero = (0,) * n
    odo = [0] * n
    note = None
    use_amp = None
    if amplifier is not None:
        comps = local_components(net)
        if not is_locally_recurrent(net, q):
            note = "amplifier ignored: initial state is not locally recurrent"
        elif comps.label(q) != comps.label(amplifier.q):
            note = "amplifier ignored: different local component"
        else:
            use_amp = amplifier.x
    history = {}  # state -> (tracker, round numbers)
    for rnd in range(max_rounds + 1):
        if x == zero:
            return InputVerdict("halts", rnd, tuple(odo), Config(zero, q), note=note)
        tracker, seen = history.setdefault(q, (DicksonTracker(), []))
        m = tracker.add(x)
        if m is not None:
            return InputVerdict("never_halts", rnd, tuple(odo), Config(x, q), "dickson",
                                (seen[m], rnd), note=note)
        seen.append(rnd)
        if use_amp is not None and all(u >= a for u, a in zip(odo, use_amp)):
            return InputVerdict("never_halts", rnd, tuple(odo), Config(x, q), "amplifier_threshold", note=note)
        if rnd == max_rounds:
            break
        for i, c in enumerate(x):
            odo[i] += c
        nxt = local_action(net, x, Config(zero, q))
        x, q = nxt.letters, nxt.state
    return InputVerdict("inconclusive", max_rounds, tuple(odo), Config(x, q), note=note)


def classic_criteria(net: Network, y, topplings) -> bool:
    """Björner-Lovász / Tardos certificate for a toppling network.

    ``y >= 0`` nonzero with ``L y <= 0``; ``topplings`` are per-vertex toppling
    counts of a legal execution started from the all-zero state.  Returns True
    (never halts) iff every vertex toppled at least ``y_v`` times.
    """
    if not net.is_unary:
        raise ValueError("classic criteria apply to unary (toppling) networks")
    y = [int(c) for c in y]
    if any(c < 0 for c in y) or not any(y):
        raise ValueError("y must be nonnegative and nonzero")
    data = production_matrix(net, (0,) * len(net.processors))
    if any(c > 0 for c in data.L @ y):
        raise ValueError("L y <= 0 is required")
    return all(t >= c for t, c in zip(topplings, y))


def topple_counts(net: Network, odometer, q=None) -> tuple:
    """Wrap-arounds of each unary processor's cyclic counter over an execution with this odometer."""
    q = net.initial_state if q is None else q
    out = []
    for v, p in enumerate(net.processors):
        (i,) = net.vertex_letters[v]
        out.append((q[v] + odometer[i]) // len(p.states))
    return tuple(out)
