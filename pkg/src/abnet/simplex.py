"""Exact phase-1 simplex over the rationals (Bland's rule, so no cycling)."""
from __future__ import annotations

from fractions import Fraction


def feasible_point(A_eq=(), b_eq=(), A_ge=(), b_ge=(), n=None):
    """Return a rational ``x >= 0`` with ``A_eq x = b_eq`` and ``A_ge x >= b_ge``, or None.

    The returned point is a basic feasible solution of the system.
    """
    A_eq = [[Fraction(v) for v in r] for r in A_eq]
    A_ge = [[Fraction(v) for v in r] for r in A_ge]
    if n is None:
        n = len((A_eq or A_ge)[0])
    rows, rhs = [], []
    n_surplus = len(A_ge)
    for r, b in zip(A_eq, b_eq):
        rows.append(r + [Fraction(0)] * n_surplus)
        rhs.append(Fraction(b))
    for k, (r, b) in enumerate(zip(A_ge, b_ge)):
        s = [Fraction(0)] * n_surplus
        s[k] = Fraction(-1)
        rows.append(r + s)
        rhs.append(Fraction(b))
    for i in range(len(rows)):
        if rhs[i] < 0:
            rows[i] = [-v for v in rows[i]]
            rhs[i] = -rhs[i]
    m = len(rows)
    nv = n + n_surplus
    if m == 0:
        return (Fraction(0),) * n
    # tableau columns: structural + surplus, then one artificial per row
    T = [rows[i] + [Fraction(int(i == j)) for j in range(m)] + [rhs[i]] for i in range(m)]
    basis = [nv + i for i in range(m)]
    width = nv + m
    cost = [Fraction(0)] * nv + [Fraction(1)] * m
    # reduced costs for the phase-1 objective (minimise sum of artificials)
    z = [sum(T[i][j] for i in range(m)) for j in range(width + 1)]
    red = [cost[j] - z[j] for j in range(width)] + [-z[width]]
    while True:
        enter = next((j for j in range(width) if red[j] < 0), None)
        if enter is None:
            break
        best, leave = None, None
        for i in range(m):
            a = T[i][enter]
            if a > 0:
                ratio = T[i][width] / a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    best, leave = ratio, i
        if leave is None:  # unbounded phase-1 cannot happen; objective is bounded below by 0
            break
        _pivot(T, red, leave, enter)
        basis[leave] = enter
    if -red[width] != 0:
        return None
    x = [Fraction(0)] * width
    for i, j in enumerate(basis):
        x[j] = T[i][width]
    return tuple(x[:n])


def _pivot(T, red, r, c):
    piv = T[r][c]
    T[r] = [v / piv for v in T[r]]
    for i in range(len(T)):
        if i != r and T[i][c] != 0:
            f = T[i][c]
            T[i] = [a - f * b for a, b in zip(T[i], T[r])]
    f = red[c]
    if f != 0:
        red[:] = [a - f * b for a, b in zip(red, T[r])]
