"""Exact integer/rational linear algebra plus a floating Perron-Frobenius estimate."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import gcd, lcm, prod

import networkx as nx
import numpy as np


class SingularMatrixError(ArithmeticError):
    pass


class RankDeficientError(ValueError):
    pass


def _frac(v):
    if isinstance(v, Fraction):
        return v
    if isinstance(v, str):
        return Fraction(v)
    return Fraction(v)


class RatMatrix:
    """Dense matrix of :class:`fractions.Fraction`, immutable."""

    __slots__ = ("rows", "shape")

    def __init__(self, rows):
        rows = tuple(tuple(_frac(v) for v in r) for r in rows)
        if len({len(r) for r in rows}) > 1:
            raise ValueError("ragged matrix")
        self.rows = rows
        self.shape = (len(rows), len(rows[0]) if rows else 0)

    @classmethod
    def identity(cls, n):
        return cls([[int(i == j) for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, n, m=None):
        return cls([[0] * (n if m is None else m) for _ in range(n)])

    @classmethod
    def diag(cls, d):
        n = len(d)
        return cls([[d[i] if i == j else 0 for j in range(n)] for i in range(n)])

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __eq__(self, other):
        if isinstance(other, RatMatrix):
            return self.rows == other.rows
        try:
            return self.rows == RatMatrix(other).rows
        except (TypeError, ValueError):
            return NotImplemented

    def __hash__(self):
        return hash(self.rows)

    def __repr__(self):
        return f"RatMatrix({self.tolist(str)})"

    def __add__(self, other):
        return RatMatrix([[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __sub__(self, other):
        return RatMatrix([[a - b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __matmul__(self, other):
        if isinstance(other, RatMatrix):
            cols = list(zip(*other.rows))
            return RatMatrix([[sum(a * b for a, b in zip(r, c)) for c in cols] for r in self.rows])
        v = [_frac(c) for c in other]
        if len(v) != self.shape[1]:
            raise ValueError("dimension mismatch")
        return tuple(sum(a * b for a, b in zip(r, v)) for r in self.rows)

    @property
    def T(self):
        return RatMatrix(list(zip(*self.rows)) if self.rows else [])

    @property
    def is_integer(self):
        return all(v.denominator == 1 for r in self.rows for v in r)

    def submatrix(self, rows, cols=None):
        cols = rows if cols is None else cols
        return RatMatrix([[self.rows[i][j] for j in cols] for i in rows])

    def tolist(self, conv=None):
        if conv is None:
            return [list(r) for r in self.rows]
        return [[conv(v) for v in r] for r in self.rows]


def as_matrix(M) -> RatMatrix:
    return M if isinstance(M, RatMatrix) else RatMatrix(M)


def bareiss_det(M) -> Fraction:
    """Determinant by fraction-free elimination (exact; integer input stays integral)."""
    M = as_matrix(M)
    n = M.shape[0]
    if n != M.shape[1]:
        raise ValueError("determinant of a non-square matrix")
    if n == 0:
        return Fraction(1)
    a = [list(r) for r in M.rows]
    sign, prev = 1, Fraction(1)
    for k in range(n - 1):
        if a[k][k] == 0:
            p = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if p is None:
                return Fraction(0)
            a[k], a[p] = a[p], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def leading_principal_minors(M) -> list[Fraction]:
    M = as_matrix(M)
    return [bareiss_det(M.submatrix(range(k))) for k in range(1, M.shape[0] + 1)]


def all_principal_minors(M) -> dict:
    """Every principal minor, keyed by the index subset (exponential; debug use)."""
    M = as_matrix(M)
    n = M.shape[0]
    return {
        S: bareiss_det(M.submatrix(S))
        for k in range(1, n + 1)
        for S in combinations(range(n), k)
    }


def inverse(M) -> RatMatrix:
    """Exact inverse via fraction-free Gauss-Jordan on the denominator-cleared matrix."""
    M = as_matrix(M)
    n = M.shape[0]
    if n != M.shape[1]:
        raise ValueError("inverse of a non-square matrix")
    scale = lcm(*(v.denominator for r in M.rows for v in r)) if n else 1
    a = [[int(v * scale) for v in r] + [int(i == j) for j in range(n)] for i, r in enumerate(M.rows)]
    prev = 1
    for k in range(n):
        p = next((i for i in range(k, n) if a[i][k] != 0), None)
        if p is None:
            raise SingularMatrixError("matrix is singular")
        a[k], a[p] = a[p], a[k]
        piv = a[k][k]
        for i in range(n):
            if i == k:
                continue
            aik = a[i][k]
            row_i, row_k = a[i], a[k]
            for j in range(2 * n):
                if j != k:
                    row_i[j] = (piv * row_i[j] - aik * row_k[j]) // prev
            row_i[k] = 0
        prev = piv
    # every diagonal entry now equals +-det of the scaled matrix
    return RatMatrix([[Fraction(a[i][n + j] * scale, a[i][i]) for j in range(n)] for i in range(n)])


@dataclass(frozen=True)
class IntLattice:
    """Full-rank sublattice of ``Z^dim`` stored as an upper-triangular Hermite normal form."""

    basis: tuple
    dim: int

    @property
    def index(self) -> int:
        return prod(self.basis[i][i] for i in range(self.dim))

    def __contains__(self, vec) -> bool:
        v = [int(c) for c in vec]
        if len(v) != self.dim:
            return False
        for i, row in enumerate(self.basis):
            q, r = divmod(v[i], row[i])
            if r:
                return False
            if q:
                for j in range(i, self.dim):
                    v[j] -= q * row[j]
        return True

    def tolist(self):
        return [list(r) for r in self.basis]


def hnf(relations, dim=None) -> IntLattice:
    """Hermite normal form of the integer row span of ``relations``.

    Rows of the result are upper triangular with positive diagonal and
    off-diagonal entries reduced into ``[0, pivot)``.
    """
    rows = [[int(c) for c in r] for r in relations]
    if dim is None:
        if not rows:
            raise RankDeficientError("empty relation set with unknown dimension")
        dim = len(rows[0])
    rows = [r for r in rows if any(r)]
    basis = []
    for col in range(dim):
        live = [r for r in rows if r[col] != 0]
        rest = [r for r in rows if r[col] == 0]
        if not live:
            raise RankDeficientError(f"relations do not span a full-rank lattice (column {col})")
        while len(live) > 1:
            live.sort(key=lambda r: abs(r[col]))
            piv = live[0]
            nxt = [piv]
            for r in live[1:]:
                q = r[col] // piv[col]
                r = [x - q * y for x, y in zip(r, piv)]
                if r[col] != 0:
                    nxt.append(r)
                elif any(r):
                    rest.append(r)
            live = nxt
        piv = live[0]
        if piv[col] < 0:
            piv = [-x for x in piv]
        basis.append(piv)
        rows = rest
    # reduce entries above each pivot
    for i in range(dim):
        for k in range(i):
            q = basis[k][i] // basis[i][i]
            if q:
                basis[k] = [x - q * y for x, y in zip(basis[k], basis[i])]
    return IntLattice(tuple(tuple(r) for r in basis), dim)


def lattice_sum(blocks) -> IntLattice:
    """Direct sum of lattices in the given order (block-diagonal basis)."""
    dim = sum(L.dim for L in blocks)
    rows, off = [], 0
    for L in blocks:
        for r in L.basis:
            rows.append((0,) * off + tuple(r) + (0,) * (dim - off - L.dim))
        off += L.dim
    return IntLattice(tuple(rows), dim)


def intersect_coordinates(L: IntLattice, keep) -> IntLattice:
    """``L`` intersected with the coordinate subspace on ``keep``, expressed in those coordinates."""
    keep = list(keep)
    drop = [i for i in range(L.dim) if i not in keep]
    perm = drop + keep
    rows = [[r[i] for i in perm] for r in L.basis]
    H = hnf(rows, L.dim)
    sub = [r[len(drop):] for r in H.basis[len(drop):]]
    return hnf(sub, len(keep)) if keep else IntLattice((), 0)


def clear_denominators(v) -> tuple:
    """Smallest positive integer multiple of a rational vector with coprime entries."""
    v = [_frac(c) for c in v]
    m = lcm(*(c.denominator for c in v)) if v else 1
    ints = [int(c * m) for c in v]
    g = 0
    for c in ints:
        g = gcd(g, c)
    return tuple(c // g for c in ints) if g else tuple(ints)


@dataclass(frozen=True)
class PFReport:
    lam: float
    lower: float
    upper: float
    vector: tuple
    converged: bool
    iterations: int


def _pf_block(P, tol, max_iter):
    n = P.shape[0]
    if not P.any():
        return 0.0, 0.0, np.ones(n), True, 0
    shifted = P + np.eye(n)
    v = np.ones(n)
    lo, hi = 0.0, np.inf
    for it in range(1, max_iter + 1):
        v = shifted @ v
        v /= v.max()
        Pv = P @ v
        ratios = Pv / v
        lo, hi = ratios.min(), ratios.max()
        if hi - lo < tol:
            return lo, hi, v, True, it
    return lo, hi, v, False, max_iter


def pf_estimate(P, tol=1e-9, max_iter=10**5) -> PFReport:
    """Spectral radius of a nonnegative matrix via power iteration on each strong block.

    Iterates with ``P + I`` (aperiodic on every irreducible block) and reports
    the Collatz-Wielandt bracket of ``P`` at the final iterate.  Informational
    only: floats cannot certify a strict inequality.
    """
    P = as_matrix(P)
    n = P.shape[0]
    A = np.array([[float(v) for v in r] for r in P.rows], dtype=float).reshape(n, n)
    if (A < 0).any():
        raise ValueError("pf_estimate needs a nonnegative matrix")
    if n == 0:
        return PFReport(0.0, 0.0, 0.0, (), True, 0)
    G = nx.DiGraph()
    G.add_nodes_from(range(n))
    G.add_edges_from((j, i) for i in range(n) for j in range(n) if A[i, j] > 0)
    lo = hi = 0.0
    conv, iters = True, 0
    vec = np.zeros(n)
    for comp in nx.strongly_connected_components(G):
        idx = sorted(comp)
        blo, bhi, bv, bconv, bit = _pf_block(A[np.ix_(idx, idx)], tol, max_iter)
        conv &= bconv
        iters = max(iters, bit)
        if bhi > hi or (bhi == hi and blo > lo):
            vec = np.zeros(n)
            vec[idx] = bv
        lo, hi = max(lo, blo), max(hi, bhi)
    return PFReport(float((lo + hi) / 2), float(lo), float(hi), tuple(float(c) for c in vec), bool(conv), iters)
