"""Exact integer and rational linear algebra used by the geometry and
interpolation code.  Everything here works on plain nested lists of ints
or Fractions; no floating point."""

from __future__ import annotations

import itertools
from fractions import Fraction
from functools import lru_cache
from typing import Sequence


class InterpolationError(ArithmeticError):
    """An interpolation system was singular or failed its held-out check.

    Either case points at a bug, not at bad input."""


def det(rows: Sequence[Sequence[int]]) -> int:
    """Determinant of a square integer matrix (Bareiss elimination)."""
    m = [list(r) for r in rows]
    n = len(m)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = m[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * pivot - m[i][k] * m[k][j]) // prev
        prev = pivot
    return sign * m[n - 1][n - 1]


def row_echelon(rows: Sequence[Sequence]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over Q; returns (nonzero rows, pivot columns)."""
    m = [[Fraction(x) for x in r] for r in rows]
    if not m:
        return [], []
    ncols = len(m[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(rows: Sequence[Sequence]) -> int:
    return len(row_echelon(rows)[1])


def solve(a: Sequence[Sequence], b: Sequence) -> list[Fraction]:
    """Solve the square system a x = b exactly."""
    n = len(a)
    aug = [list(row) + [rhs] for row, rhs in zip(a, b)]
    red, pivots = row_echelon(aug)
    if pivots != list(range(n)):
        raise InterpolationError("interpolation matrix is singular")
    return [red[i][n] for i in range(n)]


def lattice_basis(vectors: Sequence[Sequence[int]]) -> list[list[int]]:
    """Integer echelon basis of the subgroup of Z^n spanned by `vectors`.

    Rows are in echelon form with positive pivots, so coordinates of a
    lattice vector can be recovered by back substitution.
    """
    m = [list(v) for v in vectors if any(v)]
    if not m:
        return []
    ncols = len(m[0])
    basis: list[list[int]] = []
    for c in range(ncols):
        rows = [v for v in m if v[c] != 0]
        rest = [v for v in m if v[c] == 0]
        # Euclid on column c until a single row keeps a nonzero entry
        while len(rows) > 1:
            rows.sort(key=lambda v: abs(v[c]))
            p = rows[0]
            nxt = [p]
            for v in rows[1:]:
                q = v[c] // p[c]
                w = [a - q * b for a, b in zip(v, p)]
                if w[c] != 0:
                    nxt.append(w)
                elif any(w):
                    rest.append(w)
            rows = nxt
        if rows:
            p = rows[0]
            if p[c] < 0:
                p = [-x for x in p]
            basis.append(p)
        m = rest
        if not m:
            break
    return basis


def lattice_coords(basis: Sequence[Sequence[int]], v: Sequence[int]) -> list[int]:
    """Coordinates of `v` in an echelon basis from `lattice_basis`."""
    v = list(v)
    out = []
    for b in basis:
        c = next(i for i, x in enumerate(b) if x != 0)
        q, r = divmod(v[c], b[c])
        if r:
            raise ValueError(f"{tuple(v)} is not in the lattice")
        out.append(q)
        v = [a - q * x for a, x in zip(v, b)]
    if any(v):
        raise ValueError("vector is not in the lattice")
    return out


def exponent_vectors(n: int, total: int) -> list[tuple[int, ...]]:
    """All exponent vectors of length n summing to `total`, in lex order."""
    if n == 1:
        return [(total,)]
    return [(i,) + rest for i in range(total, -1, -1) for rest in exponent_vectors(n - 1, total - i)]


def monomial_value(lam: Sequence[int], alpha: Sequence[int]) -> int:
    out = 1
    for x, e in zip(lam, alpha):
        out *= x ** e
    return out


@lru_cache(maxsize=None)
def interpolation_nodes(nvars: int, degree: int, top: int) -> tuple[tuple[tuple[int, ...], ...], tuple[int, ...]]:
    """Unisolvent nodes in {1..top}^nvars for homogeneous polynomials of
    `degree`, plus one held-out node for verification."""
    alphas = exponent_vectors(nvars, degree)
    need = len(alphas)
    basis: list[list[Fraction]] = []
    chosen: list[tuple[int, ...]] = []
    spare = None
    for lam in itertools.product(range(1, top + 1), repeat=nvars):
        row = [Fraction(monomial_value(lam, a)) for a in alphas]
        if len(chosen) == need:
            spare = lam
            break
        # reduce against the rows kept so far
        for b in basis:
            piv = next(i for i, x in enumerate(b) if x != 0)
            if row[piv] != 0:
                f = row[piv] / b[piv]
                row = [x - f * y for x, y in zip(row, b)]
        if any(row):
            basis.append(row)
            chosen.append(lam)
        elif spare is None:
            spare = lam
    if len(chosen) < need or spare is None:
        raise InterpolationError(f"grid {{1..{top}}}^{nvars} is not unisolvent for degree {degree}")
    return tuple(chosen), spare


def fit_homogeneous(nvars: int, degree: int, top: int, value) -> dict[tuple[int, ...], Fraction]:
    """Coefficients of the homogeneous polynomial sampled by `value(lam)`.

    Raises InterpolationError when the held-out node disagrees with the fit.
    """
    alphas = exponent_vectors(nvars, degree)
    nodes, spare = interpolation_nodes(nvars, degree, top)
    a = [[monomial_value(lam, al) for al in alphas] for lam in nodes]
    b = [value(lam) for lam in nodes]
    coeffs = dict(zip(alphas, solve(a, b)))
    predicted = sum(c * monomial_value(spare, al) for al, c in coeffs.items())
    if predicted != value(spare):
        raise InterpolationError(f"held-out node {spare} disagrees with the fitted polynomial")
    return coeffs
