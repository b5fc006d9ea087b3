"""Exact convex geometry for lattice polytopes of dimension at most 6.

Hulls are built by beneath-beyond with integer orientation predicates;
volumes are kept as the integer ``n! * V_n`` and only turned into a
Fraction on output.  Mixed volumes are available by inclusion-exclusion
over Minkowski partial sums and, independently, by interpolating the
Minkowski volume polynomial.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import factorial
from typing import Iterable, Sequence

from ._exact import det, fit_homogeneous, lattice_basis, lattice_coords, rank, row_echelon

MAX_DIM = 6

Point = tuple[int, ...]


@dataclass(frozen=True)
class LatticePolytope:
    """Convex hull of finitely many points of Z^n.

    Build with :func:`convex_hull`; ``vertices`` is the minimal subset of
    ``generators`` with the same hull.
    """

    generators: tuple[Point, ...]
    vertices: tuple[Point, ...]
    affine_dim: int
    # n! * V_n in the ambient dimension (0 when lower-dimensional)
    scaled_volume: int

    @property
    def ambient_dim(self) -> int:
        return len(self.vertices[0])

    @classmethod
    def from_points(cls, points: Iterable[Sequence[int]]) -> "LatticePolytope":
        return convex_hull(points)

    def translate(self, v: Sequence[int]) -> "LatticePolytope":
        return convex_hull(tuple(a + b for a, b in zip(p, v)) for p in self.vertices)

    def dilate(self, k: int) -> "LatticePolytope":
        if k < 0:
            raise ValueError("dilation factor must be non-negative")
        return convex_hull(tuple(k * a for a in p) for p in self.vertices)

    def contains(self, polytope: "LatticePolytope") -> bool:
        """True if every vertex of `polytope` lies in this polytope."""
        return all(self._contains_point(v) for v in polytope.vertices)

    def _contains_point(self, p: Point) -> bool:
        pts = list(self.vertices)
        return convex_hull(pts + [p]).vertices == self.vertices

    @cached_property
    def min_corner(self) -> Point:
        return tuple(min(c) for c in zip(*self.vertices))

    def __repr__(self) -> str:
        return f"LatticePolytope(vertices={list(self.vertices)})"


# ---------------------------------------------------------------- hulls


def _normal(face: Sequence[Point]) -> list[int]:
    """Integer normal of the hyperplane through k points in Z^k."""
    o = face[0]
    rows = [[a - b for a, b in zip(v, o)] for v in face[1:]]
    k = len(o)
    return [(-1) ** j * det([r[:j] + r[j + 1:] for r in rows]) for j in range(k)]


def _dot(a: Sequence[int], b: Sequence[int]) -> int:
    return sum(x * y for x, y in zip(a, b))


def _affine_frame(points: Sequence[Point]) -> tuple[int, list[int]]:
    """Affine dimension of `points` and coordinates on which the
    projection of their affine hull is injective."""
    o = points[0]
    diffs = [[a - b for a, b in zip(p, o)] for p in points[1:]]
    if not diffs:
        return 0, []
    _, pivots = row_echelon(diffs)
    return len(pivots), pivots


def _full_hull(pts: list[Point]) -> tuple[list[int], int]:
    """Beneath-beyond hull of full-dimensional distinct points in Z^k, k >= 2.

    Returns (indices of vertices, k! * volume).
    """
    k = len(pts[0])
    simplex = [0]
    for i in range(1, len(pts)):
        cand = simplex + [i]
        if rank([[a - b for a, b in zip(pts[j], pts[0])] for j in cand[1:]]) == len(cand) - 1:
            simplex = cand
            if len(simplex) == k + 1:
                break
    # scaled centroid of the start simplex stays strictly interior
    centre = [sum(pts[j][c] for j in simplex) for c in range(k)]
    scale = k + 1

    def make_facet(idx: tuple[int, ...]):
        a = _normal([pts[j] for j in idx])
        b = _dot(a, pts[idx[0]])
        if _dot(a, centre) > scale * b:
            a = [-x for x in a]
            b = -b
        return idx, a, b

    facets = [make_facet(tuple(j for j in simplex if j != skip)) for skip in simplex]
    done = set(simplex)
    for i, p in enumerate(pts):
        if i in done:
            continue
        visible = [f for f in facets if _dot(f[1], p) > f[2]]
        if not visible:
            continue
        ridges = Counter()
        for idx, _, _ in visible:
            for r in itertools.combinations(idx, k - 1):
                ridges[frozenset(r)] += 1
        vis_ids = {f[0] for f in visible}
        facets = [f for f in facets if f[0] not in vis_ids]
        for r, cnt in ridges.items():
            if cnt == 1:
                facets.append(make_facet(tuple(sorted(r)) + (i,)))
        done.add(i)

    incident: dict[int, list[list[int]]] = {}
    for idx, a, _ in facets:
        for j in idx:
            incident.setdefault(j, []).append(a)
    verts = sorted(j for j, normals in incident.items() if rank(normals) == k)

    base = pts[simplex[0]]
    vol = 0
    for idx, _, _ in facets:
        if simplex[0] in idx:
            continue
        vol += abs(det([[a - b for a, b in zip(pts[j], base)] for j in idx]))
    return verts, vol


def convex_hull(points: Iterable[Sequence[int]]) -> LatticePolytope:
    """Convex hull of a non-empty finite set of lattice points."""
    gens = sorted({tuple(int(c) for c in p) for p in points})
    if not gens:
        raise ValueError("convex hull of an empty point set")
    n = len(gens[0])
    if n == 0 or any(len(p) != n for p in gens):
        raise ValueError("points have inconsistent dimensions")
    if n > MAX_DIM:
        raise ValueError(f"ambient dimension {n} exceeds the supported maximum {MAX_DIM}")

    k, coords = _affine_frame(gens)
    if k == 0:
        verts = [0]
        vol = 0
    elif k == 1:
        c = coords[0]
        key = [p[c] for p in gens]
        verts = sorted({key.index(min(key)), key.index(max(key))})
        vol = max(key) - min(key) if n == 1 else 0
    else:
        proj = [tuple(p[c] for c in coords) for p in gens]
        verts, kvol = _full_hull(proj)
        vol = kvol if k == n else 0
    return LatticePolytope(
        generators=tuple(gens),
        vertices=tuple(gens[j] for j in verts),
        affine_dim=k,
        scaled_volume=vol,
    )


def minkowski_sum(p: LatticePolytope, q: LatticePolytope) -> LatticePolytope:
    if p.ambient_dim != q.ambient_dim:
        raise ValueError("Minkowski sum of polytopes in different dimensions")
    return convex_hull(tuple(a + b for a, b in zip(u, v)) for u in p.vertices for v in q.vertices)


def euclidean_volume(p: LatticePolytope) -> Fraction:
    """Exact n-dimensional volume; 0 for lower-dimensional polytopes."""
    return Fraction(p.scaled_volume, factorial(p.ambient_dim))


def lattice_normalized_volume(points: Iterable[Sequence[int]]) -> int:
    """Volume of conv(points) measured in fundamental simplices of the
    affine lattice the points generate.

    For the exponents of equal-degree monomials this is the multiplicity
    of the toric ring they generate.
    """
    pts = sorted({tuple(p) for p in points})
    if not pts:
        raise ValueError("empty point set")
    o = pts[0]
    diffs = [[a - b for a, b in zip(p, o)] for p in pts[1:]]
    basis = lattice_basis(diffs)
    r = len(basis)
    if r == 0:
        return 1
    local = [tuple(lattice_coords(basis, d)) for d in diffs]
    local.append((0,) * r)
    if r == 1:
        xs = [p[0] for p in local]
        return max(xs) - min(xs)
    _, vol = _full_hull(sorted(set(local)))
    return vol


# ---------------------------------------------------------- mixed volumes


def _check_tuple(polys: Sequence[LatticePolytope]) -> int:
    if not polys:
        raise ValueError("empty polytope tuple")
    n = polys[0].ambient_dim
    if any(p.ambient_dim != n for p in polys):
        raise ValueError("polytopes live in different ambient dimensions")
    if len(polys) != n:
        raise ValueError(f"need {n} polytopes in dimension {n}, got {len(polys)}")
    return n


def _as_result(scaled: int, n: int) -> Fraction:
    return Fraction(scaled, factorial(n))


def mixed_volume_ie(polys: Sequence[LatticePolytope]) -> Fraction:
    """Mixed volume by inclusion-exclusion over all partial Minkowski sums."""
    n = _check_tuple(polys)
    partial: dict[tuple[int, ...], LatticePolytope] = {}
    total = 0
    for h in range(1, n + 1):
        for idx in itertools.combinations(range(n), h):
            if h == 1:
                s = polys[idx[0]]
            else:
                s = minkowski_sum(partial[idx[:-1]], polys[idx[-1]])
            partial[idx] = s
            total += (-1) ** (n - h) * s.scaled_volume
    return _as_result(total, n)


def dilated_sum(polys: Sequence[LatticePolytope], lam: Sequence[int]) -> LatticePolytope:
    """lam_1 P_1 + ... + lam_k P_k."""
    acc = None
    for p, k in zip(polys, lam):
        term = p.dilate(k)
        acc = term if acc is None else minkowski_sum(acc, term)
    return acc


def mixed_volume_interp(polys: Sequence[LatticePolytope]) -> Fraction:
    """Mixed volume as the coefficient of lam_1 ... lam_n in
    V_n(lam_1 Q_1 + ... + lam_n Q_n)."""
    n = _check_tuple(polys)
    coeffs = fit_homogeneous(n, n, n + 1, lambda lam: dilated_sum(polys, lam).scaled_volume)
    return coeffs[(1,) * n] / factorial(n)


def mixed_volume(polys: Sequence[LatticePolytope]) -> Fraction:
    return mixed_volume_ie(polys)


def minkowski_polynomial(polys: Sequence[LatticePolytope]) -> dict[tuple[int, ...], Fraction]:
    """Coefficients of lam -> V_n(sum lam_i Q_i) for any number of polytopes
    whose sum is n-dimensional (or lower, giving zeros)."""
    k = len(polys)
    n = polys[0].ambient_dim
    coeffs = fit_homogeneous(k, n, n + 1, lambda lam: dilated_sum(polys, lam).scaled_volume)
    return {a: c / factorial(n) for a, c in coeffs.items()}


def simplex(n: int, k: int = 1) -> LatticePolytope:
    """k times the standard simplex in Z^n."""
    pts = [(0,) * n] + [tuple(k if i == j else 0 for i in range(n)) for j in range(n)]
    return convex_hull(pts)


def cube(n: int, k: int = 1) -> LatticePolytope:
    return convex_hull(itertools.product((0, k), repeat=n))
