"""Multigraded Hilbert functions of monomial configurations.

A configuration (M_0, M_1, ..., M_s) of equal-degree monomial sets in
k[x_0..x_n], with M_0 the variables, defines the algebra
R(m | J_1, ..., J_s).  Its Hilbert function at u counts the monomials of
M_0^{u_0} M_1^{u_1} ... M_s^{u_s}, i.e. the size of an iterated sumset of
exponent vectors.  Mixed multiplicities are read off this count by
finite differences or through diagonal subalgebras.
"""

from __future__ import annotations

import itertools
import threading
from collections import OrderedDict
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial
from typing import Iterable, Sequence

import numpy as np

from ._exact import exponent_vectors, fit_homogeneous, monomial_value
from .geometry import LatticePolytope

Exponent = tuple[int, ...]


class StabilizationError(RuntimeError):
    """The finite difference did not stabilise at the requested base."""

    def __init__(self, message: str, base: int):
        super().__init__(message)
        self.base = base


@dataclass(frozen=True)
class MonomialSet:
    """Exponent vectors of monomials of one common degree."""

    num_vars: int
    degree: int
    exponents: frozenset[Exponent]

    def __post_init__(self):
        if not self.exponents:
            raise ValueError("a monomial set needs at least one monomial")
        for e in self.exponents:
            if len(e) != self.num_vars:
                raise ValueError(f"exponent {e} has {len(e)} entries, expected {self.num_vars}")
            if any(x < 0 for x in e):
                raise ValueError(f"negative exponent in {e}")
            if sum(e) != self.degree:
                raise ValueError(f"monomial {e} does not have degree {self.degree}")

    @classmethod
    def of(cls, exponents: Iterable[Sequence[int]]) -> "MonomialSet":
        exps = frozenset(tuple(int(x) for x in e) for e in exponents)
        if not exps:
            raise ValueError("a monomial set needs at least one monomial")
        first = next(iter(exps))
        return cls(len(first), sum(first), exps)

    @classmethod
    def variables(cls, num_vars: int) -> "MonomialSet":
        return cls.of(tuple(int(i == j) for i in range(num_vars)) for j in range(num_vars))

    @classmethod
    def all_of_degree(cls, num_vars: int, degree: int) -> "MonomialSet":
        return cls.of(exponent_vectors(num_vars, degree))

    def sorted(self) -> list[Exponent]:
        return sorted(self.exponents, reverse=True)

    def is_m_primary(self) -> bool:
        """Does the ideal contain a pure power of every variable?"""
        return all(
            any(e[j] == self.degree for e in self.exponents) for j in range(self.num_vars)
        )


@dataclass(frozen=True)
class MonomialConfiguration:
    """The tuple (M_0, M_1, ..., M_s) with M_0 the set of variables."""

    sets: tuple[MonomialSet, ...]

    def __post_init__(self):
        if not self.sets:
            raise ValueError("empty configuration")
        nv = self.sets[0].num_vars
        if self.sets[0] != MonomialSet.variables(nv):
            raise ValueError("M_0 must consist of the variables x_0..x_n")
        if any(m.num_vars != nv for m in self.sets):
            raise ValueError("monomial sets live in different polynomial rings")

    @classmethod
    def from_sets(cls, sets: Iterable, num_vars: int | None = None) -> "MonomialConfiguration":
        """Build from J-generating sets; M_0 is prepended automatically."""
        ms = [s if isinstance(s, MonomialSet) else MonomialSet.of(s) for s in sets]
        if num_vars is None:
            if not ms:
                raise ValueError("cannot infer the number of variables")
            num_vars = ms[0].num_vars
        return cls((MonomialSet.variables(num_vars),) + tuple(ms))

    @property
    def num_vars(self) -> int:
        return self.sets[0].num_vars

    @property
    def s(self) -> int:
        return len(self.sets) - 1

    @property
    def degree_of_hilbert_polynomial(self) -> int:
        # polynomial ring: dim A/(0:J^inf) = num_vars
        return self.num_vars - 1

    def replace(self, index: int, new: MonomialSet) -> "MonomialConfiguration":
        sets = list(self.sets)
        sets[index] = new
        return MonomialConfiguration(tuple(sets))


@dataclass
class MixedMultiplicityVector:
    total_degree: int
    values: dict[tuple[int, ...], int] = field(default_factory=dict)

    def __getitem__(self, alpha: Sequence[int]) -> int:
        return self.values[tuple(alpha)]

    def diagonal(self, lam: Sequence[int]) -> Fraction:
        """r! * sum_alpha e_alpha lam^alpha / alpha!"""
        r = self.total_degree
        tot = Fraction(0)
        for a, e in self.values.items():
            den = 1
            for x in a:
                den *= factorial(x)
            tot += Fraction(e * monomial_value(lam, a), den)
        return factorial(r) * tot


# ------------------------------------------------------------ sumsets


@lru_cache(maxsize=512)
def _sumset_power(exponents: frozenset, num_vars: int, h: int) -> frozenset:
    if h == 0:
        return frozenset({(0,) * num_vars})
    prev = _sumset_power(exponents, num_vars, h - 1)
    return frozenset(tuple(a + b for a, b in zip(p, q)) for p in prev for q in exponents)


def sumset_power(m, h: int) -> frozenset[Exponent]:
    """All sums of h elements of M (with repetition); h = 0 gives {0}.

    M may be a MonomialSet or any non-empty collection of integer vectors;
    equal degrees are not needed here.
    """
    if h < 0:
        raise ValueError("h must be non-negative")
    if isinstance(m, MonomialSet):
        return _sumset_power(m.exponents, m.num_vars, h)
    exps = frozenset(tuple(int(x) for x in e) for e in m)
    if not exps or len({len(e) for e in exps}) != 1:
        raise ValueError("need a non-empty set of vectors of one length")
    return _sumset_power(exps, len(next(iter(exps))), h)


class _Engine:
    """Counts |u_0 M_0 + u_1 M_1 + ... + u_s M_s| for one configuration.

    One coordinate is dropped (all sums of a given u share a degree).
    The J-part X = sum u_i M_i is kept as a dense boolean grid grown by
    shifted ORs.  Since M_0 is the set of variables, y lies in u_0 M_0 + X
    iff some x in X satisfies x <= y and |y| - |x| <= u_0, so the counts
    for every u_0 come out of one running maximum of |x| over x <= y.
    """

    def __init__(self, config: MonomialConfiguration, max_grids: int = 24):
        self.config = config
        nv = config.num_vars
        js = config.sets[1:]
        if js:
            widest = [max(max(e[j] for e in m.exponents) for m in js) for j in range(nv)]
            drop = max(range(nv), key=lambda j: widest[j])
        else:
            drop = 0
        self.keep = [j for j in range(nv) if j != drop]
        self.n = nv - 1
        self.points = [
            np.array(sorted({tuple(e[j] for j in self.keep) for e in m.exponents}), dtype=np.int64).reshape(-1, self.n)
            for m in js
        ]
        self.max_coord = max((int(p.max()) for p in self.points if p.size), default=0)
        self._grids: OrderedDict[tuple, np.ndarray] = OrderedDict()
        self._max_grids = max_grids
        self._counts: dict[tuple, np.ndarray] = {}

    def _step(self, grid: np.ndarray, j: int) -> np.ndarray:
        pts = self.points[j]
        ext = pts.max(axis=0) if pts.size else np.zeros(self.n, dtype=np.int64)
        out = np.zeros(tuple(int(a + b) for a, b in zip(grid.shape, ext)), dtype=bool)
        for p in pts:
            sl = tuple(slice(int(a), int(a) + s) for a, s in zip(p, grid.shape))
            out[sl] |= grid
        return out

    def grid(self, uj: tuple[int, ...]) -> np.ndarray:
        if uj in self._grids:
            self._grids.move_to_end(uj)
            return self._grids[uj]
        # grow from the largest cached predecessor
        start, best = (0,) * len(uj), -1
        for key in self._grids:
            if all(a <= b for a, b in zip(key, uj)) and sum(key) > best:
                start, best = key, sum(key)
        g = self._grids[start] if best >= 0 else np.ones((1,) * self.n, dtype=bool)
        cur = list(start)
        for j in range(len(uj)):
            while cur[j] < uj[j]:
                g = self._step(g, j)
                cur[j] += 1
        self._grids[uj] = g
        while len(self._grids) > self._max_grids:
            self._grids.popitem(last=False)
        return g

    def counts(self, uj: tuple[int, ...], u0_max: int) -> np.ndarray:
        """Cumulative counts c[u0] = H(u0, uj) for u0 = 0..u0_max."""
        cached = self._counts.get(uj)
        if cached is not None and len(cached) > u0_max:
            return cached
        x = self.grid(uj)
        shape = tuple(s + u0_max for s in x.shape)
        deg = np.zeros(shape, dtype=np.int32)
        for ax, s in enumerate(shape):
            view = [1] * self.n
            view[ax] = s
            deg = deg + np.arange(s, dtype=np.int32).reshape(view)
        best = np.full(shape, -1, dtype=np.int32)
        inner = tuple(slice(0, s) for s in x.shape)
        best[inner] = np.where(x, deg[inner], -1)
        for ax in range(self.n):
            np.maximum.accumulate(best, axis=ax, out=best)
        gap = (deg - best)[best >= 0]
        hist = np.bincount(gap[gap <= u0_max], minlength=u0_max + 1)
        out = np.cumsum(hist)
        self._counts[uj] = out
        return out

    def value(self, u: Sequence[int]) -> int:
        return int(self.counts(tuple(u[1:]), u[0])[u[0]])


_local = threading.local()


def _engine(config: MonomialConfiguration) -> _Engine:
    cache = getattr(_local, "engines", None)
    if cache is None:
        cache = _local.engines = OrderedDict()
    eng = cache.get(config)
    if eng is None:
        eng = cache[config] = _Engine(config)
        while len(cache) > 4:
            cache.popitem(last=False)
    return eng


def hilbert_value(config: MonomialConfiguration, u: Sequence[int]) -> int:
    """H_R(u) = number of monomials in m^{u_0} J_1^{u_1} ... J_s^{u_s}
    not in m^{u_0+1} J_1^{u_1} ... J_s^{u_s}."""
    u = tuple(int(x) for x in u)
    if len(u) != config.s + 1:
        raise ValueError(f"multi-index has length {len(u)}, expected {config.s + 1}")
    if any(x < 0 for x in u):
        raise ValueError("multi-index entries must be non-negative")
    return _engine(config).value(u)


# ------------------------------------------------- finite differences


def default_base(config: MonomialConfiguration) -> int:
    """n * (largest coordinate of the J-sets) + n + 2, coordinates taken
    after dropping the widest variable."""
    n = config.num_vars - 1
    return n * _engine(config).max_coord + n + 2


def difference(config: MonomialConfiguration, alpha: Sequence[int], base: Sequence[int]) -> int:
    """Iterated forward difference Delta^alpha H evaluated at `base`."""
    eng = _engine(config)
    total = 0
    for eps in itertools.product(*(range(a + 1) for a in alpha)):
        coef = 1
        for a, e in zip(alpha, eps):
            coef *= (-1) ** (a - e) * comb(a, e)
        total += coef * eng.value(tuple(b + e for b, e in zip(base, eps)))
    return total


@dataclass(frozen=True)
class Extraction:
    value: int
    base: int


def _stable(compute, base: int | None, default: int, max_base: int | None, what: str) -> Extraction:
    explicit = base is not None
    b = base if explicit else default
    cap = max_base if max_base is not None else 4 * default
    while True:
        v0 = compute(b)
        v1 = compute(b + 1)
        if v0 == v1 and v0 >= 0:
            return Extraction(int(v0), b)
        if explicit or 2 * b > cap:
            raise StabilizationError(f"{what} did not stabilise at base {b} ({v0} vs {v1})", b)
        b *= 2


def extract_mixed_multiplicity(
    config: MonomialConfiguration,
    alpha: Sequence[int],
    base: int | None = None,
    max_base: int | None = None,
) -> Extraction:
    alpha = tuple(int(a) for a in alpha)
    r = config.degree_of_hilbert_polynomial
    if len(alpha) != config.s + 1:
        raise ValueError(f"alpha has length {len(alpha)}, expected {config.s + 1}")
    if any(a < 0 for a in alpha) or sum(alpha) != r:
        raise ValueError(f"alpha must be non-negative with |alpha| = {r}")
    k = config.s + 1
    return _stable(
        lambda b: difference(config, alpha, (b,) * k),
        base, default_base(config), max_base, f"Delta^{alpha} H",
    )


def mixed_multiplicity_fd(
    config: MonomialConfiguration,
    alpha: Sequence[int],
    base: int | None = None,
    max_base: int | None = None,
) -> int:
    """e_alpha as Delta^alpha H at (base, ..., base), checked at base + 1."""
    return extract_mixed_multiplicity(config, alpha, base, max_base).value


def observed_degree(config: MonomialConfiguration, base: int | None = None) -> int:
    """Degree of the Hilbert polynomial, confirmed by the vanishing of every
    difference of order r + 1 and a nonzero difference of order r."""
    r = config.degree_of_hilbert_polynomial
    k = config.s + 1
    b = default_base(config) if base is None else base
    pt = (b,) * k
    for beta in exponent_vectors(k, r + 1):
        v = difference(config, beta, pt)
        if v != 0:
            raise StabilizationError(f"Delta^{beta} H = {v} at base {b}; degree exceeds {r}", b)
    if all(difference(config, a, pt) == 0 for a in exponent_vectors(k, r)):
        raise StabilizationError(f"every difference of order {r} vanishes at base {b}", b)
    return r


def all_mixed_multiplicities(config: MonomialConfiguration, base: int | None = None) -> MixedMultiplicityVector:
    r = config.degree_of_hilbert_polynomial
    out = MixedMultiplicityVector(r)
    for a in exponent_vectors(config.s + 1, r):
        out.values[a] = mixed_multiplicity_fd(config, a, base)
    return out


# -------------------------------------------------- diagonal subalgebras


def _diagonal_difference(config: MonomialConfiguration, lam: Sequence[int], t: int) -> int:
    r = config.degree_of_hilbert_polynomial
    eng = _engine(config)
    return sum(
        (-1) ** (r - k) * comb(r, k) * eng.value(tuple((t + k) * x for x in lam))
        for k in range(r + 1)
    )


def diagonal_multiplicity(
    config: MonomialConfiguration, lam: Sequence[int], base: int | None = None
) -> int:
    """Multiplicity of the diagonal subalgebra R^lam, i.e. r! times the
    leading coefficient of t -> H(t lam)."""
    lam = tuple(int(x) for x in lam)
    if len(lam) != config.s + 1:
        raise ValueError(f"lambda has length {len(lam)}, expected {config.s + 1}")
    if any(x < 1 for x in lam):
        raise ValueError("diagonal multiplicities need positive lambda")
    ext = _stable(
        lambda t: _diagonal_difference(config, lam, t),
        base, default_base(config), None, f"diagonal {lam}",
    )
    return ext.value


def mixed_mults_via_diagonals(config: MonomialConfiguration, base: int | None = None) -> MixedMultiplicityVector:
    """Recover every e_alpha by solving the diagonal-multiplicity system
    over enough positive lambda; one extra lambda is held out as a check."""
    r = config.degree_of_hilbert_polynomial
    k = config.s + 1
    coeffs = fit_homogeneous(k, r, r + 1, lambda lam: diagonal_multiplicity(config, lam, base))
    out = MixedMultiplicityVector(r)
    for a, c in coeffs.items():
        af = 1
        for x in a:
            af *= factorial(x)
        e = c * af / factorial(r)
        if e.denominator != 1 or e < 0:
            raise ArithmeticError(f"non-integral or negative mixed multiplicity {e} at {a}")
        out.values[a] = int(e)
    return out


# ------------------------------------------------------ polytopes


def configuration_from_polytopes(polys: Sequence[LatticePolytope], translate: bool = True) -> MonomialConfiguration:
    """Homogenise each polytope's generators with x_0 to a common degree.

    With `translate` each polytope is first moved into N^n (mixed volumes
    are translation invariant); otherwise negative coordinates are an error.
    """
    sets = []
    for p in polys:
        verts = p.generators
        if translate:
            lo = p.min_corner
            verts = [tuple(a - b for a, b in zip(v, lo)) for v in verts]
        elif any(x < 0 for v in verts for x in v):
            raise ValueError("polytope has negative coordinates; translate it into N^n first")
        d = max(sum(v) for v in verts)
        sets.append(MonomialSet.of((d - sum(v),) + tuple(v) for v in verts))
    n = polys[0].ambient_dim
    return MonomialConfiguration.from_sets(sets, num_vars=n + 1)


def mv_via_algebra(polys: Sequence[LatticePolytope], base: int | None = None, translate: bool = True) -> int:
    """Mixed volume as the mixed multiplicity e_(0,1,...,1)(m | J_1..J_n)."""
    n = polys[0].ambient_dim
    if len(polys) != n or any(p.ambient_dim != n for p in polys):
        raise ValueError(f"need {n} polytopes in dimension {n}")
    config = configuration_from_polytopes(polys, translate)
    return mixed_multiplicity_fd(config, (0,) + (1,) * n, base)


# ------------------------------------------------------ AF probe


@dataclass(frozen=True)
class ProbeReport:
    lhs: int
    rhs: int
    relation: str
    hypothesis_ok: bool
    values: tuple[int, int, int]


def probe_af(config: MonomialConfiguration, base: int | None = None) -> ProbeReport:
    """Both sides of e(J1,J2,...)^2 >= e(J1,J1,...) e(J2,J2,...) at
    alpha = (0,1,...,1).  Nothing is asserted about the outcome."""
    n = config.num_vars - 1
    if config.s != n or n < 2:
        raise ValueError("the probe needs s = n >= 2 ideals in n + 1 variables")
    alpha = (0,) + (1,) * n
    j1, j2 = config.sets[1], config.sets[2]
    mixed = mixed_multiplicity_fd(config, alpha, base)
    first = mixed_multiplicity_fd(config.replace(2, j1), alpha, base)
    second = mixed_multiplicity_fd(config.replace(1, j2), alpha, base)
    lhs, rhs = mixed * mixed, first * second
    relation = ">" if lhs > rhs else "<" if lhs < rhs else "="
    # height-n hypothesis is checked through positivity of the three values
    return ProbeReport(lhs, rhs, relation, min(mixed, first, second) > 0, (mixed, first, second))
