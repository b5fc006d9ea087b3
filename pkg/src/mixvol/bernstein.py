"""Sparse Laurent systems: Newton polytopes, the mixed-volume root bound,
torus point counts over small prime fields and multiplicity counts over
F_p by saturation."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .geometry import LatticePolytope, convex_hull, mixed_volume_ie
from .groebner import (
    DEFAULT_PRIME,
    Poly,
    PrimeFieldIdeal,
    is_prime,
    krull_dim,
    quotient_dimension,
    saturate,
)

DEFAULT_BUDGET = 10**7

Exponent = tuple[int, ...]


class BoundViolation(AssertionError):
    """More distinct torus zeros than the mixed volume allows."""

    def __init__(self, message: str, report: "BernsteinReport | None" = None):
        super().__init__(message)
        self.report = report


class NotFiniteError(ValueError):
    """The system has infinitely many zeros in the torus."""


class BudgetExceeded(ValueError):
    pass


@dataclass(frozen=True)
class LaurentPoly:
    num_vars: int
    terms: tuple[tuple[Exponent, int], ...]

    @classmethod
    def of(cls, terms: dict | Iterable, num_vars: int | None = None) -> "LaurentPoly":
        items = terms.items() if isinstance(terms, dict) else terms
        acc: dict[Exponent, int] = {}
        for e, c in items:
            e = tuple(int(x) for x in e)
            acc[e] = acc.get(e, 0) + int(c)
        acc = {e: c for e, c in acc.items() if c}
        if not acc:
            raise ValueError("a Laurent polynomial needs at least one nonzero term")
        nv = {len(e) for e in acc}
        if len(nv) != 1 or (num_vars is not None and nv != {num_vars}):
            raise ValueError("exponent vectors have inconsistent lengths")
        return cls(nv.pop(), tuple(sorted(acc.items())))

    @property
    def support(self) -> list[Exponent]:
        return [e for e, _ in self.terms]

    def as_dict(self) -> dict[Exponent, int]:
        return dict(self.terms)

    def reduce_mod(self, q: int) -> "LaurentPoly | None":
        """Coefficients mod q; None if every coefficient vanishes."""
        kept = [(e, c % q) for e, c in self.terms if c % q]
        return LaurentPoly(self.num_vars, tuple(kept)) if kept else None

    def __mul__(self, other: "LaurentPoly") -> "LaurentPoly":
        acc: dict[Exponent, int] = {}
        for e1, c1 in self.terms:
            for e2, c2 in other.terms:
                e = tuple(a + b for a, b in zip(e1, e2))
                acc[e] = acc.get(e, 0) + c1 * c2
        return LaurentPoly.of(acc, self.num_vars)


@dataclass(frozen=True)
class LaurentSystem:
    polys: tuple[LaurentPoly, ...]

    def __post_init__(self):
        if not self.polys:
            raise ValueError("empty system")
        n = self.polys[0].num_vars
        if any(f.num_vars != n for f in self.polys):
            raise ValueError("polynomials in different numbers of variables")
        if len(self.polys) != n:
            raise ValueError(f"need {n} polynomials in {n} variables, got {len(self.polys)}")

    @property
    def num_vars(self) -> int:
        return self.polys[0].num_vars

    def reduce_mod(self, q: int) -> "LaurentSystem | None":
        red = [f.reduce_mod(q) for f in self.polys]
        if any(f is None for f in red):
            return None
        return LaurentSystem(tuple(red))


def newton_polytope(f: LaurentPoly) -> LatticePolytope:
    return convex_hull(f.support)


def clear_denominators(f: LaurentPoly) -> LaurentPoly:
    """Multiply by the smallest monomial making every exponent non-negative."""
    v = [max(0, -min(c)) for c in zip(*f.support)]
    return LaurentPoly(
        f.num_vars, tuple(sorted((tuple(a + b for a, b in zip(e, v)), c) for e, c in f.terms))
    )


def bernstein_bound(system: LaurentSystem) -> int:
    """Mixed volume of the Newton polytopes."""
    mv = mixed_volume_ie([newton_polytope(f) for f in system.polys])
    if mv.denominator != 1:
        raise ArithmeticError(f"mixed volume {mv} of lattice polytopes is not an integer")
    return int(mv)


# --------------------------------------------------- finite field counts


def count_torus_points_exhaustive(system: LaurentSystem, q: int, budget: int = DEFAULT_BUDGET) -> int:
    """Common zeros in (F_q^*)^n by evaluating at every point.

    Exponents are reduced mod q - 1, which also takes care of negative ones.
    """
    if not is_prime(q):
        raise ValueError(f"only prime fields are supported, got q = {q}")
    n = system.num_vars
    if q ** n > budget:
        raise BudgetExceeded(f"q^n = {q ** n} exceeds the evaluation budget {budget}")
    units = np.arange(1, q, dtype=np.int64)
    # powers[k][x-1] = x^k mod q for k < q - 1
    powers = np.ones((q - 1, q - 1), dtype=np.int64)
    for k in range(1, q - 1):
        powers[k] = powers[k - 1] * units % q
    grids = np.meshgrid(*([np.arange(q - 1)] * n), indexing="ij")
    alive = np.ones(grids[0].shape, dtype=bool) if n else np.ones((), dtype=bool)
    for f in system.polys:
        val = np.zeros(alive.shape, dtype=np.int64)
        for e, c in f.terms:
            term = np.full(alive.shape, c % q, dtype=np.int64)
            for j, k in enumerate(e):
                term = term * powers[k % (q - 1)][grids[j]] % q
            val = (val + term) % q
        alive &= val == 0
    return int(alive.sum())


def _to_poly(f: LaurentPoly, p: int) -> Poly:
    g = clear_denominators(f)
    return Poly(g.num_vars, p, dict(g.terms))


def _saturated_ideal(system: LaurentSystem, p: int) -> PrimeFieldIdeal:
    n = system.num_vars
    ideal = PrimeFieldIdeal([_to_poly(f, p) for f in system.polys], n, p)
    return saturate(ideal, Poly.monomial((1,) * n, p))


def is_torus_finite(system: LaurentSystem, p: int) -> bool:
    """Finitely many zeros in the torus over the algebraic closure of F_p?"""
    dim = krull_dim(_saturated_ideal(system, p))
    return dim is None or dim == 0


def count_with_multiplicity(system: LaurentSystem, p: int = DEFAULT_PRIME) -> int:
    """dim over F_p of F_p[x]/((f_1..f_n) : (x_1...x_n)^inf), the number of
    torus zeros over the algebraic closure counted with multiplicity."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    sat = _saturated_ideal(system, p)
    dim = krull_dim(sat)
    if dim is None:
        return 0
    if dim != 0:
        raise NotFiniteError(f"the system has a {dim}-dimensional family of torus zeros over F_{p}")
    return quotient_dimension(sat)


def randomize_coefficients(system: LaurentSystem, rng: random.Random, p: int) -> LaurentSystem:
    """Same supports, coefficients uniform in F_p \\ {0}."""
    return LaurentSystem(tuple(
        LaurentPoly(f.num_vars, tuple((e, rng.randint(1, p - 1)) for e, _ in f.terms))
        for f in system.polys
    ))


# ------------------------------------------------------------ report


@dataclass
class FieldCount:
    q: int
    distinct: int | None
    bound: int | None
    finite: bool
    asserted: bool
    note: str = ""


@dataclass
class BernsteinReport:
    bound: int
    prime: int
    seed: int
    multiplicity: int | None
    multiplicity_note: str
    counts: list[FieldCount] = field(default_factory=list)
    trials: int = 0
    attained: int = 0

    @property
    def attainment_rate(self) -> float | None:
        return self.attained / self.trials if self.trials else None

    def flags(self) -> dict[str, str]:
        out = {}
        d = [c for c in self.counts if c.distinct is not None]
        if d:
            out["distinct"] = "holds" if all(c.distinct == self.bound for c in d) else "fails"
        if self.multiplicity is not None:
            out["multiplicity"] = "holds" if self.multiplicity == self.bound else "fails"
        return out


def verify_bernstein(system: LaurentSystem, p: int = DEFAULT_PRIME, qs: Sequence[int] = (5, 7),
                     trials: int = 10, seed: int = 0, budget: int = DEFAULT_BUDGET) -> BernsteinReport:
    """Check distinct torus zeros over each F_q against the mixed volume
    and report the multiplicity count over F_p.

    The comparison is only a theorem when the system reduced mod q still
    has finitely many torus zeros, and then against the mixed volume of
    the reduced supports; other cases are reported, not asserted.
    Raises BoundViolation if an asserted comparison fails.
    """
    bound = bernstein_bound(system)
    try:
        mult = count_with_multiplicity(system, p)
        note = ""
    except NotFiniteError as exc:
        mult, note = None, str(exc)
    report = BernsteinReport(bound, p, seed, mult, note)

    for q in qs:
        try:
            red = system.reduce_mod(q)
            if red is None:
                report.counts.append(FieldCount(q, None, None, False, False, "a polynomial vanishes mod q"))
                continue
            distinct = count_torus_points_exhaustive(red, q, budget)
        except BudgetExceeded as exc:
            report.counts.append(FieldCount(q, None, None, False, False, str(exc)))
            continue
        bound_q = bernstein_bound(red)
        finite = is_torus_finite(red, q)
        entry = FieldCount(q, distinct, bound_q, finite, finite)
        if not finite:
            entry.note = "infinitely many torus zeros over the closure; not compared"
        report.counts.append(entry)
        if finite and distinct > bound_q:
            raise BoundViolation(
                f"{distinct} distinct torus zeros over F_{q} exceed the mixed volume {bound_q}", report
            )

    rng = random.Random(seed)
    for _ in range(trials):
        redraw = randomize_coefficients(system, rng, p)
        report.trials += 1
        try:
            if count_with_multiplicity(redraw, p) == bound:
                report.attained += 1
        except NotFiniteError:
            pass
    return report


def random_sparse_system(rng: random.Random, n: int = 2, max_terms: int = 4, coord: int = 3,
                         coeff: int = 5) -> LaurentSystem:
    """Random square system with supports of at most `max_terms` points."""
    polys = []
    for _ in range(n):
        k = rng.randint(2, max_terms)
        pts = set()
        while len(pts) < k:
            pts.add(tuple(rng.randint(0, coord) for _ in range(n)))
        polys.append(LaurentPoly.of({e: rng.choice([c for c in range(-coeff, coeff + 1) if c]) for e in pts}))
    return LaurentSystem(tuple(polys))
