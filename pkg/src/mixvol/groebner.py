"""A small Gröbner basis engine over F_p and the Samuel-multiplicity route.

Polynomials are dicts from exponent tuples to residues mod p.  Orders are
plain sort keys: graded reverse lex for dimension and multiplicity work,
and an elimination order (degree in the eliminated block first) inside
saturation and intersection.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Iterable, Sequence

from .hilbert import MonomialConfiguration, MonomialSet, mixed_multiplicity_fd

DEFAULT_PRIME = 32003

Exponent = tuple[int, ...]


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


# ------------------------------------------------------------- orders


class MonomialOrder:
    """A monomial order given by a sort key; larger key = larger monomial."""

    def __init__(self, name: str, key):
        self.name = name
        self._key = key
        self._cache: dict[Exponent, tuple] = {}

    def key(self, e: Exponent):
        k = self._cache.get(e)
        if k is None:
            k = self._cache[e] = self._key(e)
        return k

    def lead(self, exps: Iterable[Exponent]) -> Exponent:
        return max(exps, key=self.key)

    def __repr__(self) -> str:
        return f"MonomialOrder({self.name})"


def _grevlex_key(e: Exponent):
    return (sum(e), tuple(-x for x in reversed(e)))


@lru_cache(maxsize=None)
def grevlex() -> MonomialOrder:
    return MonomialOrder("grevlex", _grevlex_key)


@lru_cache(maxsize=None)
def elimination(block: tuple[int, ...]) -> MonomialOrder:
    """Eliminates the variables in `block`: compares their total degree
    first and breaks ties by grevlex."""
    return MonomialOrder(
        f"elim{list(block)}", lambda e: (sum(e[i] for i in block), _grevlex_key(e))
    )


# -------------------------------------------------------- polynomials


class Poly:
    """Polynomial over F_p in `nvars` variables; immutable by convention."""

    __slots__ = ("nvars", "p", "terms")

    def __init__(self, nvars: int, p: int, terms: dict[Exponent, int] | None = None):
        self.nvars = nvars
        self.p = p
        self.terms = {}
        for e, c in (terms or {}).items():
            c %= p
            if c:
                if len(e) != nvars:
                    raise ValueError(f"exponent {e} does not have {nvars} entries")
                self.terms[tuple(e)] = c

    @classmethod
    def _raw(cls, nvars, p, terms):
        out = cls.__new__(cls)
        out.nvars, out.p, out.terms = nvars, p, terms
        return out

    @classmethod
    def monomial(cls, e: Sequence[int], p: int, coeff: int = 1) -> "Poly":
        return cls(len(e), p, {tuple(e): coeff})

    @classmethod
    def var(cls, i: int, nvars: int, p: int) -> "Poly":
        return cls.monomial(tuple(int(i == j) for j in range(nvars)), p)

    @classmethod
    def constant(cls, c: int, nvars: int, p: int) -> "Poly":
        return cls(nvars, p, {(0,) * nvars: c})

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        return isinstance(other, Poly) and self.p == other.p and self.terms == other.terms

    def __hash__(self):
        return hash((self.p, frozenset(self.terms.items())))

    def __add__(self, other: "Poly") -> "Poly":
        t = dict(self.terms)
        p = self.p
        for e, c in other.terms.items():
            v = (t.get(e, 0) + c) % p
            if v:
                t[e] = v
            else:
                t.pop(e, None)
        return Poly._raw(self.nvars, p, t)

    def __neg__(self) -> "Poly":
        return Poly._raw(self.nvars, self.p, {e: self.p - c for e, c in self.terms.items()})

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other: "Poly") -> "Poly":
        p = self.p
        t: dict[Exponent, int] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                t[e] = (t.get(e, 0) + c1 * c2) % p
        return Poly._raw(self.nvars, p, {e: c for e, c in t.items() if c})

    def scale_shift(self, c: int, m: Exponent) -> "Poly":
        """c * x^m * self."""
        p = self.p
        c %= p
        if not c:
            return Poly._raw(self.nvars, p, {})
        return Poly._raw(
            self.nvars, p,
            {tuple(a + b for a, b in zip(e, m)): v * c % p for e, v in self.terms.items()},
        )

    def lead(self, order: MonomialOrder) -> Exponent:
        return order.lead(self.terms)

    def monic(self, order: MonomialOrder) -> "Poly":
        lc = self.terms[self.lead(order)]
        return self.scale_shift(pow(lc, -1, self.p), (0,) * self.nvars)

    def degree(self) -> int:
        return max(sum(e) for e in self.terms) if self.terms else -1

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self.terms}) <= 1

    def extend(self, extra: int = 1) -> "Poly":
        """The same polynomial in `extra` more variables (appended)."""
        z = (0,) * extra
        return Poly._raw(self.nvars + extra, self.p, {e + z: c for e, c in self.terms.items()})

    def restrict(self, nvars: int) -> "Poly":
        """Drop trailing variables that do not occur."""
        if any(any(e[nvars:]) for e in self.terms):
            raise ValueError("polynomial involves the dropped variables")
        return Poly._raw(nvars, self.p, {e[:nvars]: c for e, c in self.terms.items()})

    def evaluate(self, point: Sequence[int]) -> int:
        p = self.p
        total = 0
        for e, c in self.terms.items():
            v = c
            for x, k in zip(point, e):
                v = v * pow(x, k, p) % p
            total += v
        return total % p

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms, key=_grevlex_key, reverse=True):
            c = self.terms[e]
            mono = "*".join(f"x{i}" + (f"^{k}" if k > 1 else "") for i, k in enumerate(e) if k)
            parts.append(mono if c == 1 and mono else f"{c}*{mono}" if mono else str(c))
        return " + ".join(parts)


# -------------------------------------------------------- Buchberger


def _divides(a: Exponent, b: Exponent) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _lcm(a: Exponent, b: Exponent) -> Exponent:
    return tuple(max(x, y) for x, y in zip(a, b))


def reduce(f: Poly, basis: Sequence[Poly], order: MonomialOrder) -> Poly:
    """Full normal form of f modulo `basis` (any generating list)."""
    p = f.p
    leads = [(g.lead(order), g) for g in basis if g]
    inv = [pow(g.terms[e], -1, p) for e, g in leads]
    rem = dict(f.terms)
    out: dict[Exponent, int] = {}
    key = order.key
    while rem:
        e = max(rem, key=key)
        c = rem[e]
        for (le, g), gi in zip(leads, inv):
            if _divides(le, e):
                q = c * gi % p
                shift = tuple(a - b for a, b in zip(e, le))
                for ge, gc in g.terms.items():
                    t = tuple(a + b for a, b in zip(ge, shift))
                    v = (rem.get(t, 0) - q * gc) % p
                    if v:
                        rem[t] = v
                    else:
                        rem.pop(t, None)
                break
        else:
            out[e] = c
            del rem[e]
    return Poly._raw(f.nvars, p, out)


def s_polynomial(f: Poly, g: Poly, order: MonomialOrder) -> Poly:
    lf, lg = f.lead(order), g.lead(order)
    m = _lcm(lf, lg)
    a = f.scale_shift(pow(f.terms[lf], -1, f.p), tuple(x - y for x, y in zip(m, lf)))
    b = g.scale_shift(pow(g.terms[lg], -1, g.p), tuple(x - y for x, y in zip(m, lg)))
    return a - b


def _interreduce(basis: list[Poly], order: MonomialOrder) -> list[Poly]:
    leads = [g.lead(order) for g in basis]
    keep = []
    for i, g in enumerate(basis):
        li = leads[i]
        if any(
            _divides(leads[j], li) and (leads[j] != li or j < i)
            for j in range(len(basis)) if j != i
        ):
            continue
        keep.append(g)
    out = []
    for i, g in enumerate(keep):
        r = reduce(g, keep[:i] + keep[i + 1:], order)
        out.append(r.monic(order))
    out.sort(key=lambda g: order.key(g.lead(order)), reverse=True)
    return out


def buchberger(gens: Sequence[Poly], order: MonomialOrder) -> list[Poly]:
    """Reduced Gröbner basis, normal selection strategy with Buchberger's
    coprime and chain criteria."""
    basis = [g.monic(order) for g in gens if g]
    if not basis:
        return []
    if any(sum(g.lead(order)) == 0 for g in basis):
        return [Poly.constant(1, basis[0].nvars, basis[0].p)]
    leads = [g.lead(order) for g in basis]
    pairs = {(i, j) for j in range(len(basis)) for i in range(j)}
    while pairs:
        i, j = min(pairs, key=lambda ij: (order.key(_lcm(leads[ij[0]], leads[ij[1]])), ij))
        pairs.discard((i, j))
        li, lj = leads[i], leads[j]
        m = _lcm(li, lj)
        if all(a == 0 or b == 0 for a, b in zip(li, lj)):
            continue
        if any(
            k != i and k != j and _divides(leads[k], m)
            and (min(i, k), max(i, k)) not in pairs and (min(j, k), max(j, k)) not in pairs
            for k in range(len(basis))
        ):
            continue
        h = reduce(s_polynomial(basis[i], basis[j], order), basis, order)
        if not h:
            continue
        h = h.monic(order)
        lh = h.lead(order)
        if sum(lh) == 0:
            return [Poly.constant(1, h.nvars, h.p)]
        k = len(basis)
        basis.append(h)
        leads.append(lh)
        pairs.update((a, k) for a in range(k))
    return _interreduce(basis, order)


# ------------------------------------------------- monomial ideal data


def _minimalize(mons: Iterable[Exponent]) -> tuple[Exponent, ...]:
    ms = sorted(set(mons), key=sum)
    out: list[Exponent] = []
    for m in ms:
        if not any(_divides(g, m) for g in out):
            out.append(m)
    return tuple(sorted(out))


@lru_cache(maxsize=4096)
def _hilbert_numerator(gens: tuple[Exponent, ...], nvars: int) -> tuple[int, ...]:
    """Numerator N(t) of the Hilbert series N(t)/(1-t)^nvars of k[x]/(gens),
    via N(L + (m)) = N(L) - t^deg(m) N(L : m)."""
    if not gens:
        return (1,)
    if len(gens) == 1 or all(
        all(a == 0 or b == 0 for a, b in zip(g, h)) for g, h in itertools.combinations(gens, 2)
    ):
        # pairwise coprime generators: product of (1 - t^deg)
        poly = [1]
        for g in gens:
            d = sum(g)
            nxt = poly + [0] * d
            for k, c in enumerate(poly):
                nxt[k + d] -= c
            poly = nxt
        return tuple(poly)
    *rest, m = gens
    rest = tuple(rest)
    colon = _minimalize(tuple(max(a - b, 0) for a, b in zip(g, m)) for g in rest)
    a = _hilbert_numerator(rest, nvars)
    b = _hilbert_numerator(colon, nvars)
    d = sum(m)
    out = list(a) + [0] * max(0, d + len(b) - len(a))
    for k, c in enumerate(b):
        out[k + d] -= c
    while len(out) > 1 and out[-1] == 0:
        out.pop()
    return tuple(out)


@dataclass(frozen=True)
class HilbertData:
    dim: int
    multiplicity: int
    numerator: tuple[int, ...]


def monomial_hilbert_data(gens: Iterable[Exponent], nvars: int) -> HilbertData:
    """Krull dimension and degree of k[x]/(gens) from its Hilbert series."""
    num = list(_hilbert_numerator(_minimalize(gens), nvars))
    if not any(num):
        raise ValueError("the unit ideal has no Hilbert polynomial")
    k = 0
    # divide by (1 - t) while t = 1 is a root
    while sum(num) == 0:
        q = []
        acc = 0
        for c in num[:-1]:
            acc += c
            q.append(acc)
        num = q
        k += 1
    return HilbertData(nvars - k, sum(num), tuple(num))


# ------------------------------------------------------------ ideals


class PrimeFieldIdeal:
    """Ideal of F_p[x_0..x_{nvars-1}] with a lazily computed Gröbner basis."""

    def __init__(self, generators: Sequence[Poly], nvars: int | None = None,
                 p: int | None = None, order: MonomialOrder | None = None):
        gens = [g for g in generators if g]
        if nvars is None or p is None:
            if not generators:
                raise ValueError("cannot infer the ring of an ideal without generators")
            nvars = generators[0].nvars
            p = generators[0].p
        if any(g.nvars != nvars or g.p != p for g in gens):
            raise ValueError("generators live in different rings")
        self.generators = tuple(gens)
        self.nvars = nvars
        self.p = p
        self.order = order or grevlex()

    @cached_property
    def basis(self) -> list[Poly]:
        return buchberger(self.generators, self.order)

    def is_unit(self) -> bool:
        b = self.basis
        return len(b) == 1 and sum(b[0].lead(self.order)) == 0

    def is_zero(self) -> bool:
        return not self.generators

    def contains(self, f: Poly) -> bool:
        return not reduce(f, self.basis, self.order)

    def lead_monomials(self) -> tuple[Exponent, ...]:
        return _minimalize(g.lead(self.order) for g in self.basis)

    def with_order(self, order: MonomialOrder) -> "PrimeFieldIdeal":
        return PrimeFieldIdeal(self.generators, self.nvars, self.p, order)

    def __repr__(self) -> str:
        return f"PrimeFieldIdeal({list(self.generators)}, p={self.p})"


def _eliminate(gens: Sequence[Poly], nvars: int, p: int) -> PrimeFieldIdeal:
    """Intersection of (gens) in nvars+1 variables with the ring of the
    first nvars variables."""
    order = elimination((nvars,))
    gb = buchberger(gens, order)
    kept = [g.restrict(nvars) for g in gb if all(e[nvars] == 0 for e in g.terms)]
    return PrimeFieldIdeal(kept, nvars, p)


def saturate(ideal: PrimeFieldIdeal, f: Poly) -> PrimeFieldIdeal:
    """I : f^inf, by eliminating w from I + (w f - 1)."""
    if not f:
        raise ValueError("cannot saturate by the zero polynomial")
    n, p = ideal.nvars, ideal.p
    w = Poly.var(n, n + 1, p)
    gens = [g.extend() for g in ideal.generators]
    gens.append(w * f.extend() - Poly.constant(1, n + 1, p))
    return _eliminate(gens, n, p)


def intersect(a: PrimeFieldIdeal, b: PrimeFieldIdeal) -> PrimeFieldIdeal:
    """a ∩ b by eliminating t from t a + (1 - t) b."""
    n, p = a.nvars, a.p
    t = Poly.var(n, n + 1, p)
    one_minus_t = Poly.constant(1, n + 1, p) - t
    gens = [t * g.extend() for g in a.generators] + [one_minus_t * g.extend() for g in b.generators]
    return _eliminate(gens, n, p)


def krull_dim(ideal: PrimeFieldIdeal) -> int | None:
    """dim A/I from maximal independent sets of the lead-term ideal;
    None for the unit ideal."""
    if ideal.is_unit():
        return None
    leads = ideal.lead_monomials()
    supports = [frozenset(i for i, x in enumerate(m) if x) for m in leads]
    n = ideal.nvars
    for size in range(n, -1, -1):
        for s in itertools.combinations(range(n), size):
            ss = set(s)
            if not any(sup <= ss for sup in supports):
                return size
    return 0


def graded_multiplicity(ideal: PrimeFieldIdeal) -> int:
    """Degree e(m, A/I) of a homogeneous ideal, from the Hilbert series of
    its grevlex lead-term ideal."""
    if any(not g.is_homogeneous() for g in ideal.generators):
        raise ValueError("graded multiplicity needs a homogeneous ideal")
    if ideal.is_unit():
        raise ValueError("the unit ideal has no multiplicity")
    return monomial_hilbert_data(ideal.lead_monomials(), ideal.nvars).multiplicity


def quotient_dimension(ideal: PrimeFieldIdeal) -> int:
    """dim_k A/I for a zero-dimensional ideal (count of standard monomials)."""
    if ideal.is_unit():
        return 0
    leads = ideal.lead_monomials()
    data = monomial_hilbert_data(leads, ideal.nvars)
    if data.dim != 0:
        raise ValueError(f"A/I has dimension {data.dim}, not a finite-dimensional quotient")
    # for a finite quotient the reduced series is the Hilbert function itself
    return data.multiplicity


# ------------------------------------------------- general elements


def general_element(m: MonomialSet, seed: int | random.Random, p: int = DEFAULT_PRIME) -> tuple[Poly, tuple[int, ...]]:
    """Random F_p combination of the monomials of m with nonzero
    coefficients; returns the polynomial and the coefficients used (in the
    order of m.sorted())."""
    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    mons = m.sorted()
    coeffs = tuple(rng.randint(1, p - 1) for _ in mons)
    return Poly(m.num_vars, p, dict(zip(mons, coeffs))), coeffs


@dataclass
class DrawnElement:
    source: int
    coefficients: tuple[int, ...]
    poly: Poly


@dataclass
class GeneralElementChoice:
    seed: int
    counts: tuple[int, ...]
    drawn: list[DrawnElement] = field(default_factory=list)

    def polys(self) -> list[Poly]:
        return [d.poly for d in self.drawn]


def draw_general_elements(sets: Sequence[MonomialSet], counts: Sequence[int], seed: int,
                          p: int = DEFAULT_PRIME) -> GeneralElementChoice:
    """counts[i] general elements from sets[i], one random stream per seed."""
    rng = random.Random(seed)
    choice = GeneralElementChoice(seed, tuple(counts))
    for i, (m, k) in enumerate(zip(sets, counts)):
        for _ in range(k):
            poly, coeffs = general_element(m, rng, p)
            choice.drawn.append(DrawnElement(i, coeffs, poly))
    return choice


# ------------------------------------------------ Samuel route


def _radical_supports(sets: Sequence[MonomialSet]) -> list[frozenset[int]]:
    """Minimal supports of the monomials of J = J_1 ... J_s; their variable
    products generate the radical of J."""
    # a monomial of the product has support = union of one support per factor
    per = [{frozenset(i for i, x in enumerate(e) if x) for e in m.exponents} for m in sets]
    acc = {frozenset()}
    for sups in per:
        acc = {a | b for a in acc for b in sups}
        acc = {s for s in acc if not any(t < s for t in acc)}
    return sorted(acc, key=lambda s: (len(s), sorted(s)))


def saturate_by_monomial_ideal(q: PrimeFieldIdeal, sets: Sequence[MonomialSet]) -> PrimeFieldIdeal:
    """Q : J^inf for J = J_1 ... J_s generated by monomials.

    Q : J^inf only depends on the radical of J, which is generated by the
    squarefree monomials x_T over the minimal supports T; and
    Q : (a + b)^inf = (Q : a^inf) ∩ (Q : b^inf).
    """
    n, p = q.nvars, q.p
    parts = []
    for t in _radical_supports(sets):
        if not t:
            return q
        f = Poly.monomial(tuple(int(i in t) for i in range(n)), p)
        parts.append(saturate(q, f) if q.generators else q)
    out = parts[0]
    for part in parts[1:]:
        out = intersect(out, part)
    return PrimeFieldIdeal(out.generators, n, p)


@dataclass
class SamuelResult:
    dim: int | None
    value: int
    positive: bool
    seed: int
    reseeded: bool = False
    first_attempt: tuple | None = None
    choice: GeneralElementChoice | None = None


def _samuel_once(config: MonomialConfiguration, alpha: tuple[int, ...], seed: int, p: int) -> SamuelResult:
    js = config.sets[1:]
    choice = draw_general_elements(js, alpha[1:], seed, p)
    q = PrimeFieldIdeal(choice.polys(), config.num_vars, p)
    sat = saturate_by_monomial_ideal(q, js) if js else q
    dim = krull_dim(sat)
    positive = dim == alpha[0] + 1
    value = graded_multiplicity(sat) if positive else 0
    return SamuelResult(dim, value, positive, seed, choice=choice)


def samuel_mixed_multiplicity(config: MonomialConfiguration, alpha: Sequence[int], seed: int = 0,
                              p: int = DEFAULT_PRIME, reseed: bool = True) -> SamuelResult:
    """e_alpha(m | J_1..J_s) as e(m, A/(Q : J^inf)), Q generated by alpha_i
    general elements of each J_i.

    The value is 0 exactly when dim A/(Q : J^inf) != alpha_0 + 1.  A
    negative verdict is retried once with a fresh seed, since an unlucky
    draw can only make Q less generic.
    """
    alpha = tuple(int(a) for a in alpha)
    r = config.degree_of_hilbert_polynomial
    if len(alpha) != config.s + 1 or sum(alpha) != r or min(alpha) < 0:
        raise ValueError(f"alpha must have {config.s + 1} non-negative entries summing to {r}")
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    res = _samuel_once(config, alpha, seed, p)
    if res.positive or not reseed:
        return res
    again = _samuel_once(config, alpha, seed + 1, p)
    again.reseeded = True
    again.first_attempt = (res.dim, res.value, res.seed)
    return again


@dataclass
class TeissierResult:
    lhs: int
    rhs: int
    seed: int
    choice: GeneralElementChoice


def teissier_check(config: MonomialConfiguration, alpha: Sequence[int], seed: int = 0,
                   p: int = DEFAULT_PRIME, base: int | None = None) -> TeissierResult:
    """e_alpha(m | J) by finite differences next to dim_k A/P, where P is
    generated by alpha_0 + 1 general linear forms and alpha_i general
    elements of J_i."""
    alpha = tuple(int(a) for a in alpha)
    for i, m in enumerate(config.sets[1:], start=1):
        if not m.is_m_primary():
            raise ValueError(f"J_{i} is not m-primary: it lacks a pure power of some variable")
    r = config.degree_of_hilbert_polynomial
    if len(alpha) != config.s + 1 or sum(alpha) != r or min(alpha) < 0:
        raise ValueError(f"alpha must have {config.s + 1} non-negative entries summing to {r}")
    lhs = mixed_multiplicity_fd(config, alpha, base)
    counts = (alpha[0] + 1,) + alpha[1:]
    choice = draw_general_elements(config.sets, counts, seed, p)
    ideal = PrimeFieldIdeal(choice.polys(), config.num_vars, p)
    rhs = quotient_dimension(ideal)
    return TeissierResult(lhs, rhs, seed, choice)
