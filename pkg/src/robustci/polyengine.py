"""Sparse multivariate polynomials over the rationals, with Buchberger completion.

Variables are arbitrary mutually comparable hashable objects (the ideal module
uses (row, column) named tuples).  The monomial order is the pure
lexicographic extension of the variable order, larger variables dominating.
Pure lex doubles as an elimination order: a sentinel variable that compares
above everything else is eliminated by keeping the sentinel-free part of a
Groebner basis, which is how ideal intersections are computed here.

This is a desk-scale oracle: correctness over speed, hard caps instead of
clever strategies.
"""

from __future__ import annotations

import heapq
from collections import Counter
from fractions import Fraction
from typing import NamedTuple

from .errors import InputError, ResourceLimitError

# Sentinel elimination variable; compares above every (row, column) unknown.
ELIM_VARIABLE = (float("inf"),)


class Monomial:
    """Product of variables with positive exponents.

    Stored as (variable, exponent) pairs with the largest variable first, so
    the pure-lex comparison is a single merged scan.
    """

    __slots__ = ("items",)

    def __init__(self, items=()):
        merged = {}
        for var, exp in items:
            exp = int(exp)
            if exp < 0:
                raise InputError(f"negative exponent on {var!r}")
            if exp:
                merged[var] = merged.get(var, 0) + exp
        self.items = tuple(sorted(merged.items(), key=lambda p: p[0], reverse=True))

    @staticmethod
    def of(var, exp: int = 1) -> "Monomial":
        return Monomial(((var, exp),))

    def __hash__(self):
        return hash(self.items)

    def __eq__(self, other):
        return self.items == other.items

    def _cmp(self, other) -> int:
        a, b = self.items, other.items
        i = j = 0
        while i < len(a) and j < len(b):
            va, ea = a[i]
            vb, eb = b[j]
            if va == vb:
                if ea != eb:
                    return 1 if ea > eb else -1
                i += 1
                j += 1
            elif va > vb:
                return 1
            else:
                return -1
        if i < len(a):
            return 1
        if j < len(b):
            return -1
        return 0

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    @property
    def degree(self) -> int:
        return sum(e for _, e in self.items)

    def variables(self) -> tuple:
        return tuple(v for v, _ in self.items)

    def exponent(self, var) -> int:
        for v, e in self.items:
            if v == var:
                return e
        return 0

    def __mul__(self, other):
        return Monomial(self.items + other.items)

    def divides(self, other) -> bool:
        exps = dict(other.items)
        return all(e <= exps.get(v, 0) for v, e in self.items)

    def __truediv__(self, other):
        exps = dict(self.items)
        for v, e in other.items:
            have = exps.get(v, 0)
            if have < e:
                raise InputError(f"{other!r} does not divide {self!r}")
            exps[v] = have - e
        return Monomial(exps.items())

    def lcm(self, other):
        exps = dict(self.items)
        for v, e in other.items:
            exps[v] = max(exps.get(v, 0), e)
        return Monomial(exps.items())

    def shares_variable(self, other) -> bool:
        mine = {v for v, _ in self.items}
        return any(v in mine for v, _ in other.items)

    def is_squarefree(self) -> bool:
        return all(e == 1 for _, e in self.items)

    def __repr__(self):
        if not self.items:
            return "1"
        return "*".join(f"{v}^{e}" if e > 1 else f"{v}" for v, e in self.items)


MONOMIAL_ONE = Monomial(())


class Polynomial:
    """Map from monomials to nonzero rational coefficients."""

    __slots__ = ("terms", "_lead")

    def __init__(self, terms=None):
        clean = {}
        for m, c in (terms or {}).items():
            c = Fraction(c)
            if c:
                clean[m] = c
        self.terms = clean
        self._lead = None

    @staticmethod
    def zero() -> "Polynomial":
        return Polynomial()

    @staticmethod
    def variable(var) -> "Polynomial":
        return Polynomial({Monomial.of(var): Fraction(1)})

    @staticmethod
    def constant(c) -> "Polynomial":
        return Polynomial({MONOMIAL_ONE: Fraction(c)})

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        return isinstance(other, Polynomial) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __add__(self, other):
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = out.get(m, Fraction(0)) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return self._wrap(out)

    def __sub__(self, other):
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = out.get(m, Fraction(0)) - c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return self._wrap(out)

    def __neg__(self):
        return self._wrap({m: -c for m, c in self.terms.items()})

    def term_mul(self, coeff, mono: Monomial) -> "Polynomial":
        coeff = Fraction(coeff)
        if not coeff:
            return Polynomial()
        return self._wrap({m * mono: c * coeff for m, c in self.terms.items()})

    def __mul__(self, other):
        out = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = m1 * m2
                s = out.get(m, Fraction(0)) + c1 * c2
                if s:
                    out[m] = s
                else:
                    out.pop(m, None)
        return self._wrap(out)

    @staticmethod
    def _wrap(clean_terms) -> "Polynomial":
        poly = Polynomial.__new__(Polynomial)
        poly.terms = clean_terms
        poly._lead = None
        return poly

    def leading_monomial(self) -> Monomial:
        if not self.terms:
            raise InputError("zero polynomial has no leading monomial")
        if self._lead is None:
            self._lead = max(self.terms)
        return self._lead

    def leading_coeff(self) -> Fraction:
        return self.terms[self.leading_monomial()]

    def monic(self) -> "Polynomial":
        if not self.terms:
            return self
        lc = self.leading_coeff()
        if lc == 1:
            return self
        return self._wrap({m: c / lc for m, c in self.terms.items()})

    def sorted_terms(self) -> list:
        return sorted(self.terms.items(), key=lambda t: t[0], reverse=True)

    def uses_variable(self, var) -> bool:
        return any(m.exponent(var) for m in self.terms)

    def num_terms(self) -> int:
        return len(self.terms)

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for m, c in self.sorted_terms():
            parts.append(f"{c}*{m!r}" if m.items else f"{c}")
        return " + ".join(parts)


def reduce(f: Polynomial, basis) -> Polynomial:
    """Full normal form of f modulo the basis (multivariate division remainder).

    No term of the result is divisible by any basis leading monomial, and
    f minus the result lies in the ideal generated by the basis.  The division
    scans basis elements in the given order, so the result is deterministic.
    """
    divisors = [(g.leading_monomial(), g) for g in basis if g]
    remainder = {}
    p = f
    while p:
        lm = p.leading_monomial()
        lc = p.leading_coeff()
        for glm, g in divisors:
            if glm.divides(lm):
                p = p - g.term_mul(lc / g.leading_coeff(), lm / glm)
                break
        else:
            remainder[lm] = lc
            p = p - Polynomial._wrap({lm: lc})
    return Polynomial._wrap(remainder)


def s_polynomial(f: Polynomial, g: Polynomial) -> Polynomial:
    """Cancel the leading terms of f and g against their lcm."""
    if not f or not g:
        raise InputError("S-polynomial of a zero polynomial")
    lcm_m = f.leading_monomial().lcm(g.leading_monomial())
    tf = f.term_mul(Fraction(1) / f.leading_coeff(), lcm_m / f.leading_monomial())
    tg = g.term_mul(Fraction(1) / g.leading_coeff(), lcm_m / g.leading_monomial())
    return tf - tg


def interreduce(polys) -> list:
    """Turn a Groebner basis into the reduced Groebner basis for the order."""
    basis = sorted({g.monic() for g in polys if g}, key=lambda p: p.leading_monomial())
    # drop elements whose leading monomial another element's leading monomial divides
    minimal = []
    for i, g in enumerate(basis):
        lm = g.leading_monomial()
        if any(
            h.leading_monomial().divides(lm)
            for j, h in enumerate(basis)
            if j != i and (h.leading_monomial() != lm or j < i)
        ):
            continue
        minimal.append(g)
    while True:
        reduced = []
        for i, g in enumerate(minimal):
            others = minimal[:i] + minimal[i + 1:]
            r = reduce(g, others)
            if r:
                reduced.append(r.monic())
        reduced.sort(key=lambda p: p.leading_monomial())
        if reduced == minimal:
            return reduced
        minimal = reduced


def buchberger(gens, *, max_pairs: int = 50_000, max_terms: int = 10_000, trace=None) -> list:
    """The reduced Groebner basis of the ideal generated by ``gens``.

    S-pairs are processed lowest lcm degree first with ties broken by the
    monomial order, so runs are reproducible.  Pairs with coprime leading
    monomials are skipped (their S-polynomials always reduce to zero).  When
    ``trace`` is a list, every nonzero S-pair remainder is appended to it.
    """
    basis = []
    seen = set()
    for g in gens:
        if g:
            g = g.monic()
            if g not in seen:
                seen.add(g)
                basis.append(g)
    heap = []

    def push_pairs(k):
        lk = basis[k].leading_monomial()
        for i in range(k):
            lcm_m = basis[i].leading_monomial().lcm(lk)
            heapq.heappush(heap, (lcm_m.degree, lcm_m, i, k))

    for k in range(len(basis)):
        push_pairs(k)
    processed = 0
    while heap:
        _, _, i, j = heapq.heappop(heap)
        processed += 1
        if processed > max_pairs:
            raise ResourceLimitError(
                f"S-pair cap {max_pairs} exceeded with basis size {len(basis)}"
            )
        fi, fj = basis[i], basis[j]
        if not fi.leading_monomial().shares_variable(fj.leading_monomial()):
            continue
        r = reduce(s_polynomial(fi, fj), basis)
        if r:
            if trace is not None:
                trace.append(r)
            if r.num_terms() > max_terms:
                raise ResourceLimitError(
                    f"polynomial support cap {max_terms} exceeded ({r.num_terms()} terms)"
                )
            basis.append(r.monic())
            push_pairs(len(basis) - 1)
    return interreduce(basis)


def buchberger_criterion(basis) -> bool:
    """Whether every S-pair of the basis reduces to zero modulo the basis."""
    basis = [g for g in basis if g]
    for i in range(len(basis)):
        for j in range(i + 1, len(basis)):
            if reduce(s_polynomial(basis[i], basis[j]), basis):
                return False
    return True


def ideal_membership(f: Polynomial, gb, verify: bool = False) -> bool:
    """Whether f reduces to zero modulo a Groebner basis.

    The caller is responsible for ``gb`` being a Groebner basis; pass
    ``verify=True`` to have that contract checked (and violated contracts
    raise InputError).
    """
    if verify and not buchberger_criterion(gb):
        raise InputError("basis does not satisfy the Buchberger criterion")
    return not reduce(f, gb)


class Bidegree(NamedTuple):
    """Row- and column-degree vectors of a monomial, as sorted item tuples."""

    rows: tuple
    cols: tuple


def bidegree(m: Monomial) -> Bidegree:
    """Degrees of a monomial in the row and column gradings.

    Every variable must be a (row, column) pair; each occurrence contributes
    its exponent to both its row and its column count.
    """
    rows = Counter()
    cols = Counter()
    for var, e in m.items:
        if not (isinstance(var, tuple) and len(var) == 2):
            raise InputError(f"variable {var!r} carries no (row, column) bidegree")
        rows[var[0]] += e
        cols[var[1]] += e
    return Bidegree(tuple(sorted(rows.items())), tuple(sorted(cols.items())))


def is_bihomogeneous(poly: Polynomial) -> bool:
    """Whether all terms of the polynomial share one bidegree."""
    degrees = {bidegree(m) for m in poly.terms}
    return len(degrees) <= 1


def elimination_intersection(gens_a, gens_b, *, max_pairs: int = 50_000, max_terms: int = 10_000) -> list:
    """Generators of the intersection of two ideals, via a fresh sentinel variable.

    Computes a Groebner basis of t*A + (1-t)*B and keeps the t-free part,
    which is the reduced Groebner basis of the intersection.
    """
    t = Polynomial.variable(ELIM_VARIABLE)
    one_minus_t = Polynomial.constant(1) - t
    mixed = [t * f for f in gens_a if f] + [one_minus_t * g for g in gens_b if g]
    gb = buchberger(mixed, max_pairs=max_pairs, max_terms=max_terms)
    return [g for g in gb if not g.uses_variable(ELIM_VARIABLE)]


def intersect_ideals(gens_list, *, max_pairs: int = 50_000, max_terms: int = 10_000) -> list:
    """Reduced Groebner basis of the intersection of finitely many ideals."""
    gens_list = list(gens_list)
    if not gens_list:
        raise InputError("need at least one ideal to intersect")
    acc = buchberger(gens_list[0], max_pairs=max_pairs, max_terms=max_terms)
    for gens in gens_list[1:]:
        acc = elimination_intersection(acc, gens, max_pairs=max_pairs, max_terms=max_terms)
    return acc
