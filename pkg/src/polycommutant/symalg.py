"""Sparse commutative polynomials with exact rational coefficients.

Covers the symmetric algebra S(g) with its Berezin bracket and the
canonical phase-space ring (s_k Laurent, p_k, central a_k) with the
canonical Poisson bracket and reduction modulo the sphere constraints.

Monomial order everywhere: degree first, then lexicographic with the
*last* ring variable most significant.  Text output lists terms from the
largest monomial down.
"""

from __future__ import annotations

import heapq
import re
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Iterator, Mapping, Sequence

from .liealg import LieAlgebraSpec

Exponent = tuple[int, ...]


class UnboundSymbol(KeyError):
    pass


class RingMismatch(ValueError):
    pass


class ParseError(ValueError):
    pass


def _natural_key(label: str):
    return [int(t) if t.isdigit() else t for t in re.split(r"(\d+)", label)]


@dataclass(frozen=True)
class Ring:
    """Ordered variable table; names in ``laurent`` may carry negative exponents."""

    names: tuple[str, ...]
    laurent: frozenset[str] = frozenset()

    def __post_init__(self) -> None:
        if len(set(self.names)) != len(self.names):
            raise ValueError("duplicate variable names")

    @property
    def nvars(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise UnboundSymbol(name) from None

    def var(self, name: str) -> "CommPoly":
        e = [0] * self.nvars
        e[self.index(name)] = 1
        return CommPoly(self, {tuple(e): Fraction(1)})

    def gens(self) -> list["CommPoly"]:
        return [self.var(n) for n in self.names]

    def const(self, c: Fraction | int) -> "CommPoly":
        return CommPoly(self, {(0,) * self.nvars: Fraction(c)} if c else {})

    def zero(self) -> "CommPoly":
        return CommPoly(self, {})

    def one(self) -> "CommPoly":
        return self.const(1)

    def monomial(self, exps: Mapping[str, int], coef: Fraction | int = 1) -> "CommPoly":
        e = [0] * self.nvars
        for n, k in exps.items():
            e[self.index(n)] += k
        return CommPoly(self, {tuple(e): Fraction(coef)})

    def parse(self, text: str) -> "CommPoly":
        out = self.zero()
        for coef, factors in parse_terms(text):
            exps: dict[str, int] = {}
            for name, k in factors:
                exps[name] = exps.get(name, 0) + k
            out = out + self.monomial(exps, coef)
        return out

    def extend(self, extra: Sequence[str], laurent: Iterable[str] = (), front: bool = False) -> "Ring":
        names = tuple(extra) + self.names if front else self.names + tuple(extra)
        return Ring(names, self.laurent | frozenset(laurent))


def monomial_key(e: Exponent) -> tuple[int, Exponent]:
    return (sum(e), e[::-1])


def symmetric_ring(spec: LieAlgebraSpec) -> Ring:
    """Polynomial ring on the basis labels of ``spec`` (the symmetric algebra)."""
    ring = spec._cache.get("symmetric_ring")
    if ring is None:
        ring = Ring(spec.basis)
        spec._cache["symmetric_ring"] = ring
    return ring


def phase_space_ring(n: int, extra: Sequence[str] = ()) -> Ring:
    """Variables ``extra..., a1..an, s1..sn, p1..pn``; the s_k are Laurent.

    With the last variable most significant, p_n > s_n > ... so the sphere
    constraints lead with s_n^2 and s_n*p_n.
    """
    names = (tuple(extra) + tuple(f"a{k}" for k in range(1, n + 1))
             + tuple(f"s{k}" for k in range(1, n + 1)) + tuple(f"p{k}" for k in range(1, n + 1)))
    return Ring(names, frozenset(f"s{k}" for k in range(1, n + 1)))


class CommPoly:
    """Immutable sparse polynomial ``{exponent vector: Fraction}``."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring: Ring, terms: Mapping[Exponent, Fraction] | None = None, _trusted: bool = False):
        self.ring = ring
        if _trusted:
            self.terms = terms
        else:
            clean = {}
            for e, c in (terms or {}).items():
                if c:
                    clean[tuple(e)] = Fraction(c)
            self.terms = clean
            bad = [i for i, n in enumerate(ring.names) if n not in ring.laurent]
            for e in clean:
                for i in bad:
                    if e[i] < 0:
                        raise ValueError(f"negative exponent on non-Laurent variable {ring.names[i]}")

    # -- arithmetic -------------------------------------------------------
    def _coerce(self, other) -> "CommPoly":
        if isinstance(other, CommPoly):
            if other.ring != self.ring:
                raise RingMismatch("polynomials live in different rings")
            return other
        if isinstance(other, (int, Fraction)):
            return self.ring.const(other)
        return NotImplemented

    def __add__(self, other) -> "CommPoly":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = out.get(e, 0) + c
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return CommPoly(self.ring, out, _trusted=True)

    __radd__ = __add__

    def __neg__(self) -> "CommPoly":
        return CommPoly(self.ring, {e: -c for e, c in self.terms.items()}, _trusted=True)

    def __sub__(self, other) -> "CommPoly":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other) -> "CommPoly":
        return (-self) + other

    def __mul__(self, other) -> "CommPoly":
        if isinstance(other, (int, Fraction)):
            if not other:
                return self.ring.zero()
            return CommPoly(self.ring, {e: c * other for e, c in self.terms.items()}, _trusted=True)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out: dict[Exponent, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return CommPoly(self.ring, {e: c for e, c in out.items() if c}, _trusted=True)

    __rmul__ = __mul__

    def __truediv__(self, other: Fraction | int) -> "CommPoly":
        return self * (Fraction(1) / Fraction(other))

    def __pow__(self, k: int) -> "CommPoly":
        if k < 0:
            if len(self.terms) != 1:
                raise ValueError("only monomials can be inverted")
            (e, c), = self.terms.items()
            return CommPoly(self.ring, {tuple(x * k for x in e): c ** k})
        out = self.ring.one()
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = self.ring.const(other)
        if not isinstance(other, CommPoly):
            return NotImplemented
        return self.ring == other.ring and self.terms == other.terms

    __hash__ = None  # type: ignore[assignment]

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self) -> Iterator[tuple[Exponent, Fraction]]:
        return iter(self.sorted_terms())

    # -- structure --------------------------------------------------------
    def sorted_terms(self) -> list[tuple[Exponent, Fraction]]:
        return sorted(self.terms.items(), key=lambda t: monomial_key(t[0]), reverse=True)

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def homogeneous(self, d: int) -> "CommPoly":
        return CommPoly(self.ring, {e: c for e, c in self.terms.items() if sum(e) == d}, _trusted=True)

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self.terms}) <= 1

    def leading(self) -> tuple[Exponent, Fraction]:
        e = max(self.terms, key=monomial_key)
        return e, self.terms[e]

    def variables(self) -> set[str]:
        used = set()
        for e in self.terms:
            for i, k in enumerate(e):
                if k:
                    used.add(self.ring.names[i])
        return used

    def diff(self, name: str) -> "CommPoly":
        i = self.ring.index(name)
        return self._diff_index(i)

    def _diff_index(self, i: int) -> "CommPoly":
        out = {}
        for e, c in self.terms.items():
            k = e[i]
            if k:
                ne = list(e)
                ne[i] = k - 1
                out[tuple(ne)] = c * k
        return CommPoly(self.ring, out, _trusted=True)

    def substitute(self, values: Mapping[str, "CommPoly"], target: Ring | None = None) -> "CommPoly":
        """Replace variables by polynomials (all in ``target``); others are carried over by name."""
        if target is None:
            target = next(iter(values.values())).ring if values else self.ring
        cache: dict[tuple[int, int], CommPoly] = {}
        out = target.zero()
        for e, c in self.terms.items():
            term = target.const(c)
            for i, k in enumerate(e):
                if not k:
                    continue
                name = self.ring.names[i]
                key = (i, k)
                if key not in cache:
                    base = values[name] if name in values else target.var(name)
                    cache[key] = base ** k
                term = term * cache[key]
            out = out + term
        return out

    def to_ring(self, ring: Ring) -> "CommPoly":
        """Re-express in a ring containing every variable used here."""
        if ring == self.ring:
            return self
        pos = []
        for i, n in enumerate(self.ring.names):
            pos.append(ring.index(n) if n in ring.names else None)
        out = {}
        for e, c in self.terms.items():
            ne = [0] * ring.nvars
            for i, k in enumerate(e):
                if k:
                    if pos[i] is None:
                        raise UnboundSymbol(self.ring.names[i])
                    ne[pos[i]] = k
            out[tuple(ne)] = c
        return CommPoly(ring, out)

    # -- text ------------------------------------------------------------
    def monomial_text(self, e: Exponent) -> str:
        parts = []
        for i, k in enumerate(e):
            if k:
                name = self.ring.names[i]
                parts.append((name, name if k == 1 else f"{name}^{k}"))
        parts.sort(key=lambda p: _natural_key(p[0]))
        return "*".join(p[1] for p in parts)

    def to_text(self) -> str:
        return format_coefficient_term([(c, self.monomial_text(e)) for e, c in self.sorted_terms()])

    def __str__(self) -> str:
        return self.to_text()

    def __repr__(self) -> str:
        return f"CommPoly({self.to_text()!r})"


def format_coefficient(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def format_coefficient_term(items: Sequence[tuple[Fraction, str]]) -> str:
    """Join ``(coefficient, monomial text)`` pairs as ``2*x*y - 1/2*z + 3``."""
    if not items:
        return "0"
    chunks = []
    for n, (c, mono) in enumerate(items):
        c = Fraction(c)
        neg = c < 0
        a = -c if neg else c
        if not mono:
            body = format_coefficient(a)
        elif a == 1:
            body = mono
        else:
            body = f"{format_coefficient(a)}*{mono}"
        if n == 0:
            chunks.append(f"-{body}" if neg else body)
        else:
            chunks.append(f"- {body}" if neg else f"+ {body}")
    return " ".join(chunks)


_TERM_SPLIT = re.compile(r"\s*([+-])\s*")
_FACTOR = re.compile(r"^([A-Za-z_][\w]*)(?:\^(-?\d+))?$")
_NUMBER = re.compile(r"^\d+(?:/\d+)?$")


def parse_terms(text: str) -> list[tuple[Fraction, list[tuple[str, int]]]]:
    """Parse ``2*x*y^2 - 1/2*z + 3`` into ``[(coef, [(name, exp), ...]), ...]``.

    Factor order is preserved, so the same parser serves noncommutative
    words.  Exponents may be negative (``s1^-2``).
    """
    s = text.strip()
    if not s:
        raise ParseError("empty polynomial text")
    if s == "0":
        return []
    # split on +/- that are not part of an exponent
    pieces: list[tuple[int, str]] = []
    sign = 1
    buf = ""
    for ch in s:
        if ch in "+-" and not buf.rstrip().endswith("^"):
            if buf.strip():
                pieces.append((sign, buf.strip()))
                buf = ""
                sign = 1
            if ch == "-":
                sign = -sign
        else:
            buf += ch
    if not buf.strip():
        raise ParseError(f"dangling operator in {text!r}")
    pieces.append((sign, buf.strip()))
    out = []
    for sgn, body in pieces:
        coef = Fraction(sgn)
        factors: list[tuple[str, int]] = []
        for tok in body.replace(" ", "").split("*"):
            if not tok:
                raise ParseError(f"empty factor in {text!r}")
            if _NUMBER.match(tok):
                coef *= Fraction(tok)
                continue
            m = _FACTOR.match(tok)
            if not m:
                raise ParseError(f"bad factor {tok!r} in {text!r}")
            factors.append((m.group(1), int(m.group(2)) if m.group(2) else 1))
        out.append((coef, factors))
    return out


# -- brackets ---------------------------------------------------------------

def _in_symmetric_ring(f: CommPoly, spec: LieAlgebraSpec) -> CommPoly:
    ring = symmetric_ring(spec)
    if f.ring == ring:
        return f
    for name in f.variables():
        if name not in spec.index:
            raise UnboundSymbol(name)
    return f.to_ring(ring)


def berezin_bracket(f: CommPoly, g: CommPoly, spec: LieAlgebraSpec) -> CommPoly:
    """{f, g} = sum C_ij^k x_k (df/dx_i)(dg/dx_j) on S(g)."""
    f = _in_symmetric_ring(f, spec)
    g = _in_symmetric_ring(g, spec)
    ring = f.ring
    dim = ring.nvars
    df = {}
    dg = {}
    for i in range(dim):
        d = f._diff_index(i)
        if d:
            df[i] = d
        d = g._diff_index(i)
        if d:
            dg[i] = d
    out = ring.zero()
    basis_vars = spec._cache.get("_basis_vars")
    if basis_vars is None:
        basis_vars = ring.gens()
        spec._cache["_basis_vars"] = basis_vars
    for i, fi in df.items():
        for j, gj in dg.items():
            terms = spec.bracket_indices(i, j)
            if not terms:
                continue
            lin = ring.zero()
            for k, c in terms:
                lin = lin + basis_vars[k] * c
            out = out + lin * fi * gj
    return out


def _canonical_pairs(ring: Ring) -> list[tuple[int, int]]:
    pairs = []
    for i, name in enumerate(ring.names):
        m = re.fullmatch(r"s(\d+)", name)
        if m and f"p{m.group(1)}" in ring.names:
            pairs.append((i, ring.index(f"p{m.group(1)}")))
    return pairs


def canonical_bracket(f: CommPoly, g: CommPoly) -> CommPoly:
    """{f, g} = sum_k (df/ds_k dg/dp_k - df/dp_k dg/ds_k)."""
    if f.ring != g.ring:
        raise RingMismatch("polynomials live in different rings")
    out = f.ring.zero()
    for si, pi in _canonical_pairs(f.ring):
        fs, fp = f._diff_index(si), f._diff_index(pi)
        gs, gp = g._diff_index(si), g._diff_index(pi)
        if fs and gp:
            out = out + fs * gp
        if fp and gs:
            out = out - fp * gs
    return out


# -- constraint ideal -------------------------------------------------------

def _divides(a: Exponent, b: Exponent) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _lcm(a: Exponent, b: Exponent) -> Exponent:
    return tuple(max(x, y) for x, y in zip(a, b))


def _heap_key(e: Exponent) -> tuple:
    d, rev = monomial_key(e)
    return (-d, tuple(-x for x in rev))


def normal_form(f: CommPoly, basis: Sequence[CommPoly]) -> CommPoly:
    """Multivariate division remainder of ``f`` by ``basis`` (monic leading terms)."""
    leads = [(g.leading()[0], g) for g in basis]
    work = dict(f.terms)
    heap = [(_heap_key(e), e) for e in work]
    heapq.heapify(heap)
    rem: dict[Exponent, Fraction] = {}
    while heap:
        _, e = heapq.heappop(heap)
        c = work.pop(e, None)
        if not c:
            continue
        for lt, g in leads:
            if _divides(lt, e):
                shift = tuple(x - y for x, y in zip(e, lt))
                lc = g.terms[lt]
                q = c / lc
                for ge, gc in g.terms.items():
                    if ge == lt:
                        continue
                    ne = tuple(x + y for x, y in zip(ge, shift))
                    old = work.get(ne)
                    v = (old or 0) - q * gc
                    if v:
                        if old is None:
                            heapq.heappush(heap, (_heap_key(ne), ne))
                        work[ne] = v
                    else:
                        work.pop(ne, None)
                break
        else:
            rem[e] = c
    return CommPoly(f.ring, rem, _trusted=True)


def _monic(g: CommPoly) -> CommPoly:
    return g / g.leading()[1]


def groebner_basis(gens: Sequence[CommPoly]) -> list[CommPoly]:
    """Reduced Groebner basis by plain Buchberger completion."""
    basis = [_monic(g) for g in gens if g]
    pairs = list(combinations(range(len(basis)), 2))
    while pairs:
        i, j = pairs.pop(0)
        a, b = basis[i], basis[j]
        la, lb = a.leading()[0], b.leading()[0]
        if all(x == 0 or y == 0 for x, y in zip(la, lb)):
            continue  # coprime leading monomials: S-pair reduces to zero
        m = _lcm(la, lb)
        ring = a.ring
        sa = CommPoly(ring, {tuple(x - y for x, y in zip(m, la)): Fraction(1)})
        sb = CommPoly(ring, {tuple(x - y for x, y in zip(m, lb)): Fraction(1)})
        s = normal_form(sa * a - sb * b, basis)
        if s:
            basis.append(_monic(s))
            pairs.extend((k, len(basis) - 1) for k in range(len(basis) - 1))
    # minimize then inter-reduce
    minimal = []
    for k, g in enumerate(basis):
        lg = g.leading()[0]
        if any(_divides(h.leading()[0], lg) and (h.leading()[0] != lg or n < k)
               for n, h in enumerate(basis) if n != k):
            continue
        minimal.append(g)
    reduced = []
    for k, g in enumerate(minimal):
        others = [h for n, h in enumerate(minimal) if n != k]
        lt, lc = g.leading()
        tail = normal_form(g - CommPoly(g.ring, {lt: lc}), others)
        reduced.append(_monic(CommPoly(g.ring, {lt: lc}) + tail))
    return sorted(reduced, key=lambda g: monomial_key(g.leading()[0]))


class ConstraintIdeal:
    """Ideal with a precomputed reduced Groebner basis; zero tests allow Laurent input."""

    def __init__(self, generators: Sequence[CommPoly]):
        if not generators:
            raise ValueError("need at least one generator")
        for g in generators:
            if any(x < 0 for e in g.terms for x in e):
                raise ValueError("ideal generators must be polynomial")
        self.ring = generators[0].ring
        self.generators = list(generators)
        self.basis = groebner_basis(self.generators)

    @classmethod
    def sphere(cls, ring: Ring, n: int) -> "ConstraintIdeal":
        """Generated by sum s_k^2 - 1 and sum s_k p_k."""
        s = [ring.var(f"s{k}") for k in range(1, n + 1)]
        p = [ring.var(f"p{k}") for k in range(1, n + 1)]
        g1 = sum((x * x for x in s), ring.zero()) - 1
        g2 = sum((x * y for x, y in zip(s, p)), ring.zero())
        return cls([g1, g2])

    def reduce(self, f: CommPoly) -> CommPoly:
        return reduce_mod_constraints(f, self)

    def contains(self, f: CommPoly) -> bool:
        return not self.reduce(f)


def clear_denominators(f: CommPoly) -> CommPoly:
    """Multiply by the smallest monomial making every exponent non-negative."""
    if not f.terms:
        return f
    lows = [min(0, min(e[i] for e in f.terms)) for i in range(f.ring.nvars)]
    if not any(lows):
        return f
    return CommPoly(f.ring, {tuple(x - l for x, l in zip(e, lows)): c for e, c in f.terms.items()},
                    _trusted=True)


def reduce_mod_constraints(f: CommPoly, ideal: ConstraintIdeal) -> CommPoly:
    """Normal form of D*f modulo the ideal, D the denominator-clearing monomial.

    Zero iff f vanishes on the constraint variety (monomials in s are units
    there), so the result is meant for zero tests and residual display.
    """
    if f.ring != ideal.ring:
        f = f.to_ring(ideal.ring)
    return normal_form(clear_denominators(f), ideal.basis)
