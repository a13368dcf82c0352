"""Centralizers of a subalgebra in S(g) and U(g), graded by degree.

For the Cartan subalgebra ad(h) is diagonal on monomials, so the degree-d
slice of the commutant is spanned by the weight-zero monomials.  The
general route builds the matrix of ``f -> {x, f}`` on all degree-d
monomials and takes its exact kernel; both must agree for Cartan input.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Sequence, Union

from .envalg import NCPoly
from .liealg import LieAlgebraSpec
from .linalg import InconsistentSystem, RowSpace, nullspace, solve
from .symalg import CommPoly, Ring, berezin_bracket, monomial_key, symmetric_ring

Poly = Union[CommPoly, NCPoly]


class UnsupportedInput(ValueError):
    pass


class Inexpressible(ValueError):
    """The element is not in the span of generator products searched."""


@dataclass
class GradedBasis:
    degree: int
    elements: list[Poly]

    @property
    def dimension(self) -> int:
        return len(self.elements)


@dataclass
class GeneratorSet:
    names: list[str]
    elements: dict[str, Poly]
    degrees: dict[str, int]
    relations: list[CommPoly] = field(default_factory=list)
    _products: dict = field(default_factory=dict, repr=False)

    @property
    def symbol_ring(self) -> Ring:
        ring = self._products.get("ring")
        if ring is None:
            ring = self._products["ring"] = Ring(tuple(self.names))
        return ring

    def symbol(self, name: str) -> CommPoly:
        return self.symbol_ring.var(name)

    def weighted_degree(self, e: Sequence[int]) -> int:
        return sum(k * self.degrees[n] for k, n in zip(e, self.names))

    def product(self, e: tuple[int, ...]) -> Poly:
        """Expanded generator product; factors in declared generator order."""
        hit = self._products.get(e)
        if hit is not None:
            return hit
        if not any(e):
            first = self.elements[self.names[0]]
            if isinstance(first, NCPoly):
                out = NCPoly.const(first.spec, 1)
            else:
                out = first.ring.one()
        else:
            # peel the last (most significant) factor so that order stays declared
            last = max(i for i, k in enumerate(e) if k)
            rest = list(e)
            rest[last] -= 1
            out = self.product(tuple(rest)) * self.elements[self.names[last]]
        self._products[e] = out
        return out

    def monomials(self, wdeg: int) -> Iterator[tuple[int, ...]]:
        """Exponent vectors of weighted degree exactly ``wdeg``."""
        degs = [self.degrees[n] for n in self.names]

        def rec(i: int, left: int) -> Iterator[list[int]]:
            if i == len(degs):
                if left == 0:
                    yield []
                return
            for k in range(left // degs[i] + 1):
                for tail in rec(i + 1, left - k * degs[i]):
                    yield [k] + tail

        yield from sorted((tuple(v) for v in rec(0, wdeg)), key=lambda e: e[::-1])

    def evaluate(self, f: CommPoly) -> Poly:
        """Substitute generator values into a polynomial in generator symbols."""
        f = f.to_ring(self.symbol_ring) if f.ring != self.symbol_ring else f
        out = None
        for e, c in f.terms.items():
            term = self.product(e) * c
            out = term if out is None else out + term
        if out is None:
            return self.product((0,) * len(self.names)) * 0
        return out

    def lead(self, rel: CommPoly) -> tuple[int, ...]:
        """Greatest monomial by (weighted degree, last symbol most significant)."""
        return max(rel.terms, key=lambda e: (self.weighted_degree(e), e[::-1]))

    def excluded_leads(self) -> list[tuple[int, ...]]:
        return [self.lead(r) for r in self.relations]

    def to_dict(self) -> dict:
        return {
            "generators": [{"name": n, "degree": self.degrees[n], "value": self.elements[n].to_text()}
                           for n in self.names],
            "relations": [r.to_text() for r in self.relations],
        }


def _coords(p: Poly) -> dict:
    return p.terms


def all_monomials(ring: Ring, degree: int) -> list[tuple[int, ...]]:
    out = []
    for combo in itertools.combinations_with_replacement(range(ring.nvars), degree):
        e = [0] * ring.nvars
        for i in combo:
            e[i] += 1
        out.append(tuple(e))
    return sorted(out, key=monomial_key, reverse=True)


def weight_zero_basis(spec: LieAlgebraSpec, degree: int) -> GradedBasis:
    """Weight-zero monomials of the given degree in S(g)."""
    if degree < 1:
        raise ValueError("degree must be >= 1")
    ring = symmetric_ring(spec)
    weights = [spec.weights[b] for b in spec.basis]
    rank = len(spec.cartan)
    elems = []
    for e in all_monomials(ring, degree):
        total = [0] * rank
        for i, k in enumerate(e):
            if k:
                for r in range(rank):
                    total[r] += k * weights[i][r]
        if not any(total):
            elems.append(CommPoly(ring, {e: Fraction(1)}))
    return GradedBasis(degree, elems)


def cartan_elements(spec: LieAlgebraSpec) -> list[CommPoly]:
    ring = symmetric_ring(spec)
    return [sum((ring.var(lab) * c for lab, c in form), ring.zero()) for _, form in spec.cartan]


def kernel_centralizer(spec: LieAlgebraSpec, subalgebra: Sequence[CommPoly], degree: int) -> GradedBasis:
    """Joint kernel of {x, .} on degree-d polynomials, x ranging over ``subalgebra``."""
    ring = symmetric_ring(spec)
    subs = []
    for x in subalgebra:
        x = x.to_ring(ring) if x.ring != ring else x
        if x and (x.degree() != 1 or not x.is_homogeneous()):
            raise UnsupportedInput("subalgebra elements must be linear")
        subs.append(x)
    monos = all_monomials(ring, degree)
    rows: dict[tuple[int, tuple[int, ...]], dict[int, Fraction]] = {}
    for col, e in enumerate(monos):
        m = CommPoly(ring, {e: Fraction(1)})
        for xi, x in enumerate(subs):
            for oe, c in berezin_bracket(x, m, spec).terms.items():
                rows.setdefault((xi, oe), {})[col] = c
    kernel = nullspace(rows.values(), len(monos))
    elems = [CommPoly(ring, {monos[j]: c for j, c in v.items()}) for v in kernel]
    return GradedBasis(degree, elems)


def _cycle_name(spec: LieAlgebraSpec, poly: CommPoly) -> str | None:
    """p<i1><i2>... when the monomial is e_{i1 i2} e_{i2 i3} ... e_{id i1}."""
    if len(poly.terms) != 1:
        return None
    (e, c), = poly.terms.items()
    if c != 1:
        return None
    edges: dict[int, int] = {}
    for i, k in enumerate(e):
        if not k:
            continue
        m = re.fullmatch(r"e(\d)(\d)", spec.basis[i])
        if not m or k != 1:
            return None
        a, b = int(m.group(1)), int(m.group(2))
        if a == b or a in edges:
            return None
        edges[a] = b
    if len(edges) < 2:
        return None
    start = min(edges)
    cycle = [start]
    cur = edges[start]
    while cur != start:
        if cur not in edges or cur in cycle:
            return None
        cycle.append(cur)
        cur = edges[cur]
    if len(cycle) != len(edges):
        return None
    return "p" + "".join(str(i) for i in cycle)


def _name_for(spec: LieAlgebraSpec, poly: CommPoly, degree: int, k: int) -> str:
    if len(poly.terms) == 1:
        (e, c), = poly.terms.items()
        if sum(e) == 1 and c == 1:
            return spec.basis[e.index(1)]
    return _cycle_name(spec, poly) or f"q{degree}_{k}"


def _natural(label: str):
    return [int(t) if t.isdigit() else t for t in re.split(r"(\d+)", label)]


def extract_generators(spec: LieAlgebraSpec, max_degree: int,
                       subalgebra: Sequence[CommPoly] | None = None) -> GeneratorSet:
    """Minimal generating set of the commutant up to ``max_degree``.

    ``subalgebra=None`` means the Cartan subalgebra (weight shortcut);
    otherwise the generic kernel method is used.
    """
    if max_degree < 1:
        raise ValueError("max_degree must be >= 1")
    gens = GeneratorSet([], {}, {})
    for d in range(1, max_degree + 1):
        if subalgebra is None:
            slice_ = weight_zero_basis(spec, d)
        else:
            slice_ = kernel_centralizer(spec, subalgebra, d)
        space = RowSpace()
        coords: dict = {}

        def vec(p: CommPoly) -> dict[int, Fraction]:
            return {coords.setdefault(e, len(coords)): c for e, c in p.terms.items()}

        if gens.names:
            probe = GeneratorSet(list(gens.names), dict(gens.elements), dict(gens.degrees))
            for e in probe.monomials(d):
                space.add(vec(probe.product(e)))
        fresh = []
        for elem in slice_.elements:
            if space.add(vec(elem)):
                fresh.append(elem)
        named = sorted(((_name_for(spec, p, d, k), p) for k, p in enumerate(fresh)),
                       key=lambda t: _natural(t[0]))
        for name, p in named:
            gens.names.append(name)
            gens.elements[name] = p
            gens.degrees[name] = d
    gens._products.clear()
    return gens


@dataclass
class RelationSearch:
    relations: list[CommPoly]
    kernel_dims: dict[int, int]
    monomial_counts: dict[int, int]


def search_relations(gens: GeneratorSet, degree_bound: int) -> RelationSearch:
    """Minimal relations among generator products, by weighted degree."""
    if degree_bound < 1:
        raise ValueError("degree_bound must be >= 1")
    ring = gens.symbol_ring
    found: list[CommPoly] = []
    kernel_dims = {}
    counts = {}
    for d in range(1, degree_bound + 1):
        monos = list(gens.monomials(d))
        counts[d] = len(monos)
        coords: dict = {}
        rows: dict = {}
        for j, e in enumerate(monos):
            for key, c in _coords(gens.product(e)).items():
                rows.setdefault(coords.setdefault(key, len(coords)), {})[j] = c
        # columns are listed ascending, so null vectors lead on the greatest monomial
        kernel = nullspace(rows.values(), len(monos))
        kernel_dims[d] = len(kernel)
        if not kernel:
            continue
        col = {e: j for j, e in enumerate(monos)}
        known = RowSpace()
        for r in found:
            rd = gens.weighted_degree(gens.lead(r))
            for e in gens.monomials(d - rd):
                shifted = r * CommPoly(ring, {e: Fraction(1)})
                known.add({col[k]: c for k, c in shifted.terms.items()})
        for v in sorted(kernel, key=lambda v: -max(v)):
            if known.add(v):
                rel = CommPoly(ring, {monos[j]: c for j, c in v.items()})
                found.append(_primitive_poly(rel, rel.terms[gens.lead(rel)]))
    return RelationSearch(found, kernel_dims, counts)


def _primitive_poly(p: CommPoly, lead: Fraction) -> CommPoly:
    from math import gcd, lcm

    den = lcm(*(c.denominator for c in p.terms.values()))
    nums = [int(c * den) for c in p.terms.values()]
    g = 0
    for x in nums:
        g = gcd(g, x)
    scale = Fraction(den, g) * (1 if lead > 0 else -1)
    return p * scale


def find_relations(gens: GeneratorSet, degree_bound: int) -> list[CommPoly]:
    return search_relations(gens, degree_bound).relations


def _weight_of(spec: LieAlgebraSpec, f: Poly) -> set[tuple[int, ...]]:
    rank = len(spec.cartan)
    weights = [spec.weights[b] for b in spec.basis]
    out = set()
    if isinstance(f, NCPoly):
        for w in f.terms:
            tot = [0] * rank
            for i in w:
                for r in range(rank):
                    tot[r] += weights[i][r]
            out.add(tuple(tot))
    else:
        for e in f.terms:
            tot = [0] * rank
            for i, k in enumerate(e):
                for r in range(rank):
                    tot[r] += k * weights[i][r]
            out.add(tuple(tot))
    return out


def express_in_generators(f: Poly, gens: GeneratorSet, spec: LieAlgebraSpec | None = None) -> CommPoly:
    """Coefficients of ``f`` over generator products, as a polynomial in generator symbols.

    Products divisible by the leading monomial of a known relation are
    skipped, which makes the expansion unique when the relations are the
    only dependencies.
    """
    ring = gens.symbol_ring
    if not f:
        return ring.zero()
    if spec is not None:
        zero = (0,) * len(spec.cartan)
        if _weight_of(spec, f) - {zero}:
            raise ValueError("element is not weight-zero")
    top = f.degree()
    leads = gens.excluded_leads()
    cands = []
    for d in range(0, top + 1):
        for e in gens.monomials(d):
            if any(all(a <= b for a, b in zip(lead, e)) for lead in leads):
                continue
            cands.append(e)
    columns = [_coords(gens.product(e)) for e in cands]
    try:
        x = solve(columns, _coords(f))
    except InconsistentSystem:
        raise Inexpressible(f"not expressible over generator products up to degree {top}") from None
    return CommPoly(ring, {cands[j]: c for j, c in x.items()})


def quantum_generators(gens: GeneratorSet, spec: LieAlgebraSpec) -> GeneratorSet:
    """Symmetrized images of a classical generator set (relations carried over)."""
    from .envalg import symmetrize

    return GeneratorSet(list(gens.names), {n: symmetrize(p, spec) for n, p in gens.elements.items()},
                        dict(gens.degrees), list(gens.relations))


def dimension_table(spec: LieAlgebraSpec, max_degree: int) -> dict[int, int]:
    return {d: weight_zero_basis(spec, d).dimension for d in range(1, max_degree + 1)}


def commutes_with_cartan(spec: LieAlgebraSpec, f: Poly) -> bool:
    if isinstance(f, NCPoly):
        from .envalg import nc_commutator

        for name, form in spec.cartan:
            h = sum((NCPoly.gen(spec, lab) * c for lab, c in form), NCPoly(spec))
            if nc_commutator(h, f):
                return False
        return True
    return all(not berezin_bracket(h, f, spec) for h in cartan_elements(spec))


def relation_holds(gens: GeneratorSet, rel: CommPoly) -> bool:
    return not gens.evaluate(rel)
