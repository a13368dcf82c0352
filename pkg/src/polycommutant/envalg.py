"""Enveloping algebra U(g): PBW normal forms, commutators, symmetrization.

A word is a tuple of basis indices; it is in normal form when
non-decreasing in the basis order of the LieAlgebraSpec.  Multiplication appends one
letter at a time using ``w y x = w x y + w [y, x]`` for ``y > x``; the
per-(word, letter) results are memoized on the algebra, which only speeds
things up and never changes the normal form.
"""

from __future__ import annotations

import itertools
import random
from fractions import Fraction
from math import factorial
from typing import Callable, Iterator, Mapping, Sequence

from .liealg import LieAlgebraSpec
from .symalg import CommPoly, format_coefficient_term, parse_terms, symmetric_ring

Word = tuple[int, ...]


class ArityError(ValueError):
    pass


def _add_into(acc: dict[Word, Fraction], terms: Mapping[Word, Fraction], scale: Fraction | int = 1) -> None:
    for w, c in terms.items():
        v = acc.get(w, 0) + c * scale
        if v:
            acc[w] = v
        else:
            acc.pop(w, None)


def _append_table(spec: LieAlgebraSpec) -> dict:
    table = spec._cache.get("pbw_append")
    if table is None:
        table = spec._cache["pbw_append"] = {}
    return table


def append_letter(spec: LieAlgebraSpec, word: Word, x: int) -> dict[Word, Fraction]:
    """Normal form of ``word * x`` for a normal ``word``."""
    if not word or word[-1] <= x:
        return {word + (x,): Fraction(1)}
    table = _append_table(spec)
    key = (word, x)
    hit = table.get(key)
    if hit is not None:
        return hit
    y = word[-1]
    prefix = word[:-1]
    out: dict[Word, Fraction] = {}
    # prefix y x = (prefix x) y + prefix [y, x]
    for w, c in append_letter(spec, prefix, x).items():
        _add_into(out, append_letter(spec, w, y), c)
    for k, c in spec.bracket_indices(y, x):
        _add_into(out, append_letter(spec, prefix, k), c)
    table[key] = out
    return out


def normal_word_product(spec: LieAlgebraSpec, u: Word, v: Word) -> dict[Word, Fraction]:
    """Normal form of ``u * v`` for normal words u, v."""
    if not v:
        return {u: Fraction(1)}
    if not u or u[-1] <= v[0]:
        return {u + v: Fraction(1)}
    table = spec._cache.setdefault("pbw_product", {})
    key = (u, v)
    hit = table.get(key)
    if hit is not None:
        return hit
    cur: dict[Word, Fraction] = {u: Fraction(1)}
    for x in v:
        nxt: dict[Word, Fraction] = {}
        for w, c in cur.items():
            _add_into(nxt, append_letter(spec, w, x), c)
        cur = nxt
    table[key] = cur
    return cur


def normalize_word(spec: LieAlgebraSpec, word: Sequence[int]) -> dict[Word, Fraction]:
    """Normal form of an arbitrary word (letter-by-letter insertion)."""
    cur: dict[Word, Fraction] = {(): Fraction(1)}
    for x in word:
        nxt: dict[Word, Fraction] = {}
        for w, c in cur.items():
            _add_into(nxt, append_letter(spec, w, x), c)
        cur = nxt
    return cur


def rewrite_word(spec: LieAlgebraSpec, word: Sequence[int],
                 choose: Callable[[list[int]], int] | None = None) -> dict[Word, Fraction]:
    """Normal form by plain adjacent-swap rewriting, without memoization.

    ``choose`` picks which out-of-order position to rewrite among the
    candidates; the default takes the leftmost.  Used to check that the
    result does not depend on the reduction order.
    """
    pick = choose or (lambda cands: cands[0])
    todo: dict[Word, Fraction] = {tuple(word): Fraction(1)}
    done: dict[Word, Fraction] = {}
    while todo:
        w, c = todo.popitem()
        cands = [i for i in range(len(w) - 1) if w[i] > w[i + 1]]
        if not cands:
            _add_into(done, {w: c})
            continue
        i = pick(cands)
        a, b = w[i], w[i + 1]
        swapped = w[:i] + (b, a) + w[i + 2:]
        _add_into(todo, {swapped: c})
        for k, v in spec.bracket_indices(a, b):
            _add_into(todo, {w[:i] + (k,) + w[i + 2:]: c * v})
    return done


def random_rewrite(spec: LieAlgebraSpec, word: Sequence[int], rng: random.Random) -> dict[Word, Fraction]:
    return rewrite_word(spec, word, choose=lambda cands: rng.choice(cands))


class NCPoly:
    """Element of U(g) stored in PBW normal form ``{word: Fraction}``."""

    __slots__ = ("spec", "terms")

    def __init__(self, spec: LieAlgebraSpec, terms: Mapping[Word, Fraction] | None = None, normal: bool = True):
        self.spec = spec
        if normal:
            self.terms = {tuple(w): Fraction(c) for w, c in (terms or {}).items() if c}
        else:
            acc: dict[Word, Fraction] = {}
            for w, c in (terms or {}).items():
                if c:
                    _add_into(acc, normalize_word(spec, w), Fraction(c))
            self.terms = acc

    @classmethod
    def gen(cls, spec: LieAlgebraSpec, label: str) -> "NCPoly":
        return cls(spec, {(spec.index[label],): Fraction(1)})

    @classmethod
    def const(cls, spec: LieAlgebraSpec, c: Fraction | int) -> "NCPoly":
        return cls(spec, {(): Fraction(c)})

    @classmethod
    def word(cls, spec: LieAlgebraSpec, labels: Sequence[str], coef: Fraction | int = 1) -> "NCPoly":
        """Product of generators in the given order, normalized."""
        return cls(spec, {tuple(spec.index[l] for l in labels): Fraction(coef)}, normal=False)

    @classmethod
    def parse(cls, spec: LieAlgebraSpec, text: str) -> "NCPoly":
        """Parse ``E12*E21 - 1/2*H1``; factors keep their written order."""
        lookup = dict(spec.index)
        for lab, disp in spec.operator_labels.items():
            lookup[disp] = spec.index[lab]
        acc: dict[Word, Fraction] = {}
        for coef, factors in parse_terms(text):
            w: list[int] = []
            for name, k in factors:
                if name not in lookup:
                    raise KeyError(f"unknown generator {name!r}")
                if k < 0:
                    raise ValueError("negative powers are not allowed in U(g)")
                w.extend([lookup[name]] * k)
            _add_into(acc, normalize_word(spec, w), coef)
        return cls(spec, acc)

    def _check(self, other: "NCPoly") -> None:
        if other.spec is not self.spec:
            raise ValueError("elements of different enveloping algebras")

    def __add__(self, other) -> "NCPoly":
        if isinstance(other, (int, Fraction)):
            other = NCPoly.const(self.spec, other)
        self._check(other)
        acc = dict(self.terms)
        _add_into(acc, other.terms)
        return NCPoly(self.spec, acc)

    __radd__ = __add__

    def __neg__(self) -> "NCPoly":
        return NCPoly(self.spec, {w: -c for w, c in self.terms.items()})

    def __sub__(self, other) -> "NCPoly":
        if isinstance(other, (int, Fraction)):
            other = NCPoly.const(self.spec, other)
        return self + (-other)

    def __rsub__(self, other) -> "NCPoly":
        return (-self) + other

    def __mul__(self, other) -> "NCPoly":
        if isinstance(other, (int, Fraction)):
            return NCPoly(self.spec, {w: c * other for w, c in self.terms.items()})
        return nc_multiply(self, other, self.spec)

    def __rmul__(self, other) -> "NCPoly":
        if isinstance(other, (int, Fraction)):
            return self * other
        return NotImplemented

    def __truediv__(self, other: Fraction | int) -> "NCPoly":
        return self * (Fraction(1) / Fraction(other))

    def __pow__(self, k: int) -> "NCPoly":
        out = NCPoly.const(self.spec, 1)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = NCPoly.const(self.spec, other)
        if not isinstance(other, NCPoly):
            return NotImplemented
        return self.spec is other.spec and self.terms == other.terms

    __hash__ = None  # type: ignore[assignment]

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def degree(self) -> int:
        return max((len(w) for w in self.terms), default=-1)

    def homogeneous(self, d: int) -> "NCPoly":
        return NCPoly(self.spec, {w: c for w, c in self.terms.items() if len(w) == d})

    def sorted_terms(self) -> list[tuple[Word, Fraction]]:
        return sorted(self.terms.items(), key=lambda t: (-len(t[0]), t[0]))

    def __iter__(self) -> Iterator[tuple[Word, Fraction]]:
        return iter(self.sorted_terms())

    def word_text(self, w: Word) -> str:
        return "*".join(self.spec.op_label(self.spec.basis[i]) for i in w)

    def to_text(self) -> str:
        return format_coefficient_term([(c, self.word_text(w)) for w, c in self.sorted_terms()])

    def __str__(self) -> str:
        return self.to_text()

    def __repr__(self) -> str:
        return f"NCPoly({self.to_text()!r})"

    def symbol(self, d: int | None = None) -> CommPoly:
        """Image of the degree-``d`` part (default: top degree) in S(g)."""
        if d is None:
            d = self.degree()
        ring = symmetric_ring(self.spec)
        out: dict[tuple[int, ...], Fraction] = {}
        for w, c in self.terms.items():
            if len(w) != d:
                continue
            e = [0] * ring.nvars
            for i in w:
                e[i] += 1
            key = tuple(e)
            out[key] = out.get(key, 0) + c
        return CommPoly(ring, out)


def nc_multiply(a: NCPoly, b: NCPoly, spec: LieAlgebraSpec | None = None) -> NCPoly:
    spec = spec or a.spec
    a._check(b)
    acc: dict[Word, Fraction] = {}
    for u, cu in a.terms.items():
        for v, cv in b.terms.items():
            _add_into(acc, normal_word_product(spec, u, v), cu * cv)
    return NCPoly(spec, acc)


def nc_commutator(a: NCPoly, b: NCPoly, spec: LieAlgebraSpec | None = None) -> NCPoly:
    return nc_multiply(a, b, spec) - nc_multiply(b, a, spec)


def _distinct_orderings(word: Sequence[int]) -> list[tuple[int, ...]]:
    return sorted(set(itertools.permutations(word)))


def symmetrize_monomial(spec: LieAlgebraSpec, letters: Sequence[int]) -> dict[Word, Fraction]:
    """Average of all orderings of the product; equal to (1/p!) sum over permutations."""
    table = spec._cache.setdefault("sym_monomial", {})
    key = tuple(sorted(letters))
    hit = table.get(key)
    if hit is not None:
        return hit
    orders = _distinct_orderings(key)
    acc: dict[Word, Fraction] = {}
    weight = Fraction(1, len(orders))
    for w in orders:
        _add_into(acc, normalize_word(spec, w), weight)
    table[key] = acc
    return acc


def symmetrize(m: CommPoly, spec: LieAlgebraSpec) -> NCPoly:
    """Symmetrization (Weyl ordering) S(g) -> U(g), extended linearly."""
    idx = spec.index
    pos = [idx[name] if name in idx else None for name in m.ring.names]
    acc: dict[Word, Fraction] = {}
    for e, c in m.terms.items():
        letters: list[int] = []
        for i, k in enumerate(e):
            if k:
                if pos[i] is None:
                    raise KeyError(f"{m.ring.names[i]} is not a basis label")
                letters.extend([pos[i]] * k)
        _add_into(acc, symmetrize_monomial(spec, letters), c)
    return NCPoly(spec, acc)


def sym_product(factors: Sequence[NCPoly]) -> NCPoly:
    """Average of the products of ``factors`` over all orderings."""
    if not factors:
        raise ArityError("sym_product needs at least one factor")
    spec = factors[0].spec
    n = len(factors)
    acc = NCPoly(spec)
    for perm in itertools.permutations(range(n)):
        prod = factors[perm[0]]
        for k in perm[1:]:
            prod = prod * factors[k]
        acc = acc + prod
    return acc / factorial(n)
