"""The polynomial algebra A3 from the Cartan commutant of sl(3), classical and quantum.

Classical generators live in S(sl(3)):

    c_i   = (2 h1 + h2)/3 - (h1 + ... + h_{i-1})
    c_ij  = p_{i,j}               = e_ij e_ji
    f_ijk = (p_{i,k,j} - p_{i,j,k})/2
    g_ijk = (p_{i,k,j} + p_{i,j,k})/2,   p_{i,j,k} = e_ij e_jk e_ki

Quantum generators are their symmetrizations in U(sl(3)).  Relation
families are written as templates in the index placeholders ``{i}``,
``{j}``, ``{k}`` and instantiated for every permutation of (1, 2, 3).
Quantum corrections are derived by the engine; the printed corrections
are only compared against.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from . import reps
from .commutant import GeneratorSet, express_in_generators, find_relations
from .envalg import NCPoly, nc_commutator, sym_product, symmetrize
from .liealg import LieAlgebraSpec, make_sl
from .report import FAILED, VERIFIED, RelationReport, status_for
from .symalg import CommPoly, Ring, berezin_bracket, parse_terms, symmetric_ring

# generator symbols, in the order used for products and canonical output
GENERATORS = ("c1", "c2", "c12", "c13", "c23", "f123", "g123")
DEGREES = {"c1": 1, "c2": 1, "c12": 2, "c13": 2, "c23": 2, "f123": 3, "g123": 3}
RECIPE_RING = Ring(("c1", "c2", "c3", "c12", "c13", "c23", "f123", "g123"))

PERMUTATIONS = tuple(itertools.permutations((1, 2, 3)))

# (id, left, right, principal part); {x, y} = principal in the classical algebra
FAMILIES = (
    ("E1", "c{i}{j}", "c{j}{k}", "2*f{i}{j}{k}"),
    ("E2", "c{j}{k}", "f{i}{j}{k}",
     "c{j}{k}*c{i}{k} - c{j}{k}*c{i}{j} + c{j}*g{i}{j}{k} - c{k}*g{i}{j}{k}"),
    ("E3", "c{j}{k}", "g{i}{j}{k}", "c{j}*f{i}{j}{k} - c{k}*f{i}{j}{k}"),
    ("E4", "f{i}{j}{k}", "g{i}{j}{k}",
     "1/2*c{i}*c{i}{j}*c{j}{k} - 1/2*c{k}*c{i}{j}*c{j}{k}"
     " + 1/2*c{k}*c{k}{i}*c{i}{j} - 1/2*c{j}*c{k}{i}*c{i}{j}"
     " + 1/2*c{j}*c{j}{k}*c{k}{i} - 1/2*c{i}*c{j}{k}*c{k}{i}"),
)

# corrections as printed next to each quantum family
PAPER_CORRECTIONS = {
    "E1": "0",
    "E2": "1/2*c{j}^2 - 1/12*c{k}^2 - 1/6*c{i}*c{j} + 1/6*c{i}*c{k}",
    "E3": "0",
    "E4": ("1/8*c{i}^2*c{j} - 1/8*c{i}^2*c{k} - 1/8*c{j}^2*c{i}"
           " + 1/8*c{j}^2*c{k} + 1/8*c{k}^2*c{i} - 1/8*c{k}^2*c{j}"),
}

CONSTRAINT_PRINCIPAL = "g{i}{j}{k}*g{k}{j}{i} + f{i}{j}{k}*f{k}{j}{i} - c{i}{j}*c{j}{k}*c{k}{i}"

# lower-order terms of the printed quantum constraint, read verbatim; the
# printed "c c_{ik}" is read as c_{ik} and the three repeated c_ij c_i c_j
# terms are kept as printed
PAPER_CONSTRAINT_TERMS = (
    "1/6*c{i}^2 + 1/6*c{i}*c{j} - 1/6*c{j}^2 - 1/4*c{i}{j}^2 + 1/6*c{i}{j}*c{i}{k}"
    " - 1/4*c{i}{k}^2 + 1/6*c{i}{k}*c{j}{k} - 1/4*c{j}{k}^2"
    " + 1/2*c{i}{j}*c{i}*c{j} + 5/4*c{i}{j}*c{i}*c{j} + 1/2*c{i}{j}*c{i}*c{j}"
    " - 1/4*c{i}{k}*c{i}^2 - 1/4*c{i}{k}*c{i}*c{j} + 1/2*c{i}{k}*c{j}^2"
    " + 1/2*c{j}{k}*c{i}^2 - 1/4*c{j}{k}*c{i}*c{j} - 1/4*c{j}{k}*c{j}^2 + 1/6*f{i}{j}{k}"
)
# same list with the three repeated c_ij c_i c_j terms read as c_ij c_i^2, c_ij c_i c_j, c_ij c_j^2
PAPER_CONSTRAINT_AMENDED = PAPER_CONSTRAINT_TERMS.replace(
    " + 1/2*c{i}{j}*c{i}*c{j} + 5/4*c{i}{j}*c{i}*c{j} + 1/2*c{i}{j}*c{i}*c{j}",
    " + 1/2*c{i}{j}*c{i}^2 + 5/4*c{i}{j}*c{i}*c{j} + 1/2*c{i}{j}*c{j}^2")
PAPER_CONSTRAINT_FLAGS = (
    "printed 'c c_{ik}^2' read as c_{ik}^2",
    "c_{ij} c_i c_j printed three times (1/2, 5/4, 1/2); kept verbatim",
)

# explicit PBW forms as printed (operator labels of sl(3))
PAPER_FORMS = {
    "c12": "E12*E21 - 1/2*H1",
    "c23": "E23*E32 - 1/2*H2",
    "c13": "E13*E31 - 1/2*H1 - 1/2*H2",
    "f123": "1/2*E13*E31 - 1/2*E12*E23*E31 + 1/2*E13*E21*E23",
    "f132": "1/2*E13*E31 - 1/2*E12*E23*E31 - 1/2*E13*E21*E23",
    "g123": "1/6*H1 - 1/6*H2 - 1/2*E12*E21 + E23*E32 + 1/2*E12*E23*E31 + 1/2*E13*E21*E32",
    "g132": "1/6*H1 - 1/6*H2 - 1/2*E12*E21 + E23*E32 + 1/2*E12*E23*E31 + 1/2*E13*E21*E32",
}


def fill(template: str, i: int, j: int, k: int) -> str:
    return template.format(i=i, j=j, k=k)


def _perm_sign(idx: Sequence[int]) -> int:
    sign = 1
    idx = list(idx)
    for a in range(len(idx)):
        for b in range(a + 1, len(idx)):
            if idx[a] > idx[b]:
                sign = -sign
    return sign


def resolve(name: str) -> tuple[int, str]:
    """Canonical symbol for an indexed generator name, with its sign.

    ``c21 -> (1, c12)``, ``f213 -> (-1, f123)``, ``g321 -> (1, g123)``.
    """
    m = re.fullmatch(r"([cfg])(\d+)", name)
    if not m:
        raise KeyError(name)
    kind, digits = m.group(1), [int(ch) for ch in m.group(2)]
    if len(set(digits)) != len(digits):
        raise KeyError(f"repeated index in {name}")
    if kind == "c" and len(digits) in (1, 2):
        return 1, "c" + "".join(map(str, sorted(digits)))
    if kind in "fg" and len(digits) == 3:
        sign = _perm_sign(digits) if kind == "f" else 1
        return sign, kind + "123"
    raise KeyError(name)


def recipe_poly(text: str) -> CommPoly:
    """Template text (already filled) as a polynomial in canonical symbols."""
    out = RECIPE_RING.zero()
    for coef, factors in parse_terms(text):
        term = RECIPE_RING.const(coef)
        for name, k in factors:
            sign, sym = resolve(name)
            term = term * (RECIPE_RING.var(sym) * sign) ** k
        out = out + term
    return out


def _factor_list(factors: Sequence[tuple[str, int]]) -> list[str]:
    out = []
    for name, k in factors:
        out.extend([name] * k)
    return out


@dataclass
class A3Classical:
    spec: LieAlgebraSpec
    _cache: dict = field(default_factory=dict, repr=False)

    @property
    def ring(self) -> Ring:
        return symmetric_ring(self.spec)

    def e(self, i: int, j: int) -> CommPoly:
        return self.ring.var(f"e{i}{j}")

    def p(self, *idx: int) -> CommPoly:
        out = self.ring.one()
        for a, b in zip(idx, idx[1:] + idx[:1]):
            out = out * self.e(a, b)
        return out

    def c(self, i: int) -> CommPoly:
        h1, h2 = self.ring.var("h1"), self.ring.var("h2")
        out = (h1 * 2 + h2) / 3
        for j in range(1, i):
            out = out - self.ring.var(f"h{j}")
        return out

    def cc(self, i: int, j: int) -> CommPoly:
        return self.p(i, j)

    def f(self, i: int, j: int, k: int) -> CommPoly:
        return (self.p(i, k, j) - self.p(i, j, k)) / 2

    def g(self, i: int, j: int, k: int) -> CommPoly:
        return (self.p(i, k, j) + self.p(i, j, k)) / 2

    def element(self, name: str) -> CommPoly:
        """Generator by indexed name, computed from its definition (no sign rules)."""
        hit = self._cache.get(name)
        if hit is not None:
            return hit
        m = re.fullmatch(r"([cfg])(\d+)", name)
        if not m:
            raise KeyError(name)
        kind, idx = m.group(1), tuple(int(ch) for ch in m.group(2))
        if kind == "c" and len(idx) == 1:
            val = self.c(*idx)
        elif kind == "c" and len(idx) == 2:
            val = self.cc(*idx)
        elif kind == "f" and len(idx) == 3:
            val = self.f(*idx)
        elif kind == "g" and len(idx) == 3:
            val = self.g(*idx)
        else:
            raise KeyError(name)
        self._cache[name] = val
        return val

    def evaluate(self, text: str) -> CommPoly:
        out = self.ring.zero()
        for coef, factors in parse_terms(text):
            term = self.ring.const(coef)
            for name in _factor_list(factors):
                term = term * self.element(name)
            out = out + term
        return out

    def generator_set(self) -> GeneratorSet:
        gens = GeneratorSet(list(GENERATORS), {n: self.element(n) for n in GENERATORS}, dict(DEGREES))
        gens.relations = find_relations(gens, 6)
        return gens


def build_classical(spec: LieAlgebraSpec | None = None) -> A3Classical:
    return A3Classical(spec or make_sl(3))


def _bracket_report(rid: str, idx: tuple[int, ...], lhs: CommPoly, rhs: CommPoly, **extra) -> RelationReport:
    residual = lhs - rhs
    return RelationReport(rid, idx, lhs.to_text(), rhs.to_text(), residual.to_text(),
                          status_for(not residual), extra=dict(extra))


def verify_classical(a: A3Classical) -> list[RelationReport]:
    """Bracket table, centrality of the c_i and the cubic relation, all exactly."""
    spec = a.spec
    reports = []
    names = ["c1", "c2", "c3", "c12", "c13", "c23", "f123", "g123"]
    for ci in ("c1", "c2", "c3"):
        for other in names:
            br = berezin_bracket(a.element(ci), a.element(other), spec)
            reports.append(_bracket_report(f"central:{ci}", (int(ci[1]),), br, a.ring.zero(),
                                           relation=f"{{{ci}, {other}}} = 0"))
    for rid, left, right, principal in FAMILIES:
        for i, j, k in PERMUTATIONS:
            x, y = fill(left, i, j, k), fill(right, i, j, k)
            lhs = berezin_bracket(a.element(x), a.element(y), spec)
            rhs = a.evaluate(fill(principal, i, j, k))
            reports.append(_bracket_report(rid, (i, j, k), lhs, rhs,
                                           relation=f"{{{x}, {y}}} = {recipe_poly(fill(principal, i, j, k))}"))
    alde = a.p(1, 2) * a.p(1, 3) * a.p(2, 3) - a.p(1, 2, 3) * a.p(1, 3, 2)
    reports.append(RelationReport("cubic", (1, 2, 3), "p12*p13*p23 - p123*p132", "0", alde.to_text(),
                                  status_for(not alde)))
    return reports


@dataclass
class A3Quantum:
    classical: A3Classical
    _cache: dict = field(default_factory=dict, repr=False)

    @property
    def spec(self) -> LieAlgebraSpec:
        return self.classical.spec

    def element(self, name: str) -> NCPoly:
        hit = self._cache.get(name)
        if hit is None:
            hit = self._cache[name] = symmetrize(self.classical.element(name), self.spec)
        return hit

    def evaluate(self, text: str, mode: str = "symmetric") -> NCPoly:
        """Evaluate a filled template; monomials are symmetrized or kept in written order."""
        out = NCPoly(self.spec)
        for coef, factors in parse_terms(text):
            vals = [self.element(n) for n in _factor_list(factors)]
            if not vals:
                term = NCPoly.const(self.spec, 1)
            elif mode == "symmetric":
                term = sym_product(vals)
            elif mode == "ordered":
                term = vals[0]
                for v in vals[1:]:
                    term = term * v
            else:
                raise ValueError(mode)
            out = out + term * coef
        return out

    def generator_set(self) -> GeneratorSet:
        key = "_gens"
        gens = self._cache.get(key)
        if gens is None:
            classical = self.classical.generator_set()
            gens = GeneratorSet(list(GENERATORS), {n: self.element(n) for n in GENERATORS},
                                dict(DEGREES), list(classical.relations))
            self._cache[key] = gens
        return gens


def build_quantum(a: A3Classical | None = None) -> A3Quantum:
    return A3Quantum(a or build_classical())


def compare_explicit_forms(q: A3Quantum) -> list[RelationReport]:
    """Engine PBW forms against the printed ones (both normalized in the same order)."""
    out = []
    for name, printed in PAPER_FORMS.items():
        mine = q.element(name)
        theirs = NCPoly.parse(q.spec, printed)
        diff = mine - theirs
        out.append(RelationReport(
            f"form:{name}", tuple(int(ch) for ch in name[1:]), mine.to_text(), theirs.to_text(),
            diff.to_text(), VERIFIED,
            paper_comparison={"matched": not diff, "printed": printed,
                              "differences": [] if not diff else [f"engine - printed = {diff.to_text()}"]}))
    # c_ij = E_ij E_ji - (c_i - c_j)/2 for every ordered pair
    for i, j in itertools.permutations((1, 2, 3), 2):
        s = q.spec
        rhs = (NCPoly.word(s, [f"e{i}{j}", f"e{j}{i}"])
               - (symmetrize(q.classical.c(i), s) - symmetrize(q.classical.c(j), s)) / 2)
        diff = q.element(f"c{i}{j}") - rhs
        out.append(RelationReport("form:c_ij", (i, j), q.element(f"c{i}{j}").to_text(), rhs.to_text(),
                                  diff.to_text(), status_for(not diff)))
    return out


def quantum_bracket_with_correction(q: A3Quantum, rid: str, left: str, right: str, principal: str,
                                    paper_correction: str | None = None,
                                    indices: tuple[int, ...] = ()) -> RelationReport:
    """[left, right] = S(principal) + correction, with the correction derived exactly."""
    gens = q.generator_set()
    x, y = q.element(left), q.element(right)
    lhs = nc_commutator(x, y)
    main = q.evaluate(principal, "symmetric")
    remainder = lhs - main
    corr = express_in_generators(remainder, gens, q.spec)
    certified = lhs == main + gens.evaluate(corr)
    top = x.degree() + y.degree() - 1
    lower = remainder.degree() < top
    comparison = None
    if paper_correction is not None:
        printed = q.evaluate(paper_correction, "ordered")
        diff = remainder - printed
        diffs = []
        if diff:
            diffs.append(f"engine - printed = {express_in_generators(diff, gens, q.spec).to_text()}")
        comparison = {"matched": not diff, "printed": paper_correction,
                      "printed_in_generators": express_in_generators(printed, gens, q.spec).to_text(),
                      "differences": diffs}
    return RelationReport(
        rid, indices, f"[{left}, {right}]", f"S({recipe_poly(principal).to_text()})",
        (lhs - main - gens.evaluate(corr)).to_text(), status_for(certified and lower),
        correction=corr.to_text(), paper_correction=paper_correction, paper_comparison=comparison,
        extra={"correction_pbw": remainder.to_text(), "lower_degree": lower, "principal_degree": top})


def verify_quantum(q: A3Quantum) -> list[RelationReport]:
    reports = []
    for ci in ("c1", "c2", "c3"):
        for other in ("c1", "c2", "c3", "c12", "c13", "c23", "f123", "g123"):
            br = nc_commutator(q.element(ci), q.element(other))
            reports.append(RelationReport(f"central:{ci}", (int(ci[1]),), f"[{ci}, {other}]", "0",
                                          br.to_text(), status_for(not br)))
    for rid, left, right, principal in FAMILIES:
        for i, j, k in PERMUTATIONS:
            reports.append(quantum_bracket_with_correction(
                q, rid, fill(left, i, j, k), fill(right, i, j, k), fill(principal, i, j, k),
                fill(PAPER_CORRECTIONS[rid], i, j, k), (i, j, k)))
    return reports


@dataclass
class ConstraintResult:
    report: RelationReport
    principal: NCPoly
    lower_terms: CommPoly  # in generator symbols, ordered products
    classical_top: CommPoly


def verify_quantum_constraint(q: A3Quantum) -> ConstraintResult:
    """Derive S(g g') + S(f f') - S(c c c) + lower = 0 and compare the lower terms."""
    gens = q.generator_set()
    i, j, k = 1, 2, 3
    text = fill(CONSTRAINT_PRINCIPAL, i, j, k)
    principal = q.evaluate(text, "symmetric")
    top_classical = q.classical.evaluate(text)
    lower = express_in_generators(-principal, gens, q.spec)
    identity = principal + gens.evaluate(lower)
    def compare(template: str) -> list[dict]:
        out = []
        for perm in PERMUTATIONS:
            printed = q.evaluate(fill(template, *perm), "ordered")
            diff = printed - gens.evaluate(lower)
            out.append({"indices": list(perm), "matched": not diff,
                        "engine_minus_printed": express_in_generators(-diff, gens, q.spec).to_text()})
        return out

    matches = compare(PAPER_CONSTRAINT_TERMS)
    amended = compare(PAPER_CONSTRAINT_AMENDED)
    comparison = {"matched": any(m["matched"] for m in matches), "printed": PAPER_CONSTRAINT_TERMS,
                  "flags": list(PAPER_CONSTRAINT_FLAGS), "differences": matches,
                  "amended_reading": {"printed": PAPER_CONSTRAINT_AMENDED,
                                      "matched": any(m["matched"] for m in amended), "differences": amended}}
    ok = not identity and not top_classical and principal.degree() < 6
    report = RelationReport(
        "constraint", (i, j, k), f"S({recipe_poly(text).to_text()})", "0", identity.to_text(),
        status_for(ok), correction=lower.to_text(), paper_correction=PAPER_CONSTRAINT_TERMS,
        paper_comparison=comparison,
        extra={"classical_top_symbol": top_classical.to_text(),
               "principal_pbw_degree": principal.degree(),
               "identity": f"S({recipe_poly(text).to_text()}) + {lower.to_text()} = 0"})
    return ConstraintResult(report, principal, lower, top_classical)


def classical_limit_checks(q: A3Quantum) -> list[RelationReport]:
    """Top symbol of [S(x), S(y)] against {x, y} for all 21 generator pairs."""
    out = []
    spec = q.spec
    for x, y in itertools.combinations(GENERATORS, 2):
        comm = nc_commutator(q.element(x), q.element(y))
        d = DEGREES[x] + DEGREES[y] - 1
        sym = comm.symbol(d)
        br = berezin_bracket(q.classical.element(x), q.classical.element(y), spec)
        diff = sym - br
        out.append(RelationReport("classical-limit", (), f"[{x}, {y}]", br.to_text(), diff.to_text(),
                                  status_for(not diff), extra={"degree": d}))
    return out


# -- matrix representation cross-check -------------------------------------

def _generator_matrices(q: A3Quantum, mats: dict[str, np.ndarray]) -> Callable[[str], np.ndarray]:
    cache: dict[str, np.ndarray] = {}

    def get(name: str) -> np.ndarray:
        if name not in cache:
            cache[name] = reps.symmetrized_matrix(q.classical.element(name), mats)
        return cache[name]

    return get


def _template_matrix(text: str, get: Callable[[str], np.ndarray], n: int, mode: str) -> np.ndarray:
    acc = reps.zeros(n)
    for coef, factors in parse_terms(text):
        vals = [get(name) for name in _factor_list(factors)]
        if not vals:
            m = reps.identity(n)
        elif mode == "symmetric":
            m = reps.sym_product_matrix(vals)
        else:
            m = reps.ordered_product_matrix(vals, n)
        acc = acc + m * coef
    return acc


def _symbols_matrix(poly: CommPoly, get: Callable[[str], np.ndarray], n: int) -> np.ndarray:
    acc = reps.zeros(n)
    for e, c in poly.terms.items():
        factors = []
        for idx, k in enumerate(e):
            factors.extend([get(poly.ring.names[idx])] * k)
        acc = acc + reps.ordered_product_matrix(factors, n) * c
    return acc


def matrix_cross_check(q: A3Quantum, kind: str = "defining", reports: Sequence[RelationReport] | None = None,
                       constraint: ConstraintResult | None = None) -> list[RelationReport]:
    """Evaluate certified identities on explicit matrices, bypassing PBW rewriting."""
    spec = q.spec
    mats = reps.defining_matrices(spec) if kind == "defining" else reps.adjoint_matrices(spec)
    n = next(iter(mats.values())).shape[0]
    get = _generator_matrices(q, mats)
    gens = q.generator_set()
    out = []
    if reports is None:
        reports = [r for r in verify_quantum(q) if r.correction is not None]
    for r in reports:
        left, right = r.lhs.strip("[]").split(", ")
        principal = _principal_text(r)
        a, b = get(left), get(right)
        m = a @ b - b @ a - _template_matrix(principal, get, n, "symmetric")
        m = m - _symbols_matrix(gens.symbol_ring.parse(r.correction), get, n)
        out.append(RelationReport(f"matrix:{kind}:{r.id}", r.indices, r.lhs, "0 matrix",
                                  "0" if reps.is_zero(m) else "nonzero", status_for(reps.is_zero(m))))
    if constraint is not None:
        text = fill(CONSTRAINT_PRINCIPAL, *constraint.report.indices)
        m = _template_matrix(text, get, n, "symmetric") + _symbols_matrix(constraint.lower_terms, get, n)
        out.append(RelationReport(f"matrix:{kind}:constraint", constraint.report.indices,
                                  constraint.report.lhs, "0 matrix",
                                  "0" if reps.is_zero(m) else "nonzero", status_for(reps.is_zero(m))))
    return out


def _principal_text(r: RelationReport) -> str:
    for rid, left, right, principal in FAMILIES:
        if rid == r.id:
            return fill(principal, *r.indices)
    raise KeyError(r.id)


def corrections_table(q: A3Quantum) -> list[dict]:
    rows = []
    for r in verify_quantum(q):
        if r.correction is None:
            continue
        rows.append({"id": r.id, "indices": list(r.indices), "lhs": r.lhs, "principal": r.expected,
                     "engine_correction": r.correction, "printed_correction": r.paper_correction,
                     "matched": r.paper_comparison["matched"] if r.paper_comparison else None})
    return rows


__all__ = [
    "A3Classical", "A3Quantum", "ConstraintResult", "FAILED", "VERIFIED", "build_classical", "build_quantum",
    "classical_limit_checks", "compare_explicit_forms", "corrections_table", "matrix_cross_check",
    "quantum_bracket_with_correction", "recipe_poly", "resolve", "verify_classical", "verify_quantum",
    "verify_quantum_constraint",
]
