"""Lie algebra data: basis, structure constants, Cartan generators, weights.

Brackets are stored sparsely as ``structure[(i, j)] = ((k, C_ij^k), ...)``
over basis indices.  The order of ``basis`` is also the PBW order used by
the enveloping algebra, so reordering the basis is a distinct spec.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Mapping, Sequence

Linear = dict[str, Fraction]


class InvalidDimension(ValueError):
    pass


class DefinitionError(ValueError):
    """Malformed or inconsistent algebra definition."""


@dataclass(frozen=True, eq=False)
class LieAlgebraSpec:
    name: str
    basis: tuple[str, ...]
    structure: Mapping[tuple[int, int], tuple[tuple[int, Fraction], ...]]
    cartan: tuple[tuple[str, tuple[tuple[str, Fraction], ...]], ...]
    weights: Mapping[str, tuple[int, ...]]
    # display names for enveloping-algebra words, e.g. e12 -> E12
    operator_labels: Mapping[str, str] = field(default_factory=dict)
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def index(self) -> dict[str, int]:
        idx = self._cache.get("index")
        if idx is None:
            idx = {b: i for i, b in enumerate(self.basis)}
            self._cache["index"] = idx
        return idx

    @property
    def cartan_names(self) -> tuple[str, ...]:
        return tuple(name for name, _ in self.cartan)

    def cartan_form(self, name: str) -> Linear:
        for n, form in self.cartan:
            if n == name:
                return dict(form)
        raise KeyError(name)

    def op_label(self, label: str) -> str:
        return self.operator_labels.get(label, label)

    def bracket_indices(self, i: int, j: int) -> tuple[tuple[int, Fraction], ...]:
        return self.structure.get((i, j), ())

    def bracket(self, x: Mapping[str, Fraction | int] | str, y: Mapping[str, Fraction | int] | str) -> Linear:
        """Bracket of two linear combinations of basis labels."""
        if isinstance(x, str):
            x = {x: 1}
        if isinstance(y, str):
            y = {y: 1}
        idx = self.index
        out: dict[str, Fraction] = {}
        for a, ca in x.items():
            for b, cb in y.items():
                for k, c in self.bracket_indices(idx[a], idx[b]):
                    lab = self.basis[k]
                    out[lab] = out.get(lab, Fraction(0)) + c * ca * cb
        return {k: v for k, v in out.items() if v}

    def reordered(self, order: Sequence[str], name: str | None = None) -> "LieAlgebraSpec":
        """Same algebra with a different basis (PBW) order."""
        if sorted(order) != sorted(self.basis):
            raise DefinitionError("new order must be a permutation of the basis")
        table = {(a, b): self.bracket(a, b) for a in self.basis for b in self.basis}
        return _build(name or self.name, list(order), table,
                      [(n, dict(f)) for n, f in self.cartan], dict(self.operator_labels))

    def describe(self) -> dict:
        rows = []
        for (i, j), terms in sorted(self.structure.items()):
            if i < j:
                rows.append({"x": self.basis[i], "y": self.basis[j],
                             "bracket": _linear_text({self.basis[k]: c for k, c in terms})})
        return {
            "name": self.name,
            "basis": list(self.basis),
            "cartan": {n: _linear_text(dict(f)) for n, f in self.cartan},
            "weights": {b: list(self.weights[b]) for b in self.basis},
            "brackets": rows,
        }


def _linear_text(form: Mapping[str, Fraction]) -> str:
    from .symalg import format_coefficient_term

    parts = [(lab, c) for lab, c in form.items() if c]
    if not parts:
        return "0"
    return format_coefficient_term([(c, lab) for lab, c in parts])


def _build(name: str, basis: list[str], table: Mapping[tuple[str, str], Mapping[str, Fraction]],
           cartan: list[tuple[str, Mapping[str, Fraction | int]]],
           operator_labels: Mapping[str, str] | None = None) -> LieAlgebraSpec:
    idx = {b: i for i, b in enumerate(basis)}
    structure: dict[tuple[int, int], tuple[tuple[int, Fraction], ...]] = {}
    for (a, b), form in table.items():
        terms = tuple(sorted((idx[k], Fraction(v)) for k, v in form.items() if v))
        if terms:
            structure[(idx[a], idx[b])] = terms
    cartan_t = tuple((n, tuple(sorted((k, Fraction(v)) for k, v in f.items() if v))) for n, f in cartan)
    spec = LieAlgebraSpec(name, tuple(basis), structure, cartan_t, {}, dict(operator_labels or {}))
    object.__setattr__(spec, "weights", compute_weights(spec))
    return spec


def compute_weights(spec: LieAlgebraSpec) -> dict[str, tuple[int, ...]]:
    """Eigenvalues of ad(h) on each basis element, checking diagonality."""
    weights = {}
    for x in spec.basis:
        w = []
        for hname, form in spec.cartan:
            image = spec.bracket(dict(form), x)
            if not image:
                w.append(0)
                continue
            if set(image) != {x}:
                raise DefinitionError(f"ad({hname}) is not diagonal on {x}: {image}")
            lam = image[x]
            if lam.denominator != 1:
                raise DefinitionError(f"non-integral weight {lam} of {x} under {hname}")
            w.append(int(lam))
        weights[x] = tuple(w)
    return weights


def _gl_bracket(i: int, j: int, k: int, l: int) -> dict[tuple[int, int], int]:
    # {e_ij, e_kl} = delta_jk e_il - delta_li e_kj
    out: dict[tuple[int, int], int] = {}
    if j == k:
        out[(i, l)] = out.get((i, l), 0) + 1
    if l == i:
        out[(k, j)] = out.get((k, j), 0) - 1
    return {key: v for key, v in out.items() if v}


def _root_order(n: int) -> tuple[list[tuple[int, int]], list[tuple[int, int]]]:
    lower = sorted(((i, j) for i in range(1, n + 1) for j in range(1, n + 1) if i > j), reverse=True)
    upper = sorted((i, j) for i in range(1, n + 1) for j in range(1, n + 1) if i < j)
    return lower, upper


def _e(i: int, j: int) -> str:
    return f"e{i}{j}" if max(i, j) < 10 else f"e{i}_{j}"


def make_gl(n: int) -> LieAlgebraSpec:
    """gl(n) on e_ij with Cartan forms h_i = e_ii - e_{i+1,i+1}.

    Basis order: diagonal e_nn..e_11, lowering roots, raising roots.
    """
    if n < 2:
        raise InvalidDimension(f"gl(n) needs n >= 2, got {n}")
    lower, upper = _root_order(n)
    pairs = [(i, i) for i in range(n, 0, -1)] + lower + upper
    basis = [_e(i, j) for i, j in pairs]
    table = {}
    for (i, j), (k, l) in itertools.product(pairs, repeat=2):
        table[(_e(i, j), _e(k, l))] = {_e(*key): Fraction(v) for key, v in _gl_bracket(i, j, k, l).items()}
    cartan = [(f"h{i}", {_e(i, i): 1, _e(i + 1, i + 1): -1}) for i in range(1, n)]
    labels = {b: b.upper() for b in basis}
    return _build(f"gl{n}", basis, table, cartan, labels)


def gl_diagonal_to_h(n: int, diag: Mapping[int, Fraction]) -> dict[str, Fraction]:
    """Rewrite a traceless diagonal sum_i a_i e_ii over h_1..h_{n-1}."""
    total = sum(diag.values(), Fraction(0))
    if total != 0:
        raise DefinitionError("diagonal element is not traceless")
    out = {}
    acc = Fraction(0)
    for i in range(1, n):
        acc += diag.get(i, Fraction(0))
        if acc:
            out[f"h{i}"] = acc
    return out


def make_sl(n: int) -> LieAlgebraSpec:
    """sl(n) with basis h_{n-1}..h_1, lowering roots, raising roots.

    For n = 3 this is {h2, h1, e32, e31, e21, e12, e13, e23}.  Brackets are
    computed in gl(n) and the (traceless) diagonal part is rewritten over
    the h_i, which eliminates e_nn.
    """
    if n < 2:
        raise InvalidDimension(f"sl(n) needs n >= 2, got {n}")
    lower, upper = _root_order(n)
    roots = lower + upper
    basis = [f"h{i}" for i in range(n - 1, 0, -1)] + [_e(i, j) for i, j in roots]

    def embed(label: str) -> dict[tuple[int, int], Fraction]:
        if label.startswith("h"):
            i = int(label[1:])
            return {(i, i): Fraction(1), (i + 1, i + 1): Fraction(-1)}
        return {_parse_e(label): Fraction(1)}

    def restrict(gl_elem: Mapping[tuple[int, int], Fraction]) -> dict[str, Fraction]:
        out: dict[str, Fraction] = {}
        diag = {}
        for (i, j), v in gl_elem.items():
            if not v:
                continue
            if i == j:
                diag[i] = diag.get(i, Fraction(0)) + v
            else:
                out[_e(i, j)] = out.get(_e(i, j), Fraction(0)) + v
        out.update(gl_diagonal_to_h(n, diag))
        return {k: v for k, v in out.items() if v}

    table = {}
    for a, b in itertools.product(basis, repeat=2):
        acc: dict[tuple[int, int], Fraction] = {}
        for (i, j), ca in embed(a).items():
            for (k, l), cb in embed(b).items():
                for key, v in _gl_bracket(i, j, k, l).items():
                    acc[key] = acc.get(key, Fraction(0)) + ca * cb * v
        table[(a, b)] = restrict(acc)
    cartan = [(f"h{i}", {f"h{i}": 1}) for i in range(1, n)]
    labels = {b: b.upper() for b in basis}
    return _build(f"sl{n}", basis, table, cartan, labels)


def _parse_e(label: str) -> tuple[int, int]:
    body = label[1:]
    if "_" in body:
        a, b = body.split("_")
        return int(a), int(b)
    return int(body[0]), int(body[1])


def sl_to_gl(label: str) -> dict[str, Fraction]:
    """Image of an sl(n) basis label in gl(n)."""
    if label.startswith("h"):
        i = int(label[1:])
        return {_e(i, i): Fraction(1), _e(i + 1, i + 1): Fraction(-1)}
    return {label: Fraction(1)}


def check_jacobi(spec: LieAlgebraSpec) -> bool:
    """True iff antisymmetry and the Jacobi identity hold on all basis triples."""
    d = spec.dim
    for i in range(d):
        for j in range(d):
            a = dict(spec.bracket_indices(i, j))
            b = dict(spec.bracket_indices(j, i))
            for k in set(a) | set(b):
                if a.get(k, 0) + b.get(k, 0) != 0:
                    return False

    def br(vec: Mapping[int, Fraction], j: int) -> dict[int, Fraction]:
        out: dict[int, Fraction] = {}
        for i, c in vec.items():
            for k, v in spec.bracket_indices(i, j):
                out[k] = out.get(k, Fraction(0)) + c * v
        return out

    for i, j, k in itertools.product(range(d), repeat=3):
        # [[x_i, x_j], x_k] + [[x_j, x_k], x_i] + [[x_k, x_i], x_j]
        total: dict[int, Fraction] = {}
        for a, b, c in ((i, j, k), (j, k, i), (k, i, j)):
            for m, v in br(dict(spec.bracket_indices(a, b)), c).items():
                total[m] = total.get(m, Fraction(0)) + v
        if any(total.values()):
            return False
    return True


def perturbed(spec: LieAlgebraSpec, i: int, j: int, k: int, delta: Fraction | int = 1) -> LieAlgebraSpec:
    """Copy of ``spec`` with C_ij^k shifted by ``delta`` (antisymmetry kept untouched)."""
    structure = {key: dict(terms) for key, terms in spec.structure.items()}
    row = structure.setdefault((i, j), {})
    row[k] = row.get(k, Fraction(0)) + Fraction(delta)
    frozen = {key: tuple(sorted((kk, v) for kk, v in terms.items() if v)) for key, terms in structure.items()}
    return LieAlgebraSpec(spec.name + "~", spec.basis, frozen, spec.cartan, spec.weights,
                          dict(spec.operator_labels))


_BRACKET_RE = re.compile(r"^bracket\s+(\S+)\s+(\S+)\s*=\s*(.+)$")


def parse_definition(text: str, name: str = "custom") -> LieAlgebraSpec:
    """Parse the line-oriented algebra definition format.

    ::

        basis: h x y
        bracket h x = 2*x
        bracket h y = -2*y
        bracket x y = h
        cartan: h

    Missing brackets are zero; ``[b, a]`` is filled in as ``-[a, b]``.
    """
    basis: list[str] | None = None
    cartan: list[str] = []
    given: dict[tuple[str, str], dict[str, Fraction]] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("basis:"):
            basis = line[len("basis:"):].split()
        elif line.startswith("cartan:"):
            cartan = line[len("cartan:"):].split()
        else:
            m = _BRACKET_RE.match(line)
            if not m:
                raise DefinitionError(f"line {lineno}: cannot parse {raw!r}")
            a, b, rhs = m.groups()
            given[(a, b)] = _parse_linear(rhs, lineno)
    if not basis:
        raise DefinitionError("missing 'basis:' line")
    if len(set(basis)) != len(basis):
        raise DefinitionError("duplicate basis labels")
    known = set(basis)
    table: dict[tuple[str, str], dict[str, Fraction]] = {}
    for (a, b), form in given.items():
        for lab in (a, b, *form):
            if lab not in known:
                raise DefinitionError(f"unknown label {lab!r}")
        neg = {k: -v for k, v in form.items()}
        for key, val in (((a, b), form), ((b, a), neg)):
            if key in table and table[key] != val:
                raise DefinitionError(f"inconsistent brackets for {key}")
            table[key] = val
    for h in cartan:
        if h not in known:
            raise DefinitionError(f"unknown Cartan label {h!r}")
    return _build(name, basis, table, [(h, {h: 1}) for h in cartan])


def _parse_linear(text: str, lineno: int) -> dict[str, Fraction]:
    out: dict[str, Fraction] = {}
    text = text.replace(" ", "")
    if text == "0":
        return out
    for sign, coef, lab in re.findall(r"([+-]*)(?:(\d+(?:/\d+)?)\*)?([A-Za-z_][\w]*)", text):
        c = Fraction(coef) if coef else Fraction(1)
        if sign.count("-") % 2:
            c = -c
        out[lab] = out.get(lab, Fraction(0)) + c
    if not out:
        raise DefinitionError(f"line {lineno}: empty bracket value")
    return {k: v for k, v in out.items() if v}


def load_definition(path: str | Path) -> LieAlgebraSpec:
    p = Path(path)
    return parse_definition(p.read_text(encoding="utf-8"), name=p.stem)


def algebra_by_name(name: str) -> LieAlgebraSpec:
    """Resolve ``sl3``, ``gl2``, ``file:<path>`` style names."""
    if name.startswith("file:"):
        return load_definition(name[5:])
    m = re.fullmatch(r"(sl|gl)(\d+)", name)
    if not m:
        raise DefinitionError(f"unknown algebra {name!r}")
    kind, n = m.group(1), int(m.group(2))
    return make_sl(n) if kind == "sl" else make_gl(n)
