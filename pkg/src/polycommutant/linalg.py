"""Exact sparse linear algebra over the rationals.

Rows are dicts ``{column: value}``.  Elimination is fraction-free: every row
is scaled to a primitive integer vector and pivoting uses integer cross
multiplication, so no intermediate fractions appear.  Only the final
read-out (null vectors, solutions) divides.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Mapping, Sequence


def _primitive(row: Mapping[int, Fraction | int]) -> dict[int, int]:
    """Scale a rational row to a primitive integer row with positive lead."""
    items = [(c, Fraction(v)) for c, v in row.items() if v != 0]
    if not items:
        return {}
    den = lcm(*(v.denominator for _, v in items))
    ints = {c: int(v * den) for c, v in items}
    g = 0
    for v in ints.values():
        g = gcd(g, v)
    lead = ints[min(ints)]
    if lead < 0:
        g = -g
    return {c: v // g for c, v in ints.items()}


def _eliminate(row: dict[int, int], piv_row: dict[int, int], col: int) -> dict[int, int]:
    a = piv_row[col]
    b = row.get(col, 0)
    if b == 0:
        return row
    g = gcd(a, b)
    ma, mb = a // g, b // g
    out = {c: ma * v for c, v in row.items()}
    for c, v in piv_row.items():
        nv = out.get(c, 0) - mb * v
        if nv:
            out[c] = nv
        else:
            out.pop(c, None)
    return _primitive(out)


class RowSpace:
    """Incrementally maintained reduced row space.

    Every stored row has a distinct pivot column and that pivot column is
    zero in every other stored row.
    """

    def __init__(self) -> None:
        self.pivots: dict[int, dict[int, int]] = {}

    def __len__(self) -> int:
        return len(self.pivots)

    def reduce(self, row: Mapping[int, Fraction | int]) -> dict[int, int]:
        r = _primitive(row)
        for col in sorted(set(r) & set(self.pivots)):
            if col in r:
                r = _eliminate(r, self.pivots[col], col)
        return r

    def contains(self, row: Mapping[int, Fraction | int]) -> bool:
        return not self.reduce(row)

    def add(self, row: Mapping[int, Fraction | int]) -> bool:
        """Insert ``row``; return True iff the rank went up."""
        r = self.reduce(row)
        if not r:
            return False
        col = min(r)
        for c in list(self.pivots):
            other = self.pivots[c]
            if col in other:
                self.pivots[c] = _eliminate(other, r, col)
        self.pivots[col] = r
        return True

    def rref(self) -> list[tuple[int, dict[int, Fraction]]]:
        out = []
        for col in sorted(self.pivots):
            r = self.pivots[col]
            p = r[col]
            out.append((col, {c: Fraction(v, p) for c, v in r.items()}))
        return out


def rank(rows: Iterable[Mapping[int, Fraction | int]]) -> int:
    space = RowSpace()
    for r in rows:
        space.add(r)
    return len(space)


def nullspace(rows: Iterable[Mapping[int, Fraction | int]], ncols: int) -> list[dict[int, Fraction]]:
    """Basis of ``{x : row . x = 0 for every row}``, one vector per free column.

    Vectors are normalized with coefficient 1 on their free column, so the
    output is canonical for a given column ordering.
    """
    space = RowSpace()
    for r in rows:
        space.add(r)
    reduced = space.rref()
    pivot_cols = {c for c, _ in reduced}
    basis = []
    for free in range(ncols):
        if free in pivot_cols:
            continue
        v = {free: Fraction(1)}
        for col, r in reduced:
            coef = r.get(free)
            if coef:
                v[col] = -coef
        basis.append(v)
    return basis


class InconsistentSystem(ValueError):
    pass


def solve(columns: Sequence[Mapping[object, Fraction | int]], target: Mapping[object, Fraction | int]) -> dict[int, Fraction]:
    """Find x with ``sum_j x_j * columns[j] == target``.

    Columns and target are sparse vectors keyed by arbitrary hashable row
    keys.  Free variables are set to zero, so among several solutions the
    one supported on the earliest independent columns is returned.
    Raises InconsistentSystem when no solution exists.
    """
    keys: dict[object, int] = {}
    for col in list(columns) + [target]:
        for k in col:
            keys.setdefault(k, len(keys))
    n = len(columns)
    rows: dict[int, dict[int, Fraction]] = {}
    for j, col in enumerate(columns):
        for k, v in col.items():
            if v:
                rows.setdefault(keys[k], {})[j] = Fraction(v)
    for k, v in target.items():
        if v:
            rows.setdefault(keys[k], {})[n] = Fraction(v)
    space = RowSpace()
    for r in rows.values():
        space.add(r)
    x: dict[int, Fraction] = {}
    for col, r in space.rref():
        if col == n:
            raise InconsistentSystem("target is not in the column span")
        val = r.get(n, Fraction(0))
        if val:
            x[col] = val
    return x
