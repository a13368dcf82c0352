"""Exact matrix representations used as an independent cross-check.

Matrices are numpy object arrays of Fractions.  Nothing here touches the
PBW rewriting: operator products are evaluated as plain matrix products.
"""

from __future__ import annotations

import itertools
import re
from fractions import Fraction
from math import factorial
from typing import Mapping, Sequence

import numpy as np

from .envalg import NCPoly
from .liealg import LieAlgebraSpec
from .symalg import CommPoly


def zeros(n: int) -> np.ndarray:
    return np.array([[Fraction(0)] * n for _ in range(n)], dtype=object)


def identity(n: int) -> np.ndarray:
    m = zeros(n)
    for i in range(n):
        m[i, i] = Fraction(1)
    return m


def defining_matrices(spec: LieAlgebraSpec) -> dict[str, np.ndarray]:
    """e_ij -> elementary matrix, h_i -> E_ii - E_{i+1,i+1} (gl/sl constructors only)."""
    labels = {}
    n = 0
    for lab in spec.basis:
        m = re.fullmatch(r"e(\d)(\d)", lab) or re.fullmatch(r"e(\d+)_(\d+)", lab)
        if m:
            labels[lab] = ("e", int(m.group(1)), int(m.group(2)))
            n = max(n, int(m.group(1)), int(m.group(2)))
            continue
        m = re.fullmatch(r"h(\d+)", lab)
        if not m:
            raise ValueError(f"no defining matrix for label {lab!r}")
        labels[lab] = ("h", int(m.group(1)), int(m.group(1)) + 1)
        n = max(n, int(m.group(1)) + 1)
    out = {}
    for lab, (kind, i, j) in labels.items():
        mat = zeros(n)
        if kind == "e":
            mat[i - 1, j - 1] = Fraction(1)
        else:
            mat[i - 1, i - 1] = Fraction(1)
            mat[j - 1, j - 1] = Fraction(-1)
        out[lab] = mat
    return out


def adjoint_matrices(spec: LieAlgebraSpec) -> dict[str, np.ndarray]:
    """ad(x_i) with entries (k, j) = C_ij^k."""
    d = spec.dim
    out = {}
    for i, lab in enumerate(spec.basis):
        mat = zeros(d)
        for j in range(d):
            for k, c in spec.bracket_indices(i, j):
                mat[k, j] += c
        out[lab] = mat
    return out


def is_representation(spec: LieAlgebraSpec, mats: Mapping[str, np.ndarray]) -> bool:
    for a, b in itertools.product(spec.basis, repeat=2):
        lhs = mats[a] @ mats[b] - mats[b] @ mats[a]
        rhs = zeros(lhs.shape[0])
        for lab, c in spec.bracket(a, b).items():
            rhs = rhs + mats[lab] * c
        if not (lhs == rhs).all():
            return False
    return True


def evaluate_nc(p: NCPoly, mats: Mapping[str, np.ndarray]) -> np.ndarray:
    """Evaluate a normal-form element term by term."""
    n = next(iter(mats.values())).shape[0]
    acc = zeros(n)
    for w, c in p.terms.items():
        m = identity(n)
        for i in w:
            m = m @ mats[p.spec.basis[i]]
        acc = acc + m * c
    return acc


def symmetrized_matrix(poly: CommPoly, mats: Mapping[str, np.ndarray]) -> np.ndarray:
    """Matrix of the symmetrization of ``poly``: average over all orderings of each monomial."""
    n = next(iter(mats.values())).shape[0]
    acc = zeros(n)
    for e, c in poly.terms.items():
        letters: list[str] = []
        for i, k in enumerate(e):
            letters.extend([poly.ring.names[i]] * k)
        total = zeros(n)
        for perm in itertools.permutations(letters):
            m = identity(n)
            for lab in perm:
                m = m @ mats[lab]
            total = total + m
        acc = acc + total * (Fraction(c) / factorial(len(letters)))
    return acc


def sym_product_matrix(factors: Sequence[np.ndarray]) -> np.ndarray:
    n = factors[0].shape[0]
    acc = zeros(n)
    for perm in itertools.permutations(range(len(factors))):
        m = identity(n)
        for k in perm:
            m = m @ factors[k]
        acc = acc + m
    return acc * Fraction(1, factorial(len(factors)))


def ordered_product_matrix(factors: Sequence[np.ndarray], n: int) -> np.ndarray:
    m = identity(n)
    for f in factors:
        m = m @ f
    return m


def is_zero(m: np.ndarray) -> bool:
    return all(x == 0 for x in m.flat)
