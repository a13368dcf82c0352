import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from polycommutant.envalg import (ArityError, NCPoly, nc_commutator, normalize_word, random_rewrite,
                                  rewrite_word, sym_product, symmetrize)
from polycommutant.liealg import make_sl
from polycommutant.reps import adjoint_matrices, defining_matrices, evaluate_nc, ordered_product_matrix
from polycommutant.symalg import berezin_bracket, symmetric_ring
from strategies import comm_polys, nc_polys, words

SL3 = make_sl(3)
LEX = SL3.reordered(("h1", "h2", "e12", "e13", "e21", "e23", "e31", "e32"))
S3 = symmetric_ring(SL3)


def E(spec, text):
    return NCPoly.parse(spec, text)


def test_single_rewrite_step():
    assert (E(LEX, "E21") * E(LEX, "E12")).to_text() == "E12*E21 - H1"
    # the default order has E21 before E12, so the same element reads differently
    assert (E(SL3, "E12") * E(SL3, "E21")).to_text() == "E21*E12 + H1"
    assert E(SL3, "E21*E12 + H1") == E(SL3, "E12*E21")


def test_cartan_pair_uses_declared_order():
    assert (E(SL3, "H1") * E(SL3, "H2")).to_text() == "H2*H1"
    assert (E(LEX, "H1") * E(LEX, "H2")).to_text() == "H1*H2"


def test_commutator_examples():
    assert nc_commutator(E(SL3, "E12"), E(SL3, "E21")) == E(SL3, "H1")
    a = E(SL3, "E12*E23 + H1")
    assert not nc_commutator(a, a)
    assert not nc_commutator(E(SL3, "H1"), E(SL3, "E12*E23*E31"))


def test_associativity_instance():
    a, b, c = E(SL3, "E12*E21"), E(SL3, "E21"), E(SL3, "E23")
    assert ((E(SL3, "E12") * b) * c) == (E(SL3, "E12") * (b * c))
    assert (a * c) == (E(SL3, "E12") * (b * c))


@settings(max_examples=40, deadline=None)
@given(nc_polys(SL3), nc_polys(SL3), nc_polys(SL3))
def test_associative_and_distributive(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c


@settings(max_examples=60, deadline=None)
@given(words(SL3, 5), st.integers(0, 10 ** 6))
def test_normalization_is_confluent(word, seed):
    rng = random.Random(seed)
    target = normalize_word(SL3, word)
    assert rewrite_word(SL3, word) == target
    assert random_rewrite(SL3, word, rng) == target


@settings(max_examples=40, deadline=None)
@given(words(SL3, 4))
def test_normal_form_agrees_on_matrices(word):
    for mats in (defining_matrices(SL3), adjoint_matrices(SL3)):
        direct = ordered_product_matrix([mats[SL3.basis[i]] for i in word], next(iter(mats.values())).shape[0])
        assert (evaluate_nc(NCPoly(SL3, normalize_word(SL3, word)), mats) == direct).all()


def test_normal_words_are_non_decreasing():
    p = E(SL3, "E23*E13*E12*E31*H1*E21")
    for w, _ in p:
        assert list(w) == sorted(w)


@settings(max_examples=40, deadline=None)
@given(nc_polys(SL3), nc_polys(SL3))
def test_pbw_filtration(a, b):
    comm = nc_commutator(a, b)
    if comm:
        assert comm.degree() <= a.degree() + b.degree() - 1


def test_symmetrize_examples():
    assert symmetrize(S3.parse("e12*e21"), LEX).to_text() == "E12*E21 - 1/2*H1"
    A, B, C = (NCPoly.gen(SL3, x) for x in ("e12", "e23", "e31"))
    assert symmetrize(S3.parse("e12*e23"), SL3) == (A * B + B * A) / 2
    six = sum((x * y * z for x, y, z in itertools.permutations((A, B, C))), NCPoly(SL3)) / 6
    assert symmetrize(S3.parse("e12*e23*e31"), SL3) == six


def test_sym_product():
    A, B = E(SL3, "E12*E21"), E(SL3, "E13")
    assert sym_product([A]) == A
    assert sym_product([A, B]) == (A * B + B * A) / 2
    h1, h2 = E(SL3, "H1"), E(SL3, "H2")
    assert sym_product([h1, h2, h1]) == h1 * h2 * h1
    with pytest.raises(ArityError):
        sym_product([])


@pytest.mark.parametrize("degree", [1, 2, 3, 4])
def test_symmetrize_top_symbol_round_trip(degree):
    rng = random.Random(degree)
    monos = list(itertools.combinations_with_replacement(SL3.basis, degree))
    for combo in rng.sample(monos, min(len(monos), 25)):
        m = S3.const(1)
        for lab in combo:
            m = m * S3.var(lab)
        assert symmetrize(m, SL3).symbol(degree) == m


@settings(max_examples=30, deadline=None)
@given(comm_polys(S3, max_terms=3, max_exp=1))
def test_symmetrize_weight_zero_commutes_with_cartan(m):
    zero = {e: c for e, c in m.terms.items() if not any(
        sum(k * SL3.weights[SL3.basis[i]][r] for i, k in enumerate(e)) for r in range(2))}
    sym = symmetrize(type(m)(S3, zero), SL3)
    for h in ("H1", "H2"):
        assert not nc_commutator(E(SL3, h), sym)


@settings(max_examples=30, deadline=None)
@given(comm_polys(S3, max_terms=2, max_exp=1), comm_polys(S3, max_terms=2, max_exp=1))
def test_classical_limit_on_random_polys(f, g):
    if not f.is_homogeneous() or not g.is_homogeneous() or not f or not g:
        return
    d = f.degree() + g.degree() - 1
    comm = nc_commutator(symmetrize(f, SL3), symmetrize(g, SL3))
    assert comm.symbol(d) == berezin_bracket(f, g, SL3)


def test_parse_accepts_both_label_styles():
    assert E(SL3, "e12*e21") == E(SL3, "E12*E21")
    with pytest.raises(KeyError):
        E(SL3, "E44")


def test_mixed_specs_rejected():
    with pytest.raises(ValueError):
        E(SL3, "E12") + E(LEX, "E12")


def test_scalar_arithmetic():
    a = E(SL3, "E12")
    assert (a * Fraction(1, 2)) * 2 == a
    assert (1 + a) - 1 == a
