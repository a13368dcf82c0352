from fractions import Fraction

import pytest

from oracles import weight_zero_count
from polycommutant.commutant import (GeneratorSet, Inexpressible, UnsupportedInput, cartan_elements,
                                     commutes_with_cartan, dimension_table, express_in_generators,
                                     extract_generators, find_relations, kernel_centralizer,
                                     quantum_generators, relation_holds, search_relations, weight_zero_basis)
from polycommutant.envalg import NCPoly, nc_commutator
from polycommutant.linalg import rank
from polycommutant.liealg import make_sl
from polycommutant.symalg import berezin_bracket, symmetric_ring

SL2 = make_sl(2)
SL3 = make_sl(3)
S3 = symmetric_ring(SL3)


@pytest.fixture(scope="module")
def sl3_gens():
    gens = extract_generators(SL3, 3)
    gens.relations = find_relations(gens, 6)
    return gens


def _rank(elements):
    coords = {}
    rows = [{coords.setdefault(e, len(coords)): c for e, c in p.terms.items()} for p in elements]
    return rank(rows)


@pytest.mark.parametrize("degree,expected", [(1, 2), (2, 6), (3, 12)])
def test_weight_zero_dimensions(degree, expected):
    basis = weight_zero_basis(SL3, degree)
    assert basis.dimension == expected
    assert weight_zero_count(SL3.basis, 3, degree) == expected
    assert _rank(basis.elements) == expected


def test_degree_two_basis_elements():
    texts = sorted(p.to_text() for p in weight_zero_basis(SL3, 2).elements)
    assert texts == sorted(["h1^2", "h1*h2", "h2^2", "e12*e21", "e13*e31", "e23*e32"])
    deg3 = {p.to_text() for p in weight_zero_basis(SL3, 3).elements}
    assert {"e12*e23*e31", "e13*e21*e32"} <= deg3


@pytest.mark.parametrize("degree", [1, 2, 3, 4])
def test_kernel_method_agrees_with_weights(degree):
    cartan = cartan_elements(SL3)
    kernel = kernel_centralizer(SL3, cartan, degree)
    weights = weight_zero_basis(SL3, degree)
    assert kernel.dimension == weights.dimension == weight_zero_count(SL3.basis, 3, degree)
    assert _rank(kernel.elements + weights.elements) == weights.dimension


def test_every_basis_element_is_central_for_cartan():
    for d in (1, 2, 3):
        for b in weight_zero_basis(SL3, d).elements:
            for h in cartan_elements(SL3):
                assert not berezin_bracket(h, b, SL3)


def test_sl2_kernel():
    kernel = kernel_centralizer(SL2, cartan_elements(SL2), 2)
    assert kernel.dimension == 2
    assert _rank(kernel.elements + [symmetric_ring(SL2).parse("h1^2"), symmetric_ring(SL2).parse("e12*e21")]) == 2


def test_empty_subalgebra_gives_full_space():
    assert kernel_centralizer(SL2, [], 2).dimension == 6


def test_nonlinear_subalgebra_rejected():
    with pytest.raises(UnsupportedInput):
        kernel_centralizer(SL3, [S3.parse("h1^2")], 2)


def test_sl3_generators(sl3_gens):
    assert sl3_gens.names == ["h1", "h2", "p12", "p13", "p23", "p123", "p132"]
    assert [sl3_gens.degrees[n] for n in sl3_gens.names] == [1, 1, 2, 2, 2, 3, 3]
    assert sl3_gens.elements["p123"].to_text() == "e12*e23*e31"
    assert sl3_gens.elements["p132"].to_text() == "e13*e21*e32"


def test_generic_kernel_route_gives_same_generators():
    gens = extract_generators(SL3, 3, subalgebra=cartan_elements(SL3))
    assert len(gens.names) == 7


def test_sl3_relation(sl3_gens):
    search = search_relations(sl3_gens, 6)
    assert [r.to_text() for r in search.relations] == ["-p12*p13*p23 + p123*p132"]
    assert all(search.kernel_dims[d] == 0 for d in range(1, 6))
    assert search.kernel_dims[6] == 1
    assert relation_holds(sl3_gens, search.relations[0])


def test_sl2_has_no_relations():
    gens = extract_generators(SL2, 2)
    assert gens.names == ["h1", "p12"]
    assert find_relations(gens, 4) == []


def test_single_generator_has_no_relations():
    gens = GeneratorSet(["x"], {"x": S3.parse("h1")}, {"x": 1})
    assert find_relations(gens, 4) == []


def test_express_examples(sl3_gens):
    assert express_in_generators(S3.parse("h1^3"), sl3_gens).to_text() == "h1^3"
    assert express_in_generators(S3.parse("e12*e23*e31"), sl3_gens).to_text() == "p123"
    f = S3.parse("e12*e21*e13*e31*e23*e32 + 2*h1*e12*e21")
    sym = express_in_generators(f, sl3_gens)
    # the product p123*p132 is excluded, so the sextic stays as p12*p13*p23
    assert sym.to_text() == "p12*p13*p23 + 2*h1*p12"
    assert sl3_gens.evaluate(sym) == f


def test_express_rejects_non_weight_zero(sl3_gens):
    with pytest.raises(ValueError):
        express_in_generators(S3.parse("e12"), sl3_gens, SL3)


def test_inexpressible():
    gens = GeneratorSet(["x"], {"x": S3.parse("h1")}, {"x": 1})
    with pytest.raises(Inexpressible):
        express_in_generators(S3.parse("h2"), gens)


def test_quantum_generators_commute_with_cartan(sl3_gens):
    q = quantum_generators(sl3_gens, SL3)
    for name in q.names:
        assert commutes_with_cartan(SL3, q.elements[name])
        for h in ("H1", "H2"):
            assert not nc_commutator(NCPoly.parse(SL3, h), q.elements[name])


def test_dimension_table():
    assert dimension_table(SL3, 3) == {1: 2, 2: 6, 3: 12}
