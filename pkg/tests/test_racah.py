import itertools
from fractions import Fraction

import pytest
import sympy

from oracles import canonical, distinct_tuples, to_sympy
from polycommutant import racah
from polycommutant.symalg import RingMismatch, phase_space_ring, reduce_mod_constraints

SOLVED = {"k": Fraction(-1, 4), "a": Fraction(-1, 4), "b": Fraction(-1, 4), "lam": Fraction(-1, 4),
          "u1": Fraction(0), "u2": Fraction(0), "v": Fraction(0), "mu": Fraction(0)}


@pytest.fixture(scope="module")
def solved3():
    return racah.solved_sphere(3)


@pytest.mark.parametrize("n", [3, 4, 5])
def test_instance_counts_match_brute_force(n):
    counts = racah.build_relation_set(n, include_closure=True).counts()
    for t in racah.TEMPLATES:
        expected = len(distinct_tuples(n, t.arity))
        assert counts.get(t.id, 0) == expected == racah.expected_count(n, t.arity)


def test_n3_has_only_three_index_relations():
    assert racah.build_relation_set(3).ids() == ["R1", "R2"]
    assert racah.build_relation_set(3, include_closure=True).ids() == ["K1", "R1", "R2"]


@pytest.mark.parametrize("n", [0, 1, 2])
def test_small_n_rejected(n):
    with pytest.raises(racah.UnsupportedSize):
        racah.build_relation_set(n)
    with pytest.raises(racah.UnsupportedSize):
        racah.sphere_realization(n)


def test_zero_realization_verifies_trivially():
    sym = racah.zero_realization(4)
    reports = racah.verify_realization(sym, racah.build_relation_set(4, include_closure=True))
    assert reports and all(r.ok for r in reports)


def test_solved_constants(solved3):
    _, sol = solved3
    assert sol.values == SOLVED
    assert sol.family_dimension == 0
    assert sol.values["a"] == sol.values["b"]


def test_dropping_angular_term_has_no_realization():
    sym = racah.sphere_realization(3, with_angular=False)
    rels = racah.build_relation_set(3).only("R1", "R2")
    with pytest.raises(racah.NoRealization):
        racah.solve_constants(sym, rels, racah.sphere_ideal(sym), racah.hamiltonian_conditions(sym))


def test_relations_hold_modulo_sphere(solved3):
    sym, _ = solved3
    rels = racah.build_relation_set(3, include_closure=True)
    reports = racah.verify_realization(sym, rels, racah.sphere_ideal(sym))
    assert len(reports) == 6 * 3
    assert all(r.ok for r in reports)


def test_wrong_scale_is_detected():
    sym = racah.sphere_realization(3).substitute({**SOLVED, "k": Fraction(-1, 2)})
    reports = racah.verify_realization(sym, racah.build_relation_set(3).only("R2"), racah.sphere_ideal(sym))
    assert not any(r.ok for r in reports)


def _sympy_realization(n, values):
    s = [sympy.Symbol(f"s{k}") for k in range(1, n + 1)]
    p = [sympy.Symbol(f"p{k}") for k in range(1, n + 1)]
    al = [sympy.Symbol(f"a{k}") for k in range(1, n + 1)]
    q = {x: sympy.Rational(v.numerator, v.denominator) for x, v in values.items()}

    def P(i, j):
        i, j = i - 1, j - 1
        L = s[i] * p[j] - s[j] * p[i]
        return (q["k"] * L ** 2 + q["a"] * al[i] ** 2 * s[j] ** 2 / s[i] ** 2
                + q["b"] * al[j] ** 2 * s[i] ** 2 / s[j] ** 2)

    def C(i):
        return q["lam"] * al[i - 1] ** 2

    return P, C


def test_r2_with_sympy_oracle():
    P, C = _sympy_realization(3, SOLVED)
    for i, j, k in itertools.permutations((1, 2, 3)):
        F = canonical(P(i, j), P(j, k), 3) / 2
        lhs = canonical(P(j, k), F, 3)
        rhs = P(i, k) * P(j, k) - P(j, k) * P(i, j) + 2 * P(i, k) * C(j) - 2 * P(i, j) * C(k)
        assert sympy.simplify(lhs - rhs) == 0


def test_f_matches_sympy_oracle(solved3):
    sym, _ = solved3
    P, _ = _sympy_realization(3, SOLVED)
    engine = to_sympy(sym.f(1, 2, 3))
    assert sympy.simplify(engine - canonical(P(1, 2), P(2, 3), 3) / 2) == 0


def test_bracket_of_p_with_itself_vanishes(solved3):
    sym, _ = solved3
    assert not sym.bracket(sym.p(1, 2), sym.p(1, 2))
    assert sym.p(1, 2) == sym.p(2, 1)


def test_hamiltonian_and_casimir_need_the_sphere(solved3):
    sym, sol = solved3
    ideal = racah.sphere_ideal(sym)
    assert all(r.ok for r in racah.hamiltonian_checks(sym, ideal))
    assert not all(r.ok for r in racah.hamiltonian_checks(sym, None))
    assert racah.casimir_check(sym, sol.values, ideal).ok
    assert not racah.casimir_check(sym, sol.values, None).ok


def test_casimirs_are_central(solved3):
    sym, _ = solved3
    assert all(r.ok for r in racah.central_checks(sym))


def test_disjoint_triples_commute_at_six():
    sym, _ = racah.solved_sphere(6)
    checks = racah.disjoint_triple_checks(sym)
    assert len(checks) == 10
    assert all(r.ok for r in checks)


def test_ideal_from_other_ring_rejected(solved3):
    sym, _ = solved3
    from polycommutant.symalg import ConstraintIdeal
    other = ConstraintIdeal.sphere(phase_space_ring(4), 4)
    with pytest.raises(RingMismatch):
        racah.verify_realization(sym, racah.build_relation_set(3), other)


def test_mixed_rings_rejected():
    r3, r4 = phase_space_ring(3), phase_space_ring(4)
    with pytest.raises(RingMismatch):
        racah.RacahSymbols(3, r3, {(1, 2): r4.zero()}, {})


def test_reduction_is_applied_to_sphere_constraint(solved3):
    sym, _ = solved3
    ideal = racah.sphere_ideal(sym)
    s = [sym.ring.var(f"s{k}") for k in (1, 2, 3)]
    assert not reduce_mod_constraints(s[0] ** 2 + s[1] ** 2 + s[2] ** 2 - 1, ideal)


def test_run_sphere_n4():
    run = racah.run_sphere(4)
    assert run.ok
    assert run.counts == {"R1": 24, "R2": 24, "R3": 24, "R4": 24}
    assert len(run.with_ideal) == len(run.without_ideal) == 96
