"""Generator tests, with an independent index-tuple counting oracle."""

import itertools
from math import comb
from random import Random

import pytest

from reskit.core import Cnf, Lit, clause, is_tautological, neg, pos, restrict_cnf
from reskit.encodings import (Cv, D, I, L, R, S, T1, T3, V, ParamSet, RefVar,
                              all_selectors_on, apply_substitution,
                              check_object_cnf, gamma_assignment, gen_php,
                              gen_ref_f, gen_ref_functionality, gen_ref_nr,
                              gen_rkref_f, gen_rkref_nr, gen_sat, home_pair,
                              mentioned_pairs, parse_refvar,
                              reflection_conjunction, tau_substitution)
from conftest import brute_force_satisfiable, random_cnf


def expected_sat_count(n, r):
    return r * (1 + 4 * n)


def expected_ref_core_count(n, r, s, t):
    """Families above the weakening axioms, counted tuple by tuple."""
    return (s * t * n                       # non-tautology
            + 2 * (s - 1) * t * t * n       # premise-cut, both sides
            + 2 * (s - 1) * t * t * n * (2 * n - 1)  # transfer, both sides
            + 2 * n                         # empty final cell
            + (s - 1) * t                   # pivot domain
            + t                             # source domain
            + 2 * (s - 1) * t               # premise domains
            + (s - 1) * t * comb(n, 2)      # pivot functionality
            + t * comb(r, 2)                # source functionality
            + 2 * (s - 1) * t * comb(t, 2))  # premise functionality


def expected_ref_f_count(f, s, t):
    n, r = check_object_cnf(f), len(f.clauses)
    lit_total = sum(len(c) for c in f.clauses)
    return expected_ref_core_count(n, r, s, t) + t * lit_total


def expected_ref_nr_count(n, r, s, t):
    return expected_ref_core_count(n, r, s, t) + t * r * n * 2


def expected_rkref_extra(s, t, k):
    # selector units plus both premise-selection guard families
    return k + 2 * (s - 1) * t * t * k


@pytest.mark.parametrize("n", range(1, 5))
@pytest.mark.parametrize("r", range(1, 5))
def test_sat_counting_oracle(n, r):
    assert len(gen_sat(n, r).clauses) == expected_sat_count(n, r)


def test_sat_1_1_examples():
    f = gen_sat(1, 1)
    assert len(f.clauses) == 5 and len(f.variables) == 5
    assert clause(pos(T3(1, 1, 1)), pos(T3(1, 1, 0))) in f.clause_set


@pytest.mark.parametrize("n,r,s,t", [
    (n, r, s, t)
    for n in (1, 2, 3, 4) for r in (1, 2, 4) for s in (1, 2, 4) for t in (1, 3, 4)
])
def test_ref_counting_oracle(n, r, s, t, rng):
    f = random_cnf(rng, n, r)
    r_eff = len(f.clauses)
    assert len(gen_ref_f(f, s, t).clauses) == expected_ref_f_count(f, s, t)
    assert len(gen_ref_nr(n, r, s, t).clauses) == expected_ref_nr_count(n, r, s, t)
    for k in (1, 3):
        assert len(gen_rkref_f(f, s, t, k).clauses) == \
            expected_ref_f_count(f, s, t) + expected_rkref_extra(s, t, k)
        assert len(gen_rkref_nr(n, r, s, t, k).clauses) == \
            expected_ref_nr_count(n, r, s, t) + expected_rkref_extra(s, t, k)
    assert r_eff <= r


def test_ref_f_unit_example():
    f = Cnf.make([clause(pos(1))], [1])
    g = gen_ref_f(f, 2, 1)
    assert len(g.clauses) == 13
    assert len(g.variables) == 8
    assert clause(neg(I(1, 1)), pos(D(1, 1, 1, 1))) in g.clause_set
    assert clause(neg(D(2, 1, 1, 1))) in g.clause_set
    assert clause(neg(D(2, 1, 1, 0))) in g.clause_set


def test_ref_f_empty_clause_in_f_allowed():
    f = Cnf.make([frozenset(), clause(pos(1))], [1])
    g = gen_ref_f(f, 2, 2)
    # the empty input clause contributes no weakening axioms
    axioms = [c for c in g.clauses
              if any(l.var.kind == "I" and l.sign == 0 for l in c)
              and any(l.var.kind == "D" for l in c)]
    srcs = {next(l.var.idx[1] for l in c if l.var.kind == "I") for c in axioms}
    assert srcs == {g_idx + 1 for g_idx, cm in enumerate(f.clauses) if cm}


def test_ref_nr_axiom_instance():
    g = gen_ref_nr(1, 1, 1, 1)
    assert clause(neg(I(1, 1)), neg(Cv(1, 1, 1)), pos(D(1, 1, 1, 1))) in g.clause_set


def test_rkref_axiom_instance():
    g = gen_rkref_nr(1, 1, 1, 1, 1)
    assert clause(neg(S(1, 1, 1)), neg(I(1, 1)), neg(Cv(1, 1, 1)),
                  pos(D(1, 1, 1, 1))) in g.clause_set


def test_rkref_selector_units():
    g = gen_rkref_f(Cnf.make([clause(pos(1))], [1]), 2, 1, 3)
    for u in (1, 2, 3):
        assert clause(pos(S(u, 2, 1))) in g.clause_set
    svars = [v for v in g.variables if v.kind == "S"]
    assert len(svars) == 2 * 1 * 3


@pytest.mark.parametrize("n,r,s,t,k", [
    (1, 1, 1, 1, 1), (1, 1, 2, 2, 2), (2, 2, 2, 2, 1), (2, 1, 3, 2, 2),
    (3, 3, 2, 2, 1), (3, 2, 3, 3, 3), (2, 3, 2, 3, 2),
])
def test_restriction_identities(n, r, s, t, k, rng):
    f = random_cnf(rng, n, r)
    while len(f.clauses) != r:
        f = random_cnf(rng, n, r)
    son = all_selectors_on(s, t, k)
    assert restrict_cnf(gen_rkref_f(f, s, t, k), son).clause_set == \
        gen_ref_f(f, s, t).clause_set
    assert restrict_cnf(gen_rkref_nr(n, r, s, t, k), son).clause_set == \
        gen_ref_nr(n, r, s, t).clause_set
    gamma = gamma_assignment(f)
    assert restrict_cnf(gen_ref_nr(n, r, s, t), gamma).clause_set == \
        gen_ref_f(f, s, t).clause_set
    assert restrict_cnf(gen_rkref_nr(n, r, s, t, k), gamma).clause_set == \
        gen_rkref_f(f, s, t, k).clause_set


@pytest.mark.parametrize("n", range(1, 4))
def test_php_counts_and_unsat(n):
    f = gen_php(n)
    assert len(f.variables) == (n + 1) * n
    assert len(f.clauses) == n + 1 + (n ** 3 + n ** 2) // 2
    if n <= 3:
        assert brute_force_satisfiable(f) is None


def test_php_examples():
    assert (len(gen_php(2).variables), len(gen_php(2).clauses)) == (6, 9)
    assert (len(gen_php(1).variables), len(gen_php(1).clauses)) == (2, 3)


def test_gamma_examples():
    f = Cnf.make([clause(pos(1))], [1])
    assert gamma_assignment(f) == {Cv(1, 1, 1): 1, Cv(1, 1, 0): 0}
    f2 = Cnf.make([clause(neg(1), pos(2))], [1, 2])
    g = gamma_assignment(f2)
    assert g[Cv(1, 1, 0)] == 1 and g[Cv(1, 2, 1)] == 1
    assert sum(g.values()) == 2
    assert len(g) == 2 * 2 * 1


def test_tau_examples():
    f = Cnf.make([clause(pos(1))], [1])
    tau = tau_substitution(f)
    assert tau[T3(1, 1, 1)] == Lit(1, 1)
    assert tau[T3(1, 1, 0)] == 0
    assert tau[T1(1)] == Lit(1, 1)


def test_apply_substitution_examples():
    f = Cnf.make([clause(pos(1))], [1])
    tau = tau_substitution(f)
    g = Cnf.make([clause(pos(T3(1, 1, 1)), pos(T3(1, 1, 0)))],
                 [T3(1, 1, 1), T3(1, 1, 0)])
    assert apply_substitution(g, tau).clause_set == {clause(pos(1))}
    # identity substitution
    assert apply_substitution(g, {}).clause_set == g.clause_set
    # tautology retained
    g2 = Cnf.make([clause(neg(T3(1, 1, 1)), pos(T1(1)))], [T3(1, 1, 1), T1(1)])
    assert apply_substitution(g2, tau).clause_set == {clause(neg(1), pos(1))}


@pytest.mark.parametrize("seed", range(6))
def test_sat_restriction_substitution_identity(seed):
    rng = Random(seed)
    n, r = rng.randint(1, 3), rng.randint(1, 3)
    f = random_cnf(rng, n, r)
    reduced = apply_substitution(
        restrict_cnf(gen_sat(n, len(f.clauses)), gamma_assignment(f)),
        tau_substitution(f))
    nontaut = frozenset(c for c in reduced.clauses if not is_tautological(c))
    assert nontaut == f.clause_set


def test_double_unit_cnf_identity():
    f = Cnf.make([clause(pos(1)), clause(neg(1))], [1])
    reduced = apply_substitution(
        restrict_cnf(gen_sat(1, 2), gamma_assignment(f)), tau_substitution(f))
    assert clause(pos(1)) in reduced.clause_set
    assert clause(neg(1)) in reduced.clause_set


def test_home_pairs():
    assert home_pair(I(3, 1)) == (1, 3)
    assert home_pair(D(2, 1, 1, 0)) == (2, 1)
    assert home_pair(S(2, 4, 5)) == (4, 5)
    assert home_pair(Cv(1, 1, 1)) is None
    assert home_pair(T1(1)) is None
    assert mentioned_pairs(clause(pos(D(2, 1, 1, 0)), pos(L(2, 1, 1)))) == {(2, 1)}
    assert mentioned_pairs(frozenset()) == frozenset()


def test_generated_variables_within_ranges():
    for (n, r, s, t, k) in [(1, 1, 2, 2, 1), (2, 2, 2, 2, 2), (3, 1, 2, 3, 1)]:
        g = gen_rkref_nr(n, r, s, t, k)
        universe = set(g.variables)
        for c in g.clauses:
            for l in c:
                assert l.var in universe


def test_paramset_validation_predicates():
    p = ParamSet(4, 3, 5, 16, 1)
    assert p.satisfies_width_lb(7)
    assert not p.satisfies_width_lb(8)
    assert p.satisfies_switching(1.0, 4)
    assert not p.satisfies_switching(0.1, 4)
    assert p.satisfies_main_lb(1.0, 4)
    with pytest.raises(ValueError):
        ParamSet(0, 1, 1, 1)


def test_refvar_parse_roundtrip():
    for v in (D(1, 2, 1, 0), L(2, 1, 3), I(4, 2), S(1, 2, 3), Cv(1, 1, 1),
              T1(3), T3(1, 2, 0)):
        assert parse_refvar(repr(v)) == v


def test_reflection_conjunction_shares_c_block():
    conj = reflection_conjunction(1, 1, 1, 1, 1)
    sat = gen_sat(1, 1)
    rk = gen_rkref_nr(1, 1, 1, 1, 1)
    assert conj.clause_set == sat.clause_set | rk.clause_set
    assert len(conj.variables) == len(sat.variables) + len(rk.variables) - 2
