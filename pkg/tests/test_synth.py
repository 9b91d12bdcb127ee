"""The constructive refutation: validity, size tracking, restriction chain."""

import itertools
from random import Random

import pytest

from reskit.core import Cnf, Lit, clause, eval_clause, pos, neg
from reskit.encodings import (gamma_assignment, gen_rkref_f, gen_sat,
                              gen_rkref_nr, tau_substitution)
from reskit.proofsys import proof_metrics, substitute_proof, verify_resk
from reskit.synth import size_bound, synth_reflection_refutation
from conftest import brute_force_satisfiable, random_cnf

# measured once over the acceptance grid and frozen; the polynomial has
# unit coefficients, so the constant absorbs rule bookkeeping overhead
SIZE_RATIO_CAP = 32
BASE_RATIO_CAP = 32


def test_size_bound_values():
    assert size_bound(1, 1, 1, 1, 1) == 7
    assert size_bound(2, 1, 1, 1, 1) == 23
    assert size_bound(1, 2, 1, 1, 1) == 2 + 4 + 2 + 1 + 1 + 1 + 1


def test_size_bound_monotone():
    base = (2, 2, 2, 2, 2)
    v0 = size_bound(*base)
    for pos_ in range(5):
        bumped = list(base)
        bumped[pos_] += 1
        assert size_bound(*bumped) >= v0


@pytest.mark.parametrize("params", [
    (1, 1, 1, 1, 1), (1, 1, 2, 2, 2), (2, 2, 2, 2, 1), (2, 1, 2, 2, 2),
    (1, 2, 2, 1, 1), (3, 2, 2, 2, 1), (1, 3, 3, 1, 2), (2, 2, 1, 3, 3),
])
def test_synthesis_validity_and_size(params):
    trace = synth_reflection_refutation(*params)
    rep = verify_resk(trace.proof, trace.cnf, refutation=True)
    assert rep.valid, rep.violation
    _, size = proof_metrics(trace.proof)
    assert size <= SIZE_RATIO_CAP * size_bound(*params)


def test_initial_lines_belong_to_conjunction():
    trace = synth_reflection_refutation(2, 2, 2, 2, 1)
    for g, just in trace.proof.lines:
        if just[0] == "in":
            assert g.as_clause() == trace.cnf.clauses[just[1]]
    assert trace.proof.final().is_false()


def test_d_lines_cover_grid():
    trace = synth_reflection_refutation(1, 1, 3, 2, 1)
    assert set(trace.d_line_ids) == {(i, j) for i in (1, 2, 3) for j in (1, 2)}


def test_phase_accounting():
    n, r, s, t, k = 2, 2, 3, 2, 1
    trace = synth_reflection_refutation(n, r, s, t, k)
    counts = trace.phase_counts()
    assert set(counts) == {"base", "induction(2)", "induction(3)", "finish"}
    base_poly = t * (r * n ** 2 + r ** 2 + r * n * k)
    assert counts["base"] <= BASE_RATIO_CAP * base_poly


def test_line_cache_reuses_axioms():
    trace = synth_reflection_refutation(2, 1, 2, 2, 1)
    ax_lines = [g.terms for g, j in trace.proof.lines if j[0] == "ax"]
    assert len(ax_lines) == len(set(ax_lines))


def _satisfying(f):
    return brute_force_satisfiable(f)


@pytest.mark.parametrize("seed", range(8))
def test_restriction_chain_on_satisfiable(seed):
    rng = Random(seed)
    n = rng.randint(1, 3)
    f = random_cnf(rng, n, rng.randint(1, 3))
    nu = _satisfying(f)
    if nu is None:
        f = Cnf.make([clause(pos(1))] if n == 1 else
                     [clause(pos(v)) for v in range(1, n + 1)], range(1, n + 1))
        nu = _satisfying(f)
    r = len(f.clauses)
    s, t, k = 2, 2, rng.choice((1, 2))
    trace = synth_reflection_refutation(n, r, s, t, k)
    p1, c1 = substitute_proof(trace.proof, trace.cnf, gamma_assignment(f))
    p2, c2 = substitute_proof(p1, c1, tau_substitution(f))
    p3, c3 = substitute_proof(p2, c2, nu)
    target = gen_rkref_f(f, s, t, k)
    assert c3.clause_set == target.clause_set
    rep = verify_resk(p3, target, refutation=True)
    assert rep.valid, rep.violation
    # the fully restricted proof is plain resolution
    assert all(len(term) <= 1 for g, _ in p3.lines for term in g.terms)


def test_conjunction_unsatisfiable_micro():
    trace = synth_reflection_refutation(1, 1, 1, 1, 1)
    assert brute_force_satisfiable(trace.cnf) is None
