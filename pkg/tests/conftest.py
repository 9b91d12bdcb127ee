"""Shared generators and brute-force oracles for the test suite."""

import itertools
from random import Random

import pytest

from reskit.core import (Cnf, KDnf, Lit, clause, eval_clause, is_tautological,
                         neg, pos, resolve)
from reskit.proofsys import ReskProof, verify_resk


def brute_force_satisfiable(f: Cnf):
    """Exhaustive model search; returns a satisfying assignment or None."""
    vs = list(f.variables)
    assert len(vs) <= 20
    for bits in itertools.product((0, 1), repeat=len(vs)):
        sigma = dict(zip(vs, bits))
        if all(eval_clause(c, sigma) is True for c in f.clauses):
            return sigma
    return None


def random_cnf(rng: Random, n: int, r: int) -> Cnf:
    """Random CNF of non-tautological clauses over x_1..x_n."""
    cls = []
    for _ in range(r):
        width = rng.randint(1, min(3, n))
        vs = rng.sample(range(1, n + 1), width)
        cls.append(frozenset(Lit(v, rng.randint(0, 1)) for v in vs))
    return Cnf.make(cls, range(1, n + 1))


def random_unsat_cnf(rng: Random, n: int) -> Cnf:
    """Random CNF forced unsatisfiable: either all full clauses over the
    variables, or a random CNF with a complementary unit pair added."""
    if rng.random() < 0.3:
        cls = [frozenset(Lit(v, bits[v - 1]) for v in range(1, n + 1))
               for bits in itertools.product((0, 1), repeat=n)]
        return Cnf.make(cls, range(1, n + 1))
    f = random_cnf(rng, n, rng.randint(1, 4))
    x = rng.randint(1, n)
    return Cnf.make(list(f.clauses) + [clause(pos(x)), clause(neg(x))], range(1, n + 1))


def dp_refutation(f: Cnf, rng: Random = None) -> ReskProof:
    """Resolution refutation by variable elimination; f must be
    unsatisfiable.  Optionally sprinkles junk weakening lines."""
    lines = []
    index = {}

    def add(c, just):
        if c in index:
            return index[c]
        lines.append((KDnf.from_clause(c, 1), just))
        index[c] = len(lines) - 1
        return index[c]

    cur = {}
    for m, c in enumerate(f.clauses):
        add(c, ("in", m))
        if not is_tautological(c):
            cur[c] = index[c]
    for x in f.variables:
        if frozenset() in cur:
            break
        pos_c = [c for c in cur if Lit(x, 1) in c]
        neg_c = [c for c in cur if Lit(x, 0) in c]
        rest = {c: i for c, i in cur.items()
                if Lit(x, 1) not in c and Lit(x, 0) not in c}
        for cp in pos_c:
            for cn in neg_c:
                res = resolve(cp, cn, x)
                if is_tautological(res):
                    continue
                rid = add(res, ("cut", cur[cp], cur[cn]))
                rest.setdefault(res, rid)
        cur = rest
    assert frozenset() in index, "input was satisfiable"
    if rng is not None and len(lines) > 1:
        for _ in range(rng.randint(0, 3)):
            src = rng.randrange(len(lines))
            g = lines[src][0]
            extra = Lit(rng.randint(1, max(f.variables)), rng.randint(0, 1))
            lines.append((KDnf(g.terms | {frozenset([extra])}, 1), ("wk", src)))
    empty_id = index[frozenset()]
    if lines[-1][0].terms != frozenset():
        lines.append((lines[empty_id][0], ("wk", empty_id)))
    return ReskProof.make(1, lines)


@pytest.fixture
def rng():
    return Random(0xC0FFEE)


def assert_valid_refutation(proof, f):
    rep = verify_resk(proof, f, refutation=True)
    assert rep.valid, rep.violation
    return rep
