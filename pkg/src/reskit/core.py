"""Clauses, terms, DNFs, CNFs and partial assignments.

Variables are hashable identifiers: plain ints for object variables
x_1..x_n, or structured ids (see encodings.RefVar) for encoding
variables.  A literal is a (var, sign) pair with sign 1 for the
positive literal and 0 for the negative one.  Clauses and terms are
frozensets of literals; evaluation under a partial assignment is
three-valued (True / False / None for undetermined).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Hashable, Iterable, NamedTuple, Optional


class Lit(NamedTuple):
    var: Hashable
    sign: int  # 1 positive, 0 negative

    def neg(self) -> "Lit":
        return Lit(self.var, 1 - self.sign)

    def __repr__(self) -> str:
        return ("" if self.sign else "~") + str(self.var)


Clause = frozenset  # frozenset[Lit], read as a disjunction
Term = frozenset    # frozenset[Lit], read as a conjunction

EMPTY_CLAUSE: Clause = frozenset()


def pos(var) -> Lit:
    return Lit(var, 1)


def neg(var) -> Lit:
    return Lit(var, 0)


def clause(*lits: Lit) -> Clause:
    return frozenset(lits)


def var_key(var) -> tuple:
    """Total order on variable identifiers, ints before structured ids."""
    key = getattr(var, "sort_key", None)
    if key is not None:
        return (1,) + key()
    return (0, var)


def lit_key(lit: Lit) -> tuple:
    return (var_key(lit.var), lit.sign)


def clause_key(c: Clause) -> tuple:
    return tuple(sorted(lit_key(l) for l in c))


def sorted_lits(c: Iterable[Lit]) -> list:
    return sorted(c, key=lit_key)


def is_tautological(c: Clause) -> bool:
    return any(l.neg() in c for l in c)


@dataclass(frozen=True)
class Cnf:
    """A CNF as a canonically ordered, deduplicated tuple of clauses.

    ``variables`` is the ordered variable universe; every literal in
    every clause ranges over it.  Two Cnfs with equal clause tuples and
    universes compare equal, and emitted files are byte-deterministic.
    """

    clauses: tuple
    variables: tuple

    @staticmethod
    def make(clauses: Iterable[Clause], variables: Iterable) -> "Cnf":
        universe = tuple(variables)
        known = set(universe)
        cls = tuple(sorted(set(map(frozenset, clauses)), key=clause_key))
        for c in cls:
            for l in c:
                if l.var not in known:
                    raise ValueError(f"literal variable {l.var!r} outside the universe")
        return Cnf(cls, universe)

    @property
    def clause_set(self) -> frozenset:
        return frozenset(self.clauses)

    def index_of(self, c: Clause) -> int:
        try:
            return self.clauses.index(frozenset(c))
        except ValueError:
            raise KeyError(f"clause not in CNF: {sorted_lits(c)}") from None

    def restrict(self, sigma: dict) -> "Cnf":
        return restrict_cnf(self, sigma)

    def prune_universe(self) -> "Cnf":
        """Drop universe variables that occur in no clause."""
        used = {l.var for c in self.clauses for l in c}
        return Cnf(self.clauses, tuple(v for v in self.variables if v in used))

    def __len__(self) -> int:
        return len(self.clauses)


@dataclass(frozen=True)
class KDnf:
    """A k-DNF: a set of terms, each with at most k literals.

    1-DNFs are identified with clauses; the empty DNF is the constant
    false and a DNF containing the empty term is the constant true.
    """

    terms: frozenset
    k: int

    @staticmethod
    def make(terms: Iterable[Term], k: int) -> "KDnf":
        ts = frozenset(map(frozenset, terms))
        for t in ts:
            if len(t) > k:
                raise ValueError(f"term with {len(t)} literals exceeds width {k}")
        return KDnf(ts, k)

    @staticmethod
    def from_clause(c: Clause, k: int = 1) -> "KDnf":
        return KDnf.make((frozenset([l]) for l in c), k)

    def is_clause(self) -> bool:
        return all(len(t) == 1 for t in self.terms)

    def as_clause(self) -> Clause:
        if not self.is_clause():
            raise ValueError("DNF has a non-singleton term")
        return frozenset(l for t in self.terms for l in t)

    def is_true(self) -> bool:
        return frozenset() in self.terms

    def is_false(self) -> bool:
        return not self.terms

    def sorted_terms(self) -> list:
        return sorted(self.terms, key=clause_key)

    def num_literals(self) -> int:
        return sum(len(t) for t in self.terms)


# ---------------------------------------------------------------------------
# partial assignments

def assignments_compatible(sigma: dict, tau: dict) -> bool:
    """True iff the union of the two partial assignments is a function."""
    small, big = (sigma, tau) if len(sigma) <= len(tau) else (tau, sigma)
    return all(big.get(v, b) == b for v, b in small.items())


def eval_lit(lit: Lit, sigma: dict) -> Optional[bool]:
    v = sigma.get(lit.var)
    if v is None:
        return None
    return v == lit.sign


def eval_clause(c: Clause, sigma: dict) -> Optional[bool]:
    undetermined = False
    for l in c:
        v = eval_lit(l, sigma)
        if v is True:
            return True
        if v is None:
            undetermined = True
    return None if undetermined else False


def eval_term(t: Term, sigma: dict) -> Optional[bool]:
    undetermined = False
    for l in t:
        v = eval_lit(l, sigma)
        if v is False:
            return False
        if v is None:
            undetermined = True
    return None if undetermined else True


def eval_dnf(g: KDnf, sigma: dict) -> Optional[bool]:
    undetermined = False
    for t in g.terms:
        v = eval_term(t, sigma)
        if v is True:
            return True
        if v is None:
            undetermined = True
    return None if undetermined else False


def restrict_clause(c: Clause, sigma: dict) -> Optional[Clause]:
    """Restricted clause, or None when some literal is satisfied."""
    out = []
    for l in c:
        v = eval_lit(l, sigma)
        if v is True:
            return None
        if v is None:
            out.append(l)
    return frozenset(out)


def restrict_cnf(f: Cnf, sigma: dict) -> Cnf:
    """Drop satisfied clauses, delete falsified literals; universe kept."""
    kept = []
    for c in f.clauses:
        rc = restrict_clause(c, sigma)
        if rc is not None:
            kept.append(rc)
    return Cnf.make(kept, f.variables)


def restrict_term(t: Term, sigma: dict) -> Optional[Term]:
    """Restricted term, or None when some literal is falsified."""
    out = []
    for l in t:
        v = eval_lit(l, sigma)
        if v is False:
            return None
        if v is None:
            out.append(l)
    return frozenset(out)


def restrict_dnf(g: KDnf, sigma: dict) -> KDnf:
    """Drop falsified terms, delete satisfied literals from the rest.

    A fully satisfied term yields the empty term, i.e. the constant
    true DNF.
    """
    kept = []
    for t in g.terms:
        rt = restrict_term(t, sigma)
        if rt is not None:
            kept.append(rt)
    return KDnf(frozenset(kept), g.k)


def resolve(c1: Clause, c2: Clause, var) -> Clause:
    """Resolvent of c1 and c2 on var; var must be positive in c1, negative in c2."""
    p, n = Lit(var, 1), Lit(var, 0)
    if p not in c1 or n not in c2:
        raise ValueError(f"pivot {var!r} missing: needs {var!r} in first premise and its negation in second")
    return (c1 - {p}) | (c2 - {n})
