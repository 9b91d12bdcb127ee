"""Formula families: satisfiability and refutation statements.

The refutation statement over parameters (s, t) asserts that a CNF F
(r clauses over x_1..x_n) has a resolution refutation arranged in s
levels of t clauses.  Variable blocks:

  D(i,j,l,b)   literal x_l^b is in grid clause C_{i,j}
  L(i,j,j') / R(i,j,j')   C_{i-1,j'} is the premise holding the
               positive / negative literal of the resolved variable
  V(i,j,l)     C_{i,j} is obtained by resolving on x_l
  I(j,m)       C_{1,j} is a weakening of F's clause C_m
  S(u,i,j)     relativization selectors; a pair (i,j) is selected when
               all k of its S-bits hold
  C(m,l,b)     clause description bits of the satisfiability statement
  T(l), T(m,l,b)   satisfying-assignment witness bits

The satisfiability statement and the "described clauses" refutation
statement share only the C block, so plugging a concrete F in via
``gamma_assignment`` specializes the latter to the fixed-F variant.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Optional, Union

from .core import (Clause, Cnf, Lit, clause, neg, pos, restrict_clause,
                   is_tautological)

# canonical block order for variable enumeration (DIMACS and sorting)
KIND_ORDER = {"C": 0, "T1": 1, "T3": 2, "D": 3, "I": 4, "V": 5, "L": 6, "R": 7, "S": 8}


@dataclass(frozen=True)
class RefVar:
    """Structured encoding-variable identifier: a kind plus an index tuple."""

    kind: str
    idx: tuple

    def sort_key(self) -> tuple:
        return (KIND_ORDER[self.kind], self.idx)

    def __repr__(self) -> str:
        label = "T" if self.kind in ("T1", "T3") else self.kind
        return f"{label}[{','.join(map(str, self.idx))}]"


def D(i, j, l, b) -> RefVar:
    return RefVar("D", (i, j, l, b))


def L(i, j, jp) -> RefVar:
    return RefVar("L", (i, j, jp))


def R(i, j, jp) -> RefVar:
    return RefVar("R", (i, j, jp))


def V(i, j, l) -> RefVar:
    return RefVar("V", (i, j, l))


def I(j, m) -> RefVar:
    return RefVar("I", (j, m))


def S(u, i, j) -> RefVar:
    return RefVar("S", (u, i, j))


def Cv(m, l, b) -> RefVar:
    return RefVar("C", (m, l, b))


def T1(l) -> RefVar:
    return RefVar("T1", (l,))


def T3(m, l, b) -> RefVar:
    return RefVar("T3", (m, l, b))


def parse_refvar(text: str) -> RefVar:
    """Inverse of repr: D[1,2,1,0] -> RefVar('D', (1,2,1,0))."""
    kind, rest = text.split("[", 1)
    idx = tuple(int(x) for x in rest.rstrip("]").split(","))
    if kind == "T":
        kind = "T1" if len(idx) == 1 else "T3"
    if kind not in KIND_ORDER:
        raise ValueError(f"unknown variable kind {kind!r}")
    return RefVar(kind, idx)


def home_pair(v) -> Optional[tuple]:
    """Grid coordinate owning a variable; None for C and T blocks."""
    if not isinstance(v, RefVar):
        return None
    k = v.kind
    if k in ("D", "V", "L", "R"):
        return (v.idx[0], v.idx[1])
    if k == "I":
        return (1, v.idx[0])
    if k == "S":
        return (v.idx[1], v.idx[2])
    return None


def mentioned_pairs(obj) -> frozenset:
    """Home pairs mentioned in a clause, term or partial assignment."""
    if isinstance(obj, dict):
        vs = obj.keys()
    else:
        vs = (l.var for l in obj)
    return frozenset(p for p in map(home_pair, vs) if p is not None)


@dataclass(frozen=True)
class ParamSet:
    """Grid parameters; the hypothesis predicates are advisory, never enforced."""

    n: int
    r: int
    s: int
    t: int
    k: int = 1

    def __post_init__(self):
        for name in ("n", "r", "s", "t", "k"):
            if getattr(self, name) < 1:
                raise ValueError(f"parameter {name} must be >= 1")

    def satisfies_switching(self, delta: float, n0: int) -> bool:
        return self.r <= self.t <= 2 ** (delta * self.n) and n0 <= self.n

    def satisfies_width_lb(self, w: int) -> bool:
        return 2 <= self.n + 1 <= self.s and 2 * w < self.t

    def satisfies_main_lb(self, delta: float, n0: int) -> bool:
        return (n0 <= self.n and self.n + 1 <= self.s <= self.t
                and self.r <= self.t <= 2 ** (delta * self.n)
                and self.n ** self.k <= self.t)

    def pairs(self):
        return itertools.product(range(1, self.s + 1), range(1, self.t + 1))


# ---------------------------------------------------------------------------
# variable universes, in canonical block order

def sat_universe(n: int, r: int) -> list:
    out = [Cv(m, l, b) for m in range(1, r + 1) for l in range(1, n + 1) for b in (0, 1)]
    out += [T1(l) for l in range(1, n + 1)]
    out += [T3(m, l, b) for m in range(1, r + 1) for l in range(1, n + 1) for b in (0, 1)]
    return out


def ref_universe(n: int, r: int, s: int, t: int) -> list:
    out = [D(i, j, l, b)
           for i in range(1, s + 1) for j in range(1, t + 1)
           for l in range(1, n + 1) for b in (0, 1)]
    out += [I(j, m) for j in range(1, t + 1) for m in range(1, r + 1)]
    out += [V(i, j, l)
            for i in range(2, s + 1) for j in range(1, t + 1) for l in range(1, n + 1)]
    out += [L(i, j, jp)
            for i in range(2, s + 1) for j in range(1, t + 1) for jp in range(1, t + 1)]
    out += [R(i, j, jp)
            for i in range(2, s + 1) for j in range(1, t + 1) for jp in range(1, t + 1)]
    return out


def s_universe(s: int, t: int, k: int) -> list:
    return [S(u, i, j) for u in range(1, k + 1)
            for i in range(1, s + 1) for j in range(1, t + 1)]


def check_object_cnf(f: Cnf) -> int:
    """Check F ranges over x_1..x_n for some n and return that n."""
    for v in f.variables:
        if not isinstance(v, int) or v < 1:
            raise ValueError(f"object CNF must use integer variables 1..n, got {v!r}")
    n = max(f.variables, default=0)
    if set(f.variables) != set(range(1, n + 1)):
        raise ValueError("object CNF universe must be exactly x_1..x_n")
    return n


# ---------------------------------------------------------------------------
# the satisfiability statement

def gen_sat(n: int, r: int) -> Cnf:
    """Clauses stating that the C-described CNF has a satisfying assignment."""
    ParamSet(n, r, 1, 1)
    cls = []
    for m in range(1, r + 1):
        # each described clause is satisfied through at least one literal
        cls.append(clause(*(pos(T3(m, l, b)) for l in range(1, n + 1) for b in (1, 0))))
        for l in range(1, n + 1):
            cls.append(clause(neg(T3(m, l, 1)), pos(T1(l))))
            cls.append(clause(neg(T3(m, l, 0)), neg(T1(l))))
            for b in (0, 1):
                cls.append(clause(neg(T3(m, l, b)), pos(Cv(m, l, b))))
    return Cnf.make(cls, sat_universe(n, r))


# ---------------------------------------------------------------------------
# refutation statements

def _ref_core_clauses(n: int, r: int, s: int, t: int) -> list:
    """Families shared by the fixed-F and described-clauses variants.

    Everything except the level-1 weakening axioms: non-tautology, the
    premise/transfer constraints, the empty final cell, and the domain
    and functionality clauses for V, I, L, R.  Symmetric functionality
    pairs are emitted once per unordered index pair.
    """
    cls = []
    rng_n = range(1, n + 1)
    rng_t = range(1, t + 1)
    for i in range(1, s + 1):
        for j in rng_t:
            for l in rng_n:
                cls.append(clause(neg(D(i, j, l, 1)), neg(D(i, j, l, 0))))
    for i in range(2, s + 1):
        for j in rng_t:
            for jp in rng_t:
                for l in rng_n:
                    cls.append(clause(neg(L(i, j, jp)), neg(V(i, j, l)), pos(D(i - 1, jp, l, 1))))
                    cls.append(clause(neg(R(i, j, jp)), neg(V(i, j, l)), pos(D(i - 1, jp, l, 0))))
                    for lp in rng_n:
                        for b in (0, 1):
                            if (lp, b) != (l, 1):
                                cls.append(clause(neg(L(i, j, jp)), neg(V(i, j, l)),
                                                  neg(D(i - 1, jp, lp, b)), pos(D(i, j, lp, b))))
                            if (lp, b) != (l, 0):
                                cls.append(clause(neg(R(i, j, jp)), neg(V(i, j, l)),
                                                  neg(D(i - 1, jp, lp, b)), pos(D(i, j, lp, b))))
    for l in rng_n:
        for b in (0, 1):
            cls.append(clause(neg(D(s, t, l, b))))
    for i in range(2, s + 1):
        for j in rng_t:
            cls.append(clause(*(pos(V(i, j, l)) for l in rng_n)))
            cls.append(clause(*(pos(L(i, j, jp)) for jp in rng_t)))
            cls.append(clause(*(pos(R(i, j, jp)) for jp in rng_t)))
    for j in rng_t:
        cls.append(clause(*(pos(I(j, m)) for m in range(1, r + 1))))
    for i in range(2, s + 1):
        for j in rng_t:
            for l, lp in itertools.combinations(rng_n, 2):
                cls.append(clause(neg(V(i, j, l)), neg(V(i, j, lp))))
            for jp, jpp in itertools.combinations(rng_t, 2):
                cls.append(clause(neg(L(i, j, jp)), neg(L(i, j, jpp))))
                cls.append(clause(neg(R(i, j, jp)), neg(R(i, j, jpp))))
    for j in rng_t:
        for m, mp in itertools.combinations(range(1, r + 1), 2):
            cls.append(clause(neg(I(j, m)), neg(I(j, mp))))
    return cls


def gen_ref_functionality(n: int, r: int, s: int, t: int) -> Cnf:
    """Just the domain and functionality families of the refutation statement."""
    cls = []
    rng_n, rng_t = range(1, n + 1), range(1, t + 1)
    for i in range(2, s + 1):
        for j in rng_t:
            cls.append(clause(*(pos(V(i, j, l)) for l in rng_n)))
            cls.append(clause(*(pos(L(i, j, jp)) for jp in rng_t)))
            cls.append(clause(*(pos(R(i, j, jp)) for jp in rng_t)))
            for l, lp in itertools.combinations(rng_n, 2):
                cls.append(clause(neg(V(i, j, l)), neg(V(i, j, lp))))
            for jp, jpp in itertools.combinations(rng_t, 2):
                cls.append(clause(neg(L(i, j, jp)), neg(L(i, j, jpp))))
                cls.append(clause(neg(R(i, j, jp)), neg(R(i, j, jpp))))
    for j in rng_t:
        cls.append(clause(*(pos(I(j, m)) for m in range(1, r + 1))))
        for m, mp in itertools.combinations(range(1, r + 1), 2):
            cls.append(clause(neg(I(j, m)), neg(I(j, mp))))
    return Cnf.make(cls, ref_universe(n, r, s, t))


def gen_ref_f(f: Cnf, s: int, t: int) -> Cnf:
    """Refutation statement for a fixed CNF f."""
    n = check_object_cnf(f)
    r = len(f.clauses)
    ParamSet(n, r, s, t)
    cls = _ref_core_clauses(n, r, s, t)
    for j in range(1, t + 1):
        for m, cm in enumerate(f.clauses, start=1):
            for lit in cm:
                cls.append(clause(neg(I(j, m)), pos(D(1, j, lit.var, lit.sign))))
    return Cnf.make(cls, ref_universe(n, r, s, t))


def gen_ref_nr(n: int, r: int, s: int, t: int) -> Cnf:
    """Refutation statement with the refuted clauses described by C-variables."""
    ParamSet(n, r, s, t)
    cls = _ref_core_clauses(n, r, s, t)
    for j in range(1, t + 1):
        for m in range(1, r + 1):
            for l in range(1, n + 1):
                for b in (0, 1):
                    cls.append(clause(neg(I(j, m)), neg(Cv(m, l, b)), pos(D(1, j, l, b))))
    universe = ([Cv(m, l, b) for m in range(1, r + 1)
                 for l in range(1, n + 1) for b in (0, 1)]
                + ref_universe(n, r, s, t))
    return Cnf.make(cls, universe)


# ---------------------------------------------------------------------------
# relativized refutation statements

def _guard(i: int, j: int, k: int) -> list:
    return [neg(S(u, i, j)) for u in range(1, k + 1)]


def _relativize(cls_with_pairs: Iterable, s: int, t: int, k: int) -> list:
    """Prefix each (pair, clause) with the selector guard of its pair,
    and add the selector units for (s,t) plus the premise-selection guards."""
    out = []
    for (i, j), c in cls_with_pairs:
        out.append(frozenset(_guard(i, j, k)) | c)
    for u in range(1, k + 1):
        out.append(clause(pos(S(u, s, t))))
    for i in range(2, s + 1):
        for j in range(1, t + 1):
            for jp in range(1, t + 1):
                for up in range(1, k + 1):
                    out.append(frozenset(_guard(i, j, k))
                               | clause(neg(L(i, j, jp)), pos(S(up, i - 1, jp))))
                    out.append(frozenset(_guard(i, j, k))
                               | clause(neg(R(i, j, jp)), pos(S(up, i - 1, jp))))
    return out


def _core_clauses_with_pairs(n: int, r: int, s: int, t: int) -> list:
    """Same families as _ref_core_clauses, tagged with the guarding pair."""
    out = []
    rng_n, rng_t = range(1, n + 1), range(1, t + 1)
    for i in range(1, s + 1):
        for j in rng_t:
            for l in rng_n:
                out.append(((i, j), clause(neg(D(i, j, l, 1)), neg(D(i, j, l, 0)))))
    for i in range(2, s + 1):
        for j in rng_t:
            for jp in rng_t:
                for l in rng_n:
                    out.append(((i, j), clause(neg(L(i, j, jp)), neg(V(i, j, l)),
                                               pos(D(i - 1, jp, l, 1)))))
                    out.append(((i, j), clause(neg(R(i, j, jp)), neg(V(i, j, l)),
                                               pos(D(i - 1, jp, l, 0)))))
                    for lp in rng_n:
                        for b in (0, 1):
                            if (lp, b) != (l, 1):
                                out.append(((i, j), clause(neg(L(i, j, jp)), neg(V(i, j, l)),
                                                           neg(D(i - 1, jp, lp, b)),
                                                           pos(D(i, j, lp, b)))))
                            if (lp, b) != (l, 0):
                                out.append(((i, j), clause(neg(R(i, j, jp)), neg(V(i, j, l)),
                                                           neg(D(i - 1, jp, lp, b)),
                                                           pos(D(i, j, lp, b)))))
    for l in rng_n:
        for b in (0, 1):
            out.append(((s, t), clause(neg(D(s, t, l, b)))))
    for i in range(2, s + 1):
        for j in rng_t:
            out.append(((i, j), clause(*(pos(V(i, j, l)) for l in rng_n))))
            out.append(((i, j), clause(*(pos(L(i, j, jp)) for jp in rng_t))))
            out.append(((i, j), clause(*(pos(R(i, j, jp)) for jp in rng_t))))
            for l, lp in itertools.combinations(rng_n, 2):
                out.append(((i, j), clause(neg(V(i, j, l)), neg(V(i, j, lp)))))
            for jp, jpp in itertools.combinations(rng_t, 2):
                out.append(((i, j), clause(neg(L(i, j, jp)), neg(L(i, j, jpp)))))
                out.append(((i, j), clause(neg(R(i, j, jp)), neg(R(i, j, jpp)))))
    for j in rng_t:
        out.append(((1, j), clause(*(pos(I(j, m)) for m in range(1, r + 1)))))
        for m, mp in itertools.combinations(range(1, r + 1), 2):
            out.append(((1, j), clause(neg(I(j, m)), neg(I(j, mp)))))
    return out


def gen_rkref_f(f: Cnf, s: int, t: int, k: int) -> Cnf:
    """k-fold relativization of the fixed-F refutation statement."""
    n = check_object_cnf(f)
    r = len(f.clauses)
    ParamSet(n, r, s, t, k)
    tagged = _core_clauses_with_pairs(n, r, s, t)
    for j in range(1, t + 1):
        for m, cm in enumerate(f.clauses, start=1):
            for lit in cm:
                tagged.append(((1, j), clause(neg(I(j, m)), pos(D(1, j, lit.var, lit.sign)))))
    cls = _relativize(tagged, s, t, k)
    universe = ref_universe(n, r, s, t) + s_universe(s, t, k)
    return Cnf.make(cls, universe)


def gen_rkref_nr(n: int, r: int, s: int, t: int, k: int) -> Cnf:
    """k-fold relativization of the described-clauses refutation statement."""
    ParamSet(n, r, s, t, k)
    tagged = _core_clauses_with_pairs(n, r, s, t)
    for j in range(1, t + 1):
        for m in range(1, r + 1):
            for l in range(1, n + 1):
                for b in (0, 1):
                    tagged.append(((1, j), clause(neg(I(j, m)), neg(Cv(m, l, b)),
                                                  pos(D(1, j, l, b)))))
    cls = _relativize(tagged, s, t, k)
    universe = ([Cv(m, l, b) for m in range(1, r + 1)
                 for l in range(1, n + 1) for b in (0, 1)]
                + ref_universe(n, r, s, t) + s_universe(s, t, k))
    return Cnf.make(cls, universe)


def all_selectors_on(s: int, t: int, k: int) -> dict:
    return {S(u, i, j): 1 for u in range(1, k + 1)
            for i in range(1, s + 1) for j in range(1, t + 1)}


# ---------------------------------------------------------------------------
# pigeonhole family

def gen_php(n: int) -> Cnf:
    """Negation of the pigeonhole principle: n+1 pigeons into n holes.

    Variables p_{i,j} are numbered (i-1)*n + j; pigeon clauses say each
    pigeon sits somewhere, hole clauses forbid sharing.
    """
    if n < 1:
        raise ValueError("n must be >= 1")

    def p(i, j):
        return (i - 1) * n + j

    cls = []
    for i in range(1, n + 2):
        cls.append(clause(*(pos(p(i, j)) for j in range(1, n + 1))))
    for j in range(1, n + 1):
        for i1, i2 in itertools.combinations(range(1, n + 2), 2):
            cls.append(clause(neg(p(i1, j)), neg(p(i2, j))))
    return Cnf.make(cls, range(1, (n + 1) * n + 1))


# ---------------------------------------------------------------------------
# the substitution bridging the described and fixed statements

Substitution = dict  # var -> 0 | 1 | Lit


def gamma_assignment(f: Cnf) -> dict:
    """Total assignment on C-variables describing f's clauses."""
    n = check_object_cnf(f)
    gamma = {}
    for m, cm in enumerate(f.clauses, start=1):
        for l in range(1, n + 1):
            for b in (0, 1):
                gamma[Cv(m, l, b)] = 1 if Lit(l, b) in cm else 0
    return gamma


def tau_substitution(f: Cnf) -> Substitution:
    """Map T-variables to object literals (or 0) so the restricted
    satisfiability statement collapses to f plus tautologies.

    Total on the assignment bits: T(l) maps to x_l even for variables
    occurring in no clause, which leaves the residue unchanged and lets
    downstream proof substitutions collapse every witness term.
    """
    n = check_object_cnf(f)
    tau: Substitution = {T1(l): Lit(l, 1) for l in range(1, n + 1)}
    for m, cm in enumerate(f.clauses, start=1):
        for l in range(1, n + 1):
            for b in (0, 1):
                if Lit(l, b) in cm:
                    tau[T3(m, l, b)] = Lit(l, b)
                else:
                    tau[T3(m, l, b)] = 0
    return tau


def substitute_lit(lit: Lit, tau: Substitution) -> Union[int, Lit]:
    """Image of a literal: 0, 1, or a literal."""
    img = tau.get(lit.var)
    if img is None:
        return lit
    if isinstance(img, Lit):
        return img if lit.sign == 1 else img.neg()
    return img if lit.sign == 1 else 1 - img


def substitute_clause(c: Clause, tau: Substitution) -> Optional[Clause]:
    """Transformed clause, or None when satisfied by a constant."""
    out = []
    for lit in c:
        img = substitute_lit(lit, tau)
        if img == 1:
            return None
        if img == 0:
            continue
        out.append(img)
    return frozenset(out)


def apply_substitution(g: Cnf, tau: Substitution) -> Cnf:
    """Apply a variable-to-constant-or-literal substitution to a CNF.

    Satisfied clauses vanish, falsified literals are deleted, literal
    images are spliced in; tautological results are retained.
    """
    kept = []
    for c in g.clauses:
        sc = substitute_clause(c, tau)
        if sc is not None:
            kept.append(sc)
    # original universe kept (matching plain restriction); image variables
    # appended in first-use order
    universe = list(g.variables)
    seen = set(universe)
    for v in g.variables:
        img = tau.get(v)
        if isinstance(img, Lit) and img.var not in seen:
            universe.append(img.var)
            seen.add(img.var)
    return Cnf.make(kept, universe)


def conjunction(a: Cnf, b: Cnf) -> Cnf:
    """Union of two CNFs; shared variables must agree in both universes."""
    seen = set(a.variables)
    universe = list(a.variables) + [v for v in b.variables if v not in seen]
    return Cnf.make(a.clauses + b.clauses, sorted(universe, key=lambda v: _ukey(v)))


def _ukey(v):
    from .core import var_key
    return var_key(v)


def reflection_conjunction(n: int, r: int, s: int, t: int, k: int) -> Cnf:
    """The target of the constructive refutation: SAT and the relativized
    refutation statement over shared C-variables."""
    return conjunction(gen_sat(n, r), gen_rkref_nr(n, r, s, t, k))
