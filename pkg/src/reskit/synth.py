"""Constructive Res(2) refutation of the reflection conjunction.

Derives, by induction on the level i, the 2-DNF

    D_line(i,j) =  OR_u ~S_u(i,j)  OR  OR_{l,b} ( D(i,j,l,b) & T(l)^b )

for every grid cell, then cuts the top-right line against the
empty-cell axioms and the selector units to reach the empty clause.
Where the textbook derivation silently merges a weakening into a cut,
an explicit weakening line is emitted.  Derived lines are cached by
value, so repeated subderivations are paid for once.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .core import Cnf, KDnf, Lit, neg, pos
from .encodings import (Cv, D, I, L, R, S, T1, T3, V, ParamSet,
                        reflection_conjunction)
from .proofsys import ReskProof


class SynthesisError(Exception):
    pass


@dataclass
class ProofBuilder:
    """Appends justified k-DNF lines, deduplicating by line value."""

    k: int
    cnf: Cnf
    lines: list = field(default_factory=list)
    index: dict = field(default_factory=dict)
    phases: list = field(default_factory=list)
    phase: str = "base"

    def __post_init__(self):
        self._clause_index = {c: m for m, c in enumerate(self.cnf.clauses)}

    def _emit(self, g: KDnf, just) -> int:
        key = g.terms
        got = self.index.get(key)
        if got is not None:
            return got
        self.lines.append((g, tuple(just)))
        self.phases.append(self.phase)
        self.index[key] = len(self.lines) - 1
        return self.index[key]

    def dnf(self, terms) -> KDnf:
        return KDnf.make(terms, self.k)

    def line(self, i: int) -> KDnf:
        return self.lines[i][0]

    def initial(self, c) -> int:
        m = self._clause_index.get(frozenset(c))
        if m is None:
            raise SynthesisError(f"clause is not in the target CNF: {sorted(map(repr, c))}")
        return self._emit(KDnf.from_clause(frozenset(c), self.k), ("in", m))

    def axiom(self, var) -> int:
        g = KDnf.make([frozenset([Lit(var, 1)]), frozenset([Lit(var, 0)])], self.k)
        return self._emit(g, ("ax", var))

    def weaken(self, src: int, extra_terms) -> int:
        g = self.line(src)
        new = self.dnf(g.terms | {frozenset(t) for t in extra_terms})
        if new.terms == g.terms:
            return src
        return self._emit(new, ("wk", src))

    def cut(self, p: int, q: int, term) -> int:
        """Cut the term (held by line p) against its negations in line q."""
        term = frozenset(term)
        gp, gq = self.line(p), self.line(q)
        if term not in gp.terms:
            raise SynthesisError("cut term missing from the first premise")
        negs = frozenset(frozenset([l.neg()]) for l in term)
        if not negs <= gq.terms:
            raise SynthesisError("negated cut literals missing from the second premise")
        conclusion = self.dnf((gp.terms - {term}) | (gq.terms - negs))
        return self._emit(conclusion, ("cut", p, q))

    def and_intro(self, p: int, lit: Lit, q: int, term) -> int:
        """Merge singleton lit of line p into the given term of line q."""
        term = frozenset(term)
        gp, gq = self.line(p), self.line(q)
        if frozenset([lit]) not in gp.terms:
            raise SynthesisError("introduced literal is not a singleton of the first premise")
        if term not in gq.terms:
            raise SynthesisError("target term missing from the second premise")
        merged = term | {lit}
        conclusion = self.dnf((gp.terms - {frozenset([lit])}) | (gq.terms - {term}) | {merged})
        return self._emit(conclusion, ("ai", p, q))

    def finish(self, empty_id: int) -> ReskProof:
        if self.lines[-1][0].terms != frozenset():
            self.lines.append((self.line(empty_id), ("wk", empty_id)))
            self.phases.append(self.phase)
        return ReskProof.make(self.k, self.lines)


@dataclass(frozen=True)
class SynthTrace:
    proof: ReskProof
    cnf: Cnf
    params: ParamSet
    d_line_ids: dict          # (i, j) -> line id of D_line(i,j)
    phases: tuple             # per line: 'base' | 'induction(i)' | 'finish'

    def phase_counts(self) -> dict:
        out: dict = {}
        for p in self.phases:
            out[p] = out.get(p, 0) + 1
        return out


def size_bound(n: int, r: int, s: int, t: int, k: int) -> int:
    """The refutation-size polynomial, all coefficients one."""
    ParamSet(n, r, s, t, k)
    return (t * r * n ** 2 + t * r ** 2 + t * r * n * k
            + s * t ** 2 * n ** 3 + s * t ** 2 * n ** 2 * k
            + s * t ** 2 * n * k ** 2 + s * t ** 3 * n)


def _guard_terms(i: int, j: int, k: int):
    return [frozenset([neg(S(u, i, j))]) for u in range(1, k + 1)]


def _d_line(i: int, j: int, n: int, k: int) -> set:
    terms = set(_guard_terms(i, j, k))
    for l in range(1, n + 1):
        for b in (0, 1):
            terms.add(frozenset([pos(D(i, j, l, b)), Lit(T1(l), b)]))
    return terms


def synth_reflection_refutation(n: int, r: int, s: int, t: int, k: int) -> SynthTrace:
    """Build the Res(2) refutation of the reflection conjunction."""
    params = ParamSet(n, r, s, t, k)
    cnf = reflection_conjunction(n, r, s, t, k)
    b = ProofBuilder(2, cnf)
    d_ids: dict = {}

    rng_n = range(1, n + 1)
    rng_t = range(1, t + 1)
    rng_r = range(1, r + 1)
    rng_k = range(1, k + 1)

    # ---- base level ----
    b.phase = "base"
    for j in rng_t:
        per_m = []
        for m in rng_r:
            base1 = {}
            for l in rng_n:
                for b_ in (0, 1):
                    # witness bit forces the described literal into row 1
                    c19 = b.initial({neg(T3(m, l, b_)), pos(Cv(m, l, b_))})
                    ax38 = b.initial({neg(I(j, m)), neg(Cv(m, l, b_)), pos(D(1, j, l, b_))}
                                     | {neg(S(u, 1, j)) for u in rng_k})
                    s1 = b.cut(c19, ax38, {pos(Cv(m, l, b_))})
                    # attach the satisfied-literal bit to the D-variable
                    tl = b.initial({neg(T3(m, l, b_)), Lit(T1(l), b_)})
                    base1[(l, b_)] = b.and_intro(tl, Lit(T1(l), b_), s1, {pos(D(1, j, l, b_))})
            cur = b.initial({pos(T3(m, l, b_)) for l in rng_n for b_ in (0, 1)})
            for l in rng_n:
                for b_ in (0, 1):
                    cur = b.cut(cur, base1[(l, b_)], {pos(T3(m, l, b_))})
            per_m.append((m, cur))
        cur = b.initial({pos(I(j, m)) for m in rng_r}
                        | {neg(S(u, 1, j)) for u in rng_k})
        for m, line_m in per_m:
            cur = b.cut(cur, line_m, {pos(I(j, m))})
        d_ids[(1, j)] = cur
        assert b.line(cur).terms == frozenset(_d_line(1, j, n, k)), (1, j)

    # ---- induction on levels ----
    for i in range(2, s + 1):
        b.phase = f"induction({i})"
        new_ids = {}
        for j in rng_t:
            guard_ij = {neg(S(u, i, j)) for u in rng_k}
            per_lb = {}
            for l in rng_n:
                for b_ in (0, 1):
                    # the witness polarity b pairs with the opposite-side
                    # premise pointer: L holds the positive pivot literal
                    P = L if b_ == 0 else R
                    per_jp = []
                    for jp in rng_t:
                        nontaut = b.initial({neg(S(u, i - 1, jp)) for u in rng_k}
                                            | {neg(D(i - 1, jp, l, 1)), neg(D(i - 1, jp, l, 0))})
                        cutcl = b.initial(guard_ij
                                          | {neg(P(i, j, jp)), neg(V(i, j, l)),
                                             pos(D(i - 1, jp, l, 1 - b_))})
                        s1 = b.cut(cutcl, nontaut, {pos(D(i - 1, jp, l, 1 - b_))})
                        s2 = b.weaken(s1, [{Lit(T1(l), 1 - b_)}])
                        s3 = b.cut(d_ids[(i - 1, jp)], s2,
                                   {pos(D(i - 1, jp, l, b_)), Lit(T1(l), b_)})
                        ax = b.axiom(T1(l))
                        s4 = b.weaken(ax, [{neg(D(i - 1, jp, l, 1 - b_))}])
                        cur = b.cut(s3, s4, {pos(D(i - 1, jp, l, 1 - b_)), Lit(T1(l), 1 - b_)})
                        # swap every remaining previous-level term for its
                        # own-cell counterpart
                        for lp in rng_n:
                            if lp == l:
                                continue
                            for bp in (0, 1):
                                transf = b.initial(guard_ij
                                                   | {neg(P(i, j, jp)), neg(V(i, j, l)),
                                                      neg(D(i - 1, jp, lp, bp)), pos(D(i, j, lp, bp))})
                                axp = b.axiom(T1(lp))
                                ind3 = b.and_intro(axp, Lit(T1(lp), bp), transf,
                                                   {pos(D(i, j, lp, bp))})
                                cur = b.cut(cur, ind3,
                                            {pos(D(i - 1, jp, lp, bp)), Lit(T1(lp), bp)})
                        # complete the own-cell disjunction, then drop the
                        # previous-level guard via the selection clauses
                        cur = b.weaken(cur, [{pos(D(i, j, l, bb)), Lit(T1(l), bb)} for bb in (0, 1)])
                        for up in rng_k:
                            sel = b.initial(guard_ij | {neg(P(i, j, jp)), pos(S(up, i - 1, jp))})
                            cur = b.cut(sel, cur, {pos(S(up, i - 1, jp))})
                        per_jp.append((jp, cur))
                    dom = b.initial(guard_ij | {pos(P(i, j, jp)) for jp in rng_t})
                    cur = dom
                    for jp, line_jp in per_jp:
                        cur = b.cut(cur, line_jp, {pos(P(i, j, jp))})
                    per_lb[(l, b_)] = cur
            per_l = {}
            for l in rng_n:
                # cut the two witness polarities against each other
                per_l[l] = b.cut(per_lb[(l, 0)], per_lb[(l, 1)], {Lit(T1(l), 1)})
            cur = b.initial({neg(S(u, i, j)) for u in rng_k}
                            | {pos(V(i, j, l)) for l in rng_n})
            for l in rng_n:
                cur = b.cut(cur, per_l[l], {pos(V(i, j, l))})
            new_ids[j] = cur
            assert b.line(cur).terms == frozenset(_d_line(i, j, n, k)), (i, j)
        for j in rng_t:
            d_ids[(i, j)] = new_ids[j]

    # ---- finish at the top-right cell ----
    b.phase = "finish"
    cur = d_ids[(s, t)]
    for l in rng_n:
        for b_ in (0, 1):
            empty_cell = b.initial({neg(S(u, s, t)) for u in rng_k}
                                   | {neg(D(s, t, l, b_))})
            w = b.weaken(empty_cell, [{Lit(T1(l), 1 - b_)}])
            cur = b.cut(cur, w, {pos(D(s, t, l, b_)), Lit(T1(l), b_)})
    for u in rng_k:
        unit = b.initial({pos(S(u, s, t))})
        cur = b.cut(unit, cur, {pos(S(u, s, t))})
    if b.line(cur).terms != frozenset():
        raise SynthesisError("synthesis did not reach the empty clause")
    proof = b.finish(cur)
    return SynthTrace(proof, cnf, params, d_ids, tuple(b.phases))
