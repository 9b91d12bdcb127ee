"""Admissible assignments, the width adversary, and random restrictions.

The width lower-bound argument walks a resolution refutation of the
refutation statement from its final empty clause upward, maintaining a
minimal admissible partial assignment falsifying the current clause.
If every traversed clause had small index-width the walk would reach an
initial clause falsified by an admissible assignment, which cannot
happen; the auditor therefore classifies every candidate proof as
width-excessive or invalid, never as a narrow valid refutation.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Optional

import mpmath

from .core import (Clause, Cnf, KDnf, Lit, eval_clause, is_tautological,
                   neg, pos, restrict_dnf)
from .encodings import (D, I, L, R, RefVar, S, V, ParamSet, check_object_cnf,
                        gen_ref_f, home_pair, mentioned_pairs, ref_universe,
                        s_universe)
from .proofsys import ReskProof
from .trees import representation_index_height


class PreconditionError(Exception):
    pass


# ---------------------------------------------------------------------------
# block bookkeeping

def _block_vars(kind: str, pair: tuple, params: ParamSet) -> list:
    i, j = pair
    if kind == "D":
        return [D(i, j, l, b) for l in range(1, params.n + 1) for b in (0, 1)]
    if kind == "V":
        return [V(i, j, l) for l in range(1, params.n + 1)]
    if kind == "I":
        return [I(j, m) for m in range(1, params.r + 1)]
    if kind == "L":
        return [L(i, j, jp) for jp in range(1, params.t + 1)]
    if kind == "R":
        return [R(i, j, jp) for jp in range(1, params.t + 1)]
    raise ValueError(kind)


def _block_state(sigma: dict, kind: str, pair: tuple, params: ParamSet):
    """('unset'|'set'|'broken', value): value is the clause for D-blocks,
    the one-hot index for pointer blocks."""
    vs = _block_vars(kind, pair, params)
    present = [v for v in vs if v in sigma]
    if not present:
        return "unset", None
    if len(present) != len(vs):
        return "broken", None
    if kind == "D":
        c = frozenset(Lit(v.idx[2], v.idx[3]) for v in vs if sigma[v] == 1)
        return "set", c
    hot = [v for v in vs if sigma[v] == 1]
    if len(hot) != 1:
        return "broken", None
    return "set", hot[0].idx[-1]


def _blocks_of_pair(i: int) -> list:
    return ["D", "I"] if i == 1 else ["D", "V", "L", "R"]


# ---------------------------------------------------------------------------
# admissibility

def is_admissible(sigma: dict, f: Cnf, s: int, t: int) -> tuple:
    """(ok, first violated condition tag or None).

    Checks, in order: block completeness (A1), premise pointers forcing
    both endpoint clauses (A2), clause set iff pivot/source set (A3),
    non-tautological clauses of the forced size with a free pivot (A4),
    the empty final cell (A5), satisfied weakening axioms when a source
    is chosen (A6), and satisfied premise constraints when a pointer is
    chosen, reported per side (A7-L, A7-R).
    """
    n = check_object_cnf(f)
    r = len(f.clauses)
    params = ParamSet(n, r, s, t)
    state = {}
    for i in range(1, s + 1):
        for j in range(1, t + 1):
            for kind in _blocks_of_pair(i):
                st, val = _block_state(sigma, kind, (i, j), params)
                if st == "broken":
                    return False, "A1"
                state[(kind, i, j)] = (st, val)

    for i in range(2, s + 1):
        for j in range(1, t + 1):
            for kind in ("L", "R"):
                st, jp = state[(kind, i, j)]
                if st == "set":
                    if state[("D", i, j)][0] != "set":
                        return False, "A2"
                    if state[("D", i - 1, jp)][0] != "set":
                        return False, "A2"

    for i in range(1, s + 1):
        for j in range(1, t + 1):
            mate = "I" if i == 1 else "V"
            if (state[("D", i, j)][0] == "set") != (state[(mate, i, j)][0] == "set"):
                return False, "A3"

    for i in range(1, s + 1):
        for j in range(1, t + 1):
            st, c = state[("D", i, j)]
            if st != "set":
                continue
            if is_tautological(c) or len(c) < min(s - i, n):
                return False, "A4"
            if len(c) < n and i >= 2:
                stv, l = state[("V", i, j)]
                if stv == "set" and (Lit(l, 0) in c or Lit(l, 1) in c):
                    return False, "A4"

    st, c = state[("D", s, t)]
    if st == "set" and c != frozenset():
        return False, "A5"

    for j in range(1, t + 1):
        if state[("I", 1, j)][0] != "set":
            continue
        for m, cm in enumerate(f.clauses, start=1):
            for lit in cm:
                cl = frozenset([neg(I(j, m)), pos(D(1, j, lit.var, lit.sign))])
                if eval_clause(cl, sigma) is not True:
                    return False, "A6"

    for i in range(2, s + 1):
        for j in range(1, t + 1):
            for kind, tag in (("L", "A7-L"), ("R", "A7-R")):
                if state[(kind, i, j)][0] != "set":
                    continue
                pvar = L if kind == "L" else R
                want = 1 if kind == "L" else 0
                for jp in range(1, t + 1):
                    for l in range(1, n + 1):
                        cl = frozenset([neg(pvar(i, j, jp)), neg(V(i, j, l)),
                                        pos(D(i - 1, jp, l, want))])
                        if eval_clause(cl, sigma) is not True:
                            return False, tag
                        for lp in range(1, n + 1):
                            for b in (0, 1):
                                if (lp, b) == (l, want):
                                    continue
                                cl = frozenset([neg(pvar(i, j, jp)), neg(V(i, j, l)),
                                                neg(D(i - 1, jp, lp, b)),
                                                pos(D(i, j, lp, b))])
                                if eval_clause(cl, sigma) is not True:
                                    return False, tag
    return True, None


def _set_block(sigma: dict, kind: str, pair: tuple, value, params: ParamSet) -> None:
    i, j = pair
    if kind == "D":
        for l in range(1, params.n + 1):
            for b in (0, 1):
                sigma[D(i, j, l, b)] = 1 if Lit(l, b) in value else 0
        return
    for v in _block_vars(kind, pair, params):
        sigma[v] = 1 if v.idx[-1] == value else 0


def _full_clause_with_source(f: Cnf, n: int) -> tuple:
    """Lowest full non-tautological clause containing some clause of f,
    with the matching source index; exists because f is unsatisfiable."""
    for bits in itertools.product((1, 0), repeat=n):
        cand = frozenset(Lit(l, bits[l - 1]) for l in range(1, n + 1))
        for m, cm in enumerate(f.clauses, start=1):
            if cm <= cand:
                return cand, m
    raise PreconditionError("input CNF is satisfiable; no falsified clause exists")


def _source_for(f: Cnf, c: Clause) -> int:
    for m, cm in enumerate(f.clauses, start=1):
        if cm <= c:
            return m
    raise PreconditionError("no input clause fits under the forced level-1 clause")


def extend_admissible(sigma: dict, q, f: Cnf, s: int, t: int, w: int,
                      target: Optional[Clause] = None) -> dict:
    """Extend a minimal admissible sigma to cover the variable q.

    Clause-or-pivot variables get their whole cell filled with a full
    clause (empty at the top-right cell) plus a matching source or an
    arbitrary pivot; premise pointers get a fresh column on the level
    below, filled with the clause obtained by flipping the resolved
    literal.  Deterministic: lowest admissible index everywhere.
    """
    n = check_object_cnf(f)
    r = len(f.clauses)
    params = ParamSet(n, r, s, t)
    if not (2 <= n + 1 <= s):
        raise PreconditionError("need 2 <= n+1 <= s")
    if not (2 * w < t):
        raise PreconditionError("need 2w < t")
    if q in sigma:
        raise PreconditionError("variable already assigned")
    pair = home_pair(q)
    if pair is None:
        raise PreconditionError(f"{q!r} has no home pair")
    i, j = pair
    out = dict(sigma)

    def fill_cell(i: int, j: int) -> None:
        # s >= 2 here, so the top-right cell always has a pivot block
        if (i, j) == (s, t):
            _set_block(out, "D", (i, j), frozenset(), params)
            _set_block(out, "V", (i, j), 1, params)
        elif i >= 2:
            cand = frozenset(Lit(l, 1) for l in range(1, n + 1))
            _set_block(out, "D", (i, j), cand, params)
            _set_block(out, "V", (i, j), 1, params)
        else:
            cand, m = _full_clause_with_source(f, n)
            _set_block(out, "D", (1, j), cand, params)
            _set_block(out, "I", (1, j), m, params)

    if isinstance(q, RefVar) and q.kind in ("D", "V", "I"):
        fill_cell(i, j)
        return out

    if q.kind not in ("L", "R"):
        raise PreconditionError(f"cannot extend over variable kind {q.kind}")

    # premise-pointer case
    st_d, cij = _block_state(out, "D", (i, j), params)
    if st_d != "set":
        fill_cell(i, j)
        _, cij = _block_state(out, "D", (i, j), params)
    _, l = _block_state(out, "V", (i, j), params)
    used = {jp for jp in range(1, t + 1)
            if _block_state(out, "D", (i - 1, jp), params)[0] == "set"}
    if len(used) > 2 * w:
        raise PreconditionError(f"{len(used)} clause cells set on level {i - 1}; "
                                "the assignment is not minimal for a width-{w} clause")
    fresh = next(jp for jp in range(1, t + 1) if jp not in used)
    if q.kind == "L":
        below = (cij - {Lit(l, 0)}) | {Lit(l, 1)}
        _set_block(out, "L", (i, j), fresh, params)
    else:
        below = (cij - {Lit(l, 1)}) | {Lit(l, 0)}
        _set_block(out, "R", (i, j), fresh, params)
    _set_block(out, "D", (i - 1, fresh), below, params)
    if i >= 3:
        if len(below) < n:
            lp = next(lp for lp in range(1, n + 1)
                      if Lit(lp, 0) not in below and Lit(lp, 1) not in below)
        else:
            lp = 1
        _set_block(out, "V", (i - 1, fresh), lp, params)
    else:
        if len(below) != n:
            raise PreconditionError("forced level-1 clause is not full; "
                                    "the parent cell violates the clause-size condition")
        _set_block(out, "I", (1, fresh), _source_for(f, below), params)
    return out


def minimize_admissible(sigma: dict, e: Clause, f: Cnf, s: int, t: int) -> dict:
    """Greedily drop blocks not needed to keep sigma admissible and
    falsifying e, scanning pointer blocks before clause cells."""
    n = check_object_cnf(f)
    params = ParamSet(n, len(f.clauses), s, t)

    def falsifies(sg: dict) -> bool:
        return eval_clause(e, sg) is False if e else True

    out = dict(sigma)
    changed = True
    while changed:
        changed = False
        units = []
        for pair in sorted(mentioned_pairs(out)):
            i, j = pair
            if i >= 2:
                for kind in ("L", "R"):
                    if _block_state(out, kind, pair, params)[0] == "set":
                        units.append(_block_vars(kind, pair, params))
            core = _block_vars("D", pair, params) + _block_vars(
                "I" if i == 1 else "V", pair, params)
            if any(v in out for v in core):
                units.append(core)
        for unit in units:
            cand = {v: b for v, b in out.items() if v not in set(unit)}
            if len(cand) == len(out):
                continue
            if falsifies(cand) and is_admissible(cand, f, s, t)[0]:
                out = cand
                changed = True
    return out


# ---------------------------------------------------------------------------
# the audit walk

@dataclass(frozen=True)
class AuditOutcome:
    kind: str          # 'WidthExcess' | 'InvalidProof' | 'RuleViolation'
    line: int
    detail: str
    visited: tuple     # line indices walked, final first


def audit_refutation(proof: ReskProof, f: Cnf, s: int, t: int, w: int) -> AuditOutcome:
    """Walk a claimed refutation of the refutation statement upward.

    Terminates with a classified violation on every input: either some
    traversed clause has index-width beyond w, or a justification is
    malformed, or a claimed input clause is not one.
    """
    from .trees import index_width

    n = check_object_cnf(f)
    params = ParamSet(n, len(f.clauses), s, t)
    if not params.satisfies_width_lb(w):
        raise PreconditionError("need 2 <= n+1 <= s and 2w < t")
    target = gen_ref_f(f, s, t)
    if proof.k != 1:
        raise PreconditionError("audit takes resolution proofs")
    if not proof.lines:
        return AuditOutcome("RuleViolation", 0, "empty proof", ())

    visited = []
    u = len(proof.lines) - 1
    g = proof.lines[u][0]
    if g.terms != frozenset():
        return AuditOutcome("RuleViolation", u, "final line is not the empty clause", (u,))
    sigma: dict = {}

    while True:
        visited.append(u)
        g, just = proof.lines[u]
        try:
            e = g.as_clause()
        except ValueError:
            return AuditOutcome("RuleViolation", u, "line is not a clause", tuple(visited))
        if index_width(e) > w:
            return AuditOutcome("WidthExcess", u,
                                f"index-width {index_width(e)} exceeds {w}", tuple(visited))
        if eval_clause(e, sigma) is not False and e:
            return AuditOutcome("RuleViolation", u,
                                "walk invariant broke: clause not falsified", tuple(visited))
        sigma = minimize_admissible(sigma, e, f, s, t)
        rule = just[0]
        if rule == "in":
            m = just[1]
            if not (isinstance(m, int) and 0 <= m < len(target.clauses)) \
               or e != target.clauses[m]:
                return AuditOutcome("InvalidProof", u,
                                    "claimed input line is not a clause of the formula",
                                    tuple(visited))
            raise RuntimeError("admissible assignment falsifies a formula clause; "
                               "internal invariant violated")
        if rule == "ax":
            return AuditOutcome("RuleViolation", u,
                                "axiom line cannot be falsified", tuple(visited))
        if rule == "wk":
            p = just[1]
            if not (0 <= p < u) or not proof.lines[p][0].terms <= g.terms:
                return AuditOutcome("RuleViolation", u, "bad weakening", tuple(visited))
            u = p
            continue
        if rule in ("cut", "ai"):
            p, q = just[1], just[2]
            if not (0 <= p < u and 0 <= q < u):
                return AuditOutcome("RuleViolation", u, "bad reference", tuple(visited))
            gp, gq = proof.lines[p][0], proof.lines[q][0]
            pivot_lit = None
            if rule == "cut":
                for term in gp.terms:
                    if len(term) != 1:
                        return AuditOutcome("RuleViolation", u,
                                            "non-clause premise", tuple(visited))
                for term in gp.terms:
                    (l1,) = term
                    negs = frozenset([frozenset([l1.neg()])])
                    if negs <= gq.terms and \
                       (gp.terms - {term}) | (gq.terms - negs) == g.terms:
                        pivot_lit = l1
                        break
                if pivot_lit is None:
                    return AuditOutcome("RuleViolation", u, "malformed cut", tuple(visited))
            else:
                # a k=1 merge: both premises contain the merged literal
                for term in gp.terms:
                    (l1,) = term
                    if term in gq.terms and \
                       gp.terms | gq.terms == g.terms | {term}:
                        pivot_lit = l1
                        break
                if pivot_lit is None:
                    return AuditOutcome("RuleViolation", u, "malformed merge", tuple(visited))
                # both premises are falsified; follow the first
                u = p
                continue
            qvar = pivot_lit.var
            if qvar not in sigma:
                try:
                    sigma = extend_admissible(sigma, qvar, f, s, t, w, target=e)
                except PreconditionError as exc:
                    return AuditOutcome("RuleViolation", u, str(exc), tuple(visited))
            # the premise whose pivot literal is falsified inherits sigma
            if sigma[qvar] != pivot_lit.sign:
                u = p
            else:
                u = q
            continue
        return AuditOutcome("RuleViolation", u, f"unknown rule {rule}", tuple(visited))


# ---------------------------------------------------------------------------
# random restrictions

@dataclass(frozen=True)
class RhoSample:
    params: ParamSet
    selected: frozenset      # pairs with all selector bits on
    assignment: dict         # total on selectors and on non-selected blocks
    seed: int


def _mix(seed: int, i: int) -> int:
    """splitmix64 step; a documented, platform-stable seed derivation."""
    z = (seed + i * 0x9E3779B97F4A7C15) & 0xFFFFFFFFFFFFFFFF
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & 0xFFFFFFFFFFFFFFFF
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & 0xFFFFFFFFFFFFFFFF
    return z ^ (z >> 31)


def trial_seed(master: int, i: int) -> int:
    return _mix(master, i + 1)


def sample_rho(n: int, r: int, s: int, t: int, k: int, seed: int) -> RhoSample:
    """Two-stage random restriction: fair coins on every selector bit,
    then fair coins on every variable whose home pair is not selected.
    Bits are drawn in canonical variable order, so samples are
    reproducible from the seed alone."""
    params = ParamSet(n, r, s, t, k)
    rng = random.Random(seed)
    sigma = {}
    for v in s_universe(s, t, k):
        sigma[v] = rng.getrandbits(1)
    selected = frozenset(
        (i, j) for i in range(1, s + 1) for j in range(1, t + 1)
        if all(sigma[S(u, i, j)] == 1 for u in range(1, k + 1)))
    for v in ref_universe(n, r, s, t):
        if home_pair(v) not in selected:
            sigma[v] = rng.getrandbits(1)
    return RhoSample(params, selected, sigma, seed)


# ---------------------------------------------------------------------------
# the filler and cross-pointer zeroing of the length lower-bound proof

class RhoConditionError(Exception):
    def __init__(self, condition: str, detail: str):
        super().__init__(f"condition ({condition}) fails: {detail}")
        self.condition = condition


def nu_lambda_postprocess(rho: RhoSample, f: Cnf) -> tuple:
    """(B, nu, lam): the kept pairs, the filler assignment on selected
    but not kept pairs, and the cross-pointer zeroing.

    Requires the top-right pair selected and every level to keep at
    least t/2^(k+1) selected pairs.  The filler writes a two-column
    derivation from f into every surplus selected cell: a full clause X
    and its first-variable flip, re-derived level by level by resolving
    the pair on that variable.  Needs f unsatisfiable and free of
    tautological clauses.
    """
    params = rho.params
    n, r, s, t, k = params.n, params.r, params.s, params.t, params.k
    if check_object_cnf(f) != n or len(f.clauses) != r:
        raise PreconditionError("formula dimensions do not match the sample")
    if (s, t) not in rho.selected:
        raise RhoConditionError("a", "top-right pair not selected")
    per_level = {i: sorted(j for j in range(1, t + 1) if (i, j) in rho.selected)
                 for i in range(1, s + 1)}
    need = t / 2 ** (k + 1)
    for i in range(1, s + 1):
        if len(per_level[i]) < need:
            raise RhoConditionError("b", f"level {i} keeps {len(per_level[i])} < {need} pairs")
    tp = t // 2 ** (k + 1) - 2
    if tp < 1:
        raise PreconditionError("parameters leave no pairs to keep")

    # keep the tp lowest selected columns per level, but the top-right
    # pair always stays and stays last
    b_pairs = {}
    for i in range(1, s + 1):
        cols = per_level[i]
        if i == s:
            rest = [j for j in cols if j != t]
            b_pairs[i] = sorted(rest[:tp - 1]) + [t]
        else:
            b_pairs[i] = cols[:tp]
    b_set = frozenset((i, j) for i in b_pairs for j in b_pairs[i])

    # the filler derivation: X = all-positive-flavoured falsified clause
    x_clause, m_x = _full_clause_with_source(f, n)
    pivot = 1
    x_swap = (x_clause - {Lit(pivot, x_clause_sign(x_clause, pivot))}) \
        | {Lit(pivot, 1 - x_clause_sign(x_clause, pivot))}
    m_swap = _source_for(f, x_swap)

    nu: dict = {}
    free = {i: [j for j in per_level[i] if (i, j) not in b_set]
            for i in range(1, s + 1)}
    for i in range(1, s + 1):
        if len(free[i]) < 2:
            raise RhoConditionError("b", f"level {i} lacks two filler columns")
        col_x, col_swap = free[i][0], free[i][1]
        for j in free[i]:
            c = x_swap if j == col_swap else x_clause
            _set_block(nu, "D", (i, j), c, params)
            if i == 1:
                _set_block(nu, "I", (1, j), m_swap if j == col_swap else m_x, params)
            else:
                _set_block(nu, "V", (i, j), pivot, params)
                lcol, rcol = _filler_premises(x_clause, pivot, free[i - 1])
                _set_block(nu, "L", (i, j), lcol, params)
                _set_block(nu, "R", (i, j), rcol, params)

    lam: dict = {}
    for i in range(2, s + 1):
        for j in b_pairs[i]:
            below = set(b_pairs[i - 1])
            for jp in range(1, t + 1):
                if jp not in below:
                    lam[L(i, j, jp)] = 0
                    lam[R(i, j, jp)] = 0
    return b_set, nu, lam


def x_clause_sign(c: Clause, var: int) -> int:
    return 1 if Lit(var, 1) in c else 0


def _filler_premises(x_clause: Clause, pivot: int, free_below: list) -> tuple:
    # column 0 holds X (contains the pivot literal of sign x's sign),
    # column 1 holds the flip; the positive-pivot premise comes first
    if x_clause_sign(x_clause, pivot) == 1:
        return free_below[0], free_below[1]
    return free_below[1], free_below[0]


def reindex_bijection(b_set: frozenset, s: int) -> dict:
    """Map kept pairs level-wise onto (i, 1..t'); the top-right kept
    pair lands on the new top-right cell."""
    out = {}
    for i in range(1, s + 1):
        cols = sorted(j for (ii, j) in b_set if ii == i)
        for new_j, j in enumerate(cols, start=1):
            out[(i, j)] = (i, new_j)
    return out


def reindex_cnf(f: Cnf, bij: dict, n: int, r: int, s: int, tp: int) -> Cnf:
    """Rename grid variables along the pair bijection."""

    def rename(v):
        if not hasattr(v, "kind"):
            return v
        if v.kind == "D":
            i, j, l, b = v.idx
            ni, nj = bij[(i, j)]
            return D(ni, nj, l, b)
        if v.kind == "V":
            i, j, l = v.idx
            ni, nj = bij[(i, j)]
            return V(ni, nj, l)
        if v.kind in ("L", "R"):
            i, j, jp = v.idx
            ni, nj = bij[(i, j)]
            _, njp = bij[(i - 1, jp)]
            return (L if v.kind == "L" else R)(ni, nj, njp)
        if v.kind == "I":
            j, m = v.idx
            _, nj = bij[(1, j)]
            return I(nj, m)
        raise ValueError(f"unexpected variable {v!r}")

    cls = [frozenset(Lit(rename(l.var), l.sign) for l in c) for c in f.clauses]
    return Cnf.make(cls, ref_universe(n, r, s, tp))


# ---------------------------------------------------------------------------
# switching-lemma arithmetic and empirical tails

mpmath.mp.dps = 50
_LOG2E = mpmath.log(mpmath.e, 2)


def gamma_rate(a: int) -> float:
    """(log2 e)^a / (2^(a^2+3a-2) a!)"""
    if a < 1:
        raise ValueError("a must be >= 1")
    return float(_LOG2E ** a / (mpmath.mpf(2) ** (a * a + 3 * a - 2) * mpmath.factorial(a)))


def beta_rate(k: int) -> float:
    """(log2 e)^k / (2^(k^2+4k+4) k!)"""
    if k < 1:
        raise ValueError("k must be >= 1")
    return float(_LOG2E ** k / (mpmath.mpf(2) ** (k * k + 4 * k + 4) * mpmath.factorial(k)))


def eval_gamma_beta(a: int, k: int) -> tuple:
    return gamma_rate(a), beta_rate(k)


def switch_bound(a: int, n: int, w: float) -> float:
    """Tail bound 2^(-w gamma(a) / n^(a-1)) on deep representing trees."""
    return float(mpmath.mpf(2) ** (-(mpmath.mpf(w) / mpmath.mpf(n) ** (a - 1)) * gamma_rate(a)))


def length_lower_bound(k: int, n: int, t: int) -> float:
    """2^(beta(k) t / n^(k-1)), the refutation-length threshold."""
    return float(mpmath.mpf(2) ** (beta_rate(k) * mpmath.mpf(t) / mpmath.mpf(n) ** (k - 1)))


def estimate_switch_tail(g: KDnf, w: int, trials: int, seed: int,
                         height_budget: int, params: ParamSet) -> float:
    """Empirical Pr[representation index-height of g restricted by a
    random restriction exceeds w], using the exhaustive tree oracle."""
    if w >= height_budget:
        raise PreconditionError("height budget must exceed the tested width")
    deep = 0
    cache: dict = {}
    for trial in range(trials):
        rho = sample_rho(params.n, params.r, params.s, params.t, params.k,
                         trial_seed(seed, trial))
        restricted = restrict_dnf(g, rho.assignment)
        key = restricted.terms
        if key not in cache:
            got = representation_index_height(restricted, min(w, height_budget), params)
            cache[key] = got is None
        if cache[key]:
            deep += 1
    return deep / trials
