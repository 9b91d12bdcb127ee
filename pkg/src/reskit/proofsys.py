"""Res(k) proofs: lines, rules, verifier; layered refutations; restriction.

A proof is a sequence of k-DNF lines, each carrying a justification:

  ('ax', var)        the clause var OR NOT var
  ('in', m)          clause m (0-based) of the target CNF, as a 1-DNF
  ('wk', p)          weakening of line p (term-set superset)
  ('cut', p, q)      from A or (l1&..&lj) and B or ~l1 or..or ~lj, infer A or B
  ('ai', p, q)       from A or l1 and B or (l2&..&lj), infer A or B or (l1&..&lj)

Line references are 0-based indices of earlier lines.  Resolution is
the k=1 case.  Invalid proofs are reported, never raised.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

from .core import Clause, Cnf, KDnf, Lit, resolve, EMPTY_CLAUSE
from .encodings import Substitution, apply_substitution, substitute_lit

Just = tuple

EMPTY_DNF = frozenset()


def mk_line(terms: Iterable, k: int) -> KDnf:
    return KDnf.make(terms, k)


@dataclass(frozen=True)
class ReskProof:
    k: int
    lines: tuple  # of (KDnf, Just)

    @staticmethod
    def make(k: int, lines: Iterable) -> "ReskProof":
        return ReskProof(k, tuple((g, tuple(j)) for g, j in lines))

    def final(self) -> KDnf:
        return self.lines[-1][0]

    def __len__(self) -> int:
        return len(self.lines)


@dataclass(frozen=True)
class VerifyReport:
    valid: bool
    violation: Optional[tuple]  # (line index, rule, reason)
    length: int
    size: int

    def __bool__(self) -> bool:
        return self.valid


def proof_metrics(proof: ReskProof) -> tuple:
    """(length, size): number of lines and total literal occurrences."""
    return len(proof.lines), sum(g.num_literals() for g, _ in proof.lines)


def _axiom_dnf(var, k: int) -> KDnf:
    return KDnf.make([frozenset([Lit(var, 1)]), frozenset([Lit(var, 0)])], k)


def cut_conclusion(p: KDnf, q: KDnf, line: KDnf) -> Optional[str]:
    """None when `line` is a legal cut of p with q, else the reason it is not."""
    for term in p.terms:
        if not term:
            continue
        negs = frozenset(frozenset([l.neg()]) for l in term)
        if not negs <= q.terms:
            continue
        if (p.terms - {term}) | (q.terms - negs) == line.terms:
            return None
    return "no term of the first premise cuts against the second to give this line"


def andintro_conclusion(p: KDnf, q: KDnf, line: KDnf, k: int) -> Optional[str]:
    """None when `line` is a legal conjunction-introduction from p and q."""
    singles = [t for t in p.terms if len(t) == 1]
    for t1 in singles:
        (l1,) = t1
        for t2 in q.terms:
            if not t2:
                continue
            merged = t2 | {l1}
            if len(merged) > k:
                continue
            if (p.terms - {t1}) | (q.terms - {t2}) | {merged} == line.terms:
                return None
    return "no singleton/term pair of the premises merges to give this line"


def verify_resk(proof: ReskProof, f: Cnf, refutation: bool = False) -> VerifyReport:
    """Check every line's justification; optionally require a final empty clause."""
    length, size = proof_metrics(proof)

    def bad(i, rule, reason):
        return VerifyReport(False, (i, rule, reason), length, size)

    k = proof.k
    for i, (g, just) in enumerate(proof.lines):
        if not isinstance(g, KDnf):
            return bad(i, "line", "line is not a DNF")
        for t in g.terms:
            if len(t) > k:
                return bad(i, "width", f"term with {len(t)} literals exceeds k={k}")
        rule = just[0]
        refs = [a for a in just[1:] if rule != "ax" and rule != "in"]
        for p in refs:
            if not (isinstance(p, int) and 0 <= p < i):
                return bad(i, rule, f"reference {p} is not strictly backward")
        if rule == "ax":
            if g.terms != _axiom_dnf(just[1], k).terms:
                return bad(i, "ax", "axiom line must be the two literals of one variable")
        elif rule == "in":
            m = just[1]
            if not (isinstance(m, int) and 0 <= m < len(f.clauses)):
                return bad(i, "in", f"clause index {m} out of range")
            if g.terms != KDnf.from_clause(f.clauses[m], k).terms:
                return bad(i, "in", f"line differs from clause {m} of the CNF")
        elif rule == "wk":
            if not proof.lines[just[1]][0].terms <= g.terms:
                return bad(i, "wk", "line is not a term-superset of its source")
        elif rule == "cut":
            p, q = proof.lines[just[1]][0], proof.lines[just[2]][0]
            reason = cut_conclusion(p, q, g)
            if reason:
                return bad(i, "cut", reason)
        elif rule == "ai":
            p, q = proof.lines[just[1]][0], proof.lines[just[2]][0]
            reason = andintro_conclusion(p, q, g, k)
            if reason:
                return bad(i, "ai", reason)
        else:
            return bad(i, rule, "unknown rule")
    if refutation:
        if not proof.lines:
            return bad(0, "refutation", "empty proof")
        if proof.final().terms != EMPTY_DNF:
            return bad(len(proof.lines) - 1, "refutation", "final line is not the empty clause")
    return VerifyReport(True, None, length, size)


# ---------------------------------------------------------------------------
# resolution proofs (k = 1) as clause sequences

def clause_line(c: Clause) -> KDnf:
    return KDnf.from_clause(c, 1)


def line_heights(proof: ReskProof) -> list:
    """Height of each line: longest premise chain; weakening keeps height."""
    h = []
    for g, just in proof.lines:
        rule = just[0]
        if rule in ("ax", "in"):
            h.append(1)
        elif rule == "wk":
            h.append(h[just[1]])
        else:
            h.append(1 + max(h[just[1]], h[just[2]]))
    return h


def proof_height(proof: ReskProof) -> int:
    return max(line_heights(proof), default=0)


@dataclass(frozen=True)
class LayeredRefutation:
    """Grid of clauses C_{i,j}, (i,j) in [s]x[t]; cell (s,t) is empty.

    Provenance per cell: ('wkn', m) for level-1 weakenings of clause m
    (0-based into F), ('res', j', j'', pivot) above level 1.
    """

    s: int
    t: int
    grid: dict      # (i, j) -> Clause
    prov: dict      # (i, j) -> tuple


def verify_layered(lam: LayeredRefutation, f: Cnf) -> VerifyReport:
    size = sum(len(c) for c in lam.grid.values())
    length = lam.s * lam.t

    def bad(cell, reason):
        return VerifyReport(False, (cell, "layered", reason), length, size)

    for i in range(1, lam.s + 1):
        for j in range(1, lam.t + 1):
            cell = (i, j)
            if cell not in lam.grid or cell not in lam.prov:
                return bad(cell, "missing cell")
            c = lam.grid[cell]
            p = lam.prov[cell]
            if i == 1:
                if p[0] != "wkn" or not (0 <= p[1] < len(f.clauses)):
                    return bad(cell, "level-1 cell needs a weakening source in F")
                if not f.clauses[p[1]] <= c:
                    return bad(cell, "level-1 cell is not a weakening of its source clause")
            else:
                if p[0] != "res":
                    return bad(cell, "upper cell needs resolution provenance")
                jp, jpp, pivot = p[1], p[2], p[3]
                if not (1 <= jp <= lam.t and 1 <= jpp <= lam.t):
                    return bad(cell, "premise column out of range")
                try:
                    res = resolve(lam.grid[(i - 1, jp)], lam.grid[(i - 1, jpp)], pivot)
                except ValueError as e:
                    return bad(cell, str(e))
                if not res <= c:
                    return bad(cell, "cell is not a weakening of the premise resolvent")
    if lam.grid[(lam.s, lam.t)] != EMPTY_CLAUSE:
        return bad((lam.s, lam.t), "final cell nonempty")
    return VerifyReport(True, None, length, size)


def resolution_to_layered(proof: ReskProof, f: Cnf) -> LayeredRefutation:
    """Rearrange a resolution refutation into height-many levels of 3*length
    clauses.

    Each line u enters at level height(u) as a triple (C+x, C+~x, C) on a
    fixed carry variable x, and is re-derived on every higher level as a
    weakening of the resolvent of its own C+x and C+~x one level down;
    the identity (C+x minus x) union (C+~x minus ~x) = C holds for every
    C.  Unused columns copy column 1 of their level.
    """
    if proof.k != 1:
        raise ValueError("layered conversion takes a resolution (k=1) proof")
    rep = verify_resk(proof, f, refutation=True)
    if not rep.valid:
        raise ValueError(f"input proof invalid: {rep.violation}")
    heights = line_heights(proof)
    s = max(heights)
    t = 3 * len(proof.lines)
    carry = f.variables[0] if f.variables else None

    def triple(c: Clause) -> list:
        if carry is None:
            return [c, c, c]
        return [c | {Lit(carry, 1)}, c | {Lit(carry, 0)}, c]

    clauses = [g.as_clause() for g, _ in proof.lines]
    grid, prov = {}, {}
    # column of each line's triple at each level: lines active at level i
    # are those of height <= i, in line order, three columns each
    col = {}
    for i in range(1, s + 1):
        active = [u for u in range(len(clauses)) if heights[u] <= i]
        for rank, u in enumerate(active):
            col[(i, u)] = 3 * rank + 1  # triple occupies cols base..base+2

    def weakening_source(c: Clause) -> int:
        for m, cm in enumerate(f.clauses):
            if cm <= c:
                return m
        raise ValueError("level-1 clause is not a weakening of any input clause")

    def entry_prov(u: int, i: int):
        # chase weakenings to the rule application they pad; a weakening
        # keeps its ancestor's height, so the ancestor's premises are
        # available (carried) one level down
        a = u
        while proof.lines[a][1][0] == "wk":
            a = proof.lines[a][1][1]
        g, just = proof.lines[a]
        rule = just[0]
        if rule == "in":
            return ("wkn", just[1])
        if rule == "ax":
            # axioms are not layered material unless some input clause fits
            return ("wkn", weakening_source(clauses[u]))
        p, q = just[1], just[2]
        if rule == "ai":
            # k=1 merge of A|l and B|l: a weakening of p's carry resolvent
            return ("res", col[(i - 1, p)], col[(i - 1, p)] + 1, carry)
        # recover the pivot literal of the cut; premises sit at the
        # plain-C column (offset 2) of their carried triples
        gp, gq = proof.lines[p][0], proof.lines[q][0]
        for term in gp.terms:
            (l1,) = term
            if frozenset([l1.neg()]) in gq.terms and \
               (gp.terms - {term}) | (gq.terms - {frozenset([l1.neg()])}) == g.terms:
                if l1.sign == 1:
                    return ("res", col[(i - 1, p)] + 2, col[(i - 1, q)] + 2, l1.var)
                return ("res", col[(i - 1, q)] + 2, col[(i - 1, p)] + 2, l1.var)
        raise ValueError("cut pivot not recoverable")

    for i in range(1, s + 1):
        for u in range(len(clauses)):
            if heights[u] > i:
                continue
            base = col[(i, u)]
            cells = triple(clauses[u])
            if heights[u] == i:
                pr = entry_prov(u, i)
            else:
                pr = ("res", col[(i - 1, u)], col[(i - 1, u)] + 1, carry)
            for off in range(3):
                grid[(i, base + off)] = cells[off]
                prov[(i, base + off)] = pr
        # pad unused columns with copies of column 1
        for j in range(1, t + 1):
            if (i, j) not in grid:
                grid[(i, j)] = grid[(i, 1)]
                prov[(i, j)] = prov[(i, 1)]
    return LayeredRefutation(s, t, grid, prov)


# ---------------------------------------------------------------------------
# restriction and substitution of proofs

_SAT = ("sat",)


def substitute_proof(proof: ReskProof, f: Cnf, tau: Substitution) -> tuple:
    """Transform a proof under a variable-to-constant-or-literal map.

    Returns (new proof, transformed CNF).  Lines whose DNF becomes true
    are dropped; justifications are repaired: a cut or introduction one
    of whose premises collapses turns into a weakening of the surviving
    premise, and term deduplication caused by the transformation is
    absorbed by an extra weakening line where needed.  The result
    verifies against the transformed CNF.
    """
    from .encodings import substitute_clause

    new_f = apply_substitution(f, tau)
    clause_map = [None if (sc := substitute_clause(cm, tau)) is None else new_f.index_of(sc)
                  for cm in f.clauses]

    def tr_term(t) -> Optional[frozenset]:
        """Image of a term: None when falsified, else the surviving literals."""
        out = set()
        for l in t:
            img = substitute_lit(l, tau)
            if img == 0:
                return None
            if img == 1:
                continue
            out.add(img)
        return frozenset(out)

    def tr_dnf(g: KDnf) -> Optional[KDnf]:
        """Image of a DNF: None when satisfied (some term fully true)."""
        terms = set()
        for t in g.terms:
            it = tr_term(t)
            if it is None:
                continue
            if not it:
                return None
            terms.add(it)
        return KDnf(frozenset(terms), g.k)

    out_lines = []

    def emit(g: KDnf, just) -> int:
        out_lines.append((g, tuple(just)))
        return len(out_lines) - 1

    def exact(base_id: int, got: KDnf, target: KDnf) -> int:
        # term merges under the substitution may shrink the rule's exact
        # conclusion; pad back with a weakening (never needed at k=1)
        if got.terms == target.terms:
            return base_id
        assert got.terms <= target.terms, "transformed rule produced extra terms"
        return emit(target, ("wk", base_id))

    # per old line: _SAT, or ('ok', new id, transformed KDnf)
    status = []

    for g, just in proof.lines:
        ng = tr_dnf(g)
        if ng is None:
            status.append(_SAT)
            continue
        rule = just[0]
        if rule == "ax":
            img = substitute_lit(Lit(just[1], 1), tau)
            assert isinstance(img, Lit), "constant-mapped axiom cannot survive"
            nid = emit(ng, ("ax", img.var))
        elif rule == "in":
            nm = clause_map[just[1]]
            assert nm is not None, "satisfied initial clause on an unsatisfied line"
            nid = emit(ng, ("in", nm))
        elif rule == "wk":
            st = status[just[1]]
            assert st is not _SAT, "weakening of a satisfied line cannot survive"
            nid = emit(ng, ("wk", st[1]))
        elif rule == "cut":
            nid = _transform_cut(proof, g, just, ng, status, emit, exact, tr_term)
        elif rule == "ai":
            nid = _transform_ai(proof, g, just, ng, status, emit, exact, tr_term)
        else:
            raise ValueError(f"unknown rule {rule}")
        status.append(("ok", nid, ng))

    # the final line of a refutation is the empty clause and never drops
    if status and status[-1] is not _SAT:
        last_id = status[-1][1]
        if last_id != len(out_lines) - 1:
            out_lines.append((out_lines[last_id][0], ("wk", last_id)))
    return ReskProof.make(proof.k, out_lines), new_f


def restrict_proof(proof: ReskProof, f: Cnf, sigma: dict) -> tuple:
    """Clause-wise restriction of a proof with justification repair.

    Returns (restricted proof, restricted CNF); the former verifies
    against the latter.
    """
    return substitute_proof(proof, f, dict(sigma))


def _cut_certificate(p: KDnf, q: KDnf, line: KDnf):
    for term in p.terms:
        if not term:
            continue
        negs = frozenset(frozenset([l.neg()]) for l in term)
        if negs <= q.terms and (p.terms - {term}) | (q.terms - negs) == line.terms:
            return term, negs
    raise ValueError("not a valid cut instance")


def _transform_cut(proof, g, just, ng, status, emit, exact, tr_term):
    p_id, q_id = just[1], just[2]
    gp, gq = proof.lines[p_id][0], proof.lines[q_id][0]
    term, _ = _cut_certificate(gp, gq, g)
    st_p, st_q = status[p_id], status[q_id]
    it = tr_term(term)
    if it is None:
        # cut term falsified: the transformed p is a term-subset of ng
        assert st_p is not _SAT
        return emit(ng, ("wk", st_p[1]))
    if not it:
        # cut term satisfied: p drops, the transformed q weakens to ng
        assert st_q is not _SAT
        return emit(ng, ("wk", st_q[1]))
    assert st_p is not _SAT and st_q is not _SAT
    np_, nq = st_p[2], st_q[2]
    new_negs = frozenset(frozenset([l.neg()]) for l in it)
    conclusion = KDnf((np_.terms - {it}) | (nq.terms - new_negs), ng.k)
    return exact(emit(conclusion, ("cut", st_p[1], st_q[1])), conclusion, ng)


def _ai_certificate(p: KDnf, q: KDnf, line: KDnf, k: int):
    for t1 in (t for t in p.terms if len(t) == 1):
        (l1,) = t1
        for t2 in q.terms:
            if not t2:
                continue
            merged = t2 | {l1}
            if len(merged) <= k and (p.terms - {t1}) | (q.terms - {t2}) | {merged} == line.terms:
                return t1, t2
    raise ValueError("not a valid introduction instance")


def _transform_ai(proof, g, just, ng, status, emit, exact, tr_term):
    p_id, q_id = just[1], just[2]
    gp, gq = proof.lines[p_id][0], proof.lines[q_id][0]
    t1, t2 = _ai_certificate(gp, gq, g, proof.k)
    st_p, st_q = status[p_id], status[q_id]
    img1, img2 = tr_term(t1), tr_term(t2)
    if img1 is None:
        # introduced literal falsified: p loses only its singleton term
        assert st_p is not _SAT
        return emit(ng, ("wk", st_p[1]))
    if img2 is None:
        # conjunction term falsified: q loses only that term
        assert st_q is not _SAT
        return emit(ng, ("wk", st_q[1]))
    if not img2:
        # conjunction term fully satisfied: q drops, p's image weakens
        assert st_p is not _SAT
        return emit(ng, ("wk", st_p[1]))
    if not img1:
        # introduced literal satisfied: p drops, and the merged term
        # collapses onto q's conjunction term, so q's image weakens
        assert st_q is not _SAT
        return emit(ng, ("wk", st_q[1]))
    assert st_p is not _SAT and st_q is not _SAT
    np_, nq = st_p[2], st_q[2]
    conclusion = KDnf((np_.terms - {img1}) | (nq.terms - {img2}) | {img2 | img1}, ng.k)
    return exact(emit(conclusion, ("ai", st_p[1], st_q[1])), conclusion, ng)
