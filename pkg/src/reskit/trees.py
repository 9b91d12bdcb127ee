"""Decision trees over the refutation-statement variables.

Internal nodes query a grid cell (i,j) and branch on everything owned
by that cell at once: at level 1 an edge fixes the cell's clause and
its weakening source (2^{2n} * r edges), above level 1 an edge fixes
the clause, the resolved variable and both premise columns
(2^{2n} * n * t^2 edges).  A root-to-node path is therefore a
"respectful" partial assignment: it sets whole blocks of mentioned
cells and nothing else.

A tree strongly represents a DNF when every 0-branch falsifies every
term and every 1-branch satisfies some term.  The minimum height of a
strongly representing tree (the representation index-height) is found
by exhaustive search over useful query cells; this is an oracle for
micro instances only.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Optional

from .core import (Clause, Cnf, KDnf, Lit, clause_key, eval_term, neg, pos,
                   restrict_dnf)
from .encodings import (D, I, L, R, V, ParamSet, home_pair, mentioned_pairs,
                        gen_ref_functionality)
from .proofsys import ReskProof, verify_resk
from .synth import ProofBuilder


class SearchBudgetError(Exception):
    pass


class TreeError(Exception):
    pass


@dataclass(frozen=True)
class DTree:
    """A decision tree: either a leaf with a 0/1 value, or an internal
    node with a query pair and a child per edge label."""

    leaf: Optional[int] = None
    pair: Optional[tuple] = None
    children: Optional[tuple] = None  # tuple of (edge_label, DTree), canonical order

    @staticmethod
    def make_leaf(value: int) -> "DTree":
        return DTree(leaf=value)

    @staticmethod
    def make_node(pair: tuple, children: dict) -> "DTree":
        items = tuple(sorted(children.items(), key=lambda kv: _edge_key(kv[0])))
        return DTree(pair=pair, children=items)

    def is_leaf(self) -> bool:
        return self.leaf is not None

    def height(self) -> int:
        if self.is_leaf():
            return 0
        return 1 + max(child.height() for _, child in self.children)

    def labels(self) -> frozenset:
        if self.is_leaf():
            return frozenset()
        out = {self.pair}
        for _, child in self.children:
            out |= child.labels()
        return frozenset(out)


def _edge_key(label) -> tuple:
    c = label[0]
    return (clause_key(c),) + tuple(label[1:])


def all_clauses_over(n: int):
    """All 2^(2n) clauses over x_1..x_n, tautological ones included,
    enumerated in a fixed bitmask order."""
    slots = [(l, b) for l in range(1, n + 1) for b in (0, 1)]
    for mask in range(1 << (2 * n)):
        yield frozenset(Lit(l, b) for bit, (l, b) in enumerate(slots) if mask >> bit & 1)


def edge_labels(params: ParamSet, pair: tuple):
    i, _ = pair
    if i == 1:
        for c in all_clauses_over(params.n):
            for m in range(1, params.r + 1):
                yield (c, m)
    else:
        for c in all_clauses_over(params.n):
            for l in range(1, params.n + 1):
                for jp in range(1, params.t + 1):
                    for jpp in range(1, params.t + 1):
                        yield (c, l, jp, jpp)


def edge_count(params: ParamSet, pair: tuple) -> int:
    if pair[0] == 1:
        return (1 << (2 * params.n)) * params.r
    return (1 << (2 * params.n)) * params.n * params.t ** 2


def edge_assignment(params: ParamSet, pair: tuple, label) -> dict:
    """The block assignment a traversed edge contributes to the path."""
    i, j = pair
    c = label[0]
    sigma = {}
    for l in range(1, params.n + 1):
        for b in (0, 1):
            sigma[D(i, j, l, b)] = 1 if Lit(l, b) in c else 0
    if i == 1:
        m = label[1]
        for mp in range(1, params.r + 1):
            sigma[I(j, mp)] = 1 if mp == m else 0
    else:
        l, jp, jpp = label[1], label[2], label[3]
        for lp in range(1, params.n + 1):
            sigma[V(i, j, lp)] = 1 if lp == l else 0
        for col in range(1, params.t + 1):
            sigma[L(i, j, col)] = 1 if col == jp else 0
            sigma[R(i, j, col)] = 1 if col == jpp else 0
    return sigma


def block_assignment_label(params: ParamSet, pair: tuple, sigma: dict):
    """The unique edge label consistent with a respectful assignment's
    block values at the given pair, or None if the pair is unset."""
    i, j = pair
    if D(i, j, 1, 1) not in sigma:
        return None
    c = frozenset(Lit(l, b) for l in range(1, params.n + 1) for b in (0, 1)
                  if sigma[D(i, j, l, b)] == 1)
    if i == 1:
        m = next(m for m in range(1, params.r + 1) if sigma[I(j, m)] == 1)
        return (c, m)
    l = next(l for l in range(1, params.n + 1) if sigma[V(i, j, l)] == 1)
    jp = next(col for col in range(1, params.t + 1) if sigma[L(i, j, col)] == 1)
    jpp = next(col for col in range(1, params.t + 1) if sigma[R(i, j, col)] == 1)
    return (c, l, jp, jpp)


def complete_node(params: ParamSet, pair: tuple, child_fn: Callable) -> DTree:
    """Internal node with the full edge fan-out; children via child_fn(label)."""
    return DTree.make_node(pair, {label: child_fn(label) for label in edge_labels(params, pair)})


def is_respectful(params: ParamSet, sigma: dict) -> bool:
    """Whole blocks of each mentioned pair set, with one-hot pointers."""
    expected = {}
    try:
        for pair in mentioned_pairs(sigma):
            label = block_assignment_label(params, pair, sigma)
            if label is None:
                return False
            expected.update(edge_assignment(params, pair, label))
    except (StopIteration, KeyError):
        return False
    return expected == dict(sigma)


def branches(tree: DTree, params: ParamSet, prefix: Optional[dict] = None):
    """Yield (assignment, leaf value) for every root-to-leaf path."""
    sigma = dict(prefix or {})
    if tree.is_leaf():
        yield sigma, tree.leaf
        return
    for label, child in tree.children:
        step = edge_assignment(params, tree.pair, label)
        yield from branches(child, params, {**sigma, **step})


def strongly_represents(tree: DTree, g: KDnf, params: ParamSet) -> bool:
    """0-branches falsify every term; 1-branches satisfy some term."""
    for sigma, value in branches(tree, params):
        if value == 0:
            if any(eval_term(t, sigma) is not False for t in g.terms):
                return False
        else:
            if not any(eval_term(t, sigma) is True for t in g.terms):
                return False
    return True


def restrict_tree(tree: DTree, pi: dict, params: ParamSet) -> DTree:
    """Contract mentioned-pair queries along the consistent edge."""
    if not is_respectful(params, pi):
        raise TreeError("restricting assignment is not respectful")
    mentioned = mentioned_pairs(pi)

    def walk(t: DTree) -> DTree:
        if t.is_leaf():
            return t
        if t.pair in mentioned:
            label = block_assignment_label(params, t.pair, pi)
            for lab, child in t.children:
                if lab == label:
                    return walk(child)
            raise TreeError(f"no edge of node {t.pair} matches the assignment")
        return DTree(pair=t.pair,
                     children=tuple((lab, walk(ch)) for lab, ch in t.children))

    return walk(tree)


def compose_trees(tree: DTree, attach: Callable, params: ParamSet) -> DTree:
    """Append attach(path_assignment, leaf_value) at every leaf.

    The attached trees must not repeat a pair already queried on the
    path; a collision raises.
    """

    def walk(t: DTree, sigma: dict, used: frozenset) -> DTree:
        if t.is_leaf():
            sub = attach(sigma, t.leaf)
            if sub.labels() & used:
                raise TreeError(f"path label collision: {sorted(sub.labels() & used)}")
            return sub
        if t.pair in used:
            raise TreeError(f"pair {t.pair} repeats on a path")
        kids = []
        for lab, child in t.children:
            step = edge_assignment(params, t.pair, lab)
            kids.append((lab, walk(child, {**sigma, **step}, used | {t.pair})))
        return DTree(pair=t.pair, children=tuple(kids))

    return walk(tree, {}, frozenset())


# ---------------------------------------------------------------------------
# widths, covers and the minimal-tree oracle

def index_width(c: Clause) -> int:
    return len(mentioned_pairs(c))


def index_cover_number(g: KDnf, bound: int) -> Optional[int]:
    """Minimum number of pairs hitting every term, by exhaustive search.

    None when no cover of size <= bound exists (in particular when some
    term mentions no pair at all).
    """
    term_pairs = [mentioned_pairs(t) for t in g.terms]
    if not term_pairs:
        return 0
    if any(not tp for tp in term_pairs):
        return None
    universe = sorted(set().union(*term_pairs))
    if bound > 12 or len(universe) > 24:
        raise SearchBudgetError("cover search limited to micro instances")
    for size in range(0, bound + 1):
        for cand in itertools.combinations(universe, size):
            cs = set(cand)
            if all(tp & cs for tp in term_pairs):
                return size
    return None


def find_representing_tree(g: KDnf, bound: int, params: ParamSet,
                           budget: int = 2_000_000) -> Optional[tuple]:
    """(height, tree) of a minimum-height strongly representing tree of
    height <= bound, or None.  Exhaustive over useful pairs; memoized on
    the restricted DNF."""
    if bound > 4:
        raise SearchBudgetError("height bound above the micro-search budget")
    counter = [0]
    memo: dict = {}

    def useful_pairs(terms) -> frozenset:
        return frozenset(p for t in terms for p in mentioned_pairs(t))

    def search(terms: frozenset, depth: int):
        # returns (height, builder) or None; builder() materializes the tree
        if frozenset() in terms:
            return 0, lambda: DTree.make_leaf(1)
        if not terms:
            return 0, lambda: DTree.make_leaf(0)
        if depth == 0:
            return None
        key = (terms, depth)
        if key in memo:
            return memo[key]
        counter[0] += 1
        if counter[0] > budget:
            raise SearchBudgetError("tree search budget exceeded")
        best = None
        g_here = KDnf(terms, max((len(t) for t in terms), default=1))
        for pair in sorted(useful_pairs(terms)):
            worst = 0
            kids = []
            ok = True
            for label in edge_labels(params, pair):
                sub = restrict_dnf(g_here, edge_assignment(params, pair, label))
                got = search(sub.terms, depth - 1)
                if got is None:
                    ok = False
                    break
                worst = max(worst, got[0])
                kids.append((label, got[1]))
            if ok and (best is None or 1 + worst < best[0]):
                kids_now = list(kids)
                best = (1 + worst,
                        lambda p=pair, ks=kids_now: DTree.make_node(
                            p, {lab: mk() for lab, mk in ks}))
                if best[0] == 1:
                    break
        memo[key] = best
        return best

    got = search(frozenset(g.terms), bound)
    if got is None:
        return None
    return got[0], got[1]()


def representation_index_height(g: KDnf, bound: int, params: ParamSet) -> Optional[int]:
    got = find_representing_tree(g, bound, params)
    return None if got is None else got[0]


# ---------------------------------------------------------------------------
# the clause read off a respectful assignment

def c_pi_clause(pi: dict, params: ParamSet) -> Clause:
    """D-literals flipped against the assignment; one negated pointer
    literal per set pointer block."""
    if not is_respectful(params, pi):
        raise TreeError("assignment is not respectful")
    lits = []
    for pair in sorted(mentioned_pairs(pi)):
        i, j = pair
        for l in range(1, params.n + 1):
            for b in (0, 1):
                lits.append(Lit(D(i, j, l, b), 1 - pi[D(i, j, l, b)]))
        label = block_assignment_label(params, pair, pi)
        if i == 1:
            lits.append(neg(I(j, label[1])))
        else:
            lits.append(neg(V(i, j, label[1])))
            lits.append(neg(L(i, j, label[2])))
            lits.append(neg(R(i, j, label[3])))
    return frozenset(lits)


# ---------------------------------------------------------------------------
# conversion of a narrow-represented refutation into low index-width resolution

class HypothesisError(Exception):
    """A stated hypothesis of the conversion fails; carries the line."""

    def __init__(self, line: Optional[int], reason: str):
        super().__init__(f"line {line}: {reason}" if line is not None else reason)
        self.line = line
        self.reason = reason


def resk_to_low_width_resolution(h_cnf: Cnf, proof: ReskProof, trees: list,
                                 h: int, params: ParamSet) -> tuple:
    """Turn a Res(k) refutation whose lines have shallow representing
    trees into a resolution refutation of bounded index-width.

    ``trees[i]`` must strongly represent line i with height <= h and
    query only home pairs of the line's variables.  The output refutes
    ``h_cnf`` together with the pointer domain and functionality
    clauses; its index-width stays within 3h.  Returns (proof, target).
    """
    for m, c in enumerate(h_cnf.clauses):
        if index_width(c) > h:
            raise HypothesisError(None, f"input clause {m} has index-width {index_width(c)} > {h}")
    rep = verify_resk(proof, h_cnf, refutation=True)
    if not rep.valid:
        raise HypothesisError(rep.violation[0], f"input proof invalid: {rep.violation[2]}")
    if len(trees) != len(proof.lines):
        raise HypothesisError(None, "one tree per proof line required")
    for i, ((g, _), tree) in enumerate(zip(proof.lines, trees)):
        if tree.height() > h:
            raise HypothesisError(i, f"tree height {tree.height()} exceeds {h}")
        line_pairs = frozenset(p for t in g.terms for p in mentioned_pairs(t))
        if not tree.labels() <= line_pairs:
            raise HypothesisError(i, "tree queries a pair that is not a home pair of the line")
        if not strongly_represents(tree, g, params):
            raise HypothesisError(i, "tree does not strongly represent the line")

    func = gen_ref_functionality(params.n, params.r, params.s, params.t)
    target = Cnf.make(h_cnf.clauses + func.clauses,
                      list(dict.fromkeys(list(h_cnf.variables) + list(func.variables))))
    builder = ProofBuilder(1, target)

    def freeze(sigma: dict) -> frozenset:
        return frozenset(sigma.items())

    # per line: {frozen 0-branch assignment: line id deriving its clause}
    derivs: list = []

    def derive_initial(g: KDnf, pi: dict) -> int:
        base = g.as_clause()
        cpi = c_pi_clause(pi, params)
        cur = builder.initial(base)
        cur_clause = set(base)
        for lit in sorted(base - cpi, key=lambda l: clause_key(frozenset([l]))):
            # a pointer literal outside the target clause is resolved away
            # against the corresponding exclusivity clause
            v = lit.var
            assert lit.sign == 1, "negative non-matching literal cannot be falsified"
            pair = home_pair(v)
            label = block_assignment_label(params, pair, pi)
            if v.kind == "I":
                other = I(v.idx[0], label[1])
            elif v.kind == "V":
                other = V(*pair, label[1])
            elif v.kind == "L":
                other = L(*pair, label[2])
            elif v.kind == "R":
                other = R(*pair, label[3])
            else:
                raise HypothesisError(None, f"literal {lit!r} of an input clause "
                                      "is not falsified by its 0-branch")
            exclusivity = builder.initial(frozenset([neg(other), neg(v)]))
            cur = builder.cut(cur, exclusivity, {pos(v)})
            cur_clause.discard(lit)
            cur_clause.add(neg(other))
        return builder.weaken(cur, [{l} for l in cpi])

    def lift_block_refutation(pair: tuple, child_ids: dict, extra: Clause) -> int:
        """Refute the one-pair branch clauses, every line widened by
        ``extra``; child_ids maps edge labels to derivations of
        C_edge | extra."""
        i, j = pair
        if i == 1:
            grouped: dict = {}
            for label, cid in child_ids.items():
                grouped.setdefault(label[0], {})[label] = cid
            z = {}
            for c, group in grouped.items():
                cur = builder.initial(frozenset(pos(I(j, m))
                                                for m in range(1, params.r + 1)))
                cur = builder.weaken(cur, [{l} for l in extra])
                for label in sorted(group, key=_edge_key):
                    cur = builder.cut(cur, group[label], {pos(I(j, label[1]))})
                z[c] = cur
        else:
            by_c: dict = {}
            for label, cid in child_ids.items():
                by_c.setdefault(label[0], {})[label[1:]] = cid
            z = {}
            for c, group in by_c.items():
                ys = {}
                for l in range(1, params.n + 1):
                    xs = {}
                    for jp in range(1, params.t + 1):
                        cur = builder.initial(frozenset(pos(R(i, j, col))
                                                        for col in range(1, params.t + 1)))
                        cur = builder.weaken(cur, [{x} for x in extra])
                        for jpp in range(1, params.t + 1):
                            cur = builder.cut(cur, group[(l, jp, jpp)], {pos(R(i, j, jpp))})
                        xs[jp] = cur
                    cur = builder.initial(frozenset(pos(L(i, j, col))
                                                    for col in range(1, params.t + 1)))
                    cur = builder.weaken(cur, [{x} for x in extra])
                    for jp in range(1, params.t + 1):
                        cur = builder.cut(cur, xs[jp], {pos(L(i, j, jp))})
                    ys[l] = cur
                cur = builder.initial(frozenset(pos(V(i, j, l))
                                                for l in range(1, params.n + 1)))
                cur = builder.weaken(cur, [{x} for x in extra])
                for l in range(1, params.n + 1):
                    cur = builder.cut(cur, ys[l], {pos(V(i, j, l))})
                z[c] = cur
        # binary elimination of the D-block, slot by slot
        slots = [(l, b) for l in range(1, params.n + 1) for b in (0, 1)]
        level = {frozenset(c): cid for c, cid in z.items()}
        for l, b in reversed(slots):
            lit = Lit(l, b)
            nxt = {}
            for c, cid in level.items():
                if lit in c:
                    continue
                mate = level[c | {lit}]
                nxt[c] = builder.cut(cid, mate, {pos(D(i, j, l, b))})
            level = nxt
        (final_id,) = level.values()
        return final_id

    def derive_inferred(line_idx: int, g: KDnf, just) -> dict:
        prem_ids = [p for p in just[1:]]
        prem_branches = []
        for p in prem_ids:
            br0 = [freeze(pi) for pi, v in branches(trees[p], params) if v == 0]
            prem_branches.append((p, br0))

        if just[0] == "wk":
            t_comb = trees[prem_ids[0]]
        else:
            def attach(pi, value):
                if value == 0:
                    return DTree.make_leaf(0)
                return restrict_tree(trees[prem_ids[1]], pi, params)
            t_comb = compose_trees(trees[prem_ids[0]], attach, params)

        memo: dict = {}

        def walk(node: DTree, pi: dict) -> int:
            key = (id(node), freeze(pi))
            if key in memo:
                return memo[key]
            if node.is_leaf():
                if node.leaf != 0:
                    raise HypothesisError(line_idx,
                                          "a 1-branch of the combined tree meets a 0-branch "
                                          "of the conclusion; strong soundness violated")
                got = None
                for p, br0 in prem_branches:
                    items = freeze(pi)
                    for bfrozen in br0:
                        if bfrozen <= items:
                            got = derivs[p][bfrozen]
                            break
                    if got is not None:
                        break
                if got is None:
                    raise HypothesisError(line_idx, "0-branch without a premise 0-branch inside it")
                cpi = c_pi_clause(pi, params)
                out = builder.weaken(got, [{l} for l in cpi | c_sigma])
            else:
                if node.pair in sigma_pairs:
                    label = block_assignment_label(params, node.pair, sigma)
                    child = dict(node.children).get(label)
                    if child is None:
                        raise HypothesisError(line_idx, "missing edge for a mentioned pair")
                    step = edge_assignment(params, node.pair, label)
                    out = walk(child, {**pi, **step})
                else:
                    child_ids = {}
                    for label, child in node.children:
                        step = edge_assignment(params, node.pair, label)
                        child_ids[label] = walk(child, {**pi, **step})
                    out = lift_block_refutation(node.pair, child_ids,
                                                c_pi_clause(pi, params) | c_sigma)
            memo[key] = out
            return out

        out_map = {}
        for sigma, value in branches(trees[line_idx], params):
            if value != 0:
                continue
            c_sigma = c_pi_clause(sigma, params)
            sigma_pairs = mentioned_pairs(sigma)
            memo.clear()
            out_map[freeze(sigma)] = walk(t_comb, {})
        return out_map

    for idx, (g, just) in enumerate(proof.lines):
        rule = just[0]
        if rule == "ax":
            derivs.append({})
        elif rule == "in":
            out = {}
            for pi, value in branches(trees[idx], params):
                if value == 0:
                    out[freeze(pi)] = derive_initial(g, pi)
            derivs.append(out)
        else:
            derivs.append(derive_inferred(idx, g, just))

    last = derivs[-1]
    empty_branch = frozenset()
    if empty_branch not in last:
        raise HypothesisError(len(proof.lines) - 1,
                              "final line's tree is not the single 0-leaf")
    out_proof = builder.finish(last[empty_branch])
    return out_proof, target
