"""File formats: DIMACS CNF with an embedded variable map, the proof
format, and the layered-refutation grid format.

DIMACS files carry the variable map in comment lines ``c v <int> <name>``
so a single file round-trips structured variable names.  Proof files
bind to their CNF through a SHA-256 prefix of the CNF file bytes:

    p rkproof k=<k> cnf=<16 hex chars>
    <id> : <term>{|<term>}* ; <just>

where a term is space-separated signed DIMACS literals, the empty DNF
is ``0``, and the justification is one of ``ax <var>``, ``in <idx>``,
``wk <id>``, ``cut <id> <id>``, ``ai <id> <id>`` with 1-based ids and
clause indices.  Layered files mirror the refutation grid:

    p layered s=<s> t=<t>
    (<i>,<j>) : <clause> ; wkn <m>
    (<i>,<j>) : <clause> ; res <j'> <j''> <pivot>
"""

from __future__ import annotations

import hashlib
import os
import tempfile
from typing import Optional

from .core import Cnf, KDnf, Lit, clause_key, sorted_lits
from .encodings import RefVar, parse_refvar
from .proofsys import LayeredRefutation, ReskProof


def var_name(v) -> str:
    return repr(v) if isinstance(v, RefVar) else f"x{v}"


def parse_var_name(text: str):
    if text.startswith("x") and text[1:].isdigit():
        return int(text[1:])
    return parse_refvar(text)


class VarMap:
    """Bijection between DIMACS integers 1..V and variable identifiers,
    in the universe's canonical order."""

    def __init__(self, variables):
        self.vars = tuple(variables)
        self.num = {v: i for i, v in enumerate(self.vars, start=1)}
        if len(self.num) != len(self.vars):
            raise ValueError("duplicate variables in universe")

    def lit(self, l: Lit) -> int:
        n = self.num[l.var]
        return n if l.sign == 1 else -n

    def unlit(self, code: int) -> Lit:
        return Lit(self.vars[abs(code) - 1], 1 if code > 0 else 0)

    def __len__(self) -> int:
        return len(self.vars)


def emit_dimacs(f: Cnf, varmap_comments: bool = True) -> str:
    vm = VarMap(f.variables)
    out = []
    if varmap_comments:
        for i, v in enumerate(vm.vars, start=1):
            out.append(f"c v {i} {var_name(v)}")
    out.append(f"p cnf {len(vm)} {len(f.clauses)}")
    for c in f.clauses:
        out.append(" ".join(str(vm.lit(l)) for l in sorted_lits(c)) + " 0")
    return "\n".join(out) + "\n"


def emit_varmap(f: Cnf) -> str:
    vm = VarMap(f.variables)
    return "".join(f"{i} {var_name(v)}\n" for i, v in enumerate(vm.vars, start=1))


def parse_dimacs(text: str) -> Cnf:
    """Parse DIMACS; ``c v`` comments, when present, name the variables."""
    names = {}
    clauses = []
    nvars = None
    for line in text.splitlines():
        line = line.strip()
        if not line:
            continue
        if line.startswith("c"):
            parts = line.split()
            if len(parts) == 4 and parts[1] == "v":
                names[int(parts[2])] = parse_var_name(parts[3])
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise ValueError(f"bad header: {line}")
            nvars = int(parts[2])
            continue
        codes = [int(x) for x in line.split()]
        if codes and codes[-1] == 0:
            codes = codes[:-1]
        clauses.append(codes)
    if nvars is None:
        raise ValueError("missing p cnf header")
    universe = [names.get(i, i) for i in range(1, nvars + 1)]
    cls = [frozenset(Lit(universe[abs(c) - 1], 1 if c > 0 else 0) for c in codes)
           for codes in clauses]
    return Cnf.make(cls, universe)


def cnf_digest(dimacs_text: str) -> str:
    return hashlib.sha256(dimacs_text.encode()).hexdigest()[:16]


# ---------------------------------------------------------------------------
# proof files

def emit_proof(proof: ReskProof, f: Cnf, digest: Optional[str] = None) -> str:
    vm = VarMap(f.variables)
    if digest is None:
        digest = cnf_digest(emit_dimacs(f))
    out = [f"p rkproof k={proof.k} cnf={digest}"]
    for i, (g, just) in enumerate(proof.lines, start=1):
        if g.is_false():
            body = "0"
        else:
            terms = sorted(g.terms, key=clause_key)
            body = " | ".join(" ".join(str(vm.lit(l)) for l in sorted_lits(t))
                              for t in terms)
        rule = just[0]
        if rule == "ax":
            j = f"ax {vm.num[just[1]]}"
        elif rule == "in":
            j = f"in {just[1] + 1}"
        elif rule == "wk":
            j = f"wk {just[1] + 1}"
        else:
            j = f"{rule} {just[1] + 1} {just[2] + 1}"
        out.append(f"{i} : {body} ; {j}")
    return "\n".join(out) + "\n"


class ProofFileError(ValueError):
    pass


def parse_proof(text: str, f: Cnf, expect_digest: Optional[str] = None) -> ReskProof:
    vm = VarMap(f.variables)
    lines = [l for l in text.splitlines() if l.strip()]
    if not lines or not lines[0].startswith("p rkproof"):
        raise ProofFileError("missing proof header")
    head = dict(part.split("=", 1) for part in lines[0].split()[2:])
    k = int(head["k"])
    if expect_digest is not None and head.get("cnf") != expect_digest:
        raise ProofFileError(f"proof bound to cnf {head.get('cnf')}, expected {expect_digest}")
    steps = []
    for ln, raw in enumerate(lines[1:], start=1):
        try:
            left, just = raw.rsplit(";", 1)
            ident, body = left.split(":", 1)
        except ValueError:
            raise ProofFileError(f"line {ln}: malformed step") from None
        if int(ident) != ln:
            raise ProofFileError(f"line {ln}: ids must be 1-based ascending")
        body = body.strip()
        if body == "0":
            terms = []
        else:
            terms = [frozenset(vm.unlit(int(x)) for x in part.split())
                     for part in body.split("|")]
            if any(not t for t in terms):
                raise ProofFileError(f"line {ln}: empty term")
        jp = just.split()
        rule = jp[0]
        if rule == "ax":
            j = ("ax", vm.vars[int(jp[1]) - 1])
        elif rule == "in":
            j = ("in", int(jp[1]) - 1)
        elif rule == "wk":
            j = ("wk", int(jp[1]) - 1)
        elif rule in ("cut", "ai"):
            j = (rule, int(jp[1]) - 1, int(jp[2]) - 1)
        else:
            raise ProofFileError(f"line {ln}: unknown justification {rule}")
        try:
            steps.append((KDnf.make(terms, k), j))
        except ValueError as e:
            raise ProofFileError(f"line {ln}: {e}") from None
    return ReskProof.make(k, steps)


# ---------------------------------------------------------------------------
# layered files

def emit_layered(lam: LayeredRefutation, f: Cnf) -> str:
    vm = VarMap(f.variables)
    out = [f"p layered s={lam.s} t={lam.t}"]
    for i in range(1, lam.s + 1):
        for j in range(1, lam.t + 1):
            c = lam.grid[(i, j)]
            body = " ".join(str(vm.lit(l)) for l in sorted_lits(c)) if c else "0"
            p = lam.prov[(i, j)]
            if p[0] == "wkn":
                tail = f"wkn {p[1] + 1}"
            else:
                tail = f"res {p[1]} {p[2]} {vm.num[p[3]]}"
            out.append(f"({i},{j}) : {body} ; {tail}")
    return "\n".join(out) + "\n"


def parse_layered(text: str, f: Cnf) -> LayeredRefutation:
    vm = VarMap(f.variables)
    lines = [l for l in text.splitlines() if l.strip()]
    if not lines or not lines[0].startswith("p layered"):
        raise ProofFileError("missing layered header")
    head = dict(part.split("=", 1) for part in lines[0].split()[2:])
    s, t = int(head["s"]), int(head["t"])
    grid, prov = {}, {}
    for raw in lines[1:]:
        left, tail = raw.rsplit(";", 1)
        cell, body = left.split(":", 1)
        i, j = (int(x) for x in cell.strip().strip("()").split(","))
        body = body.strip()
        c = frozenset() if body == "0" else frozenset(vm.unlit(int(x)) for x in body.split())
        tp = tail.split()
        if tp[0] == "wkn":
            prov[(i, j)] = ("wkn", int(tp[1]) - 1)
        elif tp[0] == "res":
            prov[(i, j)] = ("res", int(tp[1]), int(tp[2]), vm.vars[int(tp[3]) - 1])
        else:
            raise ProofFileError(f"cell ({i},{j}): unknown provenance")
        grid[(i, j)] = c
    return LayeredRefutation(s, t, grid, prov)


def write_atomic(path: str, text: str) -> None:
    """Write via a sibling temp file and rename."""
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-reskit-")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
