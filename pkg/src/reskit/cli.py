"""Command-line interface.

Subcommands: gen (formula families to DIMACS), reduce (3-CNF to the
relativized refutation statement plus timeout arithmetic), synth (the
constructive Res(2) refutation), check (proof verification), convert
(layered or low index-width forms), audit (the width adversary), and
sample (random-restriction statistics).  All outputs are byte
deterministic given flags and seed; RESKIT_SEED supplies the default
seed.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import dimacs
from .core import Cnf, restrict_cnf
from .encodings import (ParamSet, check_object_cnf, gamma_assignment, gen_php,
                        gen_ref_f, gen_ref_nr, gen_rkref_f, gen_rkref_nr,
                        gen_sat)
from .proofsys import (proof_metrics, resolution_to_layered, verify_layered,
                       verify_resk)
from .synth import size_bound, synth_reflection_refutation
from .adversary import audit_refutation, beta_rate, gamma_rate, sample_rho, trial_seed
from .trees import find_representing_tree, index_width


def _default_seed() -> int:
    return int(os.environ.get("RESKIT_SEED", "0"))


def _write(path: str, text: str, say=print) -> None:
    dimacs.write_atomic(path, text)
    say(f"wrote {path}")


def _load_cnf(path: str) -> Cnf:
    with open(path) as fh:
        return dimacs.parse_dimacs(fh.read())


def _emit_formula(f: Cnf, out: str, say=print) -> None:
    text = dimacs.emit_dimacs(f)
    _write(out, text, say)
    _write(out + ".varmap", dimacs.emit_varmap(f), say)


def cmd_gen(args) -> int:
    fam = args.family
    p = args.params
    if fam == "sat":
        n, r = map(int, p)
        f = gen_sat(n, r)
    elif fam == "php":
        (n,) = map(int, p)
        f = gen_php(n)
    elif fam == "ref-nr":
        n, r, s, t = map(int, p)
        f = gen_ref_nr(n, r, s, t)
    elif fam == "rkref-nr":
        n, r, s, t, k = map(int, p)
        f = gen_rkref_nr(n, r, s, t, k)
    elif fam == "ref-f":
        base = _load_cnf(p[0])
        s, t = map(int, p[1:])
        f = gen_ref_f(base, s, t)
    elif fam == "rkref-f":
        base = _load_cnf(p[0])
        s, t, k = map(int, p[1:])
        f = gen_rkref_f(base, s, t, k)
    elif fam in ("pair-A", "pair-B"):
        n, k = map(int, p)
        php = gen_php(n)
        nt = (n + 1) * n
        r = n + 1 + (n ** 3 + n ** 2) // 2
        s, t = nt + 1, nt ** k
        if fam == "pair-A":
            f = restrict_cnf(gen_sat(nt, r), gamma_assignment(php)).prune_universe()
        else:
            f = gen_rkref_f(php, s, t, k)
    else:
        raise SystemExit(f"unknown family {fam}")
    _emit_formula(f, args.out)
    return 0


def cmd_reduce(args) -> int:
    f = _load_cnf(args.cnf)
    for c in f.clauses:
        if len(c) > 3:
            raise SystemExit(f"clause with {len(c)} literals; the reduction takes 3-CNFs")
    n = check_object_cnf(f)
    k = args.k
    s, t = n + 1, n ** (k + 3)
    out = gen_rkref_f(f, s, t, k)
    _emit_formula(out, args.out)
    budget = args.c1 * n ** (args.c2 * k)
    print(f"query: does the statement admit a width-{k} refutation within "
          f"{args.timeout_name}({args.c1}*{n}^({args.c2}*{k})) = {args.timeout_name}({budget}) steps")
    print(f"grid: s={s} t={t}; satisfiable inputs admit refutations of size "
          f"<= 64*{size_bound(n, len(f.clauses), s, t, k)}")
    return 0


def cmd_synth(args) -> int:
    n, r, s, t, k = args.n, args.r, args.s, args.t, args.k
    trace = synth_reflection_refutation(n, r, s, t, k)
    cnf_text = dimacs.emit_dimacs(trace.cnf)
    _write(args.out + ".cnf", cnf_text)
    _write(args.out + ".proof",
           dimacs.emit_proof(trace.proof, trace.cnf, dimacs.cnf_digest(cnf_text)))
    length, size = proof_metrics(trace.proof)
    bound = size_bound(n, r, s, t, k)
    report = {"length": length, "size": size, "size_bound": bound,
              "ratio": size / bound, "phases": trace.phase_counts()}
    print(json.dumps(report) if args.json else
          f"synthesized {length} lines, size {size}, bound {bound} (ratio {size/bound:.2f})")
    return 0


def cmd_check(args) -> int:
    with open(args.cnf) as fh:
        cnf_text = fh.read()
    f = dimacs.parse_dimacs(cnf_text)
    digest = dimacs.cnf_digest(cnf_text)
    with open(args.proof) as fh:
        try:
            proof = dimacs.parse_proof(fh.read(), f, expect_digest=digest)
        except dimacs.ProofFileError as e:
            print(json.dumps({"valid": False, "error": str(e)}) if args.json else f"invalid: {e}")
            return 1
    if args.k is not None and proof.k != args.k:
        print(f"invalid: proof has k={proof.k}, expected {args.k}")
        return 1
    rep = verify_resk(proof, f, refutation=not args.derivation)
    if args.json:
        print(json.dumps({"valid": rep.valid, "violation": _viol(rep),
                          "length": rep.length, "size": rep.size}))
    else:
        if rep.valid:
            print(f"valid: {rep.length} lines, size {rep.size}")
        else:
            line, rule, reason = rep.violation
            print(f"invalid at line {line + 1} ({rule}): {reason}")
    return 0 if rep.valid else 1


def _viol(rep):
    if rep.violation is None:
        return None
    line, rule, reason = rep.violation
    return {"line": (line + 1) if isinstance(line, int) else line,
            "rule": rule, "reason": reason}


def cmd_convert(args) -> int:
    with open(args.cnf) as fh:
        cnf_text = fh.read()
    f = dimacs.parse_dimacs(cnf_text)
    with open(args.proof) as fh:
        proof = dimacs.parse_proof(fh.read(), f, expect_digest=dimacs.cnf_digest(cnf_text))
    if args.mode == "layered":
        lam = resolution_to_layered(proof, f)
        rep = verify_layered(lam, f)
        assert rep.valid, rep.violation
        _write(args.out, dimacs.emit_layered(lam, f))
        print(f"layered: {lam.s} levels of {lam.t} clauses")
        return 0
    # low index-width conversion; trees found by the exhaustive oracle
    from .trees import resk_to_low_width_resolution, HypothesisError
    n, r, s, t = args.n, args.r, args.s, args.t
    params = ParamSet(n, r, s, t)
    trees = []
    for i, (g, _) in enumerate(proof.lines):
        got = find_representing_tree(g, args.height, params)
        if got is None:
            print(f"line {i + 1}: no strongly representing tree of height <= {args.height}")
            return 1
        trees.append(got[1])
    try:
        out, target = resk_to_low_width_resolution(f, proof, trees, args.height, params)
    except HypothesisError as e:
        print(f"hypothesis violation: {e}")
        return 1
    target_text = dimacs.emit_dimacs(target)
    _write(args.out + ".cnf", target_text)
    _write(args.out + ".proof",
           dimacs.emit_proof(out, target, dimacs.cnf_digest(target_text)))
    widths = [index_width(g.as_clause()) for g, _ in out.lines]
    print(f"resolution refutation of {len(out.lines)} lines, index-width {max(widths)}"
          f" (bound {3 * args.height})")
    return 0


def cmd_audit(args) -> int:
    php = gen_php(args.php)
    with open(args.cnf) as fh:
        cnf_text = fh.read()
    f = dimacs.parse_dimacs(cnf_text)
    with open(args.proof) as fh:
        proof = dimacs.parse_proof(fh.read(), f, expect_digest=dimacs.cnf_digest(cnf_text))
    out = audit_refutation(proof, php, args.s, args.t, args.w)
    if args.json:
        print(json.dumps({"kind": out.kind, "line": out.line + 1, "detail": out.detail}))
    else:
        print(f"{out.kind} at line {out.line + 1}: {out.detail}")
    return 2 if out.kind == "WidthExcess" else 1


def cmd_sample(args) -> int:
    n, r, s, t, k = args.n, args.r, args.s, args.t, args.k
    seed = args.seed if args.seed is not None else _default_seed()
    hits = {(i, j): 0 for i in range(1, s + 1) for j in range(1, t + 1)}
    for i in range(args.trials):
        rho = sample_rho(n, r, s, t, k, trial_seed(seed, i))
        for pair in rho.selected:
            hits[pair] += 1
    freq = {f"{i},{j}": hits[(i, j)] / args.trials for (i, j) in hits}
    expect = 2.0 ** -k
    report = {"trials": args.trials, "seed": seed, "expected": expect,
              "selection_frequency": freq,
              "gamma": {str(a): gamma_rate(a) for a in range(1, 4)},
              "beta": {str(kk): beta_rate(kk) for kk in range(1, 4)}}
    if args.json:
        print(json.dumps(report))
    else:
        worst = max(abs(v - expect) for v in freq.values())
        print(f"{args.trials} samples, seed {seed}: selection frequency within "
              f"{worst:.4f} of 2^-{k} = {expect:.4f}")
        print(f"gamma(1)={gamma_rate(1):.6f} beta({k})={beta_rate(k):.8f}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="reskit",
                                 description="refutation-statement toolkit")
    sub = ap.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate a formula family as DIMACS")
    g.add_argument("family", choices=["sat", "ref-f", "ref-nr", "rkref-f",
                                      "rkref-nr", "php", "pair-A", "pair-B"])
    g.add_argument("params", nargs="+",
                   help="family parameters; file path first for ref-f/rkref-f")
    g.add_argument("-o", "--out", required=True)
    g.set_defaults(fn=cmd_gen)

    rd = sub.add_parser("reduce", help="map a 3-CNF to its relativized refutation statement")
    rd.add_argument("cnf")
    rd.add_argument("k", type=int)
    rd.add_argument("-o", "--out", required=True)
    rd.add_argument("--c1", type=int, default=1)
    rd.add_argument("--c2", type=int, default=8)
    rd.add_argument("--timeout-name", default="T")
    rd.set_defaults(fn=cmd_reduce)

    sy = sub.add_parser("synth", help="synthesize the Res(2) refutation of the reflection conjunction")
    for name in ("n", "r", "s", "t", "k"):
        sy.add_argument(name, type=int)
    sy.add_argument("-o", "--out", required=True)
    sy.add_argument("--json", action="store_true")
    sy.set_defaults(fn=cmd_synth)

    ck = sub.add_parser("check", help="verify a proof file against its CNF")
    ck.add_argument("proof")
    ck.add_argument("cnf")
    ck.add_argument("-k", type=int, default=None)
    ck.add_argument("--derivation", action="store_true",
                    help="accept a derivation that does not end in the empty clause")
    ck.add_argument("--json", action="store_true")
    ck.set_defaults(fn=cmd_check)

    cv = sub.add_parser("convert", help="convert proofs between forms")
    cv.add_argument("mode", choices=["layered", "lowwidth"])
    cv.add_argument("proof")
    cv.add_argument("cnf")
    cv.add_argument("-o", "--out", required=True)
    cv.add_argument("--height", type=int, default=1)
    for name in ("n", "r", "s", "t"):
        cv.add_argument(f"--{name}", type=int, default=1)
    cv.set_defaults(fn=cmd_convert)

    au = sub.add_parser("audit", help="width-adversary audit of a claimed refutation")
    au.add_argument("proof")
    au.add_argument("cnf")
    au.add_argument("--php", type=int, required=True,
                    help="audit against the refutation statement of this pigeonhole size")
    au.add_argument("-s", type=int, required=True)
    au.add_argument("-t", type=int, required=True)
    au.add_argument("-w", type=int, required=True)
    au.add_argument("--json", action="store_true")
    au.set_defaults(fn=cmd_audit)

    sm = sub.add_parser("sample", help="random-restriction statistics")
    for name in ("n", "r", "s", "t", "k"):
        sm.add_argument(name, type=int)
    sm.add_argument("--trials", type=int, default=1000)
    sm.add_argument("--seed", type=int, default=None)
    sm.add_argument("--json", action="store_true")
    sm.set_defaults(fn=cmd_sample)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (ValueError, OSError, dimacs.ProofFileError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
