"""File formats and the command-line surface."""

import hashlib
import json
import os
import subprocess
import sys

import pytest

from reskit import dimacs
from reskit.core import Cnf, KDnf, clause, neg, pos
from reskit.encodings import gen_php, gen_ref_f, gen_sat
from reskit.proofsys import ReskProof, resolution_to_layered, verify_layered
from reskit.synth import synth_reflection_refutation
from conftest import dp_refutation


def run_cli(*args, cwd=None):
    return subprocess.run([sys.executable, "-m", "reskit.cli", *args],
                          capture_output=True, text=True, cwd=cwd)


def test_dimacs_roundtrip_php():
    f = gen_php(2)
    text = dimacs.emit_dimacs(f)
    assert "p cnf 6 9" in text
    assert dimacs.parse_dimacs(text) == f


def test_dimacs_roundtrip_structured():
    f = gen_ref_f(Cnf.make([clause(pos(1))], [1]), 2, 1)
    text = dimacs.emit_dimacs(f)
    back = dimacs.parse_dimacs(text)
    assert back == f
    # varmap comments name every variable
    assert "c v 1 " in text


def test_varmap_sidecar_consistent():
    f = gen_sat(1, 1)
    side = dimacs.emit_varmap(f)
    lines = [l.split() for l in side.strip().splitlines()]
    assert [int(a) for a, _ in lines] == list(range(1, 6))
    assert len({b for _, b in lines}) == 5


def test_proof_roundtrip():
    trace = synth_reflection_refutation(1, 1, 2, 2, 1)
    text = dimacs.emit_proof(trace.proof, trace.cnf)
    back = dimacs.parse_proof(text, trace.cnf)
    assert back == trace.proof


def test_proof_digest_binding():
    trace = synth_reflection_refutation(1, 1, 1, 1, 1)
    text = dimacs.emit_proof(trace.proof, trace.cnf, digest="0" * 16)
    with pytest.raises(dimacs.ProofFileError):
        dimacs.parse_proof(text, trace.cnf, expect_digest="f" * 16)


def test_layered_roundtrip():
    f = Cnf.make([clause(pos(1)), clause(neg(1))], [1])
    proof = dp_refutation(f)
    lam = resolution_to_layered(proof, f)
    text = dimacs.emit_layered(lam, f)
    back = dimacs.parse_layered(text, f)
    assert back == lam
    assert verify_layered(back, f).valid


def test_emission_determinism():
    a = dimacs.emit_dimacs(gen_php(2))
    b = dimacs.emit_dimacs(gen_php(2))
    assert a == b
    s1 = dimacs.emit_proof(*_synth_pair())
    s2 = dimacs.emit_proof(*_synth_pair())
    assert s1 == s2


def _synth_pair():
    trace = synth_reflection_refutation(1, 1, 2, 1, 1)
    return trace.proof, trace.cnf


# --- CLI ----------------------------------------------------------------------

def test_cli_gen_php_header(tmp_path):
    out = tmp_path / "php2.cnf"
    r = run_cli("gen", "php", "2", "-o", str(out))
    assert r.returncode == 0
    assert "p cnf 6 9" in out.read_text()
    assert (tmp_path / "php2.cnf.varmap").exists()


def test_cli_gen_sat_header(tmp_path):
    out = tmp_path / "s.cnf"
    assert run_cli("gen", "sat", "1", "1", "-o", str(out)).returncode == 0
    assert "p cnf 5 5" in out.read_text()


def test_cli_gen_pair_b(tmp_path):
    out = tmp_path / "b.cnf"
    assert run_cli("gen", "pair-B", "1", "1", "-o", str(out)).returncode == 0
    f = dimacs.parse_dimacs(out.read_text())
    # relativized statement over PHP(1): 2 object vars, s=3, t=2
    svars = [v for v in f.variables if getattr(v, "kind", None) == "S"]
    assert len(svars) == 3 * 2 * 1
    dvars = [v for v in f.variables if getattr(v, "kind", None) == "D"]
    assert len(dvars) == 3 * 2 * 2 * 2


def test_cli_gen_pair_a_disjoint_from_b(tmp_path):
    ra = run_cli("gen", "pair-A", "1", "1", "-o", str(tmp_path / "a.cnf"))
    rb = run_cli("gen", "pair-B", "1", "1", "-o", str(tmp_path / "b.cnf"))
    assert ra.returncode == rb.returncode == 0
    fa = dimacs.parse_dimacs((tmp_path / "a.cnf").read_text())
    fb = dimacs.parse_dimacs((tmp_path / "b.cnf").read_text())
    assert not (set(fa.variables) & set(fb.variables))


def test_cli_synth_check_roundtrip(tmp_path):
    base = str(tmp_path / "x")
    r = run_cli("synth", "1", "1", "2", "2", "1", "-o", base)
    assert r.returncode == 0
    r2 = run_cli("check", base + ".proof", base + ".cnf")
    assert r2.returncode == 0, r2.stdout
    assert "valid" in r2.stdout


def test_cli_check_rejects_truncation(tmp_path):
    base = str(tmp_path / "x")
    run_cli("synth", "1", "1", "1", "1", "1", "-o", base)
    text = open(base + ".proof").read().splitlines()
    open(base + ".proof", "w").write("\n".join(text[:-1]) + "\n")
    r = run_cli("check", base + ".proof", base + ".cnf")
    assert r.returncode == 1
    assert "line" in r.stdout or "invalid" in r.stdout


def test_cli_check_rejects_wrong_cnf(tmp_path):
    base = str(tmp_path / "x")
    run_cli("synth", "1", "1", "1", "1", "1", "-o", base)
    run_cli("gen", "php", "1", "-o", str(tmp_path / "other.cnf"))
    r = run_cli("check", base + ".proof", str(tmp_path / "other.cnf"))
    assert r.returncode == 1


def test_cli_check_json(tmp_path):
    base = str(tmp_path / "x")
    run_cli("synth", "1", "1", "1", "1", "1", "-o", base)
    r = run_cli("check", base + ".proof", base + ".cnf", "--json")
    rep = json.loads(r.stdout)
    assert rep["valid"] is True and rep["violation"] is None


def test_cli_reduce_small(tmp_path):
    f = tmp_path / "f.cnf"
    f.write_text("p cnf 2 2\n1 2 0\n-1 2 0\n")
    r = run_cli("reduce", str(f), "1", "-o", str(tmp_path / "out.cnf"))
    assert r.returncode == 0
    assert "T(256)" in r.stdout
    assert "s=3 t=16" in r.stdout
    assert (tmp_path / "out.cnf").exists()


def test_cli_reduce_rejects_wide(tmp_path):
    f = tmp_path / "f.cnf"
    f.write_text("p cnf 4 1\n1 2 3 4 0\n")
    r = run_cli("reduce", str(f), "1", "-o", str(tmp_path / "out.cnf"))
    assert r.returncode != 0


def test_cli_reduce_unit_only(tmp_path):
    f = tmp_path / "f.cnf"
    f.write_text("p cnf 1 1\n1 0\n")
    r = run_cli("reduce", str(f), "1", "-o", str(tmp_path / "out.cnf"))
    assert r.returncode == 0
    parsed = dimacs.parse_dimacs((tmp_path / "out.cnf").read_text())
    assert len(parsed.clauses) > 0


def test_cli_sample_runs(tmp_path):
    r = run_cli("sample", "1", "1", "2", "2", "1", "--trials", "500",
                "--seed", "9", "--json")
    rep = json.loads(r.stdout)
    assert rep["trials"] == 500
    for v in rep["selection_frequency"].values():
        assert abs(v - 0.5) < 0.1


def test_cli_seed_env_default(tmp_path):
    env = dict(os.environ, RESKIT_SEED="31337")
    r = subprocess.run([sys.executable, "-m", "reskit.cli", "sample",
                        "1", "1", "2", "2", "1", "--trials", "100", "--json"],
                       capture_output=True, text=True, env=env)
    assert json.loads(r.stdout)["seed"] == 31337


def test_cli_byte_determinism(tmp_path):
    a, b = str(tmp_path / "a"), str(tmp_path / "b")
    run_cli("synth", "1", "1", "2", "2", "2", "-o", a)
    run_cli("synth", "1", "1", "2", "2", "2", "-o", b)
    assert open(a + ".cnf", "rb").read() == open(b + ".cnf", "rb").read()
    assert open(a + ".proof", "rb").read() == open(b + ".proof", "rb").read()


def test_cli_audit_classifies(tmp_path):
    # a pseudo-proof over the PHP1 refutation statement
    php1 = gen_php(1)
    target = gen_ref_f(php1, 4, 5)
    proof = ReskProof.make(1, [(KDnf.make([], 1), ("in", 0))])
    cnf_text = dimacs.emit_dimacs(target)
    (tmp_path / "t.cnf").write_text(cnf_text)
    (tmp_path / "t.proof").write_text(
        dimacs.emit_proof(proof, target, dimacs.cnf_digest(cnf_text)))
    r = run_cli("audit", str(tmp_path / "t.proof"), str(tmp_path / "t.cnf"),
                "--php", "1", "-s", "4", "-t", "5", "-w", "2", "--json")
    rep = json.loads(r.stdout)
    assert rep["kind"] == "InvalidProof"
    assert r.returncode == 1


def test_cli_convert_layered(tmp_path):
    f = Cnf.make([clause(pos(1)), clause(neg(1))], [1])
    proof = dp_refutation(f)
    cnf_text = dimacs.emit_dimacs(f)
    (tmp_path / "f.cnf").write_text(cnf_text)
    (tmp_path / "f.proof").write_text(
        dimacs.emit_proof(proof, f, dimacs.cnf_digest(cnf_text)))
    r = run_cli("convert", "layered", str(tmp_path / "f.proof"),
                str(tmp_path / "f.cnf"), "-o", str(tmp_path / "lay.txt"))
    assert r.returncode == 0
    assert "levels" in r.stdout
    text = (tmp_path / "lay.txt").read_text()
    assert text.startswith("p layered")


def test_cli_convert_lowwidth(tmp_path):
    from reskit.encodings import D, ref_universe
    u = D(1, 1, 1, 1)
    h = Cnf.make([clause(pos(u)), clause(neg(u))], ref_universe(1, 1, 1, 1))
    proof = ReskProof.make(1, [
        (KDnf.from_clause(clause(pos(u)), 1), ("in", h.index_of(clause(pos(u))))),
        (KDnf.from_clause(clause(neg(u)), 1), ("in", h.index_of(clause(neg(u))))),
        (KDnf.make([], 1), ("cut", 0, 1)),
    ])
    cnf_text = dimacs.emit_dimacs(h)
    (tmp_path / "h.cnf").write_text(cnf_text)
    (tmp_path / "h.proof").write_text(
        dimacs.emit_proof(proof, h, dimacs.cnf_digest(cnf_text)))
    r = run_cli("convert", "lowwidth", str(tmp_path / "h.proof"),
                str(tmp_path / "h.cnf"), "-o", str(tmp_path / "low"),
                "--height", "1", "--n", "1", "--r", "1", "--s", "1", "--t", "1")
    assert r.returncode == 0, r.stdout + r.stderr
    assert "index-width" in r.stdout
    r2 = run_cli("check", str(tmp_path / "low.proof"), str(tmp_path / "low.cnf"))
    assert r2.returncode == 0
