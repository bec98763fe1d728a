import shlex
import subprocess
import sys

import pytest

from herbrand import assemblies as asm
from herbrand import pca, sigma as sg
from herbrand.cli import EXIT_FAILS, EXIT_HOLDS, EXIT_MALFORMED, EXIT_UNKNOWN, exit_code, main
from herbrand.pca import App, Num, Var, app, lam

OMEGA = app(pca.S, pca.I, pca.I)
DOC = """
(assembly A (carrier 0 1) (realizers (num 0) (num 1)) (alpha (0 (set (num 0))) (1 (set (num 1)))))
(assembly B (carrier x) (realizers all) (alpha (x (set))))
(morphism f (source A) (target B) (map (0 x) (1 x)))
(morphism bad (source A) (target A) (map (0 1) (1 0)) (tracking (app (app S K) K)))
"""


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


def test_eval_constant(capsys):
    code, out, _ = run(capsys, "eval", "(app (app K (num 1)) (num 2))")
    assert code == EXIT_HOLDS and out.strip() == "(num 1)"


def test_eval_surjectivity_vector(capsys, tmp_path):
    n = Var("n")
    tag = lambda i: App(pca.UNIT, App(pca.UNIT, app(pca.MKPAIR, n, Num(i))))
    s = app(pca.CMAP, lam("n", app(pca.CAT, tag(0), tag(1))))
    path = write(tmp_path, "surj.term", pca.show(App(s, pca.seq(Num(3), Num(5)))))
    code, out, _ = run(capsys, "eval", path)
    assert code == EXIT_HOLDS
    assert out.strip() == ("(seq (seq (pair (num 3) (num 0))) (seq (pair (num 3) (num 1)))"
                           " (seq (pair (num 5) (num 0))) (seq (pair (num 5) (num 1))))")


def test_eval_divergence(capsys):
    code, out, _ = run(capsys, "--fuel", "500", "eval", pca.show(App(OMEGA, OMEGA)))
    assert code == EXIT_UNKNOWN and "diverged after 500 steps" in out


def test_eval_stuck(capsys):
    code, out, _ = run(capsys, "eval", "(app len (num 2))")
    assert code == EXIT_FAILS and "stuck" in out


def test_parse_error_reports_position(capsys, tmp_path):
    path = write(tmp_path, "bad.term", "(app K\n  (num x))")
    code, _, err = run(capsys, "eval", path)
    assert code == EXIT_MALFORMED
    assert "line 2" in err


def predicate_file(tmp_path, name, value):
    return write(tmp_path, name, f"(predicate (index 0 1) (0 {value}) (1 (top)))")


ATOM = "(atom (a1 (num 0) (num 1)) (gens (set (num 0))))"


def test_check_identity_entailment(capsys, tmp_path):
    p = predicate_file(tmp_path, "p", ATOM)
    code, out, _ = run(capsys, "check", "entailment", p, p, "(app (app S K) K)")
    assert code == EXIT_HOLDS and out.strip().endswith("entailment: holds")


def test_check_top_below_bottom(capsys, tmp_path):
    top = write(tmp_path, "top", "(predicate (index 0) (0 (top)))")
    bot = write(tmp_path, "bot", "(predicate (index 0) (0 (bot)))")
    code, out, _ = run(capsys, "check", "entailment", top, bot, "K")
    assert code == EXIT_FAILS and "fails at 0" in out


def test_check_deep_implication_is_unknown(capsys, tmp_path):
    a = sg.parse_tv(ATOM)
    t = a
    for _ in range(5):
        t = sg.Imp(t, a)
    p = predicate_file(tmp_path, "deep", sg.tv_to_sexpr(t))
    code, out, _ = run(capsys, "--probe-len", "1", "check", "entailment", p, p, "(app (app S K) K)")
    assert code == EXIT_UNKNOWN and "probe-limit" in out


def test_check_structured_output(capsys, tmp_path):
    p = predicate_file(tmp_path, "p", ATOM)
    code, out, _ = run(capsys, "--format", "structured", "check", "entailment", p, p, "K")
    assert code == EXIT_FAILS
    lines = out.strip().splitlines()
    for line in lines:
        fields = dict(tok.split("=", 1) for tok in shlex.split(line))
        assert fields["record"] in ("probe", "outcome")
    assert dict(tok.split("=", 1) for tok in shlex.split(lines[-1]))["outcome"] == "fails"


def test_check_malformed_predicate(capsys, tmp_path):
    p = write(tmp_path, "p", "(predicate (index 0) (0 (atom)))")
    code, _, err = run(capsys, "check", "entailment", p, p, "K")
    assert code == EXIT_MALFORMED and "error" in err


def test_check_tracking(capsys, tmp_path):
    doc = write(tmp_path, "doc", DOC)
    assert run(capsys, "check", "tracking", doc, "f")[0] == EXIT_HOLDS
    code, out, _ = run(capsys, "check", "tracking", doc, "bad")
    assert code == EXIT_FAILS and "bad: fails" in out
    assert run(capsys, "check", "tracking", doc)[0] == EXIT_FAILS
    assert run(capsys, "check", "tracking", doc, "nope")[0] == EXIT_MALFORMED


def test_synth_law_to_file(capsys, tmp_path):
    out = str(tmp_path / "fst.term")
    assert run(capsys, "synth", "law", "fst", "-o", out)[0] == EXIT_HOLDS
    term = pca.parse(open(out).read())
    assert pca.apply(term, pca.seq(sg.tag0(Num(4)))).term == pca.seq(Num(4))


def test_synth_tracking_and_bound(capsys, tmp_path):
    doc = write(tmp_path, "doc", DOC)
    code, out, _ = run(capsys, "synth", "tracking", doc, "bad")
    assert code == EXIT_HOLDS
    objs, _ = asm.load_document(DOC)
    fixed = asm.morphism(objs["A"], objs["A"], {0: 1, 1: 0}, tracking=pca.parse(out))
    assert asm.is_tracked(fixed)
    code, out, _ = run(capsys, "synth", "bound", "0", "2")
    assert pca.apply(pca.parse(out), Num(1)).term == pca.seq(Num(0), Num(1), Num(2))
    assert run(capsys, "synth", "law", "nonsense")[0] == EXIT_MALFORMED


def test_assembly_product_output_parses(capsys, tmp_path):
    doc = write(tmp_path, "doc", DOC)
    code, out, _ = run(capsys, "assembly", "product", "A", "B", "-d", doc)
    assert code == EXIT_HOLDS
    objs, maps = asm.load_document(out)
    assert set(maps) == {"fst", "snd"} and asm.is_tracked(maps["fst"])
    code, out, _ = run(capsys, "--nmax", "3", "assembly", "nno")
    assert asm.load_document(out)[0]["N"].carrier == (0, 1, 2, 3)
    assert run(capsys, "assembly", "product", "A", "-d", doc)[0] == EXIT_MALFORMED


def test_demo_wlem(capsys):
    code, out, _ = run(capsys, "demo", "wlem")
    assert code == EXIT_HOLDS and "0 failed" in out


def test_demo_fan_bundled(capsys):
    code, out, _ = run(capsys, "demo", "fan")
    assert code == EXIT_HOLDS and "extracted bound 3" in out


def test_demo_fan_rejected_payload(capsys, tmp_path):
    from herbrand import principles as pr
    text = pr.full_tree(2, 3).to_sexpr("T") + "\n(bar b (tree T) (length-at-least 3) (payload 2))"
    code, out, _ = run(capsys, "demo", "fan", "--file", write(tmp_path, "bar", text))
    assert code == EXIT_FAILS and "rejected" in out


def test_demo_pretopos_sizes(capsys):
    code, out, _ = run(capsys, "demo", "pretopos", "--sizes", "2,2")
    assert code == EXIT_HOLDS and "8 passed, 0 failed" in out


def test_unknown_demo_is_rejected(capsys):
    with pytest.raises(SystemExit):
        main(["demo", "nonsense"])


def test_bad_config(capsys):
    assert run(capsys, "--fuel", "0", "eval", "K")[0] == EXIT_MALFORMED


def test_exit_code_depends_on_outcome_only():
    assert exit_code(sg.HOLDS) == 0
    assert exit_code(sg.Fails(pca.K, "x", 3)) == exit_code(sg.Fails(pca.S, "y")) == 1
    assert exit_code(sg.Unknown("fuel")) == exit_code(sg.Unknown("probe-limit", True)) == 2


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "herbrand", "eval", "(app (app K S) K)"],
                         capture_output=True, text=True, check=False)
    assert res.returncode == 0 and res.stdout.strip() == "S"
