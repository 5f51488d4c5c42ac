import io
import subprocess
import sys

import pytest

from scglab.cli import main


def run(*argv):
    out = io.StringIO()
    code = main([str(a) for a in argv], out=out)
    return code, out.getvalue()


@pytest.fixture
def d(data_dir):
    return data_dir


def golden(d, name):
    return (d / "golden" / name).read_text()


def test_run_sweep(d):
    code, out = run("run", d / "sweep.g", d / "aa.cohorts")
    assert code == 0
    assert "# final: [{LB}, {B}, {B}, {RB}]" in out
    assert out == golden(d, "run_sweep.txt")


def test_run_cycle_loop(d):
    code, out = run("run", d / "cycle.g", d / "a.cohorts", "--detect-loops")
    assert code == 2
    assert "# status: loop" in out


def test_run_cycle_step_limit(d):
    code, out = run("run", d / "cycle.g", d / "a.cohorts", "--max-steps", 10)
    assert code == 4


def test_run_bound_exceeded(tmp_path, d):
    g = tmp_path / "grow.g"
    g.write_text("FEATURES A X\nADDCOHORT (X) (1 RB)\n")
    code, out = run("run", g, d / "a.cohorts", "-f", 0)
    assert code == 3 and "fertility" in out


def test_run_trace(d):
    code, out = run("run", d / "sweep.g", d / "aa.cohorts", "--trace")
    assert out.splitlines()[:2] == [
        "# trace 1: rule 0 [REPLACE (A) (B) (0 A)] at 1 -> [{LB}, {B}, {A}, {RB}]",
        "# trace 2: rule 0 [REPLACE (A) (B) (0 A)] at 2 -> [{LB}, {B}, {B}, {RB}]",
    ]


def test_run_missing_file(d, capsys):
    code, out = run("run", d / "missing.g", d / "a.cohorts")
    assert code == 1 and out == ""
    assert "cannot read" in capsys.readouterr().err


def test_run_undeclared_tag(tmp_path, d, capsys):
    s = tmp_path / "z.cohorts"
    s.write_text("LB\nA Z\nRB\n")
    assert run("run", d / "sweep.g", s)[0] == 1
    assert "undeclared" in capsys.readouterr().err
    code, out = run("run", d / "sweep.g", s, "--lenient")
    assert code == 0 and "# final: [{LB}, {B}, {RB}]" in out


def test_negative_bound_is_a_usage_error(d):
    with pytest.raises(SystemExit) as err:
        run("run", d / "sweep.g", d / "a.cohorts", "-f", -1)
    assert err.value.code == 1


def test_tm_examples(d):
    assert run("tm", d / "sweeper.tm", "--input", "AA") == (0, "ACCEPT BB steps=3\n")
    assert run("tm", d / "loop.tm", "--max-steps", 20) == (4, "STEP_LIMIT ε steps=20\n")
    code, out = run("tm", d / "misuse.tm", "--input", "AA")
    assert code == 6 and out.startswith("CONTRACT_VIOLATION")
    assert run("tm", d / "twopass.tm", "--input", "AB")[0] == 5
    assert run("tm", d / "twopass.tm", "--input", "AB", "-w", 1)[0] == 6


def test_tm_crossings(d):
    assert run("tm", d / "sweeper.tm", "--input", "AA", "--crossings")[1] == golden(d, "tm_sweeper_aa.txt")


def test_tm_trace(d):
    code, out = run("tm", d / "sweeper.tm", "--input", "A", "--trace")
    assert out.splitlines()[0] == "# trace 0: q0 head=0 LB A RB"


def test_tm_bad_input_symbol(d):
    assert run("tm", d / "sweeper.tm", "--input", "AZ")[0] == 1


def test_compile_and_run(tmp_path, d):
    g = tmp_path / "sweeper.g"
    code, out = run("compile", d / "sweeper.tm", "-o", g)
    assert code == 0 and out == "rules: 18\n"
    assert len((tmp_path / "sweeper.g.provenance").read_text().splitlines()) == 18
    g = tmp_path / "twopass.g"
    run("compile", d / "twopass.tm", "-o", g)
    for word, accepted in [("BA", True), ("AB", False), ("", True), ("BAAB", True), ("AAAB", False)]:
        x = tmp_path / "x.cohorts"
        x.write_text(run("encode", d / "twopass.tm", "--input", word)[1])
        code, out = run("run", g, x)
        assert code == 0 and ("Q.qa" in out) == accepted
        assert run("tm", d / "twopass.tm", "--input", word)[0] == (0 if accepted else 5)


def test_compile_to_stdout(d, capsys):
    code, out = run("compile", d / "sweeper.tm")
    assert out.startswith("FEATURES LB RB A B Q.q0 Q.q1")
    assert "rules: 18" in capsys.readouterr().err


def test_compile_empty_and_invalid(d):
    code, out = run("compile", d / "empty.tm")
    assert code == 0 and out.splitlines()[1:] == []
    assert run("compile", d / "invalid.tm")[0] == 1


def test_encode(d):
    assert run("encode", d / "sweeper.tm", "--input", "AB") == (0, "LB Q.q0\nA\nB\nRB\n")


def test_check(d):
    code, out = run("check", d / "sweeper.tm", "--max-len", 5)
    assert code == 0 and "mismatches=0" in out
    assert run("check", d / "sweeper.tm", "--max-len", 1, "--csv") == (0, golden(d, "check_sweeper.csv"))
    code, out = run("check", d / "sweeper.tm", "--max-len", 0, "--csv")
    assert len(out.splitlines()) == 2


def test_check_mutated_grammar(tmp_path, d):
    g = tmp_path / "sweeper.g"
    run("compile", d / "sweeper.tm", "-o", g)
    provenance = (tmp_path / "sweeper.g.provenance").read_text().splitlines()
    # delete the step-2 rule of the A-rewriting transition
    victim = next(int(line.split("\t")[0]) for line in provenance if "q1 A ->" in line and line.endswith("\t2"))
    lines = g.read_text().splitlines()
    del lines[victim + 1]  # line 0 is the FEATURES header
    bad = tmp_path / "bad.g"
    bad.write_text("\n".join(lines) + "\n")
    code, out = run("check", d / "sweeper.tm", "--max-len", 2, "--grammar", bad)
    assert code == 7 and "mismatch" in out
    assert run("check", d / "sweeper.tm", "--max-len", 2, "--drop-rule", victim)[0] == 7


def test_check_random(d):
    code, out = run("check", "--random", 3, "--seed", 5, "--max-len", 3)
    assert code == 0 and out.count("mismatches=0") == 3
    assert run("check", "--random", 3, "--seed", 5, "--max-len", 3) == (code, out)
    assert run("check")[0] == 1


def test_analyze(d):
    code, out = run("analyze", d / "sweeper.tm", "--crossings", "--max-len", 3)
    assert code == 0 and out.rstrip().endswith("global k = 1")
    code, out = run("analyze", d / "sweeper.tm", "--k", 1, "--max-len", 5)
    assert code == 0 and "EQUIVALENT (desk scale)" in out
    assert run("analyze", d / "twopass.tm", "--k", 2, "--max-len", 2, "--csv") == (0, golden(d, "analyze_twopass.csv"))
    code, out = run("analyze", d / "twopass.tm", "--weights", 1, "--max-len", 2)
    assert code == 0 and "weight of square" in out and "6 weight violations" in out


def test_analyze_export(tmp_path, d):
    path = tmp_path / "nfa.txt"
    run("analyze", d / "sweeper.tm", "--k", 1, "--max-len", 1, "--export", path)
    assert path.read_text().startswith("initial: [q1>]/0\n")


def test_analyze_needs_a_mode(d):
    with pytest.raises(SystemExit) as err:
        run("analyze", d / "sweeper.tm")
    assert err.value.code == 1


def test_bench(d):
    assert run("bench", d / "sweeper.tm", "--symbol", "A", "--csv") == (0, golden(d, "bench_sweeper.csv"))
    assert run("bench", d / "sweeper.tm", "--symbol", "A") == (0, golden(d, "bench_sweeper.txt"))
    code, out = run("bench", d / "copy.tm", "--symbol", "A", "--sizes", "8,16,32,64")
    assert "verdict: superlinear" in out
    assert run("bench", d / "sweeper.tm", "--sizes", "8")[0] == 1
    assert run("bench", d / "sweeper.tm", "--symbol", "Z")[0] == 1


def test_bench_is_deterministic(d):
    a = run("bench", d / "twopass.tm", "--sizes", "8,16,32", "--reps", 3, "--seed", 4, "--compiled")
    assert a == run("bench", d / "twopass.tm", "--sizes", "8,16,32", "--reps", 3, "--seed", 4, "--compiled")
    assert "applications+scan_work" in a[1]


def test_module_entry_point(d):
    p = subprocess.run([sys.executable, "-m", "scglab", "tm", str(d / "sweeper.tm"), "--input", "AA"],
                       capture_output=True, text=True)
    assert p.returncode == 0 and p.stdout == "ACCEPT BB steps=3\n"
