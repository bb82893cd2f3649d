import io
import json

import pytest

from pdlflc.cli import main
from pdlflc.formats import parse_automaton, parse_lts, serialize_automaton, serialize_lts
from pdlflc.automata import pda_accepts
from pdlflc.lts import make_chain_b
from pdlflc.properties import anbn_pda, anbn_vpa, b_star, even_b

from oracles import all_words


def run(*argv):
    out = io.StringIO()
    code = main([str(a) for a in argv], out)
    return code, out.getvalue()


@pytest.fixture
def files(tmp_path):
    paths = {
        "chain": tmp_path / "chain.lts",
        "evenb": tmp_path / "evenb.nfa",
        "bstar": tmp_path / "bstar.nfa",
        "anbn": tmp_path / "anbn.pda",
        "anbn_vp": tmp_path / "anbn.vpa",
    }
    paths["chain"].write_text(serialize_lts(make_chain_b(3)))
    paths["evenb"].write_text(serialize_automaton(even_b()))
    paths["bstar"].write_text(serialize_automaton(b_star()))
    paths["anbn"].write_text(serialize_automaton(anbn_pda()))
    paths["anbn_vp"].write_text(serialize_automaton(anbn_vpa()))
    paths["dir"] = tmp_path
    return paths


def test_check_pdl(files):
    code, out = run("check", "--lts", files["chain"], "--formula", "<EVENB>p",
                    "--lang", f"EVENB={files['evenb']}")
    assert code == 0
    assert "satisfying states: {0, 2}" in out
    assert "holds at initial state: false" in out


def test_check_standard_language_and_state(files):
    code, out = run("check", "--lts", files["chain"], "--formula", "<BSTAR>p", "--state", "3")
    assert code == 0 and "holds at state 3: true" in out


def test_check_formula_from_file(files):
    ff = files["dir"] / "f.txt"
    ff.write_text("<b> ; <b> ; p\n")
    code, out = run("check", "--lts", files["chain"], "--formula", ff, "--logic", "flc")
    assert code == 0 and "satisfying states: {2}" in out


def test_check_flc_on_generated_t1(files):
    code, out = run("witness", "--family", "diabox", "--m", 1, "--k", 1, "--d", 1,
                    "--out", files["dir"])
    assert code == 0
    code, out = run("check", "--lts", files["dir"] / "diabox_T1.lts", "--property",
                    "dia_an_box_bn", "--logic", "flc", "--mode", "demand")
    assert code == 0 and "holds at initial state: true" in out


def test_check_property_has_no_pdl_form(files):
    code, _ = run("check", "--lts", files["chain"], "--property", "game_iter")
    assert code == 3


def test_depth():
    code, out = run("depth", "--formula", "~<L>[M]p")
    assert code == 0
    assert "modal depth: 3" in out and "modal-only depth: 2" in out and "size: 4" in out


def test_derive(files):
    target = files["dir"] / "der.pda"
    code, _ = run("derive", "--automaton", files["anbn"], "--letter", "a", "--output", target)
    assert code == 0
    der = parse_automaton(target.read_text())
    for w in all_words("ab", 7):
        n = (len(w) + 1) // 2
        assert pda_accepts(der, w) == (n >= 1 and "a" + w == "a" * n + "b" * n)
    code, out = run("derive", "--automaton", files["evenb"], "--letter", "b")
    assert code == 0 and out.startswith("pda")


def test_pump(files):
    code, out = run("pump", "--automata", files["evenb"], "--letter", "b")
    assert code == 0 and out.strip() == "m=1 k=2"
    code, out = run("pump", "--automata", files["evenb"], files["bstar"], "--letter", "b",
                    "--verify", 30, 4)
    assert code == 0 and "verified up to l=30, j=4: true" in out
    code, _ = run("pump", "--automata", files["anbn"], "--letter", "b")
    assert code == 3


def test_witness_chain(files):
    code, out = run("witness", "--family", "chain", "--m", 1, "--k", 2, "--d", 1,
                    "--out", files["dir"])
    assert code == 0
    assert parse_lts((files["dir"] / "chain_3.lts").read_text()) == make_chain_b(3)
    assert parse_lts((files["dir"] / "chain_5.lts").read_text()) == make_chain_b(5)


def test_witness_rejects_bad_params(files):
    code, _ = run("witness", "--family", "anban", "--m", 0, "--k", 1, "--d", 1,
                  "--out", files["dir"])
    assert code == 3


def test_separate_chain(files):
    code, out = run("separate", "--family", "chain", "--langs", files["evenb"], "BSTAR",
                    "--depth", 1, "--size-cap", 4)
    assert code == 0
    assert "pumping constants: m=1 k=2" in out and "indistinguishable: true" in out


def test_separate_json_is_stable(files):
    args = ("separate", "--family", "chain", "--langs", "EVENB", "--depth", 1,
            "--size-cap", 4, "--json", "--no-timing")
    code1, out1 = run(*args)
    code2, out2 = run(*args)
    assert code1 == code2 == 0 and out1 == out2
    data = json.loads(out1)
    assert {"experiment", "params", "m", "k", "l", "formulas_checked", "disagreements",
            "flc_verdicts", "duration_ms"} <= set(data)


def test_separate_disagreement_exit_code(files):
    # the FLC property holds on both structures, so the run is flagged
    code, out = run("separate", "--family", "anban", "--langs", "ANBAN", "--depth", 1,
                    "--size-cap", 3)
    assert code == 5
    assert "FLC dia_an_box_b_dia_an" in out


def test_separate_unknown_language(files):
    code, _ = run("separate", "--family", "chain", "--langs", "NOPE", "--depth", 1)
    assert code == 3


def test_vpcheck():
    f = "mu Z . (<a>;[b] | <a>;Z;[b]) ; p"
    code, out = run("vpcheck", "--formula", f, "--calls", "a", "--returns", "b")
    assert code == 0 and out.strip() == "vpFLC: true"
    code, out = run("vpcheck", "--formula", f, "--calls", "b", "--returns", "a")
    assert code == 0 and out.strip() == "vpFLC: false"
    code, _ = run("vpcheck", "--formula", f, "--calls", "a")
    assert code == 3


def test_reach(files):
    code, out = run("reach", "--lts", files["chain"], "--lang", files["evenb"])
    assert code == 0
    pairs = {tuple(map(int, line.split())) for line in out.splitlines()}
    assert pairs == {(0, 0), (1, 1), (2, 2), (3, 3), (2, 0), (3, 1)}


def test_parse_error_exit_code(files):
    bad = files["dir"] / "bad.lts"
    bad.write_text("state 0\nwhat 1\n")
    code, _ = run("check", "--lts", bad, "--formula", "p")
    assert code == 2
    code, _ = run("check", "--lts", files["chain"], "--formula", "(p & q | r)")
    assert code == 2


def test_semantic_error_exit_codes(files):
    code, _ = run("check", "--lts", files["chain"], "--formula", "<NOPE>p")
    assert code == 3
    code, _ = run("check", "--lts", files["dir"] / "missing.lts", "--formula", "p")
    assert code == 3
    code, _ = run("check", "--lts", files["chain"], "--formula", "p", "--state", "9")
    assert code == 3


def test_resource_exit_code(files, monkeypatch):
    monkeypatch.setenv("PDLFLC_STATE_CAP", "2")
    code, _ = run("check", "--lts", files["chain"], "--formula", "p", "--logic", "flc",
                  "--mode", "tabulated")
    assert code == 4


def test_usage_error_exits_2():
    with pytest.raises(SystemExit) as e:
        main(["check"])
    assert e.value.code == 2
