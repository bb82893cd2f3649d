"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v``; the lines appear even
without ``-s``.
"""

import io
import json
import time

import pytest

from pdlflc import flc
from pdlflc.automata import derivative, language, pda_accepts, unary_slice
from pdlflc.cli import main
from pdlflc.flc import all_partitions, eval_flc, holds, is_vpflc
from pdlflc.lab import Bounds, run_chain_experiment
from pdlflc.lts import Lts, make_witness_an_b_an, make_witness_diabox
from pdlflc.pdl import eval_pdl
from pdlflc.properties import (PROPERTY_NAMES, anbn_pda, b_star, build_property, even_b,
                               triple_b)
from pdlflc.pumping import pumping_constants, verify_pumping

from oracles import all_words, brute_property, brute_unfolded_anbn, random_lts_family


@pytest.fixture
def report(capsys):
    def emit(n, ok, detail):
        with capsys.disabled():
            print(f"\nCRITERION {n:>2}: {'PASS' if ok else 'FAIL'}  {detail}")
        return ok
    return emit


def timed(fn, *args, **kw):
    start = time.perf_counter()
    value = fn(*args, **kw)
    return value, time.perf_counter() - start


def _witness_check(n, report, make, prop, params):
    f, _ = build_property(prop)
    rows, ok = [], True
    for m, k, d in params:
        t1, t2 = make(m, k, d)
        v1, s1 = timed(holds, t1, t1.initial, f, "demand")
        v2, s2 = timed(holds, t2, t2.initial, f, "demand")
        good = v1 is True and v2 is False and s1 < 30 and s2 < 30
        ok &= good
        rows.append(f"({m},{k},{d}): T1={v1} T2={v2} {max(s1, s2):.2f}s")
    report(n, ok, f"{prop}; " + "; ".join(rows))
    assert ok, rows


def test_01_diabox_witness_flc_verdicts(report):
    _witness_check(1, report, make_witness_diabox, "dia_an_box_bn",
                   [(1, 1, 1), (1, 2, 1), (2, 2, 2)])


def test_02_an_b_an_witness_flc_verdicts(report):
    _witness_check(2, report, make_witness_an_b_an, "dia_an_box_b_dia_an",
                   [(1, 1, 1), (1, 2, 1), (2, 2, 2)])


def test_03_diabox_indistinguishability_harness(report, capsys):
    argv = ["separate", "--family", "diabox", "--langs", "ANBN", "BSTAR", "--depth", "1",
            "--size-cap", "6", "--json"]
    out = io.StringIO()
    code, secs = timed(main, argv, out)
    data = json.loads(out.getvalue())
    n_dis = len(data["disagreements"])
    ok = code == 0 and n_dis == 0 and secs < 300
    report(3, ok, f"exit={code} formulas={data['formulas_checked']} disagreements={n_dis} "
                  f"flc={data['flc_verdicts']['t1']}/{data['flc_verdicts']['t2']} {secs:.1f}s")
    # the same run with the extra a-edge from 0_4 into the fork, for comparison
    out2 = io.StringIO()
    code2 = main(argv + ["--cross-edge"], out2)
    d2 = json.loads(out2.getvalue())
    with capsys.disabled():
        print(f"\nCRITERION  3: INFO  with --cross-edge: exit={code2} "
              f"disagreements={len(d2['disagreements'])} "
              f"flc={d2['flc_verdicts']['t1']}/{d2['flc_verdicts']['t2']}")
    assert ok


def test_04_chain_indistinguishability_harness(report):
    langs = [language("EVENB", even_b()), language("BSTAR", b_star())]
    rows, ok = [], True
    for d_prime in (1, 2):
        r, secs = timed(run_chain_experiment, langs, d_prime, Bounds())
        good = not r.disagreements and secs < 300
        ok &= good
        rows.append(f"d'={d_prime}: m={r.m} k={r.k} l={r.l} formulas={r.formulas_checked} "
                    f"claimed disagreements={len(r.disagreements)} {secs:.1f}s")
    report(4, ok, "; ".join(rows))
    assert ok


def test_05_pumping_constants_verify(report):
    families = {
        "(bb)*": [even_b()],
        "(bbb)*, b*": [triple_b(), b_star()],
        "b-slice of a^n b^n": [unary_slice(anbn_pda(), "b")],
    }
    rows, ok = [], True
    for name, autos in families.items():
        start = time.perf_counter()
        c = pumping_constants(autos, "b")
        good = verify_pumping(autos, "b", c, 40, 5)
        secs = time.perf_counter() - start
        ok &= good and secs < 1
        rows.append(f"{name}: m={c.m} k={c.k} verified={good} {secs:.3f}s")
    report(5, ok, "; ".join(rows))
    assert ok


def test_06_derivative_matches_brute_force(report):
    start = time.perf_counter()
    pda = anbn_pda()
    der = derivative(pda, "a")
    bad = [w for w in all_words("ab", 8) if pda_accepts(der, w) != pda_accepts(pda, "a" + w)]
    secs = time.perf_counter() - start
    ok = not bad and secs < 10
    report(6, ok, f"{2 ** 9 - 1} words, mismatches={len(bad)} {secs:.2f}s")
    assert ok


def test_07_vpflc_recognizer(report):
    start = time.perf_counter()
    f4, _ = build_property("dia_an_box_bn")
    accepts = is_vpflc(f4, {"a"}, {"b"}, ())
    fab, _ = build_property("dia_anban")
    wrongly = [p for p in all_partitions("ab") if is_vpflc(fab, *p)]
    secs = time.perf_counter() - start
    ok = accepts and not wrongly and secs < 1
    report(7, ok, f"<a^n>[b^n] formula accepted={accepts}; a^n b a^n accepted under "
                  f"{len(wrongly)}/9 partitions; {secs * 1000:.1f}ms")
    assert ok


def test_08_semantics_match_oracles(report):
    """The oracle unfolds the disjunction over n >= 1 with boolean relation
    powers and stops once the pair (R_a^n, R_b^n) repeats; from then on
    every disjunct is a copy of an earlier one, so the cutoff is exact."""
    start = time.perf_counter()
    family = random_lts_family(100, seed=2024, max_states=6)
    mismatches = []
    for i, lts in enumerate(family):
        for name in PROPERTY_NAMES:
            f, g = build_property(name)
            expect = brute_property(lts, name)
            got = frozenset(s for s in lts.states if holds(lts, s, f))
            if got != expect:
                mismatches.append((i, name, "holds"))
            if g is not None and eval_pdl(lts, g) != expect:
                mismatches.append((i, name, "eval_pdl"))
    secs = time.perf_counter() - start
    ok = not mismatches and secs < 120
    report(8, ok, f"100 LTS x 5 properties, mismatches={len(mismatches)} {secs:.1f}s")
    assert ok, mismatches[:5]


def test_09_unfolding_on_chains(report):
    f, _ = build_property("dia_anbn")
    start = time.perf_counter()
    bad = []
    for i in range(7):
        for j in range(7):
            edges = ([(x, "a", x + 1) for x in range(i)]
                     + [(i + y, "b", i + y + 1) for y in range(j)])
            lts = Lts(range(i + j + 1), edges, {i + j: {"p"}}, initial=0, alphabet={"a", "b"})
            got = holds(lts, 0, f)
            if got != (i == j >= 1) or got != brute_unfolded_anbn(lts, 0, n_max=7):
                bad.append((i, j))
    secs = time.perf_counter() - start
    ok = not bad and secs < 1
    report(9, ok, f"a^i b^j chains for i, j <= 6, mismatches={len(bad)} {secs * 1000:.0f}ms")
    assert ok, bad


def closed_subformulas(f):
    out = []

    def walk(g):
        if not flc.free_vars(g):
            out.append(g)
        for child in (getattr(g, "left", None), getattr(g, "right", None),
                      getattr(g, "body", None)):
            if child is not None:
                walk(child)

    walk(f)
    return out


def test_10_monotonicity(report):
    family = random_lts_family(20, seed=7, min_states=5, max_states=5)
    checked, violations = 0, []
    for lts in family:
        for name in PROPERTY_NAMES:
            for g in closed_subformulas(build_property(name)[0]):
                checked += 1
                bad = eval_flc(lts, g).monotonicity_violation(samples=200)
                if bad is not None:
                    violations.append((name, flc.to_text(g), bad))
    ok = checked > 0 and not violations
    report(10, ok, f"{len(family)} five-state LTS, {checked} transformers, "
                   f"violations={len(violations)}")
    assert ok, violations[:3]
