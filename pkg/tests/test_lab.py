import json

import pytest

from pdlflc import flc
from pdlflc.automata import language
from pdlflc.errors import InputError
from pdlflc.flc import Box, Diamond, Prop, chop, holds
from pdlflc.lab import (Bounds, ExperimentReport, run_an_b_an_experiment, run_chain_experiment,
                        run_diabox_experiment)
from pdlflc.lts import make_witness_an_b_an, make_witness_diabox
from pdlflc.properties import a_star, anban_pda, anbn_pda, b_star, even_b

BSTAR = language("BSTAR", b_star())
EVENB = language("EVENB", even_b())
ASTAR = language("ASTAR", a_star())
ANBN = language("ANBN", anbn_pda())
ANBAN = language("ANBAN", anban_pda())

small = Bounds(size_cap=4)


def test_bounds_validation():
    with pytest.raises(InputError):
        Bounds(size_cap=0)
    with pytest.raises(InputError):
        Bounds(depth_measure="deep")
    with pytest.raises(InputError):
        Bounds(flc_mode="lazy")
    with pytest.raises(InputError):
        Bounds(slice_bound=0)


@pytest.mark.parametrize("langs,k", [([BSTAR], 1), ([EVENB], 2), ([EVENB, BSTAR], 2)])
def test_chain_experiment_small(langs, k):
    r = run_chain_experiment(langs, 1, small)
    assert r.m == 1 and r.k == k and r.l == r.m + r.k
    assert r.indistinguishable and r.ok
    assert r.params["claimed_states"] == [r.l, r.l]
    assert r.formulas_checked > 0


def test_chain_experiment_reports_unclaimed_states():
    # near the end of the chains the two structures differ on <b>p and friends
    r = run_chain_experiment([EVENB], 1, small)
    assert r.unclaimed
    assert all(d["t1_state"] < r.l for d in r.unclaimed)


def test_chain_length_knob():
    r = run_chain_experiment([BSTAR], 1, Bounds(size_cap=3, chain_length=5))
    assert r.l == 5 and r.params["claimed_states"] == [2, 5]
    assert r.indistinguishable
    with pytest.raises(InputError):
        run_chain_experiment([BSTAR], 1, Bounds(size_cap=3, chain_length=1))
    with pytest.raises(InputError):
        run_chain_experiment([BSTAR], 0, small)


def test_empty_language_list():
    r = run_diabox_experiment([], 1, small)
    assert (r.m, r.k, r.l) == (1, 1, 2)
    assert r.indistinguishable
    assert r.flc_verdicts["property"] == "dia_an_box_bn"


def test_an_b_an_with_a_star():
    r = run_an_b_an_experiment([ASTAR], 1, small)
    assert r.indistinguishable
    # a* has no words starting with b, so its b-derivative slice is empty
    assert r.k >= 1


def test_unresolved_language_rejected():
    from pdlflc.automata import LanguageRef
    with pytest.raises(InputError):
        run_diabox_experiment([LanguageRef("X", "CFL")], 1, small)


def test_report_serialization_is_deterministic():
    r1 = run_chain_experiment([EVENB], 1, small)
    r2 = run_chain_experiment([EVENB], 1, small)
    r1.duration_ms = r2.duration_ms = 0
    assert r1.to_json() == r2.to_json()
    data = json.loads(r1.to_json())
    assert list(data) == sorted(data)
    assert {"m", "k", "l", "formulas_checked", "disagreements", "indistinguishable",
            "note"} <= set(data)
    text = r1.to_text()
    assert "pumping constants: m=1 k=2" in text and "indistinguishable: true" in text


def test_report_flags():
    base = dict(experiment="x", params={}, m=1, k=1, l=2, formulas_checked=0)
    assert ExperimentReport(**base).ok
    sep = {"property": "p", "t1": True, "t2": False}
    assert ExperimentReport(**base, flc_verdicts=sep).ok
    same = {"property": "p", "t1": True, "t2": True}
    assert not ExperimentReport(**base, flc_verdicts=same).ok
    assert not ExperimentReport(**base, disagreements=[{}]).ok


# How the witness pairs interact with the FLC properties. The separating
# disjunct is the one whose n matches the length of T1's path; the n = 1
# disjunct already holds on T2 because the states after one a-step have no
# b-successors, so the box is vacuous there.

def a_box_b(n, tail):
    return chop(*[Diamond("a")] * n, *[Box("b")] * n, tail)


@pytest.mark.parametrize("m,k,d", [(1, 1, 1), (1, 2, 1)])
def test_diabox_matching_disjunct_separates(m, k, d):
    t1, t2 = make_witness_diabox(m, k, d)
    n = (m + k) * d + 1
    f = a_box_b(n, Prop("p"))
    assert holds(t1, t1.initial, f)
    assert not holds(t2, t2.initial, f)


@pytest.mark.parametrize("m,k,d", [(1, 1, 1), (1, 2, 1)])
def test_diabox_first_disjunct_vacuous_on_t2(m, k, d):
    t1, t2 = make_witness_diabox(m, k, d)
    f = a_box_b(1, Prop("p"))
    assert holds(t2, t2.initial, f)
    assert holds(t1, t1.initial, f)


@pytest.mark.parametrize("m,k,d", [(1, 1, 1), (1, 2, 1)])
def test_an_b_an_disjuncts(m, k, d):
    t1, t2 = make_witness_an_b_an(m, k, d)
    L = (m + k) * d

    def g(n):
        return chop(*[Diamond("a")] * n, Box("b"), *[Diamond("a")] * n, Prop("p"))

    assert holds(t1, t1.initial, g(L)) and not holds(t2, t2.initial, g(L))
    assert holds(t2, t2.initial, g(1))


def test_diabox_experiment_default_shape():
    r = run_diabox_experiment([ANBN, BSTAR], 1, Bounds(size_cap=4))
    assert (r.m, r.k, r.l) == (1, 1, 2)
    v = r.flc_verdicts
    assert v["t1"] is True
    assert v["formula"] == flc.to_text(flc.Chop(
        flc.Mu("Z", flc.Or(chop(Diamond("a"), Box("b")),
                           chop(Diamond("a"), flc.Var("Z"), Box("b")))), Prop("p")))
