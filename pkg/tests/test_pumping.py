import pytest
from hypothesis import given, strategies as st

from pdlflc.automata import Nfa, determinize, nfa_accepts, unary_slice
from pdlflc.errors import InputError
from pdlflc.properties import anbn_pda, b_star, even_b, triple_b, unary_cycle
from pdlflc.pumping import (PumpingConstants, TransitionProfile, compose, identity_profile,
                            profile_of, profile_sequence, pumping_constants, verify_pumping)


def runs(nfa, q, w):
    """States reachable from q over w, by explicit search."""
    current = {q}
    for a in w:
        current = {r for s in current for r in nfa.successors(s, a)}
    return current


def test_profile_of_even_b():
    t = profile_of([even_b()], "b")
    assert t.relation(0) == {(0, 1), (1, 0)}
    assert compose(t, t).relation(0) == {(0, 0), (1, 1)}


def test_compose_identity_and_empty():
    autos = [even_b()]
    t = profile_of(autos, "b")
    assert compose(t, identity_profile(autos)) == t
    assert compose(identity_profile(autos), t) == t
    empty = TransitionProfile(frozenset(), t.fingerprint)
    assert compose(empty, t).pairs == frozenset()


def test_profile_pairs_stay_in_one_automaton():
    with pytest.raises(InputError):
        TransitionProfile(frozenset({((0, 0), (1, 0))}), ())


def test_compose_fingerprint_mismatch():
    with pytest.raises(InputError):
        compose(profile_of([even_b()], "b"), profile_of([triple_b()], "b"))


def test_profile_of_foreign_letter():
    with pytest.raises(InputError):
        profile_of([Nfa({0}, {"b"}, [], 0, {0})], "a")
    with pytest.raises(InputError):
        profile_of([], "b")


def test_pumping_constants_examples():
    assert pumping_constants([determinize(even_b())], "b") == PumpingConstants(1, 2)
    assert pumping_constants([determinize(b_star())], "b") == PumpingConstants(1, 1)
    c = pumping_constants([b_star(), triple_b()], "b")
    assert c.k % 3 == 0


def test_verify_pumping_examples():
    assert verify_pumping([even_b()], "b", PumpingConstants(1, 2), 20, 5)
    assert not verify_pumping([even_b()], "b", PumpingConstants(1, 1), 20, 5)
    assert verify_pumping([b_star()], "b", PumpingConstants(1, 1), 20, 5)


def test_constants_validation():
    with pytest.raises(InputError):
        PumpingConstants(1, 0)


cycles = st.lists(st.integers(1, 5), min_size=1, max_size=3)


@given(cycles, st.integers(1, 4), st.integers(1, 4))
def test_profile_word_map_is_a_homomorphism(periods, i, j):
    autos = [unary_cycle("b", p) for p in periods]
    seq = profile_sequence(autos, "b", i + j)
    assert seq[i + j - 1] == compose(seq[i - 1], seq[j - 1])


@given(cycles, st.integers(1, 8))
def test_profile_matches_run_search(periods, n):
    autos = [unary_cycle("b", p) for p in periods]
    t = profile_sequence(autos, "b", n)[-1]
    for i, A in enumerate(autos):
        expect = {(q, r) for q in A.states for r in runs(A, q, "b" * n)}
        assert t.relation(i) == expect


@given(cycles)
def test_constants_always_verify(periods):
    autos = [unary_cycle("b", p) for p in periods]
    c = pumping_constants(autos, "b")
    assert c.m >= 1 and c.k >= 1
    assert verify_pumping(autos, "b", c, 30, 4)


@given(cycles, st.integers(0, 12))
def test_sequence_is_ultimately_periodic(periods, i):
    autos = [unary_cycle("b", p) for p in periods]
    c = pumping_constants(autos, "b")
    seq = profile_sequence(autos, "b", c.m + i + 1)
    assert seq[c.m + i - 1] == seq[c.m + (i % c.k) - 1]


def test_lasso_slices_pump():
    s = unary_slice(anbn_pda(), "b")
    c = pumping_constants([s], "b")
    assert verify_pumping([s], "b", c, 40, 5)
    assert not any(nfa_accepts(s, "b" * n) for n in range(10))
