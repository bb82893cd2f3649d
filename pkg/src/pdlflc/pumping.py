"""Simultaneous transition profiles and joint pumping constants for several
finite automata read over a single letter."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .automata import Nfa, nfa_accepts
from .errors import InputError


def _fingerprint(automata: Sequence[Nfa]) -> tuple:
    return tuple((i, len(A.states), hash(A.states)) for i, A in enumerate(automata))


@dataclass(frozen=True)
class TransitionProfile:
    """A relation on the disjoint union of the automata's state sets.

    States are tagged with their automaton's index, so every pair is
    ``((i, q), (i, q'))``.
    """

    pairs: frozenset
    fingerprint: tuple

    def __post_init__(self):
        for (i, _), (j, _) in self.pairs:
            if i != j:
                raise InputError("a profile pair must stay inside one automaton")

    def relation(self, i: int) -> frozenset:
        """The untagged pairs belonging to automaton ``i``."""
        return frozenset((q, r) for (j, q), (_, r) in self.pairs if j == i)


def _check_list(automata):
    if not automata:
        raise InputError("need at least one automaton")


def profile_of(automata: Sequence[Nfa], a) -> TransitionProfile:
    _check_list(automata)
    pairs = set()
    for i, A in enumerate(automata):
        if a not in A.alphabet:
            raise InputError(f"letter {a!r} is not in the alphabet of automaton {i}")
        pairs.update(((i, q), (i, r)) for q, x, r in A.transitions if x == a)
    return TransitionProfile(frozenset(pairs), _fingerprint(automata))


def identity_profile(automata: Sequence[Nfa]) -> TransitionProfile:
    _check_list(automata)
    pairs = {((i, q), (i, q)) for i, A in enumerate(automata) for q in A.states}
    return TransitionProfile(frozenset(pairs), _fingerprint(automata))


def compose(t1: TransitionProfile, t2: TransitionProfile) -> TransitionProfile:
    """Relational product: first t1, then t2."""
    if t1.fingerprint != t2.fingerprint:
        raise InputError("profiles belong to different automaton lists")
    after = {}
    for q, r in t2.pairs:
        after.setdefault(q, set()).add(r)
    out = {(q, r) for q, mid in t1.pairs for r in after.get(mid, ())}
    return TransitionProfile(frozenset(out), t1.fingerprint)


@dataclass(frozen=True)
class PumpingConstants:
    m: int
    k: int

    def __post_init__(self):
        if self.k < 1 or self.m < 0:
            raise InputError("pumping constants need m >= 0 and k >= 1")


def profile_sequence(automata: Sequence[Nfa], a, length: int) -> list[TransitionProfile]:
    """Profiles of a^1 .. a^length."""
    step = profile_of(automata, a)
    out = [step]
    while len(out) < length:
        out.append(compose(out[-1], step))
    return out


def pumping_constants(automata: Sequence[Nfa], a) -> PumpingConstants:
    """First repetition in the sequence of profiles of a, a^2, a^3, ...

    ``m`` is the exponent of the profile's first occurrence and ``k`` the
    distance to its second occurrence.
    """
    step = profile_of(automata, a)
    limit = 2 ** sum(len(A.states) ** 2 for A in automata) + 1
    seen = {step.pairs: 1}
    current = step
    n = 1
    while n < limit:
        current = compose(current, step)
        n += 1
        first = seen.get(current.pairs)
        if first is not None:
            return PumpingConstants(first, n - first)
        seen[current.pairs] = n
    raise AssertionError("profile sequence did not repeat within the cardinality bound")


def verify_pumping(automata: Sequence[Nfa], a, c: PumpingConstants,
                   l_max: int, j_max: int) -> bool:
    """Check a^l in L_i iff a^(l + j*k) in L_i by direct membership, for every
    automaton, m+k <= l <= l_max and 0 <= j <= j_max."""
    for A in automata:
        cache = {}

        def member(n):
            if n not in cache:
                cache[n] = nfa_accepts(A, (a,) * n)
            return cache[n]

        for l in range(c.m + c.k, l_max + 1):
            for j in range(j_max + 1):
                if member(l) != member(l + j * c.k):
                    return False
    return True
