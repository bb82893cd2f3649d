"""Finite labelled transition systems, path queries, and the witness families
used by the separation experiments."""

from __future__ import annotations

from collections import defaultdict
from typing import Hashable, Iterable, Mapping

from .errors import InputError

State = Hashable
Word = tuple


def state_key(s):
    """Sort key that orders ints numerically and everything else by text."""
    if isinstance(s, int) and not isinstance(s, bool):
        return (0, s, "")
    return (1, 0, str(s))


def as_word(w) -> Word:
    """Accept a string (one letter per character) or any sequence of letters."""
    return tuple(w)


class Lts:
    """A finite labelled transition system.

    Instances are immutable; successor maps are built once on construction.
    """

    __slots__ = ("states", "transitions", "labelling", "initial", "alphabet",
                 "_succ", "_order")

    def __init__(self, states: Iterable, transitions: Iterable = (),
                 labelling: Mapping | None = None, initial=None,
                 alphabet: Iterable | None = None):
        states = frozenset(states)
        transitions = frozenset((s, a, t) for s, a, t in transitions)
        if alphabet is None:
            alphabet = {a for _, a, _ in transitions}
        alphabet = frozenset(alphabet)
        labelling = dict(labelling or {})
        for s in labelling:
            if s not in states:
                raise InputError(f"labelled state {s!r} is not a state")
        full = {s: frozenset(labelling.get(s, ())) for s in states}
        for s, a, t in transitions:
            if s not in states or t not in states:
                raise InputError(f"transition {(s, a, t)!r} leaves the state set")
            if a not in alphabet:
                raise InputError(f"letter {a!r} is not in the alphabet")
        if initial is not None and initial not in states:
            raise InputError(f"initial state {initial!r} is not a state")

        succ = defaultdict(set)
        for s, a, t in transitions:
            succ[s, a].add(t)
        sset = object.__setattr__
        sset(self, "states", states)
        sset(self, "transitions", transitions)
        sset(self, "labelling", full)
        sset(self, "initial", initial)
        sset(self, "alphabet", alphabet)
        sset(self, "_succ", {k: frozenset(v) for k, v in succ.items()})
        sset(self, "_order", tuple(sorted(states, key=state_key)))

    def __setattr__(self, name, value):
        raise AttributeError("Lts is immutable")

    def __eq__(self, other):
        if not isinstance(other, Lts):
            return NotImplemented
        return (self.states == other.states
                and self.transitions == other.transitions
                and self.labelling == other.labelling
                and self.initial == other.initial
                and self.alphabet == other.alphabet)

    def __hash__(self):
        return hash((self.states, self.transitions, self.initial))

    def __repr__(self):
        return (f"Lts({len(self.states)} states, {len(self.transitions)} transitions, "
                f"initial={self.initial!r})")

    @property
    def ordered_states(self) -> tuple:
        return self._order

    @property
    def propositions(self) -> frozenset:
        return frozenset().union(*self.labelling.values()) if self.labelling else frozenset()

    def successors(self, s, a) -> frozenset:
        return self._succ.get((s, a), frozenset())

    def holds(self, s, prop) -> bool:
        return prop in self.labelling[s]

    def sat(self, prop) -> frozenset:
        return frozenset(s for s in self.states if prop in self.labelling[s])

    def _check_state(self, s):
        if s not in self.states:
            raise InputError(f"unknown state {s!r}")


def reach_by_word(lts: Lts, s, w) -> frozenset:
    """All t with s -w-> t; the empty word yields {s}."""
    lts._check_state(s)
    current = {s}
    for a in as_word(w):
        if a not in lts.alphabet:
            raise InputError(f"letter {a!r} is not in the alphabet")
        current = set().union(*(lts.successors(q, a) for q in current)) if current else set()
    return frozenset(current)


def words_from(lts: Lts, s, max_len: int) -> set:
    """Every pair (w, t) with |w| <= max_len and s -w-> t."""
    lts._check_state(s)
    if max_len < 0:
        raise InputError("max_len must be non-negative")
    letters = sorted(lts.alphabet, key=str)
    out = {((), s)}
    frontier = {((), s)}
    for _ in range(max_len):
        nxt = set()
        for w, q in frontier:
            for a in letters:
                for t in lts.successors(q, a):
                    nxt.add((w + (a,), t))
        out |= nxt
        frontier = nxt
    return out


def make_chain_b(l: int) -> Lts:
    """The b-chain l -> l-1 -> ... -> 0 with p only at 0, rooted at l."""
    if l < 0:
        raise InputError("chain length must be non-negative")
    return Lts(
        states=range(l + 1),
        transitions=[(i + 1, "b", i) for i in range(l)],
        labelling={0: {"p"}},
        initial=l,
        alphabet={"a", "b"},
    )


def _chain(letter, suffix, length):
    """States j_suffix for j = length..0 with j+1 -letter-> j edges."""
    names = [f"{j}_{suffix}" for j in range(length, -1, -1)]
    edges = [(names[i], letter, names[i + 1]) for i in range(len(names) - 1)]
    return names, edges


def _check_params(**params):
    for name, v in params.items():
        if not isinstance(v, int) or v < 1:
            raise InputError(f"{name} must be a positive integer, got {v!r}")


def _diabox_fork(l: int, k: int):
    """The T2 right half: dn with two b-branches of lengths l and l+k."""
    two, e2 = _chain("b", 2, l)
    three, e3 = _chain("b", 3, l + k)
    states = ["dn", *two, *three]
    edges = e2 + e3 + [("dn", "b", two[0]), ("dn", "b", three[0])]
    return states, edges, {"0_2": {"p"}, "0_3": {"p"}}


def make_witness_diabox(m: int, k: int, d: int, cross_edge: bool = False) -> tuple[Lts, Lts]:
    """The pair (T1, T2) separating <a^n>[b^n] at modal depth d.

    With ``cross_edge`` set, T1 additionally gets 0_4 -a-> dn into a copy of
    T2's right half.
    """
    _check_params(m=m, k=k, d=d)
    l = (m + k) * d

    four, e4 = _chain("a", 4, l)
    one, e1 = _chain("b", 1, l)
    states1 = [*four, "u", *one]
    edges1 = e4 + e1 + [("0_4", "a", "u"), ("u", "b", one[0])]
    label1 = {"0_1": {"p"}}
    if cross_edge:
        fs, fe, fl = _diabox_fork(l, k)
        states1 += fs
        edges1 += fe + [("0_4", "a", "dn")]
        label1.update(fl)
    t1 = Lts(states1, edges1, label1, initial=four[0], alphabet={"a", "b"})

    five, e5 = _chain("a", 5, l)
    fs, fe, fl = _diabox_fork(l, k)
    t2 = Lts([*five, *fs], e5 + fe + [("0_5", "a", "dn")], fl,
             initial=five[0], alphabet={"a", "b"})
    return t1, t2


def _anban_fork(L: int, k: int):
    two, e2 = _chain("a", 2, L)
    three, e3 = _chain("a", 3, L + k)
    states = ["dn", *two, *three]
    edges = e2 + e3 + [("dn", "b", two[0]), ("dn", "b", three[0])]
    return states, edges, {"0_2": {"p"}, "0_3": {"p"}}


def make_witness_an_b_an(m: int, k: int, d: int, cross_edge: bool = False) -> tuple[Lts, Lts]:
    """The pair (T1, T2) separating <a^n>[b]<a^n> at modal depth d.

    Left a-chains have (m+k)d - 1 edges followed by one a-edge into u (resp.
    dn); the branches after the single b-edge are a-chains of length (m+k)d
    and, in T2, also (m+k)d + k.
    """
    _check_params(m=m, k=k, d=d)
    L = (m + k) * d

    four, e4 = _chain("a", 4, L - 1)
    one, e1 = _chain("a", 1, L)
    states1 = [*four, "u", *one]
    edges1 = e4 + e1 + [("0_4", "a", "u"), ("u", "b", one[0])]
    label1 = {"0_1": {"p"}}
    if cross_edge:
        fs, fe, fl = _anban_fork(L, k)
        states1 += fs
        edges1 += fe + [("0_4", "a", "dn")]
        label1.update(fl)
    t1 = Lts(states1, edges1, label1, initial=four[0], alphabet={"a", "b"})

    five, e5 = _chain("a", 5, L - 1)
    fs, fe, fl = _anban_fork(L, k)
    t2 = Lts([*five, *fs], e5 + fe + [("0_5", "a", "dn")], fl,
             initial=five[0], alphabet={"a", "b"})
    return t1, t2
