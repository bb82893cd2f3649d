"""Acceptors for regular, visibly pushdown and context-free languages.

Pushdown automata follow the real-time model: every transition reads one
input letter, and a transition either inspects the top stack symbol or, on an
empty stack, the bottom marker (represented here by ``None``). Stacks are
tuples with the top at the right end, so a transition with ``pop=X`` and
``push=(Y, Z)`` replaces the top ``X`` by ``Y`` and leaves ``Z`` on top.
"""

from __future__ import annotations

import itertools
from collections import defaultdict, deque
from dataclasses import dataclass, field
from typing import Hashable, Iterable, NamedTuple

from .errors import BoundTooSmall, InputError
from .lts import as_word, state_key

BOTTOM = None


def _fs(x) -> frozenset:
    return frozenset(x)


# ---------------------------------------------------------------------------
# NFA

@dataclass(frozen=True)
class Nfa:
    states: frozenset
    alphabet: frozenset
    transitions: frozenset
    initial: Hashable
    accepting: frozenset

    def __post_init__(self):
        for name in ("states", "alphabet", "accepting"):
            object.__setattr__(self, name, _fs(getattr(self, name)))
        object.__setattr__(self, "transitions",
                           _fs((q, a, r) for q, a, r in self.transitions))
        if self.initial not in self.states:
            raise InputError(f"initial state {self.initial!r} is not a state")
        if not self.accepting <= self.states:
            raise InputError("accepting states must be states")
        for q, a, r in self.transitions:
            if q not in self.states or r not in self.states:
                raise InputError(f"edge {(q, a, r)!r} leaves the state set")
            if a not in self.alphabet:
                raise InputError(f"edge letter {a!r} is not in the alphabet")
        delta = defaultdict(set)
        for q, a, r in self.transitions:
            delta[q, a].add(r)
        object.__setattr__(self, "_delta", {k: frozenset(v) for k, v in delta.items()})

    def step(self, qs, a) -> frozenset:
        out = set()
        for q in qs:
            out |= self._delta.get((q, a), frozenset())
        return frozenset(out)

    def successors(self, q, a) -> frozenset:
        return self._delta.get((q, a), frozenset())

    def is_deterministic(self) -> bool:
        return all(len(self.successors(q, a)) == 1
                   for q in self.states for a in self.alphabet)

    def to_pda(self) -> "Pda":
        """The same language as a pushdown automaton that never touches its stack."""
        return Pda(self.states, self.alphabet, (),
                   [PdaTransition(q, a, BOTTOM, (), r) for q, a, r in self.transitions],
                   self.initial, self.accepting)


def _check_letters(alphabet, w):
    for a in w:
        if a not in alphabet:
            raise InputError(f"letter {a!r} is not in the alphabet")


def nfa_accepts(nfa: Nfa, w) -> bool:
    w = as_word(w)
    _check_letters(nfa.alphabet, w)
    current = frozenset([nfa.initial])
    for a in w:
        current = nfa.step(current, a)
        if not current:
            return False
    return bool(current & nfa.accepting)


def determinize(nfa: Nfa) -> Nfa:
    """Subset construction. The result is total, so the empty subset may
    appear as a rejecting sink."""
    letters = sorted(nfa.alphabet, key=str)
    start = frozenset([nfa.initial])
    seen = {start}
    queue = deque([start])
    edges = []
    while queue:
        qs = queue.popleft()
        for a in letters:
            nxt = nfa.step(qs, a)
            edges.append((qs, a, nxt))
            if nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)
    accepting = {qs for qs in seen if qs & nfa.accepting}
    return Nfa(seen, nfa.alphabet, edges, start, accepting)


def nfa_universal(alphabet, letters=None) -> Nfa:
    """One accepting state looping on ``letters`` (default: all of ``alphabet``)."""
    letters = alphabet if letters is None else letters
    return Nfa({0}, alphabet, [(0, a, 0) for a in letters], 0, {0})


# ---------------------------------------------------------------------------
# PDA / VPA

class PdaTransition(NamedTuple):
    source: Hashable
    letter: Hashable
    pop: Hashable  # stack symbol, or BOTTOM for the empty-stack case
    push: tuple
    target: Hashable


@dataclass(frozen=True)
class Pda:
    states: frozenset
    alphabet: frozenset
    stack_alphabet: frozenset
    transitions: frozenset
    initial: Hashable
    accepting: frozenset
    empty_stack: bool = False  # accept only with an empty stack

    def __post_init__(self):
        for name in ("states", "alphabet", "stack_alphabet", "accepting"):
            object.__setattr__(self, name, _fs(getattr(self, name)))
        object.__setattr__(self, "transitions", _fs(
            PdaTransition(q, a, g, tuple(push), r) for q, a, g, push, r in self.transitions))
        if self.stack_alphabet & self.alphabet:
            raise InputError("stack alphabet and input alphabet must be disjoint")
        if BOTTOM in self.stack_alphabet or BOTTOM in self.alphabet:
            raise InputError("the bottom marker cannot be a letter or stack symbol")
        if self.initial not in self.states:
            raise InputError(f"initial state {self.initial!r} is not a state")
        if not self.accepting <= self.states:
            raise InputError("accepting states must be states")
        index = defaultdict(list)
        for t in self.transitions:
            if t.source not in self.states or t.target not in self.states:
                raise InputError(f"transition {t!r} leaves the state set")
            if t.letter not in self.alphabet:
                raise InputError(f"transition letter {t.letter!r} is not in the alphabet")
            if t.pop is not BOTTOM and t.pop not in self.stack_alphabet:
                raise InputError(f"pop symbol {t.pop!r} is not a stack symbol")
            for g in t.push:
                if g not in self.stack_alphabet:
                    raise InputError(f"push symbol {g!r} is not a stack symbol")
            index[t.source, t.letter, t.pop].append(t)
        object.__setattr__(self, "_index", dict(index))

    def moves(self, q, a, top):
        return self._index.get((q, a, top), ())

    @property
    def max_push(self) -> int:
        return max((len(t.push) for t in self.transitions), default=0)


@dataclass(frozen=True)
class Vpa(Pda):
    """A pushdown automaton over a visibly pushdown alphabet.

    Acceptance always requires an empty stack. Shape rules are checked by
    :func:`vpa_validate`, not on construction, so that malformed automata
    can still be loaded and reported.
    """

    calls: frozenset = frozenset()
    returns: frozenset = frozenset()
    internals: frozenset = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "empty_stack", True)
        for name in ("calls", "returns", "internals"):
            object.__setattr__(self, name, _fs(getattr(self, name)))
        super().__post_init__()
        parts = (self.calls, self.returns, self.internals)
        if any(x & y for x, y in itertools.combinations(parts, 2)):
            raise InputError("call/return/internal letters must be disjoint")
        if self.calls | self.returns | self.internals != self.alphabet:
            raise InputError("call/return/internal letters must cover the alphabet")

    def letter_class(self, a) -> str:
        if a in self.calls:
            return "call"
        if a in self.returns:
            return "return"
        return "internal"


def _with(pda: Pda, **changes) -> Pda:
    """Rebuild ``pda`` (a Pda or Vpa) with some fields replaced."""
    fields = dict(states=pda.states, alphabet=pda.alphabet, stack_alphabet=pda.stack_alphabet,
                  transitions=pda.transitions, initial=pda.initial, accepting=pda.accepting)
    fields.update(changes)
    if isinstance(pda, Vpa):
        return Vpa(calls=pda.calls, returns=pda.returns, internals=pda.internals, **fields)
    return Pda(empty_stack=pda.empty_stack, **fields)


def relabel(pda: Pda) -> Pda:
    """Rename states to 0..n-1 (in a deterministic order), e.g. before
    writing out the compound states built by products and unions."""
    order = sorted(pda.states, key=lambda q: (state_key(q), repr(q)))
    name = {q: i for i, q in enumerate(order)}
    trans = [PdaTransition(name[t.source], t.letter, t.pop, t.push, name[t.target])
             for t in pda.transitions]
    return _with(pda, states=range(len(order)), transitions=trans,
                 initial=name[pda.initial], accepting={name[q] for q in pda.accepting})


def vpa_validate(vpa: Vpa) -> bool:
    """Check the visibly pushdown shape rules.

    On a stack symbol: calls leave two symbols, returns none, internals one.
    On the bottom marker the marker itself is retained implicitly, so calls
    push one symbol, internals push nothing, and returns are forbidden.
    """
    for t in vpa.transitions:
        cls = vpa.letter_class(t.letter)
        n = len(t.push)
        if t.pop is BOTTOM:
            ok = (cls == "call" and n == 1) or (cls == "internal" and n == 0)
        else:
            ok = ((cls == "call" and n == 2) or (cls == "return" and n == 0)
                  or (cls == "internal" and n == 1))
        if not ok:
            return False
    return True


def _accepting_prefixes(pda: Pda, w) -> list[bool]:
    """For each prefix length i of ``w``, whether ``w[:i]`` is accepted.

    Configuration-set simulation; each transition consumes a letter, so the
    reachable configuration set after i letters is finite.
    """
    n = len(w)
    configs = {(pda.initial, ())}
    out = []

    def accepting(cs):
        return any(q in pda.accepting and (not pda.empty_stack or not st) for q, st in cs)

    out.append(accepting(configs))
    for i, a in enumerate(w):
        remaining = n - i - 1
        nxt = set()
        for q, stack in configs:
            top = stack[-1] if stack else BOTTOM
            base = stack[:-1] if stack else ()
            for t in pda.moves(q, a, top):
                ns = base + t.push
                # under empty-stack acceptance each later letter pops at most one symbol
                if pda.empty_stack and len(ns) > remaining:
                    continue
                nxt.add((t.target, ns))
        configs = nxt
        out.append(accepting(configs))
    return out


def pda_accepts(pda: Pda, w) -> bool:
    w = as_word(w)
    _check_letters(pda.alphabet, w)
    return _pda_accepts_word(pda, w)


def _pda_accepts_word(pda: Pda, w) -> bool:
    configs = {(pda.initial, ())}
    n = len(w)
    for i, a in enumerate(w):
        remaining = n - i - 1
        nxt = set()
        for q, stack in configs:
            top = stack[-1] if stack else BOTTOM
            base = stack[:-1] if stack else ()
            for t in pda.moves(q, a, top):
                ns = base + t.push
                if pda.empty_stack and len(ns) > remaining:
                    continue
                nxt.add((t.target, ns))
        if not nxt:
            return False
        configs = nxt
    return any(q in pda.accepting and (not pda.empty_stack or not st) for q, st in configs)


def empty_pda(alphabet, empty_stack: bool = False) -> Pda:
    return Pda({0}, alphabet, (), (), 0, (), empty_stack=empty_stack)


def _fresh(states, base):
    s = base
    i = 0
    while s in states:
        i += 1
        s = (base, i)
    return s


def _derivative_component(pda: Pda, t: PdaTransition) -> Pda:
    """The automaton that behaves like ``pda`` after taking ``t`` as its first move.

    A fresh start state copies the moves available right after ``t``: the
    bottom-marker moves of t's target if t left the stack empty, otherwise
    the moves on the symbol t left on top, with the rest of t's push string
    kept underneath. The fresh state accepts iff t's target state would,
    so the empty word is handled when ``a`` itself is in the language.
    """
    start = _fresh(pda.states, "d0")
    new = set(pda.transitions)
    if not t.push:
        for u in pda.transitions:
            if u.source == t.target and u.pop is BOTTOM:
                new.add(PdaTransition(start, u.letter, BOTTOM, u.push, u.target))
    else:
        below, top = t.push[:-1], t.push[-1]
        for u in pda.transitions:
            if u.source == t.target and u.pop == top:
                new.add(PdaTransition(start, u.letter, BOTTOM, below + u.push, u.target))
    accepting = set(pda.accepting)
    if t.target in pda.accepting and (not pda.empty_stack or not t.push):
        accepting.add(start)
    return Pda(pda.states | {start}, pda.alphabet, pda.stack_alphabet, new, start,
               accepting, empty_stack=pda.empty_stack)


def union(p1: Pda, p2: Pda) -> Pda:
    """Disjoint union with a fresh start state that copies both start states' first moves."""
    if isinstance(p1, Nfa):
        p1 = p1.to_pda()
    if isinstance(p2, Nfa):
        p2 = p2.to_pda()
    if p1.alphabet != p2.alphabet:
        raise InputError("union needs automata over the same alphabet")
    if p1.empty_stack != p2.empty_stack:
        raise InputError("union needs automata with the same acceptance mode")
    start = ("u", 0)
    trans = set()
    for tag, p in ((1, p1), (2, p2)):
        for t in p.transitions:
            trans.add(PdaTransition((tag, t.source), t.letter, t.pop, t.push, (tag, t.target)))
            if t.source == p.initial and t.pop is BOTTOM:
                trans.add(PdaTransition(start, t.letter, BOTTOM, t.push, (tag, t.target)))
    states = {start} | {(1, q) for q in p1.states} | {(2, q) for q in p2.states}
    accepting = {(1, q) for q in p1.accepting} | {(2, q) for q in p2.accepting}
    if p1.initial in p1.accepting or p2.initial in p2.accepting:
        accepting.add(start)
    return Pda(states, p1.alphabet, p1.stack_alphabet | p2.stack_alphabet, trans, start,
               accepting, empty_stack=p1.empty_stack)


def derivative(pda: Pda, a) -> Pda:
    """A pushdown automaton for { w | a w in L(pda) }.

    Built as the union over every first move on ``a`` from the start state
    (necessarily on the bottom marker) of the automaton simulating that move.
    """
    if isinstance(pda, Nfa):
        pda = pda.to_pda()
    if a not in pda.alphabet:
        raise InputError(f"letter {a!r} is not in the alphabet")
    firsts = sorted(pda.moves(pda.initial, a, BOTTOM), key=repr)
    if not firsts:
        return empty_pda(pda.alphabet, pda.empty_stack)
    out = _derivative_component(pda, firsts[0])
    for t in firsts[1:]:
        out = union(out, _derivative_component(pda, t))
    return out


def intersect_regular(pda: Pda, nfa: Nfa) -> Pda:
    """Product of a pushdown automaton with a finite automaton.

    A VPA input yields a VPA over the same partition.
    """
    if isinstance(pda, Nfa):
        pda = pda.to_pda()
    if pda.alphabet != nfa.alphabet:
        raise InputError("intersection needs automata over the same alphabet")
    trans = []
    for t in pda.transitions:
        for q, a, r in nfa.transitions:
            if a == t.letter:
                trans.append(PdaTransition((t.source, q), a, t.pop, t.push, (t.target, r)))
    states = set(itertools.product(pda.states, nfa.states))
    accepting = set(itertools.product(pda.accepting, nfa.accepting))
    return _with(pda, states=states, transitions=trans,
                 initial=(pda.initial, nfa.initial), accepting=accepting)


# ---------------------------------------------------------------------------
# grammar conversion and emptiness

class Grammar:
    """A context-free grammar as a production list. Nonterminals are tuples,
    terminals are anything else."""

    def __init__(self, start):
        self.start = start
        self.productions: list[tuple[tuple, tuple]] = []

    def add(self, lhs, *rhs):
        self.productions.append((lhs, rhs))

    def productive(self) -> set:
        by_symbol = defaultdict(list)
        missing = []
        productive = set()
        queue = deque()
        for i, (lhs, rhs) in enumerate(self.productions):
            nts = [x for x in rhs if isinstance(x, tuple)]
            missing.append(len(nts))
            for x in nts:
                by_symbol[x].append(i)
            if not nts and lhs not in productive:
                productive.add(lhs)
                queue.append(lhs)
        while queue:
            x = queue.popleft()
            for i in by_symbol[x]:
                missing[i] -= 1
                if missing[i] == 0:
                    lhs = self.productions[i][0]
                    if lhs not in productive:
                        productive.add(lhs)
                        queue.append(lhs)
        return productive

    def reachable(self) -> set:
        by_lhs = defaultdict(list)
        for lhs, rhs in self.productions:
            by_lhs[lhs].append(rhs)
        seen = {self.start}
        queue = deque([self.start])
        while queue:
            x = queue.popleft()
            for rhs in by_lhs[x]:
                for y in rhs:
                    if isinstance(y, tuple) and y not in seen:
                        seen.add(y)
                        queue.append(y)
        return seen


def pda_to_grammar(pda: Pda) -> Grammar:
    """Triple construction adapted to bottom-marker moves and final-state acceptance.

    Nonterminals:
      ("pop", p, X, q)   from p with X on top, reach q having just removed X
      ("seq", p, b, q)   pop the symbols of b top-first, from p to q (|b| >= 2)
      ("open", p, X)     from p with X on top, reach a final state without removing X
      ("oseq", p, b)     pop some top symbols of b, then finish "open" on the next one
      ("acc", p)         from p with an empty stack, reach acceptance
    """
    Q = sorted(pda.states, key=repr)
    g = Grammar(("acc", pda.initial))

    def pops(p, beta, q):
        if len(beta) == 1:
            return ("pop", p, beta[0], q)
        return ("seq", p, beta, q)

    seqs, oseqs = set(), set()

    def need_seq(beta):
        while len(beta) >= 2 and beta not in seqs:
            seqs.add(beta)
            beta = beta[:-1]

    def need_oseq(beta):
        while beta and beta not in oseqs:
            oseqs.add(beta)
            beta = beta[:-1]

    for t in pda.transitions:
        if t.pop is BOTTOM:
            continue
        for q in Q:
            if not t.push:
                if t.target == q:
                    g.add(("pop", t.source, t.pop, q), t.letter)
            else:
                g.add(("pop", t.source, t.pop, q), t.letter, pops(t.target, t.push, q))
        need_seq(t.push)
        if t.push:
            g.add(("open", t.source, t.pop), t.letter, ("oseq", t.target, t.push))
            need_oseq(t.push)
    for p in pda.accepting:
        for X in pda.stack_alphabet:
            g.add(("open", p, X))
        g.add(("acc", p))
    for t in pda.transitions:
        if t.pop is not BOTTOM:
            continue
        if not t.push:
            g.add(("acc", t.source), t.letter, ("acc", t.target))
            continue
        need_seq(t.push)
        for r in Q:
            g.add(("acc", t.source), t.letter, pops(t.target, t.push, r), ("acc", r))
        if not pda.empty_stack:
            g.add(("acc", t.source), t.letter, ("oseq", t.target, t.push))
            need_oseq(t.push)
    for beta in seqs:
        for p in Q:
            for r in Q:
                for q in Q:
                    g.add(("seq", p, beta, q), ("pop", p, beta[-1], r), pops(r, beta[:-1], q))
    for beta in oseqs:
        for p in Q:
            g.add(("oseq", p, beta), ("open", p, beta[-1]))
            if len(beta) >= 2:
                for r in Q:
                    g.add(("oseq", p, beta), ("pop", p, beta[-1], r), ("oseq", r, beta[:-1]))
    return g


def pda_empty(pda: Pda) -> bool:
    """True iff L(pda) is empty, via productivity of the start nonterminal."""
    if isinstance(pda, Nfa):
        pda = pda.to_pda()
    if not pda.accepting:
        return True
    g = pda_to_grammar(pda)
    return g.start not in g.productive()


# ---------------------------------------------------------------------------
# unary slices

def lasso_nfa(letter, threshold: int, period: int, members) -> Nfa:
    """Automaton over {letter} for the ultimately periodic set described by
    membership flags on 0 .. threshold+period-1."""
    n = threshold + period
    edges = [(i, letter, i + 1) for i in range(n - 1)] + [(n - 1, letter, threshold)]
    return Nfa(range(n), {letter}, edges, 0, {i for i in range(n) if members[i]})


def unary_slice(pda: Pda, a, bound: int = 16) -> Nfa:
    """Regular automaton for { a^n | a^n in L(pda) } over the one-letter alphabet {a}.

    Membership of a^0 .. a^(3*bound) is computed directly; the smallest
    threshold/period pair (t, c) with t + c <= bound that is consistent on the
    whole window is turned into a lasso automaton. As an exact one-sided
    check, L(pda) restricted to a* is intersected with the lasso's complement
    and must be empty.
    """
    if isinstance(pda, Nfa):
        pda = pda.to_pda()
    if a not in pda.alphabet:
        raise InputError(f"letter {a!r} is not in the alphabet")
    if bound < 1:
        raise InputError("bound must be at least 1")
    window = 3 * bound
    sliced = intersect_regular(pda, nfa_universal(pda.alphabet, [a]))
    member = _accepting_prefixes(sliced, (a,) * window)

    for total in range(1, bound + 1):
        for c in range(1, total + 1):
            t = total - c
            if all(member[n] == member[n + c] for n in range(t, window + 1 - c)):
                lasso = lasso_nfa(a, t, c, member)
                if not _outside_lasso_empty(sliced, lasso, a):
                    continue
                return lasso
    raise BoundTooSmall(f"no threshold/period pair with t + c <= {bound} fits the window")


def _outside_lasso_empty(sliced: Pda, lasso: Nfa, a) -> bool:
    # complement of the lasso over the full alphabet: a-only words it rejects
    n = len(lasso.states)
    sink = "sink"
    edges = [(q, x, r) for q, x, r in lasso.transitions]
    for q in range(n):
        for x in sliced.alphabet:
            if x != a:
                edges.append((q, x, sink))
    edges += [(sink, x, sink) for x in sliced.alphabet]
    comp = Nfa(set(range(n)) | {sink}, sliced.alphabet, edges, 0,
               set(range(n)) - lasso.accepting)
    return pda_empty(intersect_regular(sliced, comp))


# ---------------------------------------------------------------------------
# language references

LANGUAGE_CLASSES = ("REG", "VPL", "CFL")


@dataclass(frozen=True)
class LanguageRef:
    """A named language used inside PDL modalities."""

    name: str
    cls: str
    acceptor: object = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if self.cls not in LANGUAGE_CLASSES:
            raise InputError(f"unknown language class {self.cls!r}")
        acc = self.acceptor
        if acc is None:
            return
        ok = {"REG": isinstance(acc, Nfa),
              "VPL": isinstance(acc, Vpa),
              "CFL": isinstance(acc, Pda)}[self.cls]
        if not ok:
            raise InputError(f"language {self.name!r}: acceptor does not match class {self.cls}")

    @property
    def alphabet(self) -> frozenset:
        if self.acceptor is None:
            raise InputError(f"language {self.name!r} is unresolved")
        return self.acceptor.alphabet

    def accepts(self, w) -> bool:
        if self.acceptor is None:
            raise InputError(f"language {self.name!r} is unresolved")
        if isinstance(self.acceptor, Nfa):
            return nfa_accepts(self.acceptor, w)
        return pda_accepts(self.acceptor, w)

    def as_pda(self) -> Pda:
        if isinstance(self.acceptor, Nfa):
            return self.acceptor.to_pda()
        return self.acceptor


def language(name: str, acceptor) -> LanguageRef:
    """Wrap an acceptor, inferring the class tag from its kind."""
    if isinstance(acceptor, Nfa):
        cls = "REG"
    elif isinstance(acceptor, Vpa):
        cls = "VPL"
    elif isinstance(acceptor, Pda):
        cls = "CFL"
    else:
        raise InputError(f"not an acceptor: {acceptor!r}")
    return LanguageRef(name, cls, acceptor)
