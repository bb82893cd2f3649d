"""PDL over language classes: syntax, modal depth, model checking on finite
LTS, and bounded formula enumeration."""

from __future__ import annotations

from collections import defaultdict, deque
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .automata import BOTTOM, LanguageRef, Nfa, Pda
from .errors import InputError
from .lts import Lts

TRUE_PROP = "_t"


class Formula:
    __slots__ = ()

    def __str__(self):
        return to_text(self)


@dataclass(frozen=True, repr=False)
class Prop(Formula):
    name: str

    def __repr__(self):
        return f"Prop({self.name!r})"


@dataclass(frozen=True, repr=False)
class Not(Formula):
    arg: Formula

    def __repr__(self):
        return f"Not({self.arg!r})"


@dataclass(frozen=True, repr=False)
class Or(Formula):
    left: Formula
    right: Formula

    def __repr__(self):
        return f"Or({self.left!r}, {self.right!r})"


@dataclass(frozen=True, repr=False)
class And(Formula):
    left: Formula
    right: Formula

    def __repr__(self):
        return f"And({self.left!r}, {self.right!r})"


@dataclass(frozen=True, repr=False)
class Diamond(Formula):
    lang: LanguageRef
    arg: Formula

    def __repr__(self):
        return f"Diamond({self.lang.name!r}, {self.arg!r})"


@dataclass(frozen=True, repr=False)
class Box(Formula):
    lang: LanguageRef
    arg: Formula

    def __repr__(self):
        return f"Box({self.lang.name!r}, {self.arg!r})"


def tt(p: str = TRUE_PROP) -> Formula:
    return Or(Prop(p), Not(Prop(p)))


def ff(p: str = TRUE_PROP) -> Formula:
    return And(Prop(p), Not(Prop(p)))


def to_text(f: Formula) -> str:
    if isinstance(f, Prop):
        return f.name
    if isinstance(f, Not):
        return "~" + to_text(f.arg)
    if isinstance(f, Or):
        return f"({to_text(f.left)} | {to_text(f.right)})"
    if isinstance(f, And):
        return f"({to_text(f.left)} & {to_text(f.right)})"
    if isinstance(f, Diamond):
        return f"<{f.lang.name}>{to_text(f.arg)}"
    if isinstance(f, Box):
        return f"[{f.lang.name}]{to_text(f.arg)}"
    raise TypeError(f"not a PDL formula: {f!r}")


def modal_depth(f: Formula) -> int:
    """Nesting depth of modalities, with negation also adding one."""
    if isinstance(f, Prop):
        return 0
    if isinstance(f, (Not, Diamond, Box)):
        return 1 + modal_depth(f.arg)
    if isinstance(f, (Or, And)):
        return max(modal_depth(f.left), modal_depth(f.right))
    raise TypeError(f"not a PDL formula: {f!r}")


def modal_only_depth(f: Formula) -> int:
    """Nesting depth of modalities alone; negation is free."""
    if isinstance(f, Prop):
        return 0
    if isinstance(f, Not):
        return modal_only_depth(f.arg)
    if isinstance(f, (Diamond, Box)):
        return 1 + modal_only_depth(f.arg)
    if isinstance(f, (Or, And)):
        return max(modal_only_depth(f.left), modal_only_depth(f.right))
    raise TypeError(f"not a PDL formula: {f!r}")


DEPTH_MEASURES = {"counted": modal_depth, "modal": modal_only_depth}


def size(f: Formula) -> int:
    if isinstance(f, Prop):
        return 1
    if isinstance(f, (Not, Diamond, Box)):
        return 1 + size(f.arg)
    return 1 + size(f.left) + size(f.right)


def languages_of(f: Formula) -> set[LanguageRef]:
    if isinstance(f, Prop):
        return set()
    if isinstance(f, Not):
        return languages_of(f.arg)
    if isinstance(f, (Diamond, Box)):
        return {f.lang} | languages_of(f.arg)
    return languages_of(f.left) | languages_of(f.right)


# ---------------------------------------------------------------------------
# reachability

def _check_alphabet(lts: Lts, lang: LanguageRef):
    if lang.acceptor is None:
        raise InputError(f"language {lang.name!r} is unresolved")
    if not lang.alphabet <= lts.alphabet:
        raise InputError(f"language {lang.name!r} uses letters outside the LTS alphabet")


def _regular_reach(lts: Lts, nfa: Nfa) -> frozenset:
    out = set()
    for s in lts.states:
        start = (s, nfa.initial)
        seen = {start}
        queue = deque([start])
        while queue:
            t, q = queue.popleft()
            if q in nfa.accepting:
                out.add((s, t))
            for a in nfa.alphabet:
                for t2 in lts.successors(t, a):
                    for q2 in nfa.successors(q, a):
                        if (t2, q2) not in seen:
                            seen.add((t2, q2))
                            queue.append((t2, q2))
    return frozenset(out)


def _pushdown_reach(lts: Lts, pda: Pda) -> frozenset:
    """Saturation over the product of the pushdown automaton with the LTS.

    Three least fixpoints over product states P = (q, s):
      summ[P, X]    states reached right after the X on top is removed
      opened[P, X]  states reached while that X (or its replacement) stays
      top[P]        states reached from P with an empty stack, any final
                    stack (only an empty final stack under empty-stack acceptance)
    """
    moves = []  # (P, pop, push, P')
    for t in pda.transitions:
        for s in lts.states:
            for s2 in lts.successors(s, t.letter):
                moves.append(((t.source, s), t.pop, t.push, (t.target, s2)))
    stack_moves = [m for m in moves if m[1] is not BOTTOM]
    bottom_moves = [m for m in moves if m[1] is BOTTOM]

    summ = defaultdict(set)

    def pop_all(starts, beta):
        cur = set(starts)
        for Y in reversed(beta):
            nxt = set()
            for r in cur:
                nxt |= summ[r, Y]
            cur = nxt
            if not cur:
                break
        return cur

    changed = True
    while changed:
        changed = False
        for P, X, beta, P2 in stack_moves:
            new = pop_all({P2}, beta) - summ[P, X]
            if new:
                summ[P, X] |= new
                changed = True

    def partial_targets(P2, beta, reach):
        """Pop the top symbols of beta, then continue with ``reach`` on the next one."""
        out = set()
        cur = {P2}
        for j in range(len(beta) - 1, -1, -1):
            for r in cur:
                out |= reach(r, beta[j])
            nxt = set()
            for r in cur:
                nxt |= summ[r, beta[j]]
            cur = nxt
            if not cur:
                break
        return out

    opened = defaultdict(set)
    if not pda.empty_stack:
        for P, X, beta, P2 in stack_moves:
            opened[P, X].add(P)
        changed = True
        while changed:
            changed = False
            for P, X, beta, P2 in stack_moves:
                if not beta:
                    continue
                new = partial_targets(P2, beta, lambda r, Y: opened[r, Y] | {r}) - opened[P, X]
                if new:
                    opened[P, X] |= new
                    changed = True

    top = defaultdict(set)
    products = {(q, s) for q in pda.states for s in lts.states}
    for P in products:
        top[P].add(P)
    changed = True
    while changed:
        changed = False
        for P, _, beta, P2 in bottom_moves:
            new = set()
            for r in pop_all({P2}, beta):
                new |= top[r]
            if beta and not pda.empty_stack:
                new |= partial_targets(P2, beta, lambda r, Y: opened[r, Y] | {r})
            new -= top[P]
            if new:
                top[P] |= new
                changed = True

    out = set()
    for s in lts.states:
        for q, t in top[pda.initial, s]:
            if q in pda.accepting:
                out.add((s, t))
    return frozenset(out)


def reach_relation(lts: Lts, lang: LanguageRef) -> frozenset:
    """All (s, t) such that some word of the language labels a path from s to t."""
    _check_alphabet(lts, lang)
    acc = lang.acceptor
    if isinstance(acc, Nfa):
        return _regular_reach(lts, acc)
    return _pushdown_reach(lts, acc)


# ---------------------------------------------------------------------------
# model checking

class PdlChecker:
    """Evaluates PDL formulas on one LTS, caching reach relations per language
    and results per subformula. Not meant to be shared across threads."""

    def __init__(self, lts: Lts):
        self.lts = lts
        self._reach: dict[str, dict] = {}
        self._memo: dict[Formula, frozenset] = {}

    def reach(self, lang: LanguageRef) -> dict:
        """Successor map s -> {t | s -L-> t}."""
        key = (lang.name, lang.cls)
        if key not in self._reach:
            rel = reach_relation(self.lts, lang)
            succ = defaultdict(set)
            for s, t in rel:
                succ[s].add(t)
            self._reach[key] = {s: frozenset(v) for s, v in succ.items()}
        return self._reach[key]

    def eval(self, f: Formula) -> frozenset:
        hit = self._memo.get(f)
        if hit is not None:
            return hit
        lts = self.lts
        if isinstance(f, Prop):
            out = lts.sat(f.name)
        elif isinstance(f, Not):
            out = lts.states - self.eval(f.arg)
        elif isinstance(f, Or):
            out = self.eval(f.left) | self.eval(f.right)
        elif isinstance(f, And):
            # set intersection, not the union printed in the source table
            out = self.eval(f.left) & self.eval(f.right)
        elif isinstance(f, Diamond):
            inner = self.eval(f.arg)
            succ = self.reach(f.lang)
            out = frozenset(s for s in lts.states if succ.get(s, frozenset()) & inner)
        elif isinstance(f, Box):
            inner = self.eval(f.arg)
            succ = self.reach(f.lang)
            out = frozenset(s for s in lts.states if succ.get(s, frozenset()) <= inner)
        else:
            raise TypeError(f"not a PDL formula: {f!r}")
        out = frozenset(out)
        self._memo[f] = out
        return out


def eval_pdl(lts: Lts, f: Formula) -> frozenset:
    return PdlChecker(lts).eval(f)


# ---------------------------------------------------------------------------
# enumeration

def enumerate_formulas(langs: Sequence[LanguageRef], props: Iterable[str], depth: int,
                       size_cap: int, measure: str = "counted") -> Iterator[Formula]:
    """All formulas of depth <= ``depth`` and at most ``size_cap`` nodes.

    Duplicates up to commutativity of & and | are skipped by requiring the
    left operand to precede the right one in (size, text) order, and double
    negations are never built. Output order is by size, then by
    construction, and is deterministic.
    """
    if size_cap < 1:
        raise InputError("size_cap must be at least 1")
    measure_fn = DEPTH_MEASURES[measure]
    props = sorted(set(props))
    langs = sorted(langs, key=lambda L: L.name)
    buckets: dict[int, list[tuple[Formula, str]]] = {}

    def admit(f):
        return measure_fn(f) <= depth

    for n in range(1, size_cap + 1):
        level = []
        if n == 1:
            level = [Prop(p) for p in props]
        else:
            for g, _ in buckets[n - 1]:
                if not isinstance(g, Not):
                    level.append(Not(g))
                for L in langs:
                    level.append(Diamond(L, g))
                    level.append(Box(L, g))
            for s1 in range(1, n - 1):
                s2 = n - 1 - s1
                if s1 > s2:
                    break
                for g1, k1 in buckets[s1]:
                    for g2, k2 in buckets[s2]:
                        if s1 == s2 and k1 > k2:
                            continue
                        level.append(And(g1, g2))
                        level.append(Or(g1, g2))
        kept = [(f, to_text(f)) for f in level if admit(f)]
        buckets[n] = kept
        for f, _ in kept:
            yield f
