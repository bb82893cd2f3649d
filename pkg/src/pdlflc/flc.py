"""Fixpoint Logic with Chop: syntax, predicate-transformer semantics on finite
LTS, and the syntactic recognizer for the visibly pushdown fragment.

Two evaluation routes share the same semantics:

* tabulated: every formula denotes a full table over all 2^|S| subsets and
  fixpoints are computed by Kleene iteration on tables. Exact but exponential,
  so it is capped (default 14 states, override with PDLFLC_STATE_CAP).
* demand-driven: a fixpoint is solved only on the argument sets that actually
  get queried, starting from the query. This is what makes the witness
  families with 30+ states tractable.

State sets are bitmasks over ``lts.ordered_states`` internally.
"""

from __future__ import annotations

import os
import random
from dataclasses import dataclass
from typing import Iterable, Mapping

from .errors import InputError, ResourceError
from .lts import Lts

DEFAULT_STATE_CAP = 14
TRUE_PROP = "_t"


def state_cap() -> int:
    raw = os.environ.get("PDLFLC_STATE_CAP")
    if raw is None:
        return DEFAULT_STATE_CAP
    try:
        return int(raw)
    except ValueError:
        raise InputError(f"PDLFLC_STATE_CAP must be an integer, got {raw!r}") from None


# ---------------------------------------------------------------------------
# syntax

class Formula:
    __slots__ = ()

    def __str__(self):
        return to_text(self)


@dataclass(frozen=True)
class Prop(Formula):
    name: str


@dataclass(frozen=True)
class NegProp(Formula):
    name: str


@dataclass(frozen=True)
class Var(Formula):
    name: str


@dataclass(frozen=True)
class Tau(Formula):
    pass


@dataclass(frozen=True)
class Diamond(Formula):
    letter: str


@dataclass(frozen=True)
class Box(Formula):
    letter: str


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Mu(Formula):
    var: str
    body: Formula


@dataclass(frozen=True)
class Nu(Formula):
    var: str
    body: Formula


@dataclass(frozen=True)
class Chop(Formula):
    left: Formula
    right: Formula


def tt(p: str = TRUE_PROP) -> Formula:
    return Or(Prop(p), NegProp(p))


def ff(p: str = TRUE_PROP) -> Formula:
    return And(Prop(p), NegProp(p))


def chop(*parts: Formula) -> Formula:
    """Right-associated sequential composition of the parts."""
    if not parts:
        raise InputError("chop needs at least one part")
    out = parts[-1]
    for f in reversed(parts[:-1]):
        out = Chop(f, out)
    return out


def flatten(f: Formula) -> list[Formula]:
    """The maximal chop chain of ``f`` as a list, regardless of nesting."""
    if isinstance(f, Chop):
        return flatten(f.left) + flatten(f.right)
    return [f]


def to_text(f: Formula) -> str:
    if isinstance(f, Prop):
        return f.name
    if isinstance(f, NegProp):
        return "!" + f.name
    if isinstance(f, Var):
        return f.name
    if isinstance(f, Tau):
        return "tau"
    if isinstance(f, Diamond):
        return f"<{f.letter}>"
    if isinstance(f, Box):
        return f"[{f.letter}]"
    if isinstance(f, Or):
        return f"({to_text(f.left)} | {to_text(f.right)})"
    if isinstance(f, And):
        return f"({to_text(f.left)} & {to_text(f.right)})"
    if isinstance(f, (Mu, Nu)):
        kw = "mu" if isinstance(f, Mu) else "nu"
        body = to_text(f.body)
        if isinstance(f.body, Chop):
            body = f"({body})"
        return f"{kw} {f.var} . {body}"
    if isinstance(f, Chop):
        left = to_text(f.left)
        if isinstance(f.left, (Chop, Mu, Nu)):
            left = f"({left})"
        return f"{left} ; {to_text(f.right)}"
    raise TypeError(f"not an FLC formula: {f!r}")


def free_vars(f: Formula) -> frozenset:
    if isinstance(f, Var):
        return frozenset([f.name])
    if isinstance(f, (Mu, Nu)):
        return free_vars(f.body) - {f.var}
    if isinstance(f, (Or, And, Chop)):
        return free_vars(f.left) | free_vars(f.right)
    return frozenset()


def letters_of(f: Formula) -> frozenset:
    if isinstance(f, (Diamond, Box)):
        return frozenset([f.letter])
    if isinstance(f, (Mu, Nu)):
        return letters_of(f.body)
    if isinstance(f, (Or, And, Chop)):
        return letters_of(f.left) | letters_of(f.right)
    return frozenset()


def _check_letters(lts: Lts, f: Formula):
    extra = letters_of(f) - lts.alphabet
    if extra:
        raise InputError(f"letters {sorted(extra)} are not in the LTS alphabet")


# ---------------------------------------------------------------------------
# state sets as bitmasks

class _Universe:
    def __init__(self, lts: Lts):
        self.lts = lts
        self.order = lts.ordered_states
        self.n = len(self.order)
        self.index = {s: i for i, s in enumerate(self.order)}
        self.full = (1 << self.n) - 1
        self.pre = {}   # letter -> per-target mask of a-predecessors
        self.post = {}  # letter -> per-source mask of a-successors
        for a in lts.alphabet:
            pre = [0] * self.n
            post = [0] * self.n
            for s, b, t in lts.transitions:
                if b == a:
                    pre[self.index[t]] |= 1 << self.index[s]
                    post[self.index[s]] |= 1 << self.index[t]
            self.pre[a] = pre
            self.post[a] = post

    def mask(self, states: Iterable) -> int:
        m = 0
        for s in states:
            if s not in self.index:
                raise InputError(f"unknown state {s!r}")
            m |= 1 << self.index[s]
        return m

    def states(self, mask: int) -> frozenset:
        return frozenset(s for i, s in enumerate(self.order) if mask >> i & 1)

    def prop(self, name: str) -> int:
        return self.mask(self.lts.sat(name))

    def diamond(self, a, T: int) -> int:
        pre = self.pre[a]
        out = 0
        i = 0
        while T:
            if T & 1:
                out |= pre[i]
            T >>= 1
            i += 1
        return out

    def box(self, a, T: int) -> int:
        post = self.post[a]
        out = 0
        for i in range(self.n):
            if post[i] & ~T == 0:
                out |= 1 << i
        return out


# ---------------------------------------------------------------------------
# tabulated semantics

class PredicateTransformer:
    """A function from state sets to state sets, stored as a full table."""

    __slots__ = ("universe", "table")

    def __init__(self, universe: tuple, table):
        self.universe = tuple(universe)
        self.table = tuple(table)
        if len(self.table) != 1 << len(self.universe):
            raise InputError("table size does not match the state universe")

    def _mask(self, states) -> int:
        index = {s: i for i, s in enumerate(self.universe)}
        m = 0
        for s in states:
            if s not in index:
                raise InputError(f"unknown state {s!r}")
            m |= 1 << index[s]
        return m

    def _states(self, mask) -> frozenset:
        return frozenset(s for i, s in enumerate(self.universe) if mask >> i & 1)

    def __call__(self, states) -> frozenset:
        return self._states(self.table[self._mask(states)])

    def apply_mask(self, mask: int) -> int:
        return self.table[mask]

    def __eq__(self, other):
        if not isinstance(other, PredicateTransformer):
            return NotImplemented
        return self.universe == other.universe and self.table == other.table

    def __hash__(self):
        return hash((self.universe, self.table))

    def __repr__(self):
        return f"PredicateTransformer({len(self.universe)} states)"

    def leq(self, other: "PredicateTransformer") -> bool:
        """Pointwise inclusion."""
        if self.universe != other.universe:
            raise InputError("transformers over different state universes")
        return all(x & ~y == 0 for x, y in zip(self.table, other.table))

    def monotonicity_violation(self, samples: int = 200, seed: int = 0):
        """Sample pairs T <= T' and return the first (T, T') with
        f(T) not included in f(T'), or None."""
        rng = random.Random(seed)
        full = len(self.table) - 1
        for _ in range(samples):
            big = rng.randint(0, full)
            small = big & rng.randint(0, full)
            if self.table[small] & ~self.table[big]:
                return self._states(small), self._states(big)
        return None

    def is_monotone(self, samples: int = 200, seed: int = 0) -> bool:
        return self.monotonicity_violation(samples, seed) is None


def _const(u: _Universe, m: int) -> list:
    return [m] * (1 << u.n)


def _tab(u: _Universe, f: Formula, env: dict, stats: dict) -> list:
    size = 1 << u.n
    if isinstance(f, Prop):
        return _const(u, u.prop(f.name))
    if isinstance(f, NegProp):
        return _const(u, u.full & ~u.prop(f.name))
    if isinstance(f, Var):
        if f.name not in env:
            raise InputError(f"unbound variable {f.name!r}")
        return env[f.name]
    if isinstance(f, Tau):
        return list(range(size))
    if isinstance(f, Diamond):
        pre = u.pre[f.letter]
        table = [0] * size
        for T in range(1, size):
            low = T & -T
            table[T] = table[T ^ low] | pre[low.bit_length() - 1]
        return table
    if isinstance(f, Box):
        dia = _tab(u, Diamond(f.letter), env, stats)
        return [u.full & ~dia[u.full & ~T] for T in range(size)]
    if isinstance(f, Or):
        l, r = _tab(u, f.left, env, stats), _tab(u, f.right, env, stats)
        return [x | y for x, y in zip(l, r)]
    if isinstance(f, And):
        l, r = _tab(u, f.left, env, stats), _tab(u, f.right, env, stats)
        return [x & y for x, y in zip(l, r)]
    if isinstance(f, Chop):
        l, r = _tab(u, f.left, env, stats), _tab(u, f.right, env, stats)
        return [l[x] for x in r]
    if isinstance(f, (Mu, Nu)):
        current = _const(u, 0 if isinstance(f, Mu) else u.full)
        limit = u.n * size + 1
        rounds = 0
        while True:
            rounds += 1
            if rounds > limit:
                raise AssertionError("fixpoint iteration exceeded the lattice height")
            nxt = _tab(u, f.body, {**env, f.var: current}, stats)
            if nxt == current:
                break
            current = nxt
        stats["max_rounds"] = max(stats.get("max_rounds", 0), rounds)
        return current
    raise TypeError(f"not an FLC formula: {f!r}")


def eval_flc(lts: Lts, f: Formula, env: Mapping[str, PredicateTransformer] | None = None,
             cap: int | None = None, stats: dict | None = None) -> PredicateTransformer:
    """The predicate transformer denoted by ``f`` over all subsets of states."""
    cap = state_cap() if cap is None else cap
    if len(lts.states) > cap:
        raise ResourceError(f"{len(lts.states)} states exceed the tabulation cap of {cap}")
    _check_letters(lts, f)
    u = _Universe(lts)
    tables = {}
    for name, pt in (env or {}).items():
        if pt.universe != u.order:
            raise InputError(f"environment entry {name!r} uses another state universe")
        tables[name] = list(pt.table)
    missing = free_vars(f) - set(tables)
    if missing:
        raise InputError(f"unbound variables {sorted(missing)}")
    table = _tab(u, f, tables, stats if stats is not None else {})
    return PredicateTransformer(u.order, table)


# ---------------------------------------------------------------------------
# demand-driven semantics

class _Solver:
    """Local fixpoint computation for one occurrence of mu/nu under a fixed
    environment. Keys are the argument sets queried so far; unknown keys
    start at bottom (mu) or top (nu) and values only move towards the
    fixpoint, so the loop terminates."""

    def __init__(self, ev: "DemandEvaluator", node, env):
        self.ev = ev
        self.node = node
        self.is_mu = isinstance(node, Mu)
        self.env = env
        self.table = {}
        self.fresh = False

    def lookup(self, T: int) -> int:
        hit = self.table.get(T)
        if hit is None:
            hit = 0 if self.is_mu else self.ev.u.full
            self.table[T] = hit
            self.fresh = True
        return hit

    def solve(self, T: int) -> int:
        self.lookup(T)
        env = {**self.env, self.node.var: self.lookup}
        while True:
            changed = False
            self.fresh = False
            for key in list(self.table):
                old = self.table[key]
                got = self.ev._apply(self.node.body, key, env)
                new = old | got if self.is_mu else old & got
                if new != old:
                    self.table[key] = new
                    changed = True
            self.ev.passes += 1
            if not changed and not self.fresh:
                return self.table[T]


class DemandEvaluator:
    """Evaluates formulas on the argument sets that are actually needed."""

    def __init__(self, lts: Lts):
        self.lts = lts
        self.u = _Universe(lts)
        self.passes = 0

    def _apply(self, f: Formula, T: int, env) -> int:
        u = self.u
        if isinstance(f, Prop):
            return u.prop(f.name)
        if isinstance(f, NegProp):
            return u.full & ~u.prop(f.name)
        if isinstance(f, Var):
            if f.name not in env:
                raise InputError(f"unbound variable {f.name!r}")
            return env[f.name](T)
        if isinstance(f, Tau):
            return T
        if isinstance(f, Diamond):
            return u.diamond(f.letter, T)
        if isinstance(f, Box):
            return u.box(f.letter, T)
        if isinstance(f, Or):
            return self._apply(f.left, T, env) | self._apply(f.right, T, env)
        if isinstance(f, And):
            return self._apply(f.left, T, env) & self._apply(f.right, T, env)
        if isinstance(f, Chop):
            return self._apply(f.left, self._apply(f.right, T, env), env)
        if isinstance(f, (Mu, Nu)):
            return _Solver(self, f, env).solve(T)
        raise TypeError(f"not an FLC formula: {f!r}")

    def apply(self, f: Formula, states: Iterable | None = None) -> frozenset:
        """``[[f]](states)`` for a closed formula; defaults to the full state set."""
        if free_vars(f):
            raise InputError(f"formula has free variables {sorted(free_vars(f))}")
        _check_letters(self.lts, f)
        T = self.u.full if states is None else self.u.mask(states)
        return self.u.states(self._apply(f, T, {}))


# ---------------------------------------------------------------------------
# queries

MODES = ("auto", "tabulated", "demand")


def sat(lts: Lts, f: Formula, mode: str = "auto", cap: int | None = None) -> frozenset:
    """The states defined by a closed formula, i.e. ``[[f]](S)``."""
    if mode not in MODES:
        raise InputError(f"unknown evaluation mode {mode!r}")
    if free_vars(f):
        raise InputError(f"formula has free variables {sorted(free_vars(f))}")
    cap = state_cap() if cap is None else cap
    if mode == "auto":
        mode = "tabulated" if len(lts.states) <= cap else "demand"
    if mode == "tabulated":
        return eval_flc(lts, f, cap=cap)(lts.states)
    return DemandEvaluator(lts).apply(f)


def holds(lts: Lts, s, f: Formula, mode: str = "auto", cap: int | None = None) -> bool:
    lts._check_state(s)
    return s in sat(lts, f, mode, cap)


# ---------------------------------------------------------------------------
# visibly pushdown fragment

def _modality(f):
    return isinstance(f, (Diamond, Box))


def is_vpflc(f: Formula, calls: Iterable = (), returns: Iterable = (),
             internals: Iterable = ()) -> bool:
    """Whether ``f`` belongs to the visibly pushdown fragment for the given
    alphabet partition.

    Chop chains are read as flat sequences (chop is associative). Modalities
    on internal letters guard the rest of a sequence; a call modality must be
    matched by a later return modality, with optional vpFLC formulas between
    them and after the return. Besides the grammar productions, a closed
    fixpoint formula of the fragment may be followed by further composition,
    which is how the separating properties are written.
    """
    calls, returns, internals = frozenset(calls), frozenset(returns), frozenset(internals)
    parts = (calls, returns, internals)
    if any(x & y for i, x in enumerate(parts) for y in parts[i + 1:]):
        raise InputError("call/return/internal letters must be disjoint")
    known = calls | returns | internals
    unknown = letters_of(f) - known
    if unknown:
        raise InputError(f"letters {sorted(unknown)} are not classified")

    def kind(m):
        if m.letter in calls:
            return "call"
        if m.letter in returns:
            return "return"
        return "internal"

    def single(g) -> bool:
        if isinstance(g, (Prop, NegProp, Var)):
            return True
        if isinstance(g, (Or, And)):
            return seq(flatten(g.left)) and seq(flatten(g.right))
        if isinstance(g, (Mu, Nu)):
            return seq(flatten(g.body))
        if _modality(g):
            return kind(g) == "internal"
        return False  # tau

    def seq(items) -> bool:
        if len(items) == 1:
            return single(items[0])
        head, rest = items[0], items[1:]
        if _modality(head):
            k = kind(head)
            if k == "internal":
                return seq(rest)
            if k == "return":
                return False
            for j, g in enumerate(rest):
                if not (_modality(g) and kind(g) == "return"):
                    continue
                mid, tail = rest[:j], rest[j + 1:]
                if (not mid or seq(mid)) and (not tail or seq(tail)):
                    return True
            return False
        if isinstance(head, (Mu, Nu)) and not free_vars(head):
            return single(head) and seq(rest)
        return False

    return seq(flatten(f))


def all_partitions(letters: Iterable) -> list[tuple[frozenset, frozenset, frozenset]]:
    """Every assignment of the letters to (calls, returns, internals)."""
    letters = sorted(set(letters), key=str)
    out = []
    for code in range(3 ** len(letters)):
        parts = ([], [], [])
        for a in letters:
            parts[code % 3].append(a)
            code //= 3
        out.append(tuple(frozenset(p) for p in parts))
    return out
