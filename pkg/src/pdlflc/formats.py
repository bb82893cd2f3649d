"""Text formats for transition systems, automata and formulas, plus the JSON
manifest that names them.

LTS files::

    # comment
    alphabet a b          (optional; default: letters used by transitions)
    state 0 p
    state 1
    init 1
    trans 1 b 0

Automaton files start with a header line ``nfa``, ``pda`` or ``vpa``::

    pda
    alphabet a b
    start q0
    accept qf
    edge q0 a pop:_ push:B q1       (_ is the bottom marker, - an empty push)
    edge q1 b pop:B push:- qf

NFA edges are ``edge q a q'``. VPA files also list ``calls``, ``returns``
and ``internals``; a PDA file may contain ``empty_stack`` to accept only
with an empty stack. Tokens that look like integers become ints (states
only; letters and propositions stay strings).
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping

from . import flc, pdl
from .automata import BOTTOM, LanguageRef, Nfa, Pda, Vpa, vpa_validate
from .errors import InputError, ParseError
from .lts import Lts, state_key

_INT = re.compile(r"-?\d+\Z")


def _state(tok: str):
    return int(tok) if _INT.match(tok) else tok


def _lines(text: str):
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0]
        toks = line.split()
        if toks:
            yield no, toks, raw


def _need(toks, n, no, raw, usage):
    if len(toks) < n:
        raise ParseError(f"expected '{usage}'", no, len(raw) + 1)


def _sorted(xs):
    return sorted(xs, key=state_key)


# ---------------------------------------------------------------------------
# LTS

def parse_lts(text: str) -> Lts:
    states, labelling, transitions = [], {}, []
    initial = None
    alphabet = None
    for no, toks, raw in _lines(text):
        kw = toks[0]
        if kw == "state":
            _need(toks, 2, no, raw, "state <id> [props]")
            s = _state(toks[1])
            states.append(s)
            labelling.setdefault(s, set()).update(toks[2:])
        elif kw == "init":
            _need(toks, 2, no, raw, "init <id>")
            if len(toks) > 2:
                raise ParseError("init takes one state", no, raw.index(toks[2]) + 1)
            initial = _state(toks[1])
        elif kw == "trans":
            if len(toks) != 4:
                raise ParseError("expected 'trans <src> <letter> <dst>'", no, 1)
            transitions.append((_state(toks[1]), toks[2], _state(toks[3])))
        elif kw == "alphabet":
            alphabet = set(alphabet or ()) | set(toks[1:])
        else:
            raise ParseError(f"unknown directive {kw!r}", no, raw.index(kw) + 1)
    return Lts(states, transitions, labelling, initial, alphabet)


def serialize_lts(lts: Lts) -> str:
    out = ["alphabet " + " ".join(sorted(lts.alphabet, key=str))] if lts.alphabet else []
    for s in lts.ordered_states:
        out.append(" ".join(["state", str(s), *sorted(lts.labelling[s])]))
    if lts.initial is not None:
        out.append(f"init {lts.initial}")
    for s, a, t in sorted(lts.transitions, key=lambda e: (state_key(e[0]), str(e[1]), state_key(e[2]))):
        out.append(f"trans {s} {a} {t}")
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# automata

def _stack_field(tok, prefix, no, raw):
    if not tok.startswith(prefix):
        raise ParseError(f"expected '{prefix}...'", no, raw.find(tok) + 1)
    return tok[len(prefix):]


def parse_automaton(text: str):
    lines = list(_lines(text))
    if not lines:
        raise ParseError("empty automaton file", 1, 1)
    no, toks, raw = lines[0]
    kind = toks[0]
    if kind not in ("nfa", "pda", "vpa") or len(toks) != 1:
        raise ParseError("first line must be 'nfa', 'pda' or 'vpa'", no, 1)
    alphabet, states, accepting = set(), set(), set()
    parts = {"calls": set(), "returns": set(), "internals": set()}
    edges, stack = [], set()
    start = None
    empty_stack = False
    for no, toks, raw in lines[1:]:
        kw = toks[0]
        if kw == "alphabet":
            alphabet.update(toks[1:])
        elif kw == "states":
            states.update(_state(t) for t in toks[1:])
        elif kw == "start":
            _need(toks, 2, no, raw, "start <state>")
            start = _state(toks[1])
        elif kw == "accept":
            accepting.update(_state(t) for t in toks[1:])
        elif kw in parts and kind == "vpa":
            parts[kw].update(toks[1:])
        elif kw == "empty_stack" and kind == "pda":
            empty_stack = True
        elif kw == "edge":
            if kind == "nfa":
                if len(toks) != 4:
                    raise ParseError("expected 'edge <q> <letter> <q'>'", no, 1)
                edges.append((_state(toks[1]), toks[2], _state(toks[3])))
            else:
                if len(toks) != 6:
                    raise ParseError("expected 'edge <q> <letter> pop:<X|_> push:<Y,..|-> <q'>'",
                                     no, 1)
                pop = _stack_field(toks[3], "pop:", no, raw)
                push = _stack_field(toks[4], "push:", no, raw)
                pop = BOTTOM if pop == "_" else pop
                push = () if push in ("-", "") else tuple(push.split(","))
                stack.update(push)
                if pop is not BOTTOM:
                    stack.add(pop)
                edges.append((_state(toks[1]), toks[2], pop, push, _state(toks[5])))
        else:
            raise ParseError(f"unknown directive {kw!r} for {kind}", no, raw.index(kw) + 1)
    if start is None:
        raise ParseError("missing 'start' line", no, 1)
    if kind == "nfa":
        states |= {start} | accepting | {e[0] for e in edges} | {e[2] for e in edges}
        return Nfa(states, alphabet, edges, start, accepting)
    states |= {start} | accepting | {e[0] for e in edges} | {e[4] for e in edges}
    if kind == "pda":
        return Pda(states, alphabet, stack, edges, start, accepting, empty_stack=empty_stack)
    return Vpa(states=states, alphabet=alphabet, stack_alphabet=stack, transitions=edges,
               initial=start, accepting=accepting, **parts)


def serialize_automaton(acc) -> str:
    letters = lambda xs: " ".join(sorted(xs, key=str))  # noqa: E731
    if isinstance(acc, Nfa):
        out = ["nfa"]
    elif isinstance(acc, Vpa):
        out = ["vpa"]
    elif isinstance(acc, Pda):
        out = ["pda"]
    else:
        raise InputError(f"not an automaton: {acc!r}")
    out.append("alphabet " + letters(acc.alphabet))
    if isinstance(acc, Vpa):
        out += [f"calls {letters(acc.calls)}".rstrip(), f"returns {letters(acc.returns)}".rstrip(),
                f"internals {letters(acc.internals)}".rstrip()]
    elif isinstance(acc, Pda) and acc.empty_stack:
        out.append("empty_stack")
    out.append("states " + " ".join(str(q) for q in _sorted(acc.states)))
    out.append(f"start {acc.initial}")
    if acc.accepting:
        out.append("accept " + " ".join(str(q) for q in _sorted(acc.accepting)))
    if isinstance(acc, Nfa):
        for q, a, r in sorted(acc.transitions, key=lambda e: (state_key(e[0]), str(e[1]), state_key(e[2]))):
            out.append(f"edge {q} {a} {r}")
    else:
        def key(t):
            return (state_key(t.source), str(t.letter), str(t.pop), t.push, state_key(t.target))
        for t in sorted(acc.transitions, key=key):
            pop = "_" if t.pop is BOTTOM else t.pop
            push = ",".join(t.push) if t.push else "-"
            out.append(f"edge {t.source} {t.letter} pop:{pop} push:{push} {t.target}")
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# formula tokenizer

_TOKEN = re.compile(r"\s*(?:(?P<angle><\s*(?P<aname>[^<>\s]+)\s*>)"
                    r"|(?P<square>\[\s*(?P<sname>[^\[\]\s]+)\s*\])"
                    r"|(?P<ident>[A-Za-z_][A-Za-z0-9_']*)"
                    r"|(?P<sym>[~!()&|;.]))")


def _tokenize(text: str):
    toks = []
    pos = 0
    line_starts = [0] + [i + 1 for i, c in enumerate(text) if c == "\n"]

    def where(i):
        line = max(n for n, s in enumerate(line_starts) if s <= i)
        return line + 1, i - line_starts[line] + 1

    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            break
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos]!r}", *where(pos))
        start = pos + (len(m.group(0)) - len(m.group(0).lstrip()))
        if m.group("angle"):
            toks.append(("<>", m.group("aname"), where(start)))
        elif m.group("square"):
            toks.append(("[]", m.group("sname"), where(start)))
        elif m.group("ident"):
            toks.append(("id", m.group("ident"), where(start)))
        else:
            toks.append((m.group("sym"), m.group("sym"), where(start)))
        pos = m.end()
    toks.append(("eof", "", where(len(text))))
    return toks


class _Parser:
    def __init__(self, text):
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def next(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def expect(self, kind):
        tok = self.next()
        if tok[0] != kind:
            shown = tok[1] or "end of input"
            raise ParseError(f"expected {kind!r}, found {shown!r}", *tok[2])
        return tok

    def fail(self, msg):
        raise ParseError(msg, *self.peek()[2])

    def done(self):
        if self.peek()[0] != "eof":
            self.fail(f"unexpected {self.peek()[1]!r} after formula")


# ---------------------------------------------------------------------------
# PDL

def parse_pdl(text: str, languages: Mapping[str, LanguageRef] | None = None,
              allow_unresolved: bool = False) -> pdl.Formula:
    """Parse PDL text. Language names are looked up in ``languages``; with
    ``allow_unresolved`` unknown names become placeholders (enough for depth
    computations but not for model checking)."""
    languages = languages if languages is not None else {}
    p = _Parser(text)

    def lang(name, pos):
        if name in languages:
            return languages[name]
        if allow_unresolved:
            return LanguageRef(name, "CFL")
        raise InputError(f"unknown language {name!r} at line {pos[0]}, column {pos[1]}")

    def formula():
        kind, val, pos = p.peek()
        if kind == "~":
            p.next()
            return pdl.Not(formula())
        if kind == "<>":
            p.next()
            return pdl.Diamond(lang(val, pos), formula())
        if kind == "[]":
            p.next()
            return pdl.Box(lang(val, pos), formula())
        if kind == "(":
            p.next()
            left = formula()
            op = p.peek()[0]
            if op not in ("&", "|"):
                p.fail("expected '&' or '|'")
            node = pdl.And if op == "&" else pdl.Or
            while p.peek()[0] == op:
                p.next()
                left = node(left, formula())
            if p.peek()[0] in ("&", "|"):
                p.fail("mixing '&' and '|' needs parentheses")
            p.expect(")")
            return left
        if kind == "id":
            p.next()
            if val == "tt":
                return pdl.tt()
            if val == "ff":
                return pdl.ff()
            return pdl.Prop(val)
        p.fail(f"unexpected {val or 'end of input'!r}")

    f = formula()
    p.done()
    return f


# ---------------------------------------------------------------------------
# FLC

def parse_flc(text: str, free_vars=()) -> flc.Formula:
    """Parse FLC text. Identifiers bound by an enclosing mu/nu (or listed in
    ``free_vars``) are variables, all others are propositions; ``tt`` and
    ``ff`` are sugar over a reserved proposition. ``;`` binds weakest and
    associates to the right."""
    p = _Parser(text)
    scope = list(free_vars)

    def chop():
        left = unary()
        if p.peek()[0] == ";":
            p.next()
            return flc.Chop(left, chop())
        return left

    def unary():
        kind, val, _ = p.peek()
        if kind == "id" and val in ("mu", "nu"):
            p.next()
            var = p.expect("id")[1]
            if var in ("mu", "nu", "tau"):
                p.fail(f"{var!r} cannot be a variable")
            p.expect(".")
            scope.append(var)
            body = unary()
            scope.pop()
            return (flc.Mu if val == "mu" else flc.Nu)(var, body)
        return primary()

    def primary():
        kind, val, pos = p.next()
        if kind == "id":
            if val == "tau":
                return flc.Tau()
            if val in scope:
                return flc.Var(val)
            if val == "tt":
                return flc.tt()
            if val == "ff":
                return flc.ff()
            return flc.Prop(val)
        if kind == "!":
            return flc.NegProp(p.expect("id")[1])
        if kind == "<>":
            return flc.Diamond(val)
        if kind == "[]":
            return flc.Box(val)
        if kind == "(":
            left = chop()
            op = p.peek()[0]
            if op in ("&", "|"):
                node = flc.And if op == "&" else flc.Or
                while p.peek()[0] == op:
                    p.next()
                    left = node(left, chop())
                if p.peek()[0] in ("&", "|"):
                    p.fail("mixing '&' and '|' needs parentheses")
            p.expect(")")
            return left
        raise ParseError(f"unexpected {val or 'end of input'!r}", *pos)

    f = chop()
    p.done()
    return f


# ---------------------------------------------------------------------------
# manifest

@dataclass
class Manifest:
    languages: dict = field(default_factory=dict)
    lts: dict = field(default_factory=dict)
    formulas: dict = field(default_factory=dict)  # name -> (logic, formula)


def load_language(path, name=None, cls=None) -> LanguageRef:
    path = Path(path)
    acc = parse_automaton(path.read_text())
    name = name or path.stem
    if cls is None:
        cls = "REG" if isinstance(acc, Nfa) else "VPL" if isinstance(acc, Vpa) else "CFL"
    ref = LanguageRef(name, cls, acc)
    if cls == "VPL" and not vpa_validate(acc):
        raise InputError(f"language {name!r} violates the visibly pushdown shape rules")
    return ref


def load_manifest(path) -> Manifest:
    path = Path(path)
    try:
        data = json.loads(path.read_text())
    except json.JSONDecodeError as e:
        raise ParseError(f"manifest is not valid JSON: {e.msg}", e.lineno, e.colno) from None
    base = path.parent
    man = Manifest()
    for name, entry in data.get("languages", {}).items():
        man.languages[name] = load_language(base / entry["file"], name, entry.get("class"))
    for name, file in data.get("lts", {}).items():
        man.lts[name] = parse_lts((base / file).read_text())
    for name, entry in data.get("formulas", {}).items():
        logic = entry.get("logic", "pdl")
        if logic == "pdl":
            f = parse_pdl(entry["text"], man.languages)
        elif logic == "flc":
            f = parse_flc(entry["text"])
        else:
            raise InputError(f"formula {name!r}: unknown logic {logic!r}")
        man.formulas[name] = (logic, f)
    return man
