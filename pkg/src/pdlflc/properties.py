"""Standard languages over {a, b} and the five separating properties."""

from __future__ import annotations

from . import flc, pdl
from .automata import Nfa, Pda, Vpa, language
from .errors import InputError

AB = frozenset({"a", "b"})

_ANBN = [
    ("q0", "a", None, ("B",), "q1"),
    ("q1", "a", "B", ("B", "A"), "q1"),
    ("q1", "a", "A", ("A", "A"), "q1"),
    ("q1", "b", "A", (), "q2"),
    ("q1", "b", "B", (), "qf"),
    ("q2", "b", "A", (), "q2"),
    ("q2", "b", "B", (), "qf"),
]

_ANBAN = [
    ("q0", "a", None, ("B",), "q1"),
    ("q1", "a", "B", ("B", "A"), "q1"),
    ("q1", "a", "A", ("A", "A"), "q1"),
    ("q1", "b", "A", ("A",), "q2"),
    ("q1", "b", "B", ("B",), "q2"),
    ("q2", "a", "A", (), "q2"),
    ("q2", "a", "B", (), "qf"),
]

_STATES = {"q0", "q1", "q2", "qf"}


def anbn_pda() -> Pda:
    """{a^n b^n | n >= 1}; B marks the first a, A every later one."""
    return Pda(_STATES, AB, {"A", "B"}, _ANBN, "q0", {"qf"})


def anbn_vpa() -> Vpa:
    """The same transitions read with a as call and b as return."""
    return Vpa(states=_STATES, alphabet=AB, stack_alphabet={"A", "B"}, transitions=_ANBN,
               initial="q0", accepting={"qf"}, calls={"a"}, returns={"b"})


def anban_pda() -> Pda:
    """{a^n b a^n | n >= 1}."""
    return Pda(_STATES, AB, {"A", "B"}, _ANBAN, "q0", {"qf"})


def unary_cycle(letter: str, period: int, alphabet=AB) -> Nfa:
    """DFA-shaped NFA for (letter^period)*; other letters have no moves."""
    if period < 1:
        raise InputError("period must be positive")
    return Nfa(range(period), alphabet,
               [(i, letter, (i + 1) % period) for i in range(period)], 0, {0})


def b_star() -> Nfa:
    return unary_cycle("b", 1)


def a_star() -> Nfa:
    return unary_cycle("a", 1)


def even_b() -> Nfa:
    return unary_cycle("b", 2)


def triple_b() -> Nfa:
    return unary_cycle("b", 3)


def sigma_star() -> Nfa:
    return Nfa({0}, AB, [(0, "a", 0), (0, "b", 0)], 0, {0})


STANDARD_LANGUAGES = {
    "ANBN": anbn_pda,
    "ANBN_VP": anbn_vpa,
    "ANBAN": anban_pda,
    "BSTAR": b_star,
    "ASTAR": a_star,
    "EVENB": even_b,
    "TRIPLEB": triple_b,
    "SIGMASTAR": sigma_star,
}


def standard_language(name: str):
    """A LanguageRef for one of the built-in languages."""
    try:
        return language(name, STANDARD_LANGUAGES[name]())
    except KeyError:
        raise InputError(f"unknown standard language {name!r}") from None


# ---------------------------------------------------------------------------
# the separating properties

PROPERTY_NAMES = ("dia_anbn", "dia_anban", "game_iter", "dia_an_box_bn", "dia_an_box_b_dia_an")


def _recursive(base: list, before, after, var: str = "Z"):
    """mu Z . (base | before ; Z ; after) as a chop-right tree."""
    return flc.Mu(var, flc.Or(flc.chop(*base), flc.chop(before, flc.Var(var), after)))


def build_property(name: str, prop: str = "p"):
    """The FLC formula for a named property, plus its PDL formula when one
    exists (None otherwise)."""
    a_dia, b_dia, b_box = flc.Diamond("a"), flc.Diamond("b"), flc.Box("b")
    p = flc.Prop(prop)
    if name == "dia_anbn":
        f = flc.Chop(_recursive([a_dia, b_dia], a_dia, b_dia), p)
        return f, pdl.Diamond(language("L_anbn", anbn_vpa()), pdl.Prop(prop))
    if name == "dia_anban":
        f = flc.Chop(_recursive([a_dia, b_dia, a_dia], a_dia, a_dia), p)
        return f, pdl.Diamond(language("L_anban", anban_pda()), pdl.Prop(prop))
    if name == "game_iter":
        body = flc.chop(a_dia, b_box, flc.Or(p, flc.Var("X")))
        return flc.Chop(flc.Mu("X", body), flc.tt()), None
    if name == "dia_an_box_bn":
        return flc.Chop(_recursive([a_dia, b_box], a_dia, b_box), p), None
    if name == "dia_an_box_b_dia_an":
        return flc.Chop(_recursive([a_dia, b_box, a_dia], a_dia, a_dia), p), None
    raise InputError(f"unknown property {name!r}; expected one of {', '.join(PROPERTY_NAMES)}")
