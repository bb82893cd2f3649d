"""Bounded indistinguishability experiments on the chain and witness families.

Each experiment derives pumping constants from unary slices of the given
languages, builds the matching pair of structures, and compares every
enumerated PDL formula (up to a depth and a size cap) on the relevant
states. Enumeration is finite, so a clean run is evidence, never a proof.
"""

from __future__ import annotations

import json
import time
from dataclasses import asdict, dataclass, field
from typing import Sequence

from . import flc
from .automata import LanguageRef, derivative, unary_slice
from .errors import InputError
from .lts import Lts, make_chain_b, make_witness_an_b_an, make_witness_diabox
from .pdl import DEPTH_MEASURES, PdlChecker, enumerate_formulas, to_text
from .properties import build_property
from .pumping import PumpingConstants, pumping_constants

CAVEAT = ("formula enumeration is bounded by depth and size; "
          "zero disagreements is evidence, not a proof")


@dataclass(frozen=True)
class Bounds:
    size_cap: int = 6
    slice_bound: int = 16
    depth_measure: str = "counted"  # negation adds depth; "modal": it does not
    cross_edge: bool = False
    flc_mode: str = "demand"
    props: tuple = ("p",)
    chain_length: int | None = None  # chain experiment only; default (m+k)*d'

    def __post_init__(self):
        if self.size_cap < 1:
            raise InputError("size_cap must be at least 1")
        if self.slice_bound < 1:
            raise InputError("slice_bound must be at least 1")
        if self.depth_measure not in DEPTH_MEASURES:
            raise InputError(f"unknown depth measure {self.depth_measure!r}")
        if self.flc_mode not in flc.MODES:
            raise InputError(f"unknown FLC mode {self.flc_mode!r}")


@dataclass
class ExperimentReport:
    experiment: str
    params: dict
    m: int
    k: int
    l: int
    formulas_checked: int
    disagreements: list = field(default_factory=list)
    unclaimed: list = field(default_factory=list)
    flc_verdicts: dict | None = None
    duration_ms: int = 0
    note: str = CAVEAT

    @property
    def indistinguishable(self) -> bool:
        return not self.disagreements

    @property
    def flc_separates(self) -> bool | None:
        if self.flc_verdicts is None:
            return None
        return self.flc_verdicts["t1"] and not self.flc_verdicts["t2"]

    @property
    def ok(self) -> bool:
        """No disagreement at claimed states and, if checked, the FLC property
        holds on T1 and fails on T2."""
        return self.indistinguishable and self.flc_separates is not False

    def to_dict(self) -> dict:
        d = asdict(self)
        d["indistinguishable"] = self.indistinguishable
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def to_text(self) -> str:
        lines = [f"experiment: {self.experiment}"]
        lines += [f"  {k}: {v}" for k, v in sorted(self.params.items())]
        lines.append(f"pumping constants: m={self.m} k={self.k}, l={self.l}")
        lines.append(f"formulas checked: {self.formulas_checked}")
        lines.append(f"disagreements at claimed states: {len(self.disagreements)}")
        for d in self.disagreements[:10]:
            lines.append(f"  {d['formula']}  {d['t1_state']}={d['t1']}  {d['t2_state']}={d['t2']}")
        if self.unclaimed:
            lines.append(f"disagreements outside the claimed range (informational): "
                         f"{len(self.unclaimed)}")
        if self.flc_verdicts is not None:
            v = self.flc_verdicts
            lines.append(f"FLC {v['property']}: T1={str(v['t1']).lower()} "
                         f"T2={str(v['t2']).lower()} (expected true/false)")
        lines.append(f"indistinguishable: {str(self.indistinguishable).lower()}")
        lines.append(f"duration: {self.duration_ms} ms")
        lines.append(f"note: {self.note}")
        return "\n".join(lines)


def _constants(slices, letter) -> PumpingConstants:
    # with no languages every formula is boolean; any positive constants do
    if not slices:
        return PumpingConstants(1, 1)
    return pumping_constants(slices, letter)


def _slices(langs: Sequence[LanguageRef], letter, bound, derive_first=None):
    out = []
    for L in langs:
        pda = L.as_pda()
        if derive_first is not None:
            pda = derivative(pda, derive_first)
        out.append(unary_slice(pda, letter, bound))
    return out


def _check_langs(langs):
    for L in langs:
        if L.acceptor is None:
            raise InputError(f"language {L.name!r} is unresolved")
        if not L.alphabet <= {"a", "b"}:
            raise InputError(f"language {L.name!r} is not over {{a, b}}")


def _formulas(langs, depth, bounds):
    return enumerate_formulas(langs, bounds.props, depth, bounds.size_cap, bounds.depth_measure)


def _compare_initial(t1: Lts, t2: Lts, langs, depth, bounds):
    c1, c2 = PdlChecker(t1), PdlChecker(t2)
    count = 0
    disagreements = []
    for f in _formulas(langs, depth, bounds):
        count += 1
        v1 = t1.initial in c1.eval(f)
        v2 = t2.initial in c2.eval(f)
        if v1 != v2:
            disagreements.append({"formula": to_text(f), "t1_state": t1.initial, "t1": v1,
                                  "t2_state": t2.initial, "t2": v2})
    return count, disagreements


def _flc_verdicts(name, t1, t2, bounds):
    f, _ = build_property(name)
    return {"property": name, "formula": flc.to_text(f),
            "t1": flc.holds(t1, t1.initial, f, bounds.flc_mode),
            "t2": flc.holds(t2, t2.initial, f, bounds.flc_mode)}


def _params(langs, depth_name, depth, bounds):
    return {"languages": [L.name for L in langs], depth_name: depth,
            "size_cap": bounds.size_cap, "depth_measure": bounds.depth_measure,
            "cross_edge": bounds.cross_edge, "slice_bound": bounds.slice_bound}


def run_chain_experiment(langs: Sequence[LanguageRef], d_prime: int,
                         bounds: Bounds = Bounds()) -> ExperimentReport:
    """Compare state j of the b-chain of length l with state j+k of the chain
    of length l+k, for every enumerated formula of depth <= d_prime.

    Only j >= (m+k)*d_prime is within the claim; smaller j are compared too
    and listed separately.
    """
    if d_prime < 1:
        raise InputError("d_prime must be at least 1")
    _check_langs(langs)
    start = time.perf_counter()
    c = _constants(_slices(langs, "b", bounds.slice_bound), "b")
    floor = (c.m + c.k) * d_prime
    l = floor if bounds.chain_length is None else bounds.chain_length
    if l < floor:
        raise InputError(f"chain_length must be at least (m+k)*d' = {floor}")
    short, long_ = make_chain_b(l), make_chain_b(l + c.k)
    c1, c2 = PdlChecker(short), PdlChecker(long_)
    count = 0
    claimed, unclaimed = [], []
    for f in _formulas(langs, d_prime, bounds):
        count += 1
        s1, s2 = c1.eval(f), c2.eval(f)
        for j in range(l + 1):
            v1, v2 = j in s1, (j + c.k) in s2
            if v1 != v2:
                rec = {"formula": to_text(f), "t1_state": j, "t1": v1,
                       "t2_state": j + c.k, "t2": v2}
                (claimed if j >= floor else unclaimed).append(rec)
    params = _params(langs, "d_prime", d_prime, bounds)
    params["claimed_states"] = [floor, l]
    return ExperimentReport("chain", params, c.m, c.k, l, count, claimed, unclaimed,
                            None, int((time.perf_counter() - start) * 1000))


def run_diabox_experiment(langs: Sequence[LanguageRef], d: int,
                          bounds: Bounds = Bounds()) -> ExperimentReport:
    """Compare the initial states of the <a^n>[b^n] witness pair on every
    enumerated formula of depth <= d, and evaluate the FLC property on both."""
    _check_langs(langs)
    start = time.perf_counter()
    c = _constants(_slices(langs, "b", bounds.slice_bound), "b")
    t1, t2 = make_witness_diabox(c.m, c.k, d, bounds.cross_edge)
    count, dis = _compare_initial(t1, t2, langs, d, bounds)
    verdicts = _flc_verdicts("dia_an_box_bn", t1, t2, bounds)
    return ExperimentReport("diabox", _params(langs, "d", d, bounds), c.m, c.k,
                            (c.m + c.k) * d, count, dis, [], verdicts,
                            int((time.perf_counter() - start) * 1000))


def run_an_b_an_experiment(langs: Sequence[LanguageRef], d: int,
                           bounds: Bounds = Bounds()) -> ExperimentReport:
    """As the diabox experiment for <a^n>[b]<a^n>; the constants come from the
    a-slices of each language and of its b-derivative."""
    _check_langs(langs)
    start = time.perf_counter()
    slices = (_slices(langs, "a", bounds.slice_bound)
              + _slices(langs, "a", bounds.slice_bound, derive_first="b"))
    c = _constants(slices, "a")
    t1, t2 = make_witness_an_b_an(c.m, c.k, d, bounds.cross_edge)
    count, dis = _compare_initial(t1, t2, langs, d, bounds)
    verdicts = _flc_verdicts("dia_an_box_b_dia_an", t1, t2, bounds)
    return ExperimentReport("an_b_an", _params(langs, "d", d, bounds), c.m, c.k,
                            (c.m + c.k) * d, count, dis, [], verdicts,
                            int((time.perf_counter() - start) * 1000))


EXPERIMENTS = {
    "chain": run_chain_experiment,
    "diabox": run_diabox_experiment,
    "anban": run_an_b_an_experiment,
}
