"""Model checking for PDL over regular, visibly pushdown and context-free
languages and for Fixpoint Logic with Chop, with pumping-based separation
experiments."""

from .errors import BoundTooSmall, InputError, ParseError, ResourceError
from .lts import Lts, make_chain_b, make_witness_an_b_an, make_witness_diabox, reach_by_word, words_from
from .automata import (LanguageRef, Nfa, Pda, Vpa, derivative, determinize, intersect_regular,
                       language, nfa_accepts, pda_accepts, pda_empty, unary_slice, union,
                       vpa_validate)
from .pumping import PumpingConstants, TransitionProfile, compose, profile_of, pumping_constants, verify_pumping
from .pdl import enumerate_formulas, eval_pdl, modal_depth, reach_relation
from .flc import PredicateTransformer, eval_flc, holds, is_vpflc
from .properties import build_property
from .lab import Bounds, ExperimentReport, run_an_b_an_experiment, run_chain_experiment, run_diabox_experiment
from .formats import parse_automaton, parse_flc, parse_lts, parse_pdl

__version__ = "0.1.0"
