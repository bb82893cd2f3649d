"""Command-line front end.

Exit codes: 0 success, 2 parse error, 3 semantic error, 4 resource cap
exceeded, 5 experiment disagreement.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import flc, lab, pdl
from .automata import Nfa, derivative, relabel
from .errors import InputError, ParseError, ResourceError
from .formats import (load_language, load_manifest, parse_automaton, parse_flc, parse_lts,
                      parse_pdl, serialize_automaton, serialize_lts)
from .lts import make_chain_b, make_witness_an_b_an, make_witness_diabox, state_key
from .properties import PROPERTY_NAMES, STANDARD_LANGUAGES, build_property, standard_language
from .pumping import pumping_constants, verify_pumping

EXIT_PARSE, EXIT_SEMANTIC, EXIT_RESOURCE, EXIT_DISAGREE = 2, 3, 4, 5


def _text_arg(value: str) -> str:
    """A formula given inline or as a path to a file holding it."""
    p = Path(value)
    if p.is_file():
        return p.read_text().strip()
    return value


def _languages(args) -> dict:
    table = {}
    if getattr(args, "manifest", None):
        table.update(load_manifest(args.manifest).languages)
    for spec in getattr(args, "lang", None) or []:
        name, sep, file = spec.partition("=")
        if not sep:
            file, name = spec, Path(spec).stem
        table[name] = load_language(file, name)
    return table


def _lang_resolver(table):
    class Table(dict):
        def __missing__(self, name):
            if name in STANDARD_LANGUAGES:
                return standard_language(name)
            raise KeyError(name)

        def __contains__(self, name):
            return dict.__contains__(self, name) or name in STANDARD_LANGUAGES

    return Table(table)


def _fmt_state_set(states) -> str:
    return "{" + ", ".join(str(s) for s in sorted(states, key=state_key)) + "}"


def cmd_check(args, out):
    lts = parse_lts(Path(args.lts).read_text())
    if args.property:
        f, g = build_property(args.property)
        if args.logic == "pdl":
            if g is None:
                raise InputError(f"property {args.property!r} has no PDL formula")
            f = g
    elif args.formula:
        text = _text_arg(args.formula)
        if args.logic == "pdl":
            f = parse_pdl(text, _lang_resolver(_languages(args)))
        else:
            f = parse_flc(text)
    else:
        raise InputError("give --formula or --property")
    if args.logic == "pdl":
        states = pdl.eval_pdl(lts, f)
    else:
        states = flc.sat(lts, f, args.mode)
    print(f"satisfying states: {_fmt_state_set(states)}", file=out)
    target = args.state if args.state is not None else lts.initial
    if target is not None:
        target = int(target) if isinstance(target, str) and target.lstrip("-").isdigit() else target
        if target not in lts.states:
            raise InputError(f"unknown state {target!r}")
        label = "initial state" if args.state is None else f"state {target}"
        print(f"holds at {label}: {str(target in states).lower()}", file=out)
    return 0


def cmd_depth(args, out):
    f = parse_pdl(_text_arg(args.formula), _lang_resolver(_languages(args)), allow_unresolved=True)
    print(f"modal depth: {pdl.modal_depth(f)}", file=out)
    print(f"modal-only depth: {pdl.modal_only_depth(f)}", file=out)
    print(f"size: {pdl.size(f)}", file=out)
    return 0


def cmd_derive(args, out):
    acc = parse_automaton(Path(args.automaton).read_text())
    pda = acc.to_pda() if isinstance(acc, Nfa) else acc
    text = serialize_automaton(relabel(derivative(pda, args.letter)))
    if args.output:
        Path(args.output).write_text(text)
    else:
        out.write(text)
    return 0


def cmd_pump(args, out):
    autos = []
    for file in args.automata:
        acc = parse_automaton(Path(file).read_text())
        if not isinstance(acc, Nfa):
            raise InputError(f"{file}: pump expects finite automata")
        autos.append(acc)
    c = pumping_constants(autos, args.letter)
    print(f"m={c.m} k={c.k}", file=out)
    if args.verify:
        l_max, j_max = args.verify
        ok = verify_pumping(autos, args.letter, c, l_max, j_max)
        print(f"verified up to l={l_max}, j={j_max}: {str(ok).lower()}", file=out)
        return 0 if ok else EXIT_DISAGREE
    return 0


def cmd_witness(args, out):
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    if args.family == "chain":
        l = (args.m + args.k) * args.d
        files = {f"chain_{l}.lts": make_chain_b(l),
                 f"chain_{l + args.k}.lts": make_chain_b(l + args.k)}
    else:
        make = make_witness_diabox if args.family == "diabox" else make_witness_an_b_an
        t1, t2 = make(args.m, args.k, args.d, args.cross_edge)
        files = {f"{args.family}_T1.lts": t1, f"{args.family}_T2.lts": t2}
    for name, lts in files.items():
        (outdir / name).write_text(serialize_lts(lts))
        print(f"wrote {outdir / name} ({len(lts.states)} states)", file=out)
    return 0


def cmd_separate(args, out):
    table = _lang_resolver(_languages(args))
    langs = []
    for name in args.langs:
        if Path(name).is_file():
            langs.append(load_language(name))
        elif name in table:
            langs.append(table[name])
        else:
            raise InputError(f"unknown language {name!r}")
    bounds = lab.Bounds(size_cap=args.size_cap, cross_edge=args.cross_edge,
                        depth_measure=args.depth_measure, slice_bound=args.slice_bound,
                        flc_mode=args.mode)
    report = lab.EXPERIMENTS[args.family](langs, args.depth, bounds)
    if args.no_timing:
        report.duration_ms = 0
    print(report.to_json() if args.json else report.to_text(), file=out)
    return 0 if report.ok else EXIT_DISAGREE


def cmd_vpcheck(args, out):
    f = parse_flc(_text_arg(args.formula))
    split = lambda xs: [x for part in xs or [] for x in part.split(",") if x]  # noqa: E731
    ok = flc.is_vpflc(f, split(args.calls), split(args.returns), split(args.internals))
    print(f"vpFLC: {str(ok).lower()}", file=out)
    return 0


def cmd_reach(args, out):
    lts = parse_lts(Path(args.lts).read_text())
    lang = load_language(args.lang)
    rel = pdl.reach_relation(lts, lang)
    for s, t in sorted(rel, key=lambda p: (state_key(p[0]), state_key(p[1]))):
        print(f"{s} {t}", file=out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="pdlflc", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    def lang_opts(p):
        p.add_argument("--manifest", help="JSON manifest naming languages")
        p.add_argument("--lang", action="append", metavar="NAME=FILE",
                       help="bind a language name to an automaton file (repeatable)")

    p = sub.add_parser("check", help="model check a formula on an LTS")
    p.add_argument("--lts", required=True)
    p.add_argument("--formula", help="formula text or a file containing it")
    p.add_argument("--property", choices=PROPERTY_NAMES, help="one of the built-in properties")
    p.add_argument("--logic", choices=("pdl", "flc"), default="pdl")
    p.add_argument("--state")
    p.add_argument("--mode", choices=flc.MODES, default="auto", help="FLC evaluation mode")
    lang_opts(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("depth", help="modal depth and size of a PDL formula")
    p.add_argument("--formula", required=True)
    lang_opts(p)
    p.set_defaults(func=cmd_depth)

    p = sub.add_parser("derive", help="derivative of an automaton by a letter")
    p.add_argument("--automaton", required=True)
    p.add_argument("--letter", required=True)
    p.add_argument("--output")
    p.set_defaults(func=cmd_derive)

    p = sub.add_parser("pump", help="joint pumping constants of finite automata")
    p.add_argument("--automata", nargs="+", required=True)
    p.add_argument("--letter", required=True)
    p.add_argument("--verify", nargs=2, type=int, metavar=("L_MAX", "J_MAX"))
    p.set_defaults(func=cmd_pump)

    p = sub.add_parser("witness", help="write a witness family as LTS files")
    p.add_argument("--family", choices=("chain", "diabox", "anban"), required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--cross-edge", action="store_true")
    p.add_argument("--out", default=".")
    p.set_defaults(func=cmd_witness)

    p = sub.add_parser("separate", help="run a bounded indistinguishability experiment")
    p.add_argument("--family", choices=tuple(lab.EXPERIMENTS), required=True)
    p.add_argument("--langs", nargs="*", default=[],
                   help="automaton files or language names")
    p.add_argument("--depth", type=int, required=True)
    p.add_argument("--size-cap", type=int, default=6)
    p.add_argument("--slice-bound", type=int, default=16)
    p.add_argument("--depth-measure", choices=tuple(pdl.DEPTH_MEASURES), default="counted")
    p.add_argument("--cross-edge", action="store_true")
    p.add_argument("--mode", choices=flc.MODES, default="demand", help="FLC evaluation mode")
    p.add_argument("--json", action="store_true")
    p.add_argument("--no-timing", action="store_true",
                   help="report duration_ms as 0 so output is byte-stable")
    lang_opts(p)
    p.set_defaults(func=cmd_separate)

    p = sub.add_parser("vpcheck", help="is an FLC formula in the visibly pushdown fragment")
    p.add_argument("--formula", required=True)
    p.add_argument("--calls", nargs="*")
    p.add_argument("--returns", nargs="*")
    p.add_argument("--internals", nargs="*")
    p.set_defaults(func=cmd_vpcheck)

    p = sub.add_parser("reach", help="print the reach relation of a language on an LTS")
    p.add_argument("--lts", required=True)
    p.add_argument("--lang", required=True)
    p.set_defaults(func=cmd_reach)
    return ap


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, out)
    except ParseError as e:
        print(f"parse error: {e}", file=sys.stderr)
        return EXIT_PARSE
    except ResourceError as e:
        print(f"resource limit: {e}", file=sys.stderr)
        return EXIT_RESOURCE
    except (InputError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_SEMANTIC


if __name__ == "__main__":
    sys.exit(main())
