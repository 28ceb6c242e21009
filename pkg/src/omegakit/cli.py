"""Command-line front end.

Every subcommand reads its inputs from files (``-`` or no argument means
standard input) and writes either a document in the text format or a
``yes``/``no`` answer.  Boolean answers set the exit status to 0 or 1;
any error exits with 2.
"""

from __future__ import annotations

import argparse
import os
import sys

from . import alternating as alt
from . import backward, complement, core, determinize, games, io, ltl, structure, transform
from .core import Acceptance, OmegaError

_CONDITIONS = ["buchi", "cobuchi", "genbuchi", "parity", "rabin", "streett", "muller", "weak"]


def _read(path: str | None) -> str:
    if path is None or path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _is_alternating(text: str) -> bool:
    return ":=" in text


def _automaton(path):
    return io.parse_automaton(_read(path))


def _alternating(path):
    text = _read(path)
    if _is_alternating(text):
        return io.parse_alternating(text)
    return alt.AlternatingAutomaton.from_nondeterministic(io.parse_automaton(text))


def _buchi(aut):
    if aut.acceptance.kind == "buchi" and not aut.acceptance.on_transitions:
        return aut
    return core.to_buchi(aut)


def _answer(ok: bool, witness=None) -> int:
    print("yes" if ok else "no")
    if witness is not None:
        print(io.print_lasso(witness))
    return 0 if ok else 1


def _emit(aut) -> int:
    sys.stdout.write(io.print_automaton(aut))
    return 0


def _lasso_arg(text: str, alphabet):
    if os.path.exists(text):
        text = _read(text)
    return io.parse_lasso(text, alphabet)


# ---------------------------------------------------------------------------
# subcommands


def cmd_member(args) -> int:
    text = _read(args.automaton)
    if _is_alternating(text):
        a = io.parse_alternating(text)
        return _answer(alt.alternating_accepts(a, _lasso_arg(args.word, a.alphabet)))
    a = io.parse_automaton(text)
    return _answer(core.accepts_lasso(a, _lasso_arg(args.word, a.alphabet)))


def cmd_empty(args) -> int:
    empty, w = core.is_empty(_automaton(args.automaton), witness=True)
    return _answer(empty, w)


def cmd_equiv(args) -> int:
    w = core.equivalence_witness(_automaton(args.left), _automaton(args.right))
    return _answer(w is None, w)


def cmd_union(args) -> int:
    return _emit(transform.union(_automaton(args.left), _automaton(args.right)))


def cmd_intersect(args) -> int:
    a, b = _automaton(args.left), _automaton(args.right)
    return _emit(transform.intersect_buchi(_buchi(a), _buchi(b)))


def cmd_degeneralize(args) -> int:
    a = _automaton(args.automaton)
    if a.acceptance.kind == "buchi":
        a = a.with_acceptance(Acceptance.genbuchi([a.acceptance.data], a.acceptance.on_transitions))
    return _emit(transform.degeneralize(transform.to_state_based(a)))


def cmd_convert(args) -> int:
    return _emit(transform.convert_condition(_automaton(args.automaton), args.to))


def cmd_to_parity_lar(args) -> int:
    a = _automaton(args.automaton)
    if a.acceptance.kind != "muller":
        a = transform.convert_condition(a, "muller")
    return _emit(transform.muller_to_parity_lar(transform.to_state_based(a)))


def cmd_complement(args) -> int:
    if args.method == "dual":
        sys.stdout.write(io.print_alternating(alt.dualize(_alternating(args.automaton))))
        return 0
    a = _buchi(_automaton(args.automaton))
    build = {
        "rank": complement.complement_rank,
        "ramsey": complement.complement_ramsey,
        "runtree": determinize.complement_via_run_trees,
    }[args.method]
    return _emit(build(a))


def cmd_determinize(args) -> int:
    a = _automaton(args.automaton)
    if args.weak:
        return _emit(determinize.determinize_weak(a))
    return _emit(determinize.determinize_history(_buchi(a)))


def cmd_disambiguate(args) -> int:
    return _emit(determinize.disambiguate(_buchi(_automaton(args.automaton))))


def cmd_backward_det(args) -> int:
    return _emit(backward.backward_determinize(_buchi(_automaton(args.automaton))))


def cmd_check_backward_det(args) -> int:
    return _answer(core.check_backward_deterministic(_automaton(args.automaton)))


def cmd_remove_alternation(args) -> int:
    return _emit(alt.remove_alternation(_alternating(args.automaton)))


def cmd_dualize(args) -> int:
    sys.stdout.write(io.print_alternating(alt.dualize(_alternating(args.automaton))))
    return 0


def cmd_to_weak_alternating(args) -> int:
    sys.stdout.write(io.print_alternating(alt.buchi_alternating_to_weak(_alternating(args.automaton))))
    return 0


def cmd_simulate(args) -> int:
    a = _buchi(_automaton(args.left))
    b = _buchi(_automaton(args.right)) if args.right else a
    sim = games.direct_simulation(a, b) if args.kind == "direct" else games.delayed_simulation(a, b)
    if args.relation:
        for p, q in sorted(sim.relation):
            print(f"{p} {q}")
    return _answer(sim.verdict)


def cmd_reduce(args) -> int:
    return _emit(games.reduce(_buchi(_automaton(args.automaton)), args.kind))


def cmd_minimize_weak(args) -> int:
    a = _automaton(args.automaton)
    if core.classify_determinism(a).forward_deterministic:
        return _emit(determinize.minimize_weak_det(a))
    return _emit(determinize.determinize_weak(a))


def cmd_parity_index(args) -> int:
    print(structure.parity_index(_automaton(args.automaton)))
    return 0


def cmd_towers(args) -> int:
    a = _automaton(args.automaton)
    info = structure.max_tower(a)
    print(info.height)
    for sign in sorted(info.by_sign):
        print(f"{sign} {info.by_sign[sign]}")
    if args.walls:
        for sign, length in sorted(structure.walls(a).items()):
            print(f"wall {sign} {length}")
    return 0


def cmd_ltl2aut(args) -> int:
    text = args.formula if args.formula is not None else sys.stdin.read()
    f = ltl.parse_ltl(text)
    a = ltl.ltl_to_gba(f, discharge_releases=args.backward)
    if args.buchi:
        a = transform.degeneralize(transform.to_state_based(a))
    return _emit(a)


def cmd_solve_game(args) -> int:
    g = io.parse_game(_read(args.game))
    sol = games.solve_parity(g)
    print(" ".join(["win0", *(str(v) for v in sorted(sol.win0))]))
    print(" ".join(["win1", *(str(v) for v in sorted(sol.win1))]))
    for name, strat in (("strategy0", sol.strategy0), ("strategy1", sol.strategy1)):
        print(name + "".join(f" {u}:{v}" for u, v in sorted(strat.items())))
    return 0


# ---------------------------------------------------------------------------
# argument parsing


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="omegakit", description="Finite automata on infinite words.")
    sub = p.add_subparsers(dest="command", required=True)

    def one(name, fn, help_text):
        s = sub.add_parser(name, help=help_text)
        s.add_argument("automaton", nargs="?", help="input file (default: stdin)")
        s.set_defaults(func=fn)
        return s

    def two(name, fn, help_text):
        s = sub.add_parser(name, help=help_text)
        s.add_argument("left")
        s.add_argument("right")
        s.set_defaults(func=fn)
        return s

    s = sub.add_parser("member", help="does the automaton accept the lasso word u;v")
    s.add_argument("automaton")
    s.add_argument("word", help="lasso text like '0 1;1' or a file holding it")
    s.set_defaults(func=cmd_member)

    one("empty", cmd_empty, "is the language empty (witness printed otherwise)")
    two("equiv", cmd_equiv, "are two automata equivalent (distinguishing word printed otherwise)")
    two("union", cmd_union, "union automaton")
    two("intersect", cmd_intersect, "Buchi product")
    one("degeneralize", cmd_degeneralize, "generalized Buchi to Buchi")
    one("convert", cmd_convert, "change the acceptance condition").add_argument(
        "--to", required=True, choices=_CONDITIONS)
    one("to-parity-lar", cmd_to_parity_lar, "Muller to parity through latest appearance records")
    one("complement", cmd_complement, "complement a Buchi automaton").add_argument(
        "--method", default="rank", choices=["rank", "ramsey", "runtree", "dual"])
    one("determinize", cmd_determinize, "deterministic Rabin automaton from history trees").add_argument(
        "--weak", action="store_true", help="minimal deterministic weak automaton instead")
    one("disambiguate", cmd_disambiguate, "unambiguous Buchi automaton")
    one("backward-det", cmd_backward_det, "backward deterministic automaton")
    one("check-backward-det", cmd_check_backward_det, "is the automaton backward deterministic")
    one("remove-alternation", cmd_remove_alternation, "breakpoint construction")
    one("dualize", cmd_dualize, "dual alternating automaton")
    one("to-weak-alternating", cmd_to_weak_alternating, "weak alternating automaton")

    s = sub.add_parser("simulate", help="does the right automaton simulate the left one")
    s.add_argument("left")
    s.add_argument("right", nargs="?")
    s.add_argument("--kind", default="direct", choices=["direct", "delayed"])
    s.add_argument("--relation", action="store_true", help="print the simulation pairs")
    s.set_defaults(func=cmd_simulate)

    one("reduce", cmd_reduce, "quotient by mutual simulation").add_argument(
        "--kind", default="delayed", choices=["direct", "delayed"])
    one("minimize-weak", cmd_minimize_weak, "minimal deterministic weak automaton")
    one("parity-index", cmd_parity_index, "number of priorities needed")
    one("towers", cmd_towers, "maximal tower heights").add_argument(
        "--walls", action="store_true", help="also print wall lengths")

    s = sub.add_parser("ltl2aut", help="LTL formula to generalized Buchi automaton")
    s.add_argument("formula", nargs="?", help="formula text (default: stdin)")
    s.add_argument("--buchi", action="store_true", help="degeneralize the result")
    s.add_argument("--backward", action="store_true", help="backward deterministic output")
    s.set_defaults(func=cmd_ltl2aut)

    s = sub.add_parser("solve-game", help="winning regions and positional strategies")
    s.add_argument("game", nargs="?")
    s.set_defaults(func=cmd_solve_game)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (OmegaError, OSError) as e:
        print(f"omegakit: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
