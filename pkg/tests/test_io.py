import os
import subprocess
import sys
from pathlib import Path

import pytest
from hypothesis import given, settings, strategies as st

from omegakit import (
    Acceptance, Automaton, LassoWord, OmegaError, ParseError, accepts_lasso, equivalent,
    parse_alternating, parse_automaton, parse_game, parse_lasso, print_alternating,
    print_automaton, print_game,
)
from omegakit.alternating import AlternatingAutomaton, f_and, f_or
from omegakit.cli import main
from oracles import random_automaton, random_game, rng

DATA = Path(__file__).parent / "data"
KINDS = ["trivial", "buchi", "cobuchi", "genbuchi", "parity", "rabin", "streett", "muller"]


def test_parse_fin1_buchi():
    a = parse_automaton((DATA / "zeros_buchi.aut").read_text())
    assert a.num_states == 2
    assert a.acceptance == Acceptance.buchi([1])


def test_empty_transition_block_accepts_nothing():
    a = parse_automaton("alphabet 0 1\nstates 1\ninitial 0\ntransitions\nend\nacceptance trivial\n")
    assert not a.transitions
    assert not accepts_lasso(a, LassoWord("", "0"))


def test_undeclared_state_diagnostic_has_line():
    text = "alphabet 0 1\nstates 2\ninitial 0\ntransitions\n0 0 5\nend\nacceptance trivial\n"
    with pytest.raises(ParseError, match="line 5.*undeclared state"):
        parse_automaton(text)


@pytest.mark.parametrize("text,prefix,period", [(";0", (), ("0",)), ("1 0;0 1", ("1", "0"), ("0", "1"))])
def test_parse_lasso(text, prefix, period):
    w = parse_lasso(text)
    assert (w.prefix, w.period) == (prefix, period)


def test_empty_period_diagnostic():
    with pytest.raises(ParseError, match="empty period"):
        parse_lasso("0;")


@pytest.mark.parametrize("kind", KINDS)
@pytest.mark.parametrize("on_t", [False, True])
def test_round_trip_is_identity(kind, on_t):
    r = rng(len(kind) * 7 + on_t)
    for _ in range(15):
        a = random_automaton(r, kind, r.randint(1, 3), on_transitions=on_t)
        text = print_automaton(a)
        b = parse_automaton(text)
        assert b == a
        assert print_automaton(b) == text


def test_weak_acceptance_round_trip():
    a = Automaton("ab", 2, [0], [(0, 0, 0), (0, 1, 1), (1, 1, 1)], Acceptance.weak([1]))
    assert parse_automaton(print_automaton(a)) == a


@settings(max_examples=300, deadline=None)
@given(st.text(alphabet="alphbetsinoruc0123456789 .;:{}()#\n-=|&q", max_size=120))
def test_parser_is_total(text):
    for parse in (parse_automaton, parse_alternating, parse_game, parse_lasso):
        try:
            parse(text)
        except OmegaError:
            pass


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 10 ** 6), st.data())
def test_mutated_documents_parse_or_diagnose(seed, data):
    a = random_automaton(rng(seed), KINDS[seed % len(KINDS)], 2)
    lines = print_automaton(a).splitlines()
    i = data.draw(st.integers(0, len(lines) - 1))
    junk = data.draw(st.sampled_from(["", "9", "x", "end", "{", "0.0.9", "states -1"]))
    lines[i] = junk if data.draw(st.booleans()) else lines[i] + " " + junk
    try:
        parse_automaton("\n".join(lines))
    except OmegaError:
        pass


def test_alternating_round_trip():
    delta = {(0, 0): f_and(("q", 0), ("q", 1)), (0, 1): f_or(("q", 1), ("1",)), (1, 0): ("q", 1)}
    a = AlternatingAutomaton("01", 2, f_or(("q", 0), ("q", 1)), delta, Acceptance.buchi([1]))
    assert parse_alternating(print_alternating(a)) == a


def test_game_round_trip():
    r = rng(3)
    for _ in range(20):
        g = random_game(r, 5)
        text = print_game(g)
        assert print_game(parse_game(text)) == text


# ---------------------------------------------------------------------------
# command line


def run_cli(args, stdin=None, capsys=None):
    if stdin is not None:
        import io
        sys.stdin = io.StringIO(stdin)
    try:
        code = main(args)
    finally:
        sys.stdin = sys.__stdin__
    return code


def test_cli_member_and_exit_codes(capsys):
    f = str(DATA / "zeros_buchi.aut")
    assert run_cli(["member", f, "1;0"]) == 0
    assert capsys.readouterr().out == "yes\n"
    assert run_cli(["member", f, ";0 1"]) == 1
    assert capsys.readouterr().out == "no\n"
    assert run_cli(["member", f, "0;"]) == 2


def test_cli_equiv_prints_witness(capsys):
    assert run_cli(["equiv", str(DATA / "zeros_buchi.aut"), str(DATA / "zeros_muller.aut")]) == 0
    capsys.readouterr()
    assert run_cli(["equiv", str(DATA / "zeros_buchi.aut"), str(DATA / "zeros_complement.aut")]) == 1
    out = capsys.readouterr().out.splitlines()
    assert out[0] == "no"
    w = parse_lasso(out[1])
    a = parse_automaton((DATA / "zeros_buchi.aut").read_text())
    b = parse_automaton((DATA / "zeros_complement.aut").read_text())
    assert accepts_lasso(a, w) != accepts_lasso(b, w)


@pytest.mark.parametrize("method", ["rank", "ramsey", "runtree"])
def test_cli_complement(method, capsys):
    assert run_cli(["complement", "--method", method, str(DATA / "zeros_buchi.aut")]) == 0
    c = parse_automaton(capsys.readouterr().out)
    assert equivalent(c, parse_automaton((DATA / "zeros_complement.aut").read_text()))


def test_cli_dual_complement_of_alternating(capsys):
    assert run_cli(["complement", "--method", "dual", str(DATA / "zeros_buchi.aut")]) == 0
    d = parse_alternating(capsys.readouterr().out)
    assert d.acceptance.kind == "cobuchi"


def test_cli_reads_stdin(capsys):
    text = (DATA / "zeros_cobuchi.aut").read_text()
    assert run_cli(["parity-index"], stdin=text) == 0
    assert capsys.readouterr().out == "2\n"


@pytest.mark.parametrize("cmd", [
    ["union", "A", "A"], ["intersect", "A", "A"], ["degeneralize", "A"], ["convert", "--to", "parity", "A"],
    ["determinize", "A"], ["disambiguate", "A"], ["backward-det", "A"], ["remove-alternation", "A"],
    ["dualize", "A"], ["to-weak-alternating", "A"], ["reduce", "A"], ["towers", "C"],
    ["minimize-weak", "W"], ["minimize-weak", "N"], ["to-parity-lar", "M"],
])
def test_cli_transformations_run(cmd, capsys):
    files = {"A": DATA / "zeros_buchi.aut", "C": DATA / "zeros_cobuchi.aut", "M": DATA / "zeros_muller.aut",
             "W": DATA / "weak_some_one.aut", "N": DATA / "weak_nondet.aut"}
    args = [str(files[x]) if x in files else x for x in cmd]
    assert run_cli(args) == 0
    assert capsys.readouterr().out


def test_cli_simulate_and_backward_check(capsys):
    a = str(DATA / "zeros_buchi.aut")
    assert run_cli(["simulate", a, a, "--kind", "delayed"]) == 0
    assert run_cli(["check-backward-det", str(DATA / "zeros_backward.aut")]) == 0
    assert run_cli(["check-backward-det", a]) == 1


def test_cli_ltl_and_games(capsys):
    assert run_cli(["ltl2aut", "F G !p0"]) == 0
    a = parse_automaton(capsys.readouterr().out)
    assert accepts_lasso(a, LassoWord(["{p0}"], ["{}"]))
    assert run_cli(["solve-game", str(DATA / "game3.txt")]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[0] == "win0 0 1 2"
    assert "0:2" in out[2]


def test_console_script_errors_exit_2(tmp_path):
    bad = tmp_path / "bad.aut"
    bad.write_text("alphabet 0 1\nstates 1\n")
    env = dict(os.environ)
    res = subprocess.run([sys.executable, "-m", "omegakit.cli", "empty", str(bad)],
                         capture_output=True, text=True, env=env)
    assert res.returncode == 2
    assert "omegakit:" in res.stderr
