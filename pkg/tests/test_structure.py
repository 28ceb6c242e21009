from pathlib import Path

import pytest

from omegakit import Acceptance, Automaton, LassoWord, OmegaError, accepts_lasso, parse_automaton
from omegakit.core import automaton_sccs, complete, to_buchi
from omegakit.determinize import determinize_history, minimize_weak_det
from omegakit.structure import (
    frame_height, is_weak_recognizable, loop_sets, loop_sign, max_tower, parity_index, walls,
)
from omegakit.transform import muller_to_parity_indexed, muller_to_parity_lar
from oracles import holds, random_deterministic, rng, subsets

DATA = Path(__file__).parent / "data"


def fin1_det():
    """Deterministic automaton remembering the last letter; eventually only 0s."""
    return Automaton("01", 2, [0], [(0, 0, 0), (0, 1, 1), (1, 1, 1), (1, 0, 0)], Acceptance.muller([[0]]))


def strongly_connected(aut, states) -> bool:
    s = set(states)
    edges = {(p, q) for p, _, q in aut.transitions if p in s and q in s}
    if not edges:
        return False
    start = next(iter(s))
    for forward in (True, False):
        seen, todo = {start}, [start]
        while todo:
            p = todo.pop()
            for x, y in edges:
                a, b = (x, y) if forward else (y, x)
                if a == p and b not in seen:
                    seen.add(b)
                    todo.append(b)
        if seen != s:
            return False
    return True


def brute_height(aut) -> int:
    """Longest chain of nested state loops with alternating signs."""
    reach, todo = set(aut.initial), list(aut.initial)
    while todo:
        p = todo.pop()
        for x, _, y in aut.transitions:
            if x == p and y not in reach:
                reach.add(y)
                todo.append(y)
    loops = [frozenset(s) for s in subsets(sorted(reach)) if s and strongly_connected(aut, s)]
    sign = {c: holds(aut.acceptance, c) for c in loops}
    best = {}
    for c in sorted(loops, key=len):
        best[c] = 1 + max((best[d] for d in loops if d < c and sign[d] != sign[c]), default=0)
    return max(best.values(), default=0)


def test_fin1_loops_and_index():
    a = fin1_det()
    assert loop_sign(a, {0}) == "+"
    assert loop_sign(a, {0, 1}) == "-"
    assert max_tower(a).height == 2
    assert parity_index(a) == 2
    assert not is_weak_recognizable(a)
    assert set(loop_sets(a)) == {frozenset({0}), frozenset({1}), frozenset({0, 1})}


def test_fin1_from_files():
    for name in ("zeros_cobuchi.aut", "zeros_muller.aut"):
        assert parity_index(parse_automaton((DATA / name).read_text())) == 2


def test_not_a_loop_rejected():
    one_way = Automaton("01", 2, [0], [(0, 0, 0), (0, 1, 1), (1, 0, 1), (1, 1, 1)], Acceptance.buchi([0]))
    with pytest.raises(OmegaError):
        loop_sign(one_way, {0, 1})
    with pytest.raises(OmegaError):
        max_tower(parse_automaton((DATA / "zeros_buchi.aut").read_text()))


def test_small_cases():
    one = Automaton("01", 1, [0], [(0, 0, 0), (0, 1, 0)], Acceptance.buchi([0]))
    assert max_tower(one).height == 1 and parity_index(one) == 1
    assert walls(one) == {"+": 1, "-": 0}
    first_zero = Automaton("01", 3, [0], [(0, 0, 1), (0, 1, 2), (1, 0, 1), (1, 1, 1), (2, 0, 2), (2, 1, 2)],
                           Acceptance.buchi([1]))
    assert is_weak_recognizable(first_zero)
    weak = parse_automaton((DATA / "weak_some_one.aut").read_text())
    assert is_weak_recognizable(weak)


def test_two_component_wall():
    # a positive 0-loop that a 1 leaves for good
    a = Automaton("01", 2, [0], [(0, 0, 0), (0, 1, 1), (1, 0, 1), (1, 1, 1)], Acceptance.buchi([0]))
    assert walls(a) == {"+": 1, "-": 2}


@pytest.mark.parametrize("seed", range(40))
def test_height_matches_enumeration(seed):
    r = rng(seed)
    a = random_deterministic(r, r.randint(1, 4))
    assert max_tower(a).height == brute_height(a)


@pytest.mark.parametrize("seed", range(30))
def test_invariance_under_transformations(seed):
    r = rng(seed)
    a = random_deterministic(r, r.randint(1, 3))
    h, w = max_tower(a), walls(a)
    lar = muller_to_parity_lar(a)
    assert max_tower(lar) == h and walls(lar) == w
    indexed = muller_to_parity_indexed(a)
    assert max_tower(indexed).height == h.height
    hist = determinize_history(to_buchi(a))
    assert max_tower(hist).height == h.height
    assert walls(hist) == w


@pytest.mark.parametrize("seed", range(30))
def test_weak_minimization_keeps_index(seed):
    r = rng(seed)
    n = r.randint(1, 4)
    g = Automaton("01", n, [0], [(p, c, r.randrange(n)) for p in range(n) for c in range(2)])
    weak = set()
    for comp in automaton_sccs(g):
        if r.random() < 0.5:
            weak |= comp
    a = g.with_acceptance(Acceptance.weak(weak))
    m = minimize_weak_det(a)
    assert parity_index(a) <= 1
    if m.num_states:
        assert max_tower(complete(m)) == max_tower(a)


@pytest.mark.parametrize("seed", range(30))
def test_powers_of_a_period_label_a_loop(seed):
    """After ``u v^n`` some power of ``v^n`` comes back, and the sign of the
    loop it traces decides membership of ``u (v^n)^w``."""
    r = rng(seed)
    a = random_deterministic(r, r.randint(1, 3))
    n = a.num_states
    step = {(p, a.alphabet.symbols[c]): q for p, c, q in a.transitions}
    idx = {s: i for i, s in enumerate(a.alphabet.symbols)}
    for _ in range(8):
        u = "".join(r.choice("01") for _ in range(r.randint(0, 3)))
        v = "".join(r.choice("01") for _ in range(r.randint(1, 3)))
        (q,) = a.initial
        for c in u + v * n:
            q = step[(q, c)]
        start, path = q, []
        while True:
            for c in v * n:
                nxt = step[(q, c)]
                path.append((q, idx[c], nxt))
                q = nxt
            if q == start:
                break
        sign = loop_sign(a, frozenset(path))
        assert (sign == "+") == accepts_lasso(a, LassoWord(u + v * n, v * n))
        assert frame_height(a)(frozenset(path))[1] == sign
