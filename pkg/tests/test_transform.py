from math import factorial

import pytest

from omegakit import Acceptance, Automaton, OmegaError, accepts_lasso, equivalent
from omegakit.transform import (
    MARK, check_weak, convert_condition, degeneralize, intersect_buchi, lar_frame, lar_step,
    muller_to_parity_indexed, muller_to_parity_lar, reachable_part, to_state_based, union,
    used_priorities_per_component,
)
from omegakit.core import classify_determinism
from oracles import (
    brute_accepts, random_automaton, random_buchi, random_deterministic, rng, suite,
)

LONG = suite(4, 4)
WORDS = suite()

CONVERSIONS = [
    ("trivial", "buchi"), ("buchi", "parity"), ("buchi", "genbuchi"), ("buchi", "muller"),
    ("cobuchi", "parity"), ("cobuchi", "rabin"), ("cobuchi", "muller"), ("parity", "rabin"),
    ("parity", "streett"), ("parity", "muller"), ("rabin", "muller"), ("streett", "muller"),
    ("genbuchi", "muller"), ("genbuchi", "buchi"), ("buchi", "streett"), ("trivial", "muller"),
]


def same_on(a, b, words):
    return all(accepts_lasso(a, w) == accepts_lasso(b, w) for w in words)


@pytest.mark.parametrize("src,dst", CONVERSIONS)
def test_conversions_preserve_language(src, dst):
    r = rng(hash((src, dst)) % 997)
    for _ in range(12):
        a = random_automaton(r, src, r.randint(1, 3))
        b = convert_condition(a, dst)
        assert b.acceptance.kind == dst
        assert same_on(a, b, LONG)


@pytest.mark.parametrize("dst", ["buchi", "cobuchi", "parity", "muller"])
def test_weak_conversions_check_the_set(dst):
    good = Automaton("01", 2, [0], [(0, 0, 0), (0, 1, 1), (1, 0, 1), (1, 1, 1)], Acceptance.weak([1]))
    assert same_on(good, convert_condition(good, dst), WORDS)
    bad = Automaton("01", 2, [0], [(0, 0, 1), (1, 0, 0)], Acceptance.weak([0]))
    with pytest.raises(OmegaError):
        convert_condition(bad, dst)


def test_unreachable_conversion_rejected():
    a = random_automaton(rng(1), "muller", 2)
    with pytest.raises(OmegaError):
        convert_condition(a, "buchi")


@pytest.mark.parametrize("kind", ["buchi", "cobuchi", "genbuchi", "parity", "rabin", "streett", "muller"])
def test_state_based_view_preserves_language(kind):
    r = rng(len(kind))
    for _ in range(10):
        a = random_automaton(r, kind, 2, on_transitions=True)
        b = to_state_based(a)
        assert not b.acceptance.on_transitions
        for w in suite(2, 3):
            assert accepts_lasso(b, w) == brute_accepts(a, w)


@pytest.mark.parametrize("seed", range(30))
def test_degeneralization_size_and_language(seed):
    r = rng(seed)
    a = random_automaton(r, "genbuchi", r.randint(1, 3))
    k = len(a.acceptance.data)
    d = degeneralize(a)
    assert d.num_states <= max(k, 1) * a.num_states
    assert same_on(a, d, LONG)


@pytest.mark.parametrize("seed", range(30))
def test_union_and_intersection(seed):
    r = rng(seed)
    a, b, c = (random_buchi(r, r.randint(1, 3)) for _ in range(3))
    u = union(a, b)
    i = intersect_buchi(a, b)
    for w in WORDS:
        x, y = accepts_lasso(a, w), accepts_lasso(b, w)
        assert accepts_lasso(u, w) == (x or y)
        assert accepts_lasso(i, w) == (x and y)
    assert equivalent(i, intersect_buchi(b, a))
    assert equivalent(union(union(a, b), c), union(a, union(b, c)))


@pytest.mark.parametrize("kind", ["parity", "rabin", "muller"])
def test_union_of_other_conditions(kind):
    r = rng(len(kind))
    for _ in range(5):
        a = random_automaton(r, kind, 2)
        b = random_automaton(r, kind, 2)
        u = union(a, b)
        for w in WORDS:
            assert accepts_lasso(u, w) == (accepts_lasso(a, w) or accepts_lasso(b, w))


def test_union_needs_matching_conditions():
    r = rng(5)
    with pytest.raises(OmegaError):
        union(random_automaton(r, "parity", 2), random_automaton(r, "rabin", 2))


def test_lar_step_moves_state_to_end():
    assert lar_step((MARK, 0), 1) == (0, MARK, 1)
    assert lar_step((0, MARK, 1), 0) == (MARK, 1, 0)
    assert lar_frame((2, MARK, 1, 0)) == {1, 0}


@pytest.mark.parametrize("seed", range(40))
def test_lar_size_language_and_frames(seed):
    r = rng(seed)
    n = r.randint(1, 3)
    a = random_automaton(r, "muller", n)
    p, records = muller_to_parity_lar(a, with_records=True)
    assert p.num_states <= factorial(n + 1)
    assert same_on(a, p, WORDS)
    if classify_determinism(a).forward_deterministic:
        check_frames(a, p, records)


def check_frames(a, p, records):
    """On the unique run, the largest frame recurring in the record run is the
    set of states the original run visits infinitely often."""
    sym = a.alphabet.symbols
    step_a = {(x, c): y for x, c, y in a.transitions}
    step_p = {(x, c): y for x, c, y in p.transitions}
    for w in WORDS:
        (q,) = a.initial
        (s,) = p.initial
        trail = []
        ok = True
        for i in range(len(w.prefix) + 8 * len(w.period) * (a.num_states + 1)):
            c = sym.index(w.letter(i))
            if (q, c) not in step_a:
                ok = False
                break
            q, s = step_a[(q, c)], step_p[(s, c)]
            trail.append((q, s))
        if not ok:
            continue
        tail = trail[len(trail) // 2:]
        inf = {x for x, _ in tail}
        frames = [lar_frame(records[y]) for _, y in tail]
        assert max(frames, key=len) == inf


@pytest.mark.parametrize("seed", range(30))
def test_indexed_lar_uses_tower_many_priorities(seed):
    from omegakit.structure import tower_profile

    a = random_deterministic(rng(seed), 3)
    p = muller_to_parity_indexed(a)
    assert same_on(a, p, WORDS)
    used = used_priorities_per_component(p)
    tallest = max((h for h, _ in tower_profile(a)), default=0)
    assert all(u <= max(tallest, 1) for u in used)


def test_check_weak_and_reachable_part():
    a = Automaton("01", 3, [0], [(0, 0, 0), (0, 1, 1), (1, 1, 1), (2, 0, 2)], Acceptance.weak([1]))
    check_weak(a)
    b = reachable_part(a)
    assert b.num_states == 2
    assert equivalent(a, b)
