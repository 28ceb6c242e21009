import pytest
from hypothesis import given, settings, strategies as st

from omegakit import Acceptance, Automaton, LassoWord, OmegaError, accepts_lasso, is_empty
from omegakit.core import (
    all_lassos, check_backward_deterministic, check_run, classify_determinism, complete,
    count_accepting_runs, equivalence_witness, equivalent, includes, satisfies, trim,
)
from oracles import (
    SYMS, brute_accepts, brute_run_count, deterministic_run_accepts, holds, random_automaton,
    random_buchi, random_deterministic, rng, subsets, suite,
)

KINDS = ["trivial", "buchi", "cobuchi", "genbuchi", "parity", "rabin", "streett", "muller"]
SHORT = suite(2, 2)


def fin1_buchi():
    return Automaton("01", 2, [0], [(0, 0, 0), (0, 1, 0), (0, 0, 1), (1, 0, 1)], Acceptance.buchi([1]))


# ---------------------------------------------------------------------------
# words and alphabets


def test_lasso_from_strings_and_lists_agree():
    assert LassoWord("01", "1") == LassoWord(["0", "1"], ["1"])
    assert LassoWord("", "0").prefix == ()


def test_empty_period_rejected():
    with pytest.raises(OmegaError):
        LassoWord("0", "")


def test_all_lassos_count():
    # prefixes: 1 + 2 + 4 + 8; periods: 2 + 4 + 8
    assert len(list(all_lassos("01", 3, 3))) == 15 * 14


def test_duplicate_symbols_rejected():
    with pytest.raises(OmegaError):
        Automaton(["a", "a"], 1, [0], [])


def test_undeclared_state_rejected():
    with pytest.raises(OmegaError, match="undeclared state"):
        Automaton("01", 2, [0], [(0, 0, 5)])


# ---------------------------------------------------------------------------
# acceptance conditions


@pytest.mark.parametrize("seed", range(40))
def test_satisfies_matches_direct_reading(seed):
    r = rng(seed)
    kind = KINDS[seed % len(KINDS)]
    acc = random_acceptance_on_states(r, kind)
    for inf in subsets(range(3)):
        if inf:
            assert satisfies(acc, inf) == holds(acc, frozenset(inf))


def random_acceptance_on_states(r, kind):
    from oracles import random_acceptance
    return random_acceptance(r, kind, 3)


def test_parity_requires_every_priority():
    with pytest.raises(OmegaError):
        Automaton("01", 2, [0], [(0, 0, 1)], Acceptance.parity({0: 1}))


# ---------------------------------------------------------------------------
# membership


def test_fin1_membership():
    a = fin1_buchi()
    assert accepts_lasso(a, LassoWord("1101", "0"))
    assert not accepts_lasso(a, LassoWord("", "01"))
    assert not accepts_lasso(a, LassoWord("0", "1"))


@pytest.mark.parametrize("kind", KINDS)
@pytest.mark.parametrize("on_t", [False, True])
def test_membership_matches_brute_force(kind, on_t):
    r = rng(hash((kind, on_t)) % 1000)
    for _ in range(6):
        n = r.randint(1, 2 if on_t else 3)
        a = random_automaton(r, kind, n, on_transitions=on_t)
        for w in SHORT:
            assert accepts_lasso(a, w) == brute_accepts(a, w), (a, w)


@pytest.mark.parametrize("seed", range(15))
def test_deterministic_membership_follows_the_unique_run(seed):
    a = random_deterministic(rng(seed), 3)
    for w in suite():
        assert accepts_lasso(a, w) == deterministic_run_accepts(a, w)


lasso_parts = st.lists(st.sampled_from(SYMS), max_size=3)


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(0, 10 ** 6), u=lasso_parts, v=lasso_parts.filter(bool),
       rot=st.integers(0, 5), k=st.integers(1, 3), shift=st.integers(0, 3))
def test_membership_invariant_under_normalization(seed, u, v, rot, k, shift):
    a = random_automaton(rng(seed), KINDS[seed % len(KINDS)], 3)
    w = LassoWord(u, v)
    base = accepts_lasso(a, w)
    assert accepts_lasso(a, w.unrolled(k)) == base
    assert accepts_lasso(a, w.shifted(shift)) == base
    whole = LassoWord(tuple(u) + tuple(v) * k, v)
    assert accepts_lasso(a, whole) == base
    rot %= len(v)
    # rotating the period is the same word once rot letters move into the prefix
    rotated = LassoWord(tuple(u) + tuple(v[:rot]), tuple(v[rot:]) + tuple(v[:rot]))
    assert accepts_lasso(a, rotated) == base


@pytest.mark.parametrize("seed", range(20))
def test_witness_run_replays(seed):
    r = rng(seed)
    a = random_automaton(r, KINDS[seed % len(KINDS)], 3)
    for w in SHORT:
        ok, run = accepts_lasso(a, w, witness=True)
        if ok:
            assert check_run(a, run, w)
        else:
            assert run is None


# ---------------------------------------------------------------------------
# emptiness and inclusion


@pytest.mark.parametrize("seed", range(25))
def test_emptiness_matches_lasso_enumeration(seed):
    r = rng(seed)
    a = random_automaton(r, KINDS[seed % len(KINDS)], r.randint(1, 3))
    empty, w = is_empty(a, witness=True)
    # the product factor for these conditions is small; lassos of size 3
    # suffice for 3 states over 2 letters in practice, and a witness is
    # always checked directly
    if empty:
        assert w is None
        assert not any(brute_accepts(a, x) for x in suite(3, 3))
    else:
        assert brute_accepts(a, w)


def test_no_transitions_is_empty():
    assert is_empty(Automaton("01", 2, [0], [], Acceptance.buchi([0])))


@pytest.mark.parametrize("seed", range(25))
def test_inclusion_witnesses_are_genuine(seed):
    r = rng(seed)
    x = random_buchi(r, 2)
    y = random_automaton(r, KINDS[seed % len(KINDS)], 2)
    w = equivalence_witness(x, y)
    words = suite()
    same = all(accepts_lasso(x, v) == accepts_lasso(y, v) for v in words)
    if w is None:
        assert same
        assert equivalent(x, y)
    else:
        assert accepts_lasso(x, w) != accepts_lasso(y, w)
    if includes(x, y):
        assert all(accepts_lasso(y, v) for v in words if accepts_lasso(x, v))


def test_complete_and_trim_preserve_language():
    r = rng(7)
    for _ in range(20):
        a = random_buchi(r, 3)
        c = complete(a)
        assert classify_determinism(c).forward_complete
        assert equivalent(a, c)
        assert equivalent(a, trim(a))


# ---------------------------------------------------------------------------
# run counting and backward determinism


@pytest.mark.parametrize("seed", range(20))
def test_run_count_matches_prefix_enumeration(seed):
    a = random_automaton(rng(seed), ["buchi", "genbuchi", "parity", "muller"][seed % 4], 2)
    for w in SHORT:
        assert count_accepting_runs(a, w) == brute_run_count(a, w), w


def fin1_backward():
    trans = [(0, 0, 0), (0, 1, 0), (0, 1, 1), (1, 0, 1), (2, 0, 3), (3, 1, 2), (2, 0, 2), (3, 1, 3)]
    return Automaton("01", 4, [0, 1], trans, Acceptance.buchi([1, 3]))


def test_backward_deterministic_examples():
    assert check_backward_deterministic(fin1_backward())
    assert not check_backward_deterministic(fin1_buchi())


@pytest.mark.parametrize("seed", range(30))
def test_backward_determinism_matches_run_counting(seed):
    r = rng(seed)
    n = r.randint(1, 2)
    # backward complete and deterministic graphs: one predecessor per (state, letter)
    trans = [(r.randrange(n), a, q) for q in range(n) for a in range(2)]
    acc = Acceptance.buchi([q for q in range(n) if r.random() < 0.5])
    a = Automaton("01", n, range(n), trans, acc)
    expect = all(brute_run_count(a, w) == 1 for w in suite(2, 2 * n))
    assert check_backward_deterministic(a) == expect
