import pytest

from omegakit import Acceptance, Automaton, OmegaError, accepts_lasso, equivalent
from omegakit.core import automaton_sccs, classify_determinism, count_accepting_runs
from omegakit.determinize import (
    accepts_by_run_tree, complement_via_run_trees, determinize_history, determinize_weak,
    disambiguate, history_tree_valid, minimize_weak_det, HNode,
)
from oracles import brute_accepts, random_buchi, rng, suite

WORDS = suite()


def fin1():
    return Automaton("01", 2, [0], [(0, 0, 0), (0, 1, 0), (0, 0, 1), (1, 0, 1)], Acceptance.buchi([1]))


@pytest.mark.parametrize("seed", range(30))
def test_run_tree_acceptance_matches_membership(seed):
    r = rng(seed)
    a = random_buchi(r, r.randint(1, 3))
    for w in WORDS:
        assert accepts_by_run_tree(a, w) == brute_accepts(a, w)


@pytest.mark.parametrize("seed", range(30))
def test_disambiguation(seed):
    r = rng(seed)
    a = random_buchi(r, r.randint(1, 3 if seed % 3 == 0 else 2))
    d = disambiguate(a)
    assert equivalent(a, d)
    for w in WORDS:
        assert count_accepting_runs(d, w) == (1 if brute_accepts(a, w) else 0)


@pytest.mark.parametrize("seed", range(30))
def test_run_tree_complement(seed):
    r = rng(seed)
    a = random_buchi(r, r.randint(1, 3 if seed % 3 == 0 else 2))
    c = complement_via_run_trees(a)
    for w in WORDS:
        assert accepts_lasso(c, w) != brute_accepts(a, w)


def test_fin1_disambiguated_is_unambiguous():
    d = disambiguate(fin1())
    assert equivalent(d, fin1())
    for w in WORDS:
        assert count_accepting_runs(d, w) <= 1


# ---------------------------------------------------------------------------
# history trees


def test_history_tree_validity_rules():
    leaf = HNode(1, frozenset({1}), ())
    assert history_tree_valid(HNode(0, frozenset({0, 1}), (leaf,)))
    # a child may not carry the whole label of its parent
    assert not history_tree_valid(HNode(0, frozenset({1}), (leaf,)))
    # siblings must be disjoint
    other = HNode(2, frozenset({1, 2}), ())
    assert not history_tree_valid(HNode(0, frozenset({0, 1, 2}), (leaf, other)))


@pytest.mark.parametrize("seed", range(40))
def test_history_determinization(seed):
    r = rng(seed)
    n = r.randint(1, 3)
    a = random_buchi(r, n)
    d, trees = determinize_history(a, with_trees=True)
    kind = classify_determinism(d)
    assert kind.forward_deterministic and kind.forward_complete
    assert all(t is None or history_tree_valid(t) for t in trees)
    assert len(d.acceptance.pairs) <= 2 ** n - 1
    for w in WORDS:
        assert accepts_lasso(d, w) == brute_accepts(a, w)
    assert equivalent(a, d)


# ---------------------------------------------------------------------------
# deterministic weak automata


def random_det_weak(r, n):
    trans = [(p, c, r.randrange(n)) for p in range(n) for c in range(2)]
    a = Automaton("01", n, [0], trans)
    weak = set()
    for comp in automaton_sccs(a):
        if r.random() < 0.5:
            weak |= comp
    return a.with_acceptance(Acceptance.weak(weak))


@pytest.mark.parametrize("seed", range(40))
def test_weak_minimization(seed):
    r = rng(seed)
    a = random_det_weak(r, r.randint(1, 4))
    m = minimize_weak_det(a)
    assert m.num_states <= a.num_states
    assert equivalent(a, m)
    assert minimize_weak_det(m) == m


def test_weak_minimization_merges_duplicate_states():
    a = Automaton("01", 3, [0], [(0, 0, 0), (0, 1, 1), (1, 0, 2), (1, 1, 1), (2, 0, 1), (2, 1, 2)],
                  Acceptance.weak([1, 2]))
    assert minimize_weak_det(a).num_states == 2


@pytest.mark.parametrize("seed", range(30))
def test_weak_determinization(seed):
    r = rng(seed)
    n = r.randint(1, 3)
    trans = [(p, c, q) for p in range(n) for c in range(2) for q in range(n) if r.random() < 0.4]
    g = Automaton("01", n, [0], trans)
    weak = set()
    for comp in automaton_sccs(g):
        if r.random() < 0.5:
            weak |= comp
    a = g.with_acceptance(Acceptance.weak(weak))
    try:
        d = determinize_weak(a)
    except OmegaError:
        return
    # the empty language comes out as the automaton without states
    assert d.num_states == 0 or classify_determinism(d).forward_deterministic
    assert equivalent(a, d)


def test_weak_determinization_rejects_eventually_zero():
    weak_fin1 = fin1().with_acceptance(Acceptance.weak([1]))
    with pytest.raises(OmegaError):
        determinize_weak(weak_fin1)
