"""The lift construction on leveled DAGs and backward determinization of
Buchi automata through canonical ranks.

Both read a DAG from the far end: the labels of a level are a function of
the labels of the next level and the slice in between.  On an ultimately
periodic DAG the labeling is the unique one that repeats over the period
and meets every recurrence set of the lift.
"""

from __future__ import annotations

from itertools import product
from typing import NamedTuple

from .complement import INF, LeveledDag
from .core import Acceptance, Automaton, OmegaError, intersection_witness

# ---------------------------------------------------------------------------
# numeric lift


def lift_values(m: dict) -> tuple[dict, int | None]:
    """Apply the lift to pre-values ``m`` (``-1`` for vertices without
    successors).  Returns the values and the critical value, None when no
    vertex lacks successors."""
    finite = {x for x in m.values() if x != INF}
    if -1 not in finite:
        return dict(m), None
    c = 0
    while c in finite:
        c += 1
    return {v: (x + 1 if x != INF and x < c else x) for v, x in m.items()}, c


def fired_indices(values: dict, crit: int | None, k: int) -> frozenset:
    """Indices ``i < k`` whose recurrence set contains the transition:
    ``i`` is not a value on the upper level, or some vertex was lifted to
    a value of at least ``i`` (``i`` is at most the critical value)."""
    present = set(values.values())
    return frozenset(i for i in range(k) if i not in present or (crit is not None and i <= crit))


def lift_slice(upper, succ: dict, lower_values: dict, weak: bool = False) -> tuple[dict, int | None]:
    """Values of the upper vertices given the values on the lower level.
    ``succ[v]`` lists the lower successors of ``v``.  With ``weak`` the
    maximum is replaced by the minimum, which singles out vertices with a
    descendant lacking successors."""
    m = {}
    for v in upper:
        vals = [lower_values[s] for s in succ.get(v, ())]
        if not vals:
            m[v] = -1
        elif weak:
            fin = [x for x in vals if x != INF]
            m[v] = min(fin) if fin else INF
        else:
            m[v] = INF if INF in vals else max(vals)
    return lift_values(m)


def _slice_succ(dag: LeveledDag, i: int) -> dict:
    out: dict = {}
    for x, y in dag.edges[i]:
        out.setdefault(x, []).append(y)
    return out


def _backward_pass(dag: LeveledDag, start: dict, step, levels) -> tuple[dict, list]:
    """Run ``step`` backwards over ``levels`` (descending), starting from the
    labels of the level after the last one listed."""
    cur = start
    labels = {}
    fired = []
    for i in levels:
        cur, f = step(i, cur)
        labels[i] = cur
        fired.append(f)
    return labels, fired


def _periodic_solutions(dag: LeveledDag, candidates, step, k: int):
    p0, last = dag.prefix_len, len(dag.levels) - 1
    period = range(last, p0 - 1, -1)
    out = []
    for cand in candidates:
        labels, fired = _backward_pass(dag, cand, step, period)
        if labels[p0] != cand:
            continue
        hit = frozenset().union(*fired)
        if all(i in hit for i in range(k)):
            out.append(labels)
    return out


def extinction_ranks(dag: LeveledDag, weak: bool = False) -> dict:
    """Extinction rank of every vertex, ``INF`` for infinitary ones (with
    ``weak``: for vertices without a descendant that lacks successors).
    Computed by the numeric lift as the unique periodic labeling meeting
    every recurrence set."""
    k = max(dag.width, 1)

    def step(i, lower):
        return lift_slice(dag.levels[i], _slice_succ(dag, i), lower, weak)

    def step_f(i, lower):
        vals, crit = step(i, lower)
        return vals, fired_indices(vals, crit, k)

    p0 = dag.prefix_len
    lv = dag.levels[p0]
    cands = [dict(zip(lv, c)) for c in product(list(range(k)) + [INF], repeat=len(lv))]
    sols = _periodic_solutions(dag, cands, step_f, k)
    if len(sols) != 1:
        raise OmegaError(f"lift has {len(sols)} periodic labelings")
    labels = dict(sols[0])
    cur = labels[p0]
    for i in range(p0 - 1, -1, -1):
        cur, _ = step(i, cur)
        labels[i] = cur
    return {(i, x): labels[i][x] for i in range(len(dag.levels)) for x in dag.levels[i]}


def critical_values(dag: LeveledDag, ranks: dict) -> dict:
    """Critical value of every level that has one."""
    out = {}
    for i, lv in enumerate(dag.levels):
        j = dag.next_level(i)
        lower = {x: ranks[(j, x)] for x in dag.levels[j]}
        _, crit = lift_slice(lv, _slice_succ(dag, i), lower)
        if crit is not None:
            out[i] = crit
    return out


# ---------------------------------------------------------------------------
# sequence form of the lift


class ExtinctionState(NamedTuple):
    """Finitary vertices of one level grouped into nonempty blocks by
    extinction rank; ``values[i]`` is the rank shared by ``blocks[i]``,
    strictly increasing."""

    blocks: tuple = ()
    values: tuple = ()

    def ranks(self) -> dict:
        return {v: r for b, r in zip(self.blocks, self.values) for v in b}

    @classmethod
    def from_ranks(cls, ranks: dict) -> "ExtinctionState":
        by: dict = {}
        for v, r in ranks.items():
            if r != INF:
                by.setdefault(r, set()).add(v)
        vals = tuple(sorted(by))
        return cls(tuple(frozenset(by[r]) for r in vals), vals)


def lift_step(state: ExtinctionState, upper, succ: dict, k: int | None = None):
    """Read one slice backwards.  ``upper`` lists the upper vertices and
    ``succ[v]`` their lower successors; successors outside every block are
    infinitary.  Returns the state of the upper level and the indices below
    ``k`` (default: the number of upper vertices) whose recurrence sets
    contain this transition."""
    lower = state.ranks()
    vals = {}
    for v in upper:
        ss = succ.get(v, ())
        vals[v] = max((lower.get(s, INF) for s in ss), key=_rank_key, default=-1)
    vals, crit = lift_values(vals)
    if k is None:
        k = len(upper)
    return ExtinctionState.from_ranks(vals), fired_indices(vals, crit, k)


def _rank_key(x):
    return float("inf") if x == INF else x


def finitary_by_lift(dag: LeveledDag) -> set:
    """Finitary vertices: those occurring in the blocks of the unique
    accepting run of the lift."""
    k = max(dag.width, 1)

    def step(i, lower):
        st, f = lift_step(lower, dag.levels[i], _slice_succ(dag, i), k)
        return st, f

    p0 = dag.prefix_len
    lv = dag.levels[p0]
    cands = [ExtinctionState.from_ranks(dict(zip(lv, c)))
             for c in product(list(range(k)) + [INF], repeat=len(lv))]
    sols = _periodic_solutions(dag, cands, step, k)
    if len(sols) != 1:
        raise OmegaError(f"lift has {len(sols)} periodic runs")
    labels = dict(sols[0])
    cur = labels[p0]
    for i in range(p0 - 1, -1, -1):
        cur, _ = step(i, cur)
        labels[i] = cur
    return {(i, x) for i, st in labels.items() for b in st.blocks for x in b}


# ---------------------------------------------------------------------------
# backward determinization


class RankLabel(NamedTuple):
    """Rank of a state on the current level, and the lift value used to
    verify the rank (always 0 for rank 1)."""

    rank: object
    lift: int


def _back(aut: Automaton, label: tuple, a: int):
    """Predecessor labeling for symbol ``a`` of the next-level labeling
    ``label``, with the fired recurrence indices of both lifts, or None
    when no admissible predecessor exists."""
    n = aut.num_states
    b = aut.acceptance.data
    ranks = []
    for q in range(n):
        ss = aut.successors(q, a)
        vals = [label[s].rank for s in ss]
        if not vals:
            mx = 0
        elif INF in vals:
            mx = INF
        else:
            mx = max(vals)
        r = mx + 1 if mx != INF and q in b and mx % 2 else mx
        if r != INF and r >= 2 * n:
            return None
        ranks.append(r)
    even_m, odd_m = {}, {}
    for q in range(n):
        r = ranks[q]
        same = [s for s in aut.successors(q, a) if label[s].rank == r]
        if r != INF and r % 2 == 0:
            even_m[q] = max((label[s].lift for s in same), default=-1)
        elif r == 1:
            continue
        else:
            if r == INF:
                target = any(s in b for s in same)
            else:
                target = any(label[s].rank == r - 1 for s in aut.successors(q, a))
            odd_m[q] = -1 if target else min(label[s].lift for s in same)
    ev, ev_c = lift_values(even_m)
    od, od_c = lift_values(odd_m)
    if any(x >= n for x in ev.values()) or any(x >= n for x in od.values()):
        return None
    lifts = {**ev, **od}
    out = tuple(RankLabel(ranks[q], lifts.get(q, 0)) for q in range(n))
    fired = (fired_indices(ev, ev_c, n), fired_indices(od, od_c, n))
    return out, fired


def _labelings(n: int):
    opts = []
    for r in list(range(2 * n)) + [INF]:
        if r == 1:
            opts.append(RankLabel(r, 0))
        else:
            opts.extend(RankLabel(r, e) for e in range(n))
    return product(opts, repeat=n)


def backward_determinize(aut: Automaton, with_labels: bool = False):
    """Backward deterministic generalized transition-Buchi automaton for
    the same language.

    A state labels every automaton state with a candidate canonical rank
    and a lift value.  Reading a symbol backwards fixes the ranks by the
    successor rule and the lift values by two lifts: the maximum lift over
    same-rank edges between even ranks, whose vertices must all be
    finitary, and the minimum lift over same-rank edges between odd ranks
    above 1 and ``INF``, whose vertices must reach a witness (a successor
    one rank lower, or an accepting ``INF`` successor).  One recurrence set
    per lift index; states giving ``INF`` to an initial state are initial.
    """
    if aut.acceptance.kind != "buchi" or aut.acceptance.on_transitions:
        raise OmegaError("state-based Buchi automaton required")
    n = aut.num_states
    m = len(aut.alphabet)
    if n == 0:
        return Automaton(aut.alphabet, 0, [], [], Acceptance.genbuchi([], on_transitions=True))
    back: dict = {}
    alive = set()
    for lab in _labelings(n):
        row = []
        for a in range(m):
            res = _back(aut, lab, a)
            if res is None:
                break
            row.append(res)
        else:
            back[lab] = row
            alive.add(lab)
    changed = True
    while changed:
        changed = False
        for lab in list(alive):
            if any(back[lab][a][0] not in alive for a in range(m)):
                alive.discard(lab)
                changed = True
    order = sorted(alive, key=_label_key)
    ids = {lab: i for i, lab in enumerate(order)}
    trans = set()
    sets = [set() for _ in range(2 * n)]
    for lab in order:
        for a in range(m):
            prev, (fe, fo) = back[lab][a]
            t = (ids[prev], a, ids[lab])
            trans.add(t)
            for i in fe:
                sets[i].add(t)
            for i in fo:
                sets[n + i].add(t)
    init = [ids[lab] for lab in order if any(lab[q].rank == INF for q in aut.initial)]
    out = Automaton(aut.alphabet, len(order), init, trans, Acceptance.genbuchi(sets, on_transitions=True))
    return (out, order) if with_labels else out


def _label_key(lab):
    return tuple((2 ** 31 if x.rank == INF else x.rank, x.lift) for x in lab)


def backward_inclusion_counterexample(x: Automaton, y: Automaton):
    """A lasso in ``L(x) - L(y)`` for a backward deterministic ``y`` (not
    re-checked): ``y`` started from its non-initial states recognizes the
    complement of ``L(y)``."""
    yc = y.with_initial(set(y.states) - set(y.initial))
    return intersection_witness(x, yc)


def backward_complement(y: Automaton) -> Automaton:
    return y.with_initial(set(y.states) - set(y.initial))


__all__ = [
    "lift_values", "fired_indices", "lift_slice", "extinction_ranks", "critical_values",
    "ExtinctionState", "lift_step", "finitary_by_lift", "RankLabel", "backward_determinize",
    "backward_inclusion_counterexample", "backward_complement"
]
