"""Run DAGs, canonical ranks, and complementation of Buchi automata by
ranks and by the two-sided automaton congruence."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .core import (Acceptance, Automaton, LassoWord, OmegaError, reachable, sccs)

INF = "inf"  # rank of B-recurring vertices; compared only by equality


def _require_buchi(aut: Automaton):
    if aut.acceptance.kind != "buchi" or aut.acceptance.on_transitions:
        raise OmegaError("state-based Buchi automaton required")


# ---------------------------------------------------------------------------
# leveled DAGs


@dataclass(frozen=True)
class LeveledDag:
    """Ultimately periodic leveled DAG.

    ``levels[i]`` lists the vertex names on level ``i``; ``edges[i]`` holds
    pairs ``(x, y)`` from level ``i`` to the next level, where the level
    after the last one is ``prefix_len``.  ``initial`` tags level-0
    vertices and ``buchi[i]`` tags vertices on level ``i``.
    """

    levels: tuple
    edges: tuple
    prefix_len: int
    initial: frozenset = frozenset()
    buchi: tuple = ()

    def __post_init__(self):
        if len(self.levels) != len(self.edges) or not 0 <= self.prefix_len < len(self.levels):
            raise OmegaError("need at least one periodic level and one edge set per level")
        for i, es in enumerate(self.edges):
            nxt = set(self.levels[self.next_level(i)])
            here = set(self.levels[i])
            for x, y in es:
                if x not in here or y not in nxt:
                    raise OmegaError(f"edge {(x, y)} does not join level {i} to its successor")
        if not self.buchi:
            object.__setattr__(self, "buchi", tuple(frozenset() for _ in self.levels))

    @property
    def period_len(self) -> int:
        return len(self.levels) - self.prefix_len

    def next_level(self, i: int) -> int:
        return i + 1 if i + 1 < len(self.levels) else self.prefix_len

    @property
    def width(self) -> int:
        return max((len(lv) for lv in self.levels), default=0)

    def vertices(self) -> list:
        return [(i, x) for i, lv in enumerate(self.levels) for x in lv]

    def successors(self, v) -> list:
        i, x = v
        j = self.next_level(i)
        return [(j, y) for (x2, y) in sorted(self.edges[i]) if x2 == x]

    def is_buchi(self, v) -> bool:
        return v[1] in self.buchi[v[0]]


def run_dag(aut: Automaton, w: LassoWord) -> LeveledDag:
    """Part of the run DAG reachable from the initial states, folded into
    an ultimately periodic DAG whose period is a multiple of ``|v|``."""
    _require_buchi(aut)
    u, v = aut.word_indices(w.prefix), aut.word_indices(w.period)
    b = aut.acceptance.data
    levels = [frozenset(aut.initial)]
    letters = []
    seen = {}
    pos = 0
    while True:
        if pos >= len(u) and (pos - len(u)) % len(v) == 0:
            key = levels[-1]
            if key in seen:
                start = seen[key]
                break
            seen[key] = pos
        a = u[pos] if pos < len(u) else v[(pos - len(u)) % len(v)]
        letters.append(a)
        levels.append(aut.post(levels[-1], a))
        pos += 1
    levels.pop()
    edges = []
    for i, lv in enumerate(levels):
        a = letters[i]
        edges.append(frozenset((p, q) for p in lv for q in aut.successors(p, a)))
    lv = tuple(tuple(sorted(x)) for x in levels)
    return LeveledDag(lv, tuple(edges), start, frozenset(aut.initial),
                      tuple(frozenset(x & b) for x in levels))


def _graph(dag: LeveledDag, alive: set):
    return lambda v: [s for s in dag.successors(v) if s in alive]


def finitary(dag: LeveledDag, alive: set | None = None) -> set:
    """Vertices with finitely many descendants: on the folded graph, those
    that cannot reach a cycle."""
    if alive is None:
        alive = set(dag.vertices())
    adj = _graph(dag, alive)
    on_cycle = set()
    for comp in sccs(sorted(alive), adj):
        if len(comp) > 1 or comp[0] in adj(comp[0]):
            on_cycle |= set(comp)
    infinite = set()
    rev: dict = {}
    for v in alive:
        for s in adj(v):
            rev.setdefault(s, []).append(v)
    todo = list(on_cycle)
    infinite |= on_cycle
    while todo:
        x = todo.pop()
        for p in rev.get(x, ()):
            if p not in infinite:
                infinite.add(p)
                todo.append(p)
    return alive - infinite


def canonical_ranks(dag: LeveledDag) -> dict:
    """Peel the DAG: finitary vertices of the remainder get ``2i``, then
    B-free ones ``2i+1``; what survives gets ``INF``."""
    alive = set(dag.vertices())
    rank: dict = {}
    i = 0
    while True:
        fin = finitary(dag, alive)
        for v in fin:
            rank[v] = 2 * i
        alive -= fin
        has_b = reachable([v for v in alive if dag.is_buchi(v)],
                          _reverse(dag, alive))
        free = alive - has_b
        for v in free:
            rank[v] = 2 * i + 1
        alive -= free
        if not fin and not free:
            break
        i += 1
    for v in alive:
        rank[v] = INF
    return rank


def _reverse(dag: LeveledDag, alive: set):
    rev: dict = {}
    for v in alive:
        for s in dag.successors(v):
            if s in alive:
                rev.setdefault(s, []).append(v)
    return lambda x: rev.get(x, ())


def check_rank_properties(dag: LeveledDag, rank: dict) -> tuple[bool, bool]:
    """Whether ``rank`` satisfies the local successor rule and whether
    every even-ranked vertex has finitely many descendants of its rank."""
    p1 = True
    for v in dag.vertices():
        succ = dag.successors(v)
        vals = [rank[s] for s in succ]
        if not vals:
            m = 0
        elif INF in vals:
            m = INF
        else:
            m = max(vals)
        if m == INF:
            want = INF
        elif dag.is_buchi(v) and m % 2:
            want = m + 1
        else:
            want = m
        if rank[v] != want:
            p1 = False
            break
    p2 = True
    for r in {x for x in rank.values() if x != INF and x % 2 == 0}:
        same = {v for v, x in rank.items() if x == r}
        if finitary(dag, same) != same:
            p2 = False
            break
    return p1, p2


def accepts_by_ranks(dag: LeveledDag, rank: dict) -> bool:
    return any(rank[(0, q)] == INF for q in dag.levels[0] if q in dag.initial)


# ---------------------------------------------------------------------------
# rank-based complementation


def complement_rank(aut: Automaton, max_rank: int | None = None) -> Automaton:
    """Buchi automaton for the complement.  States ``(f, O)``: ``f`` ranks
    the current level of the reachable run DAG with values below ``2n``,
    never increasing along edges and never odd on accepting states; ``O``
    holds the even-ranked vertices whose same-rank descendants are being
    watched until they die out."""
    _require_buchi(aut)
    n = aut.num_states
    top = 2 * n - 1 if max_rank is None else max_rank
    b = aut.acceptance.data
    m = len(aut.alphabet)

    def rankings(states, bound):
        st = sorted(states)
        opts = []
        for q in st:
            lim = bound.get(q, top)
            opts.append([r for r in range(lim + 1) if not (q in b and r % 2)])
        for vals in product(*opts):
            yield tuple(zip(st, vals))

    ids: dict = {}
    order: list = []

    def vid(x):
        if x not in ids:
            ids[x] = len(order)
            order.append(x)
        return ids[x]

    init = [vid((f, frozenset())) for f in rankings(aut.initial, {})]
    trans = set()
    k = 0
    while k < len(order):
        f, o = order[k]
        k += 1
        fd = dict(f)
        for a in range(m):
            bound: dict = {}
            for p, r in f:
                for q in aut.successors(p, a):
                    bound[q] = min(bound.get(q, top), r)
            post_o = {q for p in o for q in aut.successors(p, a)}
            for f2 in rankings(bound, bound):
                f2d = dict(f2)
                even = {q for q, r in f2 if r % 2 == 0}
                if o:
                    o2 = frozenset(q for q in post_o if q in even and _same_rank_parent(aut, a, o, fd, q, f2d))
                else:
                    o2 = frozenset(even)
                trans.add((ids[(f, o)], a, vid((f2, o2))))
    acc = {i for i, (f, o) in enumerate(order) if not o}
    return Automaton(aut.alphabet, len(order), init, trans, Acceptance.buchi(acc))


def _same_rank_parent(aut, a, o, fd, q, f2d) -> bool:
    return any(q in aut.successors(p, a) and fd[p] == f2d[q] for p in o)


# ---------------------------------------------------------------------------
# automaton congruence


def word_profile(aut: Automaton, word) -> tuple[frozenset, frozenset]:
    """``(reach, through)``: pairs ``(p, q)`` with a run from ``p`` to ``q``
    on ``word``, and those where some run also visits an accepting state
    (endpoints included)."""
    _require_buchi(aut)
    b = aut.acceptance.data
    idx = aut.word_indices(word) if word and isinstance(word[0], str) else tuple(word)
    reach, through = set(), set()
    for p in aut.states:
        cur = {(p, p in b)}
        for a in idx:
            nxt = set()
            for q, flag in cur:
                for q2 in aut.successors(q, a):
                    nxt.add((q2, flag or q2 in b))
            cur = nxt
        for q, flag in cur:
            reach.add((p, q))
            if flag:
                through.add((p, q))
    return frozenset(reach), frozenset(through)


def automaton_congruence(aut: Automaton, max_len: int) -> dict:
    """Classes of the two-sided automaton congruence restricted to nonempty
    words of length at most ``max_len``: profile -> list of words."""
    out: dict = {}
    syms = aut.alphabet.symbols
    for length in range(1, max_len + 1):
        for word in product(range(len(syms)), repeat=length):
            out.setdefault(word_profile(aut, word), []).append(tuple(syms[a] for a in word))
    return out


def _profile_mul(x, y):
    rx, tx = x
    ry, ty = y
    reach = set()
    through = set()
    for p, q in rx:
        for q2, r in ry:
            if q == q2:
                reach.add((p, r))
                if (p, q) in tx or (q, r) in ty:
                    through.add((p, r))
    return frozenset(reach), frozenset(through)


def congruence_classes(aut: Automaton) -> list:
    """All profiles of nonempty words, closed under concatenation."""
    letters = [word_profile(aut, (a,)) for a in range(len(aut.alphabet))]
    seen = set(letters)
    todo = list(dict.fromkeys(letters))
    while todo:
        x = todo.pop()
        for y in letters:
            z = _profile_mul(x, y)
            if z not in seen:
                seen.add(z)
                todo.append(z)
    return sorted(seen, key=lambda p: (sorted(p[0]), sorted(p[1])))


# ---------------------------------------------------------------------------
# complementation by saturation


def subset_automaton(aut: Automaton) -> tuple[list, dict]:
    """Deterministic subset construction: reachable subsets (in discovery
    order) and their transitions ``(subset, a) -> subset``."""
    start = frozenset(aut.initial)
    order = [start]
    seen = {start}
    delta = {}
    k = 0
    while k < len(order):
        s = order[k]
        k += 1
        for a in range(len(aut.alphabet)):
            t = aut.post(s, a)
            delta[(s, a)] = t
            if t not in seen:
                seen.add(t)
                order.append(t)
    return order, delta


def saturation_sequences(aut: Automaton) -> list[tuple]:
    """Sequences ``sigma`` of disjoint state sets: for every pair of classes
    ``U``, ``V`` with ``U V = U``, ``V V = V`` and ``U V^omega`` rejected, the
    SCCs (in topological order) of the ``V``-reachability graph on the
    states reachable by ``U``."""
    _require_buchi(aut)
    classes = congruence_classes(aut)
    out = []
    seen = set()
    init = aut.initial
    for e in classes:
        if _profile_mul(e, e) != e:
            continue
        for s in classes:
            if _profile_mul(s, e) != s:
                continue
            pset = {q for p, q in s[0] if p in init}
            if any((q, q) in e[1] for q in pset):
                continue  # U V^omega is accepted
            comps = sccs(sorted(pset), lambda q: sorted(r for p, r in e[0] if p == q and r in pset))
            # sccs yields reverse topological order
            sigma = tuple(frozenset(c) for c in reversed(comps))
            if sigma not in seen:
                seen.add(sigma)
                out.append(sigma)
    return out


def block_automaton(aut: Automaton, sigma: tuple):
    """Deterministic automaton for ``V_sigma``: a state maps each automaton
    state ``q`` to the greatest block index ``i`` of a run from block ``i``
    to ``q``, and the greatest such index of a run that visited an
    accepting state (-1 for none).  Returns (start, step, final)."""
    b = aut.acceptance.data
    idx = {q: i for i, blk in enumerate(sigma) for q in blk}
    n = aut.num_states
    start = tuple((idx.get(q, -1), idx[q] if q in idx and q in b else -1) for q in range(n))

    def step(state, a):
        out = [[-1, -1] for _ in range(n)]
        for p in range(n):
            f, g = state[p]
            if f < 0:
                continue
            for q in aut.successors(p, a):
                g2 = f if q in b else g
                out[q][0] = max(out[q][0], f)
                out[q][1] = max(out[q][1], g2)
        return tuple(map(tuple, out))

    def final(state):
        for q in range(n):
            f, g = state[q]
            if f < 0:
                continue
            if q not in idx or idx[q] < f or (g >= 0 and idx[q] <= g):
                return False
        return True

    return start, step, final


def complement_ramsey(aut: Automaton) -> Automaton:
    """Complement as the union over ``sigma`` of ``U_P(sigma) V_sigma^omega``.
    The prefix part is the subset construction; entering a block copy is
    allowed from subsets inside ``P(sigma)``; closing a block of ``V_sigma``
    returns to the block start through an accepting state."""
    _require_buchi(aut)
    m = len(aut.alphabet)
    subsets, delta = subset_automaton(aut)
    ids: dict = {}
    order: list = []

    def vid(x):
        if x not in ids:
            ids[x] = len(order)
            order.append(x)
        return ids[x]

    for s in subsets:
        vid(("U", s))
    trans = set()
    acc = set()
    for (s, a), t in delta.items():
        trans.add((ids[("U", s)], a, ids[("U", t)]))
    for k, sigma in enumerate(saturation_sequences(aut)):
        pset = frozenset().union(*sigma)
        start, step, final = block_automaton(aut, sigma)
        reset = vid(("R", k))
        acc.add(reset)
        sources = [ids[("U", s)] for s in subsets if s <= pset] + [reset]
        todo = [(src, start) for src in sources]
        seen = set()
        while todo:
            src, x = todo.pop()
            for a in range(m):
                y = step(x, a)
                trans.add((src, a, vid(("V", k, y))))
                if final(y):
                    trans.add((src, a, reset))
                if y not in seen:
                    seen.add(y)
                    todo.append((ids[("V", k, y)], y))
    init = [ids[("U", subsets[0])]]
    return Automaton(aut.alphabet, len(order), init, trans, Acceptance.buchi(acc))

