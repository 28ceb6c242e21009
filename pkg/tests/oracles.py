"""Brute-force reference implementations and random instance generators.

Everything here is written without the library's graph and acceptance
machinery so the tests compare two independent computations.
"""

from __future__ import annotations

import os
import random
from itertools import chain, combinations, product

from omegakit import Acceptance, Automaton, LassoWord, all_lassos

SEED = int(os.environ.get("OMEGAKIT_SEED", "20261016"))
SYMS = ("0", "1")


def rng(salt: int = 0) -> random.Random:
    return random.Random(SEED * 1000003 + salt)


def suite(max_prefix: int = 3, max_period: int = 3, syms=SYMS) -> list[LassoWord]:
    return list(all_lassos(syms, max_prefix, max_period))


def subsets(xs):
    xs = list(xs)
    return chain.from_iterable(combinations(xs, k) for k in range(len(xs) + 1))


# ---------------------------------------------------------------------------
# random automata


def random_transitions(r: random.Random, n: int, m: int, density: float = 0.45):
    trans = [(p, a, q) for p in range(n) for a in range(m) for q in range(n) if r.random() < density]
    return trans


def random_buchi(r: random.Random, n: int, m: int = 2, density: float = 0.45) -> Automaton:
    init = [q for q in range(n) if r.random() < 0.4] or [0]
    acc = [q for q in range(n) if r.random() < 0.4]
    return Automaton(SYMS[:m], n, init, random_transitions(r, n, m, density), Acceptance.buchi(acc))


def random_acceptance(r: random.Random, kind: str, n: int, trans=None) -> Acceptance:
    elems = list(trans) if trans is not None else list(range(n))
    on_t = trans is not None

    def some():
        return [x for x in elems if r.random() < 0.4]

    if kind == "trivial":
        return Acceptance.trivial()
    if kind == "buchi":
        return Acceptance.buchi(some(), on_transitions=on_t)
    if kind == "cobuchi":
        return Acceptance.cobuchi(some(), on_transitions=on_t)
    if kind == "genbuchi":
        return Acceptance.genbuchi([some() for _ in range(r.randint(0, 2))], on_transitions=on_t)
    if kind == "parity":
        return Acceptance.parity({x: r.randint(0, 3) for x in elems}, on_transitions=on_t)
    if kind == "rabin":
        return Acceptance.rabin([(some(), some()) for _ in range(r.randint(1, 2))], on_transitions=on_t)
    if kind == "streett":
        return Acceptance.streett([(some(), some()) for _ in range(r.randint(1, 2))], on_transitions=on_t)
    if kind == "muller":
        fam = [s for s in subsets(elems) if s and r.random() < 0.3]
        return Acceptance.muller(fam, on_transitions=on_t)
    raise ValueError(kind)


def random_automaton(r: random.Random, kind: str, n: int, m: int = 2, on_transitions=False) -> Automaton:
    trans = random_transitions(r, n, m)
    init = [q for q in range(n) if r.random() < 0.4] or [0]
    acc = random_acceptance(r, kind, n, trans if on_transitions else None)
    return Automaton(SYMS[:m], n, init, trans, acc)


def random_deterministic(r: random.Random, n: int, m: int = 2) -> Automaton:
    trans = [(p, a, r.randrange(n)) for p in range(n) for a in range(m)]
    fam = [s for s in subsets(range(n)) if s and r.random() < 0.35]
    return Automaton(SYMS[:m], n, [0], trans, Acceptance.muller(fam))


# ---------------------------------------------------------------------------
# acceptance by brute force


def holds(acc: Acceptance, inf: frozenset) -> bool:
    """Direct reading of each recurrence condition."""
    k, d = acc.kind, acc.data
    if k == "trivial":
        return True
    if k == "buchi":
        return any(x in inf for x in d)
    if k in ("cobuchi", "weak"):
        return all(x in d for x in inf)
    if k == "genbuchi":
        return all(any(x in inf for x in s) for s in d)
    if k == "parity":
        return min(dict(d)[x] for x in inf) % 2 == 0
    if k == "rabin":
        return any(all(x not in inf for x in l) and any(x in inf for x in u) for l, u in d)
    if k == "streett":
        return all(any(x in inf for x in g) or all(x not in inf for x in r) for r, g in d)
    if k == "muller":
        return any(frozenset(s) == inf for s in d)
    raise ValueError(k)


def product_edges(aut: Automaton, w: LassoWord):
    """Edges ``((q, i), (q2, j), transition)`` of the automaton run over the
    positions of ``u v``, reachable from the initial states."""
    word = [aut.alphabet.symbols.index(s) for s in w.prefix + w.period]
    p0 = len(w.prefix)
    nxt = [i + 1 for i in range(len(word))]
    nxt[-1] = p0
    seen = {(q, 0) for q in aut.initial}
    todo = list(seen)
    out = []
    while todo:
        q, i = todo.pop()
        a = word[i]
        for (p, b, q2) in aut.transitions:
            if p == q and b == a:
                node = (q2, nxt[i])
                out.append(((q, i), node, (p, b, q2)))
                if node not in seen:
                    seen.add(node)
                    todo.append(node)
    return out, seen


def _closure(nodes, edges):
    reach = {v: {v} for v in nodes}
    changed = True
    while changed:
        changed = False
        for x, y, _ in edges:
            new = reach[y] - reach[x]
            if new:
                reach[x] |= new
                changed = True
    return reach


def cycle_inf_sets(aut: Automaton, w: LassoWord):
    """Every set of elements that some run on ``w`` visits infinitely often.

    An infinite run eventually stays in one strongly connected part of the
    product and can be made to cover exactly the elements of that part's
    internal edges, so it suffices to range over element subsets ``S`` and
    look for a strongly connected set of edges covering exactly ``S``.
    """
    edges, nodes = product_edges(aut, w)
    on_t = aut.acceptance.on_transitions

    def elem(e):
        return e[2] if on_t else e[0][0]

    universe = sorted({elem(e) for e in edges})
    found = set()
    for s in subsets(universe):
        s = frozenset(s)
        sub = [e for e in edges if elem(e) in s]
        reach = _closure(nodes, sub)
        # group the edges of sub by the strongly connected part they lie in
        groups: dict = {}
        for e in sub:
            x, y, _ = e
            if x in reach[y]:
                key = frozenset(v for v in reach[x] if x in reach[v])
                groups.setdefault(key, set()).add(elem(e))
        if any(g == s for g in groups.values()):
            found.add(s)
    return found


def brute_accepts(aut: Automaton, w: LassoWord) -> bool:
    return any(holds(aut.acceptance, s) for s in cycle_inf_sets(aut, w))


def brute_language(aut: Automaton, words) -> list[bool]:
    return [brute_accepts(aut, w) for w in words]


def brute_run_count(aut: Automaton, w: LassoWord) -> int:
    """Accepting runs on ``w``, capped at 2.

    Counts run prefixes ending in a product node from which an accepting
    continuation exists.  Two accepting runs that differ do so within
    ``N^2`` steps, where ``N`` is the number of product nodes.
    """
    edges, nodes = product_edges(aut, w)
    good_sets = [s for s in cycle_inf_sets(aut, w) if holds(aut.acceptance, s)]
    if not good_sets:
        return 0
    live = _live(aut, w, edges, nodes)
    cur = {(q, 0): 1 for q in aut.initial if (q, 0) in live}
    if not cur:
        return 0
    for _ in range(len(nodes) ** 2 + 1):
        if sum(cur.values()) >= 2:
            return 2
        nxt: dict = {}
        for x, y, _ in edges:
            if x in cur and y in live:
                nxt[y] = min(2, nxt.get(y, 0) + cur[x])
        cur = nxt
    return min(2, sum(cur.values()))


def _live(aut, w, edges, nodes):
    """Product nodes from which some accepting run continues."""
    live = set()
    for v in nodes:
        q, i = v
        if i < len(w.prefix):
            continue
        # a run from v on the periodic tail: rotate the word so that v is a start
        k = i - len(w.prefix)
        shifted = LassoWord((), w.period[k:] + w.period[:k])
        if brute_accepts(aut.with_initial([q]), shifted):
            live.add(v)
    # prefix nodes are live when some successor is live
    changed = True
    while changed:
        changed = False
        for x, y, _ in edges:
            if y in live and x not in live:
                live.add(x)
                changed = True
    return live


def deterministic_run_accepts(aut: Automaton, w: LassoWord) -> bool:
    """Simulate the unique run of a complete deterministic automaton until
    a (state, period position) pair repeats."""
    (q,) = aut.initial
    sym = aut.alphabet.symbols
    step = {(p, a): r for (p, a, r) in aut.transitions}
    for s in w.prefix:
        q = step[(q, sym.index(s))]
    seen = {}
    trail = []
    k = 0
    while (q, k) not in seen:
        seen[(q, k)] = len(trail)
        a = sym.index(w.period[k])
        r = step[(q, a)]
        trail.append((q, a, r))
        q, k = r, (k + 1) % len(w.period)
    loop = trail[seen[(q, k)]:]
    inf = frozenset(loop) if aut.acceptance.on_transitions else frozenset(t[0] for t in loop)
    return holds(aut.acceptance, inf)


# ---------------------------------------------------------------------------
# leveled DAGs


def brute_finitary(dag) -> set:
    """Vertices with finitely many descendants, by unrolling: a vertex is
    finitary iff no path of length ``|V|`` starts at it."""
    verts = dag.vertices()
    depth = {v: 0 for v in verts}
    for _ in range(len(verts) + 1):
        depth = {v: 1 + max((depth[s] for s in dag.successors(v)), default=-1) for v in verts}
    return {v for v in verts if depth[v] < len(verts)}


def random_dag(r: random.Random, width: int, max_len: int = 4, buchi: bool = False):
    from omegakit.complement import LeveledDag

    length = r.randint(1, max_len)
    prefix = r.randrange(length)
    levels = tuple(tuple(range(r.randint(1, width))) for _ in range(length))
    edges = []
    for i in range(length):
        j = i + 1 if i + 1 < length else prefix
        edges.append(frozenset((x, y) for x in levels[i] for y in levels[j] if r.random() < 0.4))
    bs = tuple(frozenset(x for x in lv if r.random() < 0.4) for lv in levels) if buchi else ()
    return LeveledDag(levels, tuple(edges), prefix, frozenset(levels[0]), bs)


# ---------------------------------------------------------------------------
# parity games


def brute_parity_winners(g) -> frozenset:
    """Zero's winning region by enumerating positional strategies of both
    players.  Zero wins from ``v`` iff some Zero strategy beats every One
    strategy; once both are fixed the play from ``v`` is a lasso."""
    n = g.num_vertices
    zero = [v for v in range(n) if v in g.owner0 and g.succ[v]]
    one = [v for v in range(n) if v not in g.owner0 and g.succ[v]]

    def play(s0, s1, v):
        seen = {}
        path = []
        while v not in seen:
            seen[v] = len(path)
            path.append(v)
            nxt = s0.get(v) if v in g.owner0 else s1.get(v)
            if nxt is None:  # stuck player loses
                return v not in g.owner0
            v = nxt
        return min(g.priority[x] for x in path[seen[v]:]) % 2 == 0

    zs = [dict(zip(zero, c)) for c in product(*(g.succ[v] for v in zero))]
    os_ = [dict(zip(one, c)) for c in product(*(g.succ[v] for v in one))]
    return frozenset(v for v in range(n) if any(all(play(s0, s1, v) for s1 in os_) for s0 in zs))


def random_game(r: random.Random, n: int, priorities: int = 3, out: int = 2):
    from omegakit.games import Game

    owner0 = [v for v in range(n) if r.random() < 0.5]
    edges = set()
    for v in range(n):
        for _ in range(r.randint(0 if r.random() < 0.1 else 1, out)):
            edges.add((v, r.randrange(n)))
    return Game(n, owner0, edges, {v: r.randrange(priorities) for v in range(n)})


# ---------------------------------------------------------------------------
# LTL over lassos


def ltl_holds(f, w: LassoWord, i: int = 0, memo=None) -> bool:
    """Truth of a formula tuple at position ``i`` of a lasso whose letters
    are valuations ``{p0,p2}``.  Positions beyond the prefix fold into one
    period, so temporal operators only need to look ``|u| + |v|`` ahead."""
    from omegakit.ltl import letter_atoms

    if memo is None:
        memo = {}
    u, v = len(w.prefix), len(w.period)
    total = u + v

    def fold(k):
        return k if k < total else u + (k - u) % v

    def ev(g, k):
        k = fold(k)
        key = (g, k)
        if key in memo:
            return memo[key]
        op = g[0]
        if op == "true":
            res = True
        elif op == "false":
            res = False
        elif op == "ap":
            res = g[1] in letter_atoms(w.letter(k))
        elif op == "nap":
            res = g[1] not in letter_atoms(w.letter(k))
        elif op == "not":
            res = not ev(g[1], k)
        elif op == "and":
            res = ev(g[1], k) and ev(g[2], k)
        elif op == "or":
            res = ev(g[1], k) or ev(g[2], k)
        elif op == "X":
            res = ev(g[1], k + 1)
        elif op == "F":
            res = any(ev(g[1], k + j) for j in range(total + 1))
        elif op == "G":
            res = all(ev(g[1], k + j) for j in range(total + 1))
        elif op == "U":
            res = False
            for j in range(total + 1):
                if ev(g[2], k + j):
                    res = True
                    break
                if not ev(g[1], k + j):
                    break
        elif op == "R":
            res = True
            for j in range(total + 1):
                if not ev(g[2], k + j):
                    res = False
                    break
                if ev(g[1], k + j):
                    break
        else:
            raise ValueError(op)
        memo[key] = res
        return res

    return ev(f, i)


def random_ltl(r: random.Random, atoms: int = 2, temporal: int = 3):
    """Random formula with at most ``temporal`` temporal operators."""
    budget = [temporal]

    def gen(depth):
        if depth == 0 or r.random() < 0.25:
            return ("ap", r.randrange(atoms)) if r.random() < 0.9 else (("true",), ("false",))[r.randrange(2)]
        choices = ["not", "and", "or"]
        if budget[0] > 0:
            choices += ["X", "F", "G", "U", "R"]
        op = r.choice(choices)
        if op in ("X", "F", "G", "U", "R"):
            budget[0] -= 1
        if op in ("not", "X", "F", "G"):
            return (op, gen(depth - 1))
        return (op, gen(depth - 1), gen(depth - 1))

    return gen(4)


# ---------------------------------------------------------------------------
# alternating automata


def random_formula(r, n, depth=2):
    from omegakit.alternating import f_and, f_or

    x = r.random()
    if depth == 0 or x < 0.45:
        if x < 0.06:
            return ("1",)
        if x < 0.1:
            return ("0",)
        return ("q", r.randrange(n))
    join = f_and if r.random() < 0.5 else f_or
    return join(random_formula(r, n, depth - 1), random_formula(r, n, depth - 1))


def random_alternating(r, n, kind="buchi"):
    from omegakit.alternating import AlternatingAutomaton

    delta = {(q, c): random_formula(r, n) for q in range(n) for c in range(2)}
    init = random_formula(r, n, 1)
    acc = [q for q in range(n) if r.random() < 0.5]
    cond = Acceptance.buchi(acc) if kind == "buchi" else Acceptance.cobuchi(acc)
    return AlternatingAutomaton("01", n, init, delta, cond)
