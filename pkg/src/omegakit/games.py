"""Parity games on finite graphs, simulation relations between Buchi
automata, and quotients by mutual simulation.

Zero wins an infinite play when the least priority seen infinitely often
is even; a player who cannot move loses.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import NamedTuple

from .core import Acceptance, Automaton, OmegaError, complete, equivalence_witness, sccs


class Game:
    def __init__(self, num_vertices: int, owner0, edges, priority, names=None):
        self.num_vertices = num_vertices
        self.owner0 = frozenset(owner0)
        self.edges = frozenset(edges)
        self.priority = dict(priority)
        self.names = names
        for v in self.owner0:
            if not 0 <= v < num_vertices:
                raise OmegaError(f"undeclared vertex {v}")
        for u, v in self.edges:
            if not (0 <= u < num_vertices and 0 <= v < num_vertices):
                raise OmegaError(f"edge ({u}, {v}) leaves the vertex set")
        for v in range(num_vertices):
            p = self.priority.get(v)
            if p is None or p < 0:
                raise OmegaError(f"vertex {v} needs a natural priority")
        self.succ = [[] for _ in range(num_vertices)]
        self.pred = [[] for _ in range(num_vertices)]
        for u, v in sorted(self.edges):
            self.succ[u].append(v)
            self.pred[v].append(u)

    def owner(self, v: int) -> int:
        return 0 if v in self.owner0 else 1

    def __repr__(self):
        return f"Game({self.num_vertices} vertices, {len(self.edges)} edges)"


class Solution(NamedTuple):
    win0: frozenset
    win1: frozenset
    strategy0: dict
    strategy1: dict

    def winner(self, v: int) -> int:
        return 0 if v in self.win0 else 1


def attractor(g: Game, target, player: int, within) -> tuple[set, dict]:
    """Vertices in ``within`` from which ``player`` can force a visit to
    ``target``, with an attracting move for the player's own vertices."""
    within = set(within)
    attr = set(target) & within
    strat: dict = {}
    count = {}
    for v in within:
        if v not in attr:
            count[v] = sum(1 for w in g.succ[v] if w in within)
    dq = deque(sorted(attr))
    while dq:
        w = dq.popleft()
        for v in g.pred[w]:
            if v not in within or v in attr:
                continue
            if g.owner(v) == player:
                attr.add(v)
                strat[v] = w
                dq.append(v)
            else:
                count[v] -= 1
                if count[v] == 0:
                    attr.add(v)
                    dq.append(v)
    return attr, strat


def _zielonka(g: Game, verts: frozenset):
    """Returns (W0, W1, sigma0, sigma1) for the subgame on ``verts``; every
    vertex there has a successor inside."""
    if not verts:
        return set(), set(), {}, {}
    p = min(g.priority[v] for v in verts)
    alpha = p % 2
    top = {v for v in verts if g.priority[v] == p}
    a, sa = attractor(g, top, alpha, verts)
    w = _zielonka(g, frozenset(verts - a))
    wa, wb = (w[0], w[1]) if alpha == 0 else (w[1], w[0])
    sig_a, sig_b = (w[2], w[3]) if alpha == 0 else (w[3], w[2])
    if not wb:
        win_a = set(verts)
        strat_a = dict(sig_a)
        strat_a.update(sa)
        for v in top:
            if g.owner(v) == alpha:
                strat_a[v] = next(x for x in g.succ[v] if x in verts)
        strat_b: dict = {}
        win_b: set = set()
    else:
        b, sb = attractor(g, wb, 1 - alpha, verts)
        w2 = _zielonka(g, frozenset(verts - b))
        wa2, wb2 = (w2[0], w2[1]) if alpha == 0 else (w2[1], w2[0])
        sa2, sb2 = (w2[2], w2[3]) if alpha == 0 else (w2[3], w2[2])
        win_a = wa2
        strat_a = dict(sa2)
        win_b = set(b) | wb2
        strat_b = dict(sb2)
        strat_b.update({v: x for v, x in sig_b.items() if v in wb})
        strat_b.update(sb)
    if alpha == 0:
        return win_a, win_b, strat_a, strat_b
    return win_b, win_a, strat_b, strat_a


def solve_parity(g: Game) -> Solution:
    """Winning regions and uniform positional winning strategies."""
    n = g.num_vertices
    # dead ends: route them to fresh sinks won by the opponent
    sink0, sink1 = n, n + 1
    succ = [list(s) for s in g.succ] + [[sink0], [sink1]]
    owner0 = set(g.owner0) | {sink0}
    prio = dict(g.priority)
    prio[sink0], prio[sink1] = 0, 1
    for v in range(n):
        if not succ[v]:
            succ[v] = [sink1] if v in owner0 else [sink0]
    ext = Game(n + 2, owner0, [(u, v) for u in range(n + 2) for v in succ[u]], prio)
    w0, w1, s0, s1 = _zielonka(ext, frozenset(range(n + 2)))
    real = set(range(n))

    def clean(s):
        return {v: x for v, x in s.items() if v in real and x in real}

    return Solution(frozenset(w0 & real), frozenset(w1 & real), clean(s0), clean(s1))


def strategy_wins(g: Game, region, strategy: dict, player: int) -> bool:
    """Check that fixing ``strategy`` wins every play from ``region`` for
    ``player`` by solving the remaining one-player game."""
    region = set(region)
    for v in region:
        if g.owner(v) == player:
            w = strategy.get(v)
            if w is None or (v, w) not in g.edges or w not in region:
                return False
        else:
            if any(w not in region for w in g.succ[v]):
                return False

    def moves(v):
        return [strategy[v]] if g.owner(v) == player else g.succ[v]

    # the opponent wins iff some cycle has a least priority of its parity
    prios = sorted({g.priority[v] for v in region if g.priority[v] % 2 != player})
    for p in prios:
        sub = {v for v in region if g.priority[v] >= p}
        for comp in sccs(sorted(sub), lambda v: [w for w in moves(v) if w in sub]):
            cs = set(comp)
            if not any(g.priority[v] == p for v in cs):
                continue
            if len(cs) > 1 or any(w == comp[0] for w in moves(comp[0])):
                return False
    return True


def embed_regular_winning(g: Game, coloring: dict, cond: Automaton) -> tuple[Game, dict]:
    """Product of ``g`` with a deterministic parity automaton reading the
    colors of visited vertices.  Returns the product game and the map from
    each original vertex to its product start vertex ``(v, q after c(v))``.
    The original priorities are ignored."""
    if not cond.is_deterministic:
        raise OmegaError("condition automaton must be forward deterministic")
    if cond.acceptance.kind != "parity" or cond.acceptance.on_transitions:
        raise OmegaError("condition automaton must use a state-based parity condition")
    cond = complete(cond)
    (q0,) = tuple(cond.initial)
    prio = cond.acceptance.priority

    def step(q, v):
        (q2,) = cond.succ[(q, cond.alphabet.index(coloring[v]))]
        return q2

    ids: dict = {}
    order = []
    start = {}
    for v in range(g.num_vertices):
        node = (v, step(q0, v))
        start[v] = node
        if node not in ids:
            ids[node] = len(ids)
            order.append(node)
    i = 0
    edges = []
    while i < len(order):
        v, q = order[i]
        for w in g.succ[v]:
            node = (w, step(q, w))
            if node not in ids:
                ids[node] = len(ids)
                order.append(node)
            edges.append((ids[(v, q)], ids[node]))
        i += 1
    owner0 = [ids[x] for x in order if x[0] in g.owner0]
    priority = {ids[x]: prio[x[1]] for x in order}
    prod = Game(len(order), owner0, edges, priority, names=order)
    return prod, {v: ids[start[v]] for v in start}


# ---------------------------------------------------------------------------
# simulation


@dataclass(frozen=True)
class Simulation:
    kind: str  # "direct" or "delayed"
    relation: frozenset  # pairs (p, q): q simulates p
    verdict: bool  # every initial state of a is simulated by one of b
    left: Automaton
    right: Automaton

    def __contains__(self, pair) -> bool:
        return pair in self.relation


def _require_buchi(*auts):
    for a in auts:
        if a.acceptance.kind != "buchi" or a.acceptance.on_transitions:
            raise OmegaError("state-based Buchi automata required")
    if len({a.alphabet for a in auts}) != 1:
        raise OmegaError("alphabets differ")


def _verdict(a: Automaton, b: Automaton, rel) -> bool:
    return all(any((p, q) in rel for q in b.initial) for p in a.initial)


def direct_simulation(a: Automaton, b: Automaton) -> Simulation:
    """Greatest relation where ``q`` matches every move of ``p`` step by
    step and is accepting whenever ``p`` is."""
    _require_buchi(a, b)
    fa, fb = a.acceptance.data, b.acceptance.data
    m = len(a.alphabet)
    rel = {(p, q) for p in a.states for q in b.states if p not in fa or q in fb}
    changed = True
    while changed:
        changed = False
        for p, q in sorted(rel):
            ok = all(
                any((p2, q2) in rel for q2 in b.succ.get((q, c), ()))
                for c in range(m) for p2 in a.succ.get((p, c), ())
            )
            if not ok:
                rel.discard((p, q))
                changed = True
    rel = frozenset(rel)
    return Simulation("direct", rel, _verdict(a, b, rel), a, b)


def delayed_game(a: Automaton, b: Automaton) -> tuple[Game, dict]:
    """Game for delayed simulation.  Spoiler (One) moves the pebble on
    ``a``, Duplicator (Zero) answers on ``b``; the pending bit records an
    accepting visit of Spoiler not yet matched by Duplicator.  Pending
    positions get priority 1, clear ones 0 and Duplicator's positions 2.
    Returns the game and the map from ``(p, q)`` to its start vertex."""
    _require_buchi(a, b)
    fa, fb = a.acceptance.data, b.acceptance.data
    m = len(a.alphabet)

    def pending(bit, p, q):
        return int((bit or p in fa) and q not in fb)

    ids: dict = {}
    order = []

    def vid(x):
        if x not in ids:
            ids[x] = len(ids)
            order.append(x)
        return ids[x]

    start = {}
    for p in a.states:
        for q in b.states:
            start[(p, q)] = vid(("S", p, q, pending(0, p, q)))
    edges = []
    i = 0
    while i < len(order):
        x = order[i]
        i += 1
        if x[0] == "S":
            _, p, q, bit = x
            for c in range(m):
                for p2 in a.succ.get((p, c), ()):
                    edges.append((ids[x], vid(("D", p2, q, c, bit))))
        else:
            _, p2, q, c, bit = x
            for q2 in b.succ.get((q, c), ()):
                edges.append((ids[x], vid(("S", p2, q2, pending(bit, p2, q2)))))
    owner0 = [ids[x] for x in order if x[0] == "D"]
    prio = {ids[x]: (2 if x[0] == "D" else x[3]) for x in order}
    return Game(len(order), owner0, edges, prio, names=order), start


def delayed_simulation(a: Automaton, b: Automaton) -> Simulation:
    """``(p, q)`` is related iff Duplicator wins the delayed game from
    there: each accepting visit of Spoiler is answered by an accepting
    visit of Duplicator in the same or a later round."""
    g, start = delayed_game(a, b)
    sol = solve_parity(g)
    rel = frozenset(pq for pq, v in start.items() if v in sol.win0)
    return Simulation("delayed", rel, _verdict(a, b, rel), a, b)


def simulates(a: Automaton, b: Automaton, kind: str = "direct") -> bool:
    """Whether ``b`` simulates ``a``; implies ``L(a) <= L(b)``."""
    if kind == "direct":
        return direct_simulation(a, b).verdict
    if kind == "delayed":
        return delayed_simulation(a, b).verdict
    raise OmegaError(f"unknown simulation kind {kind!r}")


def mutual_classes(sim: Simulation) -> list[frozenset]:
    """Classes of mutual simulation, ordered by least member."""
    a = sim.left
    rel = sim.relation
    seen = set()
    out = []
    for p in a.states:
        if p in seen:
            continue
        cls = frozenset(q for q in a.states if (p, q) in rel and (q, p) in rel) | {p}
        seen |= cls
        out.append(cls)
    return out


def quotient(a: Automaton, sim: Simulation, validate: bool = True) -> Automaton:
    """Merge mutually similar states.  A class is accepting iff it contains
    an accepting state.  With ``validate`` the result is checked for
    equivalence and a failing class is reported."""
    if not isinstance(sim, Simulation) or sim.left is not a or sim.right is not a:
        raise OmegaError("quotient needs a simulation of the automaton with itself from this module")
    classes = mutual_classes(sim)
    cid = {q: i for i, c in enumerate(classes) for q in c}
    trans = {(cid[p], c, cid[q]) for p, c, q in a.transitions}
    init = {cid[q] for q in a.initial}
    acc = {cid[q] for q in a.acceptance.data}
    out = Automaton(a.alphabet, len(classes), init, trans, Acceptance.buchi(acc))
    if validate:
        w = equivalence_witness(a, out)
        if w is not None:
            merged = [sorted(c) for c in classes if len(c) > 1]
            raise OmegaError(f"quotient changes the language on {w}; merged classes {merged}")
    return out


def reduce(a: Automaton, kind: str = "delayed") -> Automaton:
    """Quotient by mutual simulation of the requested kind."""
    sim = direct_simulation(a, a) if kind == "direct" else delayed_simulation(a, a)
    return quotient(a, sim)
