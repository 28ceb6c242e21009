"""Alternating omega-automata.

Positive boolean formulas over states are tuples: ``("0",)``, ``("1",)``,
``("q", i)``, ``("and", f, ...)`` and ``("or", f, ...)``.  A missing
transition formula means ``0``.  Acceptance conditions refer to states.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import product

from .core import (Acceptance, Automaton, LassoWord, OmegaError, SymbolAlphabet, sccs)
from .games import Game, solve_parity
from .transform import lar_frame, lar_step

TRUE = ("1",)
FALSE = ("0",)


def f_and(*fs):
    parts = []
    for f in fs:
        if f == FALSE:
            return FALSE
        if f == TRUE:
            continue
        parts.extend(f[1:] if f[0] == "and" else (f,))
    if not parts:
        return TRUE
    return parts[0] if len(parts) == 1 else ("and",) + tuple(parts)


def f_or(*fs):
    parts = []
    for f in fs:
        if f == TRUE:
            return TRUE
        if f == FALSE:
            continue
        parts.extend(f[1:] if f[0] == "or" else (f,))
    if not parts:
        return FALSE
    return parts[0] if len(parts) == 1 else ("or",) + tuple(parts)


def f_dual(f):
    tag = f[0]
    if tag == "0":
        return TRUE
    if tag == "1":
        return FALSE
    if tag == "q":
        return f
    return ("or" if tag == "and" else "and",) + tuple(f_dual(g) for g in f[1:])


def f_states(f) -> set:
    if f[0] == "q":
        return {f[1]}
    out = set()
    for g in f[1:]:
        if isinstance(g, tuple):
            out |= f_states(g)
    return out


def f_eval(f, true_states) -> bool:
    tag = f[0]
    if tag == "1":
        return True
    if tag == "0":
        return False
    if tag == "q":
        return f[1] in true_states
    if tag == "and":
        return all(f_eval(g, true_states) for g in f[1:])
    return any(f_eval(g, true_states) for g in f[1:])


def f_subst(f, fn):
    """Replace each state atom ``q`` by ``fn(q)``."""
    tag = f[0]
    if tag in ("0", "1"):
        return f
    if tag == "q":
        return fn(f[1])
    parts = [f_subst(g, fn) for g in f[1:]]
    return f_and(*parts) if tag == "and" else f_or(*parts)


@lru_cache(maxsize=None)
def minimal_models(f) -> tuple:
    """Minimal sets of states satisfying ``f``, as sorted frozensets."""
    tag = f[0]
    if tag == "1":
        out = [frozenset()]
    elif tag == "0":
        out = []
    elif tag == "q":
        out = [frozenset([f[1]])]
    elif tag == "or":
        out = [m for g in f[1:] for m in minimal_models(g)]
    else:
        out = [frozenset()]
        for g in f[1:]:
            out = [x | y for x in out for y in minimal_models(g)]
    uniq = set(out)
    mins = [m for m in uniq if not any(o < m for o in uniq)]
    return tuple(sorted(mins, key=lambda s: (len(s), sorted(s))))


class AlternatingAutomaton:
    """Transition-controlled alternating automaton."""

    def __init__(self, alphabet, num_states: int, initial, delta: dict, acceptance: Acceptance):
        if not isinstance(alphabet, SymbolAlphabet):
            alphabet = SymbolAlphabet(alphabet)
        self.alphabet = alphabet
        self.num_states = num_states
        self.initial = initial
        self.delta = {}
        for (q, a), f in delta.items():
            if not 0 <= q < num_states:
                raise OmegaError(f"undeclared state {q}")
            if isinstance(a, str):
                a = alphabet.index(a)
            self.delta[(q, a)] = f
        for f in [initial, *self.delta.values()]:
            bad = [q for q in f_states(f) if not 0 <= q < num_states]
            if bad:
                raise OmegaError(f"undeclared state {bad[0]}")
        if acceptance.on_transitions:
            raise OmegaError("alternating automata use state-based acceptance")
        for x in acceptance.elements():
            if not 0 <= x < num_states:
                raise OmegaError(f"undeclared state {x}")
        self.acceptance = acceptance

    @property
    def states(self) -> range:
        return range(self.num_states)

    def formula(self, q: int, a: int):
        return self.delta.get((q, a), FALSE)

    def key(self):
        full = tuple(self.formula(q, a) for q in self.states for a in range(len(self.alphabet)))
        return (self.alphabet.symbols, self.num_states, self.initial, full, self.acceptance)

    def __eq__(self, other):
        return isinstance(other, AlternatingAutomaton) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"AlternatingAutomaton({self.num_states} states, {self.acceptance.kind})"

    @classmethod
    def from_nondeterministic(cls, aut: Automaton) -> "AlternatingAutomaton":
        """Purely existential view of an ordinary automaton with state-based
        acceptance."""
        init = f_or(*(("q", q) for q in sorted(aut.initial)))
        delta = {}
        for q in aut.states:
            for a in range(len(aut.alphabet)):
                delta[(q, a)] = f_or(*(("q", p) for p in sorted(aut.succ.get((q, a), ()))))
        return cls(aut.alphabet, aut.num_states, init, delta, aut.acceptance)


class StateControlledAutomaton:
    """Alternating automaton whose states are existential or universal."""

    def __init__(self, alphabet, num_states: int, initial, transitions, universal, acceptance: Acceptance):
        self.base = Automaton(alphabet, num_states, initial, transitions, acceptance)
        self.universal = frozenset(universal)
        init = self.base.initial
        if init and not (init <= self.universal or not (init & self.universal)):
            raise OmegaError("initial states must be all existential or all universal")

    @property
    def alphabet(self):
        return self.base.alphabet

    def to_transition_controlled(self) -> AlternatingAutomaton:
        b = self.base

        def join(q, qs):
            atoms = [("q", p) for p in sorted(qs)]
            return f_and(*atoms) if q in self.universal else f_or(*atoms)

        delta = {}
        for q in b.states:
            for a in range(len(b.alphabet)):
                delta[(q, a)] = join(q, b.succ.get((q, a), ()))
        init_univ = bool(b.initial) and b.initial <= self.universal
        atoms = [("q", p) for p in sorted(b.initial)]
        init = f_and(*atoms) if init_univ else f_or(*atoms)
        return AlternatingAutomaton(b.alphabet, b.num_states, init, delta, b.acceptance)


# ---------------------------------------------------------------------------
# dualization


def negate_acceptance(acc: Acceptance, n: int) -> Acceptance:
    """State-based condition accepting exactly the infinity sets that
    ``acc`` rejects."""
    k, d = acc.kind, acc.data
    every = frozenset(range(n))
    if k == "trivial":
        return Acceptance.buchi(())
    if k == "buchi":
        return Acceptance.cobuchi(every - d)
    if k == "cobuchi":
        return Acceptance.buchi(every - d)
    if k == "weak":
        return Acceptance.weak(every - d)
    if k == "parity":
        pr = acc.priority
        shift = -1 if min(pr.values(), default=0) % 2 else 1
        return Acceptance.parity({q: p + shift for q, p in pr.items()})
    if k == "rabin":
        return Acceptance.streett([(u, l) for l, u in acc.pairs])
    if k == "streett":
        return Acceptance.rabin([(g, r) for r, g in acc.pairs])
    if k == "genbuchi":
        raise OmegaError("generalized Buchi conditions have no direct dual; convert first")
    return Acceptance.muller(_all_loops_family(n) - acc.family)


def _all_loops_family(n: int) -> frozenset:
    out = set()
    for bits in range(1, 1 << n):
        out.add(frozenset(q for q in range(n) if bits >> q & 1))
    return frozenset(out)


def dualize(a: AlternatingAutomaton) -> AlternatingAutomaton:
    """Automaton for the complement: swap the boolean connectives and the
    constants and negate the acceptance condition."""
    delta = {(q, c): f_dual(a.formula(q, c)) for q in a.states for c in range(len(a.alphabet))}
    return AlternatingAutomaton(a.alphabet, a.num_states, f_dual(a.initial), delta,
                                negate_acceptance(a.acceptance, a.num_states))


# ---------------------------------------------------------------------------
# membership via the acceptance game


def _state_priorities(a: AlternatingAutomaton):
    """Priority per state, or None when a latest appearance record is
    needed."""
    acc = a.acceptance
    k, d = acc.kind, acc.data
    if k == "trivial":
        return {q: 0 for q in a.states}
    if k == "buchi":
        return {q: 0 if q in d else 1 for q in a.states}
    if k in ("cobuchi", "weak"):
        if k == "weak" and not _weak_valid(a):
            return None
        return {q: 2 if q in d else 1 for q in a.states}
    if k == "parity":
        return dict(acc.priority)
    return None


def _graph(a: AlternatingAutomaton):
    m = len(a.alphabet)
    return {q: sorted({p for c in range(m) for p in f_states(a.formula(q, c))}) for q in a.states}


def _weak_valid(a: AlternatingAutomaton) -> bool:
    g = _graph(a)
    d = a.acceptance.data
    for comp in sccs(a.states, lambda q: g[q]):
        if len({q in d for q in comp}) > 1:
            return False
    return True


def acceptance_game(a: AlternatingAutomaton, w: LassoWord) -> tuple[Game, int]:
    """The membership game on formula positions times word positions.
    Zero resolves disjunctions, One conjunctions.  Returns the game and the
    start vertex."""
    letters = [a.alphabet.index(x) for x in w.prefix + w.period]
    plen, total = len(w.prefix), len(w.prefix) + len(w.period)
    prio = _state_priorities(a)
    use_lar = prio is None
    if use_lar:
        n = a.num_states
        fam_check = a.acceptance
        from .core import satisfies

        def lar_prio(rec):
            frame = lar_frame(rec)
            good = satisfies(fam_check, frame)
            return 2 * n - 2 * len(frame) + (0 if good else 1)
        neutral = 2 * n + 2
    else:
        neutral = max(prio.values(), default=0) + 2

    ids: dict = {}
    order: list = []
    owner0: list = []
    priority: dict = {}
    edges: list = []

    def vid(node):
        if node in ids:
            return ids[node]
        ids[node] = len(order)
        order.append(node)
        return ids[node]

    # nodes: ("s", q, i, rec) state q about to read position i
    #        ("f", f, i, rec) formula f whose atoms move to position i
    start = vid(("f", a.initial, 0, ("$",) if use_lar else None))
    k = 0
    while k < len(order):
        node = order[k]
        v = ids[node]
        k += 1
        if node[0] == "s":
            _, q, i, rec = node
            if use_lar:
                priority[v] = lar_prio(rec)
            else:
                priority[v] = prio[q]
            nxt = i + 1 if i + 1 < total else plen
            edges.append((v, vid(("f", a.formula(q, letters[i]), nxt, rec))))
            continue
        _, f, i, rec = node
        priority[v] = neutral
        tag = f[0]
        if tag == "q":
            r2 = lar_step(rec, f[1]) if use_lar else None
            edges.append((v, vid(("s", f[1], i, r2))))
        elif tag == "or":
            owner0.append(v)
            for g in f[1:]:
                edges.append((v, vid(("f", g, i, rec))))
        elif tag == "and":
            for g in f[1:]:
                edges.append((v, vid(("f", g, i, rec))))
        elif tag == "0":
            owner0.append(v)  # Zero is stuck
        # "1": One is stuck
    g = Game(len(order), owner0, edges, priority, names=order)
    return g, start


def alternating_accepts(a: AlternatingAutomaton, w: LassoWord) -> bool:
    g, start = acceptance_game(a, w)
    return start in solve_parity(g).win0


# ---------------------------------------------------------------------------
# alternation removal


def _buchi_set(a: AlternatingAutomaton) -> frozenset:
    acc = a.acceptance
    if acc.kind == "buchi":
        return acc.data
    if acc.kind == "trivial":
        return frozenset(a.states)
    if acc.kind == "weak" and _weak_valid(a):
        return acc.data
    raise OmegaError("Buchi (or weak) alternating automaton required")


def remove_alternation(a: AlternatingAutomaton) -> Automaton:
    """Breakpoint construction: states ``(S, O)`` with ``O <= S``; ``S`` is
    the current level of a guessed run DAG and ``O`` the vertices still
    owing a visit to an accepting state since the last breakpoint."""
    b = _buchi_set(a)
    m = len(a.alphabet)
    ids: dict = {}
    order: list = []
    trans = set()

    def vid(x):
        if x not in ids:
            ids[x] = len(order)
            order.append(x)
        return ids[x]

    init = [vid((s, frozenset())) for s in minimal_models(a.initial)]
    k = 0
    while k < len(order):
        s, o = order[k]
        k += 1
        for c in range(m):
            choices = [minimal_models(a.formula(q, c)) for q in sorted(s)]
            owners = sorted(s)
            seen = set()
            for pick in product(*choices):
                y = dict(zip(owners, pick))
                s2 = frozenset().union(*pick) if pick else frozenset()
                if o:
                    o2 = frozenset().union(*(y[q] for q in o)) - b
                else:
                    o2 = s2 - b
                if (s2, o2) in seen:
                    continue
                seen.add((s2, o2))
                trans.add((ids[(s, o)], c, vid((s2, o2))))
    acc = {i for i, (s, o) in enumerate(order) if not o}
    return Automaton(a.alphabet, len(order), init, trans, Acceptance.buchi(acc))


def _cobuchi_to_weak(a: AlternatingAutomaton) -> AlternatingAutomaton:
    """Ranked copy of a co-Buchi alternating automaton: state ``(q, r)`` is
    ``q * 2n + r``.  Ranks never increase, odd ranks forbid the states the
    co-Buchi condition must eventually avoid, and a run is accepting when
    every path settles in an odd rank."""
    n = a.num_states
    k = 2 * n
    bad = frozenset(a.states) - a.acceptance.data

    def release(f, r):
        return f_subst(f, lambda q: f_or(*(("q", q * k + j) for j in range(r + 1))))

    delta = {}
    for q in a.states:
        for r in range(k):
            for c in range(len(a.alphabet)):
                if q in bad and r % 2:
                    delta[(q * k + r, c)] = FALSE
                else:
                    delta[(q * k + r, c)] = release(a.formula(q, c), r)
    odd = [q * k + r for q in a.states for r in range(k) if r % 2]
    return AlternatingAutomaton(a.alphabet, n * k, release(a.initial, k - 1), delta, Acceptance.weak(odd))


def buchi_alternating_to_weak(a: AlternatingAutomaton) -> AlternatingAutomaton:
    """Weak alternating automaton with ``2 n^2`` states for the language of
    a Buchi alternating automaton.  The dual co-Buchi automaton is ranked
    and the result dualized back; state ``(q, r)`` is ``q * 2n + r`` and the
    weak set holds the even ranks."""
    b = _buchi_set(a)
    a = AlternatingAutomaton(a.alphabet, a.num_states, a.initial, a.delta, Acceptance.buchi(b))
    return dualize(_cobuchi_to_weak(dualize(a)))


def is_weak(a: AlternatingAutomaton) -> bool:
    return a.acceptance.kind == "weak" and _weak_valid(a)
