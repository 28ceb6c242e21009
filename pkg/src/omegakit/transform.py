"""Boolean operations, degeneralization, conversions between recurrence
conditions and latest-appearance-record constructions."""

from __future__ import annotations

from collections import deque
from itertools import combinations

from .core import (Acceptance, Automaton, OmegaError, automaton_sccs, classify_determinism,
                   reachable, satisfies, sorted_elems)

MARK = "$"


# ---------------------------------------------------------------------------
# union and intersection


def _shift_acceptance(acc: Acceptance, k: int) -> Acceptance:
    if acc.on_transitions:
        def m(s):
            return frozenset((p + k, a, q + k) for p, a, q in s)
    else:
        def m(s):
            return frozenset(q + k for q in s)
    kind, d = acc.kind, acc.data
    if kind == "trivial":
        return acc
    if kind in ("buchi", "cobuchi", "weak"):
        return Acceptance(kind, m(d), acc.on_transitions)
    if kind == "genbuchi":
        return Acceptance(kind, tuple(m(s) for s in d), acc.on_transitions)
    if kind == "parity":
        return Acceptance.parity({next(iter(m([e]))): p for e, p in d}, acc.on_transitions)
    if kind in ("rabin", "streett"):
        return Acceptance(kind, tuple((m(x), m(y)) for x, y in d), acc.on_transitions)
    return Acceptance("muller", frozenset(m(s) for s in d), acc.on_transitions)


def union(a: Automaton, b: Automaton) -> Automaton:
    """Disjoint union; b's states are shifted past a's."""
    if a.alphabet != b.alphabet:
        raise OmegaError("alphabets differ")
    ka, kb = a.acceptance, b.acceptance
    if ka.kind != kb.kind or ka.on_transitions != kb.on_transitions:
        raise OmegaError("union needs the same acceptance type on both sides")
    n = a.num_states
    kb = _shift_acceptance(kb, n)
    trans = set(a.transitions) | {(p + n, c, q + n) for p, c, q in b.transitions}
    init = set(a.initial) | {q + n for q in b.initial}
    tr = ka.on_transitions
    kind = ka.kind
    if kind == "trivial":
        acc = ka
    elif kind in ("buchi", "cobuchi", "weak"):
        acc = Acceptance(kind, ka.data | kb.data, tr)
    elif kind == "genbuchi":
        ua = a.transitions if tr else frozenset(a.states)
        ub = frozenset(_shift_acceptance(Acceptance("buchi", b.transitions if tr else frozenset(b.states), tr),
                                         n).data)
        k = max(len(ka.data), len(kb.data), 1)
        sa = list(ka.data) + [ua] * (k - len(ka.data))
        sb = list(kb.data) + [ub] * (k - len(kb.data))
        acc = Acceptance(kind, tuple(x | y for x, y in zip(sa, sb)), tr)
    elif kind == "parity":
        pr = dict(ka.data)
        pr.update(dict(kb.data))
        acc = Acceptance.parity(pr, tr)
    elif kind in ("rabin", "streett"):
        acc = Acceptance(kind, ka.data + kb.data, tr)
    else:
        acc = Acceptance("muller", ka.data | kb.data, tr)
    return Automaton(a.alphabet, n + b.num_states, init, trans, acc)


def intersect_buchi(a: Automaton, b: Automaton) -> Automaton:
    """Product of two state-based Buchi automata with one extra bit.

    State ``(q0, q1, bit)`` has id ``(q0 * |Q1| + q1) * 2 + bit``; the bit
    flips to 1 after a visit to ``B1`` and back to 0 after a visit to
    ``B0``; accepting states are ``B0 x Q1 x {1}``.
    """
    for x in (a, b):
        if x.acceptance.kind != "buchi" or x.acceptance.on_transitions:
            raise OmegaError("state-based Buchi automata required")
    if a.alphabet != b.alphabet:
        raise OmegaError("alphabets differ")
    B0, B1 = a.acceptance.data, b.acceptance.data
    n1 = b.num_states

    def sid(q0, q1, bit):
        return (q0 * n1 + q1) * 2 + bit

    trans = set()
    for p0, c, q0 in a.transitions:
        for p1, c1, q1 in b.transitions:
            if c1 != c:
                continue
            for bit in (0, 1):
                if p1 in B1:
                    nb = 1
                elif bit == 1 and p0 in B0:
                    nb = 0
                else:
                    nb = bit
                trans.add((sid(p0, p1, bit), c, sid(q0, q1, nb)))
    init = {sid(q0, q1, 0) for q0 in a.initial for q1 in b.initial}
    acc = {sid(q0, q1, 1) for q0 in B0 for q1 in range(n1)}
    return Automaton(a.alphabet, 2 * a.num_states * n1, init, trans, Acceptance.buchi(acc))


# ---------------------------------------------------------------------------
# degeneralization


def degeneralize(a: Automaton) -> Automaton:
    """Generalized Buchi to Buchi with a counter naming the next set awaited.

    State ``(q, i)`` has id ``i * n + q``.  The counter advances when the
    current state lies in the awaited set; the accepting states are the
    members of the first set in copy 0.  With no sets every state of the
    single copy accepts.
    """
    acc = a.acceptance
    if acc.kind != "genbuchi" or acc.on_transitions:
        raise OmegaError("state-based generalized Buchi automaton required")
    sets = acc.data
    n = a.num_states
    if not sets:
        return a.with_acceptance(Acceptance.buchi(a.states))
    k = len(sets)
    trans = set()
    for p, c, q in a.transitions:
        for i in range(k):
            j = (i + 1) % k if p in sets[i] else i
            trans.add((i * n + p, c, j * n + q))
    return Automaton(a.alphabet, k * n, set(a.initial), trans, Acceptance.buchi(sets[0]))


# ---------------------------------------------------------------------------
# moving acceptance from transitions to states


def to_state_based(a: Automaton) -> Automaton:
    """Equivalent automaton whose condition refers to states: a state
    remembers the transition that entered it."""
    acc = a.acceptance
    if not acc.on_transitions:
        return a
    ids: dict = {}
    for q in sorted(a.initial):
        ids[(q, None)] = len(ids)
    todo = list(ids)
    trans = set()
    while todo:
        s = todo.pop()
        for t in a.out_edges[s[0]]:
            nxt = (t[2], t)
            if nxt not in ids:
                ids[nxt] = len(ids)
                todo.append(nxt)
            trans.add((ids[s], t[1], ids[nxt]))

    def m(S):
        return frozenset(i for (q, t), i in ids.items() if t is not None and t in S)

    k, d = acc.kind, acc.data
    if k == "trivial":
        new = acc
    elif k in ("buchi", "cobuchi", "weak"):
        fresh = m(d)
        if k != "buchi":
            # entry states are transient, include them so the set is closed
            fresh |= {i for (q, t), i in ids.items() if t is None}
        new = Acceptance(k, fresh)
    elif k == "genbuchi":
        new = Acceptance(k, tuple(m(s) for s in d))
    elif k == "parity":
        pr = dict(d)
        top = max(pr.values(), default=0)
        new = Acceptance.parity({i: (pr[t] if t is not None else top) for (q, t), i in ids.items()})
    elif k in ("rabin", "streett"):
        new = Acceptance(k, tuple((m(x), m(y)) for x, y in d))
    else:
        # a member mentioning an unreachable transition can never be the
        # inf-set, and must not shrink into one that can
        seen = {t for (q, t) in ids if t is not None}
        new = Acceptance("muller", frozenset(m(s) for s in d if s <= seen))
    return Automaton(a.alphabet, len(ids), {ids[(q, None)] for q in a.initial}, trans, new)


# ---------------------------------------------------------------------------
# condition conversions on the same transition structure


def check_weak(a: Automaton) -> None:
    """Raise unless the weak set is a union of SCCs."""
    acc = a.acceptance
    if acc.kind != "weak":
        raise OmegaError("weak acceptance required")
    for comp in automaton_sccs(a):
        if acc.on_transitions:
            edges = {t for t in a.transitions if t[0] in comp and t[2] in comp}
            inside = {t in acc.data for t in edges}
        else:
            inside = {q in acc.data for q in comp}
        if len(inside) > 1:
            raise OmegaError("weak set is not a union of strongly connected components")


def _universe(a: Automaton):
    return a.transitions if a.acceptance.on_transitions else frozenset(a.states)


def _buchi_to_parity(a):
    d = a.acceptance.data
    return Acceptance.parity({x: 0 if x in d else 1 for x in _universe(a)}, a.acceptance.on_transitions)


def _cobuchi_to_parity(a):
    d = a.acceptance.data
    return Acceptance.parity({x: 2 if x in d else 1 for x in _universe(a)}, a.acceptance.on_transitions)


def _parity_to_rabin(a):
    pr = a.acceptance.priority
    pairs = [([x for x, v in pr.items() if v < p], [x for x, v in pr.items() if v <= p])
             for p in sorted(set(pr.values())) if p % 2 == 0]
    return Acceptance.rabin(pairs, a.acceptance.on_transitions)


def _parity_to_streett(a):
    pr = a.acceptance.priority
    pairs = [([x for x, v in pr.items() if v <= p], [x for x, v in pr.items() if v < p])
             for p in sorted(set(pr.values())) if p % 2 == 1]
    return Acceptance.streett(pairs, a.acceptance.on_transitions)


def _to_muller(a):
    U = sorted_elems(_universe(a))
    if len(U) > 16:
        raise OmegaError("too many elements for a Muller family")
    fam = []
    for r in range(1, len(U) + 1):
        for c in combinations(U, r):
            if satisfies(a.acceptance, c):
                fam.append(c)
    return Acceptance.muller(fam, a.acceptance.on_transitions)


def _cobuchi_to_rabin(a):
    d = a.acceptance.data
    U = _universe(a)
    return Acceptance.rabin([(U - d, U)], a.acceptance.on_transitions)


def _weak_to(kind):
    def f(a):
        check_weak(a)
        return Acceptance(kind, a.acceptance.data, a.acceptance.on_transitions)
    return f


def _trivial_to_buchi(a):
    return Acceptance.buchi(_universe(a), a.acceptance.on_transitions)


def _buchi_to_genbuchi(a):
    return Acceptance.genbuchi([a.acceptance.data], a.acceptance.on_transitions)


# edges of the conversion graph; each keeps the transition structure
_DIRECT = {
    ("trivial", "buchi"): _trivial_to_buchi,
    ("buchi", "parity"): _buchi_to_parity,
    ("buchi", "genbuchi"): _buchi_to_genbuchi,
    ("cobuchi", "parity"): _cobuchi_to_parity,
    ("cobuchi", "rabin"): _cobuchi_to_rabin,
    ("weak", "buchi"): _weak_to("buchi"),
    ("weak", "cobuchi"): _weak_to("cobuchi"),
    ("parity", "rabin"): _parity_to_rabin,
    ("parity", "streett"): _parity_to_streett,
    ("rabin", "muller"): _to_muller,
    ("streett", "muller"): _to_muller,
    ("parity", "muller"): _to_muller,
    ("genbuchi", "muller"): _to_muller,
    ("cobuchi", "muller"): _to_muller,
    ("buchi", "muller"): _to_muller,
}


def conversion_path(src: str, dst: str) -> list[str] | None:
    prev = {src: None}
    dq = deque([src])
    while dq:
        k = dq.popleft()
        if k == dst:
            path = []
            while k is not None:
                path.append(k)
                k = prev[k]
            return path[::-1]
        for (x, y) in _DIRECT:
            if x == k and y not in prev:
                prev[y] = k
                dq.append(y)
    return None


def convert_condition(a: Automaton, target: str) -> Automaton:
    """Re-express the condition as ``target`` on the same transition graph
    (generalized Buchi to Buchi goes through degeneralization instead)."""
    src = a.acceptance.kind
    if src == target:
        if src == "weak":
            check_weak(a)
        return a
    if src == "genbuchi" and target == "buchi":
        return degeneralize(to_state_based(a))
    path = conversion_path(src, target)
    if path is None:
        raise OmegaError(f"no conversion from {src} to {target}")
    for x, y in zip(path, path[1:]):
        a = a.with_acceptance(_DIRECT[(x, y)](a))
    return a


# ---------------------------------------------------------------------------
# latest appearance records


def lar_step(lar: tuple, q) -> tuple:
    """Move ``q`` to the end; the marker goes where ``q`` was taken out."""
    seq = tuple(x for x in lar if x != MARK)
    if q in seq:
        i = seq.index(q)
        return seq[:i] + (MARK,) + seq[i + 1:] + (q,)
    return seq + (MARK, q)


def lar_frame(lar: tuple) -> frozenset:
    return frozenset(lar[lar.index(MARK) + 1:])


def _lar_automaton(a: Automaton, priority_of) -> tuple[Automaton, list]:
    acc = a.acceptance
    if acc.kind != "muller" or acc.on_transitions:
        raise OmegaError("state-based Muller automaton required")
    ids: dict = {}
    order: list = []
    todo = []

    def start(q):
        # every state occurs from the outset, so records are permutations
        return (MARK,) + tuple(p for p in a.states if p != q) + (q,)

    for q in sorted(a.initial):
        s = start(q)
        ids[s] = len(order)
        order.append(s)
        todo.append(s)
    trans = set()
    while todo:
        s = todo.pop()
        for t in a.out_edges[s[-1]]:
            nxt = lar_step(s, t[2])
            if nxt not in ids:
                ids[nxt] = len(order)
                order.append(nxt)
                todo.append(nxt)
            trans.add((ids[s], t[1], ids[nxt]))
    prio = {i: priority_of(s) for i, s in enumerate(order)}
    out = Automaton(a.alphabet, len(order), {ids[start(q)] for q in a.initial}, trans, Acceptance.parity(prio))
    return out, order


def muller_to_parity_lar(a: Automaton, with_records: bool = False):
    """Parity automaton over latest appearance records.  Records are the only
    state component: their last letter is the current state.  A record with
    frame ``F`` gets priority ``2n - 2|F|``, plus one when ``F`` is not in
    the Muller family."""
    n = a.num_states
    fam = a.acceptance.data if a.acceptance.kind == "muller" else None

    def pri(s):
        f = lar_frame(s)
        return 2 * n - 2 * len(f) + (0 if f in fam else 1)

    out, order = _lar_automaton(a, pri)
    return (out, order) if with_records else out


def muller_to_parity_indexed(a: Automaton) -> Automaton:
    """Record construction for a deterministic Muller automaton with
    priorities taken from the loop structure: a frame ``F`` that is a loop
    gets ``h - 1`` or ``h`` where ``h`` is the longest alternating chain of
    loops ending at ``F``, picking the value whose parity matches the sign
    of ``F``.  Inside each component this uses exactly as many priorities
    as the tallest tower there."""
    from .structure import frame_height

    if not classify_determinism(a).forward_deterministic:
        raise OmegaError("forward-deterministic automaton required")
    if a.acceptance.kind != "muller" or a.acceptance.on_transitions:
        raise OmegaError("state-based Muller automaton required")
    height = frame_height(a)
    fam = a.acceptance.data

    def value(h, positive):
        return h - 1 if (h - 1) % 2 == (0 if positive else 1) else h

    def pri(s):
        f = lar_frame(s)
        try:
            h, sign = height(f)
        except OmegaError:
            # first visit of a state that carries no loop: transient
            return value(1, f in fam)
        return value(h, sign == "+")

    out, _ = _lar_automaton(a, pri)
    return out


def used_priorities_per_component(a: Automaton) -> list[int]:
    """Number of distinct priorities inside each nontrivial SCC of a parity
    automaton."""
    pr = a.acceptance.priority
    out = []
    for comp in automaton_sccs(a):
        if any(t[0] in comp and t[2] in comp for t in a.transitions):
            out.append(len({pr[q] for q in comp}))
    return out


def reachable_part(a: Automaton) -> Automaton:
    from .core import restrict
    return restrict(a, reachable(a.initial, lambda p: [t[2] for t in a.out_edges[p]]))
