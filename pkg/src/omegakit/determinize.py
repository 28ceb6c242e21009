"""Compressed run trees of Buchi automata and what they buy: unambiguous
automata, a complement, history-tree determinization to transition
Rabin automata, and the deterministic weak constructions."""

from __future__ import annotations

from itertools import product
from typing import NamedTuple

from .core import (Acceptance, Automaton, LassoWord, OmegaError, accepts_lasso, automaton_sccs,
                   classify_determinism, complete, equivalence_witness, is_empty, sccs)
from .transform import check_weak, degeneralize, reachable_part


def _require_buchi(aut: Automaton):
    if aut.acceptance.kind != "buchi" or aut.acceptance.on_transitions:
        raise OmegaError("state-based Buchi automaton required")


class _Numbering:
    """Assigns consecutive ids to hashable states in discovery order."""

    def __init__(self):
        self.ids: dict = {}
        self.order: list = []

    def __call__(self, x) -> int:
        i = self.ids.get(x)
        if i is None:
            i = self.ids[x] = len(self.order)
            self.order.append(x)
        return i

    def __len__(self):
        return len(self.order)


# ---------------------------------------------------------------------------
# compressed run trees


class Slice(NamedTuple):
    """Edges between two levels: ``parent[j]`` is the upper block of lower
    block ``j`` and ``left[j]`` says whether ``j`` is a left child."""

    parent: tuple
    left: tuple


def initial_partition(aut: Automaton) -> tuple:
    return (frozenset(aut.initial),) if aut.initial else ()


def run_tree_step(aut: Automaton, part: tuple, a) -> tuple[tuple, Slice]:
    """One level of the compressed run tree.  Each block's successors are
    split into accepting (left) and other (right) states, minus whatever a
    block further left already reached."""
    if isinstance(a, str):
        a = aut.alphabet.index(a)
    b = aut.acceptance.data
    taken: set = set()
    blocks, parent, left = [], [], []
    for j, blk in enumerate(part):
        r = aut.post(blk, a)
        q0 = frozenset(x for x in r if x in b and x not in taken)
        q1 = frozenset(x for x in r if x not in b and x not in taken)
        taken |= r
        for sub, is_left in ((q0, True), (q1, False)):
            if sub:
                blocks.append(sub)
                parent.append(j)
                left.append(is_left)
    return tuple(blocks), Slice(tuple(parent), tuple(left))


def accepts_by_run_tree(aut: Automaton, w: LassoWord) -> bool:
    """Whether the compressed run tree of ``w`` has a path with infinitely
    many left edges, decided on the folded tree."""
    _require_buchi(aut)
    u, v = aut.word_indices(w.prefix), aut.word_indices(w.period)
    part = initial_partition(aut)
    levels = [part]
    slices = []
    seen = {}
    pos = 0
    while True:
        if pos >= len(u):
            key = (part, (pos - len(u)) % len(v))
            if key in seen:
                back = seen[key]
                break
            seen[key] = pos
        a = u[pos] if pos < len(u) else v[(pos - len(u)) % len(v)]
        part, sl = run_tree_step(aut, part, a)
        levels.append(part)
        slices.append(sl)
        pos += 1
    # the last level coincides with level ``back``
    last = len(levels) - 1
    adj: dict = {}
    for i, sl in enumerate(slices):
        tgt = back if i + 1 == last else i + 1
        for j, (p, lf) in enumerate(zip(sl.parent, sl.left)):
            adj.setdefault((i, p), []).append(((tgt, j), lf))
    nodes = [(i, j) for i in range(last) for j in range(len(levels[i]))]
    comp_of = {}
    for k, comp in enumerate(sccs(nodes, lambda x: [y for y, _ in adj.get(x, ())])):
        for x in comp:
            comp_of[x] = k
    return any(lf and comp_of[x] == comp_of[y] for x, outs in adj.items() for y, lf in outs)


# ---------------------------------------------------------------------------
# guessing the infinite core of the run tree


def _core_steps(aut: Automaton, state, a):
    """Successors of a marked level.  ``state = (part, inf, watch)``: ``inf``
    flags the blocks with infinitely many descendants, ``watch`` holds the
    finite blocks whose subtrees must still die out.  Yields
    ``(state', core_left)``, ``core_left`` telling whether the core takes a
    left edge."""
    part, inf, watch = state
    part2, sl = run_tree_step(aut, part, a)
    kids: dict = {}
    for j, p in enumerate(sl.parent):
        kids.setdefault(p, []).append(j)
    if any(inf[p] and p not in kids for p in range(len(part))):
        return
    choices = []
    for j, p in enumerate(sl.parent):
        choices.append((False, True) if inf[p] else (False,))
    for marks in product(*choices):
        if any(inf[p] and not any(marks[j] for j in kids[p]) for p in kids):
            continue
        fin = frozenset(j for j, m in enumerate(marks) if not m)
        if watch:
            watch2 = frozenset(j for j in fin if sl.parent[j] in watch)
        else:
            watch2 = fin
        core_left = any(marks[j] and sl.left[j] for j in range(len(marks)))
        yield (part2, tuple(marks), watch2), core_left


def _initial_marked(aut: Automaton, allow_finite: bool):
    part = initial_partition(aut)
    if not part:
        return [((), (), frozenset())] if allow_finite else []
    out = [(part, (True,), frozenset())]
    if allow_finite:
        out.append((part, (False,), frozenset()))
    return out


def disambiguate(aut: Automaton) -> Automaton:
    """Equivalent Buchi automaton with at most one accepting run per word.

    A run guesses, level by level, which run-tree blocks lie on infinite
    paths.  The guess is forced: an infinite block needs an infinite child
    and a breakpoint over the finite blocks checks that they die out.  The
    run accepts when, in addition, the infinite part takes left edges
    infinitely often.
    """
    _require_buchi(aut)
    num = _Numbering()
    init = [num((s, False)) for s in _initial_marked(aut, allow_finite=False)]
    trans = set()
    k = 0
    while k < len(num):
        s, _ = num.order[k]
        for a in range(len(aut.alphabet)):
            for s2, lf in _core_steps(aut, s, a):
                trans.add((k, a, num((s2, lf))))
        k += 1
    quiet = {i for i, ((p, inf, watch), _) in enumerate(num.order) if not watch}
    lefts = {i for i, (_, lf) in enumerate(num.order) if lf}
    gen = Automaton(aut.alphabet, len(num), init, trans, Acceptance.genbuchi([quiet, lefts]))
    return degeneralize(gen)


def complement_via_run_trees(aut: Automaton) -> Automaton:
    """Buchi automaton for the complement: guess the infinite core as in
    :func:`disambiguate`, then guess a level after which the core never
    takes a left edge."""
    _require_buchi(aut)
    num = _Numbering()
    init = [num((s, 0)) for s in _initial_marked(aut, allow_finite=True)]
    trans = set()
    k = 0
    while k < len(num):
        s, phase = num.order[k]
        for a in range(len(aut.alphabet)):
            for s2, lf in _core_steps(aut, s, a):
                if phase == 0:
                    trans.add((k, a, num((s2, 0))))
                if not lf:
                    trans.add((k, a, num((s2, 1))))
        k += 1
    acc = {i for i, ((p, inf, watch), ph) in enumerate(num.order) if ph == 1 and not watch}
    return Automaton(aut.alphabet, len(num), init, trans, Acceptance.buchi(acc))


# ---------------------------------------------------------------------------
# history trees


class HNode(NamedTuple):
    name: int | None
    label: frozenset
    children: tuple


def history_tree_valid(t: HNode | None) -> bool:
    """Nonempty labels, each strictly larger than the union of the
    children's labels, sibling labels pairwise disjoint."""
    if t is None:
        return True

    def ok(v: HNode) -> bool:
        if not v.label:
            return False
        union: set = set()
        for c in v.children:
            if c.label & union or not c.label <= v.label:
                return False
            union |= c.label
        return union < v.label and all(ok(c) for c in v.children)

    return ok(t)


def _names(t: HNode | None) -> set:
    if t is None:
        return set()
    out = {t.name}
    for c in t.children:
        out |= _names(c)
    return out


def _history_step(aut: Automaton, t: HNode | None, a: int):
    """Successor history tree plus the names removed and the names whose
    node became equal to the union of its children."""
    if t is None:
        return None, set(), set()
    b = aut.acceptance.data

    def update(v: HNode) -> HNode:
        lab = aut.post(v.label, a)
        kids = tuple(update(c) for c in v.children)
        spawn = frozenset(q for q in lab if q in b)
        return HNode(v.name, lab, kids + ((HNode(None, spawn, ()),) if spawn else ()))

    def steal(v: HNode, taken: frozenset) -> HNode:
        lab = v.label - taken
        kids = []
        used = taken
        for c in v.children:
            c2 = steal(c, used)
            used = used | c2.label
            kids.append(c2)
        return HNode(v.name, lab, tuple(k for k in kids if k.label))

    green: set = set()

    def contract(v: HNode) -> HNode:
        union = frozenset().union(*(c.label for c in v.children)) if v.children else frozenset()
        if v.children and union == v.label:
            if v.name is not None:
                green.add(v.name)
            return HNode(v.name, v.label, ())
        return HNode(v.name, v.label, tuple(contract(c) for c in v.children))

    t2 = steal(update(t), frozenset())
    if not t2.label:
        return None, _names(t), set()
    t2 = contract(t2)
    old = _names(t)
    kept = _names(t2) - {None}
    free = iter(sorted(set(range(aut.num_states + 1)) - kept))

    def rename(v: HNode) -> HNode:
        name = v.name if v.name is not None else next(free)
        return HNode(name, v.label, tuple(rename(c) for c in v.children))

    return rename(t2), old - kept, green


def determinize_history(aut: Automaton, with_trees: bool = False):
    """Deterministic transition-Rabin automaton with history trees as
    states and one pair per node name: a name's pair rejects when the node
    is removed and accepts when it absorbs all of its children."""
    _require_buchi(aut)
    num = _Numbering()
    start = HNode(0, frozenset(aut.initial), ()) if aut.initial else None
    num(start)
    trans = set()
    red: dict = {}
    green: dict = {}
    k = 0
    while k < len(num):
        t = num.order[k]
        for a in range(len(aut.alphabet)):
            t2, removed, accepted = _history_step(aut, t, a)
            e = (k, a, num(t2))
            trans.add(e)
            for x in removed:
                red.setdefault(x, set()).add(e)
            for x in accepted:
                green.setdefault(x, set()).add(e)
        k += 1
    pairs = [(red.get(x, set()), green[x]) for x in sorted(green)]
    out = Automaton(aut.alphabet, len(num), [0], trans, Acceptance.rabin(pairs, on_transitions=True))
    return (out, list(num.order)) if with_trees else out


# ---------------------------------------------------------------------------
# deterministic weak automata


def _require_det_weak(aut: Automaton):
    if aut.acceptance.kind != "weak" or aut.acceptance.on_transitions:
        raise OmegaError("state-based weak automaton required")
    check_weak(aut)
    if not classify_determinism(aut).forward_deterministic:
        raise OmegaError("forward-deterministic automaton required")


def _canonical(aut: Automaton, classes: list, cls_of: dict, positive: set) -> Automaton:
    """Renumber the class automaton breadth-first from the initial class."""
    m = len(aut.alphabet)
    (q0,) = aut.initial
    num = _Numbering()
    num(cls_of[q0])
    trans = set()
    k = 0
    while k < len(num):
        c = num.order[k]
        rep = classes[c][0]
        for a in range(m):
            for q in aut.successors(rep, a):
                if cls_of.get(q) is not None:
                    trans.add((k, a, num(cls_of[q])))
        k += 1
    weak = {i for i, c in enumerate(num.order) if c in positive}
    return Automaton(aut.alphabet, len(num), [0], trans, Acceptance.weak(weak))


def minimize_weak_det(aut: Automaton) -> Automaton:
    """Smallest deterministic weak automaton for the same language, with
    states numbered breadth-first.  States are merged when they accept the
    same residual language; states with empty residual are dropped."""
    if not aut.initial:
        return Automaton(aut.alphabet, 0, [], [], Acceptance.weak([]))
    _require_det_weak(aut)
    a = complete(reachable_part(aut))
    n = a.num_states
    single = [a.with_initial([q]) for q in range(n)]
    dead = {q for q in range(n) if is_empty(single[q])}
    classes: list = []
    cls_of: dict = {}
    for q in range(n):
        if q in dead:
            continue
        for i, c in enumerate(classes):
            if equivalence_witness(single[c[0]], single[q]) is None:
                c.append(q)
                cls_of[q] = i
                break
        else:
            cls_of[q] = len(classes)
            classes.append([q])
    if not classes:
        return Automaton(aut.alphabet, 0, [], [], Acceptance.weak([]))
    # class graph and the sign of each of its loops
    m = len(a.alphabet)
    nc = len(classes)

    def step(c, x):
        (q,) = a.successors(classes[c][0], x)
        return cls_of.get(q)

    positive = set()
    comps = sccs(range(nc), lambda c: [d for x in range(m) if (d := step(c, x)) is not None])
    for comp in comps:
        cs = set(comp)
        c = comp[0]
        loop = _cycle_word(c, cs, step, m)
        if loop is None:
            continue
        if _det_accepts(a, classes[c][0], loop):
            positive |= cs
    out = _canonical(a, classes, cls_of, positive)
    check_weak(out)
    if equivalence_witness(out, aut) is not None:
        raise OmegaError("residual quotient is not weak for this automaton")
    return out


def _cycle_word(c, comp: set, step, m: int):
    """Nonempty word leading from ``c`` back to ``c`` inside ``comp``."""
    prev = {}
    todo = [c]
    while todo:
        nxt = []
        for x in todo:
            for a in range(m):
                y = step(x, a)
                if y is None or y not in comp:
                    continue
                if y == c:
                    word = [a]
                    while x != c:
                        x, b = prev[x]
                        word.append(b)
                    return tuple(reversed(word))
                if y not in prev:
                    prev[y] = (x, a)
                    nxt.append(y)
        todo = nxt
    return None


def _det_accepts(a: Automaton, q: int, loop: tuple) -> bool:
    sym = a.alphabet.symbols
    return accepts_lasso(a.with_initial([q]), LassoWord((), [sym[x] for x in loop]))


def determinize_weak(aut: Automaton) -> Automaton:
    """Deterministic weak automaton for a weak automaton whose language is
    weak-recognizable, via a breakpoint construction.  The result is
    minimized; raises when the breakpoint automaton is not equivalent."""
    if aut.acceptance.kind != "weak" or aut.acceptance.on_transitions:
        raise OmegaError("state-based weak automaton required")
    check_weak(aut)
    d = aut.acceptance.data
    num = _Numbering()
    if aut.initial:
        r0 = frozenset(aut.initial)
        num((r0, frozenset(q for q in r0 if q in d), False))
    trans = set()
    k = 0
    while k < len(num):
        r, o, _ = num.order[k]
        for a in range(len(aut.alphabet)):
            r2 = aut.post(r, a)
            o2 = frozenset(q for q in aut.post(o, a) if q in d)
            reset = not o2
            if reset:
                o2 = frozenset(q for q in r2 if q in d)
            trans.add((k, a, num((r2, o2, reset))))
        k += 1
    det = Automaton(aut.alphabet, len(num), [0] if len(num) else [], trans)
    weak = set()
    for comp in automaton_sccs(det):
        if not any(num.order[q][2] for q in comp):
            weak |= comp
    det = det.with_acceptance(Acceptance.weak(weak))
    if equivalence_witness(det, aut) is not None:
        raise OmegaError("language not weak-recognizable or construction inapplicable")
    return minimize_weak_det(det)

