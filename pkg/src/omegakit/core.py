"""Data model for omega-automata, lasso words and runs, plus the exact
membership, emptiness and inclusion procedures every other module leans on.

Acceptance conditions are compiled into a small positive formula over
``Inf(X)`` / ``Fin(X)`` atoms and brought into disjunctive normal form.
Each disjunct ``Fin(F1) & ... & Inf(I1) & ...`` is decided on a graph by
deleting the edges hit by some ``Fin`` atom and looking for a nontrivial
strongly connected component that touches every ``Inf`` atom.  That test
is exact for all condition types, so the same engine answers membership
on a lasso product, emptiness, and inclusion against deterministic
automata.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Hashable, Iterable, Iterator, NamedTuple, Sequence

KINDS = ("trivial", "buchi", "cobuchi", "weak", "genbuchi", "parity", "rabin", "streett", "muller")

MULLER_UNIVERSE_LIMIT = 16


class OmegaError(ValueError):
    """Raised for malformed inputs or unsupported operations."""


def _elem_key(x):
    # states are ints, transitions are (p, a, q) triples; keep ints first
    return (0, x, 0, 0) if isinstance(x, int) else (1,) + tuple(x)


def sorted_elems(xs: Iterable) -> list:
    return sorted(xs, key=_elem_key)


# ---------------------------------------------------------------------------
# alphabet and words


@dataclass(frozen=True)
class SymbolAlphabet:
    symbols: tuple

    def __init__(self, symbols: Iterable[str]):
        if isinstance(symbols, str):
            symbols = symbols.split() if " " in symbols else list(symbols)
        syms = tuple(str(s) for s in symbols)
        if not syms:
            raise OmegaError("alphabet must not be empty")
        if len(set(syms)) != len(syms):
            raise OmegaError("duplicate symbols in alphabet")
        for s in syms:
            if not s or any(c.isspace() for c in s):
                raise OmegaError(f"bad symbol name {s!r}")
        object.__setattr__(self, "symbols", syms)

    def __len__(self) -> int:
        return len(self.symbols)

    def __iter__(self):
        return iter(self.symbols)

    @cached_property
    def _index(self) -> dict:
        return {s: i for i, s in enumerate(self.symbols)}

    def index(self, sym) -> int:
        if isinstance(sym, int) and not isinstance(sym, bool):
            if 0 <= sym < len(self.symbols):
                return sym
            raise OmegaError(f"symbol index {sym} out of range")
        try:
            return self._index[str(sym)]
        except KeyError:
            raise OmegaError(f"symbol {sym!r} not in alphabet") from None


def _symbol_seq(x) -> tuple:
    if isinstance(x, str):
        return tuple(x.split()) if (" " in x or "\t" in x) else tuple(x)
    return tuple(str(s) for s in x)


@dataclass(frozen=True)
class LassoWord:
    """The ultimately periodic word ``prefix . period^omega``.

    Strings are split into single characters unless they contain
    whitespace, so ``LassoWord("01", "1")`` and
    ``LassoWord(["0", "1"], ["1"])`` denote the same word.
    """

    prefix: tuple
    period: tuple

    def __init__(self, prefix=(), period=()):
        object.__setattr__(self, "prefix", _symbol_seq(prefix))
        object.__setattr__(self, "period", _symbol_seq(period))
        if not self.period:
            raise OmegaError("empty period")

    def letter(self, i: int) -> str:
        if i < len(self.prefix):
            return self.prefix[i]
        return self.period[(i - len(self.prefix)) % len(self.period)]

    def unrolled(self, k: int) -> "LassoWord":
        return LassoWord(self.prefix, self.period * k)

    def shifted(self, k: int) -> "LassoWord":
        """Move ``k`` letters from the periodic part into the prefix."""
        pre = tuple(self.letter(i) for i in range(len(self.prefix) + k))
        p = len(self.period)
        rot = self.period[k % p:] + self.period[: k % p]
        return LassoWord(pre, rot)

    def __str__(self) -> str:
        return " ".join(self.prefix) + ";" + " ".join(self.period)


class LassoRun(NamedTuple):
    prefix_states: tuple
    period_states: tuple


def all_lassos(symbols: Sequence[str], max_prefix: int, max_period: int) -> Iterator[LassoWord]:
    """Every lasso with ``|u| <= max_prefix`` and ``1 <= |v| <= max_period``."""
    for lu in range(max_prefix + 1):
        for u in itertools.product(symbols, repeat=lu):
            for lv in range(1, max_period + 1):
                for v in itertools.product(symbols, repeat=lv):
                    yield LassoWord(u, v)


# ---------------------------------------------------------------------------
# acceptance conditions


def _fs(xs) -> frozenset:
    return frozenset(tuple(x) if isinstance(x, list) else x for x in xs)


@dataclass(frozen=True)
class Acceptance:
    """A recurrence condition.

    ``data`` depends on ``kind``: a single set for buchi/cobuchi/weak, a
    tuple of sets for genbuchi, sorted ``(element, priority)`` pairs for
    parity (smallest priority seen infinitely often must be even), tuples
    of set pairs for rabin and streett, and a frozenset of sets for muller.
    Elements are state ids, or ``(p, a, q)`` transitions when
    ``on_transitions`` is set.
    """

    kind: str
    data: object = None
    on_transitions: bool = False

    def __post_init__(self):
        if self.kind not in KINDS:
            raise OmegaError(f"unknown acceptance kind {self.kind!r}")

    # constructors -------------------------------------------------------
    @classmethod
    def trivial(cls) -> "Acceptance":
        return cls("trivial", None)

    @classmethod
    def buchi(cls, s, on_transitions=False) -> "Acceptance":
        return cls("buchi", _fs(s), on_transitions)

    @classmethod
    def cobuchi(cls, s, on_transitions=False) -> "Acceptance":
        return cls("cobuchi", _fs(s), on_transitions)

    @classmethod
    def weak(cls, s, on_transitions=False) -> "Acceptance":
        return cls("weak", _fs(s), on_transitions)

    @classmethod
    def genbuchi(cls, sets, on_transitions=False) -> "Acceptance":
        return cls("genbuchi", tuple(_fs(s) for s in sets), on_transitions)

    @classmethod
    def parity(cls, prio: dict, on_transitions=False) -> "Acceptance":
        items = tuple(sorted(((tuple(k) if isinstance(k, list) else k, int(v)) for k, v in prio.items()),
                             key=lambda kv: _elem_key(kv[0])))
        if any(v < 0 for _, v in items):
            raise OmegaError("priorities must be natural numbers")
        return cls("parity", items, on_transitions)

    @classmethod
    def rabin(cls, pairs, on_transitions=False) -> "Acceptance":
        return cls("rabin", tuple((_fs(l), _fs(u)) for l, u in pairs), on_transitions)

    @classmethod
    def streett(cls, pairs, on_transitions=False) -> "Acceptance":
        return cls("streett", tuple((_fs(r), _fs(g)) for r, g in pairs), on_transitions)

    @classmethod
    def muller(cls, family, on_transitions=False) -> "Acceptance":
        return cls("muller", frozenset(_fs(m) for m in family), on_transitions)

    # views --------------------------------------------------------------
    @property
    def priority(self) -> dict:
        if self.kind != "parity":
            raise OmegaError("not a parity condition")
        return dict(self.data)

    @property
    def sets(self) -> tuple:
        if self.kind in ("buchi", "cobuchi", "weak"):
            return (self.data,)
        if self.kind == "genbuchi":
            return self.data
        raise OmegaError(f"{self.kind} condition has no plain sets")

    @property
    def pairs(self) -> tuple:
        if self.kind not in ("rabin", "streett"):
            raise OmegaError("not a pair condition")
        return self.data

    @property
    def family(self) -> frozenset:
        if self.kind != "muller":
            raise OmegaError("not a muller condition")
        return self.data

    def elements(self) -> set:
        """All states/transitions mentioned by the condition."""
        k, d = self.kind, self.data
        if k == "trivial":
            return set()
        if k in ("buchi", "cobuchi", "weak"):
            return set(d)
        if k == "genbuchi":
            return set().union(*d) if d else set()
        if k == "parity":
            return {e for e, _ in d}
        if k in ("rabin", "streett"):
            out = set()
            for a, b in d:
                out |= a | b
            return out
        out = set()
        for m in d:
            out |= m
        return out


def satisfies(acc: Acceptance, inf: Iterable) -> bool:
    """Evaluate the condition on the set of elements seen infinitely often."""
    inf = frozenset(inf)
    k, d = acc.kind, acc.data
    if k == "trivial":
        return True
    if k == "buchi":
        return bool(inf & d)
    if k in ("cobuchi", "weak"):
        return inf <= d
    if k == "genbuchi":
        return all(inf & s for s in d)
    if k == "parity":
        pr = dict(d)
        vals = [pr[x] for x in inf if x in pr]
        if len(vals) != len(inf):
            raise OmegaError("priority missing for some element")
        return bool(vals) and min(vals) % 2 == 0
    if k == "rabin":
        return any(not (inf & l) and inf & u for l, u in d)
    if k == "streett":
        return all(not (inf & r) or inf & g for r, g in d)
    return inf in d


# ---------------------------------------------------------------------------
# automata


Transition = tuple  # (src, symbol index, dst)


@dataclass(frozen=True)
class Automaton:
    alphabet: SymbolAlphabet
    num_states: int
    initial: frozenset
    transitions: frozenset
    acceptance: Acceptance = field(default_factory=Acceptance.trivial)

    def __init__(self, alphabet, num_states: int, initial, transitions, acceptance: Acceptance | None = None):
        if not isinstance(alphabet, SymbolAlphabet):
            alphabet = SymbolAlphabet(alphabet)
        object.__setattr__(self, "alphabet", alphabet)
        object.__setattr__(self, "num_states", int(num_states))
        object.__setattr__(self, "initial", frozenset(initial))
        object.__setattr__(self, "transitions", frozenset(tuple(t) for t in transitions))
        object.__setattr__(self, "acceptance", acceptance or Acceptance.trivial())
        self._validate()

    def _validate(self):
        n, m = self.num_states, len(self.alphabet)
        if n < 0:
            raise OmegaError("negative state count")
        for q in self.initial:
            if not (isinstance(q, int) and 0 <= q < n):
                raise OmegaError(f"undeclared state {q}")
        for t in self.transitions:
            if len(t) != 3:
                raise OmegaError(f"malformed transition {t}")
            p, a, q = t
            if not (0 <= p < n and 0 <= q < n):
                raise OmegaError(f"undeclared state in transition {t}")
            if not (0 <= a < m):
                raise OmegaError(f"symbol index out of range in transition {t}")
        acc = self.acceptance
        for e in acc.elements():
            if acc.on_transitions:
                if e not in self.transitions:
                    raise OmegaError(f"acceptance mentions unknown transition {e}")
            elif not (isinstance(e, int) and 0 <= e < n):
                raise OmegaError(f"undeclared state {e}")
        if acc.kind == "parity":
            universe = self.transitions if acc.on_transitions else range(n)
            pr = acc.priority
            missing = [x for x in universe if x not in pr]
            if missing:
                raise OmegaError(f"priority missing for {missing[0]}")

    # convenience --------------------------------------------------------
    @property
    def states(self) -> range:
        return range(self.num_states)

    @cached_property
    def succ(self) -> dict:
        """``(p, a) -> tuple of successors``."""
        out: dict = {}
        for p, a, q in sorted(self.transitions):
            out.setdefault((p, a), []).append(q)
        return {k: tuple(v) for k, v in out.items()}

    @cached_property
    def pred(self) -> dict:
        """``(q, a) -> tuple of predecessors``."""
        out: dict = {}
        for p, a, q in sorted(self.transitions):
            out.setdefault((q, a), []).append(p)
        return {k: tuple(v) for k, v in out.items()}

    @cached_property
    def out_edges(self) -> tuple:
        """Per state, the sorted tuple of outgoing transitions."""
        out = [[] for _ in range(self.num_states)]
        for t in sorted(self.transitions):
            out[t[0]].append(t)
        return tuple(tuple(x) for x in out)

    def successors(self, p: int, a: int) -> tuple:
        return self.succ.get((p, a), ())

    def post(self, states: Iterable[int], a: int) -> frozenset:
        s = self.succ
        out = set()
        for p in states:
            out.update(s.get((p, a), ()))
        return frozenset(out)

    def with_acceptance(self, acc: Acceptance) -> "Automaton":
        return Automaton(self.alphabet, self.num_states, self.initial, self.transitions, acc)

    def with_initial(self, initial) -> "Automaton":
        return Automaton(self.alphabet, self.num_states, initial, self.transitions, self.acceptance)

    def word_indices(self, word: Iterable) -> tuple:
        return tuple(self.alphabet.index(s) for s in word)

    @cached_property
    def is_deterministic(self) -> bool:
        return classify_determinism(self).forward_deterministic

    @cached_property
    def is_backward_deterministic(self) -> bool:
        return check_backward_deterministic(self)


# ---------------------------------------------------------------------------
# graph helpers


def sccs(nodes: Iterable[Hashable], adj: Callable[[Hashable], Iterable[Hashable]]) -> list[list]:
    """Tarjan's algorithm, iterative; components come out in reverse
    topological order (sinks first)."""
    index: dict = {}
    low: dict = {}
    on_stack: set = set()
    stack: list = []
    out: list = []
    counter = 0
    for root in nodes:
        if root in index:
            continue
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        work = [(root, iter(adj(root)))]
        while work:
            v, it = work[-1]
            pushed = False
            for w in it:
                if w not in index:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(adj(w))))
                    pushed = True
                    break
                if w in on_stack and index[w] < low[v]:
                    low[v] = index[w]
            if pushed:
                continue
            work.pop()
            if work:
                u = work[-1][0]
                if low[v] < low[u]:
                    low[u] = low[v]
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.append(w)
                    if w == v:
                        break
                out.append(comp)
    return out


def reachable(starts: Iterable, adj: Callable) -> set:
    seen = set(starts)
    todo = list(seen)
    while todo:
        v = todo.pop()
        for w in adj(v):
            if w not in seen:
                seen.add(w)
                todo.append(w)
    return seen


def automaton_sccs(aut: Automaton) -> list[frozenset]:
    adj = [sorted({q for (_, _, q) in aut.out_edges[p]}) for p in aut.states]
    return [frozenset(c) for c in sccs(aut.states, lambda p: adj[p])]


# ---------------------------------------------------------------------------
# acceptance formulas in disjunctive normal form
#
# An atom is (component, on_transitions, elements).  A disjunct is a pair
# (fins, infs) of atom tuples.  Edge labels are tuples holding one
# transition per product component.


def _atom_hits(atom, label) -> bool:
    comp, trans, s = atom
    t = label[comp]
    if trans == "flag":
        return t is True
    return (t in s) if trans else (t[0] in s)


def _universe(aut: Automaton, acc: Acceptance) -> frozenset:
    return aut.transitions if acc.on_transitions else frozenset(aut.states)


def _and(a: list, b: list) -> list:
    return [(fa + fb, ia + ib) for fa, ia in a for fb, ib in b]


def acceptance_dnf(aut: Automaton, negate: bool = False, comp: int = 0) -> list:
    acc = aut.acceptance
    k, d, tr = acc.kind, acc.data, acc.on_transitions
    U = _universe(aut, acc)

    def atom(s):
        return (comp, tr, frozenset(s))

    TRUE = [((), ())]
    FALSE: list = []

    if k == "trivial":
        return FALSE if negate else TRUE
    if k == "buchi":
        return [((atom(d),), ())] if negate else [((), (atom(d),))]
    if k in ("cobuchi", "weak"):
        return [((), (atom(U - d),))] if negate else [((atom(U - d),), ())]
    if k == "genbuchi":
        if negate:
            return [((atom(s),), ()) for s in d]
        return [((), tuple(atom(s) for s in d))]
    if k == "parity":
        pr = dict(d)
        parity = 1 if negate else 0
        out = []
        for p in sorted(set(pr.values())):
            if p % 2 != parity:
                continue
            below = [x for x, v in pr.items() if v < p]
            here = [x for x, v in pr.items() if v == p]
            out.append(((atom(below),) if below else (), (atom(here),)))
        return out
    if k == "rabin" and not negate or k == "streett" and negate:
        # disjunction over pairs of Fin(first) & Inf(second); streett negated
        # is sum of Inf(R) & Fin(G)
        if k == "rabin":
            return [((atom(l),), (atom(u),)) for l, u in d]
        return [((atom(g),), (atom(r),)) for r, g in d]
    if k == "streett" or k == "rabin":
        # conjunction over pairs of Fin(a) | Inf(b)
        out = TRUE
        for a, b in d:
            if k == "rabin":  # negated rabin: Inf(L) | Fin(U)
                a, b = b, a
            out = _and(out, [((atom(a),), ()), ((), (atom(b),))])
        return out
    # muller
    fam = d
    if negate:
        if len(U) > MULLER_UNIVERSE_LIMIT:
            raise OmegaError("muller universe too large to negate")
        elems = sorted_elems(U)
        fam = set()
        for r in range(1, len(elems) + 1):
            for c in itertools.combinations(elems, r):
                if frozenset(c) not in d:
                    fam.add(frozenset(c))
    return [((atom(U - m),), tuple(atom([x]) for x in sorted_elems(m))) for m in fam if m]


# ---------------------------------------------------------------------------
# accepting lasso search on an explicit graph


class _Graph:
    """Reachable part of an implicit graph whose edges carry a symbol and a
    label tuple."""

    def __init__(self, starts: Iterable, succ: Callable):
        self.starts = list(dict.fromkeys(starts))
        self.edges: dict = {}
        seen = set(self.starts)
        todo = list(self.starts)
        while todo:
            v = todo.pop()
            es = list(succ(v))
            self.edges[v] = es
            for _, w, _ in es:
                if w not in seen:
                    seen.add(w)
                    todo.append(w)
        self.nodes = list(self.edges)

    def path(self, sources, target_set, allowed=None):
        """BFS from ``sources`` to any node of ``target_set``; returns the
        node and the list of edges taken."""
        parent = {s: None for s in sources}
        dq = deque(sources)
        while dq:
            v = dq.popleft()
            if v in target_set:
                edges = []
                while parent[v] is not None:
                    u, e = parent[v]
                    edges.append(e)
                    v = u
                return edges[::-1]
            for e in self.edges[v]:
                w = e[1]
                if w in parent or (allowed is not None and w not in allowed):
                    continue
                parent[w] = (v, (v,) + e)
                dq.append(w)
        return None


def _find_accepting_cycle(g: _Graph, dnf: list):
    """Return ``(prefix_edges, cycle_edges)`` of an accepting lasso, or None.

    An edge in the result is ``(src, sym, dst, label)``.
    """
    if not g.starts:
        return None
    for fins, infs in dnf:
        kept = {}
        for v in g.nodes:
            kept[v] = [e for e in g.edges[v] if not any(_atom_hits(f, e[2]) for f in fins)]
        for comp in sccs(g.nodes, lambda v: [e[1] for e in kept[v]]):
            cs = set(comp)
            inner = [(v,) + e for v in comp for e in kept[v] if e[1] in cs]
            if not inner:
                continue
            needed = []
            ok = True
            for a in infs:
                hit = next((e for e in inner if _atom_hits(a, e[3])), None)
                if hit is None:
                    ok = False
                    break
                needed.append(hit)
            if not ok:
                continue
            if not needed:
                needed = [inner[0]]
            anchor = needed[0][0]
            prefix = g.path(g.starts, {anchor})
            sub = _Graph([anchor], lambda v: [e for e in kept[v] if e[1] in cs])
            cycle = []
            cur = anchor
            for e in needed:
                cycle += sub.path([cur], {e[0]})
                cycle.append(e)
                cur = e[2]
            cycle += sub.path([cur], {anchor})
            return prefix, cycle
    return None


# ---------------------------------------------------------------------------
# membership and emptiness


def _word_positions(aut: Automaton, w: LassoWord):
    u = aut.word_indices(w.prefix)
    v = aut.word_indices(w.period)
    word = u + v
    L = len(word)

    def nxt(i):
        return i + 1 if i + 1 < L else len(u)

    return word, nxt


def accepts_lasso(aut: Automaton, w: LassoWord, witness: bool = False):
    """Decide ``u v^omega in L(aut)``.  With ``witness=True`` returns a pair
    ``(verdict, LassoRun or None)``."""
    word, nxt = _word_positions(aut, w)
    succ = aut.succ

    def edges(node):
        q, i = node
        a = word[i]
        j = nxt(i)
        return [(a, (q2, j), ((q, a, q2),)) for q2 in succ.get((q, a), ())]

    g = _Graph([(q, 0) for q in sorted(aut.initial)], edges)
    res = _find_accepting_cycle(g, acceptance_dnf(aut))
    if not witness:
        return res is not None
    if res is None:
        return False, None
    prefix, cycle = res
    # product nodes are (state, position); the cycle lies in the periodic
    # part, so the prefix covers at least |u| positions
    pre_states = tuple(e[0][0] for e in prefix)
    cyc_states = tuple(e[0][0] for e in cycle)
    return True, LassoRun(pre_states, cyc_states)


def run_inf_set(aut: Automaton, run: LassoRun, w: LassoWord) -> frozenset:
    """States or transitions visited infinitely often by a lasso run."""
    states = list(run.prefix_states) + list(run.period_states)
    start = len(run.prefix_states)
    k = len(run.period_states)
    if not aut.acceptance.on_transitions:
        return frozenset(run.period_states)
    out = set()
    for j in range(k):
        i = start + j
        p = states[i]
        q = states[start + (j + 1) % k]
        out.add((p, aut.alphabet.index(w.letter(i)), q))
    return frozenset(out)


def check_run(aut: Automaton, run: LassoRun, w: LassoWord) -> bool:
    """Replay a lasso run; true iff it is an initial, well-formed and
    recurring run on ``w``."""
    states = list(run.prefix_states) + list(run.period_states)
    if not run.period_states or states[0] not in aut.initial:
        return False
    if len(run.prefix_states) < len(w.prefix) or len(run.period_states) % len(w.period):
        return False
    start = len(run.prefix_states)
    k = len(run.period_states)
    for i in range(start + k):
        p = states[i]
        q = states[i + 1] if i + 1 < start + k else states[start]
        if (p, aut.alphabet.index(w.letter(i)), q) not in aut.transitions:
            return False
    return satisfies(aut.acceptance, run_inf_set(aut, run, w))


def is_empty(aut: Automaton, witness: bool = False):
    """Emptiness check; with ``witness=True`` returns ``(empty, LassoWord or None)``."""
    g = _Graph(sorted(aut.initial), lambda q: [(t[1], t[2], (t,)) for t in aut.out_edges[q]])
    res = _find_accepting_cycle(g, acceptance_dnf(aut))
    if not witness:
        return res is None
    if res is None:
        return True, None
    prefix, cycle = res
    sym = aut.alphabet.symbols
    return False, LassoWord([sym[e[1]] for e in prefix], [sym[e[1]] for e in cycle])


def _live_nodes(g: _Graph, dnf: list) -> set:
    """Nodes of ``g`` from which some accepting cycle is reachable."""
    good = set()
    for fins, infs in dnf:
        kept = {v: [e for e in g.edges[v] if not any(_atom_hits(f, e[2]) for f in fins)] for v in g.nodes}
        for comp in sccs(g.nodes, lambda v: [e[1] for e in kept[v]]):
            cs = set(comp)
            inner = [e for v in comp for e in kept[v] if e[1] in cs]
            if inner and all(any(_atom_hits(a, e[2]) for e in inner) for a in infs):
                good |= cs
    rev: dict = {}
    for v in g.nodes:
        for e in g.edges[v]:
            rev.setdefault(e[1], []).append(v)
    return reachable(good, lambda x: rev.get(x, ()))


def count_accepting_runs(aut: Automaton, w: LassoWord) -> int:
    """Number of accepting runs on ``w``, saturating at 2.

    Two runs are different iff they disagree at some position; the pair
    product carries a flag recording that a disagreement has happened, and
    two distinct accepting runs exist iff that product has an accepting
    cycle (both components recurring) among flagged nodes.
    """
    word, nxt = _word_positions(aut, w)
    succ = aut.succ

    def single(node):
        q, i = node
        a = word[i]
        return [(a, (q2, nxt(i)), ((q, a, q2),)) for q2 in succ.get((q, a), ())]

    live = _live_nodes(_Graph([(q, 0) for q in sorted(aut.initial)], single), acceptance_dnf(aut))
    if not any((q, 0) in live for q in aut.initial):
        return 0

    def edges(node):
        q1, q2, i, diff = node
        a = word[i]
        j = nxt(i)
        return [(a, (r1, r2, j, diff or r1 != r2), ((q1, a, r1), (q2, a, r2)))
                for r1 in succ.get((q1, a), ()) if (r1, j) in live
                for r2 in succ.get((q2, a), ()) if (r2, j) in live]

    init = [q for q in sorted(aut.initial) if (q, 0) in live]
    g = _Graph([(p, q, 0, p != q) for p in init for q in init], edges)
    flagged = [v for v in g.nodes if v[3]]
    if not flagged:
        return 1
    # every flagged node is reachable from an initial pair, and flagged
    # nodes only lead to flagged nodes
    sub = _Graph(flagged, lambda v: g.edges[v])
    both = _and(acceptance_dnf(aut, comp=0), acceptance_dnf(aut, comp=1))
    return 2 if _find_accepting_cycle(sub, both) is not None else 1


# ---------------------------------------------------------------------------
# determinism


class Determinism(NamedTuple):
    forward_deterministic: bool
    forward_complete: bool
    backward_transition_deterministic: bool


def classify_determinism(aut: Automaton) -> Determinism:
    m = len(aut.alphabet)
    fwd = len(aut.initial) == 1 and all(len(v) <= 1 for v in aut.succ.values())
    complete = len(aut.initial) >= 1 and all(
        len(aut.succ.get((p, a), ())) >= 1 for p in aut.states for a in range(m))
    bwd = all(len(aut.pred.get((q, a), ())) == 1 for q in aut.states for a in range(m))
    return Determinism(fwd, complete, bwd)


# ---------------------------------------------------------------------------
# small structural utilities


def complete(aut: Automaton) -> Automaton:
    """Add a rejecting sink so that every state has a successor on every
    symbol.  The language is unchanged."""
    m = len(aut.alphabet)
    n = aut.num_states
    missing = [(p, a) for p in aut.states for a in range(m) if not aut.succ.get((p, a))]
    if not missing and aut.initial:
        return aut
    sink = n
    new_t = set(aut.transitions)
    sink_t = {(p, a, sink) for p, a in missing} | {(sink, a, sink) for a in range(m)}
    new_t |= sink_t
    init = aut.initial or {sink}
    acc = aut.acceptance
    k, d, tr = acc.kind, acc.data, acc.on_transitions
    old_u = aut.transitions if tr else frozenset(aut.states)
    if k == "trivial":
        acc = Acceptance("buchi", old_u, tr)
    elif k == "genbuchi" and not d:
        acc = Acceptance("genbuchi", (old_u,), tr)
    elif k == "parity":
        pr = dict(d)
        for x in (sink_t if tr else [sink]):
            pr[x] = 1
        acc = Acceptance.parity(pr, tr)
    elif k == "streett":
        acc = Acceptance("streett", d + ((frozenset(sink_t if tr else [sink]), frozenset()),), tr)
    return Automaton(aut.alphabet, n + 1, init, new_t, acc)


def restrict(aut: Automaton, keep: Iterable[int]) -> Automaton:
    """Sub-automaton on the states ``keep``, renumbered in increasing order."""
    keep = sorted(set(keep))
    ren = {q: i for i, q in enumerate(keep)}
    trans = {(ren[p], a, ren[q]) for p, a, q in aut.transitions if p in ren and q in ren}
    init = {ren[q] for q in aut.initial if q in ren}
    acc = _rename_acceptance(aut.acceptance, ren)
    return Automaton(aut.alphabet, len(keep), init, trans, acc)


def _rename_acceptance(acc: Acceptance, ren: dict) -> Acceptance:
    tr = acc.on_transitions

    def m(s):
        if tr:
            return frozenset((ren[p], a, ren[q]) for p, a, q in s if p in ren and q in ren)
        return frozenset(ren[q] for q in s if q in ren)

    k, d = acc.kind, acc.data
    if k == "trivial":
        return acc
    if k in ("buchi", "cobuchi", "weak"):
        return Acceptance(k, m(d), tr)
    if k == "genbuchi":
        return Acceptance(k, tuple(m(s) for s in d), tr)
    if k == "parity":
        out = {}
        for e, p in d:
            e2 = m([e])
            if e2:
                out[next(iter(e2))] = p
        return Acceptance.parity(out, tr)
    if k in ("rabin", "streett"):
        return Acceptance(k, tuple((m(a), m(b)) for a, b in d), tr)
    fam = set()
    for s in d:
        # a muller set touching removed elements can never be inf of a run
        if len(m(s)) == len(s):
            fam.add(m(s))
    return Acceptance("muller", frozenset(fam), tr)


def trim(aut: Automaton) -> Automaton:
    """Keep states that are reachable and from which some accepting run
    starts."""
    reach = reachable(aut.initial, lambda p: [t[2] for t in aut.out_edges[p]])
    live = set()
    dnf = acceptance_dnf(aut)
    g = _Graph(sorted(reach), lambda q: [(t[1], t[2], (t,)) for t in aut.out_edges[q]])
    for fins, infs in dnf:
        kept = {v: [e for e in g.edges[v] if not any(_atom_hits(f, e[2]) for f in fins)] for v in g.nodes}
        for comp in sccs(g.nodes, lambda v: [e[1] for e in kept[v]]):
            cs = set(comp)
            inner = [(v, e) for v in comp for e in kept[v] if e[1] in cs]
            if inner and all(any(_atom_hits(a, e[2]) for _, e in inner) for a in infs):
                live |= cs
    back: dict = {}
    for p, a, q in aut.transitions:
        back.setdefault(q, []).append(p)
    live = reachable(live, lambda q: back.get(q, ())) & reach
    return restrict(aut, live)


# ---------------------------------------------------------------------------
# generic reduction to transition-based Buchi form


class TBuchi(NamedTuple):
    """Plain transition-Buchi view: ``n`` states, initial states, transition
    list ``(p, a, q)`` and the set of accepting transitions."""

    n: int
    initial: frozenset
    trans: tuple
    accepting: frozenset


def to_tbuchi(aut: Automaton) -> TBuchi:
    """Transition-Buchi automaton for ``L(aut)``; copies the automaton once
    per acceptance disjunct with a round-robin counter over its Inf atoms."""
    acc = aut.acceptance
    if acc.kind == "buchi":
        if acc.on_transitions:
            return TBuchi(aut.num_states, aut.initial, tuple(sorted(aut.transitions)), acc.data)
        a = frozenset(t for t in aut.transitions if t[0] in acc.data)
        return TBuchi(aut.num_states, aut.initial, tuple(sorted(aut.transitions)), a)
    dnf = acceptance_dnf(aut)
    ids: dict = {}

    def sid(x):
        if x not in ids:
            ids[x] = len(ids)
        return ids[x]

    for q in aut.states:
        sid(("pre", q))
    trans = []
    accepting = []
    for d, (fins, infs) in enumerate(dnf):
        k = max(1, len(infs))
        for t in sorted(aut.transitions):
            p, a, q = t
            trans.append((sid(("pre", p)), a, sid(("pre", q))))
            if any(_atom_hits(f, (t,)) for f in fins):
                continue
            trans.append((sid(("pre", p)), a, sid((d, 0, q))))
            for j in range(k):
                hit = not infs or _atom_hits(infs[j], (t,))
                j2 = (j + 1) % k if hit else j
                e = (sid((d, j, p)), a, sid((d, j2, q)))
                trans.append(e)
                if hit and j == k - 1:
                    accepting.append(e)
    init = frozenset(sid(("pre", q)) for q in aut.initial)
    return TBuchi(len(ids), init, tuple(sorted(set(trans))), frozenset(accepting))


def to_buchi(aut: Automaton) -> Automaton:
    """State-based Buchi automaton recognizing ``L(aut)``."""
    acc = aut.acceptance
    if acc.kind == "buchi" and not acc.on_transitions:
        return aut
    tb = to_tbuchi(aut)
    return tbuchi_to_state_based(aut.alphabet, tb)


def tbuchi_to_state_based(alphabet, tb: TBuchi) -> Automaton:
    """States ``(q, flag)`` where the flag records that the last transition
    was accepting; only reachable pairs are kept."""
    ids: dict = {}
    out: dict = {}
    for p, a, q in tb.trans:
        out.setdefault(p, []).append((a, q, (p, a, q) in tb.accepting))
    start = [(q, 0) for q in sorted(tb.initial)]
    for s in start:
        ids.setdefault(s, len(ids))
    todo = list(start)
    trans = set()
    while todo:
        s = todo.pop()
        for a, q, f in out.get(s[0], ()):
            t = (q, int(f))
            if t not in ids:
                ids[t] = len(ids)
                todo.append(t)
            trans.add((ids[s], a, ids[t]))
    b = {i for (q, f), i in ids.items() if f}
    return Automaton(alphabet, len(ids), {ids[s] for s in start}, trans, Acceptance.buchi(b))


# ---------------------------------------------------------------------------
# inclusion and equivalence


def _product_counterexample(x: Automaton, y: Automaton):
    """Lasso in ``L(x) minus L(y)`` for forward-deterministic ``y``."""
    y = complete(y)
    (y0,) = tuple(y.initial)
    succ_x, succ_y = x.succ, y.succ
    m = len(x.alphabet)

    def edges(node):
        p, q = node
        out = []
        for a in range(m):
            (q2,) = succ_y[(q, a)]
            for p2 in succ_x.get((p, a), ()):
                out.append((a, (p2, q2), ((p, a, p2), (q, a, q2))))
        return out

    g = _Graph([(p, y0) for p in sorted(x.initial)], edges)
    dnf = _and(acceptance_dnf(x, comp=0), acceptance_dnf(y, negate=True, comp=1))
    res = _find_accepting_cycle(g, dnf)
    if res is None:
        return None
    sym = x.alphabet.symbols
    return LassoWord([sym[e[1]] for e in res[0]], [sym[e[1]] for e in res[1]])


def _mul(x: tuple, y: tuple) -> tuple:
    """Compose two transition profiles ``(reach, reach_through_accepting)``
    given as tuples of row bitmasks."""
    rx, bx = x
    ry, by = y
    r = []
    b = []
    for ri, bi in zip(rx, bx):
        acc_r = 0
        acc_b = 0
        while ri:
            low = ri & -ri
            j = low.bit_length() - 1
            acc_r |= ry[j]
            acc_b |= by[j]
            if bi & low:
                acc_b |= ry[j]
            ri ^= low
        r.append(acc_r)
        b.append(acc_b)
    return tuple(r), tuple(b)


def letter_profiles(tb: TBuchi, m: int) -> list:
    out = []
    for a in range(m):
        r = [0] * tb.n
        b = [0] * tb.n
        for t in tb.trans:
            p, c, q = t
            if c == a:
                r[p] |= 1 << q
                if t in tb.accepting:
                    b[p] |= 1 << q
        out.append((tuple(r), tuple(b)))
    return out


def profile_accepts(tb: TBuchi, s: tuple, e: tuple) -> bool:
    """Whether ``x y^omega`` is accepted when ``x`` has profile ``s`` and
    ``y`` has idempotent profile ``e`` with ``s e = s``."""
    reach = 0
    for q0 in tb.initial:
        reach |= s[0][q0]
    q = 0
    while reach:
        if reach & 1 and (e[1][q] >> q) & 1:
            return True
        reach >>= 1
        q += 1
    return False


def profile_closure(tbs: Sequence[TBuchi], m: int, limit: int | None = None) -> dict:
    """All joint profiles of nonempty words, each with a shortest
    representative word (tuple of symbol indices)."""
    letters = [tuple(lp[a] for lp in (letter_profiles(tb, m) for tb in tbs)) for a in range(m)]
    # letters[a] is the joint profile of the one-letter word a
    rep: dict = {}
    dq = deque()
    for a in range(m):
        if letters[a] not in rep:
            rep[letters[a]] = (a,)
            dq.append(letters[a])
    while dq:
        p = dq.popleft()
        w = rep[p]
        for a in range(m):
            q = tuple(_mul(x, y) for x, y in zip(p, letters[a]))
            if q not in rep:
                rep[q] = w + (a,)
                dq.append(q)
                if limit is not None and len(rep) > limit:
                    raise OmegaError("profile closure exceeds limit")
    return rep


class ProfileComplement:
    """Complement of ``L(y)`` driven by transition profiles.

    Every word factors as ``u v1 v2 ...`` where all blocks share one
    idempotent profile ``E``.  Such a word is accepted iff some state ``q``
    reachable on ``u v1`` has a path ``q -> q`` through an accepting
    transition on words of profile ``E``; so membership depends only on the
    subset ``P`` reached on ``u`` and on ``E``.  The complement runs the
    subset construction on the prefix, guesses a rejecting ``(P, E)``, then
    tracks the profile of the current block and takes an accepting step
    whenever a block of profile ``E`` is closed.

    States are ``(-1, P)`` in the prefix phase (``P`` a bitmask) and
    ``(E, X)`` in the block phase, with ``X`` a profile id or ``None`` for
    the empty block.
    """

    def __init__(self, y: Automaton):
        self.tb = to_tbuchi(y)
        m = len(y.alphabet)
        self.m = m
        rep = profile_closure([self.tb], m)
        self.profiles = [p[0] for p in rep]
        ids = {p: i for i, p in enumerate(self.profiles)}
        letters = letter_profiles(self.tb, m)
        self.letter_id = [ids[lp] for lp in letters]
        self.step = [[ids[_mul(p, letters[a])] for a in range(m)] for p in self.profiles]
        self.idempotents = [e for e, pe in enumerate(self.profiles) if _mul(pe, pe) == pe]
        self.letters = letters
        self._bad: dict = {}
        self.init_mask = 0
        for q in self.tb.initial:
            self.init_mask |= 1 << q

    def post(self, mask: int, a: int) -> int:
        rows = self.letters[a][0]
        out = 0
        while mask:
            low = mask & -mask
            out |= rows[low.bit_length() - 1]
            mask ^= low
        return out

    def bad(self, mask: int) -> list:
        """Idempotents ``E`` for which prefixes reaching ``mask`` are rejected."""
        if mask not in self._bad:
            out = []
            for e in self.idempotents:
                r, b = self.profiles[e]
                reach = 0
                m = mask
                while m:
                    low = m & -m
                    reach |= r[low.bit_length() - 1]
                    m ^= low
                ok = False
                while reach:
                    low = reach & -reach
                    q = low.bit_length() - 1
                    if b[q] & low:
                        ok = True
                        break
                    reach ^= low
                if not ok:
                    out.append(e)
            self._bad[mask] = out
        return self._bad[mask]

    @property
    def is_universal(self) -> bool:
        seen = {self.init_mask}
        todo = [self.init_mask]
        while todo:
            s = todo.pop()
            if self.bad(s):
                return False
            for a in range(self.m):
                t = self.post(s, a)
                if t not in seen:
                    seen.add(t)
                    todo.append(t)
        return True

    def edges(self, state, a):
        """Successors on ``a`` as ``(state, accepting)`` pairs."""
        phase, x = state
        if phase == -1:
            first = self.letter_id[a]
            out = [((-1, self.post(x, a)), False)]
            for e in self.bad(x):
                out.append(((e, first), False))
                if first == e:
                    out.append(((e, None), True))
            return out
        x2 = self.letter_id[a] if x is None else self.step[x][a]
        out = [((phase, x2), False)]
        if x2 == phase:
            out.append(((phase, None), True))
        return out

    def counterexample(self, x: Automaton):
        """A lasso in ``L(x)`` outside ``L(y)``, or None."""
        sx = x.succ
        m = self.m

        def edges(node):
            p, st = node
            out = []
            for a in range(m):
                succ_p = sx.get((p, a), ())
                if not succ_p:
                    continue
                for st2, acc in self.edges(st, a):
                    for p2 in succ_p:
                        out.append((a, (p2, st2), ((p, a, p2), acc)))
            return out

        g = _Graph([(p, (-1, self.init_mask)) for p in sorted(x.initial)], edges)
        dnf = _and(acceptance_dnf(x, comp=0), [((), ((1, "flag", None),))])
        res = _find_accepting_cycle(g, dnf)
        if res is None:
            return None
        sym = x.alphabet.symbols
        return LassoWord([sym[e[1]] for e in res[0]], [sym[e[1]] for e in res[1]])


def _flip_initial_counterexample(x: Automaton, y: Automaton):
    """``y`` is backward deterministic: its complement is ``y`` with the
    complementary set of initial states."""
    yc = y.with_initial(set(y.states) - set(y.initial))
    return intersection_witness(x, yc)


def intersection_witness(x: Automaton, y: Automaton):
    """Some lasso in ``L(x) & L(y)``, or None."""
    sx, sy = x.succ, y.succ
    m = len(x.alphabet)

    def edges(node):
        p, q = node
        out = []
        for a in range(m):
            for p2 in sx.get((p, a), ()):
                for q2 in sy.get((q, a), ()):
                    out.append((a, (p2, q2), ((p, a, p2), (q, a, q2))))
        return out

    g = _Graph([(p, q) for p in sorted(x.initial) for q in sorted(y.initial)], edges)
    dnf = _and(acceptance_dnf(x, comp=0), acceptance_dnf(y, comp=1))
    res = _find_accepting_cycle(g, dnf)
    if res is None:
        return None
    sym = x.alphabet.symbols
    return LassoWord([sym[e[1]] for e in res[0]], [sym[e[1]] for e in res[1]])


def inclusion_counterexample(x: Automaton, y: Automaton):
    """A lasso accepted by ``x`` but not by ``y``, or None when
    ``L(x) <= L(y)``."""
    if x.alphabet != y.alphabet:
        raise OmegaError("alphabets differ")
    empty, w = is_empty(x, witness=True)
    if empty:
        return None
    if not y.initial:
        return w
    if classify_determinism(y).forward_deterministic:
        return _product_counterexample(x, y)
    if y.acceptance.kind in ("buchi", "genbuchi") and classify_determinism(y).backward_transition_deterministic \
            and check_backward_deterministic(y):
        return _flip_initial_counterexample(x, y)
    return ProfileComplement(y).counterexample(x)


def includes(x: Automaton, y: Automaton) -> bool:
    """``L(x) <= L(y)``."""
    return inclusion_counterexample(x, y) is None


def equivalent(a: Automaton, b: Automaton) -> bool:
    return includes(a, b) and includes(b, a)


def equivalence_witness(a: Automaton, b: Automaton):
    """A lasso in the symmetric difference, or None."""
    return inclusion_counterexample(a, b) or inclusion_counterexample(b, a)


# ---------------------------------------------------------------------------
# backward determinism


def _idempotents_recur(aut: Automaton) -> bool:
    """For a backward complete and deterministic automaton with a
    conjunction of ``Inf`` atoms: does every word have a recurring run?

    A finite word acts as a map sending each state to the start of the
    unique path ending there, together with the atoms that path hits.  A
    run on the periodic word of an idempotent element loops at a fixed
    point, so every word has a recurring run iff every idempotent has a
    fixed point whose path hits all atoms.
    """
    ((_, infs),) = acceptance_dnf(aut)
    full = (1 << len(infs)) - 1
    n, m = aut.num_states, len(aut.alphabet)
    pred = aut.pred
    letters = []
    for a in range(m):
        f, marks = [], []
        for q in range(n):
            (p,) = pred[(q, a)]
            f.append(p)
            bits = 0
            for i, atom in enumerate(infs):
                if _atom_hits(atom, ((p, a, q),)):
                    bits |= 1 << i
            marks.append(bits)
        letters.append((tuple(f), tuple(marks)))

    def mul(x, y):  # word of x followed by word of y
        fx, mx = x
        fy, my = y
        return (tuple(fx[fy[q]] for q in range(n)), tuple(mx[fy[q]] | my[q] for q in range(n)))

    seen = set(letters)
    todo = list(seen)
    while todo:
        x = todo.pop()
        if mul(x, x) == x and not any(x[0][q] == q and x[1][q] == full for q in range(n)):
            return False
        for y in letters:
            z = mul(x, y)
            if z not in seen:
                seen.add(z)
                todo.append(z)
    return True


def check_backward_deterministic(aut: Automaton) -> bool:
    """Exactly one recurring run (from any state) on every word, with
    exactly one predecessor per state and symbol."""
    if not classify_determinism(aut).backward_transition_deterministic:
        return False
    m = len(aut.alphabet)
    # at least one recurring run everywhere: the automaton with every state
    # initial is universal
    if aut.acceptance.kind in ("trivial", "buchi", "genbuchi"):
        if not _idempotents_recur(aut):
            return False
    elif not ProfileComplement(aut.with_initial(aut.states)).is_universal:
        return False
    # at most one: no two recurring runs that differ at every position.
    # Runs that agree at a position agree on the whole prefix before it,
    # and backward completeness extends any pair of runs on a suffix.
    succ = aut.succ

    def edges(node):
        p, q = node
        out = []
        for a in range(m):
            for p2 in succ.get((p, a), ()):
                for q2 in succ.get((q, a), ()):
                    if p2 != q2:
                        out.append((a, (p2, q2), ((p, a, p2), (q, a, q2))))
        return out

    starts = [(p, q) for p in aut.states for q in aut.states if p != q]
    g = _Graph(starts, edges)
    dnf = _and(acceptance_dnf(aut, comp=0), acceptance_dnf(aut, comp=1))
    return _find_accepting_cycle(g, dnf) is None
