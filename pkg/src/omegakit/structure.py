"""Loop structure of forward-deterministic automata: signs of loops,
alternating towers, walls and the parity index.

Loops are handled as sets of transitions.  For state-based conditions a
loop over a state set is the set of all transitions induced by it, which
is what a run can realize.  The longest alternating chain below a loop
only needs the maximal sub-loops of the opposite sign, and those are the
strongly connected pieces left after deleting the ``Fin`` part of an
acceptance disjunct, so no subset enumeration is necessary.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations
from typing import NamedTuple

from .core import (Automaton, OmegaError, _atom_hits, acceptance_dnf, classify_determinism,
                   reachable, sccs)

POS, NEG = "+", "-"


class _Loops:
    def __init__(self, aut: Automaton):
        self.aut = aut
        self.reach = reachable(aut.initial, lambda p: [t[2] for t in aut.out_edges[p]])
        self.pos = acceptance_dnf(aut)
        self.neg = acceptance_dnf(aut, negate=True)
        self.state_based = not aut.acceptance.on_transitions
        self.down = lru_cache(maxsize=None)(self._down)

    def sign(self, loop: frozenset) -> str:
        for fins, infs in self.pos:
            if any(_atom_hits(f, (t,)) for f in fins for t in loop):
                continue
            if all(any(_atom_hits(a, (t,)) for t in loop) for a in infs):
                return POS
        return NEG

    def components(self, edges) -> list[frozenset]:
        """Nontrivial strongly connected pieces of an edge set."""
        out: dict = {}
        for t in edges:
            out.setdefault(t[0], []).append(t)
        comps = sccs(sorted(out), lambda v: [t[2] for t in out.get(v, ())])
        res = []
        for c in comps:
            cs = set(c)
            inner = frozenset(t for v in c for t in out.get(v, ()) if t[2] in cs)
            if inner:
                res.append(inner)
        return res

    def top(self) -> list[frozenset]:
        edges = [t for t in self.aut.transitions if t[0] in self.reach]
        return self.components(edges)

    def maximal_subloops(self, loop: frozenset, sign: str, inside: frozenset | None = None):
        """Maximal sub-loops of ``loop`` with the given sign, optionally only
        those containing ``inside``."""
        dnf = self.pos if sign == POS else self.neg
        cands = set()
        for fins, infs in dnf:
            kept = [t for t in loop if not any(_atom_hits(f, (t,)) for f in fins)]
            for c in self.components(kept):
                if inside is not None and not inside <= c:
                    continue
                if all(any(_atom_hits(a, (t,)) for t in c) for a in infs):
                    cands.add(c)
        return [c for c in cands if not any(c < d for d in cands)]

    def _down(self, loop: frozenset) -> int:
        """Height of the longest alternating chain starting at ``loop``."""
        s = self.sign(loop)
        other = NEG if s == POS else POS
        return 1 + max((self.down(d) for d in self.maximal_subloops(loop, other)), default=0)

    def up(self, loop: frozenset) -> int:
        """Height of the longest alternating chain ending at ``loop``."""
        target_sign = self.sign(loop)
        memo: dict = {}

        def g(x):
            # longest alternating chain from x down to loop, or 0 if none
            if x == loop:
                return 1
            if x in memo:
                return memo[x]
            s = self.sign(x)
            other = NEG if s == POS else POS
            best = 2 if s != target_sign else 0
            for d in self.maximal_subloops(x, other, inside=loop):
                if d == x:
                    continue
                h = g(d)
                if h:
                    best = max(best, 1 + h)
            memo[x] = best
            return best

        root = next((c for c in self.top() if loop <= c), None)
        if root is None:
            raise OmegaError("not a loop of the automaton")
        return max(1, g(root))

    def as_loop(self, loop) -> frozenset:
        """Accept either a set of states (induced transitions) or a set of
        transitions."""
        loop = frozenset(loop)
        if loop and all(isinstance(x, int) for x in loop):
            edges = frozenset(t for t in self.aut.transitions if t[0] in loop and t[2] in loop)
        else:
            edges = loop
        comps = self.components(edges)
        if len(comps) != 1 or comps[0] != edges or not edges:
            raise OmegaError("not a loop set")
        if not {t[0] for t in edges} <= self.reach:
            raise OmegaError("not a loop set")
        return edges


def _require_det(aut: Automaton):
    if not classify_determinism(aut).forward_deterministic:
        raise OmegaError("forward-deterministic automaton required")


def loop_sign(aut: Automaton, loop_set) -> str:
    """``'+'`` if a run cycling exactly through ``loop_set`` is recurring."""
    lp = _Loops(aut)
    return lp.sign(lp.as_loop(loop_set))


def loop_sets(aut: Automaton, limit: int = 12) -> list[frozenset]:
    """All loop sets (as state sets) of the reachable part, by exhaustive
    enumeration inside each strongly connected component."""
    lp = _Loops(aut)
    out = set()
    for comp in lp.top():
        states = sorted({t[0] for t in comp})
        if len(states) > limit:
            raise OmegaError("component too large for loop enumeration")
        for r in range(1, len(states) + 1):
            for sub in combinations(states, r):
                s = set(sub)
                edges = [t for t in comp if t[0] in s and t[2] in s]
                cs = lp.components(edges)
                if len(cs) == 1 and {t[0] for t in cs[0]} == s:
                    out.add(frozenset(s))
    return sorted(out, key=lambda s: (len(s), sorted(s)))


class TowerInfo(NamedTuple):
    height: int
    by_sign: dict  # sign of the last loop -> maximal height


def max_tower(aut: Automaton) -> TowerInfo:
    _require_det(aut)
    lp = _Loops(aut)
    by_sign = {POS: 0, NEG: 0}
    for comp in lp.top():
        s = lp.sign(comp)
        other = NEG if s == POS else POS
        h = lp.down(comp)
        # a chain of length k from comp ends with sign s iff k is odd
        odd = h if h % 2 else h - 1
        even = h if h % 2 == 0 else h - 1
        by_sign[s] = max(by_sign[s], odd)
        by_sign[other] = max(by_sign[other], even)
    return TowerInfo(max(by_sign.values()), by_sign)


def parity_index(aut: Automaton) -> int:
    """Maximal tower height; the number of priorities a deterministic parity
    automaton for the language needs."""
    return max_tower(aut).height


def tower_profile(aut: Automaton) -> list[tuple[int, str]]:
    """Per nontrivial SCC, the height of its maximal tower and the sign of
    that tower's last loop."""
    _require_det(aut)
    lp = _Loops(aut)
    out = []
    for comp in lp.top():
        s = lp.sign(comp)
        h = lp.down(comp)
        out.append((h, s if h % 2 else (NEG if s == POS else POS)))
    return out


def walls(aut: Automaton) -> dict:
    """Longest chains of reachable SCCs whose maximal towers all have the
    overall maximal height and alternate in sign.  Keys are the sign of the
    last tower in the wall."""
    _require_det(aut)
    lp = _Loops(aut)
    comps = lp.top()
    info = {}
    for c in comps:
        s = lp.sign(c)
        h = lp.down(c)
        info[c] = (h, s if h % 2 else (NEG if s == POS else POS))
    best = {POS: 0, NEG: 0}
    if not comps:
        return best
    hmax = max(h for h, _ in info.values())
    tops = [c for c in comps if info[c][0] == hmax]
    state_of = {c: {t[0] for t in c} for c in comps}
    aut_ = aut

    def reaches(c, d):
        start = next(iter(state_of[c]))
        r = reachable([start], lambda p: [t[2] for t in aut_.out_edges[p]])
        return bool(r & state_of[d])

    # longest alternating path in the reachability order among tops
    memo: dict = {}

    def longest_from(c):
        if c in memo:
            return memo[c]
        sc = info[c][1]
        res = {POS: 0, NEG: 0}
        res[sc] = 1
        for d in tops:
            if d is c or info[d][1] == sc or not reaches(c, d):
                continue
            sub = longest_from(d)
            for k, v in sub.items():
                if v:
                    res[k] = max(res[k], v + 1)
        memo[c] = res
        return res

    for c in tops:
        for k, v in longest_from(c).items():
            best[k] = max(best[k], v)
    return best


def is_weak_recognizable(aut: Automaton) -> bool:
    """No loop is nested inside a loop of the opposite sign."""
    return parity_index(aut) <= 1


def frame_height(aut: Automaton):
    """A function mapping a loop (state or transition set) to the length of
    the longest alternating chain ending at it, plus its sign."""
    lp = _Loops(aut)
    cache: dict = {}

    def f(loop):
        e = lp.as_loop(loop)
        if e not in cache:
            cache[e] = (lp.up(e), lp.sign(e))
        return cache[e]

    return f
