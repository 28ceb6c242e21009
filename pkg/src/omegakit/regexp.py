"""Omega-regular expressions ``r0 (s0)^w + ... + rk (sk)^w`` and their
conversion to and from Buchi automata.

Finite-word expressions are tuples: ``("sym", a)``, ``("eps",)``,
``("empty",)``, ``("cat", r, s)``, ``("union", r, s)``, ``("star", r)`` and
``("plus", r)``.  Text syntax: juxtaposition or ``.`` for concatenation,
``+`` for union, ``*`` and ``^+`` for iteration, ``%`` for the empty word,
``~`` for the empty set.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

from .core import Acceptance, Automaton, OmegaError, SymbolAlphabet

EPS = ("eps",)
EMPTY = ("empty",)


# ---------------------------------------------------------------------------
# smart constructors


def cat(r, s):
    if r == EMPTY or s == EMPTY:
        return EMPTY
    if r == EPS:
        return s
    if s == EPS:
        return r
    return ("cat", r, s)


def alt(r, s):
    if r == EMPTY:
        return s
    if s == EMPTY or r == s:
        return r
    return ("union", r, s)


def star(r):
    if r in (EMPTY, EPS):
        return EPS
    if r[0] in ("star", "plus"):
        return ("star", r[1])
    return ("star", r)


def plus(r):
    if r == EMPTY:
        return EMPTY
    if r == EPS:
        return EPS
    if r[0] == "plus":
        return r
    if r[0] == "star":
        return r
    return ("plus", r)


def nullable(r) -> bool:
    tag = r[0]
    if tag in ("eps", "star"):
        return True
    if tag in ("sym", "empty"):
        return False
    if tag == "cat":
        return nullable(r[1]) and nullable(r[2])
    if tag == "union":
        return nullable(r[1]) or nullable(r[2])
    return nullable(r[1])


def nonempty_part(r):
    """Expression for ``L(r)`` minus the empty word using only ``^+``."""
    tag = r[0]
    if tag == "sym":
        return r
    if tag in ("eps", "empty"):
        return EMPTY
    if tag == "union":
        return alt(nonempty_part(r[1]), nonempty_part(r[2]))
    if tag in ("star", "plus"):
        return plus(nonempty_part(r[1]))
    a, b = r[1], r[2]
    na, nb = nonempty_part(a), nonempty_part(b)
    out = cat(na, nb)
    if nullable(a):
        out = alt(out, nb)
    if nullable(b):
        out = alt(out, na)
    return out


def _plus_only(r) -> bool:
    tag = r[0]
    if tag in ("star", "eps"):
        return False
    if tag in ("sym", "empty"):
        return True
    return all(_plus_only(x) for x in r[1:])


@dataclass(frozen=True)
class OmegaRegex:
    pairs: tuple  # of (r, s)

    def __post_init__(self):
        for _, s in self.pairs:
            if not _plus_only(s):
                raise OmegaError("periodic part must be built from symbols, +, . and ^+ only")


# ---------------------------------------------------------------------------
# text syntax


def _tokens(text: str, alphabet: SymbolAlphabet) -> list[str]:
    syms = sorted(alphabet.symbols, key=len, reverse=True)
    out = []
    i = 0
    while i < len(text):
        c = text[i]
        if c.isspace():
            i += 1
            continue
        if text.startswith("^+", i) or text.startswith("^w", i):
            out.append(text[i:i + 2])
            i += 2
            continue
        if c in "()+.*%~":
            out.append(c)
            i += 1
            continue
        for s in syms:
            if text.startswith(s, i):
                out.append(("sym", s))
                i += len(s)
                break
        else:
            raise OmegaError(f"unexpected character {c!r} at {i}")
    return out


def parse_regex(text: str, alphabet) -> OmegaRegex:
    """Parse ``r (s)^w + ...``; ``~`` alone is the empty expression."""
    if not isinstance(alphabet, SymbolAlphabet):
        alphabet = SymbolAlphabet(alphabet)
    toks = _tokens(text, alphabet)
    pos = 0

    def peek():
        return toks[pos] if pos < len(toks) else None

    def take():
        nonlocal pos
        t = peek()
        if t is None:
            raise OmegaError("unexpected end of expression")
        pos += 1
        return t

    def union_():
        parts = [concat()]
        while peek() == "+":
            take()
            parts.append(concat())
        out = parts[0]
        for p in parts[1:]:
            out = ("union", out, p)
        return out

    def concat():
        parts = [postfix()]
        while True:
            t = peek()
            if t == ".":
                take()
                parts.append(postfix())
            elif t is not None and (t == "(" or t in ("%", "~") or isinstance(t, tuple)):
                parts.append(postfix())
            else:
                break
        out = parts[0]
        for p in parts[1:]:
            out = ("cat", out, p)
        return out

    def postfix():
        r = atom()
        while peek() in ("*", "^+", "^w"):
            t = take()
            if t == "^w":
                r = ("omega", r)
            elif r[0] == "omega":
                raise OmegaError("iteration applied to an omega power")
            else:
                r = ("star", r) if t == "*" else ("plus", r)
        return r

    def atom():
        t = take()
        if t == "(":
            r = union_()
            if take() != ")":
                raise OmegaError("missing ')'")
            return r
        if t == "%":
            return EPS
        if t == "~":
            return EMPTY
        if isinstance(t, tuple):
            return t
        raise OmegaError(f"unexpected token {t!r}")

    tree = union_()
    if pos != len(toks):
        raise OmegaError(f"unexpected token {toks[pos]!r}")
    if tree == EMPTY:
        return OmegaRegex(())

    def split_pairs(t):
        if t[0] == "union":
            return split_pairs(t[1]) + split_pairs(t[2])
        return [t]

    pairs = []
    for term in split_pairs(tree):
        if term[0] == "omega":
            r, s = EPS, term[1]
        elif term[0] == "cat" and term[2][0] == "omega":
            r, s = term[1], term[2][1]
        else:
            raise OmegaError("each summand must end in (s)^w")
        if _has_omega(r) or _has_omega(s):
            raise OmegaError("omega power in a finite part")
        pairs.append((r, s))
    return OmegaRegex(tuple(pairs))


def _has_omega(r) -> bool:
    return r[0] == "omega" or any(isinstance(x, tuple) and _has_omega(x) for x in r[1:])


def regex_text(r, alphabet: SymbolAlphabet, prec: int = 0) -> str:
    sep = "" if all(len(s) == 1 for s in alphabet.symbols) else "."
    tag = r[0]
    if tag == "sym":
        return r[1]
    if tag == "eps":
        return "%"
    if tag == "empty":
        return "~"
    if tag == "union":
        s = regex_text(r[1], alphabet, 0) + "+" + regex_text(r[2], alphabet, 0)
        return f"({s})" if prec > 0 else s
    if tag == "cat":
        s = regex_text(r[1], alphabet, 1) + sep + regex_text(r[2], alphabet, 1)
        return f"({s})" if prec > 1 else s
    inner = regex_text(r[1], alphabet, 2)
    return inner + ("*" if tag == "star" else "^+")


def omega_text(e: OmegaRegex, alphabet: SymbolAlphabet) -> str:
    if not e.pairs:
        return "~"
    parts = []
    for r, s in e.pairs:
        head = "" if r == EPS else regex_text(r, alphabet, 1) + " "
        parts.append(f"{head}({regex_text(s, alphabet)})^w")
    return " + ".join(parts)


# ---------------------------------------------------------------------------
# finite automata


class NFA(NamedTuple):
    n: int
    initial: frozenset
    trans: frozenset  # (p, a, q)
    final: frozenset


def glushkov(r, alphabet: SymbolAlphabet) -> NFA:
    """Position automaton: state 0 is initial, state i is the i-th symbol
    occurrence; no transition enters state 0."""
    syms: list = []

    def walk(t):
        # returns (nullable, first, last, follow pairs)
        tag = t[0]
        if tag == "sym":
            syms.append(alphabet.index(t[1]))
            p = len(syms)
            return False, {p}, {p}, set()
        if tag == "eps":
            return True, set(), set(), set()
        if tag == "empty":
            return False, set(), set(), set()
        if tag == "union":
            n1, f1, l1, x1 = walk(t[1])
            n2, f2, l2, x2 = walk(t[2])
            return n1 or n2, f1 | f2, l1 | l2, x1 | x2
        if tag == "cat":
            n1, f1, l1, x1 = walk(t[1])
            n2, f2, l2, x2 = walk(t[2])
            fol = x1 | x2 | {(p, q) for p in l1 for q in f2}
            return n1 and n2, f1 | (f2 if n1 else set()), l2 | (l1 if n2 else set()), fol
        n1, f1, l1, x1 = walk(t[1])
        fol = x1 | {(p, q) for p in l1 for q in f1}
        return (True if tag == "star" else n1), f1, l1, fol

    nul, first, last, follow = walk(r)
    trans = {(0, syms[q - 1], q) for q in first} | {(p, syms[q - 1], q) for p, q in follow}
    final = set(last) | ({0} if nul else set())
    return NFA(len(syms) + 1, frozenset({0}), frozenset(trans), frozenset(final))


# ---------------------------------------------------------------------------
# expression to automaton


def _pair_automaton(r, s, alphabet: SymbolAlphabet):
    A = glushkov(r, alphabet)
    B = glushkov(s, alphabet)
    off = A.n
    new = A.n + B.n
    trans = set(A.trans)
    for p, a, q in A.trans:
        if q in A.final:
            trans.add((p, a, new))
    for p, a, q in B.trans:
        p2, q2 = p + off, q + off
        trans.add((p2, a, q2))
        src_init = p in B.initial
        dst_final = q in B.final
        if src_init:
            trans.add((new, a, q2))
        if dst_final:
            trans.add((p2, a, new))
        if src_init and dst_final:
            trans.add((new, a, new))
    init = set(A.initial)
    if A.initial & A.final:
        init.add(new)
    return new + 1, init, trans, new


def regex_to_buchi(e: OmegaRegex, alphabet) -> Automaton:
    if not isinstance(alphabet, SymbolAlphabet):
        alphabet = SymbolAlphabet(alphabet)
    n = 0
    init: set = set()
    trans: set = set()
    acc: set = set()
    for r, s in e.pairs:
        k, i, t, b = _pair_automaton(r, s, alphabet)
        init |= {q + n for q in i}
        trans |= {(p + n, a, q + n) for p, a, q in t}
        acc.add(b + n)
        n += k
    return Automaton(alphabet, n, init, trans, Acceptance.buchi(acc))


# ---------------------------------------------------------------------------
# automaton to expression


def _eliminate(n: int, edges: dict, start, final, order) -> tuple:
    """Generalized-automaton state elimination; ``edges`` maps node pairs to
    expressions and is consumed."""
    R = edges

    def add(x, y, e):
        R[(x, y)] = alt(R.get((x, y), EMPTY), e)

    alive = set(order) | {start, final}
    for k in order:
        alive.discard(k)
        loop = star(R.get((k, k), EMPTY))
        ins = [(x, R[(x, k)]) for x in alive if (x, k) in R and R[(x, k)] != EMPTY]
        outs = [(y, R[(k, y)]) for y in alive if (k, y) in R and R[(k, y)] != EMPTY]
        for x, ex in ins:
            for y, ey in outs:
                add(x, y, cat(cat(ex, loop), ey))
        for key in [key for key in R if k in key]:
            del R[key]
    return R.get((start, final), EMPTY)


def path_expression(aut: Automaton, q: int, q2: int):
    """Expression for the labels of finite paths from ``q`` to ``q2``
    (including the empty path when ``q == q2``), by eliminating states in
    increasing order."""
    n = aut.num_states
    S, F = n, n + 1
    R: dict = {}
    syms = aut.alphabet.symbols
    for p, a, p2 in sorted(aut.transitions):
        R[(p, p2)] = alt(R.get((p, p2), EMPTY), ("sym", syms[a]))
    R[(S, q)] = EPS
    R[(q2, F)] = alt(R.get((q2, F), EMPTY), EPS)
    return _eliminate(n, R, S, F, range(n))


def first_return_expression(aut: Automaton, q: int):
    """Expression for labels of nonempty paths from ``q`` back to ``q`` that
    do not visit ``q`` in between.  Its omega power equals the omega power
    of all nonempty loops at ``q``."""
    n = aut.num_states
    S, F = n, n + 1
    R: dict = {}
    syms = aut.alphabet.symbols

    def add(x, y, e):
        R[(x, y)] = alt(R.get((x, y), EMPTY), e)

    for p, a, p2 in sorted(aut.transitions):
        x = S if p == q else p
        y = F if p2 == q else p2
        add(x, y, ("sym", syms[a]))
    return _eliminate(n, R, S, F, [k for k in range(n) if k != q])


def buchi_to_regex(aut: Automaton) -> OmegaRegex:
    acc = aut.acceptance
    if acc.kind != "buchi" or acc.on_transitions:
        raise OmegaError("state-based Buchi automaton required")
    pairs = []
    for q in sorted(aut.initial):
        for b in sorted(acc.data):
            r = path_expression(aut, q, b)
            if r == EMPTY:
                continue
            s = nonempty_part(first_return_expression(aut, b))
            if s == EMPTY:
                continue
            pairs.append((r, s))
    return OmegaRegex(tuple(pairs))
