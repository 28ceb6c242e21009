"""Future LTL over atoms ``p0, p1, ...``: parsing, negation normal form and
translation into generalized Buchi automata over the power-set alphabet.

A state of the automaton is a locally consistent truth assignment to the
subformulas and describes one position of the word; its atoms must agree
with the letter read from it.
"""

from __future__ import annotations

import re
from itertools import product

from .core import Acceptance, Automaton, OmegaError, equivalence_witness, is_empty

TRUE = ("true",)
FALSE = ("false",)

_TOKEN = re.compile(r"\s*(?:(p\d+)|(true|false)|([!&|()XFGUR])|(\S))")
_UNARY = {"!": "not", "X": "X", "F": "F", "G": "G"}
_BINARY = {"U": "U", "R": "R"}


def parse_ltl(text: str):
    """Parse ``p0..pk``, ``true``, ``false``, ``!``, ``X``, ``F``, ``G``
    (prefix), ``U``, ``R`` (right associative), ``&``, ``|`` (loosest)."""
    toks = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            break
        if m.group(4):
            raise OmegaError(f"unexpected character {m.group(4)!r} at offset {m.start(4)}")
        toks.append(m.group(1) or m.group(2) or m.group(3))
        pos = m.end()
    k = 0

    def peek():
        return toks[k] if k < len(toks) else None

    def take(expected=None):
        nonlocal k
        t = peek()
        if t is None or (expected and t != expected):
            raise OmegaError(f"expected {expected or 'a formula'} but found {t or 'end of input'}")
        k += 1
        return t

    def disj():
        f = conj()
        while peek() == "|":
            take()
            f = ("or", f, conj())
        return f

    def conj():
        f = binary()
        while peek() == "&":
            take()
            f = ("and", f, binary())
        return f

    def binary():
        f = unary()
        if peek() in _BINARY:
            op = _BINARY[take()]
            return (op, f, binary())
        return f

    def unary():
        t = peek()
        if t in _UNARY:
            take()
            return (_UNARY[t], unary())
        if t == "(":
            take()
            f = disj()
            take(")")
            return f
        if t in ("true", "false"):
            take()
            return TRUE if t == "true" else FALSE
        if t is not None and t.startswith("p"):
            take()
            return ("ap", int(t[1:]))
        raise OmegaError(f"expected a formula but found {t or 'end of input'}")

    f = disj()
    if peek() is not None:
        raise OmegaError(f"trailing input at {peek()!r}")
    return f


def format_ltl(f) -> str:
    op = f[0]
    if op == "ap":
        return f"p{f[1]}"
    if op == "nap":
        return f"!p{f[1]}"
    if op in ("true", "false"):
        return op
    if op in ("not", "X", "F", "G"):
        return ("!" if op == "not" else op) + _wrap(f[1])
    sym = {"and": "&", "or": "|", "U": "U", "R": "R"}[op]
    return f"{_wrap(f[1])} {sym} {_wrap(f[2])}"


def _wrap(f) -> str:
    s = format_ltl(f)
    return s if f[0] in ("ap", "nap", "true", "false") or f[0] in ("not", "X", "F", "G") else f"({s})"


def atoms(f) -> set:
    if f[0] in ("ap", "nap"):
        return {f[1]}
    return set().union(*(atoms(g) for g in f[1:] if isinstance(g, tuple)))


def nnf(f, negate: bool = False):
    """Negation normal form with ``F`` as ``true U`` and ``G`` as
    ``false R``; negated atoms become ``("nap", i)``."""
    op = f[0]
    if op == "ap":
        return ("nap", f[1]) if negate else f
    if op == "nap":
        return ("ap", f[1]) if negate else f
    if op == "true":
        return FALSE if negate else TRUE
    if op == "false":
        return TRUE if negate else FALSE
    if op == "not":
        return nnf(f[1], not negate)
    if op == "X":
        return ("X", nnf(f[1], negate))
    if op == "F":
        return nnf(("U", TRUE, f[1]), negate)
    if op == "G":
        return nnf(("R", FALSE, f[1]), negate)
    a = nnf(f[1], negate)
    b = nnf(f[2], negate)
    dual = {"and": "or", "or": "and", "U": "R", "R": "U"}
    return (dual[op] if negate else op, a, b)


def closure(f) -> list:
    """Distinct subformulas of a normalized formula, children first."""
    out: list = []
    seen = set()

    def go(g):
        if g in seen:
            return
        for h in g[1:]:
            if isinstance(h, tuple):
                go(h)
        seen.add(g)
        out.append(g)

    go(f)
    return out


def letter_name(true_atoms) -> str:
    return "{" + ",".join(f"p{i}" for i in sorted(true_atoms)) + "}"


def letter_atoms(symbol: str) -> frozenset:
    body = symbol.strip()[1:-1]
    return frozenset(int(x.strip()[1:]) for x in body.split(",") if x.strip())


def powerset_alphabet(atom_ids) -> list[str]:
    """All valuations, ordered by bitmask with the smallest atom lowest."""
    ids = sorted(atom_ids)
    return [letter_name(x for j, x in enumerate(ids) if mask >> j & 1) for mask in range(1 << len(ids))]


def ltl_to_gba(f, atom_ids=None, discharge_releases: bool = False) -> Automaton:
    """Generalized Buchi automaton for the normalized ``f``.

    One acceptance set per ``U`` subformula: states where it is false or
    its right side holds.  With ``discharge_releases`` every ``R``
    subformula gets a set as well (states where it holds or its right side
    fails), which leaves the language alone and makes the accepting run on
    every word unique.
    """
    f = nnf(f)
    cl = closure(f)
    used = atoms(f)
    ids = sorted(used if atom_ids is None else set(atom_ids) | used)
    letters = powerset_alphabet(ids)
    free = [g for g in cl if g[0] in ("ap", "X", "U", "R")]
    index = {g: i for i, g in enumerate(cl)}

    def derive(assign: dict):
        val = dict(assign)
        for g in cl:
            op = g[0]
            if op in ("ap", "X", "U", "R"):
                val[g] = assign[g]
            elif op == "nap":
                val[g] = not assign[("ap", g[1])]
            elif op == "true":
                val[g] = True
            elif op == "false":
                val[g] = False
            elif op == "and":
                val[g] = val[g[1]] and val[g[2]]
            else:
                val[g] = val[g[1]] or val[g[2]]
        for g in cl:
            a, b = (val[g[1]], val[g[2]]) if g[0] in ("U", "R") else (None, None)
            if g[0] == "U" and (val[g] and not (a or b) or not val[g] and b):
                return None
            if g[0] == "R" and (val[g] and not b or not val[g] and a and b):
                return None
        return val

    # negated atoms need their positive atom in the free set
    for g in cl:
        if g[0] == "nap" and ("ap", g[1]) not in index:
            free.append(("ap", g[1]))
    states = []
    for bits in product((False, True), repeat=len(free)):
        v = derive(dict(zip(free, bits)))
        if v is not None:
            states.append(v)

    def key(v):
        return tuple(v[g] for g in free)

    states.sort(key=key)
    temporal = [g for g in cl if g[0] in ("X", "U", "R")]

    def consistent(v, w) -> bool:
        for g in temporal:
            if g[0] == "X":
                ok = v[g] == w[g[1]]
            elif g[0] == "U":
                ok = v[g] == (v[g[2]] or (v[g[1]] and w[g]))
            else:
                ok = v[g] == (v[g[2]] and (v[g[1]] or w[g]))
            if not ok:
                return False
        return True

    trans = set()
    for i, v in enumerate(states):
        true_here = {g[1] for g in free if g[0] == "ap" and v[g]}
        for a, sym in enumerate(letters):
            if letter_atoms(sym) & used != true_here & used:
                continue
            for j, w in enumerate(states):
                if consistent(v, w):
                    trans.add((i, a, j))
    init = [i for i, v in enumerate(states) if v[f]]
    sets = []
    for g in cl:
        if g[0] == "U":
            sets.append({i for i, v in enumerate(states) if not v[g] or v[g[2]]})
        elif g[0] == "R" and discharge_releases:
            sets.append({i for i, v in enumerate(states) if v[g] or not v[g[2]]})
    return Automaton(letters, len(states), init, trans, Acceptance.genbuchi(sets))


def until_count(f) -> int:
    """Number of distinct ``U`` subformulas after normalization."""
    return sum(1 for g in closure(nnf(f)) if g[0] == "U")


def subformula_count(f) -> int:
    return len(closure(nnf(f)))


def _text(f):
    return parse_ltl(f) if isinstance(f, str) else f


def ltl_satisfiable(f) -> bool:
    return not is_empty(ltl_to_gba(_text(f)))


def ltl_equivalence_witness(f, g):
    """A lasso satisfying exactly one of the formulas, or None."""
    f, g = _text(f), _text(g)
    ids = atoms(nnf(f)) | atoms(nnf(g))
    return equivalence_witness(ltl_to_gba(f, ids), ltl_to_gba(g, ids))


def ltl_equivalent(f, g) -> bool:
    return ltl_equivalence_witness(f, g) is None

