"""Line-oriented text formats for automata, lasso words, alternating
automata and parity games.

Automaton documents look like::

    # comment
    alphabet 0 1
    states 2
    initial 0
    transitions
    0 0 0
    0 1 0
    0 0 1
    1 0 1
    end
    acceptance buchi state 1

Acceptance lines: ``trivial``, ``buchi state|trans <elems>``, ``cobuchi ...``,
``weak ...``, ``genbuchi state { ids } { ids }``, ``parity state 0:2 1:1``,
``rabin state ( ids ; ids ) ...``, ``streett ...`` and
``muller state|trans { elems } ...``.  Transition elements are written
``src.sym.dst``.

Alternating automata use ``src sym := formula`` transition lines; inside
formulas states are written ``q<id>`` and ``0``/``1`` are the constants.
"""

from __future__ import annotations

import re
from typing import Iterator

from .core import _elem_key, Acceptance, Automaton, LassoWord, OmegaError, SymbolAlphabet, sorted_elems


class ParseError(OmegaError):
    def __init__(self, msg: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {msg}" if line else msg)


def _lines(text: str) -> Iterator[tuple[int, list[str]]]:
    for no, raw in enumerate(text.splitlines(), 1):
        body = raw.split("#", 1)[0].strip()
        if body:
            yield no, body.split()


def _int(tok: str, line: int, what: str = "integer") -> int:
    if not re.fullmatch(r"\d+", tok):
        raise ParseError(f"expected {what}, got {tok!r}", line)
    return int(tok)


class _Cursor:
    def __init__(self, text: str):
        self.items = list(_lines(text))
        self.i = 0

    def peek(self):
        return self.items[self.i] if self.i < len(self.items) else (None, None)

    def take(self, keyword: str | None = None):
        if self.i >= len(self.items):
            last = self.items[-1][0] if self.items else 1
            raise ParseError(f"unexpected end of input, expected {keyword or 'more'}", last)
        no, toks = self.items[self.i]
        if keyword is not None and toks[0] != keyword:
            raise ParseError(f"expected {keyword!r}, got {toks[0]!r}", no)
        self.i += 1
        return no, toks


def _header(cur: _Cursor):
    no, toks = cur.take("alphabet")
    try:
        alpha = SymbolAlphabet(toks[1:])
    except OmegaError as e:
        raise ParseError(str(e), no) from None
    no, toks = cur.take("states")
    if len(toks) != 2:
        raise ParseError("states expects one count", no)
    n = _int(toks[1], no, "state count")
    return alpha, n


def _state(tok: str, n: int, line: int) -> int:
    q = _int(tok, line, "state id")
    if q >= n:
        raise ParseError(f"undeclared state {q}", line)
    return q


def _symbol(alpha: SymbolAlphabet, tok: str, line: int) -> int:
    try:
        return alpha._index[tok]
    except KeyError:
        raise ParseError(f"undeclared symbol {tok!r}", line) from None


# ---------------------------------------------------------------------------
# acceptance lines


def _elem(tok: str, alpha, n, trans: bool, line: int):
    if not trans:
        return _state(tok, n, line)
    parts = tok.split(".")
    if len(parts) < 3:
        raise ParseError(f"transition element must be src.sym.dst, got {tok!r}", line)
    p, q = parts[0], parts[-1]
    sym = ".".join(parts[1:-1])
    return (_state(p, n, line), _symbol(alpha, sym, line), _state(q, n, line))


def _groups(toks: list[str], open_: str, close: str, line: int) -> list[list[str]]:
    out = []
    i = 0
    while i < len(toks):
        if toks[i] != open_:
            raise ParseError(f"expected {open_!r}, got {toks[i]!r}", line)
        try:
            j = toks.index(close, i)
        except ValueError:
            raise ParseError(f"unclosed {open_!r}", line) from None
        out.append(toks[i + 1:j])
        i = j + 1
    return out


def _pair(group: list[str], line: int) -> tuple[list[str], list[str]]:
    if group.count(";") != 1:
        raise ParseError("pair needs exactly one ';'", line)
    k = group.index(";")
    return group[:k], group[k + 1:]


def _acceptance(toks: list[str], alpha, n, line: int) -> Acceptance:
    kind = toks[1] if len(toks) > 1 else ""
    if kind == "trivial":
        if len(toks) != 2:
            raise ParseError("trivial takes no arguments", line)
        return Acceptance.trivial()
    if kind not in ("buchi", "cobuchi", "weak", "genbuchi", "parity", "rabin", "streett", "muller"):
        raise ParseError(f"unknown acceptance {kind!r}", line)
    if len(toks) < 3 or toks[2] not in ("state", "trans"):
        raise ParseError("expected locus 'state' or 'trans'", line)
    tr = toks[2] == "trans"
    rest = toks[3:]

    def el(t):
        return _elem(t, alpha, n, tr, line)

    if kind in ("buchi", "cobuchi", "weak"):
        return Acceptance(kind, frozenset(el(t) for t in rest), tr)
    if kind == "genbuchi":
        return Acceptance.genbuchi([[el(t) for t in g] for g in _groups(rest, "{", "}", line)], tr)
    if kind == "muller":
        return Acceptance.muller([[el(t) for t in g] for g in _groups(rest, "{", "}", line)], tr)
    if kind in ("rabin", "streett"):
        pairs = []
        for g in _groups(rest, "(", ")", line):
            a, b = _pair(g, line)
            pairs.append(([el(t) for t in a], [el(t) for t in b]))
        return Acceptance(kind, tuple((frozenset(a), frozenset(b)) for a, b in pairs), tr)
    prio = {}
    for t in rest:
        if ":" not in t:
            raise ParseError(f"expected elem:priority, got {t!r}", line)
        e, p = t.rsplit(":", 1)
        prio[el(e)] = _int(p, line, "priority")
    return Acceptance.parity(prio, tr)


def _fmt_elem(e, alpha) -> str:
    if isinstance(e, int):
        return str(e)
    p, a, q = e
    return f"{p}.{alpha.symbols[a]}.{q}"


def format_acceptance(acc: Acceptance, alpha: SymbolAlphabet) -> str:
    if acc.kind == "trivial":
        return "acceptance trivial"
    locus = "trans" if acc.on_transitions else "state"

    def seq(s):
        return " ".join(_fmt_elem(e, alpha) for e in sorted_elems(s))

    head = f"acceptance {acc.kind} {locus}"
    k, d = acc.kind, acc.data
    if k in ("buchi", "cobuchi", "weak"):
        body = seq(d)
    elif k == "genbuchi":
        body = " ".join("{ " + seq(s) + (" }" if s else "}") for s in d)
    elif k == "muller":
        sets = sorted(d, key=lambda s: (len(s), [_elem_key(e) for e in sorted_elems(s)]))
        body = " ".join("{ " + seq(s) + (" }" if s else "}") for s in sets)
    elif k in ("rabin", "streett"):
        body = " ".join(f"( {seq(a)} ; {seq(b)} )".replace("  ", " ") for a, b in d)
    else:
        body = " ".join(f"{_fmt_elem(e, alpha)}:{p}" for e, p in d)
    return (head + " " + body).rstrip()


# ---------------------------------------------------------------------------
# automata


def parse_automaton(text: str) -> Automaton:
    """Parse the automaton format; raises ParseError with a line number."""
    cur = _Cursor(text)
    alpha, n = _header(cur)
    no, toks = cur.take("initial")
    init = [_state(t, n, no) for t in toks[1:]]
    cur.take("transitions")
    trans = []
    while True:
        no, toks = cur.take()
        if toks[0] == "end":
            if len(toks) != 1:
                raise ParseError("junk after 'end'", no)
            break
        if len(toks) != 3:
            raise ParseError("transition line must be 'src sym dst'", no)
        trans.append((_state(toks[0], n, no), _symbol(alpha, toks[1], no), _state(toks[2], n, no)))
    no, toks = cur.take("acceptance")
    acc = _acceptance(toks, alpha, n, no)
    extra_no, extra = cur.peek()
    if extra is not None:
        raise ParseError(f"unexpected {extra[0]!r} after acceptance", extra_no)
    try:
        return Automaton(alpha, n, init, trans, acc)
    except OmegaError as e:
        raise ParseError(str(e), no) from None


def print_automaton(aut: Automaton) -> str:
    sym = aut.alphabet.symbols
    lines = [
        "alphabet " + " ".join(sym),
        f"states {aut.num_states}",
        ("initial " + " ".join(str(q) for q in sorted(aut.initial))).rstrip(),
        "transitions",
    ]
    for p, a, q in sorted(aut.transitions):
        lines.append(f"{p} {sym[a]} {q}")
    lines.append("end")
    lines.append(format_acceptance(aut.acceptance, aut.alphabet))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# lasso words


def parse_lasso(text: str, alphabet: SymbolAlphabet | None = None) -> LassoWord:
    """``u;v`` with whitespace-separated symbols; ``u`` may be empty."""
    body = text.split("#", 1)[0].strip()
    if body.count(";") != 1:
        raise ParseError("lasso must contain exactly one ';'")
    u, v = body.split(";")
    u, v = u.split(), v.split()
    if not v:
        raise ParseError("empty period")
    if alphabet is not None:
        for s in u + v:
            if s not in alphabet._index:
                raise ParseError(f"undeclared symbol {s!r}")
    return LassoWord(u, v)


def print_lasso(w: LassoWord) -> str:
    return str(w)


# ---------------------------------------------------------------------------
# alternating automata


_FORMULA_TOKEN = re.compile(r"\s*(q\d+|[01]|&|\||\(|\))")


def parse_formula(text: str, n: int, line: int | None = None):
    toks = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _FORMULA_TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"bad formula near {text[pos:pos + 8]!r}", line)
        toks.append(m.group(1))
        pos = m.end()
        while pos < len(text) and text[pos].isspace():
            pos += 1
    i = 0

    def atom():
        nonlocal i
        if i >= len(toks):
            raise ParseError("formula ends early", line)
        t = toks[i]
        i += 1
        if t == "(":
            f = disj()
            if i >= len(toks) or toks[i] != ")":
                raise ParseError("missing ')'", line)
            i += 1
            return f
        if t in ("0", "1"):
            return (t,)
        if t.startswith("q"):
            q = int(t[1:])
            if q >= n:
                raise ParseError(f"undeclared state {q}", line)
            return ("q", q)
        raise ParseError(f"unexpected {t!r} in formula", line)

    def conj():
        nonlocal i
        parts = [atom()]
        while i < len(toks) and toks[i] == "&":
            i += 1
            parts.append(atom())
        return parts[0] if len(parts) == 1 else ("and",) + tuple(parts)

    def disj():
        nonlocal i
        parts = [conj()]
        while i < len(toks) and toks[i] == "|":
            i += 1
            parts.append(conj())
        return parts[0] if len(parts) == 1 else ("or",) + tuple(parts)

    f = disj()
    if i != len(toks):
        raise ParseError(f"unexpected {toks[i]!r} in formula", line)
    return f


def format_formula(f, top: bool = True) -> str:
    tag = f[0]
    if tag in ("0", "1"):
        return tag
    if tag == "q":
        return f"q{f[1]}"
    op = " & " if tag == "and" else " | "
    if len(f) == 1:
        return "1" if tag == "and" else "0"
    inner = op.join(format_formula(g, False) for g in f[1:])
    return inner if top else f"({inner})"


def parse_alternating(text: str):
    """Parse a transition-controlled alternating automaton.

    A state-controlled automaton can be given with ordinary ``src sym dst``
    lines plus a ``universal <ids>`` line after ``initial``; it is converted
    on the fly.
    """
    from .alternating import AlternatingAutomaton, StateControlledAutomaton

    cur = _Cursor(text)
    alpha, n = _header(cur)
    no, toks = cur.take("initial")
    init_formula = None
    init_ids = None
    if len(toks) > 1 and toks[1] == ":=":
        raw = text.splitlines()[no - 1].split("#", 1)[0]
        init_formula = parse_formula(raw.split(":=", 1)[1], n, no)
    else:
        init_ids = [_state(t, n, no) for t in toks[1:]]
    universal = None
    nno, ntoks = cur.peek()
    if ntoks is not None and ntoks[0] == "universal":
        cur.take()
        universal = [_state(t, n, nno) for t in ntoks[1:]]
    cur.take("transitions")
    delta = {}
    plain = []
    while True:
        no, toks = cur.take()
        if toks[0] == "end":
            break
        if len(toks) >= 3 and toks[2] == ":=":
            if universal is not None:
                raise ParseError("formula transitions not allowed with 'universal'", no)
            q = _state(toks[0], n, no)
            a = _symbol(alpha, toks[1], no)
            raw = text.splitlines()[no - 1].split("#", 1)[0]
            if (q, a) in delta:
                raise ParseError("duplicate transition formula", no)
            delta[(q, a)] = parse_formula(raw.split(":=", 1)[1], n, no)
        elif len(toks) == 3:
            plain.append((_state(toks[0], n, no), _symbol(alpha, toks[1], no), _state(toks[2], n, no)))
        else:
            raise ParseError("bad transition line", no)
    no, toks = cur.take("acceptance")
    acc = _acceptance(toks, alpha, n, no)
    extra_no, extra = cur.peek()
    if extra is not None:
        raise ParseError(f"unexpected {extra[0]!r} after acceptance", extra_no)
    try:
        if universal is not None or (plain and not delta):
            if init_ids is None:
                raise ParseError("state-controlled automata list initial ids", no)
            sc = StateControlledAutomaton(alpha, n, init_ids, plain, universal or [], acc)
            return sc.to_transition_controlled()
        if plain:
            raise ParseError("mixed plain and formula transitions", no)
        if init_formula is None:
            init_formula = ("or",) + tuple(("q", q) for q in sorted(init_ids)) if len(init_ids) != 1 \
                else ("q", init_ids[0])
        return AlternatingAutomaton(alpha, n, init_formula, delta, acc)
    except ParseError:
        raise
    except OmegaError as e:
        raise ParseError(str(e), no) from None


def print_alternating(a) -> str:
    sym = a.alphabet.symbols
    lines = [
        "alphabet " + " ".join(sym),
        f"states {a.num_states}",
        "initial := " + format_formula(a.initial),
        "transitions",
    ]
    for (q, c), f in sorted(a.delta.items()):
        lines.append(f"{q} {sym[c]} := {format_formula(f)}")
    lines.append("end")
    lines.append(format_acceptance(a.acceptance, a.alphabet))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# games


def parse_game(text: str):
    from .games import Game

    cur = _Cursor(text)
    no, toks = cur.take("vertices")
    if len(toks) != 2:
        raise ParseError("vertices expects one count", no)
    n = _int(toks[1], no, "vertex count")
    no, toks = cur.take("owner0")
    owner0 = [_state(t, n, no) for t in toks[1:]]
    no, toks = cur.take("priority")
    prio = {}
    for t in toks[1:]:
        if ":" not in t:
            raise ParseError(f"expected vertex:priority, got {t!r}", no)
        v, p = t.split(":", 1)
        prio[_state(v, n, no)] = _int(p, no, "priority")
    missing = [v for v in range(n) if v not in prio]
    if missing:
        raise ParseError(f"vertex {missing[0]} has no priority", no)
    cur.take("edges")
    edges = []
    while True:
        no, toks = cur.take()
        if toks[0] == "end":
            break
        if len(toks) != 2:
            raise ParseError("edge line must be 'src dst'", no)
        edges.append((_state(toks[0], n, no), _state(toks[1], n, no)))
    extra_no, extra = cur.peek()
    if extra is not None:
        raise ParseError(f"unexpected {extra[0]!r} after edges", extra_no)
    return Game(n, owner0, edges, prio)


def print_game(g) -> str:
    lines = [
        f"vertices {g.num_vertices}",
        ("owner0 " + " ".join(str(v) for v in sorted(g.owner0))).rstrip(),
        ("priority " + " ".join(f"{v}:{g.priority[v]}" for v in range(g.num_vertices))).rstrip(),
        "edges",
    ]
    lines += [f"{u} {v}" for u, v in sorted(g.edges)]
    lines.append("end")
    return "\n".join(lines) + "\n"
