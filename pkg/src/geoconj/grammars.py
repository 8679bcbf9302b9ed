"""Context-free grammars over signed alphabets.

Terminals are one-character strings (letters of an :class:`Alphabet`,
markers included); nonterminals are ``int``.  Every constructor returns a
*compact* grammar: useless symbols removed, nonterminals renumbered in
breadth-first order from the start symbol ``0``.
"""

from __future__ import annotations

import logging
from collections import defaultdict, deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Union

from . import automata as fa
from .automata import Nfa
from .errors import AlphabetMismatchError, MalformedInputError
from .words import Alphabet, EMPTY_TEXT, inverse_letter

log = logging.getLogger(__name__)

Symbol = Union[int, str]
Production = tuple[int, tuple[Symbol, ...]]

MARKER = "$"


@dataclass(frozen=True)
class Cfg:
    alphabet: Alphabet
    productions: tuple[Production, ...]
    start: int = 0

    @property
    def nonterminals(self) -> set[int]:
        return {a for a, _ in self.productions}

    def is_empty(self) -> bool:
        return not self.productions

    @cached_property
    def cnf(self) -> "CnfGrammar":
        return to_cnf(self)

    @cached_property
    def recognizer(self) -> "Recognizer":
        return Recognizer(self.cnf)

    def __len__(self) -> int:
        return len(self.productions)

    def __repr__(self) -> str:
        return f"Cfg(|V|={len(self.nonterminals)}, |P|={len(self.productions)}, alphabet={self.alphabet})"


def _is_nt(sym: Symbol) -> bool:
    return isinstance(sym, int)


def compact(alphabet: Alphabet, productions: Iterable[Production], start: int) -> Cfg:
    """Drop non-generating and unreachable symbols; renumber from the start symbol."""
    prods = list(dict.fromkeys((a, tuple(b)) for a, b in productions))
    # generating nonterminals via occurrence counting
    missing = []
    users = defaultdict(list)
    generating = set()
    ready = deque()
    for i, (a, body) in enumerate(prods):
        nts = {s for s in body if _is_nt(s)}
        missing.append(len(nts))
        for s in nts:
            users[s].append(i)
        if not nts:
            ready.append(i)
    while ready:
        i = ready.popleft()
        a = prods[i][0]
        if a in generating:
            continue
        generating.add(a)
        for j in users[a]:
            missing[j] -= 1
            if missing[j] == 0:
                ready.append(j)
    if start not in generating:
        return Cfg(alphabet, (), 0)
    by_head = defaultdict(list)
    for a, body in prods:
        if a in generating and all(s in generating for s in body if _is_nt(s)):
            by_head[a].append(body)
    order = {start: 0}
    queue = deque([start])
    out = []
    while queue:
        a = queue.popleft()
        for body in by_head[a]:
            for s in body:
                if _is_nt(s) and s not in order:
                    order[s] = len(order)
                    queue.append(s)
            out.append((a, body))
    renamed = tuple((order[a], tuple(order[s] if _is_nt(s) else s for s in body)) for a, body in out)
    return Cfg(alphabet, renamed, 0)


def empty_cfg(alphabet: Alphabet) -> Cfg:
    return Cfg(alphabet, (), 0)


def _max_nt(prods: Iterable[Production]) -> int:
    m = -1
    for a, body in prods:
        m = max(m, a, *(s for s in body if _is_nt(s)), -1)
    return m


def _shifted(g: Cfg, k: int) -> list[Production]:
    return [(a + k, tuple(s + k if _is_nt(s) else s for s in body)) for a, body in g.productions]


def from_nfa(nfa: Nfa) -> Cfg:
    """Right-linear grammar for ``L(nfa)``."""
    s = nfa.n
    prods: list[Production] = [(s, (q,)) for q in nfa.initial]
    for p, x, q in nfa.edges:
        prods.append((p, (x, q) if x else (q,)))
    prods += [(f, ()) for f in nfa.final]
    return compact(nfa.alphabet, prods, s)


def _as_cfg(language: Union[Nfa, Cfg]) -> Cfg:
    return from_nfa(language) if isinstance(language, Nfa) else language


# -- closure operations ----------------------------------------------------


def cfg_union(*grammars: Cfg, alphabet: Alphabet | None = None) -> Cfg:
    if alphabet is None:
        if not grammars:
            raise ValueError("cfg_union needs a grammar or an alphabet")
        alphabet = grammars[0].alphabet
        for g in grammars[1:]:
            alphabet = alphabet.union(g.alphabet)
    prods: list[Production] = []
    k = 1
    for g in grammars:
        if g.is_empty():
            continue
        prods.append((0, (k + g.start,)))
        prods += _shifted(g, k)
        k += _max_nt(g.productions) + 1
    return compact(alphabet, prods, 0)


def cfg_reverse(g: Cfg) -> Cfg:
    return compact(g.alphabet, [(a, body[::-1]) for a, body in g.productions], g.start)


def cfg_letter_map(g: Cfg, mapping: dict[str, str], alphabet: Alphabet | None = None) -> Cfg:
    """Apply the homomorphism ``t -> mapping[t]`` (identity on unmapped terminals)."""
    alphabet = alphabet or g.alphabet
    prods = []
    for a, body in g.productions:
        new = []
        for s in body:
            if _is_nt(s):
                new.append(s)
            else:
                new.extend(mapping.get(s, s))
        prods.append((a, tuple(new)))
    return compact(alphabet, prods, g.start)


def cfg_letter_inverse(g: Cfg) -> Cfg:
    """Grammar for ``{w^-1 : w in L(g)}``: reversal followed by the sign flip."""
    flip = {x: inverse_letter(x) for x in g.alphabet.signed}
    return cfg_letter_map(cfg_reverse(g), flip)


def cfg_substitute(g: Cfg, marker: str, language: Union[Nfa, Cfg]) -> Cfg:
    """Replace every occurrence of the terminal ``marker`` by the language ``language``."""
    sub = _as_cfg(language)
    result_alphabet = Alphabet(
        g.alphabet.generators,
        tuple(m for m in g.alphabet.markers if m != marker),
    ).union(sub.alphabet)
    if not any(s == marker for _, body in g.productions for s in body):
        log.warning("marker %r does not occur in the grammar; substitution is a no-op", marker)
        return compact(result_alphabet, g.productions, g.start)
    k = _max_nt(g.productions) + 1
    if sub.is_empty():
        # the marker is replaced by the empty language: productions using it die
        prods = [(a, b) for a, b in g.productions if marker not in b]
        return compact(result_alphabet, prods, g.start)
    sub_start = sub.start + k
    prods = [(a, tuple(sub_start if s == marker else s for s in body)) for a, body in g.productions]
    prods += _shifted(sub, k)
    return compact(result_alphabet, prods, g.start)


def binarize(g: Cfg) -> tuple[list[Production], int]:
    """Split bodies longer than two symbols; returns productions and the next free nonterminal."""
    nxt = _max_nt(g.productions) + 1
    out: list[Production] = []
    for a, body in g.productions:
        head = a
        while len(body) > 2:
            out.append((head, (body[0], nxt)))
            head, body = nxt, body[1:]
            nxt += 1
        out.append((head, body))
    return out, nxt


def cfg_intersect_regular(g: Cfg, nfa: Nfa) -> Cfg:
    """Triple construction: nonterminals ``(p, X, q)`` deriving the words that label a path ``p -> q``."""
    alphabet = g.alphabet
    if g.is_empty():
        return empty_cfg(alphabet)
    a = fa.trim(fa.remove_epsilon(nfa))
    if a.n == 0:
        return empty_cfg(alphabet)
    prods, _ = binarize(g)
    unit_uses = defaultdict(list)
    first_uses = defaultdict(list)
    second_uses = defaultdict(list)
    eps_heads = set()
    for head, body in prods:
        if len(body) == 0:
            eps_heads.add(head)
        elif len(body) == 1:
            unit_uses[body[0]].append(head)
        else:
            first_uses[body[0]].append((head, body[1]))
            second_uses[body[1]].append((head, body[0]))

    facts: set[tuple] = set()
    from_p = defaultdict(set)  # (p, X) -> {q}
    to_q = defaultdict(set)  # (q, X) -> {p}
    work = deque()
    rules: set[tuple] = set()

    def add(f):
        if f not in facts:
            facts.add(f)
            work.append(f)

    for p, x, q in a.edges:
        add((p, x, q))
    for head in eps_heads:
        for p in range(a.n):
            rules.add(((p, head, p), ()))
            add((p, head, p))
    while work:
        f = work.popleft()
        p, x, q = f
        from_p[p, x].add(q)
        to_q[q, x].add(p)
        for head in unit_uses.get(x, ()):
            new = (p, head, q)
            rules.add((new, (f,)))
            add(new)
        for head, y in first_uses.get(x, ()):
            for r in list(from_p.get((q, y), ())):
                new = (p, head, r)
                rules.add((new, (f, (q, y, r))))
                add(new)
        for head, y in second_uses.get(x, ()):
            for o in list(to_q.get((p, y), ())):
                new = (o, head, q)
                rules.add((new, ((o, y, p), f)))
                add(new)

    ids: dict[tuple, int] = {}

    def nt(f):
        if f not in ids:
            ids[f] = len(ids) + 1
        return ids[f]

    out: list[Production] = []
    for i in a.initial:
        for t in a.final:
            if (i, g.start, t) in facts:
                out.append((0, (nt((i, g.start, t)),)))
    for head, body in rules:
        out.append((nt(head), tuple(nt(f) if _is_nt(f[1]) else f[1] for f in body)))
    return compact(alphabet, out, 0)


# -- normal form, membership, emptiness, enumeration ----------------------


@dataclass
class CnfGrammar:
    """Chomsky normal form: ``A -> B C`` and ``A -> t``, plus a flag for the empty word."""

    start: int
    binary: dict[tuple[int, int], set[int]]
    terminal: dict[str, set[int]]
    start_nullable: bool
    trace: list[tuple[str, int]] = field(default_factory=list)

    @cached_property
    def by_left(self) -> dict[int, dict[int, frozenset]]:
        out = defaultdict(dict)
        for (b, c), heads in self.binary.items():
            out[b][c] = frozenset(heads)
        return dict(out)

    def combine(self, left, right) -> set[int]:
        """Heads ``A`` with ``A -> B C`` for some ``B`` in ``left`` and ``C`` in ``right``."""
        out = set()
        by_left = self.by_left
        for b in left:
            row = by_left.get(b)
            if not row:
                continue
            if len(row) < len(right):
                for c, hs in row.items():
                    if c in right:
                        out |= hs
            else:
                for c in right:
                    hs = row.get(c)
                    if hs:
                        out |= hs
        return out


class Recognizer:
    """CYK with the nonterminal set of every substring memoized across calls."""

    def __init__(self, cnf: CnfGrammar):
        self.cnf = cnf
        self.memo: dict[str, frozenset] = {}

    def derive(self, w: str) -> frozenset:
        got = self.memo.get(w)
        if got is not None:
            return got
        if len(w) == 1:
            cell = frozenset(self.cnf.terminal.get(w, ()))
        else:
            cell = set()
            for k in range(1, len(w)):
                left = self.derive(w[:k])
                if not left:
                    continue
                right = self.derive(w[k:])
                if right:
                    cell |= self.cnf.combine(left, right)
            cell = frozenset(cell)
        self.memo[w] = cell
        return cell

    def __call__(self, w: str) -> bool:
        if not w:
            return self.cnf.start_nullable
        return self.cnf.start in self.derive(w)


def to_cnf(g: Cfg) -> CnfGrammar:
    trace = [("input", len(g.productions))]
    if g.is_empty():
        return CnfGrammar(0, {}, {}, False, trace + [("empty", 0)])
    prods, nxt = binarize(g)
    trace.append(("bin", len(prods)))
    # TERM: terminals inside binary bodies get their own nonterminal (markers included)
    term_nt: dict[str, int] = {}
    fixed: list[Production] = []
    for a, body in prods:
        if len(body) == 2:
            new = []
            for s in body:
                if not _is_nt(s):
                    if s not in term_nt:
                        term_nt[s] = nxt
                        fixed.append((nxt, (s,)))
                        nxt += 1
                    s = term_nt[s]
                new.append(s)
            body = tuple(new)
        fixed.append((a, body))
    prods = fixed
    trace.append(("term", len(prods)))
    # DEL: nullable symbols
    nullable: set[int] = set()
    changed = True
    while changed:
        changed = False
        for a, body in prods:
            if a not in nullable and all(_is_nt(s) and s in nullable for s in body):
                nullable.add(a)
                changed = True
    no_eps: set[Production] = set()
    for a, body in prods:
        if len(body) == 2:
            no_eps.add((a, body))
            if body[1] in nullable:
                no_eps.add((a, (body[0],)))
            if body[0] in nullable:
                no_eps.add((a, (body[1],)))
        elif len(body) == 1:
            no_eps.add((a, body))
    trace.append(("del", len(no_eps)))
    # UNIT: closure over A -> B
    unit = defaultdict(set)
    for a, body in no_eps:
        if len(body) == 1 and _is_nt(body[0]):
            unit[a].add(body[0])
    heads = {a for a, _ in no_eps}
    reach = {}
    for a in heads:
        seen = {a}
        stack = [a]
        while stack:
            b = stack.pop()
            for c in unit.get(b, ()):
                if c not in seen:
                    seen.add(c)
                    stack.append(c)
        reach[a] = seen
    proper = defaultdict(list)
    for a, body in no_eps:
        if not (len(body) == 1 and _is_nt(body[0])):
            proper[a].append(body)
    binary = defaultdict(set)
    terminal = defaultdict(set)
    count = 0
    for a in heads:
        for b in reach[a]:
            for body in proper.get(b, ()):
                count += 1
                if len(body) == 1:
                    terminal[body[0]].add(a)
                else:
                    binary[body].add(a)
    trace.append(("unit", count))
    return CnfGrammar(g.start, dict(binary), dict(terminal), g.start in nullable, trace)


def cfg_member(g: Cfg, w: str) -> bool:
    """CYK membership test; substring results are cached on the grammar."""
    if g.is_empty():
        return False
    return g.recognizer(w)


def cfg_empty(g: Cfg) -> bool:
    # compact() already removed non-generating symbols
    return compact(g.alphabet, g.productions, g.start).is_empty()


def _product(s1: set[str], s2: set[str], n: int) -> set[str]:
    if not s1 or not s2:
        return set()
    by_len = defaultdict(list)
    for t in s2:
        by_len[len(t)].append(t)
    out = set()
    for s in s1:
        room = n - len(s)
        for k in range(room + 1):
            for t in by_len.get(k, ()):
                out.add(s + t)
    return out


def cfg_enumerate(g: Cfg, n: int) -> list[str]:
    """All words of length at most ``n`` in ``L(g)``, by bottom-up semi-naive evaluation."""
    if g.is_empty():
        return []
    prods, _ = binarize(g)
    lang = defaultdict(set)
    uses = defaultdict(list)
    for a, body in prods:
        for i, s in enumerate(body):
            if _is_nt(s):
                uses[s].append((a, body, i))
    pending: dict[int, set] = {}
    queue = deque()

    def full(s):
        return lang[s] if _is_nt(s) else {s}

    def add(a, strings):
        new = {s for s in strings if len(s) <= n} - lang[a]
        if new:
            lang[a] |= new
            if a not in pending:
                pending[a] = set()
                queue.append(a)
            pending[a] |= new

    for a, body in prods:
        if not any(_is_nt(s) for s in body):
            add(a, {"".join(body)})
    while queue:
        x = queue.popleft()
        delta = pending.pop(x)
        for a, body, i in uses[x]:
            if len(body) == 1:
                add(a, delta)
            elif i == 0:
                add(a, _product(delta, full(body[1]), n))
            else:
                add(a, _product(full(body[0]), delta, n))
    key = g.alphabet.shortlex_key()
    return sorted(lang[g.start], key=key)


# -- the two generic constructors -----------------------------------------


def conjugator_language(k: Nfa, l: Nfa) -> Cfg:
    """Grammar for ``{u^-1 v u : u in L(l), v in L(k)}`` as a language (no reduction)."""
    if k.alphabet != l.alphabet:
        raise AlphabetMismatchError(f"alphabets differ: {k.alphabet} vs {l.alphabet}")
    alphabet = k.alphabet
    ext = alphabet.with_markers(MARKER)
    template = [(0, (x, 0, inverse_letter(x))) for x in alphabet.signed] + [(0, (MARKER,))]
    g0 = Cfg(ext, tuple(template), 0)
    regular = fa.concat_all(
        ext,
        [
            fa.with_alphabet(fa.letter_inverse(l), ext),
            fa.from_words(ext, [MARKER]),
            fa.with_alphabet(l, ext),
        ],
    )
    marked = cfg_intersect_regular(g0, regular)
    return cfg_substitute(marked, MARKER, fa.with_alphabet(k, alphabet)) if not marked.is_empty() else empty_cfg(alphabet)


def pumped_language(u: str, v: str, l: Nfa, mode: str = "equal") -> Cfg:
    """``⋃ u^n L v^n`` (``equal``), ``⋃_{m<=n} u^m L v^n`` (``left<=``) or ``⋃_{m<=n} u^n L v^m`` (``right<=``)."""
    alphabet = l.alphabet
    alphabet.check(u)
    alphabet.check(v)
    ext = alphabet.with_markers(MARKER)
    prods: list[Production] = [(0, tuple(u) + (0,) + tuple(v)), (0, (1,))]
    if mode == "equal":
        prods.append((1, (MARKER,)))
    elif mode == "left<=":
        prods += [(1, (1,) + tuple(v)), (1, (MARKER,))]
    elif mode == "right<=":
        prods += [(1, tuple(u) + (1,)), (1, (MARKER,))]
    else:
        raise ValueError(f"unknown mode {mode!r}")
    return cfg_substitute(Cfg(ext, tuple(prods), 0), MARKER, l)


# -- text format -----------------------------------------------------------


def _name(a: int, start: int) -> str:
    return "S" if a == start else f"[N{a}]"


def to_text(g: Cfg) -> str:
    lines = [f"# alphabet: {g.alphabet}"]
    by_head = defaultdict(list)
    for a, body in g.productions:
        by_head[a].append(body)
    for a in sorted(by_head):
        alts = []
        for body in by_head[a]:
            alts.append(" ".join(_name(s, g.start) if _is_nt(s) else s for s in body) if body else EMPTY_TEXT)
        lines.append(f"{_name(a, g.start)} -> " + " | ".join(alts))
    return "\n".join(lines) + "\n"


def parse_cfg(text: str, alphabet: Alphabet | None = None) -> Cfg:
    """Parse ``HEAD -> body | body`` lines; ``1`` is the empty body.

    Tokens that occur as a head (or are bracketed) are nonterminals; the head
    of the first rule is the start symbol.
    """
    rules = []
    declared = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if line.startswith("#"):
            body = line[1:].strip()
            if body.lower().startswith("alphabet:"):
                symbols = body.split(":", 1)[1].replace(",", " ").split()
                declared = Alphabet(
                    tuple(s for s in symbols if s.isalpha()), tuple(s for s in symbols if not s.isalpha())
                )
            continue
        if not line:
            continue
        head, sep, rest = line.partition("->")
        if not sep or not head.strip():
            raise MalformedInputError(f"line {lineno}: expected 'HEAD -> body'")
        rules.append((head.strip(), [alt.split() for alt in rest.split("|")]))
    if not rules:
        if declared is None:
            raise MalformedInputError("grammar has no productions")
        return empty_cfg(declared if alphabet is None else declared.union(alphabet))
    heads = {h for h, _ in rules}
    ids: dict[str, int] = {}

    def nt(name):
        return ids.setdefault(name, len(ids))

    nt(rules[0][0])
    prods: list[Production] = []
    terminals = set()
    for head, alts in rules:
        for toks in alts:
            if toks == [EMPTY_TEXT] or not toks:
                prods.append((nt(head), ()))
                continue
            body = []
            for t in toks:
                if t in heads or (t.startswith("[") and t.endswith("]")):
                    body.append(nt(t))
                elif len(t) == 1:
                    body.append(t)
                    terminals.add(t)
                else:
                    raise MalformedInputError(f"unknown symbol {t!r} (terminals are single characters)")
            prods.append((nt(head), tuple(body)))
    if alphabet is None:
        alphabet = declared
    elif declared is not None:
        alphabet = declared.union(alphabet)
    if alphabet is None:
        alphabet = Alphabet(
            tuple(sorted({t.lower() for t in terminals if t.isalpha()})),
            tuple(sorted(t for t in terminals if not t.isalpha())),
        )
    for t in terminals:
        if t not in alphabet:
            raise MalformedInputError(f"terminal {t!r} not in alphabet {alphabet}")
    return compact(alphabet, prods, 0)
