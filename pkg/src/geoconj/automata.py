"""Finite automata over signed alphabets.

:class:`Nfa` is an immutable value: states are ``0 .. n-1``, edges are
``(src, label, dst)`` triples and the label ``""`` (``EPS``) is an
epsilon-move.  Every operation below is a pure function returning a new
automaton.
"""

from __future__ import annotations

from collections import defaultdict, deque
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator

from .errors import AlphabetMismatchError, MalformedInputError
from .words import Alphabet, format_word, inverse_letter, parse_word

EPS = ""


@dataclass(frozen=True)
class Nfa:
    alphabet: Alphabet
    n: int
    initial: frozenset
    final: frozenset
    edges: frozenset

    def __post_init__(self):
        object.__setattr__(self, "initial", frozenset(self.initial))
        object.__setattr__(self, "final", frozenset(self.final))
        object.__setattr__(self, "edges", frozenset(self.edges))
        for q in self.initial | self.final:
            if not 0 <= q < self.n:
                raise MalformedInputError(f"state {q} outside 0..{self.n - 1}")
        for p, x, q in self.edges:
            if not (0 <= p < self.n and 0 <= q < self.n):
                raise MalformedInputError(f"edge {(p, x, q)} leaves the state set")
            if x != EPS and x not in self.alphabet:
                raise MalformedInputError(f"edge label {x!r} not in alphabet {self.alphabet}")

    # -- adjacency ---------------------------------------------------------

    @cached_property
    def out(self) -> dict[int, list[tuple[str, int]]]:
        out = defaultdict(list)
        for p, x, q in sorted(self.edges):
            out[p].append((x, q))
        return out

    @cached_property
    def delta(self) -> dict[tuple[int, str], tuple[int, ...]]:
        d = defaultdict(list)
        for p, x, q in self.edges:
            d[p, x].append(q)
        return {k: tuple(sorted(v)) for k, v in d.items()}

    @cached_property
    def has_eps(self) -> bool:
        return any(x == EPS for _, x, _ in self.edges)

    @cached_property
    def is_deterministic(self) -> bool:
        return len(self.initial) <= 1 and not self.has_eps and all(len(v) == 1 for v in self.delta.values())

    def closure(self, states: Iterable[int]) -> frozenset:
        seen = set(states)
        if not self.has_eps:
            return frozenset(seen)
        stack = list(seen)
        while stack:
            p = stack.pop()
            for q in self.delta.get((p, EPS), ()):
                if q not in seen:
                    seen.add(q)
                    stack.append(q)
        return frozenset(seen)

    def step(self, states: Iterable[int], x: str) -> frozenset:
        nxt = set()
        for p in states:
            nxt.update(self.delta.get((p, x), ()))
        return self.closure(nxt)

    # -- basic semantics ---------------------------------------------------

    def accepts(self, w: str) -> bool:
        cur = self.closure(self.initial)
        for x in w:
            if not cur:
                return False
            cur = self.step(cur, x)
        return bool(cur & self.final)

    def is_empty(self) -> bool:
        return not (self.reachable() & self.final)

    def reachable(self, start: Iterable[int] | None = None) -> frozenset:
        start = self.initial if start is None else start
        seen = set(start)
        stack = list(seen)
        while stack:
            p = stack.pop()
            for _, q in self.out.get(p, ()):
                if q not in seen:
                    seen.add(q)
                    stack.append(q)
        return frozenset(seen)

    def coreachable(self) -> frozenset:
        back = defaultdict(list)
        for p, _, q in self.edges:
            back[q].append(p)
        seen = set(self.final)
        stack = list(seen)
        while stack:
            q = stack.pop()
            for p in back[q]:
                if p not in seen:
                    seen.add(p)
                    stack.append(p)
        return frozenset(seen)

    def __len__(self) -> int:
        return self.n

    def __repr__(self) -> str:
        return f"Nfa(n={self.n}, |E|={len(self.edges)}, alphabet={self.alphabet})"


# -- constructors ----------------------------------------------------------


def build(alphabet: Alphabet, n: int, initial, final, edges) -> Nfa:
    return Nfa(alphabet, n, frozenset(initial), frozenset(final), frozenset(edges))


def empty(alphabet: Alphabet) -> Nfa:
    return build(alphabet, 0, (), (), ())


def epsilon(alphabet: Alphabet) -> Nfa:
    return build(alphabet, 1, {0}, {0}, ())


def universal(alphabet: Alphabet) -> Nfa:
    """All words over the signed alphabet (markers excluded)."""
    return build(alphabet, 1, {0}, {0}, {(0, x, 0) for x in alphabet.signed})


def from_words(alphabet: Alphabet, words: Iterable[str]) -> Nfa:
    """Trie automaton for a finite language."""
    trie: dict[tuple[int, str], int] = {}
    final = set()
    n = 1
    for w in words:
        alphabet.check(w)
        p = 0
        for x in w:
            if (p, x) not in trie:
                trie[p, x] = n
                n += 1
            p = trie[p, x]
        final.add(p)
    return build(alphabet, n, {0}, final, {(p, x, q) for (p, x), q in trie.items()})


def word_star(alphabet: Alphabet, u: str) -> Nfa:
    """The language ``u*``."""
    alphabet.check(u)
    if not u:
        return epsilon(alphabet)
    k = len(u)
    return build(alphabet, k, {0}, {0}, {(i, u[i], (i + 1) % k) for i in range(k)})


def with_alphabet(nfa: Nfa, alphabet: Alphabet) -> Nfa:
    """Reinterpret ``nfa`` over a larger alphabet."""
    for _, x, _ in nfa.edges:
        if x != EPS and x not in alphabet:
            raise AlphabetMismatchError(f"letter {x!r} missing from {alphabet}")
    return build(alphabet, nfa.n, nfa.initial, nfa.final, nfa.edges)


def _same_alphabet(a: Nfa, b: Nfa) -> Alphabet:
    if a.alphabet != b.alphabet:
        raise AlphabetMismatchError(f"alphabets differ: {a.alphabet} vs {b.alphabet}")
    return a.alphabet


def _shift(nfa: Nfa, k: int):
    return {(p + k, x, q + k) for p, x, q in nfa.edges}


def _renumber(alphabet: Alphabet, keep: Iterable[int], initial, final, edges) -> Nfa:
    index = {q: i for i, q in enumerate(sorted(keep))}
    return build(
        alphabet,
        len(index),
        {index[q] for q in initial if q in index},
        {index[q] for q in final if q in index},
        {(index[p], x, index[q]) for p, x, q in edges if p in index and q in index},
    )


# -- rational operations ---------------------------------------------------


def union(a: Nfa, b: Nfa) -> Nfa:
    alphabet = _same_alphabet(a, b)
    k = a.n
    return build(
        alphabet,
        a.n + b.n,
        a.initial | {q + k for q in b.initial},
        a.final | {q + k for q in b.final},
        set(a.edges) | _shift(b, k),
    )


def union_all(alphabet: Alphabet, nfas: Iterable[Nfa]) -> Nfa:
    out = empty(alphabet)
    for nfa in nfas:
        out = union(out, nfa)
    return out


def concat(a: Nfa, b: Nfa) -> Nfa:
    alphabet = _same_alphabet(a, b)
    k = a.n
    edges = set(a.edges) | _shift(b, k)
    edges |= {(f, EPS, i + k) for f in a.final for i in b.initial}
    return build(alphabet, a.n + b.n, a.initial, {q + k for q in b.final}, edges)


def concat_all(alphabet: Alphabet, nfas: Iterable[Nfa]) -> Nfa:
    out = epsilon(alphabet)
    for nfa in nfas:
        out = concat(out, nfa)
    return out


def star(a: Nfa) -> Nfa:
    s = a.n
    edges = set(a.edges) | {(s, EPS, i) for i in a.initial} | {(f, EPS, s) for f in a.final}
    return build(a.alphabet, a.n + 1, {s}, {s}, edges)


def reverse(a: Nfa) -> Nfa:
    return build(a.alphabet, a.n, a.final, a.initial, {(q, x, p) for p, x, q in a.edges})


def letter_inverse(a: Nfa) -> Nfa:
    """Automaton for ``{w^-1 : w in L(a)}``."""
    return build(a.alphabet, a.n, a.final, a.initial, {(q, inverse_letter(x), p) for p, x, q in a.edges})


def remove_epsilon(a: Nfa) -> Nfa:
    if not a.has_eps:
        return a
    edges = set()
    final = set()
    for p in range(a.n):
        cl = a.closure([p])
        if cl & a.final:
            final.add(p)
        for s in cl:
            for x, q in a.out.get(s, ()):
                if x != EPS:
                    edges.add((p, x, q))
    return trim(build(a.alphabet, a.n, a.initial, final, edges))


def trim(a: Nfa) -> Nfa:
    useful = a.reachable() & a.coreachable()
    if useful == frozenset(range(a.n)):
        return a
    return _renumber(a.alphabet, useful, a.initial, a.final, a.edges)


def intersect(a: Nfa, b: Nfa) -> Nfa:
    alphabet = _same_alphabet(a, b)
    a, b = remove_epsilon(a), remove_epsilon(b)
    index: dict[tuple[int, int], int] = {}
    queue = deque()
    for p in sorted(a.initial):
        for q in sorted(b.initial):
            index[p, q] = len(index)
            queue.append((p, q))
    edges = set()
    while queue:
        p, q = queue.popleft()
        src = index[p, q]
        for x, p2 in a.out.get(p, ()):
            for q2 in b.delta.get((q, x), ()):
                if (p2, q2) not in index:
                    index[p2, q2] = len(index)
                    queue.append((p2, q2))
                edges.add((src, x, index[p2, q2]))
    final = {i for (p, q), i in index.items() if p in a.final and q in b.final}
    initial = {index[p, q] for p in a.initial for q in b.initial}
    return trim(build(alphabet, len(index), initial, final, edges))


def intersect_all(first: Nfa, *rest: Nfa) -> Nfa:
    out = first
    for nfa in rest:
        out = intersect(out, nfa)
    return out


def determinize(a: Nfa) -> Nfa:
    """Subset construction (epsilon-moves eliminated); the result is a partial DFA."""
    letters = a.alphabet.letters
    start = a.closure(a.initial)
    index = {start: 0}
    queue = deque([start])
    edges = set()
    while queue:
        s = queue.popleft()
        for x in letters:
            t = a.step(s, x)
            if not t:
                continue
            if t not in index:
                index[t] = len(index)
                queue.append(t)
            edges.add((index[s], x, index[t]))
    final = {i for s, i in index.items() if s & a.final}
    return build(a.alphabet, len(index), {0}, final, edges)


def complement(a: Nfa) -> Nfa:
    d = determinize(a)
    sink = d.n
    edges = set(d.edges)
    for p in range(d.n + 1):
        for x in d.alphabet.letters:
            if (p, x) not in d.delta:
                edges.add((p, x, sink))
    return build(d.alphabet, d.n + 1, {0}, set(range(d.n + 1)) - d.final, edges)


def difference(a: Nfa, b: Nfa) -> Nfa:
    _same_alphabet(a, b)
    return intersect(a, complement(b))


def minimize(a: Nfa) -> Nfa:
    """Minimal trim DFA, states numbered in breadth-first shortlex order.

    Two automata recognise the same language iff their minimized forms are
    equal as values.
    """
    d = trim(determinize(a))
    if d.n == 0:
        return empty(a.alphabet)
    letters = d.alphabet.letters
    sink = d.n
    trans = {(p, x): d.delta.get((p, x), (sink,))[0] for p in range(d.n) for x in letters}
    for x in letters:
        trans[sink, x] = sink
    cls = {p: int(p in d.final) for p in range(d.n + 1)}
    while True:
        sig = {p: (cls[p],) + tuple(cls[trans[p, x]] for x in letters) for p in cls}
        ids: dict[tuple, int] = {}
        new = {p: ids.setdefault(sig[p], len(ids)) for p in sorted(cls)}
        if len(ids) == len(set(cls.values())):
            cls = new
            break
        cls = new
    dead = cls[sink]
    start = cls[0]
    if start == dead:
        return empty(a.alphabet)
    rep = {}
    for p in range(d.n):
        rep.setdefault(cls[p], p)
    order = {start: 0}
    queue = deque([start])
    edges = set()
    while queue:
        c = queue.popleft()
        for x in letters:
            t = cls[trans[rep[c], x]]
            if t == dead:
                continue
            if t not in order:
                order[t] = len(order)
                queue.append(t)
            edges.add((order[c], x, order[t]))
    final = {order[c] for c in order if rep[c] in d.final}
    return build(a.alphabet, len(order), {0}, final, edges)


def equivalent(a: Nfa, b: Nfa) -> bool:
    return minimize(a) == minimize(b)


def sub_language(a: Nfa, initial: Iterable[int], final: Iterable[int]) -> Nfa:
    """The language ``L(Q, I, J, E)`` of ``a`` read between state sets I and J."""
    initial, final = frozenset(initial), frozenset(final)
    for q in initial | final:
        if not 0 <= q < a.n:
            raise MalformedInputError(f"state {q} outside 0..{a.n - 1}")
    return build(a.alphabet, a.n, initial, final, a.edges)


def cyc_regular(a: Nfa) -> Nfa:
    """Automaton for all cyclic permutations ``vu`` of words ``uv`` of ``L(a)``."""
    a = trim(a)
    parts = [concat(sub_language(a, [q], a.final), sub_language(a, a.initial, [q])) for q in range(a.n)]
    return minimize(union_all(a.alphabet, parts))


# -- special acceptors -----------------------------------------------------


def reduced_acceptor(alphabet: Alphabet) -> Nfa:
    """Accepts exactly the freely reduced words."""
    letters = alphabet.letters
    state = {x: i + 1 for i, x in enumerate(letters)}
    edges = set()
    for x in letters:
        edges.add((0, x, state[x]))
        for y in letters:
            if not (y.isalpha() and y == inverse_letter(x)):
                edges.add((state[x], y, state[y]))
    return build(alphabet, len(letters) + 1, {0}, set(range(len(letters) + 1)), edges)


def cyclically_reduced_acceptor(alphabet: Alphabet) -> Nfa:
    """Accepts the reduced words whose first letter is not the inverse of the last."""
    letters = alphabet.letters
    k = len(letters)
    pos = {x: i for i, x in enumerate(letters)}

    def st(f, last):
        return 1 + pos[f] * k + pos[last]

    edges = set()
    final = {0}
    for f in letters:
        edges.add((0, f, st(f, f)))
        for last in letters:
            if not (f.isalpha() and f == inverse_letter(last)):
                final.add(st(f, last))
            for y in letters:
                if not (y.isalpha() and y == inverse_letter(last)):
                    edges.add((st(f, last), y, st(f, y)))
    return minimize(build(alphabet, 1 + k * k, {0}, final, edges))


def _first_letter_filter(alphabet: Alphabet, allowed: Iterable[str], allow_empty: bool) -> Nfa:
    allowed = set(allowed)
    edges = {(0, x, 1) for x in allowed} | {(1, x, 1) for x in alphabet.letters}
    return build(alphabet, 2, {0}, {1} | ({0} if allow_empty else set()), edges)


def _last_letter_filter(alphabet: Alphabet, a: str) -> Nfa:
    edges = {(p, x, int(x == a)) for p in (0, 1) for x in alphabet.letters}
    return build(alphabet, 2, {0}, {1}, edges)


def starting_with(nfa: Nfa, a: str) -> Nfa:
    """``L ∩ aÃ*``."""
    return intersect(nfa, _first_letter_filter(nfa.alphabet, [a], False))


def not_starting_with(nfa: Nfa, a: str) -> Nfa:
    """``L \\ aÃ*``."""
    others = [x for x in nfa.alphabet.letters if x != a]
    return intersect(nfa, _first_letter_filter(nfa.alphabet, others, True))


def ending_with(nfa: Nfa, a: str) -> Nfa:
    """``L ∩ Ã*a``."""
    return intersect(nfa, _last_letter_filter(nfa.alphabet, a))


def without_empty_word(nfa: Nfa) -> Nfa:
    return intersect(nfa, _first_letter_filter(nfa.alphabet, nfa.alphabet.letters, False))


def first_letters(nfa: Nfa) -> set[str]:
    a = trim(remove_epsilon(nfa))
    return {x for p in a.initial for x, _ in a.out.get(p, ())}


def last_letters(nfa: Nfa) -> set[str]:
    a = trim(remove_epsilon(nfa))
    return {x for _, x, q in a.edges if q in a.final}


# -- enumeration -----------------------------------------------------------


def iter_words(nfa: Nfa, n: int) -> Iterator[str]:
    """Accepted words of length at most ``n`` in shortlex order, each once."""
    a = trim(nfa)
    if a.n == 0:
        return
    letters = a.alphabet.letters
    layer = {"": a.closure(a.initial)}
    for length in range(n + 1):
        for w, states in layer.items():
            if states & a.final:
                yield w
        if length == n:
            break
        nxt = {}
        for w, states in layer.items():
            for x in letters:
                t = a.step(states, x)
                if t:
                    nxt[w + x] = t
        layer = nxt
        if not layer:
            break


def enumerate_words(nfa: Nfa, n: int) -> list[str]:
    return list(iter_words(nfa, n))


def membership(nfa: Nfa, w: str) -> bool:
    return nfa.accepts(w)


def emptiness(nfa: Nfa) -> bool:
    return nfa.is_empty()


# -- text formats ----------------------------------------------------------


def to_text(nfa: Nfa) -> str:
    lines = [
        f"alphabet: {nfa.alphabet}",
        f"states: {nfa.n}",
        "initial: " + ",".join(map(str, sorted(nfa.initial))),
        "final: " + ",".join(map(str, sorted(nfa.final))),
    ]
    for p, x, q in sorted(nfa.edges):
        lines.append(f"edge: {p} {x if x else 'eps'} {q}")
    return "\n".join(lines) + "\n"


def _int_list(text: str) -> list[int]:
    text = text.strip()
    if not text:
        return []
    try:
        return [int(t) for t in text.replace(",", " ").split()]
    except ValueError:
        raise MalformedInputError(f"bad state list {text!r}") from None


def parse_nfa(text: str, alphabet: Alphabet | None = None) -> Nfa:
    """Parse the line-based automaton format.

    The ``alphabet:`` line is optional; without it (and without the
    ``alphabet`` argument) generators are inferred from the edge labels.
    """
    n = None
    initial: list[int] = []
    final: list[int] = []
    edges = []
    declared = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, rest = line.partition(":")
        if not sep:
            raise MalformedInputError(f"line {lineno}: expected 'key: value', got {raw!r}")
        key = key.strip().lower()
        if key == "states":
            try:
                n = int(rest)
            except ValueError:
                raise MalformedInputError(f"line {lineno}: bad state count") from None
        elif key == "initial":
            initial = _int_list(rest)
        elif key == "final":
            final = _int_list(rest)
        elif key == "alphabet":
            symbols = [s for s in rest.replace(",", " ").split()]
            declared = Alphabet(
                tuple(s for s in symbols if s.isalpha()), tuple(s for s in symbols if not s.isalpha())
            )
        elif key == "edge":
            parts = rest.split()
            if len(parts) != 3:
                raise MalformedInputError(f"line {lineno}: edge needs 'src label dst'")
            try:
                p, q = int(parts[0]), int(parts[2])
            except ValueError:
                raise MalformedInputError(f"line {lineno}: bad edge endpoints") from None
            label = parts[1]
            if label in ("eps", "ε", "1"):
                label = EPS
            elif len(label) != 1:
                raise MalformedInputError(f"line {lineno}: label {label!r} must be one letter or eps")
            edges.append((p, label, q))
        else:
            raise MalformedInputError(f"line {lineno}: unknown key {key!r}")
    if n is None:
        raise MalformedInputError("missing 'states:' line")
    if alphabet is None:
        alphabet = declared
    elif declared is not None:
        alphabet = declared.union(alphabet)
    if alphabet is None:
        gens = sorted({x.lower() for _, x, _ in edges if x.isalpha()})
        marks = sorted({x for _, x, _ in edges if x and not x.isalpha()})
        if not gens and not marks:
            raise MalformedInputError("cannot infer alphabet: add an 'alphabet:' line")
        alphabet = Alphabet(tuple(gens), tuple(marks))
    return build(alphabet, n, initial, final, edges)


def to_dot(nfa: Nfa, name: str = "nfa") -> str:
    lines = [f"digraph {name} {{", "  rankdir=LR;"]
    for q in range(nfa.n):
        shape = "doublecircle" if q in nfa.final else "circle"
        lines.append(f'  {q} [shape={shape}];')
    for i, q in enumerate(sorted(nfa.initial)):
        lines.append(f'  start{i} [shape=point]; start{i} -> {q};')
    for p, x, q in sorted(nfa.edges):
        lines.append(f'  {p} -> {q} [label="{x if x else "ε"}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def from_word_text(alphabet: Alphabet, texts: Iterable[str]) -> Nfa:
    return from_words(alphabet, [parse_word(t, alphabet) for t in texts])


def describe(nfa: Nfa, n: int = 4) -> str:
    return "{" + ", ".join(format_word(w) for w in enumerate_words(nfa, n)) + "}"
