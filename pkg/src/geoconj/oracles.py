"""Brute-force reference computations.

Nothing here calls the saturation, grammar or transducer code.  Reduced
words of a rational subset are obtained from Dyck reachability: a path
whose label reduces to ``g1...gk`` splits as ``z0 g1 z1 ... gk zk`` with
every ``zi`` trivial in the free group.
"""

from __future__ import annotations

from collections import defaultdict, deque
from typing import Iterator

from .automata import EPS, Nfa
from .errors import ResourceError
from .words import Alphabet, free_reduce, invert

DEFAULT_BUDGET = 10**6


def free_ball(alphabet: Alphabet, n: int, budget: int = DEFAULT_BUDGET) -> list[str]:
    """All reduced words of length at most ``n``, shortlex ordered."""
    letters = alphabet.signed
    out = [""]
    layer = [""]
    for _ in range(n):
        layer = [w + x for w in layer for x in letters if not w or w[-1] != x.swapcase()]
        out += layer
        if len(out) > budget:
            raise ResourceError(f"free ball of radius {n} exceeds budget {budget}")
    return out


def dyck_pairs(nfa: Nfa) -> set[tuple[int, int]]:
    """Pairs ``(p, q)`` joined by a path whose label is trivial in the free group."""
    into = defaultdict(list)  # q -> [(p, x)]
    out = defaultdict(list)  # p -> [(x, q)]
    for p, x, q in nfa.edges:
        into[q].append((p, x))
        out[p].append((x, q))
    rel: set[tuple[int, int]] = set()
    succ = defaultdict(set)
    pred = defaultdict(set)
    work = deque()

    def add(p, q):
        if (p, q) not in rel:
            rel.add((p, q))
            succ[p].add(q)
            pred[q].add(p)
            work.append((p, q))

    for p in range(nfa.n):
        add(p, p)
    for p, x, q in nfa.edges:
        if x == EPS:
            add(p, q)
    while work:
        p, q = work.popleft()
        for r in list(succ[q]):
            add(p, r)
        for o in list(pred[p]):
            add(o, q)
        for o, x in into[p]:
            if x == EPS or not x.isalpha():
                continue
            for y, r in out[q]:
                if y == x.swapcase():
                    add(o, r)
    return rel


class ReducedView:
    """Simulates ``nfa`` on reduced words through its Dyck-reachability relation."""

    def __init__(self, nfa: Nfa):
        self.nfa = nfa
        self.letters = nfa.alphabet.signed
        rel = dyck_pairs(nfa)
        self.jump = defaultdict(set)
        for p, q in rel:
            self.jump[p].add(q)
        self.move = defaultdict(set)
        for p, x, q in nfa.edges:
            if x != EPS:
                self.move[p, x].add(q)
        self.start = self._close(nfa.initial)

    def _close(self, states) -> frozenset:
        out = set()
        for p in states:
            out |= self.jump[p]
        return frozenset(out)

    def step(self, states, x) -> frozenset:
        nxt = set()
        for p in states:
            nxt |= self.move.get((p, x), set())
        return self._close(nxt)

    def contains(self, g: str) -> bool:
        cur = self.start
        for x in free_reduce(g):
            cur = self.step(cur, x)
            if not cur:
                return False
        return bool(cur & self.nfa.final)

    def words(self, n: int) -> Iterator[str]:
        """Reduced words of the subset with length at most ``n``, shortlex, lazily."""
        layer = {"": self.start} if self.start else {}
        for length in range(n + 1):
            for w, states in layer.items():
                if states & self.nfa.final:
                    yield w
            if length == n:
                return
            nxt = {}
            for w, states in layer.items():
                for x in self.letters:
                    if w and w[-1] == x.swapcase():
                        continue
                    t = self.step(states, x)
                    if t:
                        nxt[w + x] = t
            layer = nxt
            if not layer:
                return


def reduced_words(nfa: Nfa, n: int) -> list[str]:
    return list(ReducedView(nfa).words(n))


def reduced_member(nfa: Nfa, g: str) -> bool:
    return ReducedView(nfa).contains(g)


def alpha_oracle(k: Nfa, l: Nfa, len_u: int, len_v: int) -> set[str]:
    us = reduced_words(l, len_u)
    vs = reduced_words(k, len_v)
    return {free_reduce(invert(u) + v + u) for u in us for v in vs}


def alpha_ball_oracle(k: Nfa, conjugators, radius: int) -> set[str]:
    """Reduced words ``x`` of length ``<= radius`` with ``u x u^-1`` in K for some listed ``u``."""
    view = ReducedView(k)
    conjugators = [free_reduce(u) for u in conjugators]
    return {
        x
        for x in free_ball(k.alphabet, radius)
        if any(view.contains(u + x + invert(u)) for u in conjugators)
    }


def conjugator_witness(w: str, k: Nfa, l: Nfa, max_len: int) -> str | None:
    """Shortlex-first ``u`` in the reduced words of L with ``u w u^-1`` in K, or ``None``."""
    kv = ReducedView(k)
    for u in ReducedView(l).words(max_len):
        if kv.contains(u + w + invert(u)):
            return u
    return None


def dgcp_witness_search(k0: Nfa, k1: Nfa, k2: Nfa, bound: int) -> tuple[str, str, str] | None:
    """First ``(u, x, y)`` with ``u`` in K0, ``y`` in K2 and ``x = u^-1 y u`` in K1.

    Absence of a witness proves nothing.
    """
    ys = reduced_words(k2, bound)
    target = ReducedView(k1)
    for u in ReducedView(k0).words(bound):
        for y in ys:
            x = free_reduce(invert(u) + y + u)
            if target.contains(x):
                return u, x, y
    return None


def vf_ball(structure, n: int, budget: int = DEFAULT_BUDGET) -> dict:
    """Elements of geodesic length ``<= n`` mapped to their full sets of geodesic words."""
    letters = structure.letters
    gen = {x: structure.letter_element(x) for x in letters}
    ident = structure.identity
    dist = {ident: 0}
    geos = {ident: {""}}
    layer = [ident]
    for d in range(1, n + 1):
        nxt = []
        for g in layer:
            for x in letters:
                h = structure.multiply(g, gen[x])
                if h not in dist:
                    dist[h] = d
                    geos[h] = set()
                    nxt.append(h)
                if dist[h] == d:
                    geos[h] |= {w + x for w in geos[g]}
        layer = nxt
        if len(dist) > budget:
            raise ResourceError(f"ball of radius {n} exceeds budget {budget}")
    return geos
