"""Rational subsets of a free group, represented by automata over the signed alphabet."""

from __future__ import annotations

from . import automata as fa
from .automata import EPS, Nfa
from .words import Alphabet, free_reduce, inverse_letter


def _eps_reach(n: int, eps: set[tuple[int, int]]) -> list[set[int]]:
    """Reflexive-transitive closure of the epsilon relation."""
    succ = [set() for _ in range(n)]
    for p, q in eps:
        succ[p].add(q)
    reach = []
    for p in range(n):
        seen = {p}
        stack = [p]
        while stack:
            r = stack.pop()
            for s in succ[r]:
                if s not in seen:
                    seen.add(s)
                    stack.append(s)
        reach.append(seen)
    return reach


def saturate(nfa: Nfa) -> Nfa:
    """Add epsilon-edges ``p -> q`` whenever ``p -x-> r ~eps~> s -x^-1-> q`` until nothing changes."""
    letter_edges = [(p, x, q) for p, x, q in nfa.edges if x != EPS]
    eps = {(p, q) for p, x, q in nfa.edges if x == EPS}
    into: dict[tuple[int, str], list[int]] = {}
    for s, y, q in letter_edges:
        into.setdefault((s, y), []).append(q)
    while True:
        reach = _eps_reach(nfa.n, eps)
        added = set()
        for p, x, r in letter_edges:
            if not x.isalpha():
                continue
            y = inverse_letter(x)
            for s in reach[r]:
                for q in into.get((s, y), ()):
                    if (p, q) not in eps:
                        added.add((p, q))
        if not added:
            break
        eps |= added
    return fa.build(nfa.alphabet, nfa.n, nfa.initial, nfa.final, set(letter_edges) | {(p, EPS, q) for p, q in eps})


def benois_saturate(nfa: Nfa) -> Nfa:
    """Minimal trim DFA of the reduced words representing elements of ``L(nfa)``."""
    sat = saturate(nfa)
    return fa.minimize(fa.intersect(sat, fa.reduced_acceptor(nfa.alphabet)))


def rational_membership(g: str, nfa: Nfa) -> bool:
    return benois_saturate(nfa).accepts(free_reduce(g, nfa.alphabet))


def is_reduced_product(k: Nfa, l: Nfa) -> bool:
    """Whether every product of a reduced word of K with a reduced word of L is reduced."""
    last = fa.last_letters(benois_saturate(k))
    first = fa.first_letters(benois_saturate(l))
    return not any(inverse_letter(x) in first for x in last if x.isalpha())


def reduced_product_obstruction(k: Nfa, l: Nfa) -> tuple[str, str] | None:
    last = fa.last_letters(benois_saturate(k))
    first = fa.first_letters(benois_saturate(l))
    for x in sorted(last):
        if x.isalpha() and inverse_letter(x) in first:
            return x, inverse_letter(x)
    return None


def rational_intersection_empty(k: Nfa, l: Nfa) -> bool:
    return fa.intersect(benois_saturate(k), benois_saturate(l)).is_empty()


def singleton(alphabet: Alphabet, w: str) -> Nfa:
    return fa.from_words(alphabet, [w])
