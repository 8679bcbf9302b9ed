"""Grammars for the reduced words of ``α(K, L) = ⋃_{u ∈ L} u^-1 K u`` in a free group.

``K`` and ``L`` are automata over the signed alphabet; every entry point
first replaces them by the minimal trim automata of their reduced words.
"""

from __future__ import annotations

import logging
from collections import defaultdict, deque
from dataclasses import dataclass, field

from . import automata as fa
from . import grammars as gr
from .automata import Nfa
from .errors import PreconditionError, ResourceError
from .free_subsets import benois_saturate, reduced_product_obstruction
from .grammars import Cfg
from .words import Alphabet, inverse_letter

log = logging.getLogger(__name__)

MONOID_BUDGET = 200_000


@dataclass
class AlphaResult:
    grammar: Cfg
    branches: list[tuple[str, Cfg]] = field(default_factory=list)

    @property
    def provenance(self) -> list[str]:
        return [label for label, _ in self.branches]


def _identity_branch(alphabet: Alphabet) -> Cfg:
    return gr.from_nfa(fa.epsilon(alphabet))


def _union(alphabet: Alphabet, branches: list[tuple[str, Cfg]]) -> Cfg:
    return gr.cfg_union(*(g for _, g in branches), alphabet=alphabet)


def _require(obstruction, what: str):
    if obstruction is not None:
        x, y = obstruction
        raise PreconditionError(f"{what} is not reduced: letter {x!r} can be followed by {y!r}")


def _unify(*nfas: Nfa) -> list[Nfa]:
    alphabet = nfas[0].alphabet
    for n in nfas[1:]:
        alphabet = alphabet.union(n.alphabet)
    return [fa.with_alphabet(n, alphabet) for n in nfas]


# -- both products reduced -------------------------------------------------


def _red_branches(kb: Nfa, lb: Nfa) -> list[tuple[str, Cfg]]:
    branches = []
    if kb.accepts(""):
        branches.append(("red: identity", _identity_branch(kb.alphabet)))
        kb = fa.minimize(fa.without_empty_word(kb))
    if kb.n:
        branches.append(("red", gr.conjugator_language(kb, lb)))
    return branches


def alpha_red(k: Nfa, l: Nfa) -> Cfg:
    """α(K, L) when both ``L^-1 K`` and ``K L`` are reduced products."""
    k, l = _unify(k, l)
    kb, lb = benois_saturate(k), benois_saturate(l)
    if kb.n == 0 or lb.n == 0:
        return gr.empty_cfg(k.alphabet)
    _require(reduced_product_obstruction(fa.letter_inverse(lb), kb), "L^-1 K")
    _require(reduced_product_obstruction(kb, lb), "K L")
    return _union(k.alphabet, _red_branches(kb, lb))


# -- K L reduced -----------------------------------------------------------


class _Joint:
    """Letter actions of two DFAs on one combined index space (``-1`` = undefined)."""

    def __init__(self, la: Nfa, ka: Nfa):
        self.la, self.ka = la, ka
        self.nq = la.n
        self.off = la.n
        size = la.n + ka.n
        self.letters = la.alphabet.signed
        self.act = {}
        for x in self.letters:
            row = [-1] * size
            for s in range(la.n):
                t = la.delta.get((s, x))
                if t:
                    row[s] = t[0]
            for s in range(ka.n):
                t = ka.delta.get((s, x))
                if t:
                    row[self.off + s] = self.off + t[0]
            self.act[x] = row
        self.size = size

    def monoid(self) -> list[tuple[int, ...]]:
        ident = tuple(range(self.size))
        seen = {ident}
        queue = deque([ident])
        while queue:
            e = queue.popleft()
            for x in self.letters:
                row = self.act[x]
                f = tuple(row[s] if s >= 0 else -1 for s in e)
                if f not in seen:
                    seen.add(f)
                    queue.append(f)
                    if len(seen) > MONOID_BUDGET:
                        raise ResourceError("transition monoid exceeds budget")
        return list(seen)

    def path_language(self, start: tuple[int, ...], accept) -> Nfa:
        """Words moving every component of ``start`` simultaneously to a tuple satisfying ``accept``."""
        index = {start: 0}
        queue = deque([start])
        edges = set()
        while queue:
            s = queue.popleft()
            for x in self.letters:
                row = self.act[x]
                t = tuple(row[c] for c in s)
                if -1 in t:
                    continue
                if t not in index:
                    index[t] = len(index)
                    queue.append(t)
                edges.add((index[s], x, index[t]))
        final = {i for s, i in index.items() if accept(s)}
        return fa.trim(fa.build(self.la.alphabet, len(index), {0}, final, edges))


def _rred_tuples(joint: _Joint) -> set[tuple[tuple[int, ...], tuple[int, ...], int]]:
    """Tuples ``(p_1..p_{m+1}), (q_1..q_m), q'`` with m < |Q| whose word sets are nonempty.

    Both automata are deterministic, so a pair ``(v1, v2)`` determines the whole
    chain ``q0 -v1-> p1 -v2-> q1 -v1-> ...``; enumerating the letter actions of
    ``v1`` and ``v2`` therefore enumerates exactly the nonempty tuples.
    """
    la, ka = joint.la, joint.ka
    nq, off = joint.nq, joint.off
    q0 = min(la.initial)
    k0 = off + min(ka.initial)
    kfinal = {off + t for t in ka.final}
    monoid = joint.monoid()
    firsts = {(e[k0], e[:nq]) for e in monoid if e[k0] >= 0 and e[q0] >= 0}
    seconds = {
        (e[:nq], frozenset(s for s in range(off, off + ka.n) if e[s] in kfinal))
        for e in monoid
    }
    tuples = set()
    for qk, f1 in firsts:
        p1 = f1[q0]
        for f2, closes in seconds:
            if qk not in closes:
                continue
            ps, qs = [p1], []
            tuples.add(((p1,), (), qk))
            cur = p1
            for _ in range(1, nq):
                qm = f2[cur]
                if qm < 0:
                    break
                nxt = f1[qm]
                if nxt < 0:
                    break
                qs.append(qm)
                ps.append(nxt)
                tuples.add((tuple(ps), tuple(qs), qk))
                cur = nxt
    return tuples


def _rred_core(kc: Nfa, lb: Nfa) -> list[tuple[str, Cfg]]:
    """K cyclically reduced, 1 not in K, K L reduced."""
    alphabet = lb.alphabet
    joint = _Joint(lb, kc)
    q0 = min(lb.initial)
    off = joint.off
    kfinal = {off + t for t in kc.final}
    groups: dict[int, list[Nfa]] = defaultdict(list)
    counts: dict[int, int] = defaultdict(int)
    for ps, qs, qk in sorted(_rred_tuples(joint)):
        m = len(qs)
        v1 = joint.path_language(
            (off + min(kc.initial), q0) + qs,
            lambda s, want=(qk,) + ps: s == want,
        )
        v2 = joint.path_language(
            (qk,) + ps[:m],
            lambda s, want=qs: s[0] in kfinal and s[1:] == want,
        )
        if v1.n == 0 or v2.n == 0:
            continue
        groups[ps[-1]].append(fa.concat(v2, v1))
        counts[ps[-1]] += 1
    reduced = fa.reduced_acceptor(alphabet)
    branches = []
    for p in sorted(groups):
        middle = fa.minimize(fa.union_all(alphabet, groups[p]))
        w = fa.minimize(fa.sub_language(lb, [p], lb.final))
        g = gr.cfg_intersect_regular(gr.conjugator_language(middle, w), reduced)
        if not g.is_empty():
            branches.append((f"rred: p={p} tuples={counts[p]}", g))
    return branches


def _rred_branches(kb: Nfa, lb: Nfa) -> list[tuple[str, Cfg]]:
    alphabet = kb.alphabet
    branches = []
    if kb.accepts(""):
        branches.append(("rred: identity", _identity_branch(alphabet)))
        kb = fa.minimize(fa.without_empty_word(kb))
    if kb.n == 0:
        return branches
    cyc = fa.cyclically_reduced_acceptor(alphabet)
    k_nc = fa.minimize(fa.difference(kb, cyc))
    k_c = fa.minimize(fa.intersect(kb, cyc))
    if k_nc.n:
        # L^-1 (K \ C) and (K \ C) L are both reduced
        _require(reduced_product_obstruction(fa.letter_inverse(lb), k_nc), "L^-1 (K \\ C)")
        branches += [("rred/" + label, g) for label, g in _red_branches(k_nc, lb)]
    if k_c.n:
        branches += _rred_core(k_c, lb)
    return branches


def alpha_rred(k: Nfa, l: Nfa) -> Cfg:
    """α(K, L) when ``K L`` is a reduced product."""
    k, l = _unify(k, l)
    kb, lb = benois_saturate(k), benois_saturate(l)
    if kb.n == 0 or lb.n == 0:
        return gr.empty_cfg(k.alphabet)
    _require(reduced_product_obstruction(kb, lb), "K L")
    return _union(k.alphabet, _rred_branches(kb, lb))


def alpha_lred(k: Nfa, l: Nfa) -> Cfg:
    """α(K, L) when ``L^-1 K`` is a reduced product, as the inverse of α(K^-1, L)."""
    k, l = _unify(k, l)
    kb, lb = benois_saturate(k), benois_saturate(l)
    if kb.n == 0 or lb.n == 0:
        return gr.empty_cfg(k.alphabet)
    _require(reduced_product_obstruction(fa.letter_inverse(lb), kb), "L^-1 K")
    return gr.cfg_letter_inverse(alpha_rred(fa.letter_inverse(kb), lb))


# -- general case ----------------------------------------------------------


def _main_triples(la: Nfa, ka: Nfa) -> set[tuple[int, int, int]]:
    """``(q, p', q')`` such that some ``v1`` reads ``q0 -> q`` in L, ``q'0 -> p'`` in K
    and ``v1^-1`` reads ``q' -> T'`` in K, and ``p' -> q'`` admits a nonempty word."""
    letters = la.alphabet.signed
    dl = {k: v[0] for k, v in la.delta.items()}
    dk = {k: v[0] for k, v in ka.delta.items()}
    start = (min(la.initial), min(ka.initial), frozenset(ka.final))
    seen = {start}
    queue = deque([start])
    while queue:
        x, y, z = queue.popleft()
        for c in letters:
            x2, y2 = dl.get((x, c)), dk.get((y, c))
            if x2 is None or y2 is None:
                continue
            ci = inverse_letter(c)
            z2 = frozenset(s for s in range(ka.n) if dk.get((s, ci)) in z)
            if not z2:
                continue
            t = (x2, y2, z2)
            if t not in seen:
                seen.add(t)
                queue.append(t)
    step = defaultdict(set)
    for p, _, q in ka.edges:
        step[p].add(q)
    plus = {}
    for p in range(ka.n):
        reach = set()
        stack = list(step[p])
        while stack:
            q = stack.pop()
            if q not in reach:
                reach.add(q)
                stack.extend(step[q])
        plus[p] = reach
    return {(x, y, q2) for x, y, z in seen for q2 in z if q2 in plus[y]}


def alpha(k: Nfa, l: Nfa) -> AlphaResult:
    """Grammar for the reduced words of α(K, L) for arbitrary rational K and L."""
    k, l = _unify(k, l)
    alphabet = k.alphabet
    kb, lb = benois_saturate(k), benois_saturate(l)
    if kb.n == 0 or lb.n == 0:
        return AlphaResult(gr.empty_cfg(alphabet), [])
    branches: list[tuple[str, Cfg]] = []
    if kb.accepts(""):
        branches.append(("main: identity", _identity_branch(alphabet)))
        kb = fa.minimize(fa.without_empty_word(kb))
    if kb.n:
        triples = _main_triples(lb, kb)
        by_q = defaultdict(list)
        for q, p2, q2 in triples:
            by_q[q].append((p2, q2))
        for q in sorted(by_q):
            w = fa.minimize(fa.sub_language(lb, [q], lb.final))
            middle = fa.minimize(
                fa.union_all(alphabet, [fa.sub_language(kb, [p2], [q2]) for p2, q2 in sorted(by_q[q])])
            )
            for a in alphabet.signed:
                ka = fa.minimize(fa.ending_with(middle, a))
                wa = fa.minimize(fa.not_starting_with(w, inverse_letter(a)))
                if ka.n and wa.n:
                    g = alpha_rred(ka, wa)
                    if not g.is_empty():
                        branches.append((f"Y[{a}] q={q}", g))
                ka = fa.minimize(fa.starting_with(middle, a))
                wa = fa.minimize(fa.not_starting_with(w, a))
                if ka.n and wa.n:
                    g = alpha_lred(ka, wa)
                    if not g.is_empty():
                        branches.append((f"Z[{a}] q={q}", g))
    log.debug("alpha: %d branches", len(branches))
    return AlphaResult(_union(alphabet, branches), branches)


def alpha_powers(k: Nfa, u: str) -> Cfg:
    """Grammar for the reduced words of ``⋃_n u^-n K u^n``."""
    return alpha(k, fa.word_star(k.alphabet, u)).grammar


def dgcp(k0: Nfa, k1: Nfa, k2: Nfa) -> bool:
    """Is some element of K1 equal to ``u^-1 y u`` with ``u`` in K0 and ``y`` in K2?"""
    k0, k1, k2 = _unify(k0, k1, k2)
    conj = alpha(k2, k0).grammar
    return not gr.cfg_empty(gr.cfg_intersect_regular(conj, benois_saturate(k1)))


def gcp(x: str, k: Nfa, l0: Nfa) -> bool:
    """Is there ``z`` in L0 with ``z^-1 x z`` in K?"""
    k, l0 = _unify(k, l0)
    return dgcp(l0, k, fa.from_words(k.alphabet, [x]))
