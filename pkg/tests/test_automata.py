import random

import pytest

from conftest import AB, random_nfa
from geoconj import automata as fa
from geoconj.errors import AlphabetMismatchError, MalformedInputError
from geoconj.words import Alphabet, free_reduce


def lang(nfa, n=6):
    return set(fa.enumerate_words(nfa, n))


def test_letter_inverse():
    assert lang(fa.letter_inverse(fa.from_words(AB, ["ab"]))) == {"BA"}


def test_difference_drops_empty_word():
    a_star = fa.word_star(AB, "a")
    assert fa.enumerate_words(fa.difference(a_star, fa.epsilon(AB)), 5) == ["a", "aa", "aaa", "aaaa", "aaaaa"]


def test_minimize_merges_equivalent_branches():
    two = fa.build(AB, 3, {0}, {1, 2}, {(0, "a", 1), (0, "a", 2)})
    m = fa.minimize(fa.determinize(two))
    assert m.n == 2
    assert fa.enumerate_words(m, 4) == ["a"]


def test_sub_language():
    cycle = fa.word_star(AB, "ab")
    assert lang(fa.sub_language(cycle, cycle.initial, cycle.final)) == lang(cycle)
    assert fa.enumerate_words(fa.sub_language(fa.from_words(AB, ["a"]), [0], [0]), 3) == [""]
    assert fa.enumerate_words(fa.sub_language(cycle, [0], [1]), 5) == ["a", "aba", "ababa"]
    with pytest.raises(MalformedInputError):
        fa.sub_language(cycle, [5], [0])


def test_cyc_regular():
    assert lang(fa.cyc_regular(fa.from_words(AB, ["ab"]))) == {"ab", "ba"}
    assert lang(fa.cyc_regular(fa.epsilon(AB))) == {""}
    assert lang(fa.cyc_regular(fa.from_words(AB, ["aab"]))) == {"aab", "aba", "baa"}


def test_reduced_acceptors():
    red, cyc = fa.reduced_acceptor(AB), fa.cyclically_reduced_acceptor(AB)
    assert red.accepts("abA") and not cyc.accepts("abA")
    assert not red.accepts("aA") and not cyc.accepts("aA")
    length3 = [w for w in fa.enumerate_words(red, 3) if len(w) == 3]
    brute = [w for w in fa.enumerate_words(fa.universal(AB), 3) if len(w) == 3 and free_reduce(w) == w]
    assert len(length3) == len(brute) == 36


def test_membership_emptiness_enumerate():
    assert fa.membership(fa.word_star(AB, "a"), "aaa")
    unreachable = fa.build(AB, 2, {0}, {1}, {(1, "a", 1)})
    assert fa.emptiness(unreachable)
    assert fa.enumerate_words(fa.word_star(AB, "ab"), 4) == ["", "ab", "abab"]


def test_alphabet_mismatch():
    other = Alphabet(("a",))
    with pytest.raises(AlphabetMismatchError):
        fa.union(fa.epsilon(AB), fa.epsilon(other))


def test_text_round_trip():
    nfa = fa.build(AB, 3, {0}, {2}, {(0, "a", 1), (1, "", 2), (2, "B", 0)})
    back = fa.parse_nfa(fa.to_text(nfa))
    assert back == nfa
    assert "doublecircle" in fa.to_dot(nfa)


def test_parse_without_alphabet_line():
    nfa = fa.parse_nfa("states: 2\ninitial: 0\nfinal: 1\nedge: 0 b 1\nedge: 1 eps 0\n")
    assert nfa.alphabet == Alphabet(("b",))
    assert nfa.accepts("bb")
    with pytest.raises(MalformedInputError):
        fa.parse_nfa("states: 2\nedge: 0 ab 1\n")


def test_binary_operations_match_sets():
    rng = random.Random(3)
    for _ in range(30):
        x, y = random_nfa(rng), random_nfa(rng)
        lx, ly = lang(x), lang(y)
        assert lang(fa.union(x, y)) == lx | ly
        assert lang(fa.intersect(x, y)) == lx & ly
        assert lang(fa.difference(x, y)) == lx - ly
        assert {u + v for u in lx for v in ly if len(u + v) <= 6} <= lang(fa.concat(x, y))
        assert lang(fa.reverse(x)) == {w[::-1] for w in lx}
        assert lang(fa.trim(x)) == lx
        assert fa.equivalent(fa.determinize(x), x)


def test_minimize_is_minimal():
    rng = random.Random(4)
    for _ in range(20):
        m = fa.minimize(random_nfa(rng))
        sigs = [
            frozenset(w for w in fa.enumerate_words(fa.sub_language(m, [q], m.final), m.n + 1))
            for q in range(m.n)
        ]
        assert len(set(sigs)) == m.n


def test_cyc_idempotent():
    rng = random.Random(5)
    for _ in range(15):
        c = fa.cyc_regular(random_nfa(rng))
        assert lang(fa.cyc_regular(c)) == lang(c)
