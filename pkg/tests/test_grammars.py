import itertools
import random

import pytest

from conftest import AB, random_nfa
from geoconj import automata as fa
from geoconj import grammars as gr
from geoconj.errors import MalformedInputError

ANBN = "S -> a S b | 1"


def anbn():
    return gr.parse_cfg(ANBN, AB)


def all_words(n, letters="aAbB"):
    for k in range(n + 1):
        for p in itertools.product(letters, repeat=k):
            yield "".join(p)


def test_membership_and_reverse():
    g = anbn()
    assert gr.cfg_member(g, "aabb")
    assert not gr.cfg_member(g, "abab")
    assert gr.cfg_member(g, "")
    rev = gr.cfg_reverse(g)
    assert gr.cfg_enumerate(rev, 8) == ["", "ba", "bbaa", "bbbaaa", "bbbbaaaa"]


def test_intersection_with_regular_forces_singleton():
    a_star_b = fa.concat(fa.word_star(AB, "a"), fa.from_words(AB, ["b"]))
    assert gr.cfg_enumerate(gr.cfg_intersect_regular(anbn(), a_star_b), 10) == ["ab"]


def test_unproductive_start_is_empty():
    g = gr.parse_cfg("S -> a S", AB)
    assert gr.cfg_empty(g)
    assert gr.cfg_enumerate(g, 5) == []


def test_substitute_marker():
    marked = AB.with_markers("$")
    template = gr.conjugator_language(fa.from_words(marked, ["$"]), fa.word_star(marked, "a"))
    g = gr.cfg_substitute(template, "$", fa.from_words(AB, ["b"]))
    assert gr.cfg_enumerate(g, 5) == ["b", "Aba", "AAbaa"]


def test_substitute_absent_marker_is_noop(caplog):
    g = anbn()
    assert gr.cfg_enumerate(gr.cfg_substitute(g, "$", fa.epsilon(AB)), 6) == gr.cfg_enumerate(g, 6)


def test_conjugator_language():
    b = fa.from_words(AB, ["b"])
    assert gr.cfg_enumerate(gr.conjugator_language(b, fa.from_words(AB, ["a"])), 5) == ["Aba"]
    star = gr.cfg_enumerate(gr.conjugator_language(b, fa.word_star(AB, "a")), 7)
    assert star == ["b", "Aba", "AAbaa", "AAAbaaa"]
    assert gr.cfg_empty(gr.conjugator_language(b, fa.empty(AB)))


def test_pumped_language():
    b = fa.from_words(AB, ["b"])
    assert gr.cfg_member(gr.pumped_language("a", "A", b, "equal"), "aabAA")
    left = gr.pumped_language("a", "b", fa.epsilon(AB), "left<=")
    assert gr.cfg_member(left, "bb")
    assert not gr.cfg_member(left, "aab")
    right = gr.pumped_language("a", "b", fa.epsilon(AB), "right<=")
    assert gr.cfg_member(right, "aab") and not gr.cfg_member(right, "abb")
    l = fa.word_star(AB, "ab")
    for mode in ("equal", "left<=", "right<="):
        assert gr.cfg_enumerate(gr.pumped_language("", "", l, mode), 6) == fa.enumerate_words(l, 6)
    with pytest.raises(ValueError):
        gr.pumped_language("a", "b", l, "sideways")


def test_union_and_letter_inverse():
    g = gr.cfg_union(anbn(), gr.from_nfa(fa.from_words(AB, ["B"])))
    assert gr.cfg_enumerate(g, 2) == ["", "B", "ab"]
    inv = gr.cfg_letter_inverse(anbn())
    assert gr.cfg_enumerate(inv, 4) == ["", "BA", "BBAA"]


def test_cnf_trace_and_nullable():
    cnf = gr.to_cnf(anbn())
    assert cnf.start_nullable
    assert cnf.trace


def test_intersection_agrees_with_membership():
    rng = random.Random(21)
    for _ in range(8):
        g = gr.from_nfa(random_nfa(rng))
        g = gr.cfg_union(g, anbn())
        r = random_nfa(rng)
        both = gr.cfg_intersect_regular(g, r)
        for w in all_words(4):
            assert gr.cfg_member(both, w) == (gr.cfg_member(g, w) and r.accepts(w))


def test_enumerate_agrees_with_cyk():
    for g in (anbn(), gr.parse_cfg("S -> a S A | S S | b", AB)):
        assert gr.cfg_enumerate(g, 5) == [w for w in all_words(5) if gr.cfg_member(g, w)]


def test_text_round_trip():
    g = gr.conjugator_language(fa.from_words(AB, ["b"]), fa.word_star(AB, "a"))
    back = gr.parse_cfg(gr.to_text(g))
    assert gr.cfg_enumerate(back, 6) == gr.cfg_enumerate(g, 6)
    empty = gr.parse_cfg(gr.to_text(gr.empty_cfg(AB)))
    assert gr.cfg_empty(empty)
    with pytest.raises(MalformedInputError):
        gr.parse_cfg("S => a")
