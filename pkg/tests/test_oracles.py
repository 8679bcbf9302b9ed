from conftest import AB
from geoconj import automata as fa
from geoconj import oracles as orc
from geoconj import vfree as vf
from geoconj.words import Alphabet


def test_free_ball_counts():
    assert orc.free_ball(AB, 0) == [""]
    assert len(orc.free_ball(AB, 1)) == 5
    assert len(orc.free_ball(AB, 3)) == 53
    for rank in (1, 2, 3):
        alphabet = Alphabet(tuple("abc"[:rank]))
        for n in range(5):
            closed = 1 + sum(2 * rank * (2 * rank - 1) ** (k - 1) for k in range(1, n + 1))
            assert len(orc.free_ball(alphabet, n)) == closed


def test_alpha_oracle():
    b = fa.from_words(AB, ["b"])
    assert orc.alpha_oracle(b, fa.from_words(AB, ["a"]), 1, 1) == {"Aba"}
    assert orc.alpha_oracle(b, fa.word_star(AB, "b"), 3, 3) == {"b"}
    assert orc.alpha_oracle(fa.empty(AB), fa.universal(AB), 3, 3) == set()
    small = orc.alpha_oracle(b, fa.universal(AB), 2, 1)
    assert small <= orc.alpha_oracle(b, fa.universal(AB), 3, 1)


def test_dgcp_witness_search():
    univ = fa.universal(AB)
    b = fa.from_words(AB, ["b"])
    assert orc.dgcp_witness_search(univ, b, fa.from_words(AB, ["abA"]), 3) == ("a", "b", "abA")
    assert orc.dgcp_witness_search(fa.epsilon(AB), b, fa.from_words(AB, ["a"]), 3) is None
    assert orc.dgcp_witness_search(fa.epsilon(AB), b, b, 1) == ("", "b", "b")


def test_reduced_member_handles_cancellation():
    l = fa.concat(fa.word_star(AB, "a"), fa.word_star(AB, "A"))
    assert orc.reduced_member(l, "aaA")
    assert not orc.reduced_member(l, "b")


def test_vf_ball():
    s = vf.infinite_dihedral()
    assert orc.vf_ball(s, 0) == {s.identity: {""}}
    one = orc.vf_ball(s, 1)
    assert set(one) == {s.evaluate(w) for w in ["", "a", "A", "b"]}
    assert one[s.evaluate("b")] == {"b", "B"}
    two = orc.vf_ball(s, 2)
    assert len(two) == 8
    assert two[s.evaluate("ab")] == {"ab", "aB", "bA", "BA"}
