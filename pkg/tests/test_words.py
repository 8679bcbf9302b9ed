import pytest
from hypothesis import given
from hypothesis import strategies as st

from geoconj.errors import MalformedInputError, PreconditionError
from geoconj.words import (
    Alphabet,
    conjugate_oracle,
    cyclic_reduce,
    format_word,
    free_reduce,
    invert,
    is_cyclically_reduced,
    is_reduced,
    parse_word,
)

AB = Alphabet(("a", "b"))
word = st.text(alphabet="aAbB", max_size=12)


@pytest.mark.parametrize(
    "w, expected",
    [("aA", ""), ("abBa", "aa"), ("bAaBb", "b"), ("", ""), ("abAB", "abAB")],
)
def test_free_reduce_examples(w, expected):
    assert free_reduce(w) == expected


def test_free_reduce_rejects_foreign_letter():
    with pytest.raises(MalformedInputError):
        free_reduce("ac", AB)


def test_invert():
    assert invert("ab") == "BA"
    assert invert("") == ""
    assert invert("AA") == "aa"


def test_cyclic_reduce_examples():
    assert cyclic_reduce("abA") == ("A", "b")
    assert cyclic_reduce("baBa") == ("", "baBa")
    assert cyclic_reduce("abbA") == ("A", "bb")


def test_is_cyclically_reduced():
    assert is_cyclically_reduced("ab")
    assert not is_cyclically_reduced("abA")
    assert is_cyclically_reduced("")
    with pytest.raises(PreconditionError):
        is_cyclically_reduced("aAb")


def test_conjugate_oracle_examples():
    assert conjugate_oracle("abA", "b")
    assert conjugate_oracle("ab", "ba")
    # rotations of aab are aab, aba, baa
    assert not conjugate_oracle("aab", "abb")


def test_parse_and_format():
    assert parse_word("1") == ""
    assert parse_word("abA", AB) == "abA"
    assert format_word("") == "1"
    with pytest.raises(MalformedInputError):
        parse_word("a-b", AB)


def test_alphabet_letters():
    assert AB.letters == ("a", "A", "b", "B")
    assert "B" in AB and "c" not in AB
    assert AB.with_markers("$").letters[-1] == "$"


@given(word)
def test_reduce_idempotent(w):
    r = free_reduce(w)
    assert free_reduce(r) == r
    assert is_reduced(r)
    assert len(r) <= len(w)


@given(word, word)
def test_reduce_is_homomorphism(u, v):
    assert free_reduce(u + v) == free_reduce(free_reduce(u) + free_reduce(v))


@given(word)
def test_inverse_cancels(w):
    assert free_reduce(w + invert(w)) == ""


@given(word)
def test_cyclic_reduce_decomposition(w):
    conj, core = cyclic_reduce(w)
    assert free_reduce(invert(conj) + core + conj) == free_reduce(w)
    assert is_cyclically_reduced(core)
    assert free_reduce(w).endswith(conj)


@given(word, word, word)
def test_conjugacy_invariant_under_conjugation(x, y, u):
    assert conjugate_oracle(x, y) == conjugate_oracle(free_reduce(invert(u) + x + u), y)


@given(st.text(alphabet="aAbB", max_size=6), st.text(alphabet="aAbB", max_size=6))
def test_conjugacy_symmetric(x, y):
    assert conjugate_oracle(x, y) == conjugate_oracle(y, x)
    assert conjugate_oracle(x, x)
