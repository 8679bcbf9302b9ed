"""Signed alphabets and free-group words.

A word is a plain ``str``: a lowercase character is a generator, the same
character in uppercase is its inverse, and ``""`` is the empty word.  The
text form ``"1"`` also denotes the empty word on input.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .errors import MalformedInputError, PreconditionError

EMPTY_TEXT = "1"


def inverse_letter(x: str) -> str:
    # markers such as "$" are fixed by swapcase, which is what we want
    return x.swapcase()


@dataclass(frozen=True)
class Alphabet:
    """An ordered set of generators, optionally extended by unsigned marker symbols.

    ``letters`` is the signed alphabet in declaration order
    (``a, A, b, B, ...``) followed by the markers.
    """

    generators: tuple[str, ...]
    markers: tuple[str, ...] = ()

    def __post_init__(self):
        gens = tuple(self.generators)
        object.__setattr__(self, "generators", gens)
        object.__setattr__(self, "markers", tuple(self.markers))
        if not gens and not self.markers:
            raise MalformedInputError("alphabet must be nonempty")
        if len(set(gens)) != len(gens):
            raise MalformedInputError(f"repeated generator in {gens}")
        for g in gens:
            if len(g) != 1 or not g.isalpha() or not g.islower():
                raise MalformedInputError(f"generator {g!r} must be a single lowercase letter")
        for m in self.markers:
            if len(m) != 1 or m.isalpha() or m == EMPTY_TEXT:
                raise MalformedInputError(f"marker {m!r} must be a single non-letter symbol")
        object.__setattr__(self, "_letter_set", frozenset(self.letters))

    @classmethod
    def of(cls, letters: str | Iterable[str]) -> "Alphabet":
        if isinstance(letters, Alphabet):
            return letters
        if isinstance(letters, str):
            letters = [s for s in letters.replace(",", " ").split()] if ("," in letters or " " in letters) else list(letters)
        return cls(tuple(letters))

    @property
    def letters(self) -> tuple[str, ...]:
        out = []
        for g in self.generators:
            out += [g, g.upper()]
        return tuple(out) + self.markers

    @property
    def signed(self) -> tuple[str, ...]:
        """The signed alphabet without markers."""
        return self.letters[: 2 * len(self.generators)]

    def __contains__(self, letter: str) -> bool:
        return letter in self._letter_set

    def order(self) -> dict[str, int]:
        return {x: i for i, x in enumerate(self.letters)}

    def shortlex_key(self):
        rank = self.order()
        return lambda w: (len(w), [rank[x] for x in w])

    def with_markers(self, *markers: str) -> "Alphabet":
        extra = tuple(m for m in markers if m not in self.markers)
        return Alphabet(self.generators, self.markers + extra)

    def without_markers(self) -> "Alphabet":
        return Alphabet(self.generators)

    def union(self, other: "Alphabet") -> "Alphabet":
        gens = self.generators + tuple(g for g in other.generators if g not in self.generators)
        marks = self.markers + tuple(m for m in other.markers if m not in self.markers)
        return Alphabet(gens, marks)

    def check(self, w: str) -> str:
        for x in w:
            if x not in self:
                raise MalformedInputError(f"letter {x!r} of {w!r} is not in alphabet {self.generators}")
        return w

    def __str__(self) -> str:
        return ",".join(self.generators + self.markers)


def parse_word(text: str, alphabet: Alphabet | None = None) -> str:
    text = text.strip()
    if text in ("", EMPTY_TEXT, "ε"):
        return ""
    for x in text:
        if not x.isalpha() and (alphabet is None or x not in alphabet.markers):
            raise MalformedInputError(f"bad letter {x!r} in word {text!r}")
    if alphabet is not None:
        alphabet.check(text)
    return text


def format_word(w: str) -> str:
    return w if w else EMPTY_TEXT


def invert(w: str) -> str:
    return w[::-1].swapcase()


def free_reduce(w: str, alphabet: Alphabet | None = None) -> str:
    """Return the freely reduced word equal to ``w`` in the free group."""
    if alphabet is not None:
        alphabet.check(w)
    stack: list[str] = []
    for x in w:
        if stack and stack[-1] == x.swapcase() and x.isalpha():
            stack.pop()
        else:
            stack.append(x)
    return "".join(stack)


def is_reduced(w: str) -> bool:
    return all(not (x.isalpha() and y == x.swapcase()) for x, y in zip(w, w[1:]))


def is_cyclically_reduced(w: str) -> bool:
    if not is_reduced(w):
        raise PreconditionError(f"{w!r} is not freely reduced")
    return not w or w[0] != w[-1].swapcase()


def cyclic_reduce(w: str) -> tuple[str, str]:
    """Split ``w`` as ``conj^-1 . core . conj`` with ``core`` cyclically reduced.

    Returns ``(conj, core)``; ``conj`` is a suffix of the reduced form of ``w``.
    """
    r = free_reduce(w)
    i, j = 0, len(r)
    while j - i >= 2 and r[i] == r[j - 1].swapcase():
        i += 1
        j -= 1
    return r[j:], r[i:j]


def conjugate_oracle(x: str, y: str) -> bool:
    cx = cyclic_reduce(x)[1]
    cy = cyclic_reduce(y)[1]
    return len(cx) == len(cy) and cy in cx + cx


def words_up_to(letters: Iterable[str], n: int):
    """All words over ``letters`` of length at most ``n`` in shortlex order."""
    letters = tuple(letters)
    layer = [""]
    yield ""
    for _ in range(n):
        layer = [w + x for w in layer for x in letters]
        yield from layer
