"""Virtually free groups ``G = F b_1 ∪ ... ∪ F b_m`` and their geodesic languages.

Elements are kept as normal forms ``v b_i`` with ``v`` a reduced word over the
free part.  Coset representatives other than the identity are letters of the
extended alphabet ``B̃`` (lowercase, with uppercase inverses), so a word such
as ``"bA"`` means ``b a^-1``.
"""

from __future__ import annotations

import itertools
import logging
from collections import defaultdict, deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, NamedTuple

from . import automata as fa
from .automata import EPS, Nfa
from .errors import MalformedInputError, PreconditionError, ResourceError, ValidationError
from .free_subsets import benois_saturate
from .words import Alphabet, free_reduce, invert, is_reduced, parse_word

log = logging.getLogger(__name__)

DEFAULT_BUDGET = 10**6


class NormalForm(NamedTuple):
    fpart: str
    coset: int


@dataclass(frozen=True)
class VfConfig:
    ftc: int = 1
    cone_radius: int = 2
    lam: Fraction = Fraction(1)
    eps: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "lam", Fraction(self.lam))
        object.__setattr__(self, "eps", Fraction(self.eps))
        if self.ftc < 0:
            raise MalformedInputError("fellow-traveler constant must be >= 0")
        if self.cone_radius < 1:
            raise MalformedInputError("cone radius must be >= 1")
        if self.lam < 1 or self.eps < 0:
            raise MalformedInputError("need lambda >= 1 and epsilon >= 0")


class VfStructure:
    """Free part, coset letters, twists ``φ_i`` and the table ``b_i b_j = u_ij b_k``."""

    def __init__(
        self,
        free: Alphabet,
        cosets: Iterable[str],
        phi: dict[int, dict[str, str]] | None = None,
        mul: dict[tuple[int, int], tuple[str, int]] | None = None,
        check_radius: int = 4,
    ):
        self.free = free
        self.cosets = tuple(cosets)
        self.m = len(self.cosets)
        if self.m < 1:
            raise MalformedInputError("at least the identity coset is required")
        if len(set(self.cosets)) != self.m:
            raise MalformedInputError("coset names must be distinct")
        for c in self.cosets[1:]:
            if len(c) != 1 or not c.islower() or c in free.generators:
                raise MalformedInputError(f"coset letter {c!r} must be a fresh lowercase letter")
        phi = phi or {}
        self.phi = []
        for i in range(self.m):
            images = dict(phi.get(i, {}))
            if i == 0 and any(images.get(a, a) != a for a in free.generators):
                raise ValidationError("the identity coset must have the identity twist")
            table = {}
            for a in free.generators:
                w = images.pop(a, a)
                free.check(w)
                if not is_reduced(w):
                    raise MalformedInputError(f"twist image {w!r} is not reduced")
                table[a] = w
                table[a.upper()] = invert(w)
            if images:
                raise MalformedInputError(f"twist mentions unknown generators {sorted(images)}")
            self.phi.append(table)
        mul = dict(mul or {})
        self.mul = {}
        for i in range(self.m):
            for j in range(self.m):
                if i == 0 or j == 0:
                    entry = mul.pop((i, j), ("", j if i == 0 else i))
                    if entry != ("", j if i == 0 else i):
                        raise ValidationError(f"identity row/column violated at ({i}, {j})")
                elif (i, j) in mul:
                    entry = mul.pop((i, j))
                else:
                    raise MalformedInputError(f"missing product {self.cosets[i]} {self.cosets[j]}")
                w, k = entry
                free.check(w)
                if not 0 <= k < self.m:
                    raise MalformedInputError(f"coset index {k} out of range")
                self.mul[i, j] = (free_reduce(w), k)
        if mul:
            raise MalformedInputError(f"unknown table entries {sorted(mul)}")
        self.inverse_coset = []
        for r in range(self.m):
            js = [j for j in range(self.m) if self.mul[r, j][1] == 0]
            if not js:
                raise ValidationError(f"coset {self.cosets[r]} has no inverse in the table")
            j = js[0]
            # b_r b_j = u  =>  b_r^-1 = b_j u^-1 = φ_j(u^-1) b_j
            self.inverse_coset.append(NormalForm(self.twist(j, invert(self.mul[r, j][0])), j))
        self.validate(check_radius)

    # -- alphabet ------------------------------------------------------------

    @cached_property
    def alphabet(self) -> Alphabet:
        return Alphabet(self.free.generators + self.cosets[1:])

    @property
    def letters(self) -> tuple[str, ...]:
        return self.alphabet.signed

    @property
    def identity(self) -> NormalForm:
        return NormalForm("", 0)

    def letter_element(self, x: str) -> NormalForm:
        if x.lower() in self.free.generators:
            return NormalForm(x, 0)
        if x in self.cosets[1:]:
            return NormalForm("", self.cosets.index(x))
        if x.lower() in self.cosets[1:]:
            return self.inverse_coset[self.cosets.index(x.lower())]
        raise MalformedInputError(f"letter {x!r} is not in {self.alphabet}")

    # -- arithmetic ----------------------------------------------------------

    def twist(self, i: int, w: str) -> str:
        table = self.phi[i]
        return free_reduce("".join(table[x] for x in w))

    def multiply(self, g: NormalForm, h: NormalForm) -> NormalForm:
        """``v b_j · w b_k = v φ_j(w) u_jk b_{k_jk}``."""
        u, k = self.mul[g.coset, h.coset]
        return NormalForm(free_reduce(g.fpart + self.twist(g.coset, h.fpart) + u), k)

    def inverse(self, g: NormalForm) -> NormalForm:
        return self.multiply(self.inverse_coset[g.coset], NormalForm(invert(g.fpart), 0))

    def evaluate(self, w: str) -> NormalForm:
        g = self.identity
        for x in w:
            g = self.multiply(g, self.letter_element(x))
        return g

    normal_form = evaluate

    def nf_word(self, g: NormalForm) -> str:
        return g.fpart + (self.cosets[g.coset] if g.coset else "")

    def format(self, g: NormalForm) -> str:
        return f"{g.fpart or '1'} @ {self.cosets[g.coset]}"

    def letter_effect(self, j: int, x: str) -> tuple[str, int]:
        """Free word emitted and coset reached when ``b_j`` is multiplied by letter ``x``."""
        g = self.multiply(NormalForm("", j), self.letter_element(x))
        return g.fpart, g.coset

    # -- validation ----------------------------------------------------------

    def validate(self, radius: int = 4):
        elems = [self.letter_element(x) for x in self.letters] + [self.identity]
        for x, y, z in itertools.product(elems, repeat=3):
            left = self.multiply(self.multiply(x, y), z)
            right = self.multiply(x, self.multiply(y, z))
            if left != right:
                raise ValidationError(f"associativity fails: ({x} {y}) {z} = {left} but {x} ({y} {z}) = {right}")
        for g in elems:
            if self.multiply(g, self.inverse(g)) != self.identity:
                raise ValidationError(f"inverse data inconsistent for {g}")
        for i in range(1, self.m):
            images = {}
            layer = [""]
            for _ in range(radius + 1):
                for w in layer:
                    images.setdefault(self.twist(i, w), w)
                layer = [w + x for w in layer for x in self.free.signed if not w or w[-1] != x.swapcase()]
            for a in self.free.generators:
                if a not in images:
                    raise ValidationError(
                        f"twist of {self.cosets[i]} has no preimage of {a} within radius {radius}"
                    )

    @cached_property
    def cayley(self) -> "Cayley":
        return Cayley(self)

    def __repr__(self):
        return f"VfStructure(free={self.free}, cosets={','.join(self.cosets)})"


# -- Cayley graph ------------------------------------------------------------


class Cayley:
    """Lazily grown breadth-first ball of the Cayley graph, memoized.

    ``gens`` maps each letter (generators and their uppercase inverses) to a
    group element; by default the letters of ``B̃``.  Representatives are
    shortlex least with respect to the letter order.
    """

    def __init__(self, s: VfStructure, gens: dict[str, NormalForm] | None = None, budget: int = DEFAULT_BUDGET):
        self.s = s
        if gens is None:
            self.alphabet = s.alphabet
            self.gens = {x: s.letter_element(x) for x in s.letters}
        else:
            self.alphabet = Alphabet(tuple(sorted(x for x in gens if x.islower())))
            missing = [x for x in self.alphabet.signed if x not in gens]
            if missing:
                raise MalformedInputError(f"generator inverses missing: {missing}")
            self.gens = dict(gens)
        self.letters = self.alphabet.signed
        self.budget = budget
        self.dist = {s.identity: 0}
        self.rep = {s.identity: ""}
        self.layer = [s.identity]
        self.radius = 0

    def grow(self, radius: int):
        while self.radius < radius and self.layer:
            nxt = []
            for g in self.layer:
                w = self.rep[g]
                for x in self.letters:
                    h = self.s.multiply(g, self.gens[x])
                    if h not in self.dist:
                        self.dist[h] = self.radius + 1
                        self.rep[h] = w + x
                        nxt.append(h)
            self.layer = nxt
            self.radius += 1
            if len(self.dist) > self.budget:
                raise ResourceError(f"Cayley ball of radius {self.radius} exceeds budget {self.budget}")

    def element(self, w: str) -> NormalForm:
        g = self.s.identity
        for x in w:
            try:
                g = self.s.multiply(g, self.gens[x])
            except KeyError:
                raise MalformedInputError(f"letter {x!r} is not a generator") from None
        return g

    def length(self, g: NormalForm) -> int:
        while g not in self.dist:
            if not self.layer:
                raise ResourceError("element not reachable from the generators")
            self.grow(self.radius + 1)
        return self.dist[g]

    def distance(self, g: NormalForm, h: NormalForm) -> int:
        return self.length(self.s.multiply(self.s.inverse(g), h))

    def representative(self, g: NormalForm) -> str:
        self.length(g)
        return self.rep[g]

    def ball(self, radius: int) -> list[NormalForm]:
        self.grow(radius)
        return [g for g, d in self.dist.items() if d <= radius]

    def geodesic_words(self, radius: int) -> list[str]:
        """All geodesic words of length at most ``radius`` (shortlex order)."""
        self.grow(radius)
        out = []
        layer = [("", self.s.identity)]
        for d in range(radius + 1):
            out += [w for w, _ in layer]
            if d == radius:
                break
            nxt = []
            for w, g in layer:
                for x in self.letters:
                    h = self.s.multiply(g, self.gens[x])
                    if self.dist.get(h) == d + 1:
                        nxt.append((w + x, h))
            layer = nxt
        return out

    def is_geodesic(self, w: str) -> bool:
        return self.length(self.element(w)) == len(w)


def generating_set(s: VfStructure, words: dict[str, str]) -> Cayley:
    """Cayley graph for new generators given as words over ``B̃`` (``{"c": "ab", ...}``)."""
    gens = {}
    for y, w in words.items():
        if len(y) != 1 or not y.islower():
            raise MalformedInputError(f"generator name {y!r} must be one lowercase letter")
        g = s.evaluate(w)
        gens[y] = g
        gens[y.upper()] = s.inverse(g)
    return Cayley(s, gens)


# -- word problem and geodesics ----------------------------------------------


def vf_equal(s: VfStructure, w1: str, w2: str) -> bool:
    return s.evaluate(w1) == s.evaluate(w2)


def geodesic_length(s: VfStructure, w: str) -> int:
    return s.cayley.length(s.evaluate(w))


def geodesic_rep(s: VfStructure, w: str) -> str:
    return s.cayley.representative(s.evaluate(w))


def constant_C(s: VfStructure) -> int:
    """``max(M, N, 1)``: longest twist image and longest free part produced by a coset letter."""
    m_part = max((len(w) for table in s.phi for w in table.values()), default=0)
    n_part = 0
    for j in range(s.m):
        for x in s.cosets[1:]:
            for letter in (x, x.upper()):
                n_part = max(n_part, len(s.letter_effect(j, letter)[0]))
    return max(m_part, n_part, 1)


def nf_length(g: NormalForm) -> int:
    """Length of ``v b_i`` as a word, the identity coset contributing nothing."""
    return len(g.fpart) + (1 if g.coset else 0)


# -- normal-form languages ---------------------------------------------------


def _emit(edges: set, fresh: list, src: int, word: str, dst: int):
    """Add a path ``src -word-> dst`` through new states."""
    if not word:
        edges.add((src, EPS, dst))
        return
    cur = src
    for x in word[:-1]:
        nxt = fresh[0]
        fresh[0] += 1
        edges.add((cur, x, nxt))
        cur = nxt
    edges.add((cur, word[-1], dst))


def split_cosets(s: VfStructure, k: Nfa) -> list[Nfa]:
    """Automata ``L_i`` over the free alphabet with ``K = ⋃ L_i b_i`` in the group."""
    k = fa.remove_epsilon(fa.trim(k))
    for _, x, _ in k.edges:
        s.letter_element(x)
    index = {}
    queue = deque()
    for q in sorted(k.initial):
        index[q, 0] = len(index)
        queue.append((q, 0))
    moves = []
    while queue:
        q, j = queue.popleft()
        for x, q2 in k.out.get(q, ()):
            word, j2 = s.letter_effect(j, x)
            if (q2, j2) not in index:
                index[q2, j2] = len(index)
                queue.append((q2, j2))
            moves.append((index[q, j], word, index[q2, j2]))
    fresh = [len(index)]
    edges = set()
    for src, word, dst in moves:
        _emit(edges, fresh, src, word, dst)
    initial = {index[q, 0] for q in k.initial}
    out = []
    for i in range(s.m):
        final = {v for (q, j), v in index.items() if j == i and q in k.final}
        out.append(fa.minimize(fa.build(s.free, fresh[0], initial, final, edges)))
    return out


def normal_form_language(s: VfStructure, k: Nfa) -> Nfa:
    """Regular language of normal-form words ``v b_i`` representing exactly the elements of K."""
    parts = []
    for i, li in enumerate(split_cosets(s, k)):
        reduced = fa.with_alphabet(benois_saturate(li), s.alphabet)
        if i:
            reduced = fa.concat(reduced, fa.from_words(s.alphabet, [s.cosets[i]]))
        parts.append(reduced)
    return fa.minimize(fa.union_all(s.alphabet, parts))


# -- geodesic acceptor ---------------------------------------------------------


def _cone(cay: Cayley, g: NormalForm, r: int) -> frozenset:
    """Extensions of length at most ``r`` that stay geodesic from ``g``."""
    base = cay.length(g)
    out = [""]
    layer = [("", g)]
    for d in range(1, r + 1):
        nxt = []
        for z, h in layer:
            for x in cay.letters:
                h2 = cay.s.multiply(h, cay.gens[x])
                if cay.length(h2) == base + d:
                    nxt.append((z + x, h2))
        out += [z for z, _ in nxt]
        layer = nxt
    return frozenset(out)


def geodesic_acceptor(s: VfStructure, cfg: VfConfig, cay: Cayley | None = None, max_states: int = 10_000) -> Nfa:
    """DFA for all geodesic words, states being cone fingerprints of radius ``cfg.cone_radius``.

    The fingerprint is assumed to determine the cone type; the result is
    checked against breadth-first geodesics up to radius ``r + 2`` and a
    ``ValidationError`` is raised when the assumption fails.
    """
    cay = cay or s.cayley
    r = cfg.cone_radius
    ident = s.identity
    fp0 = _cone(cay, ident, r)
    states = {fp0: 0}
    reps = [ident]
    edges = set()
    queue = deque([fp0])
    while queue:
        fp = queue.popleft()
        g = reps[states[fp]]
        for x in cay.letters:
            if x not in fp:
                continue
            h = s.multiply(g, cay.gens[x])
            fp2 = _cone(cay, h, r)
            if fp2 not in states:
                states[fp2] = len(states)
                reps.append(h)
                queue.append(fp2)
                if len(states) > max_states:
                    raise ValidationError(f"more than {max_states} cone fingerprints; increase the cone radius")
            edges.add((states[fp], x, states[fp2]))
    n = len(states)
    dfa = fa.build(cay.alphabet, n, {0}, set(range(n)), edges)
    test_radius = r + 2
    expected = cay.geodesic_words(test_radius)
    got = fa.enumerate_words(dfa, test_radius)
    if got != expected:
        extra = sorted(set(got) - set(expected), key=cay.alphabet.shortlex_key())[:3]
        missing = sorted(set(expected) - set(got), key=cay.alphabet.shortlex_key())[:3]
        raise ValidationError(
            f"cone radius {r} does not determine cone types (accepted non-geodesics {extra}, "
            f"missed geodesics {missing}); use a larger cone radius"
        )
    log.debug("geodesic acceptor: %d cone types at radius %d", n, r)
    return dfa


# -- transducer ----------------------------------------------------------------


@dataclass
class GeoTransducer:
    """States are group elements within distance K of the identity, named by their representatives."""

    alphabet: Alphabet
    states: list[str]
    edges: list[tuple[int, str, str, int]] = field(default_factory=list)
    k: int = 0

    @property
    def initial(self) -> int:
        return 0

    def to_text(self) -> str:
        lines = [f"alphabet: {self.alphabet}", f"ftc: {self.k}", f"states: {len(self.states)}"]
        lines += [f"state: {i} {w or '1'}" for i, w in enumerate(self.states)]
        lines += [f"edge: {p} {c} {u or '1'} {q}" for p, c, u, q in self.edges]
        return "\n".join(lines) + "\n"


def build_transducer(s: VfStructure, cfg: VfConfig, cay: Cayley | None = None) -> GeoTransducer:
    cay = cay or s.cayley
    k = cfg.ftc
    order = cay.alphabet.shortlex_key()
    ball = sorted(cay.ball(k), key=lambda g: order(cay.rep[g]))
    index = {g: i for i, g in enumerate(ball)}
    outputs = [(u, cay.element(u)) for u in cay.geodesic_words(2 * k + 1)]
    t = GeoTransducer(cay.alphabet, [cay.rep[g] for g in ball], k=k)
    for g in ball:
        for c in cay.letters:
            gc = s.multiply(g, cay.gens[c])
            for u, ue in outputs:
                target = s.multiply(s.inverse(ue), gc)
                if target in index:
                    t.edges.append((index[g], c, u, index[target]))
    return t


def apply_transducer(t: GeoTransducer, l: Nfa) -> Nfa:
    """Image of L: product of L with the transducer, edges spelled out as their outputs."""
    l = fa.remove_epsilon(fa.trim(fa.with_alphabet(l, t.alphabet)))
    by_letter = defaultdict(list)
    for p, c, u, q in t.edges:
        by_letter[p, c].append((u, q))
    index = {}
    queue = deque()
    for q in sorted(l.initial):
        index[q, 0] = len(index)
        queue.append((q, 0))
    moves = []
    while queue:
        q, p = queue.popleft()
        for c, q2 in l.out.get(q, ()):
            for u, p2 in by_letter.get((p, c), ()):
                if (q2, p2) not in index:
                    index[q2, p2] = len(index)
                    queue.append((q2, p2))
                moves.append((index[q, p], u, index[q2, p2]))
    fresh = [len(index)]
    edges = set()
    for src, u, dst in moves:
        _emit(edges, fresh, src, u, dst)
    final = {v for (q, p), v in index.items() if p == 0 and q in l.final}
    return fa.trim(fa.build(t.alphabet, fresh[0], {index[q, 0] for q in l.initial}, final, edges))


def geo_of_rational(s: VfStructure, k: Nfa, cfg: VfConfig) -> Nfa:
    """Minimal DFA of all geodesic words representing elements of K."""
    geo = geodesic_acceptor(s, cfg)
    image = apply_transducer(build_transducer(s, cfg), normal_form_language(s, k))
    return fa.minimize(fa.intersect(geo, image))


def change_generators(
    s: VfStructure,
    nfa: Nfa,
    images: dict[str, str],
    target: Cayley,
    cfg: VfConfig | None = None,
) -> Nfa:
    """Replace each letter by a geodesic word over the new generators.

    ``images`` gives the words of the positive letters; inverses are implied.
    With ``cfg`` the result is further mapped onto the geodesics of ``target``.
    """
    full = {}
    for x, w in images.items():
        target.alphabet.check(w)
        if not target.is_geodesic(w):
            raise PreconditionError(f"image {w!r} of {x!r} is not geodesic")
        if target.element(w) != s.letter_element(x):
            raise PreconditionError(f"image {w!r} does not represent {x!r}")
        full[x] = w
        full[x.upper()] = invert(w)
    used = {x for _, x, _ in nfa.edges if x != EPS}
    missing = sorted(used - set(full))
    if missing:
        raise MalformedInputError(f"no image for letters {missing}")
    fresh = [nfa.n]
    edges = set()
    for p, x, q in nfa.edges:
        _emit(edges, fresh, p, "" if x == EPS else full[x], q)
    out = fa.trim(fa.build(target.alphabet, fresh[0], nfa.initial, nfa.final, edges))
    if cfg is None:
        return out
    geo = geodesic_acceptor(s, cfg, target)
    return fa.minimize(fa.intersect(geo, apply_transducer(build_transducer(s, cfg, target), out)))


def max_image_length(images: dict[str, str]) -> int:
    return max((len(w) for w in images.values()), default=0)


# -- metric checks ---------------------------------------------------------------


def quasigeodesic_check(s: VfStructure, w: str, lam, eps, cay: Cayley | None = None) -> bool:
    """Whether ``j - i <= lam * d(w[:i], w[:j]) + eps`` for all prefixes."""
    cay = cay or s.cayley
    lam, eps = Fraction(lam), Fraction(eps)
    if lam < 1 or eps < 0:
        raise PreconditionError("need lambda >= 1 and epsilon >= 0")
    prefixes = [s.identity]
    for x in w:
        prefixes.append(s.multiply(prefixes[-1], cay.gens[x]))
    for i in range(len(prefixes)):
        for j in range(i + 1, len(prefixes)):
            if j - i > lam * cay.distance(prefixes[i], prefixes[j]) + eps:
                return False
    return True


@dataclass
class FellowTravelerReport:
    ok: bool
    pairs: int
    violations: list[tuple[str, str]]
    minimal_k: int

    def __str__(self):
        status = "ok" if self.ok else f"{len(self.violations)} violations"
        return f"{status}; {self.pairs} pairs checked; smallest sufficient K = {self.minimal_k}"


def _tracks(cay: Cayley, v: str, u: str, k: int) -> bool:
    """Monotone ``h`` with ``h(0)=0``, ``h(|v|)=|u|``, steps ``<= 2k+1`` and distances ``<= k``."""
    pv = [cay.s.identity]
    for x in v:
        pv.append(cay.s.multiply(pv[-1], cay.gens[x]))
    pu = [cay.s.identity]
    for x in u:
        pu.append(cay.s.multiply(pu[-1], cay.gens[x]))
    step = 2 * k + 1
    cur = {0}
    for i in range(1, len(pv)):
        nxt = set()
        for j in range(len(pu)):
            if cay.distance(pv[i], pu[j]) > k:
                continue
            if any(h <= j <= h + step for h in cur):
                nxt.add(j)
        cur = nxt
        if not cur:
            return False
    return len(pu) - 1 in cur


def fellow_traveler_validate(
    s: VfStructure,
    lam,
    eps,
    k: int,
    radius: int,
    words: Iterable[str] | None = None,
    cay: Cayley | None = None,
) -> FellowTravelerReport:
    """Check that every quasigeodesic of length ``<= radius`` K-fellow-travels each geodesic for the same element."""
    cay = cay or s.cayley
    if words is None:
        words = (
            "".join(p)
            for n in range(radius + 1)
            for p in itertools.product(cay.letters, repeat=n)
        )
        words = [w for w in words if quasigeodesic_check(s, w, lam, eps, cay)]
    by_element = defaultdict(list)
    for u in cay.geodesic_words(radius):
        by_element[cay.element(u)].append(u)
    violations = []
    pairs = 0
    minimal = 0
    for v in words:
        for u in by_element.get(cay.element(v), ()):
            pairs += 1
            need = 0
            while not _tracks(cay, v, u, need):
                need += 1
            minimal = max(minimal, need)
            if need > k:
                violations.append((v, u))
    return FellowTravelerReport(not violations, pairs, violations, minimal)


def gromov_product(s: VfStructure, g: str, h: str, p: str = "", cay: Cayley | None = None) -> Fraction:
    cay = cay or s.cayley
    ge, he, pe = cay.element(g), cay.element(h), cay.element(p)
    return Fraction(cay.distance(pe, ge) + cay.distance(pe, he) - cay.distance(ge, he), 2)


# -- text format -----------------------------------------------------------------


def parse_structure(text: str) -> tuple[VfStructure, VfConfig]:
    """Parse the line format ``free:``, ``cosets:``, ``phi t: a -> b``, ``mul t t = 1 @ e`` plus config keys."""
    free = None
    cosets = None
    phi_lines, mul_lines = [], []
    conf = {}
    keys = {"ftc": "ftc", "cone_radius": "cone_radius", "lambda": "lam", "epsilon": "eps"}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            if line.startswith("free:"):
                gens = tuple(x.strip() for x in line[5:].split(",") if x.strip())
                free = Alphabet(gens)
            elif line.startswith("cosets:"):
                cosets = [x.strip() for x in line[7:].split(",") if x.strip()]
            elif line.startswith("phi "):
                head, body = line[4:].split(":", 1)
                phi_lines.append((head.strip(), body))
            elif line.startswith("mul "):
                left, right = line[4:].split("=", 1)
                word, coset = right.split("@", 1)
                mul_lines.append((left.split(), word.strip(), coset.strip()))
            elif "=" in line:
                key, value = (x.strip() for x in line.split("=", 1))
                if key not in keys:
                    raise MalformedInputError(f"unknown key {key!r}")
                conf[keys[key]] = Fraction(value) if key in ("lambda", "epsilon") else int(value)
            else:
                raise MalformedInputError("unrecognised line")
        except (ValueError, MalformedInputError) as exc:
            raise MalformedInputError(f"line {lineno}: {raw.strip()!r}: {exc}") from None
    if free is None or cosets is None:
        raise MalformedInputError("structure needs 'free:' and 'cosets:' lines")
    where = {c: i for i, c in enumerate(cosets)}

    def coset(name):
        if name not in where:
            raise MalformedInputError(f"unknown coset {name!r}")
        return where[name]

    phi = defaultdict(dict)
    for name, body in phi_lines:
        for item in body.split(","):
            if not item.strip():
                continue
            a, w = (x.strip() for x in item.split("->"))
            phi[coset(name)][a] = parse_word(w, free)
    mul = {}
    for names, word, target in mul_lines:
        if len(names) != 2:
            raise MalformedInputError(f"mul needs two cosets, got {names}")
        mul[coset(names[0]), coset(names[1])] = (parse_word(word, free), coset(target))
    return VfStructure(free, cosets, dict(phi), mul), VfConfig(**conf)


def structure_to_text(s: VfStructure) -> str:
    lines = [f"free: {','.join(s.free.generators)}", f"cosets: {','.join(s.cosets)}"]
    for i in range(1, s.m):
        images = ", ".join(f"{a} -> {s.phi[i][a] or '1'}" for a in s.free.generators)
        if images:
            lines.append(f"phi {s.cosets[i]}: {images}")
    for i in range(1, s.m):
        for j in range(1, s.m):
            u, k = s.mul[i, j]
            lines.append(f"mul {s.cosets[i]} {s.cosets[j]} = {u or '1'} @ {s.cosets[k]}")
    return "\n".join(lines) + "\n"


def infinite_dihedral() -> VfStructure:
    """``D∞ = <a, b | b^2, b a b^-1 = a^-1>`` with free part ``<a>``."""
    return VfStructure(Alphabet(("a",)), ("e", "b"), {1: {"a": "A"}}, {(1, 1): ("", 0)})


def swap_extension() -> VfStructure:
    """``F(a, b) ⋊ Z/2`` where the involution ``t`` swaps ``a`` and ``b``."""
    return VfStructure(Alphabet(("a", "b")), ("e", "t"), {1: {"a": "b", "b": "a"}}, {(1, 1): ("", 0)})
