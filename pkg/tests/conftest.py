import random

import pytest

from geoconj import automata as fa
from geoconj.words import Alphabet

AB = Alphabet(("a", "b"))

# criterion number -> (passed, detail); filled by test_acceptance
ACCEPTANCE = {}


def random_nfa(rng: random.Random, alphabet=AB, max_states=3, max_edges=None, min_states=1):
    n = rng.randint(min_states, max_states)
    m = rng.randint(1, max_edges or 2 * n)
    edges = {(rng.randrange(n), rng.choice(alphabet.signed), rng.randrange(n)) for _ in range(m)}
    final = {rng.randrange(n) for _ in range(rng.randint(1, n))}
    return fa.build(alphabet, n, {0}, final, edges)


@pytest.fixture
def rng():
    return random.Random(7)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
