import itertools

import pytest
from hypothesis import HealthCheck, settings

from rigidloc.atlas import GroupRecord, load_bundled
from rigidloc.fp import Presentation, parse_word
from rigidloc.perm import Permutation, _mul

settings.register_profile(
    "ci", max_examples=100, deadline=None, derandomize=True,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large])
settings.load_profile("ci")


@pytest.fixture(scope="session")
def atlas():
    return load_bundled()


def closure(gens, degree):
    """Every element of <gens>, by plain breadth-first multiplication."""
    ident = tuple(range(degree))
    seen = {ident}
    frontier = [ident]
    gens = [tuple(g) for g in gens]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = _mul(x, g)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return seen


def cyclic_record(n: int) -> GroupRecord:
    gen = Permutation(list(range(1, n)) + [0])
    return GroupRecord(name=f"C{n}", degree=n, generators=(gen,),
                       presentation=Presentation(1, (parse_word("a" * n),)), meta_order=n,
                       order_tag="derived")


def dihedral_record(n: int) -> GroupRecord:
    r = Permutation(list(range(1, n)) + [0])
    s = Permutation([(-i) % n for i in range(n)])
    rels = (parse_word("a" * n), parse_word("bb"), parse_word("abab"))
    return GroupRecord(name=f"D{2 * n}", degree=n, generators=(r, s),
                       presentation=Presentation(2, rels), meta_order=2 * n, order_tag="derived")


def all_perms(n):
    return [tuple(p) for p in itertools.permutations(range(n))]


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
