import itertools

import pytest
from hypothesis import given, strategies as st

from conftest import closure, cyclic_record, dihedral_record
from rigidloc.errors import CosetOverflow, GuardExceeded, ParseError
from rigidloc.fp import (Presentation, check_relators, coset_enumerate, evaluate_word, format_word,
                         free_reduce, invert_word, low_index_subgroups, parse_word, table_is_valid)
from rigidloc.perm import _inv, _mul, build_chain

A5 = Presentation.from_strings(2, ["aa", "bbb", "ababababab"])


def words(n_gens=2, max_len=12):
    letters = [k for g in range(1, n_gens + 1) for k in (g, -g)]
    return st.lists(st.sampled_from(letters), max_size=max_len).map(tuple)


def test_parse_word():
    assert parse_word("a b A") == (1, 2, -1)
    assert parse_word("abAB") == (1, 2, -1, -2)
    assert format_word((1, 2, -1)) == "a b A"
    with pytest.raises(ParseError):
        parse_word("a 3")


@given(words())
def test_free_reduce_and_inverse(w):
    r = free_reduce(w)
    assert all(r[i] != -r[i + 1] for i in range(len(r) - 1))
    assert free_reduce(r + invert_word(r)) == ()
    assert parse_word(format_word(w)) == w if w else True


def test_a5_cosets(atlas):
    r = atlas["A5"]
    assert coset_enumerate(r.presentation).n_cosets == 60
    # the stored point-stabilizer words generate a copy of A4
    assert coset_enumerate(r.presentation, r.subgroup_words("point")).n_cosets == 5
    assert coset_enumerate(A5).n_cosets == 60


def test_unreduced_subgroup_word():
    D = dihedral_record(3)
    assert coset_enumerate(D.presentation, [parse_word("B a A b")]).n_cosets == 6


def test_a5_enumeration_is_deterministic():
    runs = [coset_enumerate(A5, [parse_word("b")]) for _ in range(3)]
    assert len({r.key() for r in runs}) == 1
    assert runs[0].n_cosets == 20


def test_action_is_a_homomorphism(atlas):
    for name in ("A5", "L2_7", "L2_8"):
        r = atlas[name]
        ct = coset_enumerate(r.presentation, [])
        assert ct.n_cosets == r.order()
        assert check_relators(r.presentation, ct.action)
        assert build_chain(ct.action, ct.n_cosets).order() == r.order()
        assert table_is_valid(r.presentation, ct)


def test_overflow_guard():
    with pytest.raises(CosetOverflow):
        coset_enumerate(A5, max_cosets=20)
    assert issubclass(CosetOverflow, GuardExceeded)


@given(st.integers(3, 12), st.data())
def test_dihedral_index_matches_orbit(n, data):
    """Index of <w> equals |G| / |<w>| computed in the permutation group."""
    D = dihedral_record(n)
    w = data.draw(words(2, 8))
    ct = coset_enumerate(D.presentation, [w])
    g = evaluate_word(w, D.generators)
    assert ct.n_cosets == 2 * n // len(closure([g], n))


def _subgroups_by_brute_force(elements, degree):
    """Conjugacy classes of subgroups (as frozensets) of a 2-generated-subgroup group."""
    subs = set()
    for x, y in itertools.combinations_with_replacement(elements, 2):
        subs.add(frozenset(closure([x, y], degree)))
    classes = []
    seen = set()
    for S in sorted(subs, key=lambda s: (len(s), sorted(s))):
        if S in seen:
            continue
        orbit = {frozenset(_mul(_mul(g, s), _inv(g)) for s in S) for g in elements}
        seen |= orbit
        classes.append(len(S))
    return classes


@pytest.mark.parametrize("name, n_max", [("A5", 12), ("L2_7", 8)])
def test_low_index_matches_brute_force(atlas, name, n_max):
    r = atlas[name]
    order = r.order()
    elements = list(closure(r.generators, r.degree))
    brute = sorted(order // s for s in _subgroups_by_brute_force(elements, r.degree)
                   if order // s <= n_max)
    tables = low_index_subgroups(r.presentation, n_max)
    assert sorted(t.n_cosets for t in tables) == brute
    assert all(table_is_valid(r.presentation, t) for t in tables)


def test_low_index_cyclic():
    # one subgroup for each divisor of 12
    C = cyclic_record(12)
    assert [t.n_cosets for t in low_index_subgroups(C.presentation, 12)] == [1, 2, 3, 4, 6, 12]


def test_low_index_guard():
    with pytest.raises(GuardExceeded):
        low_index_subgroups(A5, 10**6)
    assert low_index_subgroups(A5, 0) == []
