import pytest
from hypothesis import given, strategies as st

from rigidloc.aut import ELEMENT_ACTION, NATURAL, aut_order, aut_realization, inner_embedding
from rigidloc.errors import GuardExceeded
from rigidloc.perm import _conj, _inv, _mul

EXPECTED = {"A5": 120, "A6": 1440, "A7": 5040, "L2_7": 336, "L2_8": 1512, "L2_11": 1320,
            "L2_13": 2184, "M11": 7920, "U3_3": 12096, "A8": 40320}


def build_realizations(atlas):
    return {name: aut_realization(atlas[name]) for name in ("A5", "A6", "A7", "L2_7", "L2_8")}


@pytest.fixture(scope="module")
def realizations(atlas):
    return build_realizations(atlas)


@pytest.mark.parametrize("name", sorted(EXPECTED))
def test_aut_order(atlas, name):
    r = atlas[name]
    a = aut_order(r)
    assert a.value == EXPECTED[name] and a.tag == "derived"
    # agrees with the literature value stored with the record
    assert a.value == r.order() * r.meta_out_order


def test_large_alternating_uses_unique_index_class(atlas):
    a = aut_order(atlas["A9"])
    assert (a.value, a.tag, a.method) == (362880, "derived", "unique index class")


def test_modes(realizations):
    assert realizations["A6"].mode == ELEMENT_ACTION
    assert realizations["A7"].mode == NATURAL
    for rep in realizations.values():
        assert rep.certified
        assert rep.realization.order() == rep.aut_order
    assert realizations["A6"].out_order == 4
    assert realizations["L2_8"].out_order == 3


def test_stub_has_no_realization(atlas):
    with pytest.raises(GuardExceeded):
        aut_realization(atlas["Ru"])
    a = aut_order(atlas["Ru"])
    assert a.tag == "asserted" and a.value == 145926144000


def test_inner_embedding(atlas, realizations):
    for name, rep in realizations.items():
        e = inner_embedding(rep)
        assert e.certified
        assert e.image_chain().order() == atlas[name].order()


@pytest.mark.parametrize("name", ["A5", "A6", "A7", "L2_7", "L2_8"])
@given(st.integers(0, 2**32), st.integers(0, 2**32))
def test_conjugation_square_commutes(atlas, realizations, name, i, j):
    """Conjugation by g followed by alpha equals alpha followed by conjugation by alpha(g)."""
    import random
    rep = realizations[name]
    G = atlas[name].chain
    rng = random.Random(i)
    alpha = tuple(rep.realization.random_element(rng))
    g = tuple(G.random_element(random.Random(j)))
    image = rep.apply(alpha, g)
    assert G.contains(image)
    lhs = rep.embed(image)
    rhs = _conj(alpha, rep.embed(g), _inv(alpha))
    assert lhs == rhs
    # alpha is a homomorphism on G
    h = tuple(G.random_element(rng))
    assert rep.apply(alpha, _mul(g, h)) == _mul(image, rep.apply(alpha, h))
