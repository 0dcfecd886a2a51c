import pytest
from hypothesis import given, strategies as st

from rigidloc.atlas import (Atlas, GroupRecord, dump_atlas, load_atlas_text, parse_atlas,
                            validate_record, verify_simplicity)
from rigidloc.errors import AtlasError, ParseError
from rigidloc.fp import Presentation
from rigidloc.perm import Permutation

C7 = """group C7 degree 7
gen (1 2 3 4 5 6 7)
rel a a a a a a a
meta order 7 derived
end
"""


def test_bundled_records(atlas):
    concrete = {"A5": 60, "A6": 360, "A7": 2520, "A8": 20160, "A9": 181440, "L2_7": 168,
                "L2_8": 504, "L2_11": 660, "L2_13": 1092, "U3_3": 6048, "M11": 7920}
    for name, order in concrete.items():
        r = atlas[name]
        assert r.order() == order == r.meta_order
        assert r.simplicity_status == "verified"
        assert r.order_tag == "derived"
    for name in ("T", "Ru", "He", "Fi24p", "M"):
        assert atlas[name].is_stub and atlas[name].order_tag == "asserted"
    assert atlas["M"].meta_order == 808017424794512875886459904961710757005754368000000000


def test_unknown_group(atlas):
    with pytest.raises(AtlasError):
        atlas["Q8"]
    assert "A5" in atlas and "Q8" not in atlas


def test_round_trip_bundled(atlas):
    text = dump_atlas(atlas)
    again = parse_atlas(text)
    assert dump_atlas(again) == text
    assert [r.name for r in again] == list(atlas.names())


@st.composite
def records(draw):
    n = draw(st.integers(2, 9))
    gens = draw(st.lists(st.permutations(list(range(n))).map(Permutation), min_size=1, max_size=3))
    rels = draw(st.lists(st.lists(st.sampled_from([1, -1, 2, -2][:2 * len(gens)]), min_size=1,
                                  max_size=6).map(tuple), max_size=3))
    subs = draw(st.dictionaries(st.sampled_from(["point", "borel", "s1"]),
                                st.lists(st.lists(st.sampled_from([1, -1]), min_size=1, max_size=4)
                                         .map(tuple), min_size=1, max_size=2).map(tuple)))
    r = GroupRecord(name=draw(st.sampled_from(["G", "H_2", "X7"])), degree=n,
                    generators=tuple(gens), meta_order=draw(st.integers(1, 10**30)),
                    order_tag=draw(st.sampled_from(["derived", "asserted"])), subgroups=subs)
    if rels:
        r.presentation = Presentation(len(gens), tuple(rels))
    if draw(st.booleans()):
        r.meta_out_order, r.out_tag = draw(st.integers(1, 24)), "asserted"
    return r


@given(records())
def test_dump_parse_round_trip(r):
    text = dump_atlas([r])
    (back,) = parse_atlas(text)
    assert back.generators == r.generators
    assert back.subgroups == r.subgroups
    assert (back.meta_order, back.order_tag, back.meta_out_order) == \
        (r.meta_order, r.order_tag, r.meta_out_order)
    assert dump_atlas([back]) == text


@pytest.mark.parametrize("text, line", [
    ("gen (1 2)\n", 1),
    ("group X degree 3\ngen (1 4)\nmeta order 2 derived\nend\n", 2),
    ("group X degree 3\ngen (1 2)\nmeta order 2 maybe\nend\n", 3),
    ("group X degree 3\nfrob\nend\n", 2),
    ("group X degree 3\ngen (1 2)\nend\n", 3),
    ("group X degree\nend\n", 1),
    ("group X degree 3\ngen (1 2)\nrel a b\nmeta order 2 derived\nend\n", 5),
])
def test_parse_errors_carry_line(text, line):
    with pytest.raises(ParseError) as info:
        parse_atlas(text)
    assert info.value.line == line


def test_missing_end():
    with pytest.raises(ParseError):
        parse_atlas("group X degree 3\ngen (1 2)\nmeta order 2 derived\n")


def test_duplicate_names():
    with pytest.raises(AtlasError, match="duplicate"):
        load_atlas_text(C7 + C7)


def test_wrong_order_rejected():
    with pytest.raises(AtlasError, match="order"):
        load_atlas_text(C7.replace("order 7", "order 14"))


def test_wrong_presentation_rejected():
    with pytest.raises(AtlasError):
        load_atlas_text(C7.replace("rel a a a a a a a", "rel a a a"))


def test_stub_must_be_asserted():
    with pytest.raises(AtlasError):
        load_atlas_text("group Big degree 0\nmeta order 1000 derived\nend\n")
    (r,) = load_atlas_text("group Big degree 0\nmeta order 1000 asserted\nend\n")
    assert r.is_stub and r.simplicity_status == "asserted"
    with pytest.raises(AtlasError):
        r.chain


def test_cyclic_prime_is_simple():
    (r,) = load_atlas_text(C7)
    assert r.simplicity_status == "verified"


def test_non_simple_group_flagged():
    (r,) = load_atlas_text("group S4 degree 4\ngen (1 2 3 4)\ngen (1 2)\n"
                           "meta order 24 derived\nend\n")
    assert r.simplicity_status == "failed"
    result = verify_simplicity(r)
    assert not result and result.witness.order() in (4, 12)


def test_trivial_group_has_no_simplicity():
    r = GroupRecord("One", 3, (Permutation.identity(3),), meta_order=1, order_tag="derived")
    with pytest.raises(ValueError):
        validate_record(r)


def test_atlas_mapping():
    a = Atlas(load_atlas_text(C7))
    assert list(a.names()) == ["C7"]
    assert [r.name for r in a] == ["C7"]
