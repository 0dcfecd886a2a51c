import pytest
from hypothesis import given, strategies as st

from rigidloc import rigid_graph as rg
from rigidloc.errors import ParseError
from rigidloc.rigid_graph import (ASSERTED, VERIFIED, GraphError, LocEdge, RigidGraph,
                                  UnknownNode, VerdictRecord)


@pytest.fixture(scope="module")
def bundled():
    return rg.bundled_graph()


def test_one_component_holds_every_sampled_family(bundled):
    groups = rg.component_samples(bundled)
    comp = rg.component_of(bundled, "A5")
    missing = [n for n in groups if n not in comp]
    assert missing == []
    assert len(groups) > 100
    assert "M" not in comp
    assert rg.component_of(bundled, "M") == ["M"]


def test_aliases_collapse(bundled):
    assert bundled.canonical("G2_2p") == "U3_3"
    assert bundled.canonical("L2_9") == "A6"
    assert "L2_4" in bundled


def test_zigzag_a6_a7(bundled):
    steps = rg.zigzag_path(bundled, "A6", "A7")
    visited = [steps[0].start] + [s.end for s in steps]
    for name in ("T", "Ru", "L2_13", "A14"):
        assert name in visited
    assert visited[0] == "A6" and visited[-1] == "A7"
    text = rg.render_path(steps)
    assert text.startswith("A6 ↪ T ↪ Ru ↩ L2_13 ↪ A14 ↩")
    assert sum(s.weight for s in steps) == 11


def test_path_edge_cases(bundled):
    assert rg.zigzag_path(bundled, "A5", "A5") == []
    assert rg.zigzag_path(bundled, "A5", "M") is None
    with pytest.raises(UnknownNode):
        rg.zigzag_path(bundled, "A5", "Q8")


def test_verified_component(bundled):
    comps = [c for c in rg.components(bundled, "verified_only") if len(c) > 1]
    assert comps == [["A11", "M11"], ["A14", "L2_13"], ["A5", "A6"], ["A7", "A8"], ["A9", "L2_8"]]


def test_bundled_contains_cited_inclusions(bundled):
    pairs = {(e.source, e.target): e.ref for e in bundled.edges}
    for h, g in [("L2_7", "G2_2p"), ("G2_2p", "J2"), ("J2", "G2_4"), ("G2_4", "Suz"),
                 ("M11", "ON"), ("He", "Fi24p"), ("J3", "E6_4"), ("Sz32", "E8_5"),
                 ("M11", "M23"), ("A10", "S8_2"), ("S8_2", "Fi23")]:
        assert pairs[(h, g)]
    assert all(e.ref for e in bundled.edges)


def test_export_round_trip(bundled):
    text = rg.export(bundled)
    again = rg.parse_graph(text.decode())
    assert rg.export(again) == text
    assert rg.components(again) == rg.components(bundled)


def test_dot_styles():
    g = RigidGraph().add_verdict(VerdictRecord("v1", "A5", "A6", "Localization", "oracle"))
    g = g.add_edge(LocEdge("A5", "A6", VERIFIED, "v1"))
    g = g.add_edge(LocEdge("M11", "ON", ASSERTED, "other/x"))
    dot = rg.export(g, "dot").decode()
    assert '"A5" -> "A6" [style=solid' in dot
    assert '"M11" -> "ON" [style=dashed' in dot
    assert dot.count("->") == 2


def test_edge_validation():
    g = RigidGraph()
    with pytest.raises(GraphError):
        g.add_edge(LocEdge("A5", "A6", VERIFIED, "missing"))
    g = g.add_verdict(VerdictRecord("bad", "A6", "A7", "NotLocalization", "theorem_main"))
    with pytest.raises(GraphError):
        g.add_edge(LocEdge("A6", "A7", VERIFIED, "bad"))
    with pytest.raises(GraphError):
        g.add_edge(LocEdge("M11", "ON", ASSERTED, ""))
    g2 = g.add_edge(LocEdge("M11", "ON", ASSERTED, "main/onan"))
    assert g2.edges[0].status == ASSERTED
    assert g.edges == ()


def test_empty_graph():
    assert rg.components(RigidGraph()) == []
    assert rg.export(RigidGraph()) == b""


@pytest.mark.parametrize("text", ["edge A5\n", "edge A5 A6 maybe x\n", "frob\n",
                                  "chain A x asserted c\n", "edge A5 A6 verified nothing\n"])
def test_parse_errors(text):
    with pytest.raises(ParseError) as info:
        rg.parse_graph(text)
    assert info.value.line == 1


NAMES = ["A5", "A6", "A7", "A9", "B", "C", "D", "E"]


@st.composite
def graphs(draw):
    g = RigidGraph()
    g._add_verdict(VerdictRecord("v", "A5", "A6", "Localization", "oracle"))
    edges = draw(st.lists(st.tuples(st.sampled_from(NAMES), st.sampled_from(NAMES),
                                    st.booleans()), max_size=12))
    for a, b, verified in edges:
        if verified and (a, b) == ("A5", "A6"):
            g._add_edge(LocEdge(a, b, VERIFIED, "v"))
        else:
            g._add_edge(LocEdge(a, b, ASSERTED, "other/t"))
    if draw(st.booleans()):
        g._add_chain(rg.ChainRecord("A", 7, ASSERTED, "main/c"))
    for n in draw(st.lists(st.sampled_from(NAMES), max_size=3)):
        g._add_node(n)
    return g


def _as_map(partition):
    return {n: tuple(block) for block in partition for n in block}


@given(graphs(), st.sampled_from(NAMES), st.sampled_from(NAMES))
def test_adding_edges_never_splits(g, a, b):
    before = _as_map(rg.components(g))
    after = _as_map(rg.components(g.add_edge(LocEdge(a, b, ASSERTED, "other/t"))))
    for n, block in before.items():
        assert set(block) <= set(after[n])


@given(graphs())
def test_verified_partition_refines_full_partition(g):
    full = _as_map(rg.components(g))
    for block in rg.components(g, "verified_only"):
        assert set(block) <= set(full[block[0]])


@given(graphs())
def test_export_idempotent(g):
    text = rg.export(g)
    assert rg.export(rg.parse_graph(text.decode())) == text


@given(graphs(), st.sampled_from(NAMES), st.sampled_from(NAMES))
def test_path_exists_iff_same_component(g, a, b):
    if a not in g or b not in g:
        return
    same = rg.component_of(g, a) == rg.component_of(g, b)
    steps = rg.zigzag_path(g, a, b, "all")
    assert (steps is not None) == same
    if steps:
        assert steps[0].start == g.canonical(a) and steps[-1].end == g.canonical(b)
        for s, t in zip(steps, steps[1:]):
            assert s.end == t.start


def test_stored_verdicts_recompute(bundled):
    for record, v in rg.recheck_verdicts(bundled):
        assert v.value == record.value, record.ident
