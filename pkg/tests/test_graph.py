import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from genrigid.graph import (
    Graph,
    GraphFormatError,
    add_edge,
    delete_edge,
    format_graph,
    generate,
    is_connected,
    parse_graph,
    vertex_connectivity_at_least,
)


def test_parse_triangle():
    g = parse_graph("3 3\n0 1\n0 2\n1 2")
    assert g == generate("complete", [3])
    assert g.v == 3 and g.e == 3


def test_parse_canonicalizes():
    g = parse_graph("2 1\n1 0")
    assert g.edges == ((0, 1),)


def test_parse_comments_and_sorting():
    g = parse_graph("# a comment\n4 3\n# another\n3 2\n0 3\n1 0\n")
    assert g.edges == ((0, 1), (0, 3), (2, 3))


@pytest.mark.parametrize(
    "text, line, fragment",
    [
        ("2 1\n0 0", 2, "self-loop"),
        ("3 2\n0 1\n1 0", 3, "duplicate"),
        ("3 1\n0 5", 2, "out of range"),
        ("x y\n0 1", 1, "two integers"),
        ("3 1 4\n0 1", 1, "two integers"),
        ("3 2\n0 1\n1 2\n0 2", 4, "more than"),
    ],
)
def test_parse_errors_carry_line(text, line, fragment):
    with pytest.raises(GraphFormatError) as info:
        parse_graph(text)
    assert info.value.line == line
    assert fragment in str(info.value)


def test_parse_missing_header_and_short_edge_list():
    with pytest.raises(GraphFormatError, match="header"):
        parse_graph("# only comments\n")
    with pytest.raises(GraphFormatError, match="declared 2"):
        parse_graph("3 2\n0 1\n")


def test_format_round_trip():
    g = generate("wheel", [5])
    assert parse_graph(format_graph(g)) == g
    assert format_graph(parse_graph("2 1\n1 0")) == "2 1\n0 1\n"


def test_graph_validation():
    with pytest.raises(ValueError):
        Graph(2, ((0, 0),))
    with pytest.raises(ValueError):
        Graph(2, ((0, 2),))
    with pytest.raises(ValueError):
        Graph(3, ((0, 1), (1, 0)))


@pytest.mark.parametrize(
    "family, params, v, e",
    [
        ("complete", [4], 4, 6),
        ("complete_bipartite", [5, 5], 10, 25),
        ("prism", [], 6, 9),
        ("cycle", [5], 5, 5),
        ("path", [4], 4, 3),
        ("wheel", [5], 6, 10),
        ("complete", [1], 1, 0),
    ],
)
def test_generate_sizes(family, params, v, e):
    g = generate(family, params)
    assert (g.v, g.e) == (v, e)
    assert generate(family, params) == g


def test_generate_layouts():
    kb = generate("complete_bipartite", [2, 3])
    assert kb.edges == ((0, 2), (0, 3), (0, 4), (1, 2), (1, 3), (1, 4))
    prism = generate("prism")
    for edge in [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (0, 3), (1, 4), (2, 5)]:
        assert prism.has_edge(*edge)
    wheel = generate("wheel", [4])
    assert all(wheel.has_edge(i, 4) for i in range(4))


@pytest.mark.parametrize("family, params", [("complete", [0]), ("cycle", [2]), ("complete_bipartite", [0, 3]),
                                            ("nope", []), ("prism", [3]), ("wheel", [2])])
def test_generate_rejects_bad_params(family, params):
    with pytest.raises(ValueError):
        generate(family, params)


def test_delete_edge():
    k3 = generate("complete", [3])
    assert delete_edge(k3, (0, 1)) == Graph.from_edges(3, [(0, 2), (1, 2)])
    assert k3.e == 3
    assert delete_edge(generate("prism"), (3, 0)).e == 8
    with pytest.raises(ValueError):
        delete_edge(k3, (0, 3))


@pytest.mark.parametrize(
    "g, k, expected",
    [
        (generate("complete_bipartite", [5, 5]), 4, True),
        (generate("complete_bipartite", [5, 5]), 5, True),
        (generate("complete_bipartite", [5, 5]), 6, False),
        (generate("path", [3]), 2, False),
        (generate("complete", [4]), 3, True),
        (generate("complete", [4]), 4, False),
        (generate("cycle", [6]), 2, True),
        (generate("prism"), 3, True),
        (generate("wheel", [5]), 3, True),
        (Graph(4, ((0, 1), (2, 3))), 1, False),
    ],
)
def test_vertex_connectivity_examples(g, k, expected):
    assert vertex_connectivity_at_least(g, k) is expected


def brute_connectivity_at_least(g, k):
    if g.v <= k:
        return False
    for size in range(k):
        for cut in itertools.combinations(range(g.v), size):
            if not is_connected(g.induced_without(cut)):
                return False
    return True


@st.composite
def small_graphs(draw):
    v = draw(st.integers(1, 8))
    pairs = list(itertools.combinations(range(v), 2))
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    return Graph.from_edges(v, chosen)


@settings(max_examples=150, deadline=None)
@given(small_graphs(), st.integers(1, 5))
def test_vertex_connectivity_matches_brute_force(g, k):
    assert vertex_connectivity_at_least(g, k) == brute_connectivity_at_least(g, k)


@settings(max_examples=50, deadline=None)
@given(small_graphs(), st.data())
def test_delete_then_add_restores(g, data):
    if g.e == 0:
        return
    edge = data.draw(st.sampled_from(g.edges))
    assert add_edge(delete_edge(g, edge), edge) == g


def test_canonical_hash_stable():
    a = parse_graph("3 2\n2 1\n0 1")
    b = Graph.from_edges(3, [(0, 1), (1, 2)])
    assert a.canonical_hash() == b.canonical_hash()
    assert a.canonical_hash() != generate("complete", [3]).canonical_hash()
