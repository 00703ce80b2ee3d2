from itertools import combinations

import networkx as nx
import pytest
from hypothesis import given
from hypothesis import strategies as st_

from oracles import dominates as dom_oracle
from oracles import sil_triples, to_nx
from raagout.graph_core import (
    DominationChain,
    Graph,
    GraphError,
    PreconditionError,
    SilWitness,
    canonical_code,
    classify_special,
    components_excluding,
    corollary_conditions,
    cycle_graph,
    depth_report,
    domination_chain,
    domination_depth,
    domination_equivalent_pairs,
    dominates,
    enumerate_graph_symmetries,
    find_sil,
    gamma_k,
    link,
    nonisomorphic_graphs,
    parse_graph,
    path_graph,
    serialize_graph,
    sil_from_double_separation,
    sil_from_nonadjacent_domination,
    star,
    star_separation_depth,
)


def star_graph(center="c", leaves=("x", "y", "z")):
    return Graph([center, *leaves], [(center, l) for l in leaves])


@st_.composite
def graphs(draw, max_n=6, min_n=1):
    n = draw(st_.integers(min_n, max_n))
    pairs = list(combinations(range(n), 2))
    chosen = draw(st_.lists(st_.booleans(), min_size=len(pairs), max_size=len(pairs)))
    names = [f"v{i}" for i in range(n)]
    return Graph(names, [(names[a], names[b]) for (a, b), c in zip(pairs, chosen) if c])


def relabel(g: Graph, perm) -> Graph:
    names = [g.vertices[p] for p in perm]
    return Graph(names, g.edges())


# -- construction and text format ----------------------------------------------


def test_graph_rejects_bad_input():
    with pytest.raises(GraphError):
        Graph(["a", "a"])
    with pytest.raises(GraphError):
        Graph(["a"], [("a", "a")])
    with pytest.raises(GraphError):
        Graph(["a"], [("a", "b")])


def test_parse_examples():
    g = parse_graph("a: b\nb: a c\nc: b")
    assert g.vertices == ("a", "b", "c") and g.edges() == [("a", "b"), ("b", "c")]
    with pytest.raises(GraphError, match="asymmetric"):
        parse_graph("a: b\nb:")
    with pytest.raises(GraphError):
        parse_graph("# only a comment\n")
    assert parse_graph("# only a comment\n", allow_empty=True).n == 0
    with pytest.raises(GraphError):
        parse_graph("a: a")
    with pytest.raises(GraphError):
        parse_graph("a:\na:")


@given(graphs(max_n=8))
def test_serialize_round_trip(g):
    h = parse_graph(serialize_graph(g))
    assert h.vertices == g.vertices and h.edges() == g.edges()


# -- links, stars, domination --------------------------------------------------


def test_link_star_examples():
    p = path_graph("abc")
    assert set(link(p, "b")) == {"a", "c"} and link(p, "a") == ("b",)
    iso = Graph(["v"])
    assert link(iso, "v") == () and star(iso, "v") == ("v",)
    assert set(star(p, "b")) == {"a", "b", "c"}
    tri = Graph("abc", [("a", "b"), ("b", "c"), ("a", "c")])
    assert all(set(star(tri, v)) == {"a", "b", "c"} for v in "abc")


def test_domination_examples():
    p4 = path_graph("abcd")
    assert dominates(p4, "b", "a") and dominates(p4, "b", "d") and not dominates(p4, "a", "b")
    sol = Graph("abc", [("a", "b")])
    assert dominates(sol, "a", "b") and dominates(sol, "b", "a")
    assert all(dominates(p4, v, v) for v in "abcd")
    assert domination_equivalent_pairs(path_graph("abc")) == [("a", "c")]
    assert domination_equivalent_pairs(p4) == []
    assert domination_equivalent_pairs(Graph(["x", "y"])) == [("x", "y")]


@given(graphs())
def test_domination_matches_definition_and_is_preorder(g):
    G = to_nx(g)
    for u in g.vertices:
        for v in g.vertices:
            assert dominates(g, u, v) == dom_oracle(G, u, v)
    for a in g.vertices:
        for b in g.vertices:
            for c in g.vertices:
                if dominates(g, a, b) and dominates(g, b, c):
                    assert dominates(g, a, c)


def test_components_excluding():
    assert components_excluding(path_graph("abcd"), ["b"]) == [("a",), ("c", "d")]
    assert components_excluding(star_graph(), ["c"]) == [("x",), ("y",), ("z",)]
    g = Graph("abcd", [("a", "b"), ("c", "d")])
    assert components_excluding(g, []) == [("a", "b"), ("c", "d")]


# -- SILs ----------------------------------------------------------------------


def test_find_sil_examples():
    assert find_sil(star_graph()) == SilWitness("x", "y", ("z",))
    assert find_sil(path_graph("abcd")) is None
    for k in range(1, 5):
        assert find_sil(gamma_k(k)) is None


@given(graphs())
def test_find_sil_matches_definition(g):
    triples = sil_triples(to_nx(g), g.vertices)
    got = find_sil(g)
    assert (got is None) == (not triples)
    if got is not None:
        got.validate(g)
        assert (got.x, got.y, got.component) == triples[0]


def test_sil_from_double_separation():
    assert sil_from_double_separation(star_graph(), "x", "y", "z") == SilWitness("x", "y", ("z",))
    k23 = Graph(["u1", "u2", "w1", "w2", "w3"],
                [(u, w) for u in ("u1", "u2") for w in ("w1", "w2", "w3")])
    assert sil_from_double_separation(k23, "w1", "w2", "w3").component == ("w3",)
    with pytest.raises(PreconditionError):
        sil_from_double_separation(star_graph(), "c", "x", "y")
    with pytest.raises(PreconditionError):
        sil_from_double_separation(cycle_graph([f"v{i}" for i in range(6)]), "v0", "v2", "v4")


def test_sil_from_nonadjacent_domination():
    g = Graph("abcd", [("a", "b"), ("b", "c"), ("b", "d")])
    assert sil_from_nonadjacent_domination(g, "a", "c") == SilWitness("a", "c", ("d",))
    with pytest.raises(PreconditionError):
        sil_from_nonadjacent_domination(g, "a", "b")
    with pytest.raises(PreconditionError):
        sil_from_nonadjacent_domination(path_graph("abc"), "a", "c")


def test_sil_validate_rejects_malformed():
    g = star_graph()
    for bad in (SilWitness("x", "x", ("z",)), SilWitness("x", "c", ("z",)),
                SilWitness("x", "y", ("c",)), SilWitness("x", "y", ())):
        with pytest.raises(PreconditionError):
            bad.validate(g)


# -- depth ---------------------------------------------------------------------


def test_depth_examples():
    g2 = gamma_k(2)
    assert [domination_depth(g2, f"x{i}") for i in range(3)] == [0, 1, 2]
    assert domination_depth(path_graph("abcd"), "b") == 1
    assert domination_depth(Graph(["v"]), "v") == 0
    p5 = path_graph("abcde")
    assert star_separation_depth(p5, "c") == 1
    assert all(star_separation_depth(path_graph("abcd"), v) == 0 for v in "abcd")
    assert depth_report(p5).graph_depth == 1
    assert depth_report(Graph(["v"])).graph_depth == 0
    for k in range(6):
        g = gamma_k(k)
        rep = depth_report(g)
        assert rep.graph_depth == k
        assert all(star_separation_depth(g, v) == 0 for v in g.vertices)
        for i in range(k + 1 if k else 0):
            assert rep.depth(f"x{i}") == rep.depth(f"y{i}") == i


def _chain_oracle(g: Graph, top: str) -> int:
    """Longest domination chain ending at top, by enumerating simple paths."""
    best = 0
    stack = [(top, (top,))]
    while stack:
        v, path = stack.pop()
        best = max(best, len(path) - 1)
        for u in g.vertices:
            if u not in path and dominates(g, v, u):
                stack.append((u, path + (u,)))
    return best


@given(graphs(max_n=6))
def test_domination_depth_matches_chain_enumeration(g):
    for v in g.vertices:
        d = domination_depth(g, v)
        assert d == _chain_oracle(g, v)
    rep = depth_report(g)
    for v in g.vertices:
        if rep.depth(v) > 0:
            kind, chain = rep.witness_chain(g, v)
            chain.validate(g)
            assert chain.vertices[-1] == v
            # a star-separating chain of length m realises depth m + 1
            assert chain.length + (kind == "star_separation") == rep.depth(v)


@given(graphs(max_n=6), st_.randoms(use_true_random=False))
def test_invariants_under_relabeling(g, rnd):
    perm = list(range(g.n))
    rnd.shuffle(perm)
    h = relabel(g, perm)
    assert canonical_code(g) == canonical_code(h)
    assert depth_report(g).as_map() == depth_report(h).as_map()
    assert (find_sil(g) is None) == (find_sil(h) is None)
    assert bool(domination_equivalent_pairs(g)) == bool(domination_equivalent_pairs(h))


def test_domination_chain_validate():
    g = gamma_k(2)
    chain = domination_chain(g, "x2", "x0")
    assert chain.vertices == ("x0", "x1", "x2")
    with pytest.raises(PreconditionError):
        DominationChain(("x2", "x0")).validate(g)


# -- corollary conditions and special cases -----------------------------------


def test_corollary_condition_examples():
    two_edges = Graph("abcd", [("a", "b"), ("c", "d")])
    hit = corollary_conditions(two_edges)[0]
    assert hit.tag == "disconnected" and hit.reduction == ("a", "b")
    edge_and_path = Graph("abcde", [("a", "b"), ("c", "d"), ("d", "e")])
    hit = corollary_conditions(edge_and_path)[0]
    assert hit.reduction == SilWitness("c", "e", ("a", "b"))
    hit = corollary_conditions(Graph("abc"))[0]
    assert hit.tag == "disconnected" and hit.reduction == ("a", "b")
    hits = {h.tag: h for h in corollary_conditions(star_graph())}
    assert hits["cut_vertex"].reduction == SilWitness("x", "y", ("z",))


@given(graphs(max_n=7))
def test_corollary_conditions_imply_free(g):
    for hit in corollary_conditions(g):
        if isinstance(hit.reduction, SilWitness):
            hit.reduction.validate(g)
        else:
            x, y = hit.reduction
            assert dominates(g, x, y) and dominates(g, y, x)


def test_classify_special_examples():
    tri = Graph("abc", [("a", "b"), ("b", "c"), ("a", "c")])
    f = classify_special(tri)
    assert not f.out_finite and not f.virtually_abelian
    f = classify_special(path_graph("abcd"))
    assert not f.out_finite and f.virtually_abelian
    assert classify_special(cycle_graph("abcde")).out_finite


# -- families, symmetries, isomorphism classes --------------------------------


def test_gamma_k_shapes():
    assert gamma_k(0).n == 1
    g1 = gamma_k(1)
    assert sorted(g1.edges()) == sorted([("x0", "x1"), ("y0", "y1"), ("x1", "y1")])
    g2 = gamma_k(2)
    assert g2.n == 6
    cross = {e for e in g2.edges() if e[0][0] != e[1][0]}
    assert cross == {("x1", "y2"), ("x2", "y1"), ("x2", "y2")}
    assert len(g2.edges()) == 3 + 3 + 3


def test_symmetry_examples():
    assert enumerate_graph_symmetries(path_graph("abc")) == [("a", "b", "c"), ("c", "b", "a")]
    tri = Graph("abc", [("a", "b"), ("b", "c"), ("a", "c")])
    assert len(enumerate_graph_symmetries(tri)) == 6
    g2 = gamma_k(2)
    syms = enumerate_graph_symmetries(g2)
    assert syms == [g2.vertices, ("y0", "y1", "y2", "x0", "x1", "x2")]


@given(graphs(max_n=6))
def test_symmetries_match_networkx(g):
    G = to_nx(g)
    count = sum(1 for _ in nx.algorithms.isomorphism.GraphMatcher(G, G).isomorphisms_iter())
    syms = enumerate_graph_symmetries(g)
    assert len(syms) == count
    for img in syms:
        mapping = dict(zip(g.vertices, img))
        assert all(G.has_edge(mapping[a], mapping[b]) for a, b in g.edges())


def test_nonisomorphic_counts():
    assert [len(nonisomorphic_graphs(n)) for n in range(1, 7)] == [1, 2, 4, 11, 34, 156]
    reps = nonisomorphic_graphs(5)
    for a, b in combinations(reps, 2):
        assert not nx.is_isomorphic(to_nx(a), to_nx(b))
