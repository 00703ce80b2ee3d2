from itertools import combinations, product

import pytest
from hypothesis import given
from hypothesis import strategies as st_

from oracles import invert, projection_trivial, rewrite_equal, to_nx
from raagout.graph_core import Graph, path_graph
from raagout.words import (
    MAX_WORD_LENGTH,
    GroupElement,
    Letter,
    WordError,
    centralizer_members,
    concat_reduce,
    equal,
    extract_conjugator,
    format_word,
    invert as invert_el,
    normal_form,
    parse_word,
)

EDGE = Graph("ab", [("a", "b")])
P3 = path_graph("abc")


@st_.composite
def graph_and_words(draw, max_n=5, max_len=6, count=2):
    n = draw(st_.integers(1, max_n))
    pairs = list(combinations(range(n), 2))
    chosen = draw(st_.lists(st_.booleans(), min_size=len(pairs), max_size=len(pairs)))
    names = [f"v{i}" for i in range(n)]
    g = Graph(names, [(names[a], names[b]) for (a, b), c in zip(pairs, chosen) if c])
    letter = st_.tuples(st_.sampled_from(names), st_.sampled_from((1, -1)))
    words = [tuple(draw(st_.lists(letter, max_size=max_len))) for _ in range(count)]
    return g, words


def nf(g, text):
    return str(normal_form(g, text))


def test_normal_form_examples():
    assert nf(EDGE, "b a b^-1") == "a"
    assert nf(P3, "a c a^-1") == "a c a^-1"
    assert nf(P3, "c b c^-1 b^-1") == "1"
    assert nf(P3, "") == "1"


def test_concat_examples():
    a = normal_form(P3, "a")
    assert concat_reduce(P3, a, invert_el(a)) == GroupElement.identity(P3)
    assert str(normal_form(EDGE, "a b") * normal_form(EDGE, "a^-1")) == "b"
    assert str(normal_form(P3, "a c") * normal_form(P3, "c^-1 a")) == "a a"


def test_equal_examples():
    assert equal(EDGE, "a b", "b a")
    assert not equal(P3, "a c", "c a")


def test_conjugator_examples():
    assert str(extract_conjugator(P3, "a", "c^-1 a c")) == "c"
    assert str(extract_conjugator(EDGE, "a", "b^-1 a b")) == "1"
    assert extract_conjugator(P3, "a", "a a") is None
    assert extract_conjugator(P3, "a", "c") is None


def test_centralizer_examples():
    got = {str(w) for w in centralizer_members(P3, "a", 1)}
    assert got == {"1", "a", "a^-1", "b", "b^-1"}
    assert [str(w) for w in centralizer_members(P3, "a", 0)] == ["1"]
    iso = Graph(["v", "w"])
    assert {str(w) for w in centralizer_members(iso, "v", 2)} == {"1", "v", "v^-1", "v v",
                                                                  "v^-1 v^-1"}
    with pytest.raises(WordError):
        centralizer_members(P3, "a", 9)


def test_parse_and_errors():
    assert parse_word(P3, "a b^-1 1 c^1") == [0, 3, 4]
    assert format_word(P3, []) == "1"
    with pytest.raises(WordError):
        parse_word(P3, "q")
    with pytest.raises(WordError):
        normal_form(P3, [(("a", 1))] * (MAX_WORD_LENGTH + 1))
    with pytest.raises(WordError):
        normal_form(P3, [17])
    with pytest.raises(WordError):
        concat_reduce(P3, normal_form(P3, "a"), normal_form(EDGE, "a"))
    assert str(Letter("a", -1)) == "a^-1" and Letter("a").inverse() == Letter("a", -1)


def test_exhaustive_short_words_partition_like_oracle():
    """All words of length <= 4 on P3: same classes as the rewriting oracle."""
    G = to_nx(P3)
    letters = [(v, s) for v in P3.vertices for s in (1, -1)]
    words = [w for n in range(5) for w in product(letters, repeat=n)]
    ours: dict = {}
    for w in words:
        ours.setdefault(normal_form(P3, w).codes, []).append(w)
    for cls in ours.values():
        assert all(rewrite_equal(G, cls[0], w) for w in cls[1:])
    reps = [cls[0] for cls in ours.values()]
    # distinct normal forms of length <= 2 are distinct in the oracle too
    short = [r for r in reps if len(r) <= 2]
    for a, b in combinations(short, 2):
        assert not rewrite_equal(G, a, b)


@given(graph_and_words())
def test_equal_matches_rewriting_oracle(data):
    g, (w1, w2) = data
    assert equal(g, w1, w2) == rewrite_equal(to_nx(g), w1, w2)


@given(graph_and_words(max_len=12))
def test_identity_matches_projection_oracle(data):
    g, (w1, w2) = data
    assert equal(g, w1, w2) == projection_trivial(to_nx(g), w1 + invert(w2))


@given(graph_and_words(max_len=8, count=3))
def test_group_axioms(data):
    g, (w1, w2, w3) = data
    a, b, c = (normal_form(g, w) for w in (w1, w2, w3))
    assert (a * b) * c == a * (b * c)
    assert a * a.inverse() == GroupElement.identity(g)
    assert normal_form(g, a) == a
    assert len(a) <= len(w1)


@given(graph_and_words(max_len=6, count=1), st_.data())
def test_conjugator_extraction(data, draw):
    g, (u,) = data
    v = draw.draw(st_.sampled_from(g.vertices))
    ue = normal_form(g, u)
    w = ue.inverse() * normal_form(g, v) * ue
    found = extract_conjugator(g, v, w)
    assert found is not None
    assert found.inverse() * normal_form(g, v) * found == w
    assert len(found) <= len(ue)
    # minimal in its coset of the centraliser: no letter of st(v) cancels
    # against the front of found
    i = g.index(v)
    for j in range(g.n):
        if g.st(i) >> j & 1:
            for sign in (1, -1):
                l = normal_form(g, [(g.vertices[j], sign)])
                assert len(l * found) == len(found) + 1
