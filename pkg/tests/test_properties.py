"""Property tests over randomly generated reflexive graphs."""

import hypothesis.strategies as st
from hypothesis import given, settings

from toposlab import (Presheaf, Subobject, Topos, builtin, double_negation,
                      pi0)
from toposlab import ltopology as lt

CAT = builtin("delta1")
TOPOS = Topos(CAT)
NN = double_negation(TOPOS)


@st.composite
def reflexive_graphs(draw, max_vertices=3, max_edges=3):
    n = draw(st.integers(1, max_vertices))
    m = draw(st.integers(0, max_edges))
    edges = [(draw(st.integers(0, n - 1)), draw(st.integers(0, n - 1)))
             for _ in range(m)]
    # stage [1]: the n degenerate loops first, then the drawn edges
    d0 = tuple(list(range(n)) + [e[0] for e in edges])
    d1 = tuple(list(range(n)) + [e[1] for e in edges])
    s = tuple(range(n))
    actions = [None] * CAT.morphism_count
    actions[CAT.identity_of[0]] = tuple(range(n))
    actions[CAT.identity_of[1]] = tuple(range(n + m))
    actions[CAT.morphism_index("d0")] = d0
    actions[CAT.morphism_index("d1")] = d1
    actions[CAT.morphism_index("s")] = s
    actions[CAT.morphism_index("d0.s")] = tuple(d0[x] for x in range(n + m))
    actions[CAT.morphism_index("d1.s")] = tuple(d1[x] for x in range(n + m))
    X = Presheaf(CAT, (n, n + m), tuple(actions))
    assert X.validate() == []
    return X


@st.composite
def subgraphs(draw, X):
    verts = sorted({v for v in range(X.stages[0])
                    if draw(st.booleans())})
    vset = set(verts)
    edges = []
    d0 = X.actions[CAT.morphism_index("d0")]
    d1 = X.actions[CAT.morphism_index("d1")]
    s = X.actions[CAT.morphism_index("s")]
    for e in range(X.stages[1]):
        if d0[e] in vset and d1[e] in vset and draw(st.booleans()):
            edges.append(e)
    edges = sorted(set(edges) | {s[v] for v in verts})
    return Subobject(X, (tuple(verts), tuple(edges)))


@given(reflexive_graphs())
@settings(max_examples=60, deadline=None)
def test_pi0_constant_on_orbits(X):
    res = pi0(TOPOS, X)
    for m in range(CAT.morphism_count):
        a, b = CAT.dom(m), CAT.cod(m)
        for x in range(X.stages[b]):
            assert res.assignment[a][X.actions[m][x]] == \
                res.assignment[b][x]
    assert res.p.validate() == []


@given(reflexive_graphs())
@settings(max_examples=40, deadline=None)
def test_points_equal_vertices(X):
    # in reflexive graphs a global point is exactly a vertex
    assert len(TOPOS.global_elements(X)) == X.stages[0]


@given(st.data())
@settings(max_examples=40, deadline=None)
def test_char_pullback_roundtrip(data):
    X = data.draw(reflexive_graphs())
    sub = data.draw(subgraphs(X))
    assert sub.validate() == []
    chi = TOPOS.char(sub)
    assert TOPOS.sub_of_char(chi).selected == sub.selected


@given(st.data())
@settings(max_examples=40, deadline=None)
def test_closure_is_inflationary_idempotent(data):
    X = data.draw(reflexive_graphs())
    sub = data.draw(subgraphs(X))
    cl = lt.closure(TOPOS, sub, NN)
    assert all(set(a) <= set(b) for a, b in zip(sub.selected, cl.selected))
    assert lt.closure(TOPOS, cl, NN).selected == cl.selected


@given(st.data())
@settings(max_examples=25, deadline=None)
def test_transpose_roundtrip(data):
    A = data.draw(reflexive_graphs(max_vertices=2, max_edges=1))
    X = data.draw(reflexive_graphs(max_vertices=2, max_edges=1))
    Y = data.draw(reflexive_graphs(max_vertices=2, max_edges=2))
    prod = TOPOS.product(A, X)
    maps = TOPOS.hom_set(prod.presheaf, Y, cap=2000)
    for f in maps[:5]:
        g = TOPOS.transpose(f, A, X, Y)
        assert TOPOS.untranspose(g, A, X, Y).same_table(f)


@given(reflexive_graphs())
@settings(max_examples=40, deadline=None)
def test_quotient_is_separated_and_epi(X):
    q = lt.quotient(TOPOS, X, NN)
    assert q.q.is_pointwise_surjective()
    assert lt.is_separated(TOPOS, q.presheaf, NN)


@given(reflexive_graphs(max_vertices=2, max_edges=2))
@settings(max_examples=25, deadline=None)
def test_sheafification_is_sheaf(X):
    sh = lt.sheafify(TOPOS, X, NN)
    assert lt.is_sheaf(TOPOS, sh.presheaf, sh.coverage)
    again = lt.sheafify(TOPOS, sh.presheaf, NN)
    assert TOPOS.is_iso(again.unit)
