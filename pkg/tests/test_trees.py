import pytest

from diopkit import trees
from diopkit.cyclic import IN, OUT, CyclicClass, parse_class
from diopkit.dioperads import read_off
from diopkit.trees import (PlanarTree, Tree, collapse_edge, corolla,
                           enumerate_tree0, planar_corolla, planar_expansions,
                           split_vertex)


def test_corolla_enumeration_base_cases():
    assert len(enumerate_tree0(1, 2)) == 1
    assert len(enumerate_tree0(2, 0)) == 1


def test_enumeration_1_3():
    # corolla plus the three two-vertex binary trees; nothing else fits
    all_trees = enumerate_tree0(1, 3)
    assert corolla(1, 3) in all_trees
    by_count = {}
    for t in all_trees:
        by_count.setdefault(t.num_vertices, []).append(t)
    assert len(by_count[1]) == 1
    assert len(by_count[2]) == 3
    assert sorted(by_count) == [1, 2]


def test_weight_identity_everywhere():
    for m, n in [(1, 3), (2, 1), (2, 2), (3, 0), (1, 4), (3, 1)]:
        for t in enumerate_tree0(m, n):
            assert t.weight_identity_holds()
            assert 1 <= t.num_vertices <= t.n + 2 * t.m - 3


def test_max_expanded_filter():
    for m, n in [(1, 3), (1, 4), (2, 1), (2, 2), (3, 0)]:
        for t in enumerate_tree0(m, n, vertex_filter={(1, 2), (2, 0)}):
            assert t.is_maximally_expanded()
            assert t.num_vertices == n + 2 * m - 3


def test_split_and_collapse_are_inverse():
    for m, n in [(1, 3), (2, 1), (2, 2)]:
        for t in enumerate_tree0(m, n):
            for vidx, (outs, ins) in enumerate(t.verts):
                for up_o, up_i, _, _ in trees.vertex_splits(outs, ins):
                    t2 = split_vertex(t, vidx, up_o, up_i)
                    assert t2.num_vertices == t.num_vertices + 1
                    # collapsing the (unique) new edge restores the tree
                    restored = {collapse_edge(t2, e) for e, _, _ in t2.internal_edges()}
                    assert t in restored


def test_split_corolla_2_1():
    t = corolla(2, 1)
    results = set()
    for up_o, up_i, _, _ in trees.vertex_splits(*t.verts[0]):
        results.add(split_vertex(t, 0, up_o, up_i))
    # upper pairing vertex keeping either root, lower product vertex
    assert len(results) == 2
    for r in results:
        assert sorted(r.vertex_arities()) == [(1, 2), (2, 0)]


def test_split_nu_corolla_has_no_legal_splits():
    t = corolla(2, 0)
    assert list(trees.vertex_splits(*t.verts[0])) == []
    with pytest.raises(ValueError):
        split_vertex(t, 0, (("r", 1),), ())


def test_illegal_split_raises():
    t = corolla(1, 3)
    with pytest.raises(ValueError):
        # upper vertex would be (1,0)
        split_vertex(t, 0, (), ())


def test_canonical_form_is_label_stable():
    # building the same tree with scrambled vertex order and edge ids gives
    # the same canonical object
    a = (("e", "x"),)
    v_up = (a, (("l", 1), ("l", 2)))
    v_low = ((("r", 1),), (("e", "x"), ("l", 3)))
    t1 = Tree([v_up, v_low])
    t2 = Tree([v_low, v_up])
    assert t1 == t2


def test_planar_corolla_and_boundary():
    mu = planar_corolla(parse_class("o1 i1 i2"))
    assert read_off(mu) == parse_class("o1 i1 i2")
    mubar = planar_corolla(parse_class("o1 i2 i1"))
    assert read_off(mubar) == parse_class("o1 i2 i1")
    nu = planar_corolla(parse_class("o1 o2"))
    assert read_off(nu) == parse_class("o1 o2")


def test_planar_expansions_of_small_corollas():
    # (o i i i): the two binary planar trees of the associativity pentagon edge
    k4 = planar_corolla(parse_class("o1 i1 i2 i3"))
    exps = planar_expansions(k4)
    assert len(exps) == 2
    for p in exps:
        assert p.num_vertices == 2
        assert read_off(p) == parse_class("o1 i1 i2 i3")
    # (o o i): the two sides of the invariance relation
    inv = planar_corolla(parse_class("o1 o2 i1"))
    exps = planar_expansions(inv)
    assert len(exps) == 2
    for p in exps:
        assert read_off(p) == parse_class("o1 o2 i1")
    # maximally expanded trees admit no further expansion
    for p in exps:
        assert planar_expansions(p) == []


def test_boundary_preserved_by_expansion():
    for text in ["o1 i1 i2 i3", "o1 o2 i1 i2", "o1 i1 o2 i2", "o1 o2 o3"]:
        seed = planar_corolla(parse_class(text))
        stack = [seed]
        seen = {seed}
        while stack:
            p = stack.pop()
            assert read_off(p) == parse_class(text)
            for q in planar_expansions(p):
                if q not in seen:
                    seen.add(q)
                    stack.append(q)
        dims = {}
        for p in seen:
            dims[p.dimension()] = dims.get(p.dimension(), 0) + 1
        # single top cell, and the euler characteristic of a contractible model
        assert dims[max(dims)] == 1
        chi = sum(((-1) ** d) * c for d, c in dims.items())
        assert chi == 1
