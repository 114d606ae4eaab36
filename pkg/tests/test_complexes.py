import numpy as np
import pytest

import ramcube as rc
from ramcube.complexes import dirs_of, link_dot, mask_of, skeleton_dot
from ramcube.errors import ConstructionError


def test_mask_helpers():
    assert mask_of((1, 3)) == 0b101
    assert dirs_of(0b101) == (1, 3)
    assert dirs_of(0) == ()


def test_unit_square_axioms():
    X = rc.box_complex(2)
    assert X.n_vertices == 4
    counts = X.unoriented_counts()
    assert counts[0] == 4 and counts[0b11] == 1
    assert counts[0b01] + counts[0b10] == 4
    assert rc.verify_axioms(X).passed
    assert rc.verify_parities(X)[0]


def test_injected_inversion_fixed_point_fails_axiom1():
    X = rc.graph_complex(2, [(0, 1)], r=1, parities=[[0], [1]])
    X.tables[1].inv[1] = np.arange(2)  # inv now fixes every oriented edge
    report = rc.verify_axioms(X)
    assert not report.passed
    assert any(f.axiom == 1 for f in report.failures)
    assert report.failures[0].index >= 0


def test_broken_top_count_fails_axiom4():
    X = rc.cycle_complex(4)
    X.tables[1].top[1] = np.zeros(8, dtype=np.int64)
    report = rc.verify_axioms(X)
    assert any(f.axiom == 4 for f in report.failures)


def test_parities_cycles():
    X4 = rc.cycle_complex(4)
    assert rc.verify_parities(X4)[0]
    X3 = rc.cycle_complex(3)
    assert X3.parities is None
    assert rc.infer_parities(X3) is None
    # any assignment on an odd cycle fails
    X3.parities = np.zeros((3, 1), dtype=np.uint8)
    ok, witness = rc.verify_parities(X3)
    assert not ok and witness is not None
    inferred = rc.infer_parities(X4)
    assert inferred is not None
    X4.parities = inferred
    assert rc.verify_parities(X4)[0]


def test_product_counts_and_axioms():
    K4 = rc.complete_graph_complex(4)
    P = rc.product(K4, K4)
    assert P.g == 2 and P.regularities == (3, 3)
    assert P.n_vertices == 16
    assert P.unoriented_counts()[0b11] == 16 * 3 * 3 // 4
    assert rc.verify_axioms(P).passed


def test_product_with_point_is_identity():
    X = rc.cycle_complex(4)
    point = rc.box_complex(0)
    P = rc.product(X, point)
    assert P.g == X.g and P.n_vertices == X.n_vertices
    for mask in X.masks():
        t, tp = X.tables[mask], P.tables[mask]
        assert t.n == tp.n
        for j in dirs_of(mask):
            assert np.array_equal(t.bot[j], tp.bot[j])
            assert np.array_equal(t.top[j], tp.top[j])
            assert np.array_equal(t.inv[j], tp.inv[j])


def test_product_of_bipartite_graphs_has_parities():
    P = rc.product(rc.cycle_complex(4), rc.cycle_complex(6))
    assert P.has_parities
    assert rc.verify_parities(P)[0]
    assert rc.verify_axioms(P).passed


def test_product_associative_as_labeled_complexes():
    A, B, C = rc.cycle_complex(4), rc.cycle_complex(6), rc.box_complex(1)
    left = rc.product(rc.product(A, B), C)
    right = rc.product(A, rc.product(B, C))
    assert left.masks() == right.masks()
    for mask in left.masks():
        for j in dirs_of(mask):
            assert np.array_equal(left.tables[mask].top[j], right.tables[mask].top[j])
            assert np.array_equal(left.tables[mask].bot[j], right.tables[mask].bot[j])
            assert np.array_equal(left.tables[mask].inv[j], right.tables[mask].inv[j])


def test_link_graph_of_graph_is_the_graph_itself():
    X = rc.cycle_complex(4)
    lg = rc.link_graph(X, 1)
    assert lg.n_vertices == 4
    assert len(lg.edge_cubes) == 8
    t = X.tables[1]
    assert np.array_equal(lg.origin, t.bot[1])
    assert np.array_equal(lg.terminus, t.top[1])
    # r-regular: every vertex the terminus of exactly r oriented edges
    assert np.all(np.bincount(lg.terminus, minlength=4) == 2)
    # opposite is a fixed-point-free involution swapping origin/terminus
    assert np.all(lg.opposite[lg.opposite] == np.arange(8))
    assert np.all(lg.opposite != np.arange(8))
    assert np.array_equal(lg.origin[lg.opposite], lg.terminus)


def test_link_graph_counts_on_square_complex(cover513):
    X = cover513
    lg = rc.link_graph(X, 1, (2,))
    # vertices = unoriented direction-2 edges
    assert lg.n_vertices == X.unoriented_counts()[0b10] == 336
    assert np.all(np.bincount(lg.terminus, minlength=lg.n_vertices) == 6)
    lg2 = rc.link_graph(X, 2, (1,))
    assert lg2.n_vertices == X.unoriented_counts()[0b01] == 144
    assert np.all(np.bincount(lg2.terminus, minlength=lg2.n_vertices) == 14)


def test_link_graph_requires_free_direction(cover513):
    with pytest.raises(ConstructionError):
        rc.link_graph(cover513, 1, (1,))


def test_link_graph_requires_parities_on_positive_masks():
    K4 = rc.complete_graph_complex(4)
    P = rc.product(K4, K4)
    with pytest.raises(ConstructionError):
        rc.link_graph(P, 1, (2,))


def test_connected_components():
    one = rc.cycle_complex(3)
    two = rc.disjoint_union(one, one)
    lg = rc.link_graph(two, 1)
    count, labels = rc.connected_components(lg)
    assert count == 2
    assert len(set(labels)) == 2
    count1, _ = rc.connected_components(rc.link_graph(rc.cycle_complex(5), 1))
    assert count1 == 1


def test_vertex_count_formula(lps513, cover513):
    # unoriented I-cube count = vertices * prod r_j / 2^|I| on homogeneous complexes
    for X in (lps513, cover513):
        counts = X.unoriented_counts()
        for mask in X.masks():
            expect = X.n_vertices
            for j in dirs_of(mask):
                expect = expect * X.r(j)
            expect >>= bin(mask).count("1")
            assert counts[mask] == expect


def test_dot_exports(tmp_path):
    K4 = rc.complete_graph_complex(4)
    text = skeleton_dot(K4)
    assert text.count(" -- ") == 6
    assert text.count("label=") == 4
    lg = rc.link_graph(rc.cycle_complex(4), 1)
    ltext = link_dot(lg)
    assert ltext.count(" -- ") == 4
    path = tmp_path / "k4.dot"
    rc.export_dot(K4, path)
    assert path.read_text().startswith("graph")
