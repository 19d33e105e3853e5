"""Gluing validation, face classes, covers and isomorphism."""

import pytest
from hypothesis import given, settings, strategies as st

import oracles
from multisect.triangulation import Triangulation, TriangulationError, face_key, parse_face_key
from multisect.zoo import cross_projective, cross_sphere, double_simplex

ID4 = (0, 1, 2, 3)


def doubled_rows(n):
    ident = tuple(range(n + 1))
    return [[(1, ident)] * (n + 1), [(0, ident)] * (n + 1)]


def test_doubled_simplex_valid():
    T = Triangulation(3, doubled_rows(3))
    s = T.summary()
    assert s.facet_count == 2
    assert s.face_counts == (4, 6, 4, 2)
    assert s.euler == 0
    assert s.connected and s.pseudo_manifold and s.orientable


def test_self_slot_gluing_rejected():
    rows = doubled_rows(3)
    rows[0][0] = (0, ID4)
    rows[1][0] = (1, ID4)
    with pytest.raises(TriangulationError):
        Triangulation(3, rows)


def test_broken_involution_rejected():
    rows = doubled_rows(3)
    rows[1][0] = (0, (1, 0, 2, 3))
    with pytest.raises(TriangulationError):
        Triangulation(3, rows)


def test_non_permutation_rejected():
    rows = doubled_rows(3)
    rows[0][0] = (1, (0, 0, 1, 2))
    with pytest.raises(TriangulationError):
        Triangulation(3, rows)


def test_target_out_of_range_rejected():
    rows = doubled_rows(3)
    rows[0][2] = (5, ID4)
    with pytest.raises(TriangulationError):
        Triangulation(3, rows)


def test_incomplete_row_rejected():
    rows = doubled_rows(3)
    rows[0] = rows[0][:3]
    with pytest.raises(TriangulationError):
        Triangulation(3, rows)


@given(st.permutations(list(range(4))))
def test_one_sided_permutation_edit_rejected(perm):
    # Editing one direction of a gluing must break the involution unless
    # the edit is the identity it replaced.
    p = tuple(perm)
    rows = doubled_rows(3)
    rows[0][1] = (1, p)
    if p == ID4:
        Triangulation(3, rows)
        return
    with pytest.raises(TriangulationError):
        Triangulation(3, rows)


def test_face_key_round_trip():
    assert face_key(3, (0, 2)) == "3:0.2"
    assert parse_face_key("3:0.2") == (3, (0, 2))
    with pytest.raises(TriangulationError):
        parse_face_key("3:")


def test_cross_sphere3_face_census():
    T = cross_sphere(3)
    s = T.summary()
    assert s.face_counts == tuple(oracles.orthant_face_counts(3))
    assert s.face_counts == (8, 24, 32, 16)
    assert s.euler == oracles.euler_from_counts(s.face_counts) == 0
    assert s.connected and s.orientable and s.even


def test_cross_sphere3_codim2_degrees():
    T = cross_sphere(3)
    fp = T.face_poset
    degs = sorted(fp.cls_count[c] for c in fp.class_ids_of_dim(1))
    assert degs == sorted(oracles.orthant_codim2_degrees(3))
    assert set(degs) == {4}


def test_cross_sphere3_dual_graph():
    T = cross_sphere(3)
    dg = T.dual_graph()
    assert dg.n_nodes == 16
    assert dg.connected
    deg = [0] * dg.n_nodes
    for a, b in dg.edges:
        deg[a] += 1
        deg[b] += 1
    assert set(deg) == {4}
    adj = oracles.orthant_adjacency(3)
    assert len(dg.edges) == sum(len(v) for v in adj.values()) // 2


def test_euler_alternating_sum_matches_summary():
    for T in (double_simplex(4), cross_sphere(2), cross_projective(3)):
        s = T.summary()
        assert s.euler == oracles.euler_from_counts(s.face_counts)


def test_codim2_links_are_circles():
    T = cross_sphere(3)
    fp = T.face_poset
    for cid in fp.class_ids_of_dim(1):
        lk, _ = T.link(fp.canonical(cid))
        s = lk.summary()
        assert s.dimension == 1
        assert s.facet_count == 4
        assert s.connected
        assert s.euler == 0


def test_vertex_link_in_cross_sphere3_is_octahedron():
    T = cross_sphere(3)
    fp = T.face_poset
    cid = fp.class_ids_of_dim(0)[0]
    lk, _ = T.link(fp.canonical(cid))
    s = lk.summary()
    assert s.face_counts == (6, 12, 8)
    assert s.euler == 2


def test_betti_of_doubled_4_simplex():
    # Independent rank computation over the subset chain complex.
    T = double_simplex(4)
    s = T.summary()
    assert s.face_counts == (5, 10, 10, 5, 2)
    verts = frozenset(range(5))
    from itertools import combinations

    ranks = [0] * 6
    for d in range(1, 4):
        rows = [
            frozenset(frozenset(c) - {v} for v in c)
            for c in combinations(verts, d + 1)
        ]
        ranks[d] = oracles.gf2_rank_sets(rows)
    top = frozenset(frozenset(c) for c in combinations(verts, 4))
    ranks[4] = oracles.gf2_rank_sets([top, top])
    counts = s.face_counts
    expect = tuple(counts[d] - ranks[d] - ranks[d + 1] for d in range(5))
    assert s.betti == expect == (1, 0, 0, 0, 1)


def test_orientation_double_cover_of_even_projective():
    T = cross_projective(4)
    s = T.summary()
    assert not s.orientable
    C = T.orientation_double_cover()
    cs = C.summary()
    assert cs.facet_count == 32
    assert cs.connected
    assert cs.orientable
    assert cs.euler == 2 * s.euler
    assert cs.face_counts == tuple(oracles.orthant_face_counts(4))
    assert C.isomorphic_to(cross_sphere(4))


def test_orientation_double_cover_of_orientable_splits():
    T = cross_projective(3)
    C = T.orientation_double_cover()
    cs = C.summary()
    assert cs.facet_count == 16
    assert not cs.connected
    assert cs.betti[0] == 2
    assert cs.euler == 0


def test_cover_is_always_orientable():
    for T in (cross_projective(2), cross_projective(4), double_simplex(3)):
        assert T.orientation_double_cover().summary().orientable


def shuffle_rows(T, order):
    inv = [0] * len(order)
    for new, old in enumerate(order):
        inv[old] = new
    rows = []
    for old in order:
        rows.append([(inv[t], pi) for t, pi in T.gluings[old]])
    return Triangulation(T.dimension, rows)


@given(st.permutations(list(range(8))))
@settings(max_examples=25)
def test_census_is_input_order_independent(order):
    T = cross_sphere(2)
    S = shuffle_rows(T, list(order))
    a, b = S.summary(), T.summary()
    # The orientation field is a per-facet sign witness, so it moves with
    # the input order; every other field is an invariant.
    for name in ("face_counts", "euler", "connected", "pseudo_manifold",
                 "orientable", "even", "betti"):
        assert getattr(a, name) == getattr(b, name)
    assert S.canonical_form() == T.canonical_form()


def test_isomorphic_to_distinguishes_twisted_double():
    import pathlib

    from multisect.io import load_stream

    here = pathlib.Path(__file__).parent
    twisted, _ = load_stream((here / "fixtures" / "twisted_chain.txt").read_text())
    plain = Triangulation(3, doubled_rows(3))
    assert twisted.facet_count == plain.facet_count == 2
    assert not twisted.summary().orientable
    assert not twisted.isomorphic_to(plain)
    assert twisted.isomorphic_to(twisted)


def test_from_vertex_facets_orthants():
    ids = {}

    def vid(axis, sign):
        return ids.setdefault((axis, sign), len(ids))

    facets = []
    for signs in oracles.orthant_facets(3):
        facets.append([vid(a, s) for a, s in enumerate(signs)])
    T = Triangulation.from_vertex_facets(3, facets)
    s = T.summary()
    assert s.facet_count == 16
    assert s.face_counts == (8, 24, 32, 16)
    assert T.isomorphic_to(cross_sphere(3))


def test_from_vertex_facets_rejects_repeats():
    with pytest.raises(TriangulationError):
        Triangulation.from_vertex_facets(2, [(0, 1, 1), (0, 1, 2)])


def test_from_vertex_facets_rejects_open_boundary():
    with pytest.raises(TriangulationError):
        Triangulation.from_vertex_facets(2, [(0, 1, 2), (0, 1, 3)])


def test_face_poset_class_lookup():
    T = cross_sphere(2)
    fp = T.face_poset
    for cid in range(fp.n_classes):
        f, corners = fp.canonical(cid)
        assert fp.class_of(f, corners) == cid
        assert fp.class_of_key(fp.key(cid)) == cid


def test_incarnation_maps_cover_class_degree():
    T = cross_sphere(3)
    fp = T.face_poset
    for cid in fp.class_ids_of_dim(1):
        maps = fp.incarnation_maps(cid)
        assert len(maps) == fp.cls_count[cid]
        for enc, phi in maps.items():
            assert sorted(phi.values()) == sorted(phi.keys())
