from __future__ import annotations

import itertools

import pytest
from hypothesis import given, strategies as st

from altnu.boxcomplex import box_complex
from altnu.complex import (ComplexError, SimplicialComplex, betti_gf2, find_isomorphism,
                           is_isomorphism, is_shedding, is_vertex_decomposable,
                           replay_certificate, trim)
from altnu.paths import shape_from, uniform_path


def brute_euler_rank(cx: SimplicialComplex) -> list[int]:
    """Betti numbers over Q via sympy ranks of the boundary matrices."""
    import sympy

    faces = cx.faces()
    by_dim: dict[int, list] = {}
    for F in faces:
        if F:
            by_dim.setdefault(len(F) - 1, []).append(tuple(sorted(F)))
    top = max(by_dim, default=-1)
    ranks = {}
    for d in range(1, top + 1):
        rows, cols = by_dim[d - 1], by_dim[d]
        idx = {f: i for i, f in enumerate(rows)}
        m = sympy.zeros(len(rows), len(cols))
        for j, f in enumerate(cols):
            for k in range(len(f)):
                m[idx[f[:k] + f[k + 1:]], j] = (-1) ** k
        ranks[d] = m.rank()
    return [len(by_dim[d]) - ranks.get(d, 0) - ranks.get(d + 1, 0) for d in range(top + 1)]


def test_simplex_f_vector():
    assert SimplicialComplex.simplex("abc").f_vector() == [3, 3, 1]


def test_facets_form_an_antichain():
    cx = SimplicialComplex([[1, 2], [1], [2, 3]])
    assert sorted(map(sorted, cx.facets)) == [[1, 2], [2, 3]]


def test_point_euler():
    pt = SimplicialComplex([["v"]])
    assert pt.euler() == 1 and pt.euler_reduced() == 0


def test_tamari_and_dyck_complexes():
    tam = box_complex(shape_from(uniform_path(1, 4), (1, 1, 1, 1)))
    dyck = box_complex(shape_from(uniform_path(1, 4), (0, 0, 0, 0)))
    assert tam.f_vector() == [6, 6, 1] == dyck.f_vector()
    assert tam.euler() == 1 == dyck.euler()
    assert trim(betti_gf2(dyck)) == [2, 1]


def test_link_and_deletion():
    circle = SimplicialComplex([[1, 2], [2, 3], [1, 3]])
    assert sorted(map(sorted, circle.link([1]).facets)) == [[2], [3]]
    tri = SimplicialComplex.simplex([1, 2, 3])
    assert sorted(map(sorted, tri.deletion([1]).facets)) == [[2, 3]]
    with pytest.raises(ComplexError):
        circle.link([1, 2, 3])


def test_join_of_edges():
    a = SimplicialComplex([[1, 2]])
    b = SimplicialComplex([[3, 4]])
    assert a.join(b) == SimplicialComplex.simplex([1, 2, 3, 4])


def test_circle_betti():
    circle = SimplicialComplex([[1, 2], [2, 3], [1, 3]])
    assert trim(betti_gf2(circle)) == [1, 1]
    assert trim(betti_gf2(circle, rational=True)) == [1, 1]


def test_projective_plane_torsion():
    # six-vertex RP^2: GF(2) sees H_1 and H_2, Q does not
    rp2 = SimplicialComplex([[1, 2, 4], [2, 3, 4], [3, 1, 5], [1, 4, 5], [4, 3, 6],
                             [4, 5, 6], [5, 2, 6], [2, 1, 6], [1, 3, 6], [3, 2, 5]])
    assert trim(betti_gf2(rp2)) == [1, 1, 1]
    assert trim(betti_gf2(rp2, rational=True)) == [1]


def test_vertex_decomposable_small():
    ok, cert = is_vertex_decomposable(SimplicialComplex.simplex("abc"))
    assert ok and cert.vertex is None
    ok, cert = is_vertex_decomposable(SimplicialComplex([["a"], ["b"]]))
    assert ok and replay_certificate(cert)
    # two triangles glued at a vertex are not vertex decomposable (not even shellable)
    bowtie = SimplicialComplex([[1, 2, 3], [3, 4, 5]])
    ok, _ = is_vertex_decomposable(bowtie)
    assert not ok


def test_shedding_vertex():
    cx = SimplicialComplex([[1, 2], [2, 3]])
    assert is_shedding(cx.facets, 1)
    assert not is_shedding(cx.facets, 2)


def test_isomorphism_search():
    a = SimplicialComplex([[1, 2], [2, 3]])
    b = SimplicialComplex([["x", "y"], ["y", "z"]])
    m = find_isomorphism(a, b)
    assert m is not None and m[2] == "y" and is_isomorphism(a, b, m)
    assert find_isomorphism(a, SimplicialComplex([["x", "y", "z"]])) is None


def test_text_roundtrip():
    cx = SimplicialComplex([[1, 2], [2, 3], [4]])
    back = SimplicialComplex.from_text(cx.to_text())
    assert back == cx.relabel({v: i for i, v in enumerate(cx.ground_set)})
    assert SimplicialComplex.from_json(cx.to_json()) == cx


small_complexes = st.lists(st.frozensets(st.integers(0, 5), min_size=1, max_size=4),
                           min_size=1, max_size=6).map(SimplicialComplex)


@given(small_complexes)
def test_euler_from_betti(cx):
    b = betti_gf2(cx)
    assert sum((-1) ** i * x for i, x in enumerate(b)) == cx.euler()
    assert trim(betti_gf2(cx, rational=True)) == trim(brute_euler_rank(cx))


@given(small_complexes, st.integers(0, 5))
def test_link_deletion_antichain(cx, v):
    if v not in cx.vertices:
        return
    for sub in (cx.link([v]), cx.deletion([v])):
        fs = list(sub.facets)
        assert not any(a < b for a, b in itertools.permutations(fs, 2))


@given(small_complexes)
def test_vd_certificates_replay(cx):
    ok, cert = is_vertex_decomposable(cx)
    if ok:
        assert replay_certificate(cert, cx)
