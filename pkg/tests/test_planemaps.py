import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bosonize.planemaps import (CMap, dart_crossings, honeycomb_torus,
                                square_grid, square_torus, triangular_torus)


def triangle_map():
    # one triangle drawn in the plane: vertices 0,1,2 ccw at (0,0),(1,0),(0,1)
    # edges 0:(0-1) 1:(1-2) 2:(2-0)
    rot = [[2 * 0, 2 * 2 + 1], [2 * 1, 2 * 0 + 1], [2 * 2, 2 * 1 + 1]]
    dvec = [1 + 0j, -1 + 0j, -1 + 1j, 1 - 1j, -1j, 1j]
    vpos = [0j, 1 + 0j, 1j]
    return CMap("plane", rot, dvec=dvec, vpos=vpos)


def test_triangle_faces_ccw_inner_face_on_left():
    m = triangle_map()
    m.validate()
    faces = m.faces()
    assert len(faces) == 2
    # the inner (ccw) face is the orbit traversing darts 0 -> 2 -> 4
    inner = [f for f in faces if set(f) == {0, 2, 4}]
    assert inner, f"faces were {faces}"
    # the inner face orbit visits darts in ccw order
    assert inner[0] == [0, 2, 4] or inner[0] in ([2, 4, 0], [4, 0, 2])


def test_triangle_euler():
    m = triangle_map()
    assert m.nv == 3 and m.ne == 3 and m.nf == 2
    assert m.euler() == 2


@pytest.mark.parametrize("n,m", [(1, 1), (2, 1), (1, 2), (2, 2), (3, 2), (3, 3)])
def test_square_torus_counts(n, m):
    t = square_torus(n, m)
    t.validate()
    assert t.nv == n * m
    assert t.ne == 2 * n * m
    assert t.nf == n * m
    assert t.euler() == 0
    assert all(t.degree(v) == 4 for v in range(t.nv))
    assert all(len(f) == 4 for f in t.faces())


def test_square_torus_face_anchor():
    t = square_torus(3, 3)
    # face on the left of the east dart at (0,0) is the cell centered (.5,.5)
    f = t.face_of[0]
    pts = [t.vpos[t.dart_v[d]] for d in t.faces()[f]]
    assert sum(pts) / 4 == complex(0.5, 0.5)


@pytest.mark.parametrize("n,m", [(2, 2), (3, 2), (3, 3)])
def test_triangular_torus_counts(n, m):
    t = triangular_torus(n, m)
    t.validate()
    assert t.nv == n * m and t.ne == 3 * n * m and t.nf == 2 * n * m
    assert all(t.degree(v) == 6 for v in range(t.nv))
    assert all(len(f) == 3 for f in t.faces())


@pytest.mark.parametrize("n,m", [(2, 2), (3, 2)])
def test_honeycomb_torus(n, m):
    h = honeycomb_torus(n, m)
    h.validate()
    assert h.nv == 2 * n * m and h.ne == 3 * n * m and h.nf == n * m
    assert all(h.degree(v) == 3 for v in range(h.nv))


@pytest.mark.parametrize("p,q", [(2, 2), (3, 2), (4, 3)])
def test_square_grid(p, q):
    g = square_grid(p, q)
    g.validate()
    assert g.nv == p * q
    assert g.nf == (p - 1) * (q - 1) + 1
    assert g.euler() == 2


def test_dual_swaps_vertices_and_faces():
    t = square_torus(3, 2)
    d = t.dual(face_pos=t.face_pos())
    d.validate()
    assert d.nv == t.nf and d.nf == t.nv and d.ne == t.ne
    dd = d.dual()
    dd.validate()
    assert dd.nv == t.nv and dd.nf == t.nf
    # grid dual: every dual vertex has degree 4 again
    assert all(d.degree(v) == 4 for v in range(d.nv))


def test_dual_of_triangular_is_honeycomb():
    t = triangular_torus(3, 3)
    d = t.dual()
    assert sorted(d.degree(v) for v in range(d.nv)) == [3] * (2 * 9)
    assert sorted(len(f) for f in d.faces()) == [6] * 9


def test_medial_of_square_torus():
    t = square_torus(3, 3)
    med = t.medial()
    m = med.map
    m.validate()
    assert m.nv == t.ne
    assert m.ne == 2 * t.ne
    assert all(m.degree(v) == 4 for v in range(m.nv))
    # medial faces split into vertex-faces and face-faces
    assert m.nf == t.nv + t.nf
    assert sorted(len(f) for f in m.faces()) == [4] * (t.nv + t.nf)


def test_medial_of_triangular_is_kagome():
    t = triangular_torus(3, 3)
    m = t.medial().map
    m.validate()
    assert all(m.degree(v) == 4 for v in range(m.nv))
    # kagome faces: triangles (two per site) and hexagons (one per site)
    assert sorted(len(f) for f in m.faces()) == [3] * 18 + [6] * 9


def test_medial_corner_metadata_square():
    t = square_torus(3, 3)
    med = t.medial()
    # each corner sits at one vertex and in one face; counts match degrees
    per_vertex = [0] * t.nv
    per_face = [0] * t.nf
    for c in range(med.ncorners):
        per_vertex[med.vertex[c]] += 1
        per_face[med.face[c]] += 1
    assert per_vertex == [t.degree(v) for v in range(t.nv)]
    assert per_face == [len(f) for f in t.faces()]


def test_medial_city_structure():
    t = square_torus(3, 3)
    med = t.medial()
    for e in range(t.ne):
        c1, c2, c3, c4 = med.city(e)
        v, vp = t.dart_v[2 * e], t.dart_v[2 * e + 1]
        f, fp = t.face_of[2 * e], t.face_of[2 * e + 1]
        assert (med.vertex[c1], med.face[c1]) == (v, f)
        assert (med.vertex[c2], med.face[c2]) == (vp, f)
        assert (med.vertex[c3], med.face[c3]) == (vp, fp)
        assert (med.vertex[c4], med.face[c4]) == (v, fp)
        # reference arrows alternate in/out around the midpoint
        tails = [med.ref_tail_is(c, e) for c in (c2, c1, c4, c3)]
        assert tails in ([True, False, True, False],
                         [False, True, False, True])


def test_medial_reference_arrow_clockwise_around_vertex():
    # at vertex v the reference arrows of its corners circulate clockwise:
    # cross(arrow, v - mid) > 0 for every corner
    t = square_torus(3, 3)
    med = t.medial()
    m = med.map
    for c in range(med.ncorners):
        tail = m.vpos[m.dart_v[2 * c + 1]]
        vec = m.dvec[2 * c + 1]
        v = t.vpos[med.vertex[c]]
        mid = tail + vec / 2
        # v must lie on the right of the arrow: cross(vec, v-mid) < 0
        rel = v - mid
        # on the torus compare within one cell: wrap rel to [-n/2, n/2)
        n, mm = t.periods[0].real, t.periods[1].imag
        rx = (rel.real + n / 2) % n - n / 2
        ry = (rel.imag + mm / 2) % mm - mm / 2
        cross = vec.real * ry - vec.imag * rx
        assert cross < 0


def test_contract_edge_path():
    g = square_grid(3, 3)
    # contract the bottom edge path (0-1), (1-2)
    m, emap, vmap = g.contract_edges([0, 1])
    m.validate()
    assert m.nv == g.nv - 2
    assert m.ne == g.ne - 2
    assert m.surface == "plane"
    assert m.euler() == 2
    # the merged vertex has the union of the outside darts
    merged = vmap[0]
    assert vmap[1] == merged and vmap[2] == merged
    assert m.degree(merged) == 3  # three vertical spokes survive


def test_delete_edges():
    g = square_grid(3, 3)
    m, emap = g.delete_edges([0])
    m.validate()
    assert m.ne == g.ne - 1
    assert m.nf == g.nf - 1  # bottom-left cell merges into outer face


def test_json_roundtrip():
    t = square_torus(2, 3)
    from fractions import Fraction
    w = [Fraction(k + 1, 7) for k in range(t.ne)]
    doc = t.to_json(weights=w)
    import json
    doc = json.loads(json.dumps(doc))
    m, w2 = CMap.from_json(doc)
    m.validate()
    assert w2 == w
    assert m.nv == t.nv and m.ne == t.ne
    assert m.rot == t.rot
    assert m.vpos == t.vpos and m.dvec == t.dvec
    assert m.periods == t.periods


def test_seam_crossings_square_torus():
    t = square_torus(3, 2)
    cr = dart_crossings(t)
    # total homology of each face boundary is zero
    for orb in t.faces():
        assert sum(cr[d][0] for d in orb) == 0
        assert sum(cr[d][1] for d in orb) == 0
    # a straight horizontal cycle crosses seam A exactly once
    ca = sum(cr[2 * e][0] for e in [0, 1, 2])  # h(0,0), h(1,0), h(2,0)
    assert abs(ca) == 1
    # antisymmetry
    for d in range(t.nd):
        assert cr[d][0] == -cr[d ^ 1][0] and cr[d][1] == -cr[d ^ 1][1]


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 4), st.integers(1, 4))
def test_property_square_torus_invariants(n, m):
    t = square_torus(n, m)
    t.validate()
    assert t.euler() == 0
    med = t.medial().map
    assert med.nv == t.ne and med.nf == t.nv + t.nf
    assert med.euler() == 0


@settings(max_examples=15, deadline=None)
@given(st.integers(2, 4), st.integers(2, 4))
def test_property_grid_medial_euler(p, q):
    g = square_grid(p, q)
    med = g.medial().map
    med.validate()
    assert med.euler() == 2
    # 4-regular except nothing: medial of a planar map is always 4-regular
    assert all(med.degree(v) == 4 for v in range(med.nv))
