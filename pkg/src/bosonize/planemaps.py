"""Dart-based combinatorial maps on the sphere and the torus.

An edge e owns two darts 2e and 2e+1; ``alpha`` swaps them (xor 1) and dart
2e originates at the first endpoint.  ``sigma`` is the next dart counter-
clockwise around the origin vertex.  Faces are the orbits of
``phi = sigma^{-1} . alpha``; with that convention a face is traced
counterclockwise and lies on the left of each of its darts.

Corners double as medial edges: the corner after dart d (between d and
sigma(d), counterclockwise) carries id d, sits at vertex ``dart_v[d]``
inside face ``face_of[d]``, and becomes medial edge d joining the midpoints
of edge(d) and edge(sigma(d)).  Its reference orientation is the medial dart
2d+1, i.e. it points from mid(edge(sigma d)) to mid(edge d), which puts the
vertex on the right of the arrow: reference arrows run clockwise around
vertices of the base graph and counterclockwise around its faces.

Geometry is optional: positions are complex numbers in the universal cover,
``dvec[d]`` is the displacement of dart d, and torus periods are (n, m*1j).
All builder coordinates are dyadic rationals so float arithmetic stays exact.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .exactnum import parse_scalar, scalar_to_json


class CMap:
    def __init__(self, surface, rot, dvec=None, vpos=None, periods=None):
        self.surface = surface  # "plane" | "torus"
        self.rot = [list(c) for c in rot]
        nd = sum(len(c) for c in self.rot)
        if nd % 2:
            raise ValueError("odd number of darts")
        self.dart_v = [0] * nd
        for v, cyc in enumerate(self.rot):
            for d in cyc:
                self.dart_v[d] = v
        self.sigma = [0] * nd
        self.sigma_inv = [0] * nd
        for cyc in self.rot:
            k = len(cyc)
            for i, d in enumerate(cyc):
                self.sigma[d] = cyc[(i + 1) % k]
                self.sigma_inv[d] = cyc[(i - 1) % k]
        self.dvec = list(dvec) if dvec is not None else [None] * nd
        self.vpos = list(vpos) if vpos is not None else [None] * len(self.rot)
        self.periods = periods
        self._faces = None
        self._face_of = None

    # -- basics -------------------------------------------------------------

    @property
    def nv(self):
        return len(self.rot)

    @property
    def nd(self):
        return len(self.dart_v)

    @property
    def ne(self):
        return self.nd // 2

    @staticmethod
    def alpha(d):
        return d ^ 1

    def edge_ends(self, e):
        return self.dart_v[2 * e], self.dart_v[2 * e + 1]

    def degree(self, v):
        return len(self.rot[v])

    def phi(self, d):
        """Next dart of the face on the left of d (ccw traversal)."""
        return self.sigma_inv[d ^ 1]

    # -- faces ----------------------------------------------------------------

    def faces(self):
        if self._faces is None:
            seen = [False] * self.nd
            out = []
            for d0 in range(self.nd):
                if seen[d0]:
                    continue
                orbit = []
                d = d0
                while not seen[d]:
                    seen[d] = True
                    orbit.append(d)
                    d = self.phi(d)
                out.append(orbit)
            self._faces = out
            self._face_of = [0] * self.nd
            for i, orb in enumerate(out):
                for d in orb:
                    self._face_of[d] = i
        return self._faces

    @property
    def face_of(self):
        self.faces()
        return self._face_of

    @property
    def nf(self):
        return len(self.faces())

    def euler(self):
        return self.nv - self.ne + self.nf

    def check_surface(self):
        want = 2 if self.surface == "plane" else 0
        if self.euler() != want:
            raise ValueError(
                f"euler characteristic {self.euler()} does not match "
                f"{self.surface}")

    def validate(self):
        assert sorted(d for c in self.rot for d in c) == list(range(self.nd))
        for v, cyc in enumerate(self.rot):
            for d in cyc:
                assert self.dart_v[d] == v
        for d in range(self.nd):
            assert self.sigma_inv[self.sigma[d]] == d
            if self.dvec[d] is not None and self.dvec[d ^ 1] is not None:
                assert self.dvec[d] == -self.dvec[d ^ 1]
        assert sum(len(f) for f in self.faces()) == self.nd
        self.check_surface()

    # -- geometry -------------------------------------------------------------

    def edge_mid(self, e):
        p = self.vpos[self.dart_v[2 * e]]
        v = self.dvec[2 * e]
        if p is None or v is None:
            return None
        return p + v / 2

    def face_pos(self, f=None):
        """Centroid-ish anchors for faces (mean of corner vertex positions)."""
        out = []
        for orb in self.faces():
            pts = [self.vpos[self.dart_v[d]] for d in orb]
            if any(p is None for p in pts):
                out.append(None)
            else:
                out.append(sum(pts) / len(pts))
        if f is not None:
            return out[f]
        return out

    # -- derived maps -----------------------------------------------------------

    def dual(self, face_pos=None):
        """Dual map on the same dart set: dual dart d starts at face_of[d]."""
        self.faces()
        rot = [list(orb) for orb in self._faces]
        dvec = [None] * self.nd
        if face_pos is not None:
            for d in range(self.nd):
                a, b = face_pos[self._face_of[d]], face_pos[self._face_of[d ^ 1]]
                dvec[d] = None if a is None or b is None else b - a
        return CMap(self.surface, rot, dvec=dvec, vpos=face_pos or
                    [None] * self.nf, periods=self.periods)

    def medial(self):
        """Medial map plus corner metadata.

        Medial vertex e = midpoint of edge e; medial edge c = corner c
        (id = primal dart id), with medial darts 2c (at mid edge(c)) and
        2c+1 (at mid edge(sigma c)).  Returns a Medial object.
        """
        self.faces()
        rot = []
        for e in range(self.ne):
            d0, d1 = 2 * e, 2 * e + 1
            rot.append([2 * self.sigma_inv[d1] + 1, 2 * d0,
                        2 * self.sigma_inv[d0] + 1, 2 * d1])
        dvec = [None] * (2 * self.nd)
        for c in range(self.nd):
            a, b = self.dvec[c], self.dvec[self.sigma[c]]
            if a is not None and b is not None:
                dvec[2 * c] = (b - a) / 2
                dvec[2 * c + 1] = (a - b) / 2
        vpos = [self.edge_mid(e) for e in range(self.ne)]
        m = CMap(self.surface, rot, dvec=dvec, vpos=vpos, periods=self.periods)
        return Medial(self, m)

    # -- surgery ------------------------------------------------------------------

    def delete_edges(self, edges):
        """Remove edges; returns (map, edge_map old->new)."""
        dead = set(edges)
        rot = [[d for d in cyc if d // 2 not in dead] for cyc in self.rot]
        return self._rebuild(rot)

    def contract_edges(self, edges):
        """Contract a forest of edges (no loops); merged vertex keeps the
        lowest index and a None position.  Returns (map, edge_map, vertex_map).
        """
        rot = {v: list(c) for v, c in enumerate(self.rot)}
        vert = list(self.dart_v)
        merged_into = list(range(self.nv))
        for e in sorted(edges):
            d0, d1 = 2 * e, 2 * e + 1
            u, v = vert[d0], vert[d1]
            if u == v:
                raise ValueError(f"edge {e} became a loop; cannot contract")
            if v < u:
                u, v, d0, d1 = v, u, d1, d0
            lu, lv = rot[u], rot[v]
            i, j = lu.index(d0), lv.index(d1)
            merged = lu[:i] + lv[j + 1:] + lv[:j] + lu[i + 1:]
            rot[u] = merged
            for d in lv:
                vert[d] = u
            vert[d0] = vert[d1] = u
            del rot[v]
            merged_into[v] = u
        # resolve chains in merged_into
        def root(v):
            while merged_into[v] != v:
                v = merged_into[v]
            return v

        keys = sorted(rot)
        vmap = {}
        for v in range(self.nv):
            vmap[v] = keys.index(root(v))
        dead = set(edges)
        new_rot = [[d for d in rot[k] if d // 2 not in dead] for k in keys]
        m, emap = self._rebuild_from(new_rot, keys)
        return m, emap, vmap

    def _rebuild(self, rot_lists):
        m, emap = self._rebuild_from(rot_lists, list(range(len(rot_lists))))
        return m, emap

    def _rebuild_from(self, rot_lists, old_vertex_ids):
        alive = sorted({d // 2 for cyc in rot_lists for d in cyc})
        emap = {e: i for i, e in enumerate(alive)}
        dmap = {}
        for e, ne_ in emap.items():
            dmap[2 * e] = 2 * ne_
            dmap[2 * e + 1] = 2 * ne_ + 1
        rot = [[dmap[d] for d in cyc] for cyc in rot_lists]
        dvec = [None] * (2 * len(alive))
        for e, ne_ in emap.items():
            dvec[2 * ne_] = self.dvec[2 * e]
            dvec[2 * ne_ + 1] = self.dvec[2 * e + 1]
        vpos = [self.vpos[v] if v < len(self.vpos) else None
                for v in old_vertex_ids]
        m = CMap(self.surface, rot, dvec=dvec, vpos=vpos, periods=self.periods)
        return m, emap

    # -- serialization -----------------------------------------------------------

    def to_json(self, weights=None):
        def c2j(z):
            return None if z is None else [z.real, z.imag]

        doc = {
            "surface": self.surface,
            "vertices": [{"pos": c2j(p)} for p in self.vpos],
            "edges": [{"ends": list(self.edge_ends(e)),
                       "vec": c2j(self.dvec[2 * e])} for e in range(self.ne)],
            "rotations": [[[d // 2, d & 1] for d in cyc] for cyc in self.rot],
        }
        if self.periods is not None:
            doc["periods"] = [c2j(self.periods[0]), c2j(self.periods[1])]
        if weights is not None:
            doc["weights"] = [scalar_to_json(weights[e])
                              for e in range(self.ne)]
        return doc

    @staticmethod
    def from_json(doc):
        def j2c(x):
            return None if x is None else complex(x[0], x[1])

        rot = [[2 * e + s for e, s in cyc] for cyc in doc["rotations"]]
        ne = len(doc["edges"])
        dvec = [None] * (2 * ne)
        for e, ed in enumerate(doc["edges"]):
            v = j2c(ed.get("vec"))
            if v is not None:
                dvec[2 * e], dvec[2 * e + 1] = v, -v
        vpos = [j2c(v.get("pos")) for v in doc["vertices"]]
        periods = None
        if doc.get("periods") is not None:
            periods = (j2c(doc["periods"][0]), j2c(doc["periods"][1]))
        m = CMap(doc["surface"], rot, dvec=dvec, vpos=vpos, periods=periods)
        # sanity: edge ends stored in the file must match the rotations
        for e, ed in enumerate(doc["edges"]):
            if list(m.edge_ends(e)) != ed["ends"]:
                raise ValueError(f"edge {e} ends disagree with rotations")
        weights = None
        if "weights" in doc:
            weights = [parse_scalar(w) for w in doc["weights"]]
        return m, weights


class Medial:
    """Medial map of a base map, with corner bookkeeping.

    corner c (= medial edge c = base dart c): at base vertex ``vertex[c]``,
    inside base face ``face[c]``; its medial endpoints are mid(edge(c))
    (medial dart 2c) and mid(edge(sigma c)) (medial dart 2c+1).  The
    reference orientation is dart 2c+1.
    """

    def __init__(self, base, m):
        self.base = base
        self.map = m
        self.vertex = list(base.dart_v)
        self.face = list(base.face_of)

    @property
    def ncorners(self):
        return self.base.nd

    def city(self, e):
        """Corners (c1, c2, c3, c4) around medial vertex e.

        c1=(v,f) c2=(v',f) c3=(v',f') c4=(v,f') where v = tail of base dart
        2e, f = face on its left.  Cyclic order around the midpoint is
        c2, c1, c4, c3 (counterclockwise).
        """
        d0, d1 = 2 * e, 2 * e + 1
        si = self.base.sigma_inv
        return d0, si[d1], d1, si[d0]

    def ref_tail_is(self, c, e):
        """True if medial vertex e is the tail of corner c's reference arrow."""
        return self.base.sigma[c] // 2 == e


# -- builders ------------------------------------------------------------------


def square_torus(n, m):
    """n x m square torus; vertex (i,j) at i+j*1j, h-edges then v-edges."""
    if n < 1 or m < 1:
        raise ValueError("need n, m >= 1")
    nv = n * m

    def vid(i, j):
        return (i % n) + n * (j % m)

    def h(i, j):
        return (i % n) + n * (j % m)

    def v(i, j):
        return nv + (i % n) + n * (j % m)

    rot = [None] * nv
    dvec = [None] * (4 * nv)
    for j in range(m):
        for i in range(n):
            e_east, e_north = h(i, j), v(i, j)
            e_west, e_south = h(i - 1, j), v(i, j - 1)
            rot[vid(i, j)] = [2 * e_east, 2 * e_north,
                              2 * e_west + 1, 2 * e_south + 1]
            dvec[2 * e_east] = 1 + 0j
            dvec[2 * e_east + 1] = -1 + 0j
            dvec[2 * e_north] = 1j
            dvec[2 * e_north + 1] = -1j
    vpos = [complex(i, j) for j in range(m) for i in range(n)]
    mp = CMap("torus", rot, dvec=dvec, vpos=vpos, periods=(n + 0j, m * 1j))
    mp.check_surface()
    return mp


def triangular_torus(n, m):
    """Triangular torus in sheared coordinates: edges E, N and NE diagonal."""
    if n < 1 or m < 1:
        raise ValueError("need n, m >= 1")
    nv = n * m

    def vid(i, j):
        return (i % n) + n * (j % m)

    def h(i, j):
        return (i % n) + n * (j % m)

    def v(i, j):
        return nv + (i % n) + n * (j % m)

    def g(i, j):
        return 2 * nv + (i % n) + n * (j % m)

    rot = [None] * nv
    dvec = [None] * (6 * nv)
    for j in range(m):
        for i in range(n):
            rot[vid(i, j)] = [2 * h(i, j), 2 * g(i, j), 2 * v(i, j),
                              2 * h(i - 1, j) + 1, 2 * g(i - 1, j - 1) + 1,
                              2 * v(i, j - 1) + 1]
            dvec[2 * h(i, j)] = 1 + 0j
            dvec[2 * h(i, j) + 1] = -1 + 0j
            dvec[2 * v(i, j)] = 1j
            dvec[2 * v(i, j) + 1] = -1j
            dvec[2 * g(i, j)] = 1 + 1j
            dvec[2 * g(i, j) + 1] = -1 - 1j
    vpos = [complex(i, j) for j in range(m) for i in range(n)]
    mp = CMap("torus", rot, dvec=dvec, vpos=vpos, periods=(n + 0j, m * 1j))
    mp.check_surface()
    return mp


def honeycomb_torus(n, m):
    """Honeycomb torus as the dual of the triangular torus (positions none)."""
    tri = triangular_torus(n, m)
    hc = tri.dual()
    hc.check_surface()
    return hc


def square_grid(p, q):
    """Planar p x q grid graph (p, q >= 2 vertices per side), outer face last."""
    if p < 2 or q < 2:
        raise ValueError("need p, q >= 2")
    nv = p * q

    def vid(i, j):
        return i + p * j

    nh = (p - 1) * q

    def h(i, j):
        return i + (p - 1) * j

    def v(i, j):
        return nh + i + p * j

    rot = [None] * nv
    ne = nh + p * (q - 1)
    dvec = [None] * (2 * ne)
    for j in range(q):
        for i in range(p):
            cyc = []
            if i < p - 1:
                cyc.append(2 * h(i, j))
                dvec[2 * h(i, j)] = 1 + 0j
                dvec[2 * h(i, j) + 1] = -1 + 0j
            if j < q - 1:
                cyc.append(2 * v(i, j))
                dvec[2 * v(i, j)] = 1j
                dvec[2 * v(i, j) + 1] = -1j
            if i > 0:
                cyc.append(2 * h(i - 1, j) + 1)
            if j > 0:
                cyc.append(2 * v(i, j - 1) + 1)
            rot[vid(i, j)] = cyc
    vpos = [complex(i, j) for j in range(q) for i in range(p)]
    mp = CMap("plane", rot, dvec=dvec, vpos=vpos)
    mp.check_surface()
    return mp


# -- torus homology helpers -----------------------------------------------------

#: seams sit just left of / below the origin so no lattice feature lies on them
SEAM = -1.0 / 16.0


def seam_crossings(pos, vec, periods):
    """Signed crossing counts (a, b) of the segment pos -> pos+vec with the
    vertical seam x = SEAM (mod n) and horizontal seam y = SEAM (mod m)."""
    import math
    n, m = periods[0].real, periods[1].imag
    ca = math.floor((pos.real + vec.real - SEAM) / n) - \
        math.floor((pos.real - SEAM) / n)
    cb = math.floor((pos.imag + vec.imag - SEAM) / m) - \
        math.floor((pos.imag - SEAM) / m)
    return ca, cb


def dart_crossings(mp):
    """Per-dart seam crossing counts for a torus map with full geometry."""
    out = []
    for d in range(mp.nd):
        p = mp.vpos[mp.dart_v[d]]
        v = mp.dvec[d]
        if p is None or v is None:
            raise ValueError("crossing counts need full geometry")
        out.append(seam_crossings(p, v, mp.periods))
    return out


def face_rel_centroid(mp, d0):
    """Centroid of the face left of d0, relative to d0's origin vertex,
    computed in the universal cover (wrap-around faces come out anchored)."""
    pts, p, d = [], 0j, d0
    while True:
        pts.append(p)
        p = p + mp.dvec[d]
        d = mp.phi(d)
        if d == d0:
            break
    return sum(pts) / len(pts)


def face_anchor(mp, f):
    """Anchored centroid of face f (true center for square-torus cells)."""
    d0 = mp.faces()[f][0]
    return mp.vpos[mp.dart_v[d0]] + face_rel_centroid(mp, d0)


def dual_dart_geometry(mp, d):
    """(tail, vec) of the dual dart of d: from the centroid of the face on
    d's left to the centroid of the face on its right, both anchored in the
    chart of d so torus seam crossings come out right."""
    tail = mp.vpos[mp.dart_v[d]] + face_rel_centroid(mp, d)
    head = mp.vpos[mp.dart_v[d]] + mp.dvec[d] + face_rel_centroid(mp, d ^ 1)
    return tail, head - tail
