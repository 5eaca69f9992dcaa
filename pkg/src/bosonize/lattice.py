"""Square-lattice torus pairs and geometric line constructions.

The dual of the n x m square torus is the same torus shifted by (1/2, 1/2);
primal edge e and dual edge e-dagger cross at their common midpoint.  All
disorder/order line bookkeeping (which endpoint is on the left of a crossing)
is done with exact dyadic coordinates.
"""

from __future__ import annotations

from fractions import Fraction

from .ising import dual_path as _dual_path
from .ising import dual_adjacency, flip_marks
from .planemaps import CMap, face_anchor, seam_crossings, square_torus
from .vertexmodels import (Marks, corner_mid, dual_spin_pair_obs,
                           spin_pair_obs)


def square_torus_pair(n, m):
    """(primal, dual, emap) with emap[e] = the dual edge crossing e."""
    g = square_torus(n, m)
    gd = square_torus(n, m)
    for v in range(gd.nv):
        gd.vpos[v] += complex(0.5, 0.5)
    nv = n * m

    def h(i, j):
        return (i % n) + n * (j % m)

    def v(i, j):
        return nv + (i % n) + n * (j % m)

    emap = {}
    for j in range(m):
        for i in range(n):
            emap[h(i, j)] = v(i, j - 1)
            emap[v(i, j)] = h(i - 1, j)
    return g, gd, emap


def wrap(z, mp):
    if mp.surface != "torus":
        return z
    n, m = mp.periods[0].real, mp.periods[1].imag
    return complex(z.real % n, z.imag % m)


def short_rel(z, mp):
    """Representative of z with coordinates in [-n/2, n/2) x [-m/2, m/2)."""
    if mp.surface != "torus":
        return z
    n, m = mp.periods[0].real, mp.periods[1].imag
    return complex((z.real + n / 2) % n - n / 2,
                   (z.imag + m / 2) % m - m / 2)


def face_vertex_map(g, gd):
    """Face of g -> vertex of gd sitting at its anchor (same point mod periods)."""
    pos = {wrap(gd.vpos[v], gd): v for v in range(gd.nv)}
    out = {}
    for f in range(g.nf):
        p = wrap(face_anchor(g, f), g)
        out[f] = pos[(p)]
    return out


def dual_path_faces(mp, f_from, f_to):
    """Canonical dual path as (faces, crossed edges)."""
    adj = dual_adjacency(mp)
    for f in adj:
        adj[f].sort(key=lambda t: t[1])
    prev = {f_from: None}
    frontier = [f_from]
    while frontier and f_to not in prev:
        nxt = []
        for f in frontier:
            for g2, e in adj[f]:
                if g2 not in prev:
                    prev[g2] = (f, e)
                    nxt.append(g2)
        frontier = nxt
    if f_to not in prev:
        raise ValueError("faces not connected inside the domain")
    faces, edges = [f_to], []
    f = f_to
    while prev[f] is not None:
        f, e = prev[f]
        faces.append(f)
        edges.append(e)
    faces.reverse()
    edges.reverse()
    return faces, edges


def primal_path_vertices(mp, v_from, v_to):
    """Canonical primal path staying inside the fundamental domain."""
    from .planemaps import dart_crossings
    cross = dart_crossings(mp) if mp.surface == "torus" else \
        [(0, 0)] * mp.nd
    adj = {v: [] for v in range(mp.nv)}
    for e in range(mp.ne):
        if cross[2 * e] != (0, 0):
            continue
        u, v = mp.edge_ends(e)
        adj[u].append((v, e))
        adj[v].append((u, e))
    for v in adj:
        adj[v].sort(key=lambda t: t[1])
    prev = {v_from: None}
    frontier = [v_from]
    while frontier and v_to not in prev:
        nxt = []
        for v in frontier:
            for u, e in adj[v]:
                if u not in prev:
                    prev[u] = (v, e)
                    nxt.append(u)
        frontier = nxt
    if v_to not in prev:
        raise ValueError("vertices not connected inside the domain")
    verts, edges = [v_to], []
    v = v_to
    while prev[v] is not None:
        v, e = prev[v]
        verts.append(v)
        edges.append(e)
    verts.reverse()
    edges.reverse()
    return verts, edges


def crossing_marks(med, g, edges, directions):
    """Argument-flip marks for a line crossing the given cities: at each
    crossed city flip the two corners on the left of the crossing direction
    (resolved geometrically, so loop edges on tiny tori work too)."""
    pairs = []
    for e, direction in zip(edges, directions):
        mid = g.edge_mid(e)
        chosen = []
        for c in med.city(e):
            rel = short_rel(corner_mid(med, c) - mid, g)
            cr = direction.real * rel.imag - direction.imag * rel.real
            if cr > 0:
                chosen.append(c)
        if len(chosen) != 2:
            raise ValueError(f"expected 2 left corners at city {e}")
        pairs += [(e, c) for c in chosen]
    return Marks(pairs)


class MuLine:
    """A primal disorder line from face f1 to face f2.

    flips  -- primal edges whose coupling reverses (spin-layer view)
    marks  -- the same line as city argument flips (vertex-model view)
    """

    def __init__(self, med, g, f1, f2):
        faces, edges = dual_path_faces(g, f1, f2)
        self.faces, self.edges = faces, edges
        self.flips = flip_marks(edges)
        dirs = []
        for i in range(len(edges)):
            a = face_anchor(g, faces[i])
            b = face_anchor(g, faces[i + 1])
            dirs.append(short_rel(b - a, g))
        self.marks = crossing_marks(med, g, edges, dirs)


class MuDualLine:
    """A dual-model disorder line between two base vertices v1, v2 (faces of
    the dual graph).  Crossed dual edges correspond to the primal edges on a
    v1 -> v2 path; marks flip the two corners at the left face."""

    def __init__(self, med, g, v1, v2):
        verts, edges = primal_path_vertices(g, v1, v2)
        self.vertices, self.edges = verts, edges
        self.flips = flip_marks(edges)  # dual-layer couplings, by primal id
        dirs = []
        for i in range(len(edges)):
            a, b = g.vpos[verts[i]], g.vpos[verts[i + 1]]
            dirs.append(short_rel(b - a, g))
        self.marks = crossing_marks(med, g, edges, dirs)


def spin_order_obs(med, g, v1, v2):
    """sigma(v1) sigma(v2) as a nu-observable along the canonical path."""
    _, edges = primal_path_vertices(g, v1, v2)
    return spin_pair_obs(med, edges)


def dual_spin_order_obs(med, g, f1, f2):
    """tau(f1) tau(f2) as a nu-observable along the canonical dual path."""
    _, edges = dual_path_faces(g, f1, f2)
    return dual_spin_pair_obs(med, edges)
