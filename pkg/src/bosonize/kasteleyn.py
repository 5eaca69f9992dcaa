"""Signed Kasteleyn operators on cities graphs, with exact determinants.

Rows of the black-to-white operator are indexed by white flags (one per
corner, at the reference tail) and columns by black flags (one per corner, at
the reference head), so every road contributes ``+1`` on the diagonal.

Signs come from a geometric rule.  Every corner ``(v, f)`` carries a
half-angle ``nu`` with ``arg(f - v) = 2 nu (mod 2 pi)``; representatives are
fixed vertex by vertex by walking the corners counterclockwise from the one
whose face has the lowest id and adding half of each direction increment.  A
street is oriented so that the frame ``(e^{i(nu + nu')}, street vector)`` is
direct; roads are oriented black to white, which is counterclockwise around
base vertices.  An edge oriented black to white enters the matrix with a plus
sign.  On square lattices every direction sits on an eighth-of-a-turn ray, so
the representatives are exact multiples of ``pi/8`` and all orientation
decisions are integer arithmetic.

On a planar map the bounded faces of the cities graph come out clockwise-odd
and a single absolute determinant is the matching sum.  On a torus the four
seam-twisted determinants combine in a fixed half-sum instead.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Dict, FrozenSet, Iterator, List, Optional, Sequence, Tuple

from .dimers import CitiesGraph
from .exactnum import as_scalar, to_float
from .linalg import exact_det, exact_inverse
from .planemaps import CMap, face_rel_centroid, seam_crossings

TAU = 2.0 * math.pi

HALF = Fraction(1, 2)


def scalar_abs(x: object) -> object:
    """Absolute value of an exact scalar."""
    return -x if x < as_scalar(0) else x


def ray_pi_fraction(z: complex) -> Optional[Fraction]:
    """``arg(z)/pi`` as an exact fraction on the eight half-quadrant rays.

    Returns None for directions off the axis/diagonal grid; raises on the
    zero vector.  Exactness relies on the coordinates being dyadic, which
    holds for the bundled lattice builders.
    """
    x, y = z.real, z.imag
    if x == 0.0 and y == 0.0:
        raise ValueError("zero vector has no direction")
    if y == 0.0:
        return Fraction(0) if x > 0 else Fraction(1)
    if x == 0.0:
        return Fraction(1, 2) if y > 0 else Fraction(3, 2)
    if x == y:
        return Fraction(1, 4) if x > 0 else Fraction(5, 4)
    if x == -y:
        return Fraction(3, 4) if y > 0 else Fraction(7, 4)
    return None


def sin_sign_of_pi_multiple(q: Fraction) -> int:
    """Sign of ``sin(q pi)``, rejecting integer ``q``."""
    r = q % 2
    if r == 0 or r == 1:
        raise ValueError(f"degenerate direction: sin({q} pi) vanishes")
    return 1 if r < 1 else -1


def planar_outer_face(mp: CMap) -> int:
    """Index of the unique negatively wound (outer) face of a planar map."""
    if mp.surface != "plane":
        raise ValueError("outer faces only exist on planar maps")
    outer = []
    for idx, orb in enumerate(mp.faces()):
        p = 0j
        area2 = 0.0
        for d in orb:
            q = p + mp.dvec[d]
            area2 += p.real * q.imag - p.imag * q.real
            p = q
        if area2 < 0.0:
            outer.append(idx)
    if len(outer) != 1:
        raise ValueError(f"expected one outer face, found {outer}")
    return outer[0]


class KasteleynCities:
    """Geometrically signed Kasteleyn data for a cities graph.

    Attributes:
        cg: The underlying cities graph (weights, edges, flags).
        delta: Per-corner direction from the base vertex to its face anchor
            (outer-face corners of a planar map point radially outward).
        nu: Per-corner half-angle representative (float).
        nu_frac: Exact ``nu / pi`` as a Fraction where the geometry sits on
            the eighth-turn grid, else None.
        standard_windows: True when every consecutive increment around every
            vertex is below a quarter turn.
        orient: Per cities-graph edge, the (tail flag, head flag) chosen by
            the orientation rule.
        seam_parity: Per edge, crossing parities with the two torus seams
            (zeros on planar maps).
    """

    def __init__(self, cg: CitiesGraph, force_float: bool = False) -> None:
        self.cg = cg
        med = cg.med
        base = med.base
        self.n = base.nd
        delta = [face_rel_centroid(base, c) for c in range(base.nd)]
        self.outer_face: Optional[int] = None
        if base.surface == "plane":
            self.outer_face = planar_outer_face(base)
            centroid = sum(base.vpos) / base.nv
            for c in range(base.nd):
                if base.face_of[c] == self.outer_face:
                    delta[c] = base.vpos[base.dart_v[c]] - centroid
        self.delta = delta
        self.nu: List[float] = [0.0] * base.nd
        self.nu_frac: List[Optional[Fraction]] = [None] * base.nd
        self.standard_windows = True
        for cyc in base.rot:
            self._assign_nu(base, cyc, force_float)
        self.orient: List[Tuple[int, int]] = []
        self.seam_parity: List[Tuple[int, int]] = []
        self._orient_roads(base, med.map)
        self._orient_streets(base, med)

    # -- construction ------------------------------------------------------

    def _assign_nu(self, base: CMap, cyc: Sequence[int],
                   force_float: bool) -> None:
        j0 = min(range(len(cyc)),
                 key=lambda j: (base.face_of[cyc[j]], cyc[j]))
        order = list(cyc[j0:]) + list(cyc[:j0])
        fracs = [None if force_float else ray_pi_fraction(self.delta[c])
                 for c in order]
        exact = all(f is not None for f in fracs)
        angles = [math.atan2(self.delta[c].imag, self.delta[c].real) % TAU
                  for c in order]
        if exact:
            q = (fracs[0] % 2) / 2
        nu = angles[0] / 2.0
        for idx, c in enumerate(order):
            if idx:
                step = (angles[idx] - angles[idx - 1]) % TAU
                if not 0.0 < step < TAU:
                    raise ValueError(f"degenerate corner fan at dart {c}")
                if step >= math.pi:
                    self.standard_windows = False
                nu += step / 2.0
                if exact:
                    q = q + ((fracs[idx] - fracs[idx - 1]) % 2) / 2
            if exact:
                self.nu_frac[c] = q
                self.nu[c] = float(q) * math.pi
            else:
                self.nu[c] = nu

    def _orient_roads(self, base: CMap, mmap: CMap) -> None:
        for c in range(base.nd):
            self.orient.append((2 * c + 1, 2 * c))
            if base.surface == "torus":
                tail_city = base.sigma[c] // 2
                start = mmap.vpos[tail_city] + mmap.dvec[2 * c + 1] * 0.25
                vec = mmap.dvec[2 * c + 1] * 0.5
                ca, cb = seam_crossings(start, vec, base.periods)
                self.seam_parity.append((ca % 2, cb % 2))
            else:
                self.seam_parity.append((0, 0))

    def _street_vector(self, base: CMap, e: int, ca: int, cb: int,
                       shared_face: bool) -> complex:
        if shared_face:
            vec = base.dvec[2 * e]
            return vec if base.dart_v[ca] == base.dart_v[2 * e] else -vec
        return (self.delta[cb] - self.delta[ca]) / 2

    def _orient_streets(self, base: CMap, med) -> None:
        mmap = med.map
        for e in range(base.ne):
            c1, c2, c3, c4 = med.city(e)
            cyc = (c2, c1, c4, c3)
            for k in range(4):
                ca, cb = cyc[k], cyc[(k + 1) % 4]
                fa, fb = self.cg.flag(e, ca), self.cg.flag(e, cb)
                svec = self._street_vector(base, e, ca, cb, k % 2 == 0)
                qa, qb = self.nu_frac[ca], self.nu_frac[cb]
                sq = None if qa is None or qb is None \
                    else ray_pi_fraction(svec)
                if sq is not None:
                    sgn = sin_sign_of_pi_multiple(sq - qa - qb)
                else:
                    u = self.nu[ca] + self.nu[cb]
                    cross = (math.cos(u) * svec.imag
                             - math.sin(u) * svec.real)
                    if abs(cross) < 1e-9 * abs(svec):
                        raise ValueError(
                            f"street at city {e} is parallel to its frame")
                    sgn = 1 if cross > 0 else -1
                self.orient.append((fa, fb) if sgn > 0 else (fb, fa))
                if base.surface == "torus":
                    da = self._flag_disp(mmap, e, ca)
                    db = self._flag_disp(mmap, e, cb)
                    wa, wb = seam_crossings(mmap.vpos[e] + da, db - da,
                                            base.periods)
                    self.seam_parity.append((wa % 2, wb % 2))
                else:
                    self.seam_parity.append((0, 0))

    @staticmethod
    def _flag_disp(mmap: CMap, e: int, c: int) -> complex:
        """Offset of corner c's flag at city e from the city midpoint."""
        d = 2 * c if c // 2 == e else 2 * c + 1
        return mmap.dvec[d] * 0.25

    def flag_pos(self, flag: int) -> complex:
        """Embedded position of a flag, near its city midpoint."""
        med = self.cg.med
        c = flag // 2
        e = c // 2 if flag % 2 else med.base.sigma[c] // 2
        return med.map.vpos[e] + self._flag_disp(med.map, e, c)

    # -- operator assembly ---------------------------------------------------

    def bw_entries(self, twist: Tuple[int, int] = (1, 1),
                   flip_edges: FrozenSet[int] = frozenset()
                   ) -> Iterator[Tuple[int, int, object, int]]:
        """Yield (white corner row, black corner column, value, edge id)."""
        for i, (u, v) in enumerate(self.cg.edges):
            tail, _head = self.orient[i]
            sgn = 1 if tail % 2 == 1 else -1
            if i in flip_edges:
                sgn = -sgn
            pa, pb = self.seam_parity[i]
            if pa and twist[0] < 0:
                sgn = -sgn
            if pb and twist[1] < 0:
                sgn = -sgn
            val = as_scalar(self.cg.wt[i]) * sgn
            white, black = (u, v) if u % 2 == 0 else (v, u)
            yield white // 2, black // 2, val, i

    def bw_dense(self, twist: Tuple[int, int] = (1, 1),
                 flip_edges: FrozenSet[int] = frozenset()
                 ) -> List[List[object]]:
        """Dense exact black-to-white operator (rows white, columns black)."""
        zero = as_scalar(0)
        mat = [[zero] * self.n for _ in range(self.n)]
        for r, c, val, _ in self.bw_entries(twist, flip_edges):
            mat[r][c] = mat[r][c] + val
        return mat

    def bw_coo(self, twist: Tuple[int, int] = (1, 1)
               ) -> Tuple[List[int], List[int], List[float]]:
        """Coordinate-format float export (duplicates left to the consumer)."""
        rows, cols, vals = [], [], []
        for r, c, val, _ in self.bw_entries(twist):
            rows.append(r)
            cols.append(c)
            vals.append(to_float(val))
        return rows, cols, vals

    def det_bw(self, twist: Tuple[int, int] = (1, 1),
               flip_edges: FrozenSet[int] = frozenset()) -> object:
        return exact_det(self.bw_dense(twist, flip_edges))

    def minor_det(self, drop_whites: Sequence[int], drop_blacks: Sequence[int],
                  twist: Tuple[int, int] = (1, 1),
                  flip_edges: FrozenSet[int] = frozenset()) -> object:
        """Determinant with white rows / black columns (corner ids) removed."""
        if len(drop_whites) != len(drop_blacks):
            raise ValueError("minor must drop as many whites as blacks")
        dw, db = set(drop_whites), set(drop_blacks)
        mat = self.bw_dense(twist, flip_edges)
        sub = [[x for j, x in enumerate(row) if j not in db]
               for i, row in enumerate(mat) if i not in dw]
        return exact_det(sub)

    def bw_inverse(self, twist: Tuple[int, int] = (1, 1)
                   ) -> List[List[object]]:
        """Exact inverse kernel; entry [b][w] pairs a black with a white."""
        return exact_inverse(self.bw_dense(twist))

    # -- partition functions -------------------------------------------------

    def z_planar(self, flip_edges: FrozenSet[int] = frozenset()) -> object:
        """Matching sum of a planar cities graph as one absolute determinant."""
        if self.cg.med.base.surface != "plane":
            raise ValueError("single-determinant sums need a planar map")
        return scalar_abs(self.det_bw(flip_edges=flip_edges))

    def z_torus(self) -> object:
        """Matching sum on the torus via the four twisted determinants."""
        if self.cg.med.base.surface != "torus":
            raise ValueError("the twisted half-sum needs a torus map")
        d = {t: self.det_bw(twist=t) for t in TORUS_TWISTS}
        total = as_scalar(0)
        for t, s in zip(TORUS_TWISTS, TORUS_HALF_SUM_SIGNS):
            total = total + d[t] * s
        return scalar_abs(total * as_scalar(HALF))


TORUS_TWISTS: Tuple[Tuple[int, int], ...] = (
    (1, 1), (-1, 1), (1, -1), (-1, -1))

# The twisted determinants count matchings with signs q(parity class); one
# class is hit by three twists with one sign and by the fourth with the
# other, so the alternating half-sum below reproduces the plain sum.  The
# sign vector is pinned by the partition tests against direct enumeration.
TORUS_HALF_SUM_SIGNS: Tuple[int, int, int, int] = (-1, 1, 1, 1)


def city_block(kc: KasteleynCities, mat: Sequence[Sequence[object]],
               e: int) -> List[List[object]]:
    """2x4 operator block of city ``e``.

    Rows are the white flags at the city (corners ``c4`` then ``c2``);
    columns are the corner order ``(c1, c4, c3, c2)``, so the two middle and
    outer columns pair streets with the two adjacent roads.
    """
    c1, c2, c3, c4 = kc.cg.med.city(e)
    cols = (c1, c4, c3, c2)
    return [[mat[r][c] for c in cols] for r in (c4, c2)]


def clockwise_odd_certificate(kc: KasteleynCities) -> Tuple[bool, List[int]]:
    """Check that every (bounded) face of the cities graph is clockwise-odd.

    Returns (all_good, offending face indices).  On a planar map the outer
    face is exempt.
    """
    cm = cities_cmap(kc)
    cm.validate()
    skip = planar_outer_face(cm) if cm.surface == "plane" else None
    bad = []
    for idx, orb in enumerate(cm.faces()):
        if idx == skip:
            continue
        cw = 0
        for d in orb:
            i = d // 2
            along = kc.orient[i][0] == cm.dart_v[d]
            if not along:
                cw += 1
        if cw % 2 == 0:
            bad.append(idx)
    return not bad, bad


def cities_cmap(kc: KasteleynCities) -> CMap:
    """The cities graph as a combinatorial map with its own embedding.

    Faces are the city quadrangles, one ``2 deg(v)``-gon per base vertex and
    one ``2 deg(f)``-gon per base face.
    """
    cg = kc.cg
    med = cg.med
    base = med.base
    mmap = med.map
    nflags = cg.nflags
    vpos = [0j] * nflags
    rot: List[List[int]] = [[] for _ in range(nflags)]
    dvec = [0j] * (2 * len(cg.edges))

    def dart_at(i: int, flag: int) -> int:
        u, v = cg.edges[i]
        if flag == u:
            return 2 * i
        if flag == v:
            return 2 * i + 1
        raise ValueError("flag not on edge")

    for c in range(base.nd):
        tail_city = base.sigma[c] // 2
        vpos[2 * c] = mmap.vpos[tail_city] + mmap.dvec[2 * c + 1] * 0.25
        vpos[2 * c + 1] = mmap.vpos[c // 2] + mmap.dvec[2 * c] * 0.25
        dvec[2 * c] = mmap.dvec[2 * c + 1] * 0.5
        dvec[2 * c + 1] = -mmap.dvec[2 * c + 1] * 0.5
    for e in range(base.ne):
        c1, c2, c3, c4 = med.city(e)
        cyc = (c2, c1, c4, c3)
        for k in range(4):
            ca, cb = cyc[k], cyc[(k + 1) % 4]
            i = base.nd + 4 * e + k
            da = kc._flag_disp(mmap, e, ca)
            db = kc._flag_disp(mmap, e, cb)
            dvec[2 * i] = db - da
            dvec[2 * i + 1] = da - db
        for j in range(4):
            c = cyc[j]
            flag = cg.flag(e, c)
            prev_edge = base.nd + 4 * e + (j - 1) % 4
            next_edge = base.nd + 4 * e + j
            rot[flag] = [dart_at(prev_edge, flag), dart_at(c, flag),
                         dart_at(next_edge, flag)]
    return CMap(base.surface, rot, dvec=dvec, vpos=vpos,
                periods=base.periods)


def dirac_residual(kc: KasteleynCities, scale: float) -> float:
    """Largest deviation from the critical Dirac form of the operator.

    For an isoradially embedded critical model (every street weight equal to
    ``sqrt(2)/2`` on the square lattice scaled by ``scale``), each entry must
    satisfy ``i e^{i(nu(w) + nu(b))} K(w, b) = i (u - x)`` where ``x`` and
    ``u`` are the rhombus centers flanking the edge, listed so that
    ``(white, x, black, u)`` is counterclockwise.
    """
    cg = kc.cg
    base = cg.med.base
    worst = 0.0
    for r, col, val, i in kc.bw_entries():
        phase = 1j * complex(math.cos(kc.nu[r] + kc.nu[col]),
                             math.sin(kc.nu[r] + kc.nu[col]))
        lhs = phase * to_float(val)
        if i < base.nd:
            rhs = 1j * kc.delta[i] * scale
        else:
            e = kc.cg.street_city[i - base.nd]
            k = (i - base.nd) % 4
            c1, c2, c3, c4 = cg.med.city(e)
            cyc = (c2, c1, c4, c3)
            ca, cb = cyc[k], cyc[(k + 1) % 4]
            half = base.dvec[2 * e] * (0.5 * scale)
            pos = {}
            for c in (ca, cb):
                vloc = -half if base.dart_v[c] == base.dart_v[2 * e] else half
                pos[c] = vloc + kc.delta[c] * (0.5 * scale)
            if k % 2 == 0:
                vshared = -half if base.dart_v[ca] == base.dart_v[2 * e] \
                    else half
                center = vshared + kc.delta[ca] * scale
            else:
                center = 0j
            other = (-half if base.dart_v[ca] == base.dart_v[2 * e] else half) \
                if k % 2 else 0j
            white_c, black_c = (ca, cb) if cg.flag(e, ca) % 2 == 0 \
                else (cb, ca)
            quad = [("w", pos[white_c]), ("x1", center), ("b", pos[black_c]),
                    ("x2", other)]
            g = sum(p for _, p in quad) / 4
            quad.sort(key=lambda t: math.atan2((t[1] - g).imag,
                                               (t[1] - g).real))
            names = [t[0] for t in quad]
            iw = names.index("w")
            ring = [quad[(iw + s) % 4] for s in range(4)]
            if ring[2][0] != "b":
                return math.inf
            rhs = 1j * (ring[3][1] - ring[1][1])
        worst = max(worst, abs(lhs - rhs))
    return worst
