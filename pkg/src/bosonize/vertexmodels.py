"""Eight-vertex and six-vertex ensembles on the medial graph.

A configuration puts nu = +-1 on every medial edge (corner of the base map).
Around medial vertex x (the midpoint of base edge e) the four corners are
labelled c1=(v,f), c2=(v',f), c3=(v',f'), c4=(v,f') and the local weight is
the even character

    omega(nu) = a (1 + nu1 nu2 nu3 nu4) + b (nu1 nu2 + nu3 nu4)
              + c (nu1 nu4 + nu2 nu3) + d (nu1 nu3 + nu2 nu4)

so omega(1,-1,-1,1) = om12 (primal spins disagree), omega(1,1,-1,-1) = om34
(dual spins disagree), omega(1,1,1,1) = om56, omega(1,-1,1,-1) = om78.
Odd patterns have weight zero.

The coupled double-Ising model is om = (w_e, w'_e, 1, w_e w'_e) via
nu(corner (v,f)) = sigma(v) tau(f).  Disorder lines act as argument flips:
each crossed city flips the nu-arguments of the two corners at one chosen
endpoint; double flips cancel, so only the chain ends carry defects.

Everything is summed exactly over scaled integer pairs in Z[sqrt2].
"""

from __future__ import annotations

import math
from fractions import Fraction

from .exactnum import QSqrt2, as_scalar
from .ising import check_budget, _intpair, _from_pair
from .planemaps import Medial

# corner-pattern classes, bits b_i = 1 meaning nu_i = -1
_CLASS = []
for bits in range(16):
    b1, b2, b3, b4 = bits & 1, (bits >> 1) & 1, (bits >> 2) & 1, (bits >> 3) & 1
    if (b1 + b2 + b3 + b4) % 2:
        _CLASS.append(0)            # odd: forbidden
    elif b1 == b2 and b1 == b4:
        _CLASS.append(56)           # all equal
    elif b1 != b2 and b1 == b4:
        _CLASS.append(12)           # primal disagree
    elif b1 == b2 and b1 != b4:
        _CLASS.append(34)           # dual disagree
    else:
        _CLASS.append(78)           # both disagree


def pattern_class(bits):
    return _CLASS[bits & 15]


class NuObs:
    """Sign observable  sign * (-1)^{popcount(cfg & mask)}."""

    __slots__ = ("sign", "mask")

    def __init__(self, sign=1, mask=0):
        self.sign = sign
        self.mask = mask

    def __mul__(self, other):
        return NuObs(self.sign * other.sign, self.mask ^ other.mask)

    def __repr__(self):
        return f"NuObs({self.sign}, {self.mask:#x})"


class EightVertex:
    """Per-city eight-vertex weights on a medial graph."""

    def __init__(self, med: Medial, om12, om34, om56, om78):
        self.med = med
        n = med.base.ne

        def aslist(x):
            if isinstance(x, (list, tuple)):
                return [as_scalar(v) for v in x]
            return [as_scalar(x)] * n

        self.om12 = aslist(om12)
        self.om34 = aslist(om34)
        self.om56 = aslist(om56)
        self.om78 = aslist(om78)

    @classmethod
    def from_couplings(cls, med, w, wdual):
        """Coupled primal(w) x dual(w') double-Ising city weights."""
        w = [as_scalar(x) for x in w]
        wd = [as_scalar(x) for x in wdual]
        return cls(med, w, wd, [as_scalar(1)] * len(w),
                   [a * b for a, b in zip(w, wd)])

    def weights_at(self, e):
        return (self.om12[e], self.om34[e], self.om56[e], self.om78[e])

    def sign_flipped(self):
        """Companion model with om78 -> -om78."""
        return EightVertex(self.med, self.om12, self.om34, self.om56,
                           [-x for x in self.om78])

    def dual(self):
        """Weight duality (an involution up to the overall factor 1/4)."""
        t12, t34, t56, t78 = [], [], [], []
        for e in range(self.med.base.ne):
            a, b, c, d = self.weights_at(e)
            t12.append((a - b + c - d) / 4)
            t34.append((-a + b + c - d) / 4)
            t56.append((a + b + c + d) / 4)
            t78.append((-a - b + c + d) / 4)
        return EightVertex(self.med, t12, t34, t56, t78)

    def character_coeffs(self, e):
        """(a, b, c, d) of the even character expansion at city e."""
        o12, o34, o56, o78 = self.weights_at(e)
        return ((o12 + o34 + o56 + o78) / 8,
                (-o12 + o34 + o56 - o78) / 8,
                (o12 - o34 + o56 - o78) / 8,
                (-o12 - o34 + o56 + o78) / 8)

    def is_free_fermion(self, e):
        o12, o34, o56, o78 = self.weights_at(e)
        return o56 * o56 == o12 * o12 + o34 * o34 + o78 * o78

    def is_six_vertex(self, e):
        return self.om78[e] == 0

    def city_table(self, e, argflip=0):
        """16 weights indexed by corner bits (after xor with argflip)."""
        o = {0: as_scalar(0), 12: self.om12[e], 34: self.om34[e],
             56: self.om56[e], 78: self.om78[e]}
        return [o[pattern_class(bits ^ argflip)] for bits in range(16)]


class Marks:
    """Argument-flip marks, a set of (city, corner) pairs mod 2."""

    def __init__(self, pairs=()):
        s = set()
        for p in pairs:
            s ^= {tuple(p)}
        self.pairs = frozenset(s)

    def __xor__(self, other):
        return Marks(set(self.pairs) ^ set(other.pairs))

    def flip_mask(self, med, e):
        """Local 4-bit argument flip for city e."""
        city = med.city(e)
        m = 0
        for i, c in enumerate(city):
            if (e, c) in self.pairs:
                m |= 1 << i
        return m

    def side_sign(self, med, e, at_tail):
        """-1 if this mark set flips edge e at the requested side."""
        tail_city = self.tail_city(med, e)
        head_city = self.head_city(med, e)
        city = tail_city if at_tail else head_city
        return -1 if (city, e) in self.pairs else 1

    @staticmethod
    def tail_city(med, e):
        # reference arrow of corner e runs mid(edge(sigma e)) -> mid(edge e)
        return med.base.sigma[e] // 2

    @staticmethod
    def head_city(med, e):
        return e // 2


def source_defect(med, e):
    """xi-defect whose half-arrows both point away from the edge midpoint."""
    return Marks([(Marks.head_city(med, e), e)])


def sink_defect(med, e):
    return Marks([(Marks.tail_city(med, e), e)])


def disorder_line_marks(med, crossed, left_vertices):
    """Marks of a primal-disorder line: for each crossed base edge e (a city)
    flip the arguments of the two corners at the given endpoint vertex."""
    pairs = []
    for e, v in zip(crossed, left_vertices):
        c1, c2, c3, c4 = med.city(e)
        at_v = [c for c in (c1, c2, c3, c4) if med.vertex[c] == v]
        if len(at_v) != 2:
            raise ValueError(f"vertex {v} is not an endpoint of city {e}")
        pairs += [(e, c) for c in at_v]
    return Marks(pairs)


def dual_disorder_line_marks(med, crossed, left_faces):
    """Same for a dual-model disorder line: flip the two corners at a face."""
    pairs = []
    for e, f in zip(crossed, left_faces):
        city = med.city(e)
        at_f = [c for c in city if med.face[c] == f]
        if len(at_f) != 2:
            raise ValueError(f"face {f} is not adjacent to city {e}")
        pairs += [(e, c) for c in at_f]
    return Marks(pairs)


class VertexEnsemble:
    """Exact sums over nu-configurations with marked city tables."""

    def __init__(self, weights: EightVertex, marks: Marks = Marks()):
        self.weights = weights
        self.med = weights.med
        self.marks = marks
        base = self.med.base
        self.nbits = base.nd  # one nu per corner
        self._cities = []
        for e in range(base.ne):
            table = weights.city_table(e, marks.flip_mask(self.med, e))
            pairs = [_intpair(x) for x in table]
            den = 1
            for _, _, d in pairs:
                den = math.lcm(den, d)
            tbl = [(a * (den // d), b * (den // d)) for a, b, d in pairs]
            self._cities.append((self.med.city(e), tbl, den))

    def measure(self, observables):
        """Exact sums  sum_cfg obs(cfg) prod_x omega_x(cfg)  per observable."""
        check_budget(1 << self.nbits)
        cities = [(c[0][0], c[0][1], c[0][2], c[0][3], c[1])
                  for c in self._cities]
        den = 1
        for _, _, d in self._cities:
            den *= d
        obs = [(o.sign, o.mask) for o in observables]
        acc = [[0, 0] for _ in obs]
        for cfg in range(1 << self.nbits):
            wa, wb = 1, 0
            for p1, p2, p3, p4, tbl in cities:
                idx = (((cfg >> p1) & 1) | (((cfg >> p2) & 1) << 1)
                       | (((cfg >> p3) & 1) << 2) | (((cfg >> p4) & 1) << 3))
                ta, tb = tbl[idx]
                if ta == 0 and tb == 0:
                    wa = wb = 0
                    break
                wa, wb = wa * ta + 2 * wb * tb, wa * tb + wb * ta
            if wa == 0 and wb == 0:
                continue
            for k, (sgn, mask) in enumerate(obs):
                if (cfg & mask).bit_count() & 1:
                    acc[k][0] -= wa
                    acc[k][1] -= wb
                else:
                    acc[k][0] += wa
                    acc[k][1] += wb
        out = []
        for (a, b), (sgn, _) in zip(acc, obs):
            out.append(sgn * _from_pair(a, b, den))
        return out

    def z(self):
        return self.measure([NuObs()])[0]

    def measure_with(self, fn):
        """Exact sum with an arbitrary per-config callback fn(cfg) -> scalar.
        Slow path for structural checks (type counting etc.)."""
        check_budget(1 << self.nbits)
        total = 0
        for cfg in range(1 << self.nbits):
            wa, wb = 1, 0
            for (p, tbl, _) in [(c[0], c[1], c[2]) for c in self._cities]:
                idx = (((cfg >> p[0]) & 1) | (((cfg >> p[1]) & 1) << 1)
                       | (((cfg >> p[2]) & 1) << 2) | (((cfg >> p[3]) & 1) << 3))
                ta, tb = tbl[idx]
                if ta == 0 and tb == 0:
                    wa = wb = 0
                    break
                wa, wb = wa * ta + 2 * wb * tb, wa * tb + wb * ta
            if wa == 0 and wb == 0:
                continue
            den = 1
            for _, _, d in self._cities:
                den *= d
            total = total + fn(cfg) * _from_pair(wa, wb, den)
        return total

    def config_types(self, cfg):
        """Per-city class (0/12/34/56/78) plus sink/source refinement.

        Returns (classes, n_sink, n_source): sinks are 78-cities whose four
        reference arrows all point inward."""
        classes = []
        n_sink = n_source = 0
        for e, (city, _, _) in enumerate(self._cities):
            flip = self.marks.flip_mask(self.med, e)
            idx = 0
            for i, c in enumerate(city):
                if (cfg >> c) & 1:
                    idx |= 1 << i
            cls = pattern_class(idx ^ flip)
            classes.append(cls)
            if cls == 78:
                # inward arrow at corner c: nu = +1 iff e is the head city
                sink_bits = 0
                for i, c in enumerate(city):
                    if Marks.tail_city(self.med, c) == e:
                        sink_bits |= 1 << i
                if (idx ^ flip) == sink_bits:
                    n_sink += 1
                elif (idx ^ flip) == sink_bits ^ 15:
                    n_source += 1
        return classes, n_sink, n_source


# -- observables on the medial graph ---------------------------------------------


def nu_product(corners, sign=1):
    m = 0
    for c in corners:
        m ^= 1 << c
    return NuObs(sign, m)


def spin_pair_obs(med, path_edges):
    """sigma(v1) sigma(v2) as the nu-mask along a primal path: each path edge
    contributes nu(c1) nu(c2) of its city."""
    corners = []
    for e in path_edges:
        c1, c2, c3, c4 = med.city(e)
        corners += [c1, c2]
    return nu_product(corners)


def dual_spin_pair_obs(med, dual_path_edges):
    """tau(f1) tau(f2) along a dual path: nu(c1) nu(c4) per crossed city."""
    corners = []
    for e in dual_path_edges:
        c1, c2, c3, c4 = med.city(e)
        corners += [c1, c4]
    return nu_product(corners)


def corner_mid(med, c):
    """Midpoint of the medial edge of corner c, in the chart of its vertex."""
    base = med.base
    return base.vpos[base.dart_v[c]] + \
        (base.dvec[c] + base.dvec[base.sigma[c]]) / 4


def corner_mid_lookup(med):
    """Map from corner midpoint (reduced to the fundamental domain) to id."""
    base = med.base
    out = {}
    for c in range(base.nd):
        p = corner_mid(med, c)
        if base.surface == "torus":
            n, m = base.periods[0].real, base.periods[1].imag
            p = complex(p.real % n, p.imag % m)
        out[(p.real, p.imag)] = c
    if len(out) != base.nd:
        raise ValueError("corner midpoints are not distinct")
    return out


def mface_path(med, points):
    """Corners crossed by a path through medial faces.

    points alternates between base-vertex and base-face anchor positions
    (complex); consecutive points must be a (vertex, face) incidence.  The
    crossed corner is the one at their midpoint.  Returns [(corner, s)] with
    s = +1 stepping vertex->face and -1 stepping face->vertex.
    """
    lut = corner_mid_lookup(med)
    base = med.base
    out = []
    for i in range(len(points) - 1):
        a, b = points[i], points[i + 1]
        p = (a + b) / 2
        if base.surface == "torus":
            n, m = base.periods[0].real, base.periods[1].imag
            p = complex(p.real % n, p.imag % m)
        c = lut.get((p.real, p.imag))
        if c is None:
            raise ValueError(f"no corner at {p}")
        # vertex->face if i even when points[0] is a vertex; detect instead
        s = 1 if i % 2 == 0 else -1
        out.append((c, s))
    return out


def seam_cycle_a(med):
    """Horizontal medial-face cycle v(0,0) -> f(.5,.5) -> v(1,0) -> ... on a
    square torus; epsilon_A is the nu-product over its crossed corners."""
    base = med.base
    n = int(base.periods[0].real)
    pts = []
    for i in range(n):
        pts.append(complex(i, 0))
        pts.append(complex(i + 0.5, 0.5))
    pts.append(complex(n, 0))
    return mface_path(med, pts)


def seam_cycle_b(med):
    base = med.base
    m = int(base.periods[1].imag)
    pts = []
    for j in range(m):
        pts.append(complex(0, j))
        pts.append(complex(0.5, j + 0.5))
    pts.append(complex(0, m))
    return mface_path(med, pts)


def epsilon_obs(cycle):
    """Plain nu-product observable over a crossed-corner list."""
    return nu_product([c for c, _ in cycle])


def sector_indicator_measures(ens, observables, cyc_a, cyc_b):
    """Sums restricted to epsilon sectors: dict (h, v) -> list of sums."""
    ea, eb = epsilon_obs(cyc_a), epsilon_obs(cyc_b)
    base = [ens.measure([o * x for o in observables])
            for x in (NuObs(), ea, eb, ea * eb)]
    out = {}
    for h in (1, -1):
        for v in (1, -1):
            out[(h, v)] = [
                (base[0][k] + h * base[1][k] + v * base[2][k]
                 + h * v * base[3][k]) / 4
                for k in range(len(observables))]
    return out
