"""Bipartite dimer graphs for six-vertex ensembles, with exact matching sums.

A six-vertex city (a medial vertex with zero weight on its two crossing
patterns) blows up into a square of four *flags* joined by *streets*; every
corner becomes a *road* joining its two flags.  A road belongs to a perfect
matching exactly when its corner carries ``nu = +1``, so any nu-mask
observable transports to the dimer side unchanged.  Street weights are the
city weights normalized by the all-roads weight, which makes the matching
measure match the six-vertex measure configuration by configuration whenever
the free-fermion relation holds at every city.

The module also builds the *collapsed* graph whose sites are the corners
themselves and whose edges are the streets; its dimer covers are selected by
an arrow rule (a street is eligible when its black-class corner points into
the shared city and its white-class corner points out) and reproduce the same
measure with local two-fold choices at fully aligned cities.

The matching enumerator is exact over ``Fraction``/``QSqrt2`` scalars and
supports per-vertex demands 0/1/2, which encode monomers (a site left
uncovered) and trimers (a site covered twice).
"""

from __future__ import annotations

from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from .exactnum import as_scalar
from .ising import BudgetExceeded, enum_budget
from .planemaps import Medial
from .vertexmodels import EightVertex, Marks, NuObs

Edge = Tuple[int, int]


class CitiesGraph:
    """Flag/road/street dimer graph of a six-vertex weight assignment.

    Vertices (flags) are indexed ``2*c`` (the flag of corner ``c`` at its
    reference-tail city; white) and ``2*c + 1`` (at the head city; black).
    Edge ``c`` for ``c < ncorners`` is the road of corner ``c`` with weight 1;
    the four streets of city ``e`` follow, in the cyclic corner order
    ``(c2, c1), (c1, c4), (c4, c3), (c3, c2)``, weighted ``om34/om56`` when
    the pair shares a base face and ``om12/om56`` when it shares a base
    vertex.

    Attributes:
        med: The medial structure the graph lives on.
        weights: The six-vertex weights (``om78`` must vanish at every city).
        nflags: Number of flag vertices, ``2 * ncorners``.
        edges: Endpoint pairs, roads first.
        wt: Exact edge weights, parallel to ``edges``.
        street_city: City id of each street edge, parallel to the street part
            of ``edges``.
    """

    def __init__(self, weights: EightVertex) -> None:
        med: Medial = weights.med
        base = med.base
        for e in range(base.ne):
            if weights.om78[e] != as_scalar(0):
                raise ValueError(
                    f"city {e} has a nonzero crossing weight; the dimer "
                    "graph only represents six-vertex ensembles")
            if weights.om56[e] == as_scalar(0):
                raise ValueError(f"city {e} has zero all-roads weight")
        self.med = med
        self.weights = weights
        self.nflags = 2 * base.nd
        self.edges: List[Edge] = []
        self.wt: List[object] = []
        self.street_city: List[int] = []
        for c in range(base.nd):
            self.edges.append((2 * c, 2 * c + 1))
            self.wt.append(as_scalar(1))
        for e in range(base.ne):
            c1, c2, c3, c4 = med.city(e)
            cyc = (c2, c1, c4, c3)
            for k in range(4):
                ca, cb = cyc[k], cyc[(k + 1) % 4]
                shared_face = k % 2 == 0
                w = (weights.om34[e] / weights.om56[e] if shared_face
                     else weights.om12[e] / weights.om56[e])
                self.edges.append((self.flag(e, ca), self.flag(e, cb)))
                self.wt.append(w)
                self.street_city.append(e)

    @property
    def ncorners(self) -> int:
        return self.med.base.nd

    def flag(self, e: int, c: int) -> int:
        """Flag vertex of corner ``c`` at city ``e``."""
        if Marks.tail_city(self.med, c) == e:
            return 2 * c
        if Marks.head_city(self.med, c) == e:
            return 2 * c + 1
        raise ValueError(f"corner {c} does not touch city {e}")

    @staticmethod
    def is_black(flag: int) -> bool:
        """Black flags sit at the head of their corner's reference arrow.

        With this coloring the frame (vertex-to-face direction, black-to-white
        road direction) is direct, blacks are in bijection with corners and
        whites with darts, and roads run black-to-white counterclockwise
        around base vertices.
        """
        return flag % 2 == 1

    def z_prefactor(self) -> object:
        """Product of all-roads weights relating matching and vertex sums."""
        p = as_scalar(1)
        for e in range(self.med.base.ne):
            p = p * self.weights.om56[e]
        return p

    def config_of(self, matched: int) -> int:
        """Nu-configuration bits of a matching given as an edge bitmask."""
        nd = self.ncorners
        return ~matched & ((1 << nd) - 1)


def matching_sum(nv: int, edges: Sequence[Edge], wt: Sequence[object],
                 demand: Optional[Sequence[int]] = None) -> object:
    """Exact sum of weight products over generalized perfect matchings.

    Args:
        nv: Number of vertices.
        edges: Endpoint pairs; parallel edges are allowed, self-loops not.
        wt: Edge weights (exact scalars).
        demand: Required matched degree per vertex, each 0, 1 or 2.  Default
            is 1 everywhere (perfect matchings).  0 deletes the vertex
            (a monomer), 2 asks for two distinct incident edges (a trimer
            site).

    Returns:
        The sum over edge subsets meeting every demand of the product of
        their weights.
    """
    total = as_scalar(0)
    for _, w in _matchings(nv, edges, wt, demand):
        total = total + w
    return total


def matchings_iter(nv: int, edges: Sequence[Edge], wt: Sequence[object],
                   demand: Optional[Sequence[int]] = None
                   ) -> Iterator[Tuple[int, object]]:
    """Yield ``(edge_bitmask, weight_product)`` per generalized matching."""
    return _matchings(nv, edges, wt, demand)


def _matchings(nv: int, edges: Sequence[Edge], wt: Sequence[object],
               demand: Optional[Sequence[int]]) -> Iterator[Tuple[int, object]]:
    dem = [1] * nv if demand is None else list(demand)
    if len(dem) != nv or any(d not in (0, 1, 2) for d in dem):
        raise ValueError("demand must assign 0, 1 or 2 to every vertex")
    adj: List[List[Tuple[int, int]]] = [[] for _ in range(nv)]
    for i, (u, v) in enumerate(edges):
        if u == v:
            raise ValueError("self-loops are not allowed")
        if wt[i]:
            adj[u].append((i, v))
            adj[v].append((i, u))
    used = [False] * len(edges)
    one = as_scalar(1)
    budget = enum_budget()
    steps = [0]

    def rec(start: int, acc: object, mask: int) -> Iterator[Tuple[int, object]]:
        steps[0] += 1
        if steps[0] > budget:
            raise BudgetExceeded(
                f"matching enumeration exceeded {budget} steps")
        v = start
        while v < nv and dem[v] == 0:
            v += 1
        if v == nv:
            yield mask, acc
            return
        cands = [(i, u) for i, u in adj[v] if dem[u] > 0 and not used[i]]
        if dem[v] == 1:
            dem[v] = 0
            for i, u in cands:
                used[i] = True
                dem[u] -= 1
                yield from rec(v + 1, acc * wt[i], mask | (1 << i))
                dem[u] += 1
                used[i] = False
            dem[v] = 1
        else:
            dem[v] = 0
            for a in range(len(cands)):
                i, u = cands[a]
                used[i] = True
                dem[u] -= 1
                for b in range(a + 1, len(cands)):
                    j, x = cands[b]
                    if dem[x] > 0 and not used[j]:
                        used[j] = True
                        dem[x] -= 1
                        yield from rec(v + 1, acc * wt[i] * wt[j],
                                       mask | (1 << i) | (1 << j))
                        dem[x] += 1
                        used[j] = False
                dem[u] += 1
                used[i] = False
            dem[v] = 2

    return rec(0, one, 0)


def dimer_measure(cg: CitiesGraph, observables: Sequence[NuObs],
                  demand: Optional[Sequence[int]] = None) -> List[object]:
    """Matching sums weighted by nu-mask observables read off the roads.

    Multiply by ``cg.z_prefactor()`` to compare with the vertex-model sums.
    """
    totals = [as_scalar(0) for _ in observables]
    for mask, w in matchings_iter(cg.nflags, cg.edges, cg.wt, demand):
        cfg = cg.config_of(mask)
        for k, o in enumerate(observables):
            s = o.sign if bin(o.mask & cfg).count("1") % 2 == 0 else -o.sign
            totals[k] = totals[k] + w * s
    return totals


def slope_class(med: Medial, c: int) -> bool:
    """Geometric 2-coloring of corners by the slope of their medial edge.

    True for the north-east/south-west diagonal class on a square lattice.
    """
    base = med.base
    d = (base.dvec[c] - base.dvec[base.sigma[c]]) / 2
    s = d.real * d.imag
    if s == 0:
        raise ValueError(f"corner {c} has an axis-parallel medial edge")
    return s > 0


class CollapsedCities:
    """Street-only dimer graph whose sites are the corners themselves.

    Sites inherit a proper 2-coloring from the street adjacency (corners
    alternate around every city and every medial face); on square lattices it
    agrees with the slope classes.  A street of city ``e`` joining black site
    ``b`` to white site ``w`` is *eligible* for a nu-configuration when the
    arrow of ``b`` points into ``e`` and the arrow of ``w`` points out of
    ``e``; dimer covers by eligible streets reproduce the six-vertex measure
    with the same street weights as the flag graph.

    Attributes:
        nsites: Number of sites (= corners).
        edges: Street endpoint pairs (corner ids).
        wt: Street weights, ``om34/om56`` (shared face) or ``om12/om56``
            (shared vertex).
        street_city: City id per street.
        black: Per-corner color, ``black[c]`` true on one alternation class.
    """

    def __init__(self, weights: EightVertex) -> None:
        med = weights.med
        base = med.base
        for e in range(base.ne):
            if weights.om78[e] != as_scalar(0):
                raise ValueError(
                    f"city {e} has a nonzero crossing weight; the dimer "
                    "graph only represents six-vertex ensembles")
        self.med = med
        self.weights = weights
        self.nsites = base.nd
        self.edges = []
        self.wt = []
        self.street_city = []
        for e in range(base.ne):
            c1, c2, c3, c4 = med.city(e)
            cyc = (c2, c1, c4, c3)
            for k in range(4):
                ca, cb = cyc[k], cyc[(k + 1) % 4]
                shared_face = k % 2 == 0
                w = (weights.om34[e] / weights.om56[e] if shared_face
                     else weights.om12[e] / weights.om56[e])
                self.edges.append((ca, cb))
                self.wt.append(w)
                self.street_city.append(e)
        self.black = self._two_color()

    def _two_color(self) -> List[bool]:
        color: List[Optional[bool]] = [None] * self.nsites
        adj: List[List[int]] = [[] for _ in range(self.nsites)]
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        for seed in range(self.nsites):
            if color[seed] is not None:
                continue
            color[seed] = True
            queue = [seed]
            while queue:
                u = queue.pop()
                for v in adj[u]:
                    if color[v] is None:
                        color[v] = not color[u]
                        queue.append(v)
                    elif color[v] == color[u]:
                        raise ValueError(
                            "street graph is not bipartite; the collapsed "
                            "graph needs even city and face degrees")
        return [bool(c) for c in color]

    def arrow_into(self, c: int, e: int, cfg: int) -> bool:
        """True when the nu-arrow of corner ``c`` points into city ``e``."""
        nu_plus = not (cfg >> c) & 1
        if Marks.head_city(self.med, c) == e and nu_plus:
            return True
        if Marks.tail_city(self.med, c) == e and not nu_plus:
            return True
        return False

    def eligible_streets(self, cfg: int) -> List[int]:
        """Street ids whose black end points in and white end points out."""
        out = []
        for i, (ca, cb) in enumerate(self.edges):
            e = self.street_city[i]
            b, w = (ca, cb) if self.black[ca] else (cb, ca)
            if self.black[w]:
                raise AssertionError("street endpoints share a color")
            if self.arrow_into(b, e, cfg) and not self.arrow_into(w, e, cfg):
                out.append(i)
        return out

    def cover_sum(self, cfg: int) -> object:
        """Exact sum of street-weight products over covers of ``cfg``."""
        ids = self.eligible_streets(cfg)
        edges = [self.edges[i] for i in ids]
        wts = [self.wt[i] for i in ids]
        return matching_sum(self.nsites, edges, wts)
