"""Exact Ising ensembles by direct enumeration.

A spin configuration assigns +-1 to every vertex; an edge e with twisted
coupling contributes weight w_e when unsatisfied (sigma_u t_e sigma_v = -1)
and 1 otherwise.  On the torus the four twist sectors (a, b) flip couplings
across the two homology seams; disorder insertions flip the couplings on the
edges crossed by a dual path.  Everything is summed exactly: rational weights
run over scaled integers, critical weights over integer pairs in Z[sqrt 2].
"""

from __future__ import annotations

import math
import os
from fractions import Fraction

from .exactnum import QSqrt2, as_scalar
from .planemaps import (CMap, dart_crossings, dual_dart_geometry,
                        seam_crossings)


class BudgetExceeded(Exception):
    """Raised when an exact enumeration would exceed the config budget."""


def enum_budget():
    """Maximum number of configurations a brute-force sum may visit."""
    raw = os.environ.get("BOSONIZE_BUDGET")
    if raw is None:
        return 1 << 24
    return int(raw)


def check_budget(n_items):
    if n_items > enum_budget():
        raise BudgetExceeded(
            f"enumeration of {n_items} configurations exceeds budget "
            f"{enum_budget()} (set BOSONIZE_BUDGET to raise)")


# -- Kramers-Wannier weight map --------------------------------------------------


def kw_dual_weight(w):
    w = as_scalar(w)
    return (1 - w) / (1 + w)


def kw_dual_weights(weights):
    return [kw_dual_weight(w) for w in weights]


def q_pair(h, v):
    """Sector sign q: +1 on (+1,+1), -1 on the three other sectors."""
    return 1 if (h == 1 and v == 1) else -1


def q_sect(mu, nu):
    return q_pair(1 - 2 * (mu % 2), 1 - 2 * (nu % 2))


# -- integer-pair scalar kernel ---------------------------------------------------

def _intpair(w):
    """w as (a, b, den) with w = (a + b*sqrt2)/den, a, b, den integers."""
    w = as_scalar(w)
    if isinstance(w, QSqrt2):
        den = math.lcm(w.a.denominator, w.b.denominator)
        return (int(w.a * den), int(w.b * den), den)
    return (w.numerator, 0, w.denominator)


def _from_pair(a, b, den):
    if b == 0:
        return Fraction(a, den)
    return QSqrt2(Fraction(a, den), Fraction(b, den))


# -- spin ensembles ---------------------------------------------------------------


class SpinEnsemble:
    """Unnormalized exact sums over spin configurations.

    mp       -- combinatorial map (plane or torus)
    weights  -- per-edge unsatisfied-edge weight
    sector   -- (a, b) with a, b in {+1, -1}: couplings across seam A get a,
                across seam B get b (plane: must stay (1, 1))
    flipped  -- edges whose coupling sign is reversed (disorder lines)
    """

    def __init__(self, mp: CMap, weights, sector=(1, 1), flipped=()):
        self.mp = mp
        self.weights = [as_scalar(w) for w in weights]
        if len(self.weights) != mp.ne:
            raise ValueError("need one weight per edge")
        self.sector = tuple(sector)
        self.flipped = frozenset(flipped)
        if mp.surface == "plane":
            if self.sector != (1, 1):
                raise ValueError("plane has a single sector")
            cross = [(0, 0)] * mp.nd
        else:
            cross = dart_crossings(mp)
        a, b = self.sector
        self._edge_mask = []
        self._edge_neg = []
        for e in range(mp.ne):
            u, v = mp.edge_ends(e)
            mask = (1 << u) ^ (1 << v)
            ca, cb = cross[2 * e]
            neg = (a < 0 and ca % 2 == 1) ^ (b < 0 and cb % 2 == 1)
            neg ^= e in self.flipped
            self._edge_mask.append(mask)
            self._edge_neg.append(bool(neg))

    def measure(self, spin_sets):
        """Exact sums  sum_sigma (prod_{v in S} sigma_v) w(sigma)  for each
        vertex set S in spin_sets.  Returns a list of scalars."""
        mp = self.mp
        check_budget(1 << mp.nv)
        pairs = [_intpair(w) for w in self.weights]
        den = 1
        for _, _, d in pairs:
            den *= d
        # per-edge (sat, unsat) integer pairs, sat scaled by that edge's den
        table = []
        for (na, nb, d), mask, neg in zip(pairs, self._edge_mask,
                                          self._edge_neg):
            sat = (d, 0)
            unsat = (na, nb)
            if neg:
                sat, unsat = unsat, sat
            table.append((mask, sat, unsat))
        obs_masks = []
        for s in spin_sets:
            m = 0
            for v in s:
                m ^= 1 << v
            obs_masks.append(m)
        acc = [[0, 0] for _ in spin_sets]
        for s in range(1 << mp.nv):
            wa, wb = 1, 0
            for mask, sat, unsat in table:
                ea, eb = unsat if (s & mask).bit_count() & 1 else sat
                wa, wb = wa * ea + 2 * wb * eb, wa * eb + wb * ea
            for k, m in enumerate(obs_masks):
                if (s & m).bit_count() & 1:
                    acc[k][0] -= wa
                    acc[k][1] -= wb
                else:
                    acc[k][0] += wa
                    acc[k][1] += wb
        return [_from_pair(a, b, den) for a, b in acc]

    def z(self):
        return self.measure([()])[0]

    def correlator(self, spins):
        """Normalized <prod sigma> in this sector."""
        num, z = self.measure([tuple(spins), ()])
        return num / z


# -- disorder lines ----------------------------------------------------------------


def dual_adjacency(mp: CMap, stay_in_domain=True):
    """Face adjacency via shared edges.  On the torus, stay_in_domain skips
    edges whose dual crossing leaves the fundamental domain, so paths never
    wrap around a handle."""
    adj = {f: [] for f in range(mp.nf)}
    for e in range(mp.ne):
        d = 2 * e
        f1, f2 = mp.face_of[d], mp.face_of[d ^ 1]
        if mp.surface == "torus" and stay_in_domain:
            tail, vec = dual_dart_geometry(mp, d)
            ca, cb = seam_crossings(tail, vec, mp.periods)
            if ca != 0 or cb != 0:
                continue
        adj[f1].append((f2, e))
        adj[f2].append((f1, e))
    return adj


def dual_path(mp: CMap, f_from, f_to):
    """Canonical dual path between two faces: BFS-shortest, lexicographic
    tie-break on edge ids, confined to the fundamental domain on the torus.
    Returns the list of primal edges crossed."""
    adj = dual_adjacency(mp)
    for f in adj:
        adj[f].sort(key=lambda t: t[1])
    prev = {f_from: None}
    frontier = [f_from]
    while frontier and f_to not in prev:
        nxt = []
        for f in frontier:
            for g, e in adj[f]:
                if g not in prev:
                    prev[g] = (f, e)
                    nxt.append(g)
        frontier = nxt
    if f_to not in prev:
        raise ValueError("faces are not connected inside the domain")
    path = []
    f = f_to
    while prev[f] is not None:
        f, e = prev[f]
        path.append(e)
    path.reverse()
    return path


def flip_marks(path_edges):
    """Edges flipped by a disorder line, with mod-2 cancellation."""
    out = set()
    for e in path_edges:
        out ^= {e}
    return frozenset(out)


# -- toroidal sector sums -----------------------------------------------------------


def sector_sums(mp, weights, spin_sets, flipped=()):
    """Dict (a, b) -> list of exact unnormalized sums, one per spin set."""
    out = {}
    sectors = [(1, 1)] if mp.surface == "plane" else \
        [(1, 1), (-1, 1), (1, -1), (-1, -1)]
    for ab in sectors:
        ens = SpinEnsemble(mp, weights, sector=ab, flipped=flipped)
        out[ab] = ens.measure(spin_sets)
    return out


def qsum(sums_by_sector, mu, nu, k=0):
    """The (mu, nu) combination  sum_{h,v} q(h,v) h^mu v^nu <X>^{hv}."""
    tot = 0
    for (h, v), vals in sums_by_sector.items():
        tot = tot + q_pair(h, v) * (h ** mu) * (v ** nu) * vals[k]
    return tot
