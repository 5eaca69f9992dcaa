"""Matching sums and the six-vertex <-> dimer correspondence."""

from fractions import Fraction

import pytest

from bosonize.dimers import (CitiesGraph, CollapsedCities, dimer_measure,
                             matching_sum, matchings_iter, slope_class)
from bosonize.exactnum import QSqrt2, W_CRITICAL, as_scalar
from bosonize.ising import BudgetExceeded, kw_dual_weight
from bosonize.planemaps import square_torus
from bosonize.vertexmodels import (EightVertex, NuObs, VertexEnsemble,
                                   epsilon_obs, seam_cycle_a, seam_cycle_b,
                                   spin_pair_obs)


def kw_sixv(n, m, ws):
    """Six-vertex weights from dual-paired double-Ising couplings."""
    t = square_torus(n, m)
    med = t.medial()
    wd = [kw_dual_weight(w) for w in ws]
    coupled = EightVertex.from_couplings(med, ws, wd)
    sixv = coupled.sign_flipped().dual()
    for e in range(t.ne):
        assert sixv.is_six_vertex(e)
        assert sixv.is_free_fermion(e)
    return t, med, sixv


def test_matching_sum_basics():
    a, b, c, d = (Fraction(x) for x in (2, 3, 5, 7))
    # single edge
    assert matching_sum(2, [(0, 1)], [a]) == a
    # a path of three vertices has no perfect matching
    assert matching_sum(3, [(0, 1), (1, 2)], [a, b]) == 0
    # 4-cycle: two matchings
    cyc = [(0, 1), (1, 2), (2, 3), (3, 0)]
    assert matching_sum(4, cyc, [a, b, c, d]) == a * c + b * d
    # parallel edges add
    assert matching_sum(2, [(0, 1), (0, 1)], [a, b]) == a + b
    # K4 has three perfect matchings
    k4 = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]
    assert matching_sum(4, k4, [Fraction(1)] * 6) == 3


def test_matching_sum_demands():
    a, b, c, d = (Fraction(x) for x in (2, 3, 5, 7))
    cyc = [(0, 1), (1, 2), (2, 3), (3, 0)]
    # deleting two opposite vertices of a 4-cycle leaves no edge
    assert matching_sum(4, cyc, [a, b, c, d], demand=[1, 0, 1, 0]) == 0
    # deleting two adjacent ones leaves exactly the opposite edge
    assert matching_sum(4, cyc, [a, b, c, d], demand=[0, 1, 1, 0]) == b
    # a doubled center picks an unordered pair of its edges
    star = [(0, 1), (0, 2), (0, 3)]
    assert matching_sum(4, star, [a, b, c], demand=[2, 1, 1, 0]) == a * b
    assert matching_sum(4, star, [a, b, c], demand=[2, 1, 1, 1]) == 0
    tri = [(0, 1), (0, 2), (1, 2)]
    assert matching_sum(3, tri, [a, b, c], demand=[2, 1, 1]) == a * b
    with pytest.raises(ValueError):
        matching_sum(2, [(0, 1)], [a], demand=[3, 1])
    with pytest.raises(ValueError):
        matching_sum(1, [(0, 0)], [a])


def test_matching_iter_masks():
    a = Fraction(1)
    cyc = [(0, 1), (1, 2), (2, 3), (3, 0)]
    found = sorted(mask for mask, _ in matchings_iter(4, cyc, [a] * 4))
    assert found == [0b0101, 0b1010]


def test_matching_budget_guard(monkeypatch):
    monkeypatch.setenv("BOSONIZE_BUDGET", "3")
    cyc = [(i, (i + 1) % 12) for i in range(12)]
    with pytest.raises(BudgetExceeded):
        matching_sum(12, cyc, [Fraction(1)] * 12)


def test_cities_graph_structure():
    t, med, sixv = kw_sixv(2, 1, [Fraction(1, 3)] * 4)
    cg = CitiesGraph(sixv)
    assert cg.nflags == 2 * t.nd == 16
    assert len(cg.edges) == t.nd + 4 * t.ne == 24
    deg = [0] * cg.nflags
    for u, v in cg.edges:
        deg[u] += 1
        deg[v] += 1
        # roads and streets all join a black flag to a white flag
        assert cg.is_black(u) != cg.is_black(v)
    assert set(deg) == {3}
    # a flag lookup away from the corner's two cities is rejected
    with pytest.raises(ValueError):
        cg.flag(3, 0)
    # the coupled model itself has crossing weight w w' != 0
    coupled = EightVertex.from_couplings(
        med, [Fraction(1, 3)] * 4, [Fraction(1, 2)] * 4)
    with pytest.raises(ValueError):
        CitiesGraph(coupled)


def z_dimer(cg):
    return cg.z_prefactor() * matching_sum(cg.nflags, cg.edges, cg.wt)


def test_partition_identity_small_tori():
    cases = [
        kw_sixv(1, 1, [Fraction(1, 3), Fraction(2, 5)]),
        kw_sixv(2, 1, [Fraction(1, 3)] * 4),
        kw_sixv(2, 1, [Fraction(1, 3), Fraction(1, 4),
                       Fraction(2, 5), Fraction(1, 2)]),
    ]
    for t, med, sixv in cases:
        zv = VertexEnsemble(sixv).z()
        zd = z_dimer(CitiesGraph(sixv))
        assert zd == zv
        assert zv != 0


def test_partition_identity_critical_torus():
    t, med, sixv = kw_sixv(2, 2, [W_CRITICAL] * 8)
    zv = VertexEnsemble(sixv).z()
    zd = z_dimer(CitiesGraph(sixv))
    assert isinstance(zd, QSqrt2)
    assert zd == zv


def test_observable_transport():
    ws = [Fraction(1, 3), Fraction(1, 4), Fraction(2, 5), Fraction(1, 2)]
    t, med, sixv = kw_sixv(2, 1, ws)
    cg = CitiesGraph(sixv)
    obs = [
        NuObs(),
        spin_pair_obs(med, [0]),
        epsilon_obs(seam_cycle_a(med)),
        epsilon_obs(seam_cycle_b(med)),
        spin_pair_obs(med, [0]) * epsilon_obs(seam_cycle_a(med)),
    ]
    vertex_side = VertexEnsemble(sixv).measure(obs)
    pre = cg.z_prefactor()
    dimer_side = [pre * x for x in dimer_measure(cg, obs)]
    assert dimer_side == vertex_side


def config_weight_tables(sixv):
    med = sixv.med
    tables = [sixv.city_table(e) for e in range(med.base.ne)]
    cities = [med.city(e) for e in range(med.base.ne)]
    return tables, cities


def each_nonzero_config(sixv):
    tables, cities = config_weight_tables(sixv)
    nbits = sixv.med.base.nd
    for cfg in range(1 << nbits):
        w = as_scalar(1)
        for tbl, p in zip(tables, cities):
            idx = (((cfg >> p[0]) & 1) | (((cfg >> p[1]) & 1) << 1)
                   | (((cfg >> p[2]) & 1) << 2) | (((cfg >> p[3]) & 1) << 3))
            we = tbl[idx]
            if not we:
                w = None
                break
            w = w * we
        if w is not None:
            yield cfg, w


def test_collapsed_cover_identity_rational():
    ws = [Fraction(1, 3), Fraction(1, 4), Fraction(2, 5), Fraction(1, 2)]
    t, med, sixv = kw_sixv(2, 1, ws)
    csq = CollapsedCities(sixv)
    prefactor = as_scalar(1)
    for e in range(t.ne):
        prefactor = prefactor * sixv.om56[e]
    total = as_scalar(0)
    ncfg = 0
    multi = 0
    for cfg, w in each_nonzero_config(sixv):
        covers = list(matchings_iter(
            csq.nsites,
            [csq.edges[i] for i in csq.eligible_streets(cfg)],
            [csq.wt[i] for i in csq.eligible_streets(cfg)]))
        got = sum((x for _, x in covers), as_scalar(0))
        assert got * prefactor == w
        ncfg += 1
        if len(covers) > 1:
            multi += 1
        total = total + got
    assert ncfg > 2
    # fully aligned cities admit two street completions
    assert multi > 0
    assert total * prefactor == VertexEnsemble(sixv).z()


def test_collapsed_cover_identity_critical():
    t, med, sixv = kw_sixv(2, 2, [W_CRITICAL] * 8)
    csq = CollapsedCities(sixv)
    prefactor = as_scalar(1)
    for e in range(t.ne):
        prefactor = prefactor * sixv.om56[e]
    total = as_scalar(0)
    for cfg, w in each_nonzero_config(sixv):
        got = csq.cover_sum(cfg)
        assert got * prefactor == w
        total = total + got
    assert total * prefactor == VertexEnsemble(sixv).z()


def test_collapsed_colors_match_slopes():
    t, med, sixv = kw_sixv(2, 2, [W_CRITICAL] * 8)
    csq = CollapsedCities(sixv)
    slopes = [slope_class(med, c) for c in range(t.nd)]
    flip = slopes[0] != csq.black[0]
    assert all((s != b) == flip for s, b in zip(slopes, csq.black))
