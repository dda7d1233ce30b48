"""Exact weighted counting, the exponential-formula oracle, and the
core-size decomposition."""

import math
from fractions import Fraction

import pytest

from minorclass.enumeration import (
    brute_force_tau,
    build_census,
    cayley_tree_weights,
    census_labelled_total,
    compute_weight_table,
    core_decomposition_identity,
    egf_lift,
    exact_frag_mean,
    f_nk,
    f_nk_bruteforce,
    factorial_growth_check,
    falling_moment_check,
    forest_table,
    ratio_sequence,
)
from minorclass.errors import ResourceCapError
from minorclass.families import builtin_family, excluded_minor_family
from minorclass.graphs import Graph, Weighting, complete_graph, path_graph

FORESTS = builtin_family("forests")
TREES = builtin_family("trees")
ALL = builtin_family("all")
W11 = Weighting(1, 1)


def test_brute_force_examples():
    assert brute_force_tau(TREES, Weighting(2, 3), 5).c == 6000
    assert brute_force_tau(FORESTS, W11, 3).a == 7
    t0 = brute_force_tau(FORESTS, W11, 0)
    assert (t0.a, t0.c, t0.b) == (1, 0, 0)


def test_known_forest_sequence():
    got = [brute_force_tau(FORESTS, W11, n).a for n in range(7)]
    assert got == [1, 1, 2, 7, 38, 291, 2932]


def test_cap_errors():
    with pytest.raises(ResourceCapError):
        brute_force_tau(FORESTS, W11, 8)  # needs the explicit cap=8 override
    with pytest.raises(ResourceCapError):
        brute_force_tau(FORESTS, W11, 9, cap=9)  # hard limit


def test_weighted_counts_are_exact_fractions():
    w = Weighting(Fraction(1, 2), Fraction(3, 2))
    t = brute_force_tau(FORESTS, w, 4)
    # 38 forests on 4 vertices, graded by edges and components
    direct = sum(Fraction(1, 2) ** g.edge_count * Fraction(3, 2) ** _kappa(g)
                 for g in _all_forests(4))
    assert t.a == direct


def _all_forests(n):
    from minorclass.graphs import is_forest

    for mask in range(1 << (n * (n - 1) // 2)):
        g = Graph(n, mask)
        if is_forest(g):
            yield g


def _kappa(g):
    from minorclass.graphs import component_count

    return component_count(g)


@pytest.mark.parametrize("lam,nu", [(1, 1), (2, 3), (Fraction(1, 2), 1)])
def test_egf_lift_matches_brute_force(lam, nu):
    w = Weighting(lam, nu)
    lifted = egf_lift(cayley_tree_weights(w, 6), 6)
    brute = [brute_force_tau(FORESTS, w, n).a for n in range(7)]
    assert lifted == brute


@pytest.mark.parametrize("name", ["all", "series-parallel", "planar"])
@pytest.mark.parametrize("lam,nu", [(1, 1), (2, 3)])
def test_exponential_formula_for_decomposable_families(name, lam, nu):
    """For a decomposable family, lifting the brute-force connected sequence
    must reproduce the brute-force all-member sequence exactly."""
    fam = builtin_family(name)
    w = Weighting(lam, nu)
    n_max = 5
    c = [brute_force_tau(fam, w, n).c for n in range(n_max + 1)]
    a = [brute_force_tau(fam, w, n).a for n in range(n_max + 1)]
    assert egf_lift(c, n_max) == a


def test_egf_lift_single_vertex_class():
    # only K1 connected: the lift gives nu^n (edgeless graphs)
    nu = 3
    c = [0] + [nu] + [0] * 5
    assert egf_lift(c, 6) == [nu ** n for n in range(7)]


def test_egf_lift_validation():
    with pytest.raises(ValueError):
        egf_lift([1, 1], 1)


def test_ratio_sequence_examples():
    # trees: r_4 = 4 * c_3 / c_4 = 0.75 at lam = 1
    c = cayley_tree_weights(W11, 5)
    r = ratio_sequence(c)
    assert r[4] == Fraction(3, 4)
    # edgeless family: a_n = nu^n so r_n = n / nu
    edgeless = excluded_minor_family("edgeless", (complete_graph(2),))
    w = Weighting(1, 3)
    table = compute_weight_table(edgeless, w, 5)
    assert table.a == [3 ** n for n in range(6)]
    assert table.ratios("a")[5] == Fraction(5, 3)
    # lifted forests ratio at n = 5
    table = forest_table(W11, 5)
    assert table.ratios("a")[5] == Fraction(5 * 38, 291)


def test_table_invariants():
    for fam in (FORESTS, builtin_family("series-parallel")):
        for w in (W11, Weighting(2, 3)):
            table = compute_weight_table(fam, w, 6)
            assert table.a[0] == 1 and table.c[0] == 0
            lower = math.exp(-float(w.nu) / float(w.lam))
            for n in range(1, 7):
                assert table.c[n] <= table.a[n]
                # bridge-addable bound on the connectivity probability
                assert float(Fraction(table.c[n], 1) / Fraction(table.a[n], 1)) >= lower


def test_tau_monotone_in_lambda_and_nu():
    base = compute_weight_table(FORESTS, W11, 5).a
    more_lam = compute_weight_table(FORESTS, Weighting(2, 1), 5).a
    more_nu = compute_weight_table(FORESTS, Weighting(1, 2), 5).a
    for n in range(1, 6):
        assert more_lam[n] >= base[n]
        assert more_nu[n] >= base[n]


def test_forest_table_long_range():
    table = forest_table(W11, 60)
    assert table.a[:7] == [1, 1, 2, 7, 38, 291, 2932]
    p = [float(Fraction(table.c[n], table.a[n])) for n in (20, 40, 60)]
    limit = math.exp(-0.5)
    assert abs(p[-1] - limit) < 0.05
    assert abs(p[0] - limit) > abs(p[-1] - limit)


@pytest.mark.parametrize("lam,nu", [(1, 1), (2, 3)])
def test_f_nk_formula_and_cross_check(lam, nu):
    w = Weighting(lam, nu)
    b3 = brute_force_tau(ALL, w, 3).b
    val = f_nk(ALL, w, 4, 3, b3)
    assert val == 12 * Fraction(lam) ** 4 * nu
    assert f_nk_bruteforce(ALL, w, 4, 3) == val
    # f(n, n) is the min-degree-2 total itself
    b5 = brute_force_tau(ALL, w, 5).b
    assert f_nk(ALL, w, 5, 5, b5) == b5
    assert f_nk_bruteforce(ALL, w, 5, 5) == b5


def test_f_nk_zero_for_forests():
    b = brute_force_tau(FORESTS, W11, 5).b
    assert b == 0
    assert f_nk(FORESTS, W11, 5, 4, 0) == 0


def test_f_nk_rejects_non_trimmable():
    fam = excluded_minor_family("ex-p3", (path_graph(3),))
    with pytest.raises(ValueError):
        f_nk(fam, W11, 5, 3, 1)


@pytest.mark.parametrize("lam,nu", [(1, 1), (2, 3)])
@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_core_decomposition_identity_all_graphs(lam, nu, n):
    lhs, rhs = core_decomposition_identity(ALL, Weighting(lam, nu), n)
    assert lhs == rhs


def test_core_decomposition_identity_other_trimmable():
    lhs, rhs = core_decomposition_identity(builtin_family("ex-k-disjoint-cycles:1"), W11, 5)
    assert lhs == rhs
    lhs, rhs = core_decomposition_identity(builtin_family("series-parallel"), Weighting(2, 3), 5)
    assert lhs == rhs


def test_factorial_growth():
    trees_table = compute_weight_table(TREES, W11, 6)
    rep = factorial_growth_check(trees_table, 0.3)
    assert rep.holds
    table = forest_table(W11, 7)
    rep = factorial_growth_check(table, 0.3)
    assert rep.holds
    # the edgeless family forces eta down like 1/n
    edgeless = excluded_minor_family("edgeless", (complete_graph(2),))
    t = compute_weight_table(edgeless, W11, 6)
    rep = factorial_growth_check(t, 0.3)
    assert not rep.holds
    assert rep.eta_max[6] < rep.eta_max[3]


def test_census_forests_n3():
    census = build_census(FORESTS, 3)
    assert [(en.v, en.e, en.aut) for en in census.entries] == [(1, 0, 1), (2, 1, 2), (3, 2, 2)]
    assert census_labelled_total(census, W11, 3) == 3 == brute_force_tau(FORESTS, W11, 3).c


def test_census_planar_n3_has_triangle():
    census = build_census(builtin_family("planar"), 3)
    auts = sorted((en.v, en.e, en.aut) for en in census.entries)
    assert (3, 3, 6) in auts  # the triangle
    w = Weighting(2, 3)
    for n in (1, 2, 3):
        assert census_labelled_total(census, w, n) == brute_force_tau(builtin_family("planar"), w, n).c


def test_census_consistency_larger():
    census = build_census(FORESTS, 6)
    assert len(census.entries) == 14  # unlabelled trees with at most 6 vertices
    for n in range(1, 7):
        assert census_labelled_total(census, W11, n) == brute_force_tau(FORESTS, W11, n).c


def test_falling_moment_identity():
    k1 = Graph(1, 0)
    k2 = Graph.from_edges(2, [(1, 2)])
    assert falling_moment_check(FORESTS, W11, 4, [(k1, 1)]) == 0
    assert falling_moment_check(FORESTS, W11, 5, [(k2, 2)], rho=Fraction(7, 5)) == 0
    assert falling_moment_check(FORESTS, W11, 6, [(k1, 1), (k2, 1)]) == 0
    # empty picks: both sides are 1
    assert falling_moment_check(FORESTS, W11, 4, []) == 0
    # also under a genuinely weighted measure
    assert falling_moment_check(FORESTS, Weighting(2, 3), 5, [(k1, 2)]) == 0


def test_exact_frag_mean_bound():
    # bridge-addable bound E[frag] < 2 nu / lam
    for fam in (FORESTS, builtin_family("series-parallel")):
        for w in (W11, Weighting(2, 3)):
            mean = exact_frag_mean(fam, w, 5)
            assert float(mean) < 2 * float(w.nu) / float(w.lam)


def test_extended_weighting_counts():
    wext = Weighting.extended(2, 1, 5)
    t = brute_force_tau(ALL, wext, 4)
    from minorclass.graphs import weight

    direct = sum(weight(Graph(4, m), wext) for m in range(1 << 6))
    assert t.a == direct
    direct_c = sum(weight(Graph(4, m), wext) for m in range(1 << 6) if _kappa(Graph(4, m)) == 1)
    assert t.c == direct_c
