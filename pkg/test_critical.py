import itertools
from math import comb

import pytest

from betti import betti_table, euler_check, minimality_verdict
from critical import (
    BridgeFriendlyAlgorithm,
    CellFamily,
    GenSubset,
    MorseAnalyzer,
    TotalOrder,
    analyze_subset,
    bridge_friendly_obstruction,
    critical_cells,
    cycle_obstruction,
    format_subset,
    is_bm_minimal,
    is_bridge_friendly,
    is_lyubeznik_critical,
    lyubeznik_critical_triple,
    lyubeznik_minimal,
    order_for_bf,
    order_for_labc,
    shares_unique_factor,
    subset_type,
    taylor_cells,
)
from errors import IllegalParameterError
from graphs import EdgeWeightedTree, Graph, build_bf, build_labc, cycle_graph, edge, edge_ideal
from ideal import Monomial, minimalize, power, scale


@pytest.fixture
def square():
    """I(C4) on w, x, y, z with the order wx > xy > yz > wz."""
    I = edge_ideal(Graph.from_edges([("w", "x"), ("x", "y"), ("y", "z"), ("z", "w")]))
    return I, TotalOrder.parse(I, "w*x,x*y,y*z,w*z")


def test_total_order_validation(square):
    I, _ = square
    with pytest.raises(IllegalParameterError):
        TotalOrder(I, (0, 1, 2, 2))
    with pytest.raises(IllegalParameterError):
        TotalOrder.parse(I, "w*x,x*y,y*z")


def test_total_order_helpers(square):
    I, order = square
    assert order.format() == "w*x,x*y,y*z,w*z"
    assert order.minimum() == I.parse_monomial("w*z")
    assert order.dominates(I.index(I.parse_monomial("w*x")), I.index(I.parse_monomial("y*z")))


def test_lyubeznik_criticality(square):
    I, order = square
    assert not is_lyubeznik_critical(I, order, GenSubset.parse(I, "w*x,x*y,y*z"))
    assert is_lyubeznik_critical(I, order, GenSubset.parse(I, "w*x,x*y,w*z"))


def test_bridges_and_true_gaps(square):
    I, order = square
    analysis = analyze_subset(I, order, GenSubset.parse(I, "w*x,x*y,y*z"))
    assert format_subset(I, analysis.bridges) == ["x*y"]
    assert format_subset(I, analysis.true_gaps) == ["w*z"]
    assert I.gens[analysis.sbridge] == I.parse_monomial("x*y")


def test_subset_types(square):
    I, order = square
    assert subset_type(I, order, GenSubset.parse(I, "w*x,x*y,y*z")).type1
    second = subset_type(I, order, GenSubset.parse(I, "w*x,x*y,w*z"))
    assert second.ptype2 and not second.type2
    whole = subset_type(I, order, GenSubset(I, 0b1111))
    assert whole.type2 and not whole.bm_critical


def test_lyubeznik_cells_of_square(square):
    I, order = square
    cells = critical_cells(I, order, CellFamily.LYUBEZNIK)
    assert cells.totals() == [1, 4, 5, 2, 0]
    assert euler_check(cells, betti_table(I))


def test_lyubeznik_minimal_witness(square):
    I, order = square
    verdict = lyubeznik_minimal(I, order)
    assert not verdict.minimal
    assert format_subset(I, verdict.cell) == ["w*x", "w*z", "x*y"]
    assert I.gens[verdict.bridge] == I.parse_monomial("w*x")


def test_square_is_not_bridge_friendly(square):
    I, order = square
    assert not is_bridge_friendly(I, order)
    assert not is_bridge_friendly(I, order, BridgeFriendlyAlgorithm.LEMMA)
    assert bridge_friendly_obstruction(I, order) is not None


def test_taylor_cells_are_binomial(square):
    I, _ = square
    assert taylor_cells(I).totals() == [comb(4, i) for i in range(5)]


def test_labc_orders_give_minimal_lyubeznik():
    for a, b, c in [(0, 0, 0), (1, 1, 1), (2, 0, 1), (0, 2, 2)]:
        I = edge_ideal(build_labc(a, b, c))
        assert lyubeznik_minimal(I, order_for_labc(a, b, c)).minimal


def test_bf_order_is_bridge_friendly():
    tree = Graph.from_edges([("a", "b"), ("b", "c")])
    tw = EdgeWeightedTree(tree, {edge("a", "b"): 1, edge("b", "c"): 2})
    I = edge_ideal(build_bf(tw))
    for root in tree.vertices:
        order = order_for_bf(tw, root)
        assert is_bridge_friendly(I, order)
        assert is_bm_minimal(I, order)


def test_algorithms_agree_on_all_orders_of_small_ideals():
    ideals = [edge_ideal(cycle_graph(4)), edge_ideal(cycle_graph(5)),
              power(edge_ideal(Graph.from_edges([("x1", "x2"), ("x2", "x3")])), 2)]
    for I in ideals:
        for ranking in itertools.permutations(range(len(I))):
            an = MorseAnalyzer(TotalOrder(I, ranking))
            assert an.is_bridge_friendly() == an.is_bridge_friendly("lemma")


def test_bridge_friendly_orders_are_minimal():
    I = edge_ideal(cycle_graph(5))
    betti = betti_table(I)
    friendly = 0
    for ranking in itertools.permutations(range(len(I))):
        order = TotalOrder(I, ranking)
        if is_bridge_friendly(I, order):
            friendly += 1
            assert minimality_verdict(critical_cells(I, order, CellFamily.BARILE_MACCHIA), betti).minimal
    assert friendly > 0


def test_lyubeznik_cells_are_subset_closed():
    I = power(edge_ideal(cycle_graph(3)), 2)
    an = MorseAnalyzer(TotalOrder.identity(I))
    cells = set(an.lyubeznik_cells())
    for s in cells:
        for t in range(s):
            if t & s == t:
                assert t in cells
    assert cells == {s for s in range(an.size) if an.is_lyubeznik_critical(s)}


def test_shares_unique_factor():
    names = ("x1", "x2", "x3", "x4")
    I = minimalize([Monomial.parse(g, names) for g in ("x1*x2", "x1*x3", "x1*x4")], 4, names)
    a, b, c = (I.index(I.parse_monomial(g)) for g in ("x1*x2", "x1*x3", "x1*x4"))
    assert shares_unique_factor(I, (1 << a) | (1 << b), a, b) == (0, 1)
    assert shares_unique_factor(I, (1 << a) | (1 << b) | (1 << c), a, b) is None


def test_critical_triple_in_powers_of_the_maximal_ideal():
    I = power(minimalize([Monomial((1, 0)), Monomial((0, 1))]), 3)
    for ranking in itertools.permutations(range(len(I))):
        assert lyubeznik_critical_triple(I, TotalOrder(I, ranking)) is not None


def test_square_of_the_maximal_ideal_with_xy_last():
    I = power(minimalize([Monomial((1, 0)), Monomial((0, 1))]), 2)
    order = TotalOrder.from_monomials(I, [Monomial((2, 0)), Monomial((0, 2)), Monomial((1, 1))])
    assert lyubeznik_critical_triple(I, order) is None
    assert lyubeznik_minimal(I, order).minimal


@pytest.mark.parametrize("n", [7, 8, 9])
def test_cycle_obstruction(n):
    I = edge_ideal(cycle_graph(n))
    for ranking in [tuple(range(n)), tuple(reversed(range(n))), tuple(range(1, n)) + (0,)]:
        ob = cycle_obstruction(n, TotalOrder(I, ranking))
        assert bin(ob.tau).count("1") == 3


def test_cycle_obstruction_needs_seven():
    I = edge_ideal(cycle_graph(6))
    with pytest.raises(IllegalParameterError):
        cycle_obstruction(6, TotalOrder.identity(I))


def test_order_bound_to_other_ideal(square):
    _, order = square
    other = edge_ideal(cycle_graph(5))
    with pytest.raises(IllegalParameterError):
        is_bridge_friendly(other, order)


def test_restrict_and_transport(square):
    I, order = square
    sub = minimalize([I.parse_monomial("x*y"), I.parse_monomial("w*z")], 4, I.var_names)
    assert order.restrict_to(sub).format() == "x*y,w*z"
    scaled = scale(I.parse_monomial("w"), I)
    assert order.transport(scaled).ranking == order.ranking
