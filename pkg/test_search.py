import pytest

import search
from critical import is_bridge_friendly, lyubeznik_minimal
from errors import CapExceededError, IntegrityError, SpecInconsistencyError
from graphs import Graph, build_labc, build_named, cycle_graph, edge_ideal, path_graph, star_graph
from ideal import Monomial, hhz_subideal, minimalize, power
from search import (
    SearchResult,
    exists_bf_order,
    exists_lyubeznik_order,
    feasible_min_bf,
    first_order_with_minimum,
    is_restriction_of,
    restriction_for_power,
    symmetries,
)
from store import OutcomeStore


def triangle():
    return edge_ideal(cycle_graph(3))


def fmt(I, gens):
    return sorted(I.format_monomial(g) for g in gens)


class TestSymmetries:
    def test_group_sizes(self):
        assert len(symmetries(triangle())) == 6
        assert len(symmetries(edge_ideal(path_graph(3)))) == 2
        assert len(symmetries(edge_ideal(cycle_graph(4)))) == 8

    def test_identity_first(self):
        group = symmetries(edge_ideal(cycle_graph(4)))
        assert group[0] == (0, 1, 2, 3)
        assert len(set(group)) == len(group)

    def test_symmetry_does_not_change_results(self):
        ideals = [edge_ideal(cycle_graph(n)) for n in (3, 4, 5)] + [
            edge_ideal(build_named("paw")), power(edge_ideal(path_graph(3)), 2), edge_ideal(star_graph(3))]
        for I in ideals:
            for check in (exists_bf_order, exists_lyubeznik_order):
                plain = check(I)
                reduced = check(I, use_symmetry=True)
                assert plain.result == reduced.result
                assert reduced.stats.examined <= plain.stats.examined


class TestExistence:
    @pytest.mark.parametrize("n, expected", [
        (3, SearchResult.WITNESS_FOUND),
        (4, SearchResult.EXHAUSTED_NEGATIVE),
        (5, SearchResult.WITNESS_FOUND),
        (6, SearchResult.WITNESS_FOUND),
    ])
    def test_bridge_friendly_cycles(self, n, expected):
        I = edge_ideal(cycle_graph(n))
        outcome = exists_bf_order(I)
        assert outcome.result is expected
        if outcome.witness is not None:
            assert is_bridge_friendly(I, outcome.witness)

    def test_lyubeznik_negative(self):
        outcome = exists_lyubeznik_order(edge_ideal(path_graph(5)))
        assert outcome.result is SearchResult.EXHAUSTED_NEGATIVE
        assert outcome.stats.examined == 24

    def test_lyubeznik_positive(self):
        I = edge_ideal(build_labc(1, 1, 1))
        outcome = exists_lyubeznik_order(I)
        assert outcome.result is SearchResult.WITNESS_FOUND
        assert lyubeznik_minimal(I, outcome.witness).minimal

    def test_path_square_is_lyubeznik(self):
        outcome = exists_lyubeznik_order(power(edge_ideal(path_graph(3)), 2))
        assert outcome.result is SearchResult.WITNESS_FOUND

    def test_budget(self):
        outcome = exists_bf_order(edge_ideal(cycle_graph(4)), budget=5)
        assert outcome.result is SearchResult.BUDGET_EXCEEDED
        assert outcome.stats.examined == 5
        assert outcome.stats.next_rank == 5

    def test_outcome_json(self):
        doc = exists_bf_order(edge_ideal(cycle_graph(5))).to_json()
        assert doc["result"] == "witness_found"
        assert doc["witness"].count(",") == 4
        assert doc["stats"]["total_orders"] == 120

    def test_generator_cap(self):
        I = power(minimalize([Monomial((1, 0)), Monomial((0, 1))]), 12)
        with pytest.raises(CapExceededError):
            exists_bf_order(I)

    def test_result_independent_of_workers(self, monkeypatch):
        monkeypatch.setattr(search, "BLOCK_SIZE", 7)
        I = edge_ideal(cycle_graph(5))
        single = exists_bf_order(I, jobs=1)
        pooled = exists_bf_order(I, jobs=3)
        assert single.witness_rank == pooled.witness_rank
        assert single.stats.examined == pooled.stats.examined

    def test_budget_split_across_blocks(self, monkeypatch):
        monkeypatch.setattr(search, "BLOCK_SIZE", 4)
        outcome = exists_bf_order(edge_ideal(cycle_graph(4)), budget=10, jobs=2)
        assert outcome.result is SearchResult.BUDGET_EXCEEDED
        assert outcome.stats.examined == 10
        assert outcome.stats.next_rank == 10


class TestCache:
    def test_resume_after_budget(self, tmp_path):
        store = OutcomeStore(str(tmp_path / "cache.db"))
        I = edge_ideal(cycle_graph(4))
        first = exists_bf_order(I, budget=5, store=store)
        assert first.result is SearchResult.BUDGET_EXCEEDED
        resumed = exists_bf_order(I, store=store)
        assert resumed.result is SearchResult.EXHAUSTED_NEGATIVE
        assert resumed.stats.examined == 24

    def test_cached_witness(self, tmp_path):
        store = OutcomeStore(str(tmp_path / "cache.db"))
        I = edge_ideal(cycle_graph(5))
        first = exists_bf_order(I, store=store)
        again = exists_bf_order(I, store=store)
        assert again.result is SearchResult.WITNESS_FOUND
        assert again.witness == first.witness


class TestFeasibleMinima:
    def test_triangle_square_by_brute_force(self):
        square = power(triangle(), 2)
        assert fmt(square, feasible_min_bf(square, base=True)) == ["x1*x2*x3^2", "x1*x2^2*x3", "x1^2*x2*x3"]

    def test_first_order_with_minimum(self):
        square = power(triangle(), 2)
        g = square.parse_monomial("x1^2*x2*x3")
        order = first_order_with_minimum(square, g)
        assert order is not None and order.minimum() == g
        assert is_bridge_friendly(square, order)
        assert first_order_with_minimum(square, square.parse_monomial("x1^2*x2^2")) is None

    def _restrictions(self, n, below):
        specs = []
        for i in range(3):
            m = [n] * 3
            m[i] = n - 1
            f = [1] * 3
            f[i] = 0
            specs.append(restriction_for_power(triangle(), n, Monomial(tuple(m)), Monomial(tuple(f)), below))
        return specs

    def test_triangle_cube_and_fourth_power(self):
        square, cube, fourth = (power(triangle(), n) for n in (2, 3, 4))
        below = [square.parse_monomial(g) for g in ("x1^2*x2*x3", "x1*x2^2*x3", "x1*x2*x3^2")]
        cube_minima = feasible_min_bf(cube, self._restrictions(3, below))
        assert fmt(cube, cube_minima) == ["x1^2*x2^2*x3^2"]
        assert feasible_min_bf(fourth, self._restrictions(4, cube_minima)) == frozenset()

    def test_restrictions_only_widen_the_brute_force_minima(self):
        square = power(triangle(), 2)
        brute = feasible_min_bf(square, base=True)
        from_edges = feasible_min_bf(square, self._restrictions(2, feasible_min_bf(triangle(), base=True)))
        assert brute <= from_edges
        outcome = exists_bf_order(square)
        assert outcome.result is SearchResult.WITNESS_FOUND
        assert outcome.witness.minimum() in brute
        for g in brute:
            assert first_order_with_minimum(square, g).minimum() == g

    def test_inconsistent_restriction(self):
        with pytest.raises(SpecInconsistencyError):
            restriction_for_power(triangle(), 3, Monomial((2, 3, 3)), Monomial((1, 0, 1)), [])

    def test_restriction_of_other_ideal(self):
        spec = restriction_for_power(triangle(), 3, Monomial((2, 3, 3)), Monomial((0, 1, 1)), [])
        with pytest.raises(SpecInconsistencyError):
            feasible_min_bf(power(triangle(), 4), [spec])


class TestRestrictionConsistency:
    @pytest.fixture(autouse=True)
    def fresh_registry(self, monkeypatch):
        monkeypatch.setattr(search, "_settled", {})

    def _four_cycle_with_pendant(self):
        G = Graph.from_edges([("x1", "x2"), ("x2", "x3"), ("x3", "x4"), ("x4", "x1"), ("x1", "x5")])
        I = edge_ideal(G)
        return I, hhz_subideal(I, I.parse_monomial("x1*x2*x3*x4"))

    def test_is_restriction_of(self):
        I, sub = self._four_cycle_with_pendant()
        assert len(sub) == 4
        assert is_restriction_of(sub, I)
        assert not is_restriction_of(I, sub)
        assert not is_restriction_of(edge_ideal(cycle_graph(4)), I)

    def test_consistent_searches_are_recorded(self):
        I = edge_ideal(cycle_graph(5))
        sub = hhz_subideal(I, I.parse_monomial("x1*x2*x3"))
        assert exists_bf_order(I).result is SearchResult.WITNESS_FOUND
        assert exists_bf_order(sub).result is SearchResult.WITNESS_FOUND
        assert search._settled[("bridge-friendly", I)] is True
        assert search._settled[("bridge-friendly", sub)] is True

    def test_budgeted_searches_are_not_recorded(self):
        exists_bf_order(edge_ideal(cycle_graph(4)), budget=3)
        assert search._settled == {}

    def test_negative_restriction_contradicts_recorded_parent(self):
        I, sub = self._four_cycle_with_pendant()
        search._settled[("bridge-friendly", I)] = True
        with pytest.raises(IntegrityError):
            exists_bf_order(sub)

    def test_recorded_negative_restriction_contradicts_parent(self):
        I = edge_ideal(cycle_graph(5))
        sub = hhz_subideal(I, I.parse_monomial("x1*x2*x3"))
        search._settled[("bridge-friendly", sub)] = False
        with pytest.raises(IntegrityError):
            exists_bf_order(I)

    def test_other_predicates_are_independent(self):
        I, sub = self._four_cycle_with_pendant()
        search._settled[("lyubeznik", I)] = True
        assert exists_bf_order(sub).result is SearchResult.EXHAUSTED_NEGATIVE


@pytest.mark.slow
def test_seven_cycle_is_not_bridge_friendly():
    assert exists_bf_order(edge_ideal(cycle_graph(7)), jobs=2).result is SearchResult.EXHAUSTED_NEGATIVE


@pytest.mark.slow
def test_k4_is_not_bridge_friendly():
    I = edge_ideal(Graph.from_edges([(a, b) for a in "abcd" for b in "abcd" if a < b]))
    assert exists_bf_order(I).result is SearchResult.EXHAUSTED_NEGATIVE
