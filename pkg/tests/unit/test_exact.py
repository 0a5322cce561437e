import time
import pytest
from itertools import combinations
from kpc.models import Instance, SolveStatus
from kpc.schemas import SolveLimits
from kpc.services.exact_service import (
    optimality_gap, preprocess, solve_bb, solve_oracle,
)
from kpc.services.instance_service import evaluate, validate_instance
from kpc.services.generator_service import SplitMix64, random_instance
from kpc.core.errors import LimitsInvalid, TooLargeForOracle

NO_LIMITS = SolveLimits()


@pytest.mark.unit
class TestPreprocess:
    def test_fig1_unchanged(self, fig1):
        """Test preprocessing keeps an instance without oversize items"""
        reduced, index_map = preprocess(fig1)
        assert reduced == fig1
        assert index_map == list(range(6))

    def test_oversize_item_removed(self, fig1_raw):
        """Test items heavier than the capacity are dropped and remapped"""
        fig1_raw["weights"][1] = 21
        inst = validate_instance(fig1_raw)
        reduced, index_map = preprocess(inst)
        assert index_map == [0, 2, 3, 4, 5]
        # edge {0,1} disappears, {0,4},{2,3},{2,4} re-indexed
        assert reduced.edges == ((0, 3), (1, 2), (1, 3))
        assert reduced.weights == (7, 4, 3, 6, 1)

    def test_all_oversize(self):
        """Test preprocessing can remove every item"""
        inst = validate_instance({"capacity": 3, "profits": [5, 6], "weights": [4, 9], "edges": [(0, 1)]})
        reduced, index_map = preprocess(inst)
        assert reduced.n == 0
        assert index_map == []
        result = solve_bb(inst, NO_LIMITS)
        assert result.status == SolveStatus.OPTIMAL
        assert result.profit == 0


@pytest.mark.unit
class TestBranchAndBound:
    """Exact solving of small instances"""

    def test_fig1_optimal(self, fig1):
        """Test the example solves to optimality quickly"""
        started = time.perf_counter()
        result = solve_bb(fig1, SolveLimits(time_limit=600))
        assert time.perf_counter() - started < 1.0
        assert result.status == SolveStatus.OPTIMAL
        assert result.profit == 21
        assert result.best.weight == 19
        assert result.best.feasible
        assert not any(i in result.best.selected and j in result.best.selected for i, j in fig1.edges)
        assert result.upper_bound == 21
        assert result.gap_percent == 0

    def test_empty_instance(self):
        """Test an empty instance is optimal at zero"""
        inst = validate_instance({"capacity": 0, "profits": [], "weights": []})
        result = solve_bb(inst, NO_LIMITS)
        assert result.status == SolveStatus.OPTIMAL
        assert result.profit == 0
        assert result.best.selected == frozenset()

    def test_complete_conflict_graph(self, fig1_raw):
        """Test a complete conflict graph picks the best single item"""
        fig1_raw["edges"] = list(combinations(range(6), 2))
        result = solve_bb(validate_instance(fig1_raw), NO_LIMITS)
        assert result.status == SolveStatus.OPTIMAL
        assert result.profit == 9
        assert len(result.best.selected) == 1

    def test_clique_bound_reaches_same_optimum(self, fig1):
        """Test the clique bound finds the same optimum"""
        result = solve_bb(fig1, NO_LIMITS, clique_bound=True)
        assert result.status == SolveStatus.OPTIMAL
        assert result.profit == 21

    def test_node_limit_reports_gap(self, fig1):
        """Test a node limit returns a feasible incumbent and a valid bound"""
        result = solve_bb(fig1, SolveLimits(node_limit=1))
        assert result.best is not None
        assert evaluate(fig1, result.best.selected).feasible
        assert result.upper_bound >= result.profit
        assert result.gap_percent == pytest.approx(
            100 * (result.upper_bound - result.profit) / result.upper_bound
        )
        if result.status == SolveStatus.OPTIMAL:
            assert result.gap_percent == 0
        else:
            assert result.status == SolveStatus.FEASIBLE
            assert result.nodes == 1

    def test_forced_timeouts_on_harder_instances(self):
        """Test stopped runs keep their bounds consistent"""
        rng = SplitMix64(99)
        for index in range(20):
            inst = random_instance(rng, 40, (index % 5) / 10, capacity_ratio=0.4)
            result = solve_bb(inst, SolveLimits(node_limit=1))
            assert evaluate(inst, result.best.selected).feasible
            assert result.upper_bound >= result.profit
            assert result.gap_percent == pytest.approx(optimality_gap(result.upper_bound, result.profit))
            if result.status == SolveStatus.OPTIMAL:
                assert result.gap_percent == 0
                assert result.upper_bound == result.profit

    def test_node_limited_runs_are_deterministic(self):
        """Test equal node limits give equal results"""
        rng = SplitMix64(5)
        inst = random_instance(rng, 35, 0.2)
        limits = SolveLimits(node_limit=200)
        first = solve_bb(inst, limits)
        second = solve_bb(inst, limits)
        assert first.model_dump(exclude={"wall_time"}) == second.model_dump(exclude={"wall_time"})

    def test_propagation_audit_passes(self):
        """Test propagation audits hold on random instances"""
        rng = SplitMix64(3)
        for index in range(30):
            inst = random_instance(rng, 16, (index % 10) / 10)
            result = solve_bb(inst, NO_LIMITS, audit=True)
            assert result.status == SolveStatus.OPTIMAL

    def test_invalid_limits(self, fig1):
        """Test non-positive limits are refused"""
        with pytest.raises(LimitsInvalid):
            solve_bb(fig1, SolveLimits(time_limit=0))
        with pytest.raises(LimitsInvalid):
            solve_bb(fig1, SolveLimits(node_limit=0))

    def test_gap_formula(self):
        """Test the optimality gap percentage"""
        assert optimality_gap(100, 99) == pytest.approx(1.0)
        assert optimality_gap(0, 0) == 0.0
        assert optimality_gap(50, 50) == 0.0


@pytest.mark.unit
class TestOracle:
    """Exhaustive enumeration used as the reference"""

    def test_fig1(self, fig1):
        """Test the oracle on the example"""
        result = solve_oracle(fig1)
        assert result.status == SolveStatus.OPTIMAL
        assert result.profit == 21
        assert result.best.selected == frozenset({1, 3, 4, 5})

    def test_single_item(self):
        """Test the oracle on a single fitting item"""
        inst = validate_instance({"capacity": 5, "profits": [3], "weights": [5]})
        assert solve_oracle(inst).best.selected == frozenset({0})

    def test_conflicting_pair(self):
        """Test the oracle keeps the better of two conflicting items"""
        inst = validate_instance({"capacity": 10, "profits": [5, 7], "weights": [4, 4], "edges": [(0, 1)]})
        assert solve_oracle(inst).profit == 7

    def test_too_large(self):
        """Test the oracle refuses more than 30 items"""
        inst = Instance(capacity=10, profits=(1,) * 31, weights=(1,) * 31)
        with pytest.raises(TooLargeForOracle):
            solve_oracle(inst)


@pytest.mark.unit
@pytest.mark.timeout(300)
class TestOracleEquivalence:
    """Branch-and-bound matches exhaustive search on every suite instance"""

    def test_bb_equals_oracle(self, oracle_suite):
        """Test branch and bound matches the oracle on every suite instance"""
        mismatches = []
        for inst, optimum in oracle_suite:
            result = solve_bb(inst, NO_LIMITS)
            if result.status != SolveStatus.OPTIMAL or result.profit != optimum:
                mismatches.append((inst.name, optimum, result.profit, result.status))
            assert evaluate(inst, result.best.selected).feasible
        assert mismatches == []

    def test_clique_bound_equals_oracle(self, oracle_suite):
        """Test the clique bound variant matches the oracle"""
        for inst, optimum in oracle_suite[::5]:
            assert solve_bb(inst, NO_LIMITS, clique_bound=True).profit == optimum
