import pytest
from kpc.services.bounds import (
    BoundContext, RankedItems, clique_partition, clique_partition_ub, fractional_knapsack_ub,
    ratio_order,
)
from kpc.services.instance_service import validate_instance
from kpc.core.errors import PartitionInvalid


@pytest.fixture
def light_conflict():
    """A conflicting pair whose lightest and most profitable members differ"""
    return validate_instance({
        "capacity": 5, "profits": [10, 1, 4], "weights": [5, 1, 4], "edges": [(0, 1)],
    })


@pytest.mark.unit
class TestRatioOrder:
    def test_fig1_order(self, fig1):
        """Test items are sorted by profit/weight, ties by index"""
        # 9/4, 2/1, 7/6, then 9/9 and 3/3 tie (lower index first), then 6/7
        assert ratio_order(fig1) == [2, 5, 4, 1, 3, 0]

    def test_ties_broken_by_index(self):
        """Test equal ratios keep index order"""
        inst = validate_instance({"capacity": 10, "profits": [2, 4, 1], "weights": [2, 4, 1]})
        assert ratio_order(inst) == [0, 1, 2]


@pytest.mark.unit
class TestFractionalKnapsackBound:
    """Dantzig bound with the conflict rows dropped"""

    def test_fig1_root(self, fig1):
        """Test the root bound of the six-item example"""
        assert fractional_knapsack_ub(BoundContext.root(fig1), fig1) == 27

    def test_nothing_fits_returns_fixed_profit(self, fig1):
        """Test zero residual capacity adds nothing"""
        ctx = BoundContext.root(fig1)
        ctx.residual_capacity = 0
        ctx.fixed_profit = 13
        assert fractional_knapsack_ub(ctx, fig1) == 13

    def test_items_heavier_than_residual_contribute_nothing(self):
        """Test oversize items are skipped, not taken fractionally"""
        inst = validate_instance({"capacity": 5, "profits": [100, 80], "weights": [10, 8]})
        assert fractional_knapsack_ub(BoundContext.root(inst), inst) == 0

    def test_everything_fits(self, fig1):
        """Test a roomy knapsack sums every free profit"""
        ctx = BoundContext.root(fig1)
        ctx.residual_capacity = 100
        ctx.fixed_profit = 4
        assert fractional_knapsack_ub(ctx, fig1) == 4 + sum(fig1.profits)

    def test_fractional_part_is_floored(self):
        """Test the critical item's share is rounded down"""
        inst = validate_instance({"capacity": 5, "profits": [10, 7], "weights": [4, 3]})
        # 10 whole, then 1/3 of 7
        assert fractional_knapsack_ub(BoundContext.root(inst), inst) == 12

    def test_monotone_in_capacity_and_free_set(self, fig1):
        """Test the bound never grows as capacity or free items shrink"""
        ctx = BoundContext.root(fig1)
        previous = fractional_knapsack_ub(ctx, fig1)
        for residual in range(fig1.capacity, -1, -1):
            ctx.residual_capacity = residual
            value = fractional_knapsack_ub(ctx, fig1)
            assert value <= previous
            previous = value

        ctx = BoundContext.root(fig1)
        previous = fractional_knapsack_ub(ctx, fig1)
        for item in ratio_order(fig1):
            ctx.free[item] = False
            value = fractional_knapsack_ub(ctx, fig1)
            assert value <= previous
            previous = value

    def test_ranked_items_agree_with_context(self, fig1):
        """Test the bitset form gives the same values"""
        ranked = RankedItems(fig1)
        assert ranked.dantzig(ranked.universe, fig1.capacity) == 27
        assert ranked.dantzig(ranked.mask_of([1, 3]), fig1.capacity) == 12


@pytest.mark.unit
class TestCliquePartitionBound:
    """At most one item per clique of the conflict graph"""

    def test_singletons_equal_dantzig(self, fig1):
        """Test a partition into singletons reduces to the fractional bound"""
        ctx = BoundContext.root(fig1)
        singletons = [[i] for i in range(fig1.n)]
        assert clique_partition_ub(ctx, fig1, singletons) == fractional_knapsack_ub(ctx, fig1)

    def test_single_clique_block(self, fig1):
        """Test one block contributes its best member only"""
        ctx = BoundContext.root(fig1)
        ctx.free = [i in (2, 3) for i in range(fig1.n)]
        ctx.fixed_profit = 5
        assert clique_partition_ub(ctx, fig1, [[2, 3]]) == 5 + 9

    def test_fig1_blocks(self, fig1):
        """Test the bound lies between the optimum and the fractional bound"""
        ctx = BoundContext.root(fig1)
        value = clique_partition_ub(ctx, fig1, [[0, 1], [2, 4], [3], [5]])
        assert value <= 27
        assert value >= 21

    def test_never_above_fractional_bound(self, light_conflict):
        """Test a block mixing a light and a profitable item stays under the fractional bound"""
        ctx = BoundContext.root(light_conflict)
        blocks = [[0, 1], [2]]
        dantzig = fractional_knapsack_ub(ctx, light_conflict)
        assert dantzig == 10
        assert clique_partition_ub(ctx, light_conflict, blocks) == 10

        ranked = RankedItems(light_conflict)
        ranked.use_cliques(blocks)
        assert ranked.clique_bound(ranked.universe, light_conflict.capacity) == 10

    def test_overlapping_blocks_rejected(self, fig1):
        """Test an item in two blocks is refused"""
        with pytest.raises(PartitionInvalid):
            clique_partition_ub(BoundContext.root(fig1), fig1, [[0, 1], [1], [2], [3], [4], [5]])

    def test_missing_items_rejected(self, fig1):
        """Test a partition must cover every free item"""
        with pytest.raises(PartitionInvalid):
            clique_partition_ub(BoundContext.root(fig1), fig1, [[0, 1], [2, 4]])

    def test_non_clique_rejected(self, fig1):
        """Test a block with a missing edge is refused"""
        with pytest.raises(PartitionInvalid):
            clique_partition_ub(BoundContext.root(fig1), fig1, [[0, 2], [1], [3], [4], [5]])

    def test_greedy_partition_is_a_clique_partition(self, fig1):
        """Test the greedy construction covers all items with cliques"""
        blocks = clique_partition(fig1)
        assert sorted(i for block in blocks for i in block) == list(range(fig1.n))
        edges = set(fig1.edges)
        for block in blocks:
            for pos, a in enumerate(block):
                for b in block[pos + 1:]:
                    assert (a, b) in edges
        # the greedy result is accepted by the checked bound
        clique_partition_ub(BoundContext.root(fig1), fig1, blocks)


@pytest.mark.unit
@pytest.mark.timeout(300)
class TestBoundSoundness:
    """Root bounds never fall below the exhaustive optimum"""

    def test_root_bounds_dominate_oracle(self, oracle_suite):
        """Test optimum <= clique bound <= fractional bound on every suite instance"""
        violations = []
        for inst, optimum in oracle_suite:
            ctx = BoundContext.root(inst)
            blocks = clique_partition(inst)
            dantzig = fractional_knapsack_ub(ctx, inst)
            clique = clique_partition_ub(ctx, inst, blocks)

            ranked = RankedItems(inst)
            ranked.use_cliques(blocks)
            ranked_clique = ranked.clique_bound(ranked.universe, inst.capacity)

            if not optimum <= clique <= dantzig or not optimum <= ranked_clique <= dantzig:
                violations.append((inst.name, optimum, dantzig, clique, ranked_clique))
        assert violations == []
