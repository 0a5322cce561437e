import time
from typing import List, Optional, Tuple
from kpc.models import Instance, SearchNode, SolveResult, SolveStatus
from kpc.schemas import SolveLimits
from kpc.services.bounds import RankedItems, clique_partition, iter_bits
from kpc.services.heuristic_service import greedy_construct, local_search
from kpc.services.instance_service import evaluate
from kpc.core.config import get_settings
from kpc.core.errors import LimitsInvalid, TooLargeForOracle
from kpc.core.logging import get_logger

logger = get_logger(__name__)


def optimality_gap(upper_bound: int, lower_bound: int) -> float:
    """100 * (UB - LB) / UB, and 0 when UB is 0"""
    if upper_bound <= 0:
        return 0.0
    return 100.0 * (upper_bound - lower_bound) / upper_bound


def preprocess(inst: Instance) -> Tuple[Instance, List[int]]:
    """
    Drop items heavier than the capacity. Returns the reduced instance and the
    map from reduced to original indices.
    """
    index_map = [i for i, w in enumerate(inst.weights) if w <= inst.capacity]
    if len(index_map) == inst.n:
        return inst, index_map

    position = {orig: new for new, orig in enumerate(index_map)}
    edges = tuple(
        (position[i], position[j])
        for i, j in inst.edges
        if i in position and j in position
    )
    reduced = Instance.model_construct(
        name=inst.name,
        capacity=inst.capacity,
        profits=tuple(inst.profits[i] for i in index_map),
        weights=tuple(inst.weights[i] for i in index_map),
        edges=edges,
    )
    logger.debug("Oversize items removed", instance=inst.name, removed=inst.n - len(index_map))
    return reduced, index_map


def check_limits(limits: SolveLimits) -> None:
    if limits.time_limit is not None and limits.time_limit <= 0:
        raise LimitsInvalid(f"time_limit must be positive, got {limits.time_limit}")
    if limits.node_limit is not None and limits.node_limit < 1:
        raise LimitsInvalid(f"node_limit must be positive, got {limits.node_limit}")


class BranchAndBound:
    """
    Depth-first binary branch-and-bound.

    Branches on the first free item in ratio order, include branch first.
    Including an item excludes its conflict neighbors and every free item
    that no longer fits. Nodes whose bound does not exceed the incumbent are pruned.
    """

    def __init__(
        self,
        inst: Instance,
        limits: SolveLimits,
        clique_bound: bool = False,
        audit: bool = False,
        time_check_interval: int = 1024,
    ):
        self.inst = inst
        self.limits = limits
        self.clique_bound = clique_bound
        self.audit = audit
        self.time_check_interval = max(1, time_check_interval)

    def bound(self, ranked: RankedItems, node: SearchNode) -> int:
        if self.clique_bound:
            return node.profit + ranked.clique_bound(node.free, node.residual_capacity)
        return node.profit + ranked.dantzig(node.free, node.residual_capacity)

    @staticmethod
    def _audit(ranked: RankedItems, node: SearchNode, k: int, capacity: int) -> None:
        """Debug check of the node invariants the propagation is meant to keep"""
        if node.included & node.excluded(ranked.universe) != 0 or node.included & node.free:
            raise AssertionError("Included items overlap the excluded or free sets")
        used = sum(ranked.weights[r] for r in iter_bits(node.included))
        if node.residual_capacity < 0 or used != capacity - node.residual_capacity:
            raise AssertionError(
                f"Residual capacity {node.residual_capacity} does not match the included weight {used}"
            )
        if node.included & ranked.conflicts[k]:
            raise AssertionError(
                f"Propagation violated: item {ranked.order[k]} conflicts with an included item"
            )

    def solve(self) -> SolveResult:
        started = time.perf_counter()
        reduced, index_map = preprocess(self.inst)
        ranked = RankedItems(reduced)
        if self.clique_bound:
            ranked.use_cliques(clique_partition(reduced))

        warm = local_search(reduced, greedy_construct(reduced, ranked), ranked)
        best_profit = warm.profit
        best_mask = ranked.mask_of(warm.selected)

        capacity = reduced.capacity
        stack = [SearchNode(0, ranked.fits(capacity), capacity, 0)]
        nodes = 0
        limit_hit = False
        time_limit = self.limits.time_limit
        node_limit = self.limits.node_limit

        while stack:
            if node_limit is not None and nodes >= node_limit:
                limit_hit = True
                break
            if time_limit is not None and nodes % self.time_check_interval == 0:
                if time.perf_counter() - started > time_limit:
                    limit_hit = True
                    break

            node = stack.pop()
            nodes += 1
            if self.bound(ranked, node) <= best_profit:
                continue
            if not node.free:
                continue

            low = node.free & -node.free
            k = low.bit_length() - 1
            rest = node.free ^ low

            if self.audit:
                self._audit(ranked, node, k, capacity)

            stack.append(SearchNode(node.included, rest, node.residual_capacity, node.profit))

            residual = node.residual_capacity - ranked.weights[k]
            child = SearchNode(
                node.included | low,
                rest & ~ranked.conflicts[k] & ranked.fits(residual),
                residual,
                node.profit + ranked.profits[k],
            )
            if child.profit > best_profit:
                best_profit = child.profit
                best_mask = child.included
            stack.append(child)

        upper_bound = best_profit
        if limit_hit:
            for node in stack:
                upper_bound = max(upper_bound, self.bound(ranked, node))

        best = evaluate(self.inst, (index_map[i] for i in ranked.items_of(best_mask)))
        status = SolveStatus.OPTIMAL if upper_bound == best.profit else SolveStatus.FEASIBLE
        elapsed = time.perf_counter() - started

        if limit_hit:
            logger.info(
                "Search limit reached",
                instance=self.inst.name,
                nodes=nodes,
                profit=best.profit,
                upper_bound=upper_bound
            )
        logger.debug(
            "Solve finished",
            instance=self.inst.name,
            status=status.value,
            profit=best.profit,
            upper_bound=upper_bound,
            nodes=nodes,
            seconds=round(elapsed, 6)
        )
        return SolveResult(
            status=status,
            best=best,
            upper_bound=upper_bound,
            gap_percent=optimality_gap(upper_bound, best.profit),
            nodes=nodes,
            wall_time=elapsed,
        )


def solve_bb(
    inst: Instance,
    limits: Optional[SolveLimits] = None,
    clique_bound: Optional[bool] = None,
    audit: Optional[bool] = None,
) -> SolveResult:
    """Exact solve under time/node limits; settings supply anything left unset"""
    settings = get_settings()
    if limits is None:
        limits = SolveLimits(time_limit=settings.TIME_LIMIT, node_limit=settings.NODE_LIMIT)
    check_limits(limits)
    return BranchAndBound(
        inst,
        limits,
        clique_bound=settings.CLIQUE_BOUND if clique_bound is None else clique_bound,
        audit=settings.AUDIT_PROPAGATION if audit is None else audit,
        time_check_interval=settings.TIME_CHECK_INTERVAL,
    ).solve()


def solve_oracle(inst: Instance, max_items: Optional[int] = None) -> SolveResult:
    """
    Exhaustive include/exclude enumeration, pruned only by capacity and conflicts.
    Shares no code with the bounds so it can cross-check the branch-and-bound.
    """
    max_items = get_settings().ORACLE_MAX_ITEMS if max_items is None else max_items
    if inst.n > max_items:
        raise TooLargeForOracle(f"Oracle handles at most {max_items} items, got {inst.n}")

    started = time.perf_counter()
    n = inst.n
    profits, weights, capacity = inst.profits, inst.weights, inst.capacity
    conflicts = [0] * n
    for i, j in inst.edges:
        conflicts[i] |= 1 << j
        conflicts[j] |= 1 << i

    best = [0, 0]
    calls = 0

    def visit(k: int, chosen: int, weight: int, profit: int, blocked: int) -> None:
        nonlocal calls
        calls += 1
        if k == n:
            if profit > best[0]:
                best[0], best[1] = profit, chosen
            return
        if not (blocked >> k) & 1 and weight + weights[k] <= capacity:
            visit(k + 1, chosen | (1 << k), weight + weights[k], profit + profits[k], blocked | conflicts[k])
        visit(k + 1, chosen, weight, profit, blocked)

    visit(0, 0, 0, 0, 0)
    solution = evaluate(inst, (i for i in range(n) if (best[1] >> i) & 1))
    return SolveResult(
        status=SolveStatus.OPTIMAL,
        best=solution,
        upper_bound=solution.profit,
        gap_percent=0.0,
        nodes=calls,
        wall_time=time.perf_counter() - started,
    )


def compare_with_oracle(inst: Instance, limits: Optional[SolveLimits] = None) -> Optional[str]:
    """Solve with both solvers; returns a mismatch description or None when they agree"""
    exact = solve_bb(inst, limits or SolveLimits())
    oracle = solve_oracle(inst)
    if exact.status != SolveStatus.OPTIMAL:
        return f"{inst.name}: branch-and-bound stopped early ({exact.status.value}, gap {exact.gap_percent:.2f}%)"
    if exact.profit != oracle.profit:
        return f"{inst.name}: branch-and-bound {exact.profit} != oracle {oracle.profit}"
    return None
