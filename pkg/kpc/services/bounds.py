"""
Upper bounds for KPC nodes.

Both bounds are relaxations of the model: the fractional knapsack bound drops
the conflict rows entirely, the clique bound keeps "at most one per clique"
by collapsing each clique into one optimistic item. Ratios are compared by
integer cross-multiplication; bounds are floored to integers.
"""
from bisect import bisect_right
from dataclasses import dataclass
from functools import cmp_to_key
from typing import Iterable, Iterator, List, Sequence, Tuple
from kpc.models import Instance
from kpc.core.errors import PartitionInvalid


def iter_bits(mask: int) -> Iterator[int]:
    """Positions of the set bits of `mask`, lowest first"""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def compare_ratio(p_a: int, w_a: int, a: int, p_b: int, w_b: int, b: int) -> int:
    """Higher p/w first, lower index on ties"""
    lhs = p_a * w_b
    rhs = p_b * w_a
    if lhs != rhs:
        return -1 if lhs > rhs else 1
    return (a > b) - (a < b)


def ratio_order(inst: Instance) -> List[int]:
    p, w = inst.profits, inst.weights
    return sorted(
        range(inst.n),
        key=cmp_to_key(lambda a, b: compare_ratio(p[a], w[a], a, p[b], w[b], b))
    )


def dantzig(items: Iterable[Tuple[int, int]], residual: int) -> int:
    """
    Floored fractional-knapsack value of (profit, weight) pairs given in ratio order.
    Items heavier than the starting residual are skipped: no completion can hold them.
    """
    limit = residual
    total = 0
    for p, w in items:
        if w > limit:
            continue
        if w <= residual:
            residual -= w
            total += p
        else:
            return total + residual * p // w
    return total


@dataclass
class BoundContext:
    ratio_order: Tuple[int, ...]
    free: List[bool]
    residual_capacity: int
    fixed_profit: int = 0

    @classmethod
    def root(cls, inst: Instance) -> "BoundContext":
        return cls(
            ratio_order=tuple(ratio_order(inst)),
            free=[True] * inst.n,
            residual_capacity=inst.capacity,
        )

    def free_items(self) -> List[int]:
        return [i for i, is_free in enumerate(self.free) if is_free]


def fractional_knapsack_ub(ctx: BoundContext, inst: Instance) -> int:
    items = ((inst.profits[i], inst.weights[i]) for i in ctx.ratio_order if ctx.free[i])
    return ctx.fixed_profit + dantzig(items, ctx.residual_capacity)


def _collapsed_items(
    blocks: Iterable[Sequence[int]], profits: Sequence[int], weights: Sequence[int], residual: int
) -> List[Tuple[int, int, int]]:
    """One optimistic item per block: best profit and lightest weight among members that fit"""
    collapsed = []
    for block in blocks:
        fitting = [i for i in block if weights[i] <= residual]
        if not fitting:
            continue
        collapsed.append((
            max(profits[i] for i in fitting),
            min(weights[i] for i in fitting),
            min(fitting),
        ))
    collapsed.sort(key=cmp_to_key(lambda a, b: compare_ratio(*a, *b)))
    return collapsed


def clique_partition_ub(ctx: BoundContext, inst: Instance, cliques: Sequence[Iterable[int]]) -> int:
    """
    Bound from a partition of the free items into cliques of the conflict graph.
    A feasible completion takes at most one item per block, and that item is
    dominated by the block's collapsed item, so the fractional knapsack over
    collapsed items is a valid bound.
    Never exceeds fractional_knapsack_ub for the same context.
    """
    blocks = [sorted(set(block)) for block in cliques]
    seen = set()
    for block in blocks:
        for i in block:
            if not 0 <= i < inst.n or not ctx.free[i]:
                raise PartitionInvalid(f"Item {i} is not a free item")
            if i in seen:
                raise PartitionInvalid(f"Item {i} appears in more than one block")
            seen.add(i)
    missing = set(ctx.free_items()) - seen
    if missing:
        raise PartitionInvalid(f"Free items {sorted(missing)} are not covered by the partition")

    edges = set(inst.edges)
    for block in blocks:
        for a_pos, a in enumerate(block):
            for b in block[a_pos + 1:]:
                if (a, b) not in edges:
                    raise PartitionInvalid(f"Block {block} is not a clique: ({a}, {b}) is not an edge")

    collapsed = _collapsed_items(blocks, inst.profits, inst.weights, ctx.residual_capacity)
    value = ctx.fixed_profit + dantzig(((p, w) for p, w, _ in collapsed), ctx.residual_capacity)
    return min(value, fractional_knapsack_ub(ctx, inst))


def clique_partition(inst: Instance) -> List[List[int]]:
    """
    Greedy partition of all items into cliques, largest degree first:
    each item joins the first block it is adjacent to entirely, else opens a new one.
    """
    adj = inst.neighbors()
    masks = [sum(1 << j for j in row) for row in adj]
    order = sorted(range(inst.n), key=lambda i: (-len(adj[i]), i))
    blocks: List[List[int]] = []
    block_masks: List[int] = []
    for v in order:
        for pos, bm in enumerate(block_masks):
            if bm & ~masks[v] == 0:
                blocks[pos].append(v)
                block_masks[pos] = bm | (1 << v)
                break
        else:
            blocks.append([v])
            block_masks.append(1 << v)
    return [sorted(block) for block in blocks]


class RankedItems:
    """
    Instance items re-indexed by ratio rank, so that iterating a bitmask
    lowest-bit-first walks the items in ratio order. Used by the search and
    the local search, which keep their item sets as bitmasks.
    """

    def __init__(self, inst: Instance):
        self.order = ratio_order(inst)
        self.rank = [0] * inst.n
        for r, i in enumerate(self.order):
            self.rank[i] = r
        self.profits = [inst.profits[i] for i in self.order]
        self.weights = [inst.weights[i] for i in self.order]
        self.universe = (1 << inst.n) - 1

        self.conflicts = [0] * inst.n
        for i, j in inst.edges:
            ri, rj = self.rank[i], self.rank[j]
            self.conflicts[ri] |= 1 << rj
            self.conflicts[rj] |= 1 << ri

        by_weight = sorted(range(inst.n), key=lambda r: self.weights[r])
        self._thresholds = [self.weights[r] for r in by_weight]
        self._fit_prefix = [0]
        for r in by_weight:
            self._fit_prefix.append(self._fit_prefix[-1] | (1 << r))

        self.blocks: List[int] = []

    def fits(self, residual: int) -> int:
        """Mask of items whose weight is at most `residual`"""
        return self._fit_prefix[bisect_right(self._thresholds, residual)]

    def mask_of(self, items: Iterable[int]) -> int:
        mask = 0
        for i in items:
            mask |= 1 << self.rank[i]
        return mask

    def items_of(self, mask: int) -> List[int]:
        return sorted(self.order[r] for r in iter_bits(mask))

    def use_cliques(self, cliques: Iterable[Iterable[int]]) -> None:
        self.blocks = [self.mask_of(block) for block in cliques]

    def dantzig(self, free: int, residual: int) -> int:
        p, w = self.profits, self.weights
        return dantzig(((p[r], w[r]) for r in iter_bits(free)), residual)

    def clique_bound(self, free: int, residual: int) -> int:
        members = (list(iter_bits(bm & free)) for bm in self.blocks)
        collapsed = _collapsed_items(
            (block for block in members if block), self.profits, self.weights, residual
        )
        value = dantzig(((p, w) for p, w, _ in collapsed), residual)
        return min(value, self.dantzig(free, residual))
