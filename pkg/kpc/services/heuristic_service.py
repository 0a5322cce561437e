from typing import Optional, Tuple
from kpc.models import Instance, Solution
from kpc.services.bounds import RankedItems, iter_bits
from kpc.services.instance_service import evaluate
from kpc.core.errors import InfeasibleStart
from kpc.core.logging import get_logger

logger = get_logger(__name__)

ADD, DROP, SWAP = 0, 1, 2


def _greedy_fill(ranked: RankedItems, selected: int, residual: int, blocked: int, skip: int = 0) -> Tuple[int, int, int]:
    """Add items in ratio order while they fit and conflict with nothing selected"""
    candidates = ranked.universe & ~(selected | blocked | skip) & ranked.fits(residual)
    gain = 0
    for r in iter_bits(candidates):
        bit = 1 << r
        if blocked & bit or ranked.weights[r] > residual:
            continue
        selected |= bit
        residual -= ranked.weights[r]
        blocked |= ranked.conflicts[r]
        gain += ranked.profits[r]
    return selected, residual, gain


def greedy_construct(inst: Instance, ranked: Optional[RankedItems] = None) -> Solution:
    """Scan items by decreasing p/w and keep every item that fits and conflicts with nothing kept"""
    ranked = ranked or RankedItems(inst)
    selected, _, _ = _greedy_fill(ranked, 0, inst.capacity, 0)
    solution = evaluate(inst, ranked.items_of(selected))
    logger.debug("Greedy solution built", instance=inst.name, profit=solution.profit)
    return solution


def local_search(inst: Instance, start: Solution, ranked: Optional[RankedItems] = None) -> Solution:
    """
    Best-improvement descent over add / drop / swap moves.
    A swap exchanges one selected item for one unselected item and then refills
    greedily, so a swap that loses profit by itself can still pay off once the
    freed capacity is reused. A drop alone never gains, so it is never chosen.
    Equal gains go to the smallest (move type, item indices) with original indices.
    """
    checked = evaluate(inst, start.selected)
    if not checked.feasible:
        raise InfeasibleStart("Local search needs a feasible starting solution")

    ranked = ranked or RankedItems(inst)
    order = ranked.order
    selected = ranked.mask_of(start.selected)
    residual = inst.capacity - checked.weight
    iterations = 0

    while True:
        blocked = 0
        for r in iter_bits(selected):
            blocked |= ranked.conflicts[r]

        best_gain = 0
        best_key: Optional[tuple] = None
        best_state: Optional[Tuple[int, int]] = None

        addable = ranked.universe & ~(selected | blocked) & ranked.fits(residual)
        for r in iter_bits(addable):
            gain = ranked.profits[r]
            key = (ADD, order[r])
            if gain > best_gain or (gain == best_gain and best_key is not None and key < best_key):
                best_gain, best_key = gain, key
                best_state = (selected | (1 << r), residual - ranked.weights[r])

        for out in iter_bits(selected):
            out_bit = 1 << out
            kept = selected ^ out_bit
            kept_blocked = 0
            for r in iter_bits(kept):
                kept_blocked |= ranked.conflicts[r]
            freed = residual + ranked.weights[out]
            incoming = ranked.universe & ~(kept | kept_blocked | out_bit) & ranked.fits(freed)
            for r in iter_bits(incoming):
                swapped = kept | (1 << r)
                left = freed - ranked.weights[r]
                filled, left, refill = _greedy_fill(
                    ranked, swapped, left, kept_blocked | ranked.conflicts[r], skip=out_bit
                )
                gain = ranked.profits[r] - ranked.profits[out] + refill
                if gain <= 0:
                    continue
                key = (SWAP, order[out], order[r])
                if gain > best_gain or (gain == best_gain and best_key is not None and key < best_key):
                    best_gain, best_key = gain, key
                    best_state = (filled, left)

        if best_state is None:
            break
        selected, residual = best_state
        iterations += 1

    solution = evaluate(inst, ranked.items_of(selected))
    logger.debug(
        "Local search finished",
        instance=inst.name,
        start_profit=start.profit,
        profit=solution.profit,
        iterations=iterations
    )
    return solution
