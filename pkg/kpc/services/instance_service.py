from typing import Any, Iterable, Mapping, Union
from pathlib import Path
from pydantic import ValidationError
from kpc.models import Instance, Solution
from kpc.schemas import InstanceCreate
from kpc.repositories.instance_repo import InstanceRepository
from kpc.core.errors import (
    KPCError, NegativeOrZeroValue, IndexOutOfRange, SelfLoop, CapacityNegative,
    LengthMismatch, NonIntegralValue,
)
from kpc.core.logging import get_logger

logger = get_logger(__name__)

_INTEGER_ERRORS = {"int_type", "int_from_float", "int_parsing"}


def validate_instance(raw: Union[InstanceCreate, Mapping[str, Any]]) -> Instance:
    """
    Check candidate data and return a normalized Instance.
    Edges are canonicalized to i < j, sorted, and duplicates merged with a warning.
    """
    if not isinstance(raw, InstanceCreate):
        try:
            raw = InstanceCreate.model_validate(raw)
        except ValidationError as e:
            if any(err["type"] in _INTEGER_ERRORS for err in e.errors()):
                raise NonIntegralValue("profits, weights, capacity and edges must be integers")
            raise KPCError(f"Malformed instance data: {e.errors()[0]['msg']}")

    n = len(raw.profits)
    if len(raw.weights) != n:
        raise LengthMismatch(f"{n} profits but {len(raw.weights)} weights")
    if raw.capacity < 0:
        raise CapacityNegative(f"Capacity {raw.capacity} is negative")
    for i, (p, w) in enumerate(zip(raw.profits, raw.weights)):
        if p < 1 or w < 1:
            raise NegativeOrZeroValue(f"Item {i} has profit {p} and weight {w}; both must be >= 1", item=i)

    edges = set()
    duplicates = 0
    for i, j in raw.edges:
        if not (0 <= i < n and 0 <= j < n):
            raise IndexOutOfRange(f"Edge ({i}, {j}) references an item outside [0, {n})")
        if i == j:
            raise SelfLoop(f"Edge ({i}, {j}) is a self-loop")
        edge = (i, j) if i < j else (j, i)
        if edge in edges:
            duplicates += 1
        edges.add(edge)

    if duplicates:
        logger.warning(
            "Duplicate edges merged",
            error="DuplicateEdgeAfterCanonicalization",
            instance=raw.name,
            merged=duplicates
        )

    return Instance.model_construct(
        name=raw.name,
        capacity=raw.capacity,
        profits=tuple(raw.profits),
        weights=tuple(raw.weights),
        edges=tuple(sorted(edges)),
    )


def evaluate(inst: Instance, selected: Iterable[int]) -> Solution:
    """Exact profit/weight of a selection and its feasibility verdict"""
    chosen = frozenset(selected)
    for i in chosen:
        if not 0 <= i < inst.n:
            raise IndexOutOfRange(f"Item {i} outside [0, {inst.n})")

    profit = sum(inst.profits[i] for i in chosen)
    weight = sum(inst.weights[i] for i in chosen)
    feasible = weight <= inst.capacity and not any(
        i in chosen and j in chosen for i, j in inst.edges
    )
    return Solution(selected=chosen, profit=profit, weight=weight, feasible=feasible)


def read_instance(path: Union[str, Path]) -> Instance:
    return validate_instance(InstanceRepository().read_raw(path))


def write_instance(inst: Instance, path: Union[str, Path]) -> None:
    InstanceRepository().write(inst, path)
