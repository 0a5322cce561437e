import enum
from typing import FrozenSet, List, NamedTuple, Optional, Tuple
from pydantic import BaseModel, ConfigDict


class SolveStatus(str, enum.Enum):
    OPTIMAL = "Optimal"
    FEASIBLE = "Feasible"
    INFEASIBLE = "Infeasible"
    UNKNOWN = "Unknown"


class Family(str, enum.Enum):
    SET1 = "set1"
    SET2 = "set2"


class ProfitType(str, enum.Enum):
    RANDOM = "R"
    CORRELATED = "C"


class SolverKind(str, enum.Enum):
    BB = "bb"
    ORACLE = "oracle"


class Instance(BaseModel):
    """
    A KPC instance: items with profit and weight, a capacity and a conflict graph.
    Edges are stored canonically as sorted (i, j) pairs with i < j, no duplicates.
    Build through instance_service.validate_instance; direct construction skips the checks.
    """
    model_config = ConfigDict(frozen=True)

    name: str = ""
    capacity: int
    profits: Tuple[int, ...]
    weights: Tuple[int, ...]
    edges: Tuple[Tuple[int, int], ...] = ()

    @property
    def n(self) -> int:
        return len(self.profits)

    def neighbors(self) -> List[List[int]]:
        """Adjacency lists of the conflict graph, each sorted ascending"""
        adj: List[List[int]] = [[] for _ in range(self.n)]
        for i, j in self.edges:
            adj[i].append(j)
            adj[j].append(i)
        for row in adj:
            row.sort()
        return adj


class Solution(BaseModel):
    model_config = ConfigDict(frozen=True)

    selected: FrozenSet[int]
    profit: int
    weight: int
    feasible: bool

    def items(self) -> List[int]:
        return sorted(self.selected)


class SearchNode(NamedTuple):
    """
    B&B node. Item sets are bitmasks over ratio-rank positions; `free` holds the
    undecided items, everything outside included | free is excluded.
    """
    included: int
    free: int
    residual_capacity: int
    profit: int

    def excluded(self, universe: int) -> int:
        return universe & ~(self.included | self.free)


class SolveResult(BaseModel):
    model_config = ConfigDict(frozen=True)

    status: SolveStatus
    best: Optional[Solution] = None
    upper_bound: int
    gap_percent: float
    nodes: int
    wall_time: float

    @property
    def profit(self) -> int:
        return self.best.profit if self.best is not None else 0
