from pydantic import BaseModel, ConfigDict, Field, StrictInt, model_validator
from typing import List, Optional, Tuple
from pathlib import Path
from kpc.models import Family, ProfitType, SolverKind, SolveStatus


class InstanceCreate(BaseModel):
    """Candidate instance data as it arrives from callers or parsers"""
    name: str = ""
    capacity: StrictInt
    profits: List[StrictInt]
    weights: List[StrictInt]
    edges: List[Tuple[StrictInt, StrictInt]] = Field(default_factory=list)


class SolveLimits(BaseModel):
    """Search limits; None disables a limit. Checked by the solver, not here."""
    time_limit: Optional[float] = None
    node_limit: Optional[int] = None


class GeneratorSpec(BaseModel):
    model_config = ConfigDict(frozen=True)

    family: Family
    class_id: int = Field(0, ge=0, le=8, description="1..8 for set1, 0 for set2")
    n_items: int = Field(..., ge=0)
    weight_range: Tuple[int, int]
    base_capacity: int = Field(..., ge=0)
    capacity_multiplier: int = 1
    profit_type: ProfitType
    density: float = Field(..., ge=0.0, le=1.0)
    replicate: int = Field(0, ge=0)
    master_seed: int = Field(0, ge=0, le=2**64 - 1)

    @property
    def variant(self) -> str:
        """Variant label as used in the result tables, e.g. C10 or R1"""
        return f"{self.profit_type.value}{self.capacity_multiplier}"

    @property
    def capacity(self) -> int:
        return self.base_capacity * self.capacity_multiplier

    @property
    def density_label(self) -> str:
        decimals = 3 if self.family == Family.SET1 else 4
        return f"{self.density:.{decimals}f}"


class CampaignConfig(BaseModel):
    instance_dir: Optional[Path] = None
    family: Optional[Family] = None
    master_seed: int = Field(0, ge=0, le=2**64 - 1)
    name_filter: Optional[str] = None
    time_limit: float = Field(600.0, gt=0)
    node_limit: Optional[int] = Field(None, ge=1)
    solver: SolverKind = SolverKind.BB
    clique_bound: bool = False
    parallel_jobs: int = Field(1, ge=1)
    output: Optional[Path] = None
    markdown: Optional[Path] = None

    @model_validator(mode="after")
    def check_source(self) -> "CampaignConfig":
        if (self.instance_dir is None) == (self.family is None):
            raise ValueError("exactly one of instance_dir or family must be given")
        return self


CSV_HEADER = ("instance", "status", "profit", "upper_bound", "gap_percent", "nodes", "seconds")


class ResultRow(BaseModel):
    """One line of the campaign CSV; floats are held at CSV precision"""
    model_config = ConfigDict(frozen=True)

    instance: str
    status: SolveStatus
    profit: int
    upper_bound: int
    gap_percent: float
    nodes: int
    seconds: float


class CampaignReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    table: str
    key: Tuple[str, ...]
    size: int
    opt_count: int
    mean_seconds_over_solved: Optional[float] = None
    mean_gap_percent: float = 0.0


class ErrorResponse(BaseModel):
    error: str
    message: str
    details: Optional[dict] = None


class TableSummary(BaseModel):
    """Grouped reports of one result table plus its closing Average row"""
    table: str
    title: str
    key_columns: Tuple[str, ...]
    groups: List[CampaignReport]
    average_opt: float
    average_seconds: Optional[float] = None
    average_gap: float = 0.0
