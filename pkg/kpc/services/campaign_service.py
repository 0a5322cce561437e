import asyncio
import fnmatch
import os
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from statistics import fmean
from typing import Callable, Dict, List, Optional, Sequence, Tuple
from pydantic import BaseModel
from kpc.models import Family, SolverKind, SolveResult, SolveStatus
from kpc.schemas import (
    CampaignConfig, CampaignReport, GeneratorSpec, ResultRow, SolveLimits, TableSummary,
)
from kpc.repositories.instance_repo import InstanceRepository
from kpc.repositories.result_repo import ResultRepository, csv_float
from kpc.services.exact_service import solve_bb, solve_oracle
from kpc.services.generator_service import (
    SET1_VARIANTS, canonical_key, family_specs, generate, parse_canonical_key,
)
from kpc.services.instance_service import read_instance
from kpc.core.errors import EmptyCampaign, KPCError
from kpc.core.logging import get_logger

logger = get_logger(__name__)


class SolveTask(BaseModel):
    """One unit of campaign work: an instance file or a generator spec"""
    name: str
    path: Optional[Path] = None
    spec: Optional[GeneratorSpec] = None


class SolveOptions(BaseModel):
    solver: SolverKind = SolverKind.BB
    limits: SolveLimits
    clique_bound: bool = False


def make_row(name: str, result: SolveResult) -> ResultRow:
    return ResultRow(
        instance=name,
        status=result.status,
        profit=result.profit,
        upper_bound=result.upper_bound,
        gap_percent=csv_float(result.gap_percent),
        nodes=result.nodes,
        seconds=csv_float(result.wall_time),
    )


def solve_task(task: SolveTask, options: SolveOptions) -> ResultRow:
    """Worker entry point; runs in a pool process"""
    inst = read_instance(task.path) if task.path is not None else generate(task.spec)
    if options.solver == SolverKind.ORACLE:
        result = solve_oracle(inst)
    else:
        result = solve_bb(inst, options.limits, clique_bound=options.clique_bound)
    return make_row(inst.name or task.name, result)


# table id -> (title, key columns)
TABLES: Dict[str, Tuple[str, Tuple[str, ...]]] = {
    "all": ("All instances", ("Group",)),
    "set1_class_type": ("First set, by class and type", ("Class", "T")),
    "set1_class_density": ("First set, by class and density", ("Class", "D")),
    "set2_correlated": ("Second set, correlated instances", ("Items/Cap", "Density")),
    "set2_random": ("Second set, random instances", ("Items/Cap", "Density")),
}

_VARIANT_RANK = {f"{t.value}{m}": pos for pos, (t, m) in enumerate(SET1_VARIANTS)}


def group_keys(row: ResultRow) -> List[Tuple[str, Tuple[str, ...], tuple]]:
    """(table, key, sort key) memberships of one result row"""
    memberships = [("all", ("all",), ())]
    spec = parse_canonical_key(row.instance)
    if spec is None:
        return memberships
    if spec.family == Family.SET1:
        rank = _VARIANT_RANK.get(spec.variant, len(_VARIANT_RANK))
        memberships.append((
            "set1_class_type", (spec.variant, str(spec.class_id)), (rank, spec.class_id)
        ))
        memberships.append((
            "set1_class_density", (spec.variant, f"{spec.density:.1f}"), (rank, spec.density)
        ))
    else:
        table = "set2_correlated" if spec.profit_type.value == "C" else "set2_random"
        memberships.append((
            table,
            (f"{spec.n_items}/{spec.base_capacity}", f"{spec.density:g}"),
            (spec.n_items, spec.base_capacity, spec.density),
        ))
    return memberships


def report_for(table: str, key: Tuple[str, ...], rows: Sequence[ResultRow]) -> CampaignReport:
    solved = [r for r in rows if r.status == SolveStatus.OPTIMAL]
    return CampaignReport(
        table=table,
        key=key,
        size=len(rows),
        opt_count=len(solved),
        mean_seconds_over_solved=fmean(r.seconds for r in solved) if solved else None,
        mean_gap_percent=fmean(r.gap_percent for r in rows) if rows else 0.0,
    )


def aggregate(rows: Sequence[ResultRow]) -> Dict[str, TableSummary]:
    """
    Group rows into the result tables. Sec averages solved instances only;
    every instance contributes to Gap. The Average row is the mean over groups.
    """
    buckets: Dict[str, Dict[Tuple[str, ...], Tuple[tuple, List[ResultRow]]]] = {}
    for row in rows:
        for table, key, sort_key in group_keys(row):
            groups = buckets.setdefault(table, {})
            groups.setdefault(key, (sort_key, []))[1].append(row)

    summaries: Dict[str, TableSummary] = {}
    for table in TABLES:
        if table not in buckets:
            continue
        ordered = sorted(buckets[table].items(), key=lambda item: item[1][0])
        reports = [report_for(table, key, members) for key, (_, members) in ordered]
        timed = [r.mean_seconds_over_solved for r in reports if r.mean_seconds_over_solved is not None]
        title, columns = TABLES[table]
        summaries[table] = TableSummary(
            table=table,
            title=title,
            key_columns=columns,
            groups=reports,
            average_opt=fmean(r.opt_count for r in reports),
            average_seconds=fmean(timed) if timed else None,
            average_gap=fmean(r.mean_gap_percent for r in reports),
        )
    return summaries


class CampaignService:
    def __init__(self, instance_repo: InstanceRepository, result_repo: ResultRepository):
        self.instance_repo = instance_repo
        self.result_repo = result_repo
        self.skipped: List[str] = []

    def collect_tasks(self, config: CampaignConfig) -> List[SolveTask]:
        if config.family is not None:
            tasks = [
                SolveTask(name=canonical_key(spec), spec=spec)
                for spec in family_specs(config.family, config.master_seed)
            ]
        else:
            root = Path(config.instance_dir)
            if not root.is_dir():
                raise EmptyCampaign(f"Instance directory {root} does not exist")
            tasks = [
                SolveTask(name=path.relative_to(root).as_posix(), path=path)
                for path in self.instance_repo.list_paths(root)
            ]
        if config.name_filter:
            tasks = [t for t in tasks if fnmatch.fnmatch(t.name, config.name_filter)]
        return sorted(tasks, key=lambda t: t.name)

    async def run(
        self,
        config: CampaignConfig,
        progress: Optional[Callable[[ResultRow], None]] = None,
    ) -> Tuple[List[ResultRow], Dict[str, TableSummary]]:
        """
        Solve every task on a fixed pool of workers pulling from one queue.
        Rows are appended from the event loop only, then sorted by instance name.
        """
        tasks = self.collect_tasks(config)
        if not tasks:
            raise EmptyCampaign("No instances to solve")

        options = SolveOptions(
            solver=config.solver,
            limits=SolveLimits(time_limit=config.time_limit, node_limit=config.node_limit),
            clique_bound=config.clique_bound,
        )
        queue: asyncio.Queue = asyncio.Queue()
        for task in tasks:
            queue.put_nowait(task)

        rows: List[ResultRow] = []
        self.skipped = []
        loop = asyncio.get_running_loop()
        jobs = min(config.parallel_jobs, len(tasks))
        logger.info("Campaign started", instances=len(tasks), jobs=jobs, solver=config.solver.value)

        with ProcessPoolExecutor(max_workers=jobs) as pool:
            async def worker() -> None:
                while True:
                    try:
                        task = queue.get_nowait()
                    except asyncio.QueueEmpty:
                        return
                    try:
                        row = await loop.run_in_executor(pool, solve_task, task, options)
                    except (KPCError, OSError) as e:
                        logger.warning("Instance skipped", instance=task.name, error=str(e))
                        self.skipped.append(task.name)
                        continue
                    rows.append(row)
                    logger.info(
                        "Instance solved",
                        instance=row.instance,
                        status=row.status.value,
                        profit=row.profit,
                        gap_percent=row.gap_percent,
                        seconds=row.seconds,
                        done=len(rows),
                        total=len(tasks)
                    )
                    if progress is not None:
                        progress(row)

            await asyncio.gather(*(worker() for _ in range(jobs)))

        if not rows:
            raise EmptyCampaign("Every instance was skipped", skipped=self.skipped)

        rows.sort(key=lambda r: r.instance)
        summaries = aggregate(rows)
        if config.output is not None:
            self.result_repo.write(rows, config.output)
        logger.info(
            "Campaign finished",
            instances=len(rows),
            skipped=len(self.skipped),
            optimal=sum(r.status == SolveStatus.OPTIMAL for r in rows)
        )
        return rows, summaries


def default_jobs() -> int:
    return os.cpu_count() or 1
