import click
from pathlib import Path
from kpc.models import SolverKind, SolveStatus
from kpc.schemas import SolveLimits
from kpc.services.campaign_service import make_row
from kpc.services.exact_service import solve_bb, solve_oracle
from kpc.services.instance_service import read_instance
from kpc.cli.deps import EXIT_FAILURE, get_result_repo, handle_errors
from kpc.core.config import get_settings


@click.command("solve")
@click.argument("instance", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--time-limit", type=click.FloatRange(min=0, min_open=True), default=None)
@click.option("--node-limit", type=click.IntRange(min=1), default=None)
@click.option("--solver", type=click.Choice([k.value for k in SolverKind]), default=SolverKind.BB.value)
@click.option("--clique-bound/--no-clique-bound", default=None)
@click.option("--format", "output_format", type=click.Choice(["text", "csv", "json"]), default="text")
@handle_errors
def command(instance: Path, time_limit, node_limit, solver: str, clique_bound, output_format: str):
    """Solve one instance file and report status, profit, bound, gap, nodes and seconds"""
    settings = get_settings()
    inst = read_instance(instance)
    if SolverKind(solver) == SolverKind.ORACLE:
        result = solve_oracle(inst)
    else:
        limits = SolveLimits(
            time_limit=settings.TIME_LIMIT if time_limit is None else time_limit,
            node_limit=settings.NODE_LIMIT if node_limit is None else node_limit,
        )
        result = solve_bb(inst, limits, clique_bound=clique_bound)

    if output_format == "json":
        click.echo(result.model_dump_json())
    elif output_format == "csv":
        click.echo(get_result_repo().dumps([make_row(inst.name or instance.stem, result)]), nl=False)
    else:
        click.echo(f"{result.status.value} {result.profit}")
        click.echo(f"upper_bound: {result.upper_bound}")
        click.echo(f"gap_percent: {result.gap_percent:.2f}")
        click.echo(f"nodes: {result.nodes}")
        click.echo(f"seconds: {result.wall_time:.3f}")
        if result.best is not None:
            click.echo("selected: " + " ".join(str(i) for i in result.best.items()))

    if result.status not in (SolveStatus.OPTIMAL, SolveStatus.FEASIBLE):
        raise click.exceptions.Exit(EXIT_FAILURE)
