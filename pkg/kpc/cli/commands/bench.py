import asyncio
import click
from pathlib import Path
from pydantic import ValidationError
from kpc.models import Family, SolverKind
from kpc.schemas import CampaignConfig
from kpc.services.campaign_service import default_jobs
from kpc.cli.deps import get_campaign_service, get_report_repo, handle_errors
from kpc.core.config import get_settings


@click.command("bench")
@click.option("--instances", "instance_dir", type=click.Path(file_okay=False, path_type=Path), default=None)
@click.option("--family", type=click.Choice([f.value for f in Family]), default=None)
@click.option("--seed", type=click.IntRange(0, 2**64 - 1), default=None, help="Master seed for --family")
@click.option("--filter", "name_filter", default=None, help="Glob over instance names")
@click.option("--time-limit", type=click.FloatRange(min=0, min_open=True), default=None)
@click.option("--node-limit", type=click.IntRange(min=1), default=None)
@click.option("--jobs", type=click.IntRange(min=1), default=None)
@click.option("--solver", type=click.Choice([k.value for k in SolverKind]), default=SolverKind.BB.value)
@click.option("--clique-bound/--no-clique-bound", default=None)
@click.option("--out", "output", type=click.Path(dir_okay=False, path_type=Path), required=True,
              help="Per-instance CSV")
@click.option("--markdown", type=click.Path(dir_okay=False, path_type=Path), default=None,
              help="Markdown tables; stdout when omitted")
@handle_errors
def command(instance_dir, family, seed, name_filter, time_limit, node_limit, jobs, solver,
            clique_bound, output, markdown):
    """Run a solving campaign and emit per-instance CSV plus grouped tables"""
    settings = get_settings()
    try:
        config = CampaignConfig(
            instance_dir=instance_dir,
            family=family,
            master_seed=settings.MASTER_SEED if seed is None else seed,
            name_filter=name_filter,
            time_limit=settings.TIME_LIMIT if time_limit is None else time_limit,
            node_limit=settings.NODE_LIMIT if node_limit is None else node_limit,
            solver=SolverKind(solver),
            clique_bound=settings.CLIQUE_BOUND if clique_bound is None else clique_bound,
            parallel_jobs=jobs or settings.JOBS or default_jobs(),
            output=output,
            markdown=markdown,
        )
    except ValidationError as e:
        raise click.UsageError(e.errors()[0]["msg"])

    service = get_campaign_service()
    rows, summaries = asyncio.run(service.run(config))
    for name in service.skipped:
        click.echo(f"skipped: {name}", err=True)

    reports = get_report_repo()
    if markdown is None:
        click.echo(reports.render(summaries), nl=False)
    else:
        reports.write(summaries, markdown)
        click.echo(f"{len(rows)} instances solved, tables written to {markdown}")
