import click
from kpc.cli.commands import bench, export_lp, generate, oracle_check, solve
from kpc.core.logging import get_logger, set_log_level

logger = get_logger(__name__)


@click.group()
@click.option("--log-level", type=click.Choice(["DEBUG", "INFO", "WARNING", "ERROR"], case_sensitive=False),
              default=None, help="Overrides KPC_LOG_LEVEL")
def cli(log_level):
    """Knapsack Problem with Conflicts toolkit"""
    if log_level:
        set_log_level(log_level)


cli.add_command(generate.command)
cli.add_command(solve.command)
cli.add_command(export_lp.command)
cli.add_command(bench.command)
cli.add_command(oracle_check.command)


def main():
    cli(prog_name="kpc")


if __name__ == "__main__":
    main()
