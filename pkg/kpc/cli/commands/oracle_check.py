import click
from pathlib import Path
from typing import Tuple
from kpc.schemas import SolveLimits
from kpc.services.exact_service import compare_with_oracle
from kpc.services.generator_service import SplitMix64, random_instance
from kpc.services.instance_service import read_instance
from kpc.cli.deps import EXIT_FAILURE, handle_errors
from kpc.core.config import get_settings

MIN_ITEMS = 8


@click.command("oracle-check")
@click.argument("instances", nargs=-1, type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--count", type=click.IntRange(min=0), default=100, help="Random instances to check")
@click.option("--seed", type=click.IntRange(0, 2**64 - 1), default=None)
@click.option("--max-items", type=click.IntRange(min=MIN_ITEMS), default=18)
@handle_errors
def command(instances: Tuple[Path, ...], count: int, seed, max_items: int):
    """Cross-check branch-and-bound against exhaustive enumeration"""
    rng = SplitMix64(get_settings().MASTER_SEED if seed is None else seed)
    candidates = [read_instance(path) for path in instances]
    for index in range(count):
        n = MIN_ITEMS + rng.below(max_items - MIN_ITEMS + 1)
        density = (index % 10) / 10
        candidates.append(random_instance(rng, n, density, name=f"random-{index}-n{n}-d{density:.1f}"))

    mismatches = 0
    for inst in candidates:
        problem = compare_with_oracle(inst, SolveLimits())
        if problem is not None:
            mismatches += 1
            click.echo(problem)

    click.echo(f"checked {len(candidates)} instances: {mismatches} mismatches")
    if mismatches:
        raise click.exceptions.Exit(EXIT_FAILURE)
