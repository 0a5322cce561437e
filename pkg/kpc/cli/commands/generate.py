import click
from pathlib import Path
from kpc.models import Family
from kpc.cli.deps import get_generator_service, handle_errors
from kpc.core.config import get_settings


@click.command("generate")
@click.option("--family", type=click.Choice([f.value for f in Family]), required=True)
@click.option("--seed", type=click.IntRange(0, 2**64 - 1), default=None, help="Master seed")
@click.option("--out", "out_dir", type=click.Path(file_okay=False, path_type=Path), required=True)
@handle_errors
def command(family: str, seed, out_dir: Path):
    """Write a benchmark family as a tree of KPC files"""
    seed = get_settings().MASTER_SEED if seed is None else seed
    service = get_generator_service()
    count = service.write_family(Family(family), seed, out_dir)
    checksum = service.tree_checksum(out_dir)
    click.echo(f"{count} instances written to {out_dir}")
    click.echo(f"sha256 {checksum}")
