import click
from pathlib import Path
from kpc.services.instance_service import read_instance
from kpc.cli.deps import get_lp_repo, handle_errors


@click.command("export-lp")
@click.argument("instance", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--out", "out_path", type=click.Path(dir_okay=False, path_type=Path), default=None,
              help="LP file to write; stdout when omitted")
@handle_errors
def command(instance: Path, out_path):
    """Export the 0-1 model of an instance in LP format"""
    inst = read_instance(instance)
    repo = get_lp_repo()
    if out_path is None:
        click.echo(repo.dumps(inst), nl=False)
    else:
        repo.write(inst, out_path)
