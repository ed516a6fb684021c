import click
import numpy as np

from vset import CHECKS, run_check, vset_command
from .cli import cli


@cli.command(group="Checks")
@click.argument("name", type=click.Choice(list(CHECKS)))
@click.pass_context
@vset_command
def check(ctx: click.Context, name: str):
    """Run one of the built-in checks and print its report.

    \b
    prop3    fixedpoints of U = 1 ~> U among all subsets of V_4
    lemma31  0 and 1 are elements, {0,1} <= Q({0,1}), tagged copies stay in U
    lemma9   the stages V_0 to V_5 are transitive
    lemma10  components of pairs in V_(n+1) lie in V_n, up to V_5
    stream   finite variant streams equal their standard-tuple form

    Exits with status 1 if the check fails.
    """
    rng = ctx.obj if isinstance(ctx.obj, np.random.Generator) else None
    report = run_check(name, rng)
    click.echo(str(report))
    if not report:
        ctx.exit(1)
