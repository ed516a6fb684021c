import logging

import click

from vset import FORMATS, bisim, expand, format_set, read_system, solve, vset_command
from .cli import cli


def _solve_file(file: str):
    return solve(read_system(file))


def _lookup(solution, name: str):
    if name not in solution:
        raise ValueError(f"variable {name!r} has no equation")
    return solution[name]


@cli.command("solve", group="Systems")
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
@click.option("-x", "--var", "var", required=True, help="Variable to expand.")
@click.option(
    "-d",
    "--depth",
    type=click.IntRange(min=0),
    default=3,
    help="Expansion depth (default: 3).",
)
@click.option(
    "-f",
    "--format",
    "fmt",
    type=click.Choice(FORMATS),
    default="set",
    help="Output format (default: set).",
)
@vset_command
def solve_cmd(file: str, var: str, depth: int, fmt: str):
    """Solve a system of equations and print the finite approximation of a solution.

    FILE contains an `index N` header followed by equations `x = term`. The solution for VAR
    is expanded to the given depth and printed either in canonical set notation (`0` and
    `{...}`) or as nested JSON arrays.
    """
    solution = _solve_file(file)
    element = _lookup(solution, var)
    click.echo(format_set(expand(element, depth), fmt))


@cli.command(group="Systems")
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
@click.argument("var1")
@click.argument("var2")
@click.pass_context
@vset_command
def eq(ctx: click.Context, file: str, var1: str, var2: str):
    """Decide whether two variables of a system have the same solution.

    Prints `bisimilar` and exits with status 0, or `distinct at depth N` and exits with
    status 1, where N is the least depth at which the expansions differ.
    """
    solution = _solve_file(file)
    result = bisim(_lookup(solution, var1), _lookup(solution, var2))
    if result:
        click.echo("bisimilar")
    else:
        logging.info(f"eq: {var1} and {var2} differ")
        click.echo(f"distinct at depth {result.depth}")
        ctx.exit(1)
