import click

from vset import (
    FORMATS,
    EquationSystem,
    HFSet,
    HFSetType,
    IndexSet,
    VarLeaf,
    ConstLeaf,
    TupleTerm,
    expand,
    format_set,
    from_hf,
    solve,
    stream_tuples,
    vset_command,
)
from .cli import cli


@click.group()
def demo():
    """Worked examples."""


demo.help_group = "Demonstrations"
cli.add_command(demo)


@demo.command()
@click.option(
    "-d",
    "--depth",
    type=click.IntRange(min=0),
    default=4,
    help="Largest expansion depth (default: 4).",
)
@click.option(
    "-a",
    "--head",
    type=HFSetType(),
    default="1",
    help="Repeated head of the stream, a set literal (default: 1).",
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
def stream(depth: int, head: HFSet, fmt: str):
    """Expand the infinite stream x = <A; x> next to its standard-tuple form.

    For every depth n from 0 to DEPTH, the expansion of the solution of x = <A; x> is printed
    next to the set of tuples <1, ..., 1, 0, a> with j leading ones and a taken from the
    expansion of A at depth n-1-j. The command fails if the two ever differ.
    """
    index = IndexSet(2)
    a = from_hf(head, index)
    if a is None:
        raise ValueError(f"{head} is not an element of U")

    system = EquationSystem(index, {"x": TupleTerm((ConstLeaf(a), VarLeaf("x")))})
    x = solve(system)["x"]

    for n in range(depth + 1):
        expansion = expand(x, n)
        oracle = stream_tuples([expand(a, n - 1 - j) for j in range(n - 1)])
        click.echo(f"{n}: {format_set(expansion, fmt)} == {format_set(oracle, fmt)}")
        if expansion != oracle:
            raise click.ClickException(f"expansion and tuple form differ at depth {n}")
