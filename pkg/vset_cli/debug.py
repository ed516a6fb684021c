"""
Hidden debug commands to help testing.
"""
import json
from typing import Any, Dict

import click

from vset import depth, is_well_founded, minimize, read_system, solve, vset_command
from .cli import cli


@cli.command(hidden=True)
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
@vset_command
def dbinfo(file: str):
    """
    Show statistics on the solution of a system in JSON format.
    """
    system = read_system(file)
    solution = solve(system)

    data: Dict[str, Any] = {"index": system.index.size, "variables": {}}
    for name, element in solution.items():
        data["variables"][name] = {
            "states": len(element.coalgebra.reachable(element.root)),
            "minimized": len(minimize(element).coalgebra.trans),
            "well_founded": is_well_founded(element),
            "depth": depth(element),
        }
    click.echo(json.dumps(data))


class DebugData:
    """
    Helper class to load the output of `dbinfo`.
    """

    @staticmethod
    def load(debug_output: str) -> "DebugData":
        return DebugData(json.loads(debug_output))

    def __init__(self, data: Dict[str, Any]):
        self.index = data["index"]
        self.variables = data["variables"]

    def states(self, var: str) -> int:
        return self.variables[var]["states"]

    def minimized(self, var: str) -> int:
        return self.variables[var]["minimized"]

    def is_well_founded(self, var: str) -> bool:
        return self.variables[var]["well_founded"]

    def depth(self, var: str):
        return self.variables[var]["depth"]
