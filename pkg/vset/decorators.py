import datetime
import logging
from functools import update_wrapper

import click

from .utils import LimitError, format_timedelta

__all__ = ["InputError", "ResourceLimitError", "vset_command"]


class InputError(click.ClickException):
    """Invalid input: syntax errors, unbound variables, arity or index mismatches."""

    exit_code = 2


class ResourceLimitError(click.ClickException):
    """A resource guard was tripped."""

    exit_code = 3


def vset_command(f):
    """Helper decorator to define vset commands.

    The command is logged and timed, and library errors are converted to click exceptions:
    :class:`LimitError` exits with status 3, any other ``ValueError`` with status 2.
    """

    def new_func(*args, **kwargs):
        logging.info(f"executing command `{f.__name__}` (kwargs: {kwargs})")

        start = datetime.datetime.now()
        try:
            result = f(*args, **kwargs)
        except LimitError as exc:
            raise ResourceLimitError(str(exc))
        except ValueError as exc:
            raise InputError(str(exc))
        stop = datetime.datetime.now()

        logging.info(
            f"command `{f.__name__}` execution complete ({format_timedelta(stop - start)})"
        )
        return result

    return update_wrapper(new_func, f)
