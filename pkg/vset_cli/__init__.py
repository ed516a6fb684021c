# register all commands
from .checks import *
from .debug import *
from .demos import *
from .systems import *

from .cli import cli
