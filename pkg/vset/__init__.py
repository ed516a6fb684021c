from .checks import *
from .coalg import *
from .decorators import *
from .eqsolve import *
from .functors import *
from .hfs import *
from .io import *
from .sampling import *
from .utils import *
from .variant import *
