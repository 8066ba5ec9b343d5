from .errors import *
from .exact_arith import *
from .elliptic import *
from .BundleModel import *
from .Descriptors import *
from .TransformEngine import *
from .AutAtlas import *
from .cli import *
from .acceptance import *
