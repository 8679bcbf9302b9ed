"""Conjugacy in free groups and geodesics in virtually free groups.

Words are strings: lowercase letters are generators, uppercase letters their
inverses, and ``""`` is the empty word.
"""

from .automata import Nfa
from .conjugates import AlphaResult, alpha, alpha_lred, alpha_powers, alpha_red, alpha_rred, dgcp, gcp
from .errors import GeoconjError, MalformedInputError, PreconditionError, ResourceError, ValidationError
from .free_subsets import benois_saturate, rational_membership
from .grammars import Cfg, cfg_enumerate, cfg_member
from .vfree import NormalForm, VfConfig, VfStructure
from .words import Alphabet, cyclic_reduce, free_reduce, invert

__version__ = "0.1.0"
