"""Exception hierarchy shared by every module."""


class GeoconjError(Exception):
    pass


class MalformedInputError(GeoconjError, ValueError):
    """A word, automaton, grammar or structure could not be parsed or uses unknown symbols."""


class PreconditionError(GeoconjError, ValueError):
    pass


class AlphabetMismatchError(MalformedInputError):
    pass


class ResourceError(GeoconjError, RuntimeError):
    """A search exceeded its configured node budget."""


class ValidationError(GeoconjError, RuntimeError):
    """An empirically checked assumption failed (cone radius, fellow-traveler constant, ...)."""
