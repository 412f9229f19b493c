"""Exception hierarchy shared by every morsecell module."""


class MorsecellError(Exception):
    """Base class for all errors raised by the library"""


class AmbientMismatchError(MorsecellError, ValueError):
    """Monomials or ideals live in rings with different variable counts"""


class ZeroIdealError(MorsecellError):
    """An operation would produce (or was handed) the zero ideal"""


class UnsupportedPowerError(MorsecellError, ValueError):
    """Ideal powers are only defined here for n >= 1"""


class CapExceededError(MorsecellError):
    """A desk-scale size cap (variables, generators, vertices) was exceeded"""


class IllegalParameterError(MorsecellError, ValueError):
    """A constructor or builder received an out-of-range parameter"""


class ParseError(MorsecellError, ValueError):
    """Malformed monomial literal, order literal or input file"""


class GraphError(MorsecellError):
    """Graph is not simple, not connected, edgeless or otherwise unusable"""


class SpecInconsistencyError(MorsecellError):
    """A restriction spec does not match the ideal it is applied to"""


class TableMismatchError(MorsecellError):
    """Cell and Betti tables were computed for different ideals"""


class IntegrityError(MorsecellError):
    """A search witness failed re-verification"""


class ConfigError(MorsecellError):
    """Environment or .env settings could not be parsed"""


class UnknownSuiteError(MorsecellError):
    """Requested verification suite id is not in the catalog"""
