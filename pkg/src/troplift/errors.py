"""Exception types shared across the package."""


class TropliftError(Exception):
    """Base class for all errors raised by this package."""


class InvariantError(TropliftError):
    """A structural invariant of a graph or function value is violated."""


class PreconditionError(TropliftError):
    """An operation was called outside its stated preconditions."""


class DispatchError(TropliftError):
    """A shape-specific decider was called on the wrong shape."""


class UndefinedLaplacianError(TropliftError):
    """The Laplacian of the infinite function is undefined."""


class MalformedMapError(TropliftError):
    """A parameterization map violates incidence compatibility."""


class EnumerationUnsupportedError(TropliftError):
    """Parameterization enumeration requested for an unsupported target."""


class GraphFileError(TropliftError):
    """A graph or certificate file failed to parse or validate.

    ``line`` is a best-effort 1-based line number into the offending file.
    """

    def __init__(self, message, path=None, line=None):
        self.path = path
        self.line = line
        prefix = ""
        if path is not None:
            prefix = f"{path}:"
            if line is not None:
                prefix += f"{line}:"
            prefix += " "
        super().__init__(prefix + message)
