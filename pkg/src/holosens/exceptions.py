"""Exception types shared across the package."""


class MalformedHeaderError(ValueError):
    """A PGM file violates the P5 format (bad magic, token, or maxval)."""


class DegenerateInputError(ValueError):
    """Input carries no information for the requested operation."""


class VarianceZeroError(ValueError):
    """Model outputs are constant; sensitivity indices are undefined."""
