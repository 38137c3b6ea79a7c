"""Exception hierarchy shared across the package.

The CLI maps these onto process exit codes, so new failure modes should
subclass one of the three categories rather than raising bare exceptions.
"""


class ShadowprintError(Exception):
    """Base class for all errors raised by this package."""


class InvalidInputError(ShadowprintError):
    """Rejected input: bad flags, malformed files, out-of-range values.

    CLI exit code 1.
    """


class BackendError(ShadowprintError):
    """An expectation backend failed: bridge process died, timed out,
    or returned garbage.

    CLI exit code 2.
    """


class NumericalIntegrityError(ShadowprintError):
    """A numerical invariant was violated beyond tolerance (negative
    probabilities, non-real traces).  Indicates a broken state, not bad
    user input.

    CLI exit code 3.
    """
