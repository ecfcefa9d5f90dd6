# trace-tool/app/errors.py
"""
Error types raised by the calculators.

Argument problems are plain ``ValueError`` (see ``app.validators.inputs``);
the two classes below cover failures that depend on the size of the job or
on the working precision rather than on the arguments themselves.
"""


class ResourceError(RuntimeError):
    """A size cap or iteration cap was exceeded."""


class PrecisionError(ArithmeticError):
    """The working precision cannot deliver an unambiguous result."""
