"""Exception hierarchy shared by every module in the package.

Mathematical negative results (a failed cocycle check, a ring that is not
semiprime) are reported as data, never raised. Exceptions signal malformed
input, unmet preconditions, or a broken internal invariant.
"""


class CrystalError(ValueError):
    """Base class for all errors raised by the library."""


class FormatError(CrystalError):
    """A file, literal or command-line argument could not be decoded."""


class RingError(CrystalError):
    """Operand/ring kind mismatch, incompatible automorphism, or a query the ring cannot answer."""


class GroupError(CrystalError):
    """A group table is malformed or violates a group axiom."""


class DatumError(CrystalError):
    """A crystal datum has inconsistent shapes or fails a precondition."""


class ModuleError(CrystalError):
    """A semilinear module, projection or submodule fails a precondition."""


class SizeCapError(CrystalError):
    """An exhaustive computation would exceed the configured size cap."""


class InvariantViolation(RuntimeError):
    """A result failed its own re-verification. Always a bug."""
