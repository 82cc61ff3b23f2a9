"""Error vocabulary shared by all modules.

Every domain error derives from :class:`CalcError` and carries a stable
``code`` (the class name) plus a ``context`` dict, so the CLI can emit
machine-readable error objects and tests can assert on exact error kinds.
"""

from __future__ import annotations


class CalcError(Exception):
    """Base class for domain errors raised by the library."""

    def __init__(self, message: str, **context):
        super().__init__(message)
        self.message = message
        self.context = context

    @property
    def code(self) -> str:
        return type(self).__name__


class NonUnit(CalcError):
    """Inversion of an element divisible by p."""


class SingularMatrix(CalcError):
    """No unit pivot available; the matrix is not invertible over the ring."""


class DimensionOdd(CalcError):
    """A form or basis was given with odd dimension."""


class NotSkew(CalcError):
    """Gram matrix fails skew-symmetry (gram + gram^T != 0)."""


class DegenerateForm(CalcError):
    """The form (or a required restriction of it) has non-unit determinant."""


class NotIsotropic(CalcError):
    """A subspace claimed isotropic has a nonzero pairing value."""


class ReductionMismatch(CalcError):
    """A lift constraint disagrees with the given mod-p data."""


class EmptyRelator(CalcError):
    """Relator analysis needs a nonempty word."""


class NotCandidate(CalcError):
    """Relator fails the Demushkin candidate checks."""


class ConstraintTooLarge(CalcError):
    """Constraint subspace dimension exceeds half the rank."""


class DistinguishedMissing(CalcError):
    """Nonzero torsion invariant but no distinguished functional supplied."""


class DistinguishedIncompatible(CalcError):
    """Distinguished functional fails the pairing/exponent compatibility."""


class NoWitness(CalcError):
    """Retraction witness construction does not apply to these inputs."""


class DomainError(CalcError):
    """Parameter outside the documented range."""


class ChainViolation(CalcError):
    """An audited inequality in a bound chain failed (implementation bug)."""


class TooLarge(CalcError):
    """Enumeration would exceed the allowed budget."""


class MalformedInput(Exception):
    """Structurally invalid input document (CLI exit code 2, not a domain error)."""

    def __init__(self, message: str, **context):
        super().__init__(message)
        self.message = message
        self.context = context

    @property
    def code(self) -> str:
        return type(self).__name__
