"""Exception types shared across the package."""


class GroupMismatchError(ValueError):
    """Operands belong to different groups."""


class NotInvertibleError(ValueError):
    """A homomorphism is not an automorphism.

    Carries a ``witness`` attribute: a nonzero kernel element (as a residue
    tuple) when one could be extracted, else None.
    """

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class NotExtendableError(ValueError):
    """A vector does not extend to an automorphism mapping it to the first
    generator (it fails to generate a maximal-order direct summand)."""


class NotSymplecticError(ValueError):
    """A matrix over G x G^ is not a symplectic automorphism."""


class ReductionError(RuntimeError):
    """An internal step of the symplectic reduction violated its
    postcondition.  Indicates corrupted input or an implementation bug."""


class DegenerateFormError(ValueError):
    """A quadratic form required to be non-degenerate is degenerate."""


class PreconditionFailedError(ValueError):
    """A protocol precondition does not hold; ``detail`` names the witness."""

    def __init__(self, message, detail=None):
        super().__init__(message)
        self.detail = detail


class IncompleteTableError(ValueError):
    """A phase table does not cover the whole group."""


class BackendCapabilityError(RuntimeError):
    """The selected simulation backend cannot run the given circuit."""


class ResourceCapError(RuntimeError):
    """A configured resource cap (dense dimension, BFS size) was exceeded."""
