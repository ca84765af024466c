"""Exception hierarchy shared by all modules."""


class StateCompError(Exception):
    """Base class for every error raised by :mod:`statecomp`."""


class ValidationError(StateCompError, ValueError):
    """An input violates a documented invariant (shape, hermiticity, priors...)."""


class NotPositiveError(ValidationError):
    """An operator expected to be positive semidefinite has a negative eigenvalue."""


class DomainError(ValidationError):
    """A scalar parameter lies outside the open domain a closed form is defined on.

    Raised, for example, for ``cos_theta`` in ``{0, 1}`` which are the excluded
    trivial cases of the two-out-of-two problem.
    """


class InfeasibleError(StateCompError):
    """Unambiguous comparison is impossible for the given ensemble."""


class ReductionError(StateCompError):
    """The subspace reduction cannot be carried out cleanly.

    The ``overlap_dim`` attribute records the dimension of the offending
    intersection (or mismatched dimension) when known.
    """

    def __init__(self, msg, overlap_dim=None):
        super().__init__(msg)
        self.overlap_dim = overlap_dim


class PovmDefectError(StateCompError):
    """Outcome probabilities of a POVM do not sum to one."""
