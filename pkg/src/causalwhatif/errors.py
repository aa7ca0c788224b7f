"""Exception types shared across the package.

Every error raised by the library derives from CausalWhatifError so callers
(CLI, service) can map library failures to exit code 2 / HTTP 400 uniformly.
"""


class CausalWhatifError(Exception):
    """Base class for all library errors."""


# -- dataset -----------------------------------------------------------------

class MissingValueError(CausalWhatifError):
    pass


class RaggedRowError(CausalWhatifError):
    pass


class UnknownOutcomeColumnError(CausalWhatifError):
    pass


class UnparseableNumericError(CausalWhatifError):
    pass


class NotContinuousError(CausalWhatifError):
    pass


class NameCollisionError(CausalWhatifError):
    pass


class UnknownColumnError(CausalWhatifError):
    pass


# -- citest ------------------------------------------------------------------

class NonDiscreteColumnError(CausalWhatifError):
    pass


class SampleTooSmallError(CausalWhatifError):
    pass


# -- discovery ---------------------------------------------------------------

class EmptyFeatureSetError(CausalWhatifError):
    pass


# -- scm ---------------------------------------------------------------------

class UnknownNodeError(CausalWhatifError):
    pass


class EmptySupportError(CausalWhatifError):
    pass


# -- models ------------------------------------------------------------------

class IncompatibleOutcomeError(CausalWhatifError):
    pass


class MissingFeatureError(CausalWhatifError):
    pass


class WrongOutcomeKindError(CausalWhatifError):
    pass


class SchemaVersionMismatchError(CausalWhatifError):
    pass


class CorruptFileError(CausalWhatifError):
    pass


class LeafDistributionUnavailableError(CausalWhatifError):
    pass


# -- whatif ------------------------------------------------------------------

class UnknownFeatureError(CausalWhatifError):
    pass


class MissingFeatureValueError(CausalWhatifError):
    pass
